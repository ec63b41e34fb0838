use crate::algebra::{PayoffFormula, ValuedTemplate};
use crate::canonical::{synthesize, Beta, CanonicalRequest, Family, Mode, Outcome};
use crate::error::Result;
use crate::num::Q;
use crate::polymorphism::MinionCache;
use crate::prelude::*;
use crate::valued::Weighting;
use crate::Limits;
use num_traits::One;

/// Verdict on whether yes- and no-instances of a gap template are disjoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TemplateVerdict {
    /// A unary `κ`-polymorphism.
    Valid { kappa: Q, weighting: Weighting },
    /// A formula that is both a yes- and a no-instance (variables `A^1`).
    Invalid { formula: PayoffFormula },
}

/// Runs the baby canonical LP with `N = {n}`, `α ≡ c`, `β ≡ s - 1`.
pub fn check_template(t: &ValuedTemplate, limits: &Limits) -> Result<TemplateVerdict> {
    let (c, s) = t.cs()?;
    let mut cache = MinionCache::new(&t.a, &t.b, *limits);
    let req = CanonicalRequest {
        template: t,
        mode: Mode::Baby,
        families: vec![Family { arity: 1, alpha: vec![c.clone()], beta: Beta::constant(s - Q::one()) }],
    };
    let res = synthesize(&req, &mut cache)?;
    Ok(match res.outcome {
        Outcome::Dual(mut d) => TemplateVerdict::Valid { kappa: d.kappa, weighting: d.weightings.remove(0) },
        Outcome::Formulas(mut f) => TemplateVerdict::Invalid { formula: f.formulas.remove(0) },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{q, qi};
    use crate::search::{brute_force_max, classify};
    use crate::zoo;

    fn valid(t: &ValuedTemplate) -> bool {
        matches!(check_template(t, &Limits::default()).unwrap(), TemplateVerdict::Valid { .. })
    }

    #[test]
    fn lin2_thresholds() {
        assert!(valid(&zoo::klin2(3, q(7, 8), q(5, 8)).unwrap()));
        assert!(valid(&zoo::klin2(3, q(3, 4), q(3, 4)).unwrap()));
        let bad = zoo::klin2(3, q(1, 2), q(3, 4)).unwrap();
        match check_template(&bad, &Limits::default()).unwrap() {
            TemplateVerdict::Invalid { formula } => {
                let cl = classify(&formula, &bad).unwrap();
                assert!(cl.yes && cl.no);
                let w = formula.weight();
                assert!(brute_force_max(&formula, &bad.a).ge_q(&(q(1, 2) * &w)));
                assert!(brute_force_max(&formula, &bad.b).lt_q(&(q(3, 4) * &w)));
            }
            v => panic!("expected a counter-formula, got {v:?}"),
        }
    }

    #[test]
    fn covers_and_independent_sets() {
        assert!(valid(&zoo::vertex_cover(qi(1)).unwrap()));
        assert!(valid(&zoo::independent_set(q(1, 2)).unwrap()));
    }
}
