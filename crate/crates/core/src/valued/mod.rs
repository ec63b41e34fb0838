//! Weightings, κ-polymorphisms and plurimorphisms.

mod pluri;
mod template;

pub use pluri::{check_plurimorphism, polymorphism_slope, sampled_mixture_violation, segment_hits_region, Mixture, PluriReport, Point};
pub use template::{check_template, TemplateVerdict};

use crate::algebra::{minor, FnSpace, Mat, MatPair, NaryFunction, ValuedTemplate};
use crate::error::{contract, Result};
use crate::num::{fmt_q, Ext, Q};
use crate::polymorphism::{missing_minors, MinionCache};
use crate::prelude::*;
use num_traits::{One, Signed, Zero};

/// Checks nonnegative entries summing to one.
pub fn check_distribution<'a>(probs: impl IntoIterator<Item = &'a Q>, what: &str) -> Result<()> {
    let mut total = Q::zero();
    for p in probs {
        if p.is_negative() {
            return contract(format!("{what}: negative probability {}", fmt_q(p)));
        }
        total += p;
    }
    if !total.is_one() {
        return contract(format!("{what}: probabilities sum to {}", fmt_q(&total)));
    }
    Ok(())
}

/// `Ω = (Ω^in, Ω^out)` with `Ω^in` on `N = {0..arity}` and `Ω^out` on `N`-ary functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weighting {
    pub arity: usize,
    pub input: Vec<Q>,
    pub output: BTreeMap<NaryFunction, Q>,
}

impl Weighting {
    pub fn new(input: Vec<Q>, output: BTreeMap<NaryFunction, Q>) -> Result<Weighting> {
        let w = Weighting { arity: input.len(), input, output };
        w.check_distributions()?;
        Ok(w)
    }

    pub fn check_distributions(&self) -> Result<()> {
        if self.input.len() != self.arity {
            return contract("input distribution length differs from the arity");
        }
        check_distribution(&self.input, "input distribution")?;
        check_distribution(self.output.values(), "output distribution")?;
        if self.output.keys().any(|f| f.arity != self.arity) {
            return contract("output function of the wrong arity");
        }
        Ok(())
    }

    /// Distributions fine and every output function is a feasibility polymorphism.
    pub fn validate(&self, cache: &mut MinionCache) -> Result<()> {
        self.check_distributions()?;
        let level = cache.level(self.arity)?;
        if let Some(f) = self.output.keys().find(|f| !level.contains(f)) {
            return contract(format!("output function {:?} is not a feasibility polymorphism", f.table));
        }
        Ok(())
    }

    /// Point mass on a single function, uniform-free input weights.
    pub fn dirac(input: Vec<Q>, f: NaryFunction) -> Result<Weighting> {
        Weighting::new(input, [(f, Q::one())].into_iter().collect())
    }

    /// `Ω^in[α] = E_{n ∼ Ω^in} α(n)`.
    pub fn expect_in(&self, alpha: &[Q]) -> Q {
        self.input.iter().zip(alpha).filter(|(p, _)| !p.is_zero()).map(|(p, a)| p * a).sum()
    }

    /// `Ω^out[β] = E_{f ∼ Ω^out} β(f)`.
    pub fn expect_out(&self, beta: impl Fn(&NaryFunction) -> Q) -> Q {
        self.output.iter().map(|(f, p)| p * beta(f)).sum()
    }
}

/// `(Ω^in[φ, M], Ω^out[φ, M])`.
pub fn payoff_point(t: &ValuedTemplate, space: &FnSpace, mat: &Mat, w: &Weighting, p: &MatPair) -> Result<(Q, Q)> {
    let mut x = Q::zero();
    for (n, pr) in w.input.iter().enumerate() {
        if pr.is_zero() {
            continue;
        }
        match mat.col_value(&t.a, p, n) {
            Ext::Fin(v) => x += v * pr,
            Ext::NegInf => return contract("infeasible column in a relation-matrix pair"),
        }
    }
    let mut y = Q::zero();
    for (f, pr) in &w.output {
        match mat.image_value(&t.b, space, f, p) {
            Ext::Fin(v) => y += v * pr,
            Ext::NegInf => return contract("output function is not a feasibility polymorphism"),
        }
    }
    Ok((x, y))
}

/// All payoff points of `w` over `Mat(A, N)`.
pub fn payoff_points(t: &ValuedTemplate, cache: &mut MinionCache, w: &Weighting) -> Result<Vec<(Q, Q)>> {
    w.validate(cache)?;
    let mat = cache.mat(w.arity)?;
    let space = cache.space(w.arity)?;
    mat.pairs.iter().map(|p| payoff_point(t, &space, &mat, w, p)).collect()
}

/// Gap: `Ω^out - s >= κ (Ω^in - c)` on every pair. Constant factor: `Ω^out >= κ Ω^in` (κ from the template).
pub fn is_kappa_polymorphism(t: &ValuedTemplate, cache: &mut MinionCache, w: &Weighting, kappa: &Q) -> Result<bool> {
    let pts = payoff_points(t, cache, w)?;
    Ok(match &t.params {
        crate::algebra::Params::Gap { c, s } => pts.iter().all(|(x, y)| y - s >= kappa * (x - c)),
        crate::algebra::Params::ConstantFactor { kappa: k } => pts.iter().all(|(x, y)| *y >= k * x),
    })
}

/// `(π(Ω^in), f ↦ f^{(π)})` for `π: [n] → [m]`.
pub fn weighting_minor(w: &Weighting, pi: &[usize], src: &FnSpace, dst: &FnSpace) -> Result<Weighting> {
    if pi.len() != w.arity || dst.arity == 0 && w.arity > 0 {
        return contract("minor map does not fit the weighting");
    }
    let mut input = vec![Q::zero(); dst.arity];
    for (i, p) in w.input.iter().enumerate() {
        input[pi[i]] += p;
    }
    let mut output: BTreeMap<NaryFunction, Q> = BTreeMap::new();
    for (f, p) in &w.output {
        *output.entry(minor(f, src, pi, dst)?).or_insert_with(Q::zero) += p;
    }
    Ok(Weighting { arity: dst.arity, input, output })
}

/// Union of output supports per arity, with the minors needed for closure up to arity `k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SupportMinion {
    pub levels: BTreeMap<usize, BTreeSet<NaryFunction>>,
    /// Minors that were not in any support.
    pub added: Vec<NaryFunction>,
}

pub fn support_minion(family: &[Weighting], cache: &MinionCache, k: usize) -> Result<SupportMinion> {
    let mut sm = SupportMinion::default();
    for w in family {
        for f in w.output.keys() {
            sm.levels.entry(f.arity).or_default().insert(f.clone());
        }
    }
    let snapshot = sm.levels.clone();
    let mut added = BTreeSet::new();
    for (n, fs) in &snapshot {
        let space = cache.space(*n)?;
        for f in fs {
            let has = |g: &NaryFunction| snapshot.get(&g.arity).is_some_and(|s| s.contains(g));
            for g in missing_minors(f, &space, k, &has, (&cache.a.dom, &cache.b.dom))? {
                added.insert(g);
            }
        }
    }
    for g in &added {
        sm.levels.entry(g.arity).or_default().insert(g.clone());
    }
    sm.added = added.into_iter().collect();
    Ok(sm)
}
