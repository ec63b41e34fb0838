//! Primitive positive definitions, crisp and valued.

use crate::algebra::{canonical_rows, for_each_tuple, FnSpace, NaryFunction, PayoffFormula, ValuedStructure, ValuedTemplate};
use crate::canonical::{crisp_canonical_formula, synthesize, Beta, CanonicalRequest, DualWitness, Family, Mode, Outcome};
use crate::error::{contract, Result};
use crate::num::{Ext, Q};
use crate::polymorphism::MinionCache;
use crate::prelude::*;

/// `ψ(a') = max { Φ(a) : aι = a' }` (valued) or `∃a. aι = a' ∧ Φ(a)` (crisp).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PPDefinition {
    pub psi: usize,
    pub formula: PayoffFormula,
    pub iota: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PpMode {
    Crisp,
    /// Thresholds `c, s` of the source and `c', s'` of the target.
    Valued,
}

/// Best value of `Φ^S` for each tuple `aι`, keyed by position tuples of `ψ`'s arity.
fn defined(f: &PayoffFormula, s: &ValuedStructure, iota: &[usize]) -> BTreeMap<Vec<usize>, Ext> {
    let radix: Vec<usize> = f.vars.iter().map(|v| s.dom.sort_size(v.sort)).collect();
    let mut out: BTreeMap<Vec<usize>, Ext> = BTreeMap::new();
    let mut h = vec![0usize; f.vars.len()];
    for_each_tuple(&radix, |t| {
        for (x, &p) in t.iter().enumerate() {
            h[x] = s.dom.elems_of(f.vars[x].sort)[p];
        }
        let v = f.evaluate(s, &h);
        let key: Vec<usize> = iota.iter().map(|&x| t[x]).collect();
        match out.get_mut(&key) {
            Some(old) if *old >= v => {}
            Some(old) => *old = v,
            None => {
                out.insert(key, v);
            }
        }
    });
    out
}

fn check_shape(d: &PPDefinition, source: &ValuedTemplate, target: &ValuedTemplate) -> Result<()> {
    d.formula.validate(source.sig())?;
    let decl = target.sig().symbols.get(d.psi).ok_or_else(|| crate::Error::Contract(String::from("unknown target symbol")))?;
    if d.iota.len() != decl.arity() {
        return contract(format!("iota must be total on the coordinates of {}", decl.name));
    }
    if source.a.dom.sort_sizes() != target.a.dom.sort_sizes() || source.b.dom.sort_sizes() != target.b.dom.sort_sizes() {
        return contract("source and target templates must share their domains");
    }
    for (z, &x) in d.iota.iter().enumerate() {
        if x >= d.formula.vars.len() || d.formula.vars[x].sort != decl.sorts[z] {
            return contract(format!("iota sends coordinate {} to an ill-sorted variable", decl.coords[z]));
        }
    }
    Ok(())
}

/// Brute-force check of both items of the definition over `A^X` and `B^X`.
pub fn verify_pp_definition(d: &PPDefinition, source: &ValuedTemplate, target: &ValuedTemplate, mode: PpMode) -> Result<bool> {
    check_shape(d, source, target)?;
    let da = defined(&d.formula, &source.a, &d.iota);
    let db = defined(&d.formula, &source.b, &d.iota);
    let radix = target.a.radix(d.psi);
    let mut ok = true;
    let w = d.formula.weight();
    let thresholds = match mode {
        PpMode::Crisp => None,
        PpMode::Valued => {
            let (c, s) = source.cs()?;
            let (c2, s2) = target.cs()?;
            Some((c * &w, s * &w, c2.clone(), s2.clone()))
        }
    };
    for_each_tuple(&radix, |t| {
        let pa = target.a.value_pos(d.psi, t);
        let pb = target.b.value_pos(d.psi, t);
        let ba = da.get(t).cloned().unwrap_or(Ext::NegInf);
        let bb = db.get(t).cloned().unwrap_or(Ext::NegInf);
        ok &= match &thresholds {
            None => (!pa.is_finite() || ba.is_finite()) && (!bb.is_finite() || pb.is_finite()),
            Some((cw, sw, c2, s2)) => pa.sub_q(c2) <= ba.sub_q(cw) && pb.sub_q(s2) >= bb.sub_q(sw),
        };
    });
    Ok(ok)
}

/// Why no definition was produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonDefinability {
    /// A polymorphism of the source that does not preserve `ψ`.
    Escapes(NaryFunction),
    Dual(DualWitness),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PpSynthesis {
    Defined(PPDefinition),
    NotDefinable(NonDefinability),
}

impl PpSynthesis {
    pub fn definition(&self) -> Option<&PPDefinition> {
        match self {
            PpSynthesis::Defined(d) => Some(d),
            PpSynthesis::NotDefinable(_) => None,
        }
    }
}

/// Canonical construction with `N = feas ψ^{A'}` and `ι = rows GM(N)`, verified before it is returned.
pub fn synthesize_pp_definition(
    psi: usize,
    source: &ValuedTemplate,
    target: &ValuedTemplate,
    mode: PpMode,
    cache: &mut MinionCache,
) -> Result<PpSynthesis> {
    let feas = target.a.feasible_tuples(psi);
    let n = feas.len();
    let space = FnSpace::new(&source.a.dom, &source.b.dom, n)?;
    let decl = &target.sig().symbols[psi];
    let rows = canonical_rows(&target.a, psi, &feas);
    let iota: Vec<usize> = (0..decl.arity()).map(|z| space.cell(decl.sorts[z], rows[z])).collect();
    let level = cache.level(n)?;
    let mut beta = Beta::constant(Q::default());
    for f in &level.functions {
        let img: Vec<usize> = (0..decl.arity()).map(|z| space.eval(f, decl.sorts[z], rows[z])).collect();
        match target.b.value_pos(psi, &img) {
            Ext::NegInf => return Ok(PpSynthesis::NotDefinable(NonDefinability::Escapes(f.clone()))),
            Ext::Fin(v) => beta.set(f.clone(), v.clone()),
        }
    }
    let formula = match mode {
        PpMode::Crisp => crisp_canonical_formula(source, &*cache.mat(n)?)?,
        PpMode::Valued => {
            let (c2, s2) = target.cs()?;
            let alpha = feas.iter().map(|a| target.a.value_pos(psi, a).finite().cloned().expect("feasible")).collect();
            let req = CanonicalRequest {
                template: source,
                mode: Mode::Thresholds { c: c2.clone(), s: s2.clone() },
                families: vec![Family { arity: n, alpha, beta }],
            };
            match synthesize(&req, cache)?.outcome {
                Outcome::Formulas(mut out) => out.formulas.remove(0),
                Outcome::Dual(d) => return Ok(PpSynthesis::NotDefinable(NonDefinability::Dual(d))),
            }
        }
    };
    let d = PPDefinition { psi, formula, iota };
    if !verify_pp_definition(&d, source, target, mode)? {
        return contract("canonical pp-definition failed its own verification");
    }
    Ok(PpSynthesis::Defined(d))
}
