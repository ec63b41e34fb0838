//! Reductions between promise problems over a template and (valued) minor conditions.

use super::mc::{McInstance, McVar, MinorCondition, VmcInstance};
use super::psi::{glue, PsiBuild};
use crate::algebra::{canonical_rows, FnSpace, Params, PayoffFormula, ValuedTemplate};
use crate::canonical::{
    crisp_canonical_formula, formula_from_weights, synthesize, Beta, CanonicalRequest, CanonicalResult, DualWitness, Family, Mode, Outcome,
};
use crate::error::{contract, precondition, Error, Result};
use crate::num::{fmt_q, Ext, Q};
use crate::polymorphism::MinionCache;
use crate::prelude::*;
use crate::search::{classify, feasible_assignments, Classification};
use num_traits::{Signed, Zero};

fn tuple_label(t: &ValuedTemplate, sym: usize, tuple: &[usize]) -> String {
    let decl = &t.a.sig.symbols[sym];
    let parts: Vec<&str> = tuple.iter().zip(&decl.sorts).map(|(&p, &s)| t.a.dom.label(t.a.dom.at(s, p))).collect();
    format!("({})", parts.join(","))
}

/// Crisp status: yes iff `Φ` is feasible in `A`, no iff it is infeasible in `B`.
pub fn classify_crisp(f: &PayoffFormula, t: &ValuedTemplate) -> Classification {
    Classification { yes: !feasible_assignments(f, &t.a, 1).is_empty(), no: feasible_assignments(f, &t.b, 1).is_empty() }
}

/// `U = I`, `V = X`, `D_i = feas φ_i^A`, `D_x = A_sort(x)`, `π_{i,z}(i) = x_i(z)`.
pub fn pcsp_to_mc(f: &PayoffFormula, t: &ValuedTemplate, k: usize) -> Result<McInstance> {
    f.validate(t.sig())?;
    let mut u = Vec::new();
    let mut conditions = Vec::new();
    for (i, c) in f.constraints.iter().enumerate() {
        let feas = t.a.feasible_tuples(c.sym);
        if feas.len() > k {
            return Err(Error::Config(format!("k = {k} is below |feas {}| = {}", t.a.sig.symbols[c.sym].name, feas.len())));
        }
        u.push(McVar { name: format!("c{i}"), domain: feas.iter().map(|a| tuple_label(t, c.sym, a)).collect() });
        for (z, &x) in c.args.iter().enumerate() {
            conditions.push(MinorCondition { u: i, v: x, pi: feas.iter().map(|a| a[z]).collect() });
        }
    }
    let mut v = Vec::new();
    for x in &f.vars {
        let elems = t.a.dom.elems_of(x.sort);
        if elems.len() > k {
            return Err(Error::Config(format!("k = {k} is below the size of sort {}", t.a.sig.sorts[x.sort])));
        }
        v.push(McVar { name: x.name.clone(), domain: elems.iter().map(|&e| String::from(t.a.dom.label(e))).collect() });
    }
    let mc = McInstance { k, u, v, conditions };
    mc.validate()?;
    Ok(mc)
}

/// `h'(i) = h∘x_i`, `h'(x) = h(x)` for an `A`-assignment `h` of `f` (as element ids).
pub fn mc_witness(f: &PayoffFormula, t: &ValuedTemplate, h: &[usize]) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut hu = Vec::new();
    for c in &f.constraints {
        let tuple: Vec<usize> = c.args.iter().map(|&x| t.a.dom.pos(h[x])).collect();
        hu.push(t.a.feasible_tuples(c.sym).iter().position(|a| *a == tuple)?);
    }
    Some((hu, h.iter().map(|&e| t.a.dom.pos(e)).collect()))
}

/// Crisp canonical formulas per variable, glued along the minor conditions.
pub fn mc_to_pcsp(mc: &McInstance, t: &ValuedTemplate, cache: &mut MinionCache) -> Result<PsiBuild> {
    let mut per_x = Vec::new();
    for x in mc.u.iter().chain(&mc.v) {
        per_x.push(crisp_canonical_formula(t, &*cache.mat(x.domain.len())?)?);
    }
    glue(t, mc, per_x)
}

/// The trivial reduction.
pub fn between_mcs(mc: &McInstance) -> McInstance {
    mc.clone()
}

/// Data behind the strong-promise certificate: `α_i = w_i(φ_i^A − c)`, `β_i = w_i(φ_i^B(f rows GM) − s)`.
/// Constant-factor instances use `c = s = 0` and only the fixed `κ` of the template.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongPromise {
    pub symbols: Vec<usize>,
    pub weights: Vec<Q>,
    pub c: Q,
    pub s: Q,
    /// `None`: every `κ ≥ 0`.
    pub kappa: Option<Q>,
}

impl StrongPromise {
    /// `Ω^out[β_u] ≥ κ Ω^in[α_u]` for one weighting of `M^{(D_u)}`.
    pub fn holds_for(&self, inst: &VmcInstance, u: usize, w: &crate::valued::Weighting, kappa: &Q) -> bool {
        let lhs = w.expect_out(|f| inst.beta[u].get(f).clone());
        lhs >= kappa * w.expect_in(&inst.alpha[u])
    }
}

/// Full `β_i` table over `M^{(D_i)}`, with values `w(φ^B(f rows GM) − shift)`.
fn output_payoff(t: &ValuedTemplate, cache: &mut MinionCache, sym: usize, w: &Q, shift: &Q) -> Result<Beta> {
    let feas = t.a.feasible_tuples(sym);
    let n = feas.len();
    let level = cache.level(n)?;
    let space = FnSpace::new(&t.a.dom, &t.b.dom, n)?;
    let rows = canonical_rows(&t.a, sym, &feas);
    let decl = &t.a.sig.symbols[sym];
    let mut beta = Beta::constant(Q::zero());
    for f in &level.functions {
        let img: Vec<usize> = (0..decl.arity()).map(|z| space.eval(f, decl.sorts[z], rows[z])).collect();
        let Ext::Fin(v) = t.b.value_pos(sym, &img) else {
            return contract("a feasibility polymorphism left feas(B)");
        };
        beta.set(f.clone(), w * (v - shift));
    }
    Ok(beta)
}

/// PCSP to VMC; for constant-factor templates `completeness` carries `c` and no shift is applied.
pub fn pcsp_to_vmc(
    f: &PayoffFormula,
    t: &ValuedTemplate,
    k: usize,
    cache: &mut MinionCache,
    completeness: Option<Q>,
) -> Result<(VmcInstance, StrongPromise)> {
    let mc = pcsp_to_mc(f, t, k)?;
    let (c, s, kappa) = match (&t.params, &completeness) {
        (Params::Gap { c, s }, None) => (c.clone(), s.clone(), None),
        (Params::ConstantFactor { kappa }, Some(_)) => (Q::zero(), Q::zero(), Some(kappa.clone())),
        (Params::Gap { .. }, Some(_)) => return contract("gap templates take no completeness"),
        (Params::ConstantFactor { .. }, None) => return contract("constant-factor instances need a completeness"),
    };
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    for con in &f.constraints {
        let a: Vec<Q> =
            t.a.feasible_tuples(con.sym)
                .iter()
                .map(|tu| &con.weight * (t.a.value_pos(con.sym, tu).finite().expect("feasible") - &c))
                .collect();
        alpha.push(a);
        beta.push(output_payoff(t, cache, con.sym, &con.weight, &s)?);
    }
    let cert = StrongPromise {
        symbols: f.constraints.iter().map(|c| c.sym).collect(),
        weights: f.constraints.iter().map(|c| c.weight.clone()).collect(),
        c,
        s,
        kappa,
    };
    Ok((VmcInstance { mc, alpha, beta, completeness }, cert))
}

/// Output of [`vmc_to_pcsp`].
#[derive(Clone, Debug)]
pub struct VmcReduction {
    pub formula: PayoffFormula,
    /// Present unless the fallback was returned.
    pub build: Option<PsiBuild>,
    /// `c' = c + Σ δ_u` for constant-factor instances.
    pub completeness: Option<Q>,
    /// The certificate that sent the reduction to the fallback.
    pub dual: Option<DualWitness>,
}

/// Memo of canonical syntheses, keyed by mode and families. Valid for a single template.
#[derive(Clone, Debug, Default)]
pub struct SynthesisMemo {
    map: BTreeMap<(u8, Vec<Family>), CanonicalResult>,
}

impl SynthesisMemo {
    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    fn run(&mut self, t: &ValuedTemplate, mode: Mode, families: Vec<Family>, cache: &mut MinionCache) -> Result<CanonicalResult> {
        let tag = match mode {
            Mode::Improved => 0,
            Mode::ConstantFactor => 1,
            _ => return contract("memo holds improved and constant-factor runs only"),
        };
        let key = (tag, families);
        if let Some(r) = self.map.get(&key) {
            return Ok(r.clone());
        }
        let req = CanonicalRequest { template: t, mode, families: key.1.clone() };
        let r = synthesize(&req, cache)?;
        self.map.insert(key, r.clone());
        Ok(r)
    }
}

fn families(inst: &VmcInstance) -> Vec<Family> {
    inst.mc
        .u
        .iter()
        .zip(inst.alpha.iter().zip(&inst.beta))
        .map(|(x, (a, b))| Family { arity: x.domain.len(), alpha: a.clone(), beta: b.clone() })
        .collect()
}

fn zero_formulas_for_v(inst: &VmcInstance, t: &ValuedTemplate, cache: &mut MinionCache) -> Result<Vec<PayoffFormula>> {
    inst.mc
        .v
        .iter()
        .map(|x| {
            let n = x.domain.len();
            let mat = cache.mat(n)?;
            let space = cache.space(n)?;
            Ok(formula_from_weights(t, &mat, &space, &vec![Q::zero(); mat.len()]))
        })
        .collect()
}

/// VMC to PCSP. `fallback` is returned (after checking it is a no-instance) when the
/// improved system is infeasible, which the promise allows only when the instance cannot be a yes-instance.
pub fn vmc_to_pcsp(
    inst: &VmcInstance,
    t: &ValuedTemplate,
    cache: &mut MinionCache,
    fallback: Option<&PayoffFormula>,
    memo: &mut SynthesisMemo,
) -> Result<VmcReduction> {
    inst.validate()?;
    match &t.params {
        Params::Gap { .. } => vmc_to_pcsp_gap(inst, t, cache, fallback, memo),
        Params::ConstantFactor { .. } => vmc_to_pcsp_cf(inst, t, cache, memo),
    }
}

fn vmc_to_pcsp_gap(
    inst: &VmcInstance,
    t: &ValuedTemplate,
    cache: &mut MinionCache,
    fallback: Option<&PayoffFormula>,
    memo: &mut SynthesisMemo,
) -> Result<VmcReduction> {
    if inst.completeness.is_some() {
        return contract("gap templates take VMC instances without completeness");
    }
    if inst.mc.u.is_empty() {
        // No U-variables: the system is empty and every choice of formulas works.
        let build = glue(t, &inst.mc, zero_formulas_for_v(inst, t, cache)?)?;
        return Ok(VmcReduction { formula: build.formula.clone(), build: Some(build), completeness: None, dual: None });
    }
    let res = memo.run(t, Mode::Improved, families(inst), cache)?;
    match res.outcome {
        Outcome::Formulas(out) => {
            let mut per_x = out.formulas;
            per_x.extend(zero_formulas_for_v(inst, t, cache)?);
            let build = glue(t, &inst.mc, per_x)?;
            Ok(VmcReduction { formula: build.formula.clone(), build: Some(build), completeness: None, dual: None })
        }
        Outcome::Dual(d) => {
            if d.kappa.is_positive() {
                return precondition(format!(
                    "promise fails: a {}-polymorphism family has nonnegative input and negative output payoff",
                    fmt_q(&d.kappa)
                ));
            }
            let best: Q = inst.alpha.iter().map(|a| a.iter().max().cloned().unwrap_or_default()).sum();
            if !best.is_negative() {
                return precondition("promise fails: a 0-polymorphism family refutes it while inputs can reach 0");
            }
            let Some(fb) = fallback else {
                return Err(Error::Config(String::from("the instance is not a yes-instance and no fallback no-instance was given")));
            };
            fb.validate(t.sig())?;
            if !classify(fb, t)?.no {
                return Err(Error::Config(String::from("the fallback formula is not a no-instance")));
            }
            Ok(VmcReduction { formula: fb.clone(), build: None, completeness: None, dual: Some(d) })
        }
    }
}

fn vmc_to_pcsp_cf(inst: &VmcInstance, t: &ValuedTemplate, cache: &mut MinionCache, memo: &mut SynthesisMemo) -> Result<VmcReduction> {
    let Some(c) = &inst.completeness else {
        return contract("constant-factor VMC instances carry a completeness");
    };
    let mut per_x = Vec::new();
    let mut shift = Q::zero();
    for (u, fam) in families(inst).into_iter().enumerate() {
        let res = memo.run(t, Mode::ConstantFactor, vec![fam], cache)?;
        match res.outcome {
            Outcome::Formulas(mut out) => {
                shift += out.delta.take().unwrap_or_default();
                per_x.push(out.formulas.remove(0));
            }
            Outcome::Dual(_) => {
                return precondition(format!("promise fails at {}: a weighting has output below kappa times input", inst.mc.u[u].name));
            }
        }
    }
    per_x.extend(zero_formulas_for_v(inst, t, cache)?);
    let build = glue(t, &inst.mc, per_x)?;
    Ok(VmcReduction { formula: build.formula.clone(), build: Some(build), completeness: Some(c + shift), dual: None })
}
