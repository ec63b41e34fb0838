//! Canonical payoff formulas as exact LP instances.

use crate::algebra::{Constraint, Domain, FnSpace, Mat, NaryFunction, Params, PayoffFormula, ValuedStructure, ValuedTemplate, Var};
use crate::error::{contract, precondition, Error, Result};
use crate::lp::{self, LpResult, LpSystem};
use crate::num::{fmt_q, Ext, Q};
use crate::polymorphism::{MinionCache, MinionLevel};
use crate::prelude::*;
use crate::valued::{is_kappa_polymorphism, Weighting};
use alloc::sync::Arc;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    Baby,
    /// Baby system with `c', s'` on the right-hand side.
    Thresholds {
        c: Q,
        s: Q,
    },
    Improved,
    /// Constant-factor system with a shift; `κ` comes from the template.
    ConstantFactor,
}

/// A function `M^{(N)} → Q` given by exceptions to a default.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Beta {
    pub default: Q,
    pub entries: BTreeMap<NaryFunction, Q>,
}

impl Beta {
    pub fn constant(v: Q) -> Beta {
        Beta { default: v, entries: BTreeMap::new() }
    }

    pub fn get(&self, f: &NaryFunction) -> &Q {
        self.entries.get(f).unwrap_or(&self.default)
    }

    /// Sets `f ↦ v`, dropping entries equal to the default.
    pub fn set(&mut self, f: NaryFunction, v: Q) {
        if v == self.default {
            self.entries.remove(&f);
        } else {
            self.entries.insert(f, v);
        }
    }

    /// Largest value over the given functions.
    pub fn max_over<'a>(&self, fs: impl IntoIterator<Item = &'a NaryFunction>) -> Option<Q> {
        fs.into_iter().map(|f| self.get(f).clone()).max()
    }
}

/// One family member `(N_j, α_j, β_j)`, with `N_j = {0..arity}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Family {
    pub arity: usize,
    pub alpha: Vec<Q>,
    pub beta: Beta,
}

#[derive(Clone, Debug)]
pub struct CanonicalRequest<'a> {
    pub template: &'a ValuedTemplate,
    pub mode: Mode,
    pub families: Vec<Family>,
}

/// Formulas over `A^{N_j}` (variables as in [`canonical_vars`]) and the mode's extra unknowns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalFormulas {
    pub formulas: Vec<PayoffFormula>,
    /// Improved mode only.
    pub gamma: Option<Q>,
    pub delta_in: Vec<Q>,
    pub delta_out: Vec<Q>,
    /// Constant-factor shift.
    pub delta: Option<Q>,
}

/// A `κ`-polymorphism family violating the implication, decoded from a Farkas certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualWitness {
    pub kappa: Q,
    pub weightings: Vec<Weighting>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Formulas(CanonicalFormulas),
    Dual(DualWitness),
}

#[derive(Clone, Debug)]
pub struct CanonicalResult {
    pub outcome: Outcome,
    pub lp: LpSystem,
    pub solution: LpResult,
}

/// Variables `A^N`: for each sort, the `N`-tuples in rank order, matching function cells.
pub fn canonical_vars(a: &Domain, sorts: &[String], n: usize) -> Vec<Var> {
    let mut vars = Vec::new();
    for (t, name) in sorts.iter().enumerate() {
        let k = a.sort_size(t);
        let cells = k.pow(n as u32);
        let elems = a.elems_of(t);
        for r in 0..cells {
            let mut rr = r;
            let mut label = String::new();
            for i in 0..n {
                if i > 0 {
                    label.push(',');
                }
                label.push_str(a.label(elems[rr % k]));
                rr /= k;
            }
            vars.push(Var { name: format!("{name}:({label})"), sort: t });
        }
    }
    vars
}

/// The projection `proj_n: A^N → A` as an assignment of [`canonical_vars`].
pub fn projection_assignment(a: &Domain, n_arity: usize, n: usize) -> Vec<usize> {
    let mut h = Vec::new();
    for t in 0..a.num_sorts() {
        let k = a.sort_size(t);
        for r in 0..k.pow(n_arity as u32) {
            h.push(a.at(t, (r / k.pow(n as u32)) % k));
        }
    }
    h
}

/// An `N`-ary function as an assignment of [`canonical_vars`] into `B`.
pub fn function_assignment(b: &Domain, space: &FnSpace, f: &NaryFunction) -> Vec<usize> {
    let mut h = Vec::with_capacity(space.cells);
    for t in 0..space.num_sorts() {
        for r in 0..space.sort_cells(t) {
            h.push(b.at(t, space.eval(f, t, r)));
        }
    }
    h
}

/// Inverse of [`function_assignment`].
pub fn assignment_function(b: &Domain, space: &FnSpace, h: &[usize]) -> NaryFunction {
    NaryFunction { arity: space.arity, table: h.iter().map(|&e| b.pos(e) as u32).collect() }
}

/// Zero-weight conjuncts are dropped only when they cannot change feasibility.
fn prunable(t: &ValuedTemplate, sym: usize) -> bool {
    t.a.is_total(sym) && t.b.is_total(sym)
}

/// `Σ_{(φ,M)} w_{φ,M} φ(rows M)` over `A^N`.
pub fn formula_from_weights(t: &ValuedTemplate, mat: &Mat, space: &FnSpace, w: &[Q]) -> PayoffFormula {
    let vars = canonical_vars(&t.a.dom, &t.a.sig.sorts, mat.arity);
    let mut constraints = Vec::new();
    for (p, wp) in mat.pairs.iter().zip(w) {
        if wp.is_zero() && prunable(t, p.sym) {
            continue;
        }
        let decl = &t.a.sig.symbols[p.sym];
        let args = (0..decl.arity()).map(|z| space.cell(decl.sorts[z], p.rows[z])).collect();
        constraints.push(Constraint { weight: wp.clone(), sym: p.sym, args });
    }
    PayoffFormula { vars, constraints }
}

/// The crisp canonical formula: every pair of `Mat(A, N)` with weight one.
pub fn crisp_canonical_formula(t: &ValuedTemplate, mat: &Mat) -> Result<PayoffFormula> {
    let space = FnSpace::new(&t.a.dom, &t.b.dom, mat.arity)?;
    let w = vec![Q::one(); mat.len()];
    let vars = canonical_vars(&t.a.dom, &t.a.sig.sorts, mat.arity);
    let mut f = formula_from_weights(t, mat, &space, &w);
    f.vars = vars;
    Ok(f)
}

fn finite(v: &Ext) -> Result<&Q> {
    v.finite().ok_or_else(|| Error::Contract(String::from("unexpected -inf coefficient")))
}

fn pair_label(mat: &Mat, j: usize, k: usize) -> String {
    let p = &mat.pairs[k];
    let cols: Vec<String> = p.cols.iter().map(|c| c.to_string()).collect();
    format!("w[{j}][{}:{}]", p.sym, cols.join(","))
}

struct Ctx {
    mat: Arc<Mat>,
    level: Arc<MinionLevel>,
    space: FnSpace,
}

fn contexts(req: &CanonicalRequest, cache: &mut MinionCache) -> Result<Vec<Ctx>> {
    req.families
        .iter()
        .map(|fam| {
            let ctx = Ctx { mat: cache.mat(fam.arity)?, level: cache.level(fam.arity)?, space: cache.space(fam.arity)? };
            if fam.alpha.len() != fam.arity {
                return contract("alpha must be total on N");
            }
            Ok(ctx)
        })
        .collect()
}

fn check_request(req: &CanonicalRequest) -> Result<()> {
    let t = req.template;
    match (&req.mode, &t.params) {
        (Mode::ConstantFactor, Params::ConstantFactor { .. }) => {}
        (Mode::ConstantFactor, _) => return contract("constant-factor mode needs a constant-factor template"),
        (_, Params::ConstantFactor { .. }) => return contract("gap modes need a gap template"),
        _ => {}
    }
    if !matches!(req.mode, Mode::Improved) && req.families.len() != 1 {
        return contract("this mode takes exactly one family");
    }
    if req.families.is_empty() {
        return contract("at least one family is required");
    }
    let bound = match &req.mode {
        Mode::Baby => Some(t.cs()?.0.clone()),
        Mode::Thresholds { c, .. } => Some(c.clone()),
        _ => None,
    };
    if let Some(b) = bound {
        let (c, _) = t.cs()?;
        if t.a.bounded_by(c) {
            if let Some(v) = req.families[0].alpha.iter().find(|v| **v > b) {
                return precondition(format!("A <= {} but alpha takes the value {} above {}", fmt_q(c), fmt_q(v), fmt_q(&b)));
            }
        }
    }
    Ok(())
}

/// Assembles the LP of the requested mode (exposed for `--dump-lp`).
pub fn build_system(req: &CanonicalRequest, cache: &mut MinionCache) -> Result<LpSystem> {
    check_request(req)?;
    let ctxs = contexts(req, cache)?;
    assemble(req, &ctxs, cache.limits.max_lp_rows)
}

fn assemble(req: &CanonicalRequest, ctxs: &[Ctx], max_rows: usize) -> Result<LpSystem> {
    let t = req.template;
    let rows: usize = ctxs.iter().zip(&req.families).map(|(c, f)| f.arity + c.level.len()).sum::<usize>()
        + if matches!(req.mode, Mode::Improved) { 2 } else { 0 };
    if rows > max_rows {
        return Err(Error::ResourceLimit {
            what: String::from("canonical LP rows"),
            needed: format!("{rows}"),
            limit: format!("{max_rows}"),
        });
    }
    let mut labels = Vec::new();
    let mut w_start = Vec::new();
    for (j, c) in ctxs.iter().enumerate() {
        w_start.push(labels.len());
        labels.extend((0..c.mat.len()).map(|k| pair_label(&c.mat, j, k)));
    }
    let extra = labels.len();
    let nj = ctxs.len();
    match req.mode {
        Mode::Improved => {
            for j in 0..nj {
                labels.push(format!("din+[{j}]"));
                labels.push(format!("din-[{j}]"));
            }
            for j in 0..nj {
                labels.push(format!("dout+[{j}]"));
                labels.push(format!("dout-[{j}]"));
            }
            labels.push(String::from("gamma"));
        }
        Mode::ConstantFactor => {
            labels.push(String::from("delta+"));
            labels.push(String::from("delta-"));
        }
        _ => {}
    }
    let width = labels.len();
    let din = |j: usize| extra + 2 * j;
    let dout = |j: usize| extra + 2 * nj + 2 * j;
    let gamma = extra + 4 * nj;
    let mut sys = LpSystem::new(labels);
    let (c, s) = match &t.params {
        Params::Gap { c, s } => (c.clone(), s.clone()),
        Params::ConstantFactor { .. } => (Q::zero(), Q::zero()),
    };
    let (rc, rs) = match &req.mode {
        Mode::Thresholds { c, s } => (c.clone(), s.clone()),
        _ => (c.clone(), s.clone()),
    };
    let kappa = t.kappa().ok().cloned().unwrap_or_else(Q::zero);
    for (j, (ctx, fam)) in ctxs.iter().zip(&req.families).enumerate() {
        for n in 0..fam.arity {
            let mut row = vec![Q::zero(); width];
            for (k, p) in ctx.mat.pairs.iter().enumerate() {
                let a = finite(ctx.mat.col_value(&t.a, p, n))?;
                row[w_start[j] + k] = c.clone() - a;
            }
            let rhs = match req.mode {
                Mode::Baby | Mode::Thresholds { .. } => &rc - &fam.alpha[n],
                Mode::Improved => {
                    row[din(j)] = Q::one();
                    row[din(j) + 1] = -Q::one();
                    row[gamma] = fam.alpha[n].clone();
                    Q::zero()
                }
                Mode::ConstantFactor => {
                    row[extra] = Q::one();
                    row[extra + 1] = -Q::one();
                    -fam.alpha[n].clone()
                }
            };
            sys.push_row(format!("in[{j}][{n}]"), row, rhs);
        }
        for (i, f) in ctx.level.functions.iter().enumerate() {
            let mut row = vec![Q::zero(); width];
            for (k, p) in ctx.mat.pairs.iter().enumerate() {
                let b = finite(ctx.mat.image_value(&t.b, &ctx.space, f, p))?;
                row[w_start[j] + k] = b - &s;
            }
            let beta = fam.beta.get(f).clone();
            let rhs = match req.mode {
                Mode::Baby | Mode::Thresholds { .. } => beta - &rs,
                Mode::Improved => {
                    row[dout(j)] = Q::one();
                    row[dout(j) + 1] = -Q::one();
                    beta
                }
                Mode::ConstantFactor => {
                    row[extra] = -kappa.clone();
                    row[extra + 1] = kappa.clone();
                    beta
                }
            };
            sys.push_row(format!("out[{j}][{i}]"), row, rhs);
        }
    }
    if matches!(req.mode, Mode::Improved) {
        let mut rin = vec![Q::zero(); width];
        let mut rout = vec![Q::zero(); width];
        for j in 0..nj {
            rin[din(j)] = -Q::one();
            rin[din(j) + 1] = Q::one();
            rout[dout(j)] = -Q::one();
            rout[dout(j) + 1] = Q::one();
        }
        sys.push_row(String::from("sum-in"), rin, Q::zero());
        sys.push_row(String::from("sum-out"), rout, Q::zero());
    }
    Ok(sys)
}

pub fn synthesize(req: &CanonicalRequest, cache: &mut MinionCache) -> Result<CanonicalResult> {
    check_request(req)?;
    let ctxs = contexts(req, cache)?;
    let sys = assemble(req, &ctxs, cache.limits.max_lp_rows)?;
    let solution = lp::solve_verified(&sys)?;
    let outcome = match &solution {
        LpResult::Feasible { y } => Outcome::Formulas(decode_formulas(req, &ctxs, y)),
        LpResult::Infeasible { x } => Outcome::Dual(decode_dual(req, &ctxs, x)?),
    };
    let res = CanonicalResult { outcome, lp: sys, solution };
    debug_assert!(verify_canonical(req, &res, cache).unwrap_or(false), "canonical result failed verification");
    Ok(res)
}

fn decode_formulas(req: &CanonicalRequest, ctxs: &[Ctx], y: &[Q]) -> CanonicalFormulas {
    let t = req.template;
    let mut start = 0;
    let mut formulas = Vec::new();
    for ctx in ctxs {
        let w = &y[start..start + ctx.mat.len()];
        formulas.push(formula_from_weights(t, &ctx.mat, &ctx.space, w));
        start += ctx.mat.len();
    }
    let nj = ctxs.len();
    let mut out = CanonicalFormulas { formulas, gamma: None, delta_in: Vec::new(), delta_out: Vec::new(), delta: None };
    match req.mode {
        Mode::Improved => {
            for j in 0..nj {
                out.delta_in.push(&y[start + 2 * j] - &y[start + 2 * j + 1]);
                out.delta_out.push(&y[start + 2 * nj + 2 * j] - &y[start + 2 * nj + 2 * j + 1]);
            }
            out.gamma = Some(y[start + 4 * nj].clone());
        }
        Mode::ConstantFactor => out.delta = Some(&y[start] - &y[start + 1]),
        _ => {}
    }
    out
}

fn normalise(v: &[Q], total: &Q) -> Vec<Q> {
    if total.is_zero() {
        let k = Q::from_integer((v.len() as i64).into());
        return vec![Q::one() / k; v.len()];
    }
    v.iter().map(|x| x / total).collect()
}

fn decode_dual(req: &CanonicalRequest, ctxs: &[Ctx], x: &[Q]) -> Result<DualWitness> {
    let mut off = 0;
    let mut parts = Vec::new();
    for (ctx, fam) in ctxs.iter().zip(&req.families) {
        let xin = &x[off..off + fam.arity];
        off += fam.arity;
        let xout = &x[off..off + ctx.level.len()];
        off += ctx.level.len();
        parts.push((xin, xout));
    }
    let (theta_in, theta_out) = match req.mode {
        Mode::Improved => (x[off].clone(), x[off + 1].clone()),
        _ => (parts[0].0.iter().sum::<Q>(), parts[0].1.iter().sum::<Q>()),
    };
    if !theta_out.is_positive() {
        // Ruled out by the side condition (baby) or by the shift columns (other modes).
        return contract("degenerate Farkas certificate with zero output mass");
    }
    let kappa = match req.mode {
        Mode::ConstantFactor => req.template.kappa()?.clone(),
        _ => &theta_in / &theta_out,
    };
    let mut weightings = Vec::new();
    for ((xin, xout), ctx) in parts.iter().zip(ctxs) {
        let input = normalise(xin, &theta_in);
        let mut output = BTreeMap::new();
        for (f, v) in ctx.level.functions.iter().zip(xout.iter()) {
            if !v.is_zero() {
                output.insert(f.clone(), v / &theta_out);
            }
        }
        weightings.push(Weighting::new(input, output)?);
    }
    Ok(DualWitness { kappa, weightings })
}

fn max_feasible(level: &MinionLevel) -> usize {
    level.len() + 1
}

fn check_feasible_set(t: &ValuedTemplate, f: &PayoffFormula, level: &MinionLevel) -> bool {
    let found = crate::search::feasible_assignments(f, &t.b, max_feasible(level));
    let set: BTreeSet<NaryFunction> = found.iter().map(|h| assignment_function(&t.b.dom, &level.space, h)).collect();
    set.len() == found.len() && set.len() == level.len() && set.iter().all(|g| level.contains(g))
}

fn eval(f: &PayoffFormula, s: &ValuedStructure, h: &[usize]) -> Option<Q> {
    f.evaluate(s, h).finite().cloned()
}

/// Re-checks a result against the defining inequalities, evaluating formulas directly.
pub fn verify_canonical(req: &CanonicalRequest, res: &CanonicalResult, cache: &mut MinionCache) -> Result<bool> {
    let t = req.template;
    match &res.outcome {
        Outcome::Formulas(out) => {
            if out.formulas.len() != req.families.len() {
                return Ok(false);
            }
            let mut sum_in = Q::zero();
            let mut sum_out = Q::zero();
            for (j, (phi, fam)) in out.formulas.iter().zip(&req.families).enumerate() {
                let level = cache.level(fam.arity)?;
                let w = phi.weight();
                for n in 0..fam.arity {
                    let h = projection_assignment(&t.a.dom, fam.arity, n);
                    let Some(va) = eval(phi, &t.a, &h) else { return Ok(false) };
                    let ok = match &req.mode {
                        Mode::Baby => {
                            let (c, _) = t.cs()?;
                            va - c * &w >= &fam.alpha[n] - c
                        }
                        Mode::Thresholds { c: c2, .. } => {
                            let (c, _) = t.cs()?;
                            va - c * &w >= &fam.alpha[n] - c2
                        }
                        Mode::Improved => {
                            let (c, _) = t.cs()?;
                            let g = out.gamma.clone().unwrap_or_default();
                            va - c * &w >= g * &fam.alpha[n] + &out.delta_in[j]
                        }
                        Mode::ConstantFactor => va >= &fam.alpha[n] + out.delta.clone().unwrap_or_default(),
                    };
                    if !ok {
                        return Ok(false);
                    }
                }
                for f in &level.functions {
                    let h = function_assignment(&t.b.dom, &level.space, f);
                    let Some(vb) = eval(phi, &t.b, &h) else { return Ok(false) };
                    let beta = fam.beta.get(f);
                    let ok = match &req.mode {
                        Mode::Baby => {
                            let (_, s) = t.cs()?;
                            vb - s * &w <= beta - s
                        }
                        Mode::Thresholds { s: s2, .. } => {
                            let (_, s) = t.cs()?;
                            vb - s * &w <= beta - s2
                        }
                        Mode::Improved => {
                            let (_, s) = t.cs()?;
                            vb - s * &w <= beta - &out.delta_out[j]
                        }
                        Mode::ConstantFactor => vb <= beta + t.kappa()? * out.delta.clone().unwrap_or_default(),
                    };
                    if !ok {
                        return Ok(false);
                    }
                }
                if !check_feasible_set(t, phi, &level) {
                    return Ok(false);
                }
                if let (Some(a), Some(b)) = (out.delta_in.get(j), out.delta_out.get(j)) {
                    sum_in += a;
                    sum_out += b;
                }
            }
            if matches!(req.mode, Mode::Improved)
                && (sum_in.is_negative() || sum_out.is_negative() || out.gamma.as_ref().is_none_or(Signed::is_negative))
            {
                return Ok(false);
            }
            Ok(true)
        }
        Outcome::Dual(d) => {
            if d.weightings.len() != req.families.len() || d.kappa.is_negative() {
                return Ok(false);
            }
            let mut total_in = Q::zero();
            let mut total_out = Q::zero();
            for (w, fam) in d.weightings.iter().zip(&req.families) {
                if w.arity != fam.arity || !is_kappa_polymorphism(t, cache, w, &d.kappa)? {
                    return Ok(false);
                }
                total_in += w.expect_in(&fam.alpha);
                total_out += w.expect_out(|f| fam.beta.get(f).clone());
            }
            Ok(match &req.mode {
                Mode::Baby => {
                    let (c, s) = t.cs()?;
                    total_out - s < &d.kappa * (total_in - c)
                }
                Mode::Thresholds { c, s } => total_out - s < &d.kappa * (total_in - c),
                Mode::Improved => !(&d.kappa * total_in).is_negative() && total_out.is_negative(),
                Mode::ConstantFactor => total_out < &d.kappa * total_in,
            })
        }
    }
}
