//! Minor condition instances, plain and valued, and exhaustive solvers for them.

use crate::algebra::{minor, NaryFunction};
use crate::canonical::Beta;
use crate::error::{contract, Result};
use crate::num::Q;
use crate::polymorphism::MinionCache;
use crate::prelude::*;
use num_traits::Zero;

/// A variable with a finite domain `D_x`, given by labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McVar {
    pub name: String,
    pub domain: Vec<String>,
}

/// `π(u) = v` with `π: D_u → D_v` given by images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorCondition {
    pub u: usize,
    pub v: usize,
    pub pi: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McInstance {
    pub k: usize,
    pub u: Vec<McVar>,
    pub v: Vec<McVar>,
    pub conditions: Vec<MinorCondition>,
}

impl McInstance {
    pub fn validate(&self) -> Result<()> {
        let mut names = BTreeSet::new();
        for x in self.u.iter().chain(&self.v) {
            if !names.insert(x.name.as_str()) {
                return contract(format!("variable {} appears twice in U ∪ V", x.name));
            }
            if x.domain.len() > self.k {
                return contract(format!("domain of {} exceeds k = {}", x.name, self.k));
            }
            if x.domain.is_empty() {
                return contract(format!("domain of {} is empty", x.name));
            }
        }
        for c in &self.conditions {
            let (Some(u), Some(v)) = (self.u.get(c.u), self.v.get(c.v)) else {
                return contract("minor condition refers to an unknown variable");
            };
            if c.pi.len() != u.domain.len() || c.pi.iter().any(|&d| d >= v.domain.len()) {
                return contract(format!("minor condition {} -> {} is not a map D_u -> D_v", u.name, v.name));
            }
        }
        Ok(())
    }

    fn conditions_of(&self) -> Vec<Vec<&MinorCondition>> {
        let mut by_u = vec![Vec::new(); self.u.len()];
        for c in &self.conditions {
            by_u[c.u].push(c);
        }
        by_u
    }

    /// Best `Σ score_u(h(u))` over solutions `h(x) ∈ D_x`; `None` if there is no solution.
    pub fn best_solution(&self, score: &dyn Fn(usize, usize) -> Q) -> Option<(Q, Vec<usize>, Vec<usize>)> {
        let by_u = self.conditions_of();
        let mut best: Option<(Q, Vec<usize>, Vec<usize>)> = None;
        let mut hu = vec![0usize; self.u.len()];
        let mut hv: Vec<Option<usize>> = vec![None; self.v.len()];
        let max_rest: Vec<Q> = {
            let mut m: Vec<Q> =
                (0..self.u.len()).map(|u| (0..self.u[u].domain.len()).map(|d| score(u, d)).max().unwrap_or_default()).collect();
            for i in (0..m.len().saturating_sub(1)).rev() {
                let next = m[i + 1].clone();
                m[i] += next;
            }
            m
        };
        fn go(
            mc: &McInstance,
            by_u: &[Vec<&MinorCondition>],
            score: &dyn Fn(usize, usize) -> Q,
            max_rest: &[Q],
            i: usize,
            acc: Q,
            hu: &mut Vec<usize>,
            hv: &mut Vec<Option<usize>>,
            best: &mut Option<(Q, Vec<usize>, Vec<usize>)>,
        ) {
            if i == mc.u.len() {
                if best.as_ref().is_none_or(|(b, _, _)| &acc > b) {
                    let v = hv.iter().map(|x| x.unwrap_or(0)).collect();
                    *best = Some((acc, hu.clone(), v));
                }
                return;
            }
            if let Some((b, _, _)) = best {
                if &acc + &max_rest[i] <= *b {
                    return;
                }
            }
            for d in 0..mc.u[i].domain.len() {
                let mut set = Vec::new();
                let mut ok = true;
                for c in &by_u[i] {
                    let e = c.pi[d];
                    match hv[c.v] {
                        Some(x) if x != e => {
                            ok = false;
                            break;
                        }
                        Some(_) => {}
                        None => {
                            hv[c.v] = Some(e);
                            set.push(c.v);
                        }
                    }
                }
                if ok {
                    hu[i] = d;
                    go(mc, by_u, score, max_rest, i + 1, &acc + score(i, d), hu, hv, best);
                }
                for v in set {
                    hv[v] = None;
                }
            }
        }
        go(self, &by_u, score, &max_rest, 0, Q::zero(), &mut hu, &mut hv, &mut best);
        best
    }

    /// A solution `h(x) ∈ D_x`, if any.
    pub fn solve(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        self.best_solution(&|_, _| Q::zero()).map(|(_, u, v)| (u, v))
    }

    /// A solution with `h(x) ∈ M^{(D_x)}` in the polymorphism minion of `cache`.
    pub fn solve_in_minion(&self, cache: &mut MinionCache) -> Result<Option<Vec<NaryFunction>>> {
        let betas: Vec<Beta> = self.u.iter().map(|_| Beta::constant(Q::zero())).collect();
        Ok(minion_search(self, &betas, cache)?.map(|(_, h)| h))
    }
}

/// Max of `Σ_u β_u(h(u))` over `h(u) ∈ M^{(D_u)}` whose minors agree on every `v`.
/// Returns the value and the functions chosen for `U`, or `None` if no such `h` exists.
pub fn minion_search(mc: &McInstance, betas: &[Beta], cache: &mut MinionCache) -> Result<Option<(Q, Vec<NaryFunction>)>> {
    mc.validate()?;
    let by_u = mc.conditions_of();
    let mut cands: Vec<Vec<(Q, NaryFunction)>> = Vec::new();
    let mut spaces_u = Vec::new();
    for (u, x) in mc.u.iter().enumerate() {
        let level = cache.level(x.domain.len())?;
        let mut c: Vec<(Q, NaryFunction)> = level.functions.iter().map(|f| (betas[u].get(f).clone(), f.clone())).collect();
        c.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        cands.push(c);
        spaces_u.push(cache.space(x.domain.len())?);
    }
    for x in &mc.v {
        if cache.level(x.domain.len())?.is_empty() {
            return Ok(None);
        }
    }
    let spaces_v: Vec<_> = mc.v.iter().map(|x| cache.space(x.domain.len())).collect::<Result<_>>()?;
    let mut max_rest: Vec<Q> = cands.iter().map(|c| c.first().map(|p| p.0.clone()).unwrap_or_default()).collect();
    max_rest.push(Q::zero());
    for i in (0..mc.u.len()).rev() {
        let next = max_rest[i + 1].clone();
        max_rest[i] += next;
    }
    struct S<'a> {
        mc: &'a McInstance,
        by_u: Vec<Vec<&'a MinorCondition>>,
        cands: Vec<Vec<(Q, NaryFunction)>>,
        spaces_u: Vec<crate::algebra::FnSpace>,
        spaces_v: Vec<crate::algebra::FnSpace>,
        max_rest: Vec<Q>,
        hv: Vec<Option<NaryFunction>>,
        hu: Vec<usize>,
        best: Option<(Q, Vec<usize>)>,
    }
    impl S<'_> {
        fn go(&mut self, i: usize, acc: Q) -> Result<()> {
            if i == self.mc.u.len() {
                if self.best.as_ref().is_none_or(|(b, _)| &acc > b) {
                    self.best = Some((acc, self.hu.clone()));
                }
                return Ok(());
            }
            for k in 0..self.cands[i].len() {
                let val = &acc + &self.cands[i][k].0;
                if let Some((b, _)) = &self.best {
                    // Candidates are sorted by β, so nothing later can do better.
                    if &val + &self.max_rest[i + 1] <= *b {
                        break;
                    }
                }
                let mut set = Vec::new();
                let mut ok = true;
                for c in self.by_u[i].clone() {
                    let g = minor(&self.cands[i][k].1, &self.spaces_u[i], &c.pi, &self.spaces_v[c.v])?;
                    match &self.hv[c.v] {
                        Some(h) if *h != g => {
                            ok = false;
                            break;
                        }
                        Some(_) => {}
                        None => {
                            self.hv[c.v] = Some(g);
                            set.push(c.v);
                        }
                    }
                }
                if ok {
                    self.hu[i] = k;
                    self.go(i + 1, val)?;
                }
                for v in set {
                    self.hv[v] = None;
                }
            }
            Ok(())
        }
    }
    let mut s = S { mc, by_u, cands, spaces_u, spaces_v, max_rest, hv: vec![None; mc.v.len()], hu: vec![0; mc.u.len()], best: None };
    s.go(0, Q::zero())?;
    Ok(s.best.map(|(v, ks)| {
        let fs = ks.iter().enumerate().map(|(u, &k)| s.cands[u][k].1.clone()).collect();
        (v, fs)
    }))
}

/// A valued minor condition instance. `completeness` is set for the constant-factor variant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VmcInstance {
    pub mc: McInstance,
    pub alpha: Vec<Vec<Q>>,
    pub beta: Vec<Beta>,
    pub completeness: Option<Q>,
}

/// Status of a (V)MC instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McClassification {
    pub yes: bool,
    pub no: bool,
}

impl VmcInstance {
    pub fn validate(&self) -> Result<()> {
        self.mc.validate()?;
        if self.alpha.len() != self.mc.u.len() || self.beta.len() != self.mc.u.len() {
            return contract("one alpha and one beta per U-variable expected");
        }
        for (a, x) in self.alpha.iter().zip(&self.mc.u) {
            if a.len() != x.domain.len() {
                return contract(format!("alpha of {} is not total on its domain", x.name));
            }
        }
        Ok(())
    }

    /// Yes-side threshold `0` (gap) or `c`; no-side threshold `0` or `κc`.
    pub fn classify(&self, cache: &mut MinionCache, kappa: Option<&Q>) -> Result<McClassification> {
        self.validate()?;
        let (yes_t, no_t) = match (&self.completeness, kappa) {
            (Some(c), Some(k)) => (c.clone(), k * c),
            (None, None) => (Q::zero(), Q::zero()),
            _ => return contract("constant-factor instances need both a completeness and a kappa"),
        };
        let best = self.mc.best_solution(&|u, d| self.alpha[u][d].clone());
        let yes = best.is_some_and(|(v, _, _)| v >= yes_t);
        let best_b = minion_search(&self.mc, &self.beta, cache)?;
        let no = best_b.is_none_or(|(v, _)| v < no_t);
        Ok(McClassification { yes, no })
    }
}
