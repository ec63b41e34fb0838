//! Exact exhaustive search over assignments, with pruning.

use crate::algebra::{PayoffFormula, ValuedStructure, ValuedTemplate};
use crate::error::Result;
use crate::num::{Ext, Q};
use crate::prelude::*;

struct Plan {
    order: Vec<usize>,
    /// Constraints completed when the variable at each step is placed.
    buckets: Vec<Vec<usize>>,
    /// Upper bound on what constraints from step `i` on can still add.
    suffix: Vec<Q>,
    constant: Vec<usize>,
    hopeless: bool,
}

fn plan(f: &PayoffFormula, s: &ValuedStructure) -> Plan {
    let nv = f.vars.len();
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (i, c) in f.constraints.iter().enumerate() {
        for &x in &c.args {
            if touching[x].last() != Some(&i) {
                touching[x].push(i);
            }
        }
    }
    // Greedy order: prefer variables that complete constraints, then ones linked to placed variables.
    let mut placed = vec![false; nv];
    let mut missing: Vec<usize> = f.constraints.iter().map(|c| c.args.iter().collect::<BTreeSet<_>>().len()).collect();
    let mut order = Vec::with_capacity(nv);
    let mut score = vec![(0usize, 0usize); nv];
    for _ in 0..nv {
        let mut best = None;
        for x in 0..nv {
            if placed[x] || touching[x].is_empty() {
                continue;
            }
            let key = (score[x].0, score[x].1, touching[x].len());
            if best.is_none_or(|(k, _)| key > k) {
                best = Some((key, x));
            }
        }
        let Some((_, x)) = best else { break };
        placed[x] = true;
        order.push(x);
        for &i in &touching[x] {
            missing[i] -= 1;
            for &y in &f.constraints[i].args {
                if !placed[y] {
                    score[y].1 += 1;
                    if missing[i] == 1 {
                        score[y].0 += 1;
                    }
                }
            }
        }
    }
    let mut step_of = vec![usize::MAX; nv];
    for (k, &x) in order.iter().enumerate() {
        step_of[x] = k;
    }
    let mut buckets = vec![Vec::new(); order.len()];
    let mut constant = Vec::new();
    let mut hopeless = false;
    let mut step_bound = vec![Q::from_integer(0.into()); order.len() + 1];
    for (i, c) in f.constraints.iter().enumerate() {
        let best = s.max_value(c.sym);
        match best {
            None => hopeless = true,
            Some(m) => {
                let last = c.args.iter().map(|&x| step_of[x]).max();
                match last {
                    None => constant.push(i),
                    Some(k) => {
                        buckets[k].push(i);
                        step_bound[k] += m * &c.weight;
                    }
                }
            }
        }
    }
    let mut suffix = step_bound;
    for k in (0..order.len()).rev() {
        let next = suffix[k + 1].clone();
        suffix[k] += next;
    }
    Plan { order, buckets, suffix, constant, hopeless }
}

/// Best assignment found and its value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Optimum {
    pub value: Ext,
    pub assignment: Option<Vec<usize>>,
}

/// `max_h Φ^S(h)`, exact. With `stop_at`, returns as soon as some `h` reaches it.
pub fn max_payoff(f: &PayoffFormula, s: &ValuedStructure, stop_at: Option<&Q>) -> Optimum {
    let p = plan(f, s);
    let none = Optimum { value: Ext::NegInf, assignment: None };
    if p.hopeless {
        return none;
    }
    if f.vars.iter().any(|v| s.dom.sort_size(v.sort) == 0) {
        return none;
    }
    let mut h: Vec<usize> = f.vars.iter().map(|v| s.dom.elems_of(v.sort)[0]).collect();
    let mut base = Q::from_integer(0.into());
    for &i in &p.constant {
        let c = &f.constraints[i];
        match s.value_elems(c.sym, &[]) {
            Ext::NegInf => return none,
            Ext::Fin(v) => base += v * &c.weight,
        }
    }
    let mut st = State { f, s, p: &p, h: &mut h, best: None, best_h: None, stop_at, args: Vec::new() };
    st.dfs(0, base);
    match st.best {
        None => none,
        Some(v) => Optimum { value: Ext::Fin(v), assignment: st.best_h },
    }
}

struct State<'a> {
    f: &'a PayoffFormula,
    s: &'a ValuedStructure,
    p: &'a Plan,
    h: &'a mut Vec<usize>,
    best: Option<Q>,
    best_h: Option<Vec<usize>>,
    stop_at: Option<&'a Q>,
    args: Vec<usize>,
}

impl State<'_> {
    fn done(&self) -> bool {
        match (&self.best, self.stop_at) {
            (Some(b), Some(t)) => b >= t,
            _ => false,
        }
    }

    fn dfs(&mut self, k: usize, acc: Q) {
        if k == self.p.order.len() {
            if self.best.as_ref().is_none_or(|b| &acc > b) {
                self.best = Some(acc);
                self.best_h = Some(self.h.clone());
            }
            return;
        }
        let x = self.p.order[k];
        let sort = self.f.vars[x].sort;
        for &e in self.s.dom.elems_of(sort) {
            self.h[x] = e;
            let mut val = acc.clone();
            let mut ok = true;
            for &i in &self.p.buckets[k] {
                let c = &self.f.constraints[i];
                self.args.clear();
                let h = &*self.h;
                self.args.extend(c.args.iter().map(|&y| h[y]));
                match self.s.value_elems(c.sym, &self.args) {
                    Ext::NegInf => {
                        ok = false;
                        break;
                    }
                    Ext::Fin(v) => {
                        if !num_traits::Zero::is_zero(&c.weight) {
                            val += v * &c.weight;
                        }
                    }
                }
            }
            if !ok {
                continue;
            }
            if let Some(b) = &self.best {
                if &val + &self.p.suffix[k + 1] <= *b {
                    continue;
                }
            }
            self.dfs(k + 1, val);
            if self.done() {
                return;
            }
        }
    }
}

/// All feasible assignments (`Φ^S(h) > -inf`), in search order, up to `limit`.
pub fn feasible_assignments(f: &PayoffFormula, s: &ValuedStructure, limit: usize) -> Vec<Vec<usize>> {
    let crisp = PayoffFormula {
        vars: f.vars.clone(),
        constraints: f.constraints.iter().map(|c| crate::algebra::Constraint { weight: Q::from_integer(0.into()), ..c.clone() }).collect(),
    };
    let p = plan(&crisp, s);
    let mut out = Vec::new();
    if p.hopeless || f.vars.iter().any(|v| s.dom.sort_size(v.sort) == 0) {
        return out;
    }
    let mut h: Vec<usize> = f.vars.iter().map(|v| s.dom.elems_of(v.sort)[0]).collect();
    for &i in &p.constant {
        if !s.value_elems(crisp.constraints[i].sym, &[]).is_finite() {
            return out;
        }
    }
    let free: Vec<usize> = (0..f.vars.len()).filter(|x| !p.order.contains(x)).collect();
    enumerate(&crisp, s, &p, 0, &mut h, &free, &mut out, limit);
    out
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    f: &PayoffFormula,
    s: &ValuedStructure,
    p: &Plan,
    k: usize,
    h: &mut Vec<usize>,
    free: &[usize],
    out: &mut Vec<Vec<usize>>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if k == p.order.len() {
        // Unconstrained variables range freely.
        let radix: Vec<usize> = free.iter().map(|&x| s.dom.sort_size(f.vars[x].sort)).collect();
        crate::algebra::for_each_tuple(&radix, |t| {
            if out.len() < limit {
                let mut g = h.clone();
                for (i, &x) in free.iter().enumerate() {
                    g[x] = s.dom.elems_of(f.vars[x].sort)[t[i]];
                }
                out.push(g);
            }
        });
        return;
    }
    let x = p.order[k];
    let mut args = Vec::new();
    for &e in s.dom.elems_of(f.vars[x].sort) {
        h[x] = e;
        let ok = p.buckets[k].iter().all(|&i| {
            let c = &f.constraints[i];
            args.clear();
            args.extend(c.args.iter().map(|&y| h[y]));
            s.value_elems(c.sym, &args).is_finite()
        });
        if ok {
            enumerate(f, s, p, k + 1, h, free, out, limit);
        }
    }
}

/// Plain enumeration of every assignment; the reference the pruned search is tested against.
pub fn brute_force_max(f: &PayoffFormula, s: &ValuedStructure) -> Ext {
    let radix: Vec<usize> = f.vars.iter().map(|v| s.dom.sort_size(v.sort)).collect();
    let mut best = Ext::NegInf;
    let mut h = vec![0usize; f.vars.len()];
    crate::algebra::for_each_tuple(&radix, |t| {
        for (x, &p) in t.iter().enumerate() {
            h[x] = s.dom.elems_of(f.vars[x].sort)[p];
        }
        let v = f.evaluate(s, &h);
        if v > best {
            best = v;
        }
    });
    best
}

/// Promise status of a formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub yes: bool,
    pub no: bool,
}

/// Gap templates: yes iff `max Φ^A >= c·w(Φ)`, no iff `max Φ^B < s·w(Φ)`.
pub fn classify(f: &PayoffFormula, t: &ValuedTemplate) -> Result<Classification> {
    let (c, s) = t.cs()?;
    let w = f.weight();
    let yes_target = c * &w;
    let yes = max_payoff(f, &t.a, Some(&yes_target)).value.ge_q(&yes_target);
    let no_target = s * &w;
    let no = max_payoff(f, &t.b, Some(&no_target)).value.lt_q(&no_target);
    Ok(Classification { yes, no })
}

/// Constant-factor templates with completeness `c`: yes iff `max Φ^A >= c`, no iff `max Φ^B < κc`.
pub fn classify_cf(f: &PayoffFormula, t: &ValuedTemplate, c: &Q) -> Result<Classification> {
    let kappa = t.kappa()?;
    let yes = max_payoff(f, &t.a, Some(c)).value.ge_q(c);
    let target = kappa * c;
    let no = max_payoff(f, &t.b, Some(&target)).value.lt_q(&target);
    Ok(Classification { yes, no })
}
