//! Disjoint union of per-variable formulas over `A^{D_x}`, glued along minor conditions.

use super::mc::McInstance;
use crate::algebra::{Constraint, FnSpace, NaryFunction, PayoffFormula, ValuedTemplate, Var};
use crate::canonical::{assignment_function, canonical_vars, projection_assignment};
use crate::error::{contract, Result};
use crate::prelude::*;

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        // The smaller index stays the representative, so names are stable.
        if a < b {
            self.0[b] = a;
        } else {
            self.0[a] = b;
        }
    }
}

/// Result of the gluing step together with the bookkeeping needed to move assignments across.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiBuild {
    pub formula: PayoffFormula,
    /// Start of each `x ∈ U ∪ V` (U first) in the disjoint union `Y`.
    pub offsets: Vec<usize>,
    /// Variable of `formula` that each element of `Y` was merged into.
    pub class: Vec<usize>,
    pub spaces: Vec<FnSpace>,
}

impl PsiBuild {
    fn arity_of(&self, x: usize) -> usize {
        self.spaces[x].arity
    }

    /// Merges per-variable assignments of `A^{D_x}` into one for `Ψ`; fails if (M) is violated.
    pub fn lift(&self, parts: &[Vec<usize>]) -> Result<Vec<usize>> {
        if parts.len() != self.spaces.len() {
            return contract("one assignment per variable of U and V expected");
        }
        let mut h: Vec<Option<usize>> = vec![None; self.formula.vars.len()];
        for (x, part) in parts.iter().enumerate() {
            for (i, &e) in part.iter().enumerate() {
                let c = self.class[self.offsets[x] + i];
                match h[c] {
                    Some(old) if old != e => return contract("assignments disagree on an identified variable"),
                    _ => h[c] = Some(e),
                }
            }
        }
        h.into_iter().map(|e| e.ok_or_else(|| crate::Error::Contract(String::from("unassigned variable")))).collect()
    }

    /// The per-variable assignments of `A^{D_x}` read off an assignment of `Ψ`.
    pub fn split(&self, h: &[usize]) -> Vec<Vec<usize>> {
        (0..self.spaces.len())
            .map(|x| {
                let end = self.offsets.get(x + 1).copied().unwrap_or(self.class.len());
                (self.offsets[x]..end).map(|y| h[self.class[y]]).collect()
            })
            .collect()
    }

    /// The assignment corresponding to `(proj_{h(x)})_x`.
    pub fn projection_witness(&self, t: &ValuedTemplate, hx: &[usize]) -> Result<Vec<usize>> {
        let parts: Vec<Vec<usize>> = hx.iter().enumerate().map(|(x, &d)| projection_assignment(&t.a.dom, self.arity_of(x), d)).collect();
        self.lift(&parts)
    }

    /// The functions `h_x: A^{D_x} → B` encoded by a `B`-assignment of `Ψ`.
    pub fn functions(&self, t: &ValuedTemplate, h: &[usize]) -> Vec<NaryFunction> {
        self.split(h).iter().zip(&self.spaces).map(|(p, sp)| assignment_function(&t.b.dom, sp, p)).collect()
    }
}

/// `Ψ` from the formulas `Φ_x` (each over [`canonical_vars`] of arity `|D_x|`, U first).
pub fn glue(t: &ValuedTemplate, mc: &McInstance, per_x: Vec<PayoffFormula>) -> Result<PsiBuild> {
    mc.validate()?;
    let xs: Vec<_> = mc.u.iter().chain(&mc.v).collect();
    if per_x.len() != xs.len() {
        return contract("one formula per variable of U and V expected");
    }
    let nu = mc.u.len();
    let mut offsets = Vec::with_capacity(xs.len());
    let mut spaces = Vec::with_capacity(xs.len());
    let mut names = Vec::new();
    for (x, phi) in xs.iter().zip(&per_x) {
        let sp = FnSpace::new(&t.a.dom, &t.b.dom, x.domain.len())?;
        let vars = canonical_vars(&t.a.dom, &t.a.sig.sorts, x.domain.len());
        if phi.vars.len() != vars.len() {
            return contract(format!("formula for {} is not over A^D", x.name));
        }
        offsets.push(names.len());
        names.extend(vars.into_iter().map(|v| Var { name: format!("{}/{}", x.name, v.name), sort: v.sort }));
        spaces.push(sp);
    }
    let mut uf = UnionFind((0..names.len()).collect());
    for c in &mc.conditions {
        let (su, sv) = (&spaces[c.u], &spaces[nu + c.v]);
        for t_ in 0..sv.num_sorts() {
            for r in 0..sv.sort_cells(t_) {
                let a = sv.unrank(t_, r);
                let api: Vec<usize> = c.pi.iter().map(|&d| a[d]).collect();
                let yu = offsets[c.u] + su.cell(t_, su.rank(t_, &api));
                let yv = offsets[nu + c.v] + sv.cell(t_, r);
                uf.union(yu, yv);
            }
        }
    }
    let mut class = vec![usize::MAX; names.len()];
    let mut vars = Vec::new();
    for y in 0..names.len() {
        let r = uf.find(y);
        if class[r] == usize::MAX {
            class[r] = vars.len();
            vars.push(names[r].clone());
        }
        class[y] = class[r];
    }
    // Constraints that coincide after identification are merged, summing their weights.
    let mut constraints: Vec<Constraint> = Vec::new();
    let mut seen: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
    for (x, phi) in per_x.into_iter().enumerate() {
        for c in phi.constraints {
            let args: Vec<usize> = c.args.iter().map(|&a| class[offsets[x] + a]).collect();
            match seen.get(&(c.sym, args.clone())) {
                Some(&i) => constraints[i].weight += c.weight,
                None => {
                    seen.insert((c.sym, args.clone()), constraints.len());
                    constraints.push(Constraint { weight: c.weight, sym: c.sym, args });
                }
            }
        }
    }
    Ok(PsiBuild { formula: PayoffFormula { vars, constraints }, offsets, class, spaces })
}
