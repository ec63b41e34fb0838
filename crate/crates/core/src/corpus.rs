//! Small formulas enumerated up to variable renaming and constraint order.

use crate::algebra::{Constraint, PayoffFormula, Signature, Var};
use crate::error::{contract, Result};
use crate::num::one;
use crate::prelude::*;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Next non-decreasing sequence over `0..n`, or `false` after the last one.
fn advance(pick: &mut [usize], n: usize) -> bool {
    for i in (0..pick.len()).rev() {
        if pick[i] + 1 < n {
            let v = pick[i] + 1;
            pick[i..].iter_mut().for_each(|x| *x = v);
            return true;
        }
    }
    false
}

type Key = Vec<(usize, Vec<usize>)>;

/// Every unit-weight formula with at most `max_constraints` constraints over at most `max_vars`
/// variables of a single-sorted signature, one per class. Variables are `x0, x1, …` in order of
/// first use.
pub fn formula_corpus(sig: &Signature, max_constraints: usize, max_vars: usize) -> Result<Vec<PayoffFormula>> {
    if sig.sorts.len() != 1 {
        return contract("the corpus is defined for single-sorted signatures");
    }
    let mut atoms: Vec<(usize, Vec<usize>)> = Vec::new();
    for (s, d) in sig.symbols.iter().enumerate() {
        crate::algebra::for_each_tuple(&vec![max_vars; d.arity()], |t| atoms.push((s, t.to_vec())));
    }
    let perms = permutations(max_vars);
    let mut seen: BTreeSet<Key> = BTreeSet::new();
    let mut out = Vec::new();
    let mut pick: Vec<usize> = Vec::new();
    for m in 0..=max_constraints {
        pick.clear();
        pick.resize(m, 0);
        loop {
            let key = perms
                .iter()
                .map(|p| {
                    let mut k: Key = pick.iter().map(|&i| (atoms[i].0, atoms[i].1.iter().map(|&x| p[x]).collect())).collect();
                    k.sort();
                    k
                })
                .min()
                .unwrap_or_default();
            if seen.insert(key.clone()) {
                out.push(to_formula(&key));
            }
            if !advance(&mut pick, atoms.len()) {
                break;
            }
        }
    }
    Ok(out)
}

fn to_formula(key: &Key) -> PayoffFormula {
    let mut rename: BTreeMap<usize, usize> = BTreeMap::new();
    let mut constraints = Vec::new();
    for (s, args) in key {
        let args = args
            .iter()
            .map(|x| {
                let n = rename.len();
                *rename.entry(*x).or_insert(n)
            })
            .collect();
        constraints.push(Constraint { weight: one(), sym: *s, args });
    }
    let vars = (0..rename.len()).map(|i| Var { name: format!("x{i}"), sort: 0 }).collect();
    PayoffFormula { vars, constraints }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let sig = Signature::single_sorted("bool", &[("e", 2)]);
        // No constraint; e(x,x); e(x,y).
        assert_eq!(formula_corpus(&sig, 1, 2).unwrap().len(), 3);
        assert_eq!(permutations(4).len(), 24);
    }
}
