//! Relation-matrix pairs `(φ, M)` with every column feasible.

use crate::algebra::function::{FnSpace, NaryFunction};
use crate::algebra::structure::ValuedStructure;
use crate::error::{Error, Result};
use crate::num::Ext;
use crate::prelude::*;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MatPair {
    pub sym: usize,
    /// Column `n` is feasible tuple number `cols[n]` of `sym`.
    pub cols: Vec<u32>,
    /// Rank in `A_{t_z}^N` of each row.
    pub rows: Vec<usize>,
}

/// `Mat(A, N)` for `|N| = arity`, together with the feasible tuples it indexes.
#[derive(Clone, Debug)]
pub struct Mat {
    pub arity: usize,
    pub feas: Vec<Vec<Vec<usize>>>,
    pub feas_rank: Vec<Vec<usize>>,
    pub pairs: Vec<MatPair>,
    /// Source sort sizes of `A`, to rebuild function spaces.
    pub sizes: Vec<usize>,
}

impl Mat {
    /// Enumerates `Mat(A, N)` in (symbol, column indices) lexicographic order.
    pub fn new(a: &ValuedStructure, arity: usize, max_pairs: usize) -> Result<Mat> {
        Mat::restricted(a, arity, max_pairs, |_| true)
    }

    /// Like [`Mat::new`] but only for symbols accepted by `keep`.
    pub fn restricted(a: &ValuedStructure, arity: usize, max_pairs: usize, mut keep: impl FnMut(usize) -> bool) -> Result<Mat> {
        let sizes = a.dom.sort_sizes();
        let mut feas = Vec::new();
        let mut feas_rank = Vec::new();
        let mut total: usize = 0;
        for sym in 0..a.num_symbols() {
            let tuples = a.feasible_tuples(sym);
            let ranks = tuples.iter().map(|t| a.rank(sym, t)).collect();
            if keep(sym) {
                let count = u32::try_from(arity).ok().and_then(|n| tuples.len().checked_pow(n)).and_then(|c| total.checked_add(c));
                match count {
                    Some(c) if c <= max_pairs => total = c,
                    _ => {
                        return Err(Error::ResourceLimit {
                            what: format!("Mat(A, {arity}) at symbol {}", a.sig.symbols[sym].name),
                            needed: format!("{}^{arity} more pairs", tuples.len()),
                            limit: format!("{max_pairs}"),
                        })
                    }
                }
            }
            feas.push(tuples);
            feas_rank.push(ranks);
        }
        let mut pairs = Vec::with_capacity(total);
        for sym in 0..a.num_symbols() {
            let k = feas[sym].len();
            if k == 0 || !keep(sym) {
                continue;
            }
            let decl = &a.sig.symbols[sym];
            let mut cols = vec![0u32; arity];
            'odometer: loop {
                let rows = (0..decl.arity())
                    .map(|z| {
                        let base = sizes[decl.sorts[z]];
                        cols.iter().rev().fold(0usize, |acc, &c| acc * base + feas[sym][c as usize][z])
                    })
                    .collect();
                pairs.push(MatPair { sym, cols: cols.clone(), rows });
                // Last column fastest, so the order is lexicographic.
                let mut i = arity;
                loop {
                    if i == 0 {
                        break 'odometer;
                    }
                    i -= 1;
                    cols[i] += 1;
                    if (cols[i] as usize) < k {
                        break;
                    }
                    cols[i] = 0;
                }
            }
        }
        Ok(Mat { arity, feas, feas_rank, pairs, sizes })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Entry `M(z, n)` as a position in `A_{t_z}`.
    pub fn entry(&self, p: &MatPair, z: usize, n: usize) -> usize {
        self.feas[p.sym][p.cols[n] as usize][z]
    }

    /// `φ^A(col_n M)`.
    pub fn col_value<'a>(&self, a: &'a ValuedStructure, p: &MatPair, n: usize) -> &'a Ext {
        a.value_at(p.sym, self.feas_rank[p.sym][p.cols[n] as usize])
    }

    /// Rank in `B^{ar(φ)}` of `f ∘ rows(M)`.
    pub fn image_rank(&self, b: &ValuedStructure, space: &FnSpace, f: &NaryFunction, p: &MatPair) -> usize {
        let decl = &b.sig.symbols[p.sym];
        let st = b.strides(p.sym);
        (0..decl.arity()).map(|z| space.eval(f, decl.sorts[z], p.rows[z]) * st[z]).sum()
    }

    /// `φ^B(f ∘ rows(M))`.
    pub fn image_value<'a>(&self, b: &'a ValuedStructure, space: &FnSpace, f: &NaryFunction, p: &MatPair) -> &'a Ext {
        b.value_at(p.sym, self.image_rank(b, space, f, p))
    }

    /// Index of the canonical matrix `GM(feas φ^A)` (all feasible tuples as columns, in order).
    /// Only meaningful when `arity` equals the number of feasible tuples of `sym`.
    pub fn canonical_pair(&self, sym: usize) -> Option<&MatPair> {
        let k = self.feas[sym].len();
        if k != self.arity {
            return None;
        }
        self.pairs.iter().find(|p| p.sym == sym && p.cols.iter().enumerate().all(|(i, &c)| c as usize == i))
    }
}

/// Row ranks of the canonical matrix whose columns are `tuples` (position tuples of `sym`).
pub fn canonical_rows(a: &ValuedStructure, sym: usize, tuples: &[Vec<usize>]) -> Vec<usize> {
    let decl = &a.sig.symbols[sym];
    (0..decl.arity())
        .map(|z| {
            let base = a.dom.sort_size(decl.sorts[z]);
            tuples.iter().rev().fold(0usize, |acc, t| acc * base + t[z])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn mat_counts() {
        let t = zoo::klin2(3, crate::num::qi(1), crate::num::qi(1)).unwrap();
        assert_eq!(Mat::new(&t.a, 1, 1 << 14).unwrap().len(), 16);
        let c = zoo::klin2_crisp(3, crate::num::qi(0)).unwrap();
        let m = Mat::new(&c.a, 2, 1 << 14).unwrap();
        assert_eq!(m.len(), 32);
        assert!(m.pairs.windows(2).all(|w| w[0] < w[1]));
        assert!(Mat::new(&c.a, 8, 100).is_err());
    }
}
