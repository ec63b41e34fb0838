use crate::algebra::structure::Domain;
use crate::error::{contract, Error, Result};
use crate::prelude::*;

/// An `N`-ary function from `A` to `B`, stored as one flat table of target positions.
///
/// Cells are grouped by sort; within sort `t` the cell of a tuple `a ∈ A_t^N`
/// is its little-endian rank. Equality and ordering are on the table bytes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NaryFunction {
    pub arity: usize,
    pub table: Vec<u32>,
}

/// Layout of `N`-ary functions between two domains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FnSpace {
    pub arity: usize,
    pub src: Vec<usize>,
    pub dst: Vec<usize>,
    pub offsets: Vec<usize>,
    pub cells: usize,
}

impl FnSpace {
    pub fn new(a: &Domain, b: &Domain, arity: usize) -> Result<FnSpace> {
        FnSpace::from_sizes(a.sort_sizes(), b.sort_sizes(), arity)
    }

    pub fn from_sizes(src: Vec<usize>, dst: Vec<usize>, arity: usize) -> Result<FnSpace> {
        if src.len() != dst.len() {
            return contract("function space: sort counts differ");
        }
        let mut offsets = Vec::with_capacity(src.len());
        let mut cells = 0usize;
        for (t, &n) in src.iter().enumerate() {
            offsets.push(cells);
            let k = u32::try_from(arity).ok().and_then(|a| n.checked_pow(a)).ok_or_else(|| Error::ResourceLimit {
                what: format!("cells of sort {t} at arity {arity}"),
                needed: String::from("overflow"),
                limit: format!("{}", usize::MAX),
            })?;
            if k > 0 && dst[t] == 0 {
                return contract(format!("sort {t} is empty in the target but not in the source"));
            }
            cells = cells.checked_add(k).ok_or_else(|| Error::Contract("too many cells".into()))?;
        }
        Ok(FnSpace { arity, src, dst, offsets, cells })
    }

    pub fn num_sorts(&self) -> usize {
        self.src.len()
    }

    /// Number of cells of sort `t`.
    pub fn sort_cells(&self, t: usize) -> usize {
        let end = if t + 1 < self.offsets.len() { self.offsets[t + 1] } else { self.cells };
        end - self.offsets[t]
    }

    pub fn cell(&self, t: usize, rank: usize) -> usize {
        self.offsets[t] + rank
    }

    /// Sort and rank of a global cell index.
    pub fn locate(&self, cell: usize) -> (usize, usize) {
        let t = self.offsets.partition_point(|&o| o <= cell) - 1;
        // Skip empty sorts that share an offset.
        let mut t = t;
        while self.sort_cells(t) == 0 || cell - self.offsets[t] >= self.sort_cells(t) {
            t -= 1;
        }
        (t, cell - self.offsets[t])
    }

    /// Rank of an `N`-tuple of positions in `A_t^N`.
    pub fn rank(&self, t: usize, tuple: &[usize]) -> usize {
        let base = self.src[t];
        tuple.iter().rev().fold(0usize, |acc, &p| acc * base + p)
    }

    pub fn unrank(&self, t: usize, mut rank: usize) -> Vec<usize> {
        let base = self.src[t];
        (0..self.arity)
            .map(|_| {
                let p = rank % base;
                rank /= base;
                p
            })
            .collect()
    }

    /// Rank of the constant tuple `(p, ..., p)`.
    pub fn constant_rank(&self, t: usize, p: usize) -> usize {
        self.rank(t, &vec![p; self.arity])
    }

    pub fn eval(&self, f: &NaryFunction, t: usize, rank: usize) -> usize {
        f.table[self.offsets[t] + rank] as usize
    }

    pub fn contains(&self, f: &NaryFunction) -> bool {
        f.arity == self.arity
            && f.table.len() == self.cells
            && (0..self.num_sorts()).all(|t| {
                let o = self.offsets[t];
                f.table[o..o + self.sort_cells(t)].iter().all(|&v| (v as usize) < self.dst[t])
            })
    }

    /// Coordinate projection `a ↦ a(i)`; needs equal source and target sort sizes.
    pub fn projection(&self, i: usize) -> Result<NaryFunction> {
        if self.src != self.dst {
            return contract("projections need identical source and target universes");
        }
        if i >= self.arity {
            return contract("projection coordinate out of range");
        }
        let mut table = Vec::with_capacity(self.cells);
        for t in 0..self.num_sorts() {
            for r in 0..self.sort_cells(t) {
                table.push(self.unrank(t, r)[i] as u32);
            }
        }
        Ok(NaryFunction { arity: self.arity, table })
    }

    /// Total number of functions in the space, saturating at `u128::MAX`.
    pub fn count_bound(&self) -> u128 {
        let mut acc: u128 = 1;
        for t in 0..self.num_sorts() {
            let base = self.dst[t] as u128;
            for _ in 0..self.sort_cells(t) {
                acc = acc.saturating_mul(base);
                if acc == u128::MAX {
                    return acc;
                }
            }
        }
        acc
    }
}

/// `f^{(π)}(a) = f(a ∘ π)` for `π: [n] → [m]`; `src` has arity `n`, `dst` arity `m`.
pub fn minor(f: &NaryFunction, src: &FnSpace, pi: &[usize], dst: &FnSpace) -> Result<NaryFunction> {
    if pi.len() != src.arity || pi.iter().any(|&j| j >= dst.arity) || src.src != dst.src {
        return contract("minor map does not fit the function arities");
    }
    let mut table = Vec::with_capacity(dst.cells);
    let mut pulled = vec![0usize; src.arity];
    for t in 0..dst.num_sorts() {
        let base = dst.src[t];
        let mut a = vec![0usize; dst.arity];
        for r in 0..dst.sort_cells(t) {
            if r > 0 {
                let mut i = 0;
                loop {
                    a[i] += 1;
                    if a[i] < base {
                        break;
                    }
                    a[i] = 0;
                    i += 1;
                }
            }
            for (k, &j) in pi.iter().enumerate() {
                pulled[k] = a[j];
            }
            table.push(f.table[src.offsets[t] + src.rank(t, &pulled)]);
        }
    }
    Ok(NaryFunction { arity: dst.arity, table })
}

/// Every map `[n] → [m]`, as vectors of images.
pub fn all_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if m == 0 && n > 0 {
        return out;
    }
    crate::algebra::structure::for_each_tuple(&vec![m; n], |t| out.push(t.to_vec()));
    out
}
