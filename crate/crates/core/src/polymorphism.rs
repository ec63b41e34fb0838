//! Feasibility polymorphisms, minors and minion homomorphisms.

use crate::algebra::{all_maps, minor, FnSpace, Mat, NaryFunction, ValuedStructure};
use crate::error::{contract, Error, Result};
use crate::prelude::*;
use crate::Limits;
use alloc::sync::Arc;

/// One level `M^{(N)}` of the polymorphism minion of `(feas A, feas B)`.
#[derive(Clone, Debug)]
pub struct MinionLevel {
    pub space: FnSpace,
    /// Lexicographic by table.
    pub functions: Vec<NaryFunction>,
    index: BTreeMap<NaryFunction, usize>,
}

impl MinionLevel {
    pub fn from_functions(space: FnSpace, mut functions: Vec<NaryFunction>) -> MinionLevel {
        functions.sort();
        functions.dedup();
        let index = functions.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        MinionLevel { space, functions, index }
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn position(&self, f: &NaryFunction) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn contains(&self, f: &NaryFunction) -> bool {
        self.index.contains_key(f)
    }
}

fn check_bound(space: &FnSpace, limits: &Limits) -> Result<()> {
    let bound = space.count_bound();
    if bound > limits.max_minion_size {
        return Err(Error::ResourceLimit {
            what: format!("polymorphism enumeration at arity {}", space.arity),
            needed: if bound == u128::MAX { String::from(">= 2^128 candidate functions") } else { format!("{bound} candidate functions") },
            limit: format!("{}", limits.max_minion_size),
        });
    }
    Ok(())
}

/// Enumerates `PolFeas(A, B)^{(n)}` by backtracking over table cells in rank order.
pub fn enumerate_polymorphisms(a: &ValuedStructure, b: &ValuedStructure, n: usize, limits: &Limits) -> Result<MinionLevel> {
    if a.sig != b.sig {
        return contract("structures must share a signature");
    }
    let space = FnSpace::new(&a.dom, &b.dom, n)?;
    check_bound(&space, limits)?;
    let mat = Mat::restricted(a, n, limits.max_mat_pairs, |sym| !b.is_total(sym))?;
    let cells = space.cells;
    let mut cell_sort = vec![0usize; cells];
    for t in 0..space.num_sorts() {
        for r in 0..space.sort_cells(t) {
            cell_sort[space.cell(t, r)] = t;
        }
    }
    // Checks keyed by the last cell they read.
    let mut checks: Vec<Vec<(usize, Vec<usize>)>> = vec![Vec::new(); cells];
    for p in &mat.pairs {
        let decl = &a.sig.symbols[p.sym];
        let cs: Vec<usize> = (0..decl.arity()).map(|z| space.cell(decl.sorts[z], p.rows[z])).collect();
        match cs.iter().max() {
            Some(&last) => checks[last].push((p.sym, cs)),
            None => {
                if !b.value_at(p.sym, 0).is_finite() {
                    return Ok(MinionLevel::from_functions(space, Vec::new()));
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut table = vec![0u32; cells];
    if cells == 0 {
        out.push(NaryFunction { arity: n, table });
        return Ok(MinionLevel::from_functions(space, out));
    }
    let ok_at = |table: &[u32], k: usize| {
        checks[k].iter().all(|(sym, cs)| {
            let st = b.strides(*sym);
            let r: usize = cs.iter().zip(st).map(|(&c, s)| table[c] as usize * s).sum();
            b.value_at(*sym, r).is_finite()
        })
    };
    // Iterative DFS; `table[k]` holds the value being tried at depth `k`.
    let mut k = 0usize;
    let mut fresh = true;
    loop {
        if fresh {
            table[k] = 0;
        } else {
            table[k] += 1;
        }
        if table[k] as usize >= space.dst[cell_sort[k]] {
            if k == 0 {
                break;
            }
            k -= 1;
            fresh = false;
            continue;
        }
        if !ok_at(&table, k) {
            fresh = false;
            continue;
        }
        if k + 1 == cells {
            out.push(NaryFunction { arity: n, table: table.clone() });
            fresh = false;
        } else {
            k += 1;
            fresh = true;
        }
    }
    Ok(MinionLevel::from_functions(space, out))
}

/// `f ∘ rows(M) ∈ feas(φ^B)` for every `(φ, M) ∈ Mat(A, N)`.
pub fn is_polymorphism(b: &ValuedStructure, space: &FnSpace, mat: &Mat, f: &NaryFunction) -> bool {
    space.contains(f) && mat.pairs.iter().all(|p| mat.image_value(b, space, f, p).is_finite())
}

/// A minion homomorphism given by its tables on arities `1..=k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MinionHomTable {
    pub k: usize,
    pub levels: BTreeMap<usize, BTreeMap<NaryFunction, NaryFunction>>,
}

impl MinionHomTable {
    pub fn get(&self, f: &NaryFunction) -> Option<&NaryFunction> {
        self.levels.get(&f.arity).and_then(|l| l.get(f))
    }
}

/// A minor identity that fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomViolation {
    pub f: NaryFunction,
    pub pi: Vec<usize>,
    pub target_arity: usize,
    pub reason: String,
}

/// Checks `ξ(f)^{(π)} = ξ(f^{(π)})` for all tabulated `f` and all `π: [n] → [m]`, `n, m <= k`.
///
/// `src_a`/`src_b` are the domains of the source minion, `dst_a`/`dst_b` of the target.
pub fn verify_minion_hom(
    xi: &MinionHomTable,
    src: (&crate::algebra::Domain, &crate::algebra::Domain),
    dst: (&crate::algebra::Domain, &crate::algebra::Domain),
) -> Result<Option<HomViolation>> {
    let arities: Vec<usize> = xi.levels.keys().copied().filter(|&n| n <= xi.k).collect();
    for &n in &arities {
        let s_n = FnSpace::new(src.0, src.1, n)?;
        let d_n = FnSpace::new(dst.0, dst.1, n)?;
        for &m in &arities {
            let s_m = FnSpace::new(src.0, src.1, m)?;
            let d_m = FnSpace::new(dst.0, dst.1, m)?;
            let level_m = &xi.levels[&m];
            for pi in all_maps(n, m) {
                for (f, g) in &xi.levels[&n] {
                    let fm = minor(f, &s_n, &pi, &s_m)?;
                    let Some(image) = level_m.get(&fm) else {
                        return Ok(Some(HomViolation {
                            f: f.clone(),
                            pi,
                            target_arity: m,
                            reason: String::from("minor of a tabulated function is not tabulated"),
                        }));
                    };
                    if *image != minor(g, &d_n, &pi, &d_m)? {
                        return Ok(Some(HomViolation {
                            f: f.clone(),
                            pi,
                            target_arity: m,
                            reason: String::from("image of the minor differs from the minor of the image"),
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Minors of `f` onto arities `1..=k` that `level` does not contain (closure check).
pub fn missing_minors(
    f: &NaryFunction,
    src: &FnSpace,
    k: usize,
    has: &dyn Fn(&NaryFunction) -> bool,
    dom: (&crate::algebra::Domain, &crate::algebra::Domain),
) -> Result<Vec<NaryFunction>> {
    let mut out = BTreeSet::new();
    for m in 1..=k {
        let dst = FnSpace::new(dom.0, dom.1, m)?;
        for pi in all_maps(src.arity, m) {
            let g = minor(f, src, &pi, &dst)?;
            if !has(&g) {
                out.insert(g);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Memoised `Mat(A, n)` and minion levels for one structure pair.
#[derive(Clone, Debug)]
pub struct MinionCache {
    pub a: ValuedStructure,
    pub b: ValuedStructure,
    pub limits: Limits,
    mats: BTreeMap<usize, Arc<Mat>>,
    levels: BTreeMap<usize, Arc<MinionLevel>>,
}

impl MinionCache {
    pub fn new(a: &ValuedStructure, b: &ValuedStructure, limits: Limits) -> MinionCache {
        MinionCache { a: a.clone(), b: b.clone(), limits, mats: BTreeMap::new(), levels: BTreeMap::new() }
    }

    pub fn mat(&mut self, n: usize) -> Result<Arc<Mat>> {
        if let Some(m) = self.mats.get(&n) {
            return Ok(m.clone());
        }
        let m = Arc::new(Mat::new(&self.a, n, self.limits.max_mat_pairs)?);
        self.mats.insert(n, m.clone());
        Ok(m)
    }

    pub fn level(&mut self, n: usize) -> Result<Arc<MinionLevel>> {
        if let Some(l) = self.levels.get(&n) {
            return Ok(l.clone());
        }
        let l = Arc::new(enumerate_polymorphisms(&self.a, &self.b, n, &self.limits)?);
        self.levels.insert(n, l.clone());
        Ok(l)
    }

    pub fn space(&self, n: usize) -> Result<FnSpace> {
        FnSpace::new(&self.a.dom, &self.b.dom, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{qi, zero};
    use crate::zoo;

    #[test]
    fn crisp_3lin2_ternary_polymorphisms_are_parities() {
        let t = zoo::klin2_crisp(3, zero()).unwrap();
        let lvl = enumerate_polymorphisms(&t.a, &t.b, 3, &Limits::default()).unwrap();
        assert_eq!(lvl.len(), 4);
        for f in &lvl.functions {
            // each is x_I parity of an odd subset
            let bits: Vec<u32> = (0..3).map(|i| f.table[1 << i]).collect();
            assert_eq!(bits.iter().sum::<u32>() % 2, 1);
            assert_eq!(f.table[0], 0);
        }
    }

    #[test]
    fn valued_lin2_is_unconstrained() {
        let t = zoo::klin2(3, qi(1), qi(1)).unwrap();
        let lvl = enumerate_polymorphisms(&t.a, &t.b, 2, &Limits::default()).unwrap();
        assert_eq!(lvl.len(), 16);
        assert!(enumerate_polymorphisms(&t.a, &t.b, 8, &Limits::default()).is_err());
    }

    #[test]
    fn k3_unary_are_permutations() {
        let t = zoo::clique(3).unwrap();
        let lvl = enumerate_polymorphisms(&t.a, &t.b, 1, &Limits::default()).unwrap();
        assert_eq!(lvl.len(), 6);
    }

    #[test]
    fn identity_hom_verifies() {
        let t = zoo::klin2_crisp(3, zero()).unwrap();
        let mut xi = MinionHomTable { k: 3, ..Default::default() };
        for n in 1..=3 {
            let lvl = enumerate_polymorphisms(&t.a, &t.b, n, &Limits::default()).unwrap();
            xi.levels.insert(n, lvl.functions.iter().map(|f| (f.clone(), f.clone())).collect());
        }
        let d = (&t.a.dom, &t.b.dom);
        assert_eq!(verify_minion_hom(&xi, d, d).unwrap(), None);
        // Swap the images of two ternary functions.
        let lvl3 = xi.levels.get_mut(&3).unwrap();
        let keys: Vec<_> = lvl3.keys().cloned().collect();
        let (k0, k1) = (keys[0].clone(), keys[1].clone());
        lvl3.insert(k0, k1.clone());
        assert!(verify_minion_hom(&xi, d, d).unwrap().is_some());
    }
}
