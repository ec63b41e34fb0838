use super::LpSystem;
use crate::error::{Error, Result};
use crate::num::Q;
use crate::prelude::*;
use num_traits::{Signed, Zero};

/// Largest variable count the elimination oracle accepts.
pub const FM_MAX_VARS: usize = 6;
/// Largest row count (including `y >= 0`) the elimination oracle accepts.
pub const FM_MAX_ROWS: usize = 128;

/// Coefficients to the undominated `(bound, original rows combined)` pairs.
type Rows = BTreeMap<Vec<Q>, Vec<(Q, u128)>>;

/// Feasibility by Fourier–Motzkin elimination; independent of the simplex route.
///
/// After `k` eliminations a row built from more than `k + 1` original rows is dropped
/// (Chernikov's rule). A parallel row is dropped only if another has a bound at least as
/// tight and a history contained in its own.
pub fn fm_feasible(sys: &LpSystem) -> Result<bool> {
    sys.validate()?;
    let n = sys.cols();
    if n > FM_MAX_VARS || sys.rows() + n > FM_MAX_ROWS {
        return Err(Error::ResourceLimit {
            what: String::from("Fourier-Motzkin system"),
            needed: format!("{n} variables, {} rows", sys.rows() + n),
            limit: format!("{FM_MAX_VARS} variables, {FM_MAX_ROWS} rows"),
        });
    }
    // Each row means `a·y <= b`.
    let mut rows = Rows::new();
    for (i, (a, b)) in sys.f.iter().zip(&sys.q).enumerate() {
        if !insert(&mut rows, a.clone(), b.clone(), 1 << i) {
            return Ok(false);
        }
    }
    for j in 0..n {
        let mut a = vec![Q::zero(); n];
        a[j] = -Q::from_integer(1.into());
        insert(&mut rows, a, Q::zero(), 1 << (sys.rows() + j));
    }
    let mut left: Vec<usize> = (0..n).collect();
    for step in 0..n {
        let count = |k: usize| {
            let p = rows.keys().filter(|a| a[k].is_positive()).count();
            let m = rows.keys().filter(|a| a[k].is_negative()).count();
            p * m
        };
        let at = (0..left.len()).min_by_key(|&i| count(left[i])).unwrap_or(0);
        let k = left.swap_remove(at);
        let (mut pos, mut negs, mut keep) = (Vec::new(), Vec::new(), Rows::new());
        for (a, entries) in rows {
            if a[k].is_zero() {
                keep.insert(a, entries);
                continue;
            }
            let side = if a[k].is_positive() { &mut pos } else { &mut negs };
            for (b, h) in entries {
                side.push((a.clone(), b, h));
            }
        }
        for (ap, bp, hp) in &pos {
            for (an, bn, hn) in &negs {
                let h = hp | hn;
                if h.count_ones() as usize > step + 2 {
                    continue;
                }
                let cp = -an[k].clone();
                let cn = ap[k].clone();
                let a: Vec<Q> = ap.iter().zip(an).map(|(x, y)| x * &cp + y * &cn).collect();
                let b = bp * &cp + bn * &cn;
                if !insert(&mut keep, a, b, h) {
                    return Ok(false);
                }
            }
        }
        rows = keep;
    }
    Ok(true)
}

/// Normalises the first nonzero coefficient to absolute value one; `false` on `0 <= b < 0`.
fn insert(rows: &mut Rows, a: Vec<Q>, b: Q, h: u128) -> bool {
    let (a, b) = match a.iter().find(|v| !v.is_zero()).map(|v| v.abs()) {
        Some(s) => (a.iter().map(|v| v / &s).collect(), b / s),
        None => return !b.is_negative(),
    };
    let entries = rows.entry(a).or_default();
    if entries.iter().any(|(ob, oh)| *ob <= b && oh & h == *oh) {
        return true;
    }
    entries.retain(|(ob, oh)| !(b <= *ob && h & oh == h));
    entries.push((b, h));
    true
}
