use super::{LpResult, LpSystem};
use crate::num::Q;
use crate::prelude::*;
use num_traits::{Signed, Zero};

/// Phase-one simplex with Bland's rule.
///
/// Row `i` becomes `σ_i (F_i y + s_i) + a_i = |q_i|`, with an artificial `a_i`
/// only where `q_i < 0`. At the optimum the reduced cost of slack `s_i` is
/// `-σ_i π_i`, which is exactly the Farkas multiplier of row `i`. There is no
/// objective beyond feasibility, so the second phase has nothing to do.
pub fn solve(sys: &LpSystem) -> LpResult {
    let m = sys.rows();
    let n = sys.cols();
    let neg: Vec<bool> = sys.q.iter().map(Signed::is_negative).collect();
    if !neg.iter().any(|&b| b) {
        return LpResult::Feasible { y: vec![Q::zero(); n] };
    }
    let arts: Vec<usize> = (0..m).filter(|&i| neg[i]).collect();
    let width = n + m + arts.len();
    let mut t: Vec<Vec<Q>> = Vec::with_capacity(m);
    let mut rhs: Vec<Q> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut art_of_row = vec![usize::MAX; m];
    for (k, &i) in arts.iter().enumerate() {
        art_of_row[i] = n + m + k;
    }
    for i in 0..m {
        let mut row = vec![Q::zero(); width];
        for j in 0..n {
            if !sys.f[i][j].is_zero() {
                row[j] = if neg[i] { -sys.f[i][j].clone() } else { sys.f[i][j].clone() };
            }
        }
        if neg[i] {
            row[n + i] = -Q::from_integer(1.into());
            row[art_of_row[i]] = Q::from_integer(1.into());
            basis.push(art_of_row[i]);
            rhs.push(-sys.q[i].clone());
        } else {
            row[n + i] = Q::from_integer(1.into());
            basis.push(n + i);
            rhs.push(sys.q[i].clone());
        }
        t.push(row);
    }
    // Reduced costs for the phase-one objective `Σ a_i`.
    let mut d = vec![Q::zero(); width];
    for v in d.iter_mut().skip(n + m) {
        *v = Q::from_integer(1.into());
    }
    let mut obj = Q::zero();
    for &i in &arts {
        for j in 0..width {
            if !t[i][j].is_zero() {
                d[j] -= &t[i][j];
            }
        }
        obj += &rhs[i];
    }
    loop {
        let Some(e) = (0..width).find(|&j| d[j].is_negative()) else { break };
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[i][e].is_positive() {
                let ratio = &rhs[i] / &t[i][e];
                let better = match &leave {
                    None => true,
                    Some((r, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*r]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (r, _) = leave.expect("phase one is bounded below");
        pivot(&mut t, &mut rhs, &mut d, &mut obj, r, e);
        basis[r] = e;
    }
    if obj.is_zero() {
        let mut y = vec![Q::zero(); n];
        for (i, &b) in basis.iter().enumerate() {
            if b < n {
                y[b] = rhs[i].clone();
            }
        }
        LpResult::Feasible { y }
    } else {
        LpResult::Infeasible { x: (0..m).map(|i| d[n + i].clone()).collect() }
    }
}

fn pivot(t: &mut [Vec<Q>], rhs: &mut [Q], d: &mut [Q], obj: &mut Q, r: usize, e: usize) {
    let p = t[r][e].clone();
    let nz: Vec<usize> = (0..t[r].len()).filter(|&j| !t[r][j].is_zero()).collect();
    for &j in &nz {
        t[r][j] = &t[r][j] / &p;
    }
    rhs[r] = &rhs[r] / &p;
    let prow: Vec<(usize, Q)> = nz.iter().map(|&j| (j, t[r][j].clone())).collect();
    let prhs = rhs[r].clone();
    for i in 0..t.len() {
        if i == r || t[i][e].is_zero() {
            continue;
        }
        let k = t[i][e].clone();
        for (j, v) in &prow {
            t[i][*j] -= &k * v;
        }
        rhs[i] -= &k * &prhs;
    }
    if !d[e].is_zero() {
        let k = d[e].clone();
        for (j, v) in &prow {
            d[*j] -= &k * v;
        }
        *obj += &k * &prhs;
    }
}
