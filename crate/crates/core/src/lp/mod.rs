//! Exact rational feasibility of `F y <= q, y >= 0`.

mod fm;
mod simplex;

pub use fm::fm_feasible;
pub use simplex::solve;

use crate::error::{contract, Result};
use crate::num::Q;
use crate::prelude::*;
use num_traits::{Signed, Zero};

/// `F y <= q` with `y >= 0`, rows and columns labelled.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LpSystem {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub f: Vec<Vec<Q>>,
    pub q: Vec<Q>,
}

impl LpSystem {
    pub fn new(col_labels: Vec<String>) -> LpSystem {
        LpSystem { col_labels, ..LpSystem::default() }
    }

    pub fn rows(&self) -> usize {
        self.f.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn push_row(&mut self, label: String, row: Vec<Q>, rhs: Q) {
        debug_assert_eq!(row.len(), self.cols());
        self.row_labels.push(label);
        self.f.push(row);
        self.q.push(rhs);
    }

    pub fn validate(&self) -> Result<()> {
        if self.row_labels.len() != self.f.len() || self.q.len() != self.f.len() {
            return contract("LP: row labels, matrix rows and right-hand side differ in length");
        }
        if self.f.iter().any(|r| r.len() != self.cols()) {
            return contract("LP: ragged coefficient matrix");
        }
        Ok(())
    }
}

/// Outcome of the Farkas alternative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    /// `y >= 0` with `F y <= q`.
    Feasible { y: Vec<Q> },
    /// `x >= 0` with `Fᵀ x >= 0` and `qᵀ x < 0`.
    Infeasible { x: Vec<Q> },
}

impl LpResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpResult::Feasible { .. })
    }
}

/// Exact check of a witness or certificate.
pub fn verify(sys: &LpSystem, res: &LpResult) -> bool {
    if sys.validate().is_err() {
        return false;
    }
    match res {
        LpResult::Feasible { y } => {
            y.len() == sys.cols()
                && y.iter().all(|v| !v.is_negative())
                && sys.f.iter().zip(&sys.q).all(|(row, b)| {
                    let lhs: Q = row.iter().zip(y).filter(|(a, _)| !a.is_zero()).map(|(a, v)| a * v).sum();
                    lhs <= *b
                })
        }
        LpResult::Infeasible { x } => {
            if x.len() != sys.rows() || x.iter().any(Signed::is_negative) {
                return false;
            }
            let qx: Q = sys.q.iter().zip(x).map(|(b, v)| b * v).sum();
            if !qx.is_negative() {
                return false;
            }
            (0..sys.cols()).all(|j| {
                let s: Q = sys.f.iter().zip(x).filter(|(_, v)| !v.is_zero()).map(|(r, v)| &r[j] * v).sum();
                !s.is_negative()
            })
        }
    }
}

/// Solves and checks the answer; a failed check is a bug and panics.
pub fn solve_verified(sys: &LpSystem) -> Result<LpResult> {
    sys.validate()?;
    let r = solve(sys);
    assert!(verify(sys, &r), "simplex produced an unverifiable answer");
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::qi;
    use proptest::prelude::*;

    fn sys(f: Vec<Vec<i64>>, q: Vec<i64>) -> LpSystem {
        let cols = f.first().map_or(0, Vec::len);
        LpSystem {
            row_labels: (0..f.len()).map(|i| format!("r{i}")).collect(),
            col_labels: (0..cols).map(|j| format!("y{j}")).collect(),
            f: f.into_iter().map(|r| r.into_iter().map(qi).collect()).collect(),
            q: q.into_iter().map(qi).collect(),
        }
    }

    #[test]
    fn trivial_feasible_at_origin() {
        let s = sys(vec![vec![1, 1]], vec![3]);
        assert_eq!(solve(&s), LpResult::Feasible { y: vec![qi(0), qi(0)] });
    }

    #[test]
    fn infeasible_pair_gives_certificate() {
        // y1 + y2 >= 3 and y1 + y2 <= 2
        let s = sys(vec![vec![-1, -1], vec![1, 1]], vec![-3, 2]);
        let r = solve(&s);
        assert!(matches!(r, LpResult::Infeasible { .. }));
        assert!(verify(&s, &r));
        assert!(!fm_feasible(&s).unwrap());
    }

    #[test]
    fn feasible_needs_phase_one() {
        // y1 >= 1, y2 >= 2, y1 + y2 <= 4
        let s = sys(vec![vec![-1, 0], vec![0, -1], vec![1, 1]], vec![-1, -2, 4]);
        let r = solve(&s);
        assert!(r.is_feasible());
        assert!(verify(&s, &r));
        assert!(fm_feasible(&s).unwrap());
    }

    #[test]
    fn tampered_certificate_rejected() {
        let s = sys(vec![vec![-1, -1], vec![1, 1]], vec![-3, 2]);
        assert!(!verify(&s, &LpResult::Infeasible { x: vec![qi(1), qi(0)] }));
        assert!(!verify(&s, &LpResult::Feasible { y: vec![qi(3), qi(0)] }));
    }

    proptest! {
        #[test]
        fn simplex_agrees_with_elimination(
            (rows, cols, entries, rhs) in (1usize..=6, 1usize..=3).prop_flat_map(|(r, c)| {
                (Just(r), Just(c), proptest::collection::vec(-3i64..=3, r * c), proptest::collection::vec(-4i64..=4, r))
            })
        ) {
            let f = (0..rows).map(|i| entries[i * cols..(i + 1) * cols].to_vec()).collect();
            let s = sys(f, rhs);
            let r = solve(&s);
            prop_assert!(verify(&s, &r));
            prop_assert_eq!(r.is_feasible(), fm_feasible(&s).unwrap());
        }
    }
}
