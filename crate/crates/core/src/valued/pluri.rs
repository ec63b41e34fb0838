use crate::error::Result;
use crate::num::Q;
use crate::prelude::*;
use num_traits::{One, Signed, Zero};
use rand::Rng;

/// A payoff point `(x, y)` tagged with the family member it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub member: usize,
    pub x: Q,
    pub y: Q,
}

fn in_region(x: &Q, y: &Q, c: &Q, s: &Q) -> bool {
    x >= c && y < s
}

/// Smallest `κ >= 0` with `y - s >= κ (x - c)` for every point, or `None`
/// if a point lies in `R = {x >= c, y < s}` or no slope works.
pub fn polymorphism_slope(points: &[(Q, Q)], c: &Q, s: &Q) -> Option<Q> {
    if points.iter().any(|(x, y)| in_region(x, y, c, s)) {
        return None;
    }
    let mut kappa = Q::zero();
    for (x, y) in points {
        if x < c && y < s {
            let r = (y - s) / (x - c);
            if r > kappa {
                kappa = r;
            }
        }
    }
    points.iter().all(|(x, y)| x < c || y - s >= &kappa * (x - c)).then_some(kappa)
}

/// Whether the segment between two points meets `R`; returns the mixing weight on `q` if so.
pub fn segment_hits_region(p: (&Q, &Q), q: (&Q, &Q), c: &Q, s: &Q) -> Option<Q> {
    let (px, py) = p;
    let (qx, qy) = q;
    // Parametrise z(t) = p + t (q - p), t in [0, 1]; find the t-range where x >= c.
    let dx = qx - px;
    let (lo, hi) = if dx.is_zero() {
        if px >= c {
            (Q::zero(), Q::one())
        } else {
            return None;
        }
    } else {
        let t0 = (c - px) / &dx;
        if dx.is_positive() {
            (t0.max(Q::zero()), Q::one())
        } else {
            (Q::zero(), t0.min(Q::one()))
        }
    };
    if lo > hi {
        return None;
    }
    // y is linear in t, so its minimum over [lo, hi] is at an end.
    for t in [lo, hi] {
        let y = py + &t * (qy - py);
        if y < *s {
            return Some(t);
        }
    }
    None
}

/// A finitely supported mixture of payoff points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mixture {
    pub weights: Vec<(usize, Q)>,
    pub x: Q,
    pub y: Q,
}

impl Mixture {
    fn from(points: &[Point], weights: Vec<(usize, Q)>) -> Mixture {
        let x = weights.iter().map(|(i, w)| w * &points[*i].x).sum();
        let y = weights.iter().map(|(i, w)| w * &points[*i].y).sum();
        Mixture { weights, x, y }
    }

    pub fn violates(&self, c: &Q, s: &Q) -> bool {
        in_region(&self.x, &self.y, c, s)
    }
}

/// Outcome of the three plurimorphism tests on one family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PluriReport {
    /// A single slope for the whole family.
    pub slope: Option<Q>,
    /// Every pair of members (including a member with itself) has a common slope.
    pub pairwise: bool,
    /// No segment between payoff points meets `R`.
    pub segments_avoid: bool,
    /// A two-point mixture landing in `R`, when one exists.
    pub witness: Option<Mixture>,
}

impl PluriReport {
    pub fn is_plurimorphism(&self) -> bool {
        self.slope.is_some()
    }
}

pub fn check_plurimorphism(points: &[Point], members: usize, c: &Q, s: &Q) -> PluriReport {
    let all: Vec<(Q, Q)> = points.iter().map(|p| (p.x.clone(), p.y.clone())).collect();
    let slope = polymorphism_slope(&all, c, s);
    let mut pairwise = true;
    'outer: for j in 0..members {
        for k in j..members {
            let sub: Vec<(Q, Q)> = points.iter().filter(|p| p.member == j || p.member == k).map(|p| (p.x.clone(), p.y.clone())).collect();
            if polymorphism_slope(&sub, c, s).is_none() {
                pairwise = false;
                break 'outer;
            }
        }
    }
    // Distinct points suffice for the segment test.
    let mut uniq: BTreeMap<(Q, Q), usize> = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        uniq.entry((p.x.clone(), p.y.clone())).or_insert(i);
    }
    let idx: Vec<usize> = uniq.values().copied().collect();
    let mut witness = None;
    'seg: for (a, &i) in idx.iter().enumerate() {
        for &k in &idx[a..] {
            let (p, q) = (&points[i], &points[k]);
            if let Some(t) = segment_hits_region((&p.x, &p.y), (&q.x, &q.y), c, s) {
                let weights = if i == k { vec![(i, Q::one())] } else { vec![(i, Q::one() - &t), (k, t)] };
                witness = Some(Mixture::from(points, weights));
                break 'seg;
            }
        }
    }
    PluriReport { slope, pairwise, segments_avoid: witness.is_none(), witness }
}

/// Random finitely supported mixtures; returns one landing in `R` if found.
pub fn sampled_mixture_violation<R: Rng>(points: &[Point], c: &Q, s: &Q, samples: usize, rng: &mut R) -> Result<Option<Mixture>> {
    if points.is_empty() {
        return Ok(None);
    }
    for _ in 0..samples {
        let k = rng.gen_range(1..=points.len().min(4));
        let mut raw = Vec::with_capacity(k);
        for _ in 0..k {
            raw.push((rng.gen_range(0..points.len()), rng.gen_range(1..=8i64)));
        }
        let total: i64 = raw.iter().map(|(_, w)| w).sum();
        let weights = raw.into_iter().map(|(i, w)| (i, crate::num::q(w, total))).collect();
        let m = Mixture::from(points, weights);
        if m.violates(c, s) {
            return Ok(Some(m));
        }
    }
    Ok(None)
}
