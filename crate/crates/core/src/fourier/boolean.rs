use crate::algebra::NaryFunction;
use crate::error::{contract, Error, Result};
use crate::num::{one, qi, zero, Q};
use crate::prelude::*;

/// Default bound on `|N|` for [`fourier_expand`].
pub const FOURIER_MAX_ARITY: usize = 6;

/// A Boolean function `{1,-1}^N → {1,-1}`.
///
/// Tuples are bit masks: bit `n` is set iff coordinate `n` is `-1`. This is the
/// same order as [`NaryFunction`] tables over the domain `["1", "-1"]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PmFunction {
    arity: usize,
    table: Vec<i8>,
}

/// `χ_I(a) = Π_{i∈I} a(i)`.
pub fn chi_value(set: u32, a: u32) -> i8 {
    if (set & a).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

impl PmFunction {
    pub fn new(arity: usize, table: Vec<i8>) -> Result<PmFunction> {
        if arity >= 31 || table.len() != 1usize << arity {
            return contract(format!("a function of arity {arity} needs {} values", 1u64 << arity.min(63)));
        }
        if table.iter().any(|&v| v != 1 && v != -1) {
            return contract("values must be 1 or -1");
        }
        Ok(PmFunction { arity, table })
    }

    pub fn from_fn(arity: usize, f: impl Fn(u32) -> i8) -> Result<PmFunction> {
        if arity >= 31 {
            return contract("arity too large");
        }
        PmFunction::new(arity, (0..1u32 << arity).map(f).collect())
    }

    pub fn projection(arity: usize, n: usize) -> Result<PmFunction> {
        if n >= arity {
            return contract(format!("no coordinate {n} in arity {arity}"));
        }
        PmFunction::from_fn(arity, |a| chi_value(1 << n, a))
    }

    pub fn chi(arity: usize, set: u32) -> Result<PmFunction> {
        if arity < 32 && set >> arity != 0 {
            return contract("set is not a subset of the coordinates");
        }
        PmFunction::from_fn(arity, |a| chi_value(set, a))
    }

    pub fn constant(arity: usize, v: i8) -> Result<PmFunction> {
        PmFunction::from_fn(arity, |_| v)
    }

    /// The `index`-th function of the arity: bit `a` of `index` set iff `f(a) = -1`.
    pub fn from_index(arity: usize, index: u64) -> Result<PmFunction> {
        if arity > 6 {
            return contract("function indices only cover arity <= 6");
        }
        PmFunction::from_fn(arity, |a| if index >> a & 1 == 1 { -1 } else { 1 })
    }

    pub fn index(&self) -> u64 {
        self.table.iter().enumerate().filter(|(_, &v)| v == -1).fold(0, |m, (a, _)| m | 1 << a)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[i8] {
        &self.table
    }

    pub fn value(&self, a: u32) -> i8 {
        self.table[a as usize]
    }

    /// `f^{(π)}(a) = f(a∘π)` for `π: N → N'`.
    pub fn minor(&self, pi: &[usize], target: usize) -> Result<PmFunction> {
        if pi.len() != self.arity || pi.iter().any(|&j| j >= target) {
            return contract("minor map does not fit");
        }
        PmFunction::from_fn(target, |a| self.value(compose(a, pi)))
    }

    pub fn is_folded(&self) -> bool {
        let full = full_mask(self.arity);
        (0..self.table.len() as u32).all(|a| self.value(a) == -self.value(a ^ full))
    }

    pub fn to_nary(&self) -> NaryFunction {
        NaryFunction { arity: self.arity, table: self.table.iter().map(|&v| u32::from(v == -1)).collect() }
    }

    pub fn from_nary(f: &NaryFunction) -> Result<PmFunction> {
        if f.table.iter().any(|&p| p > 1) {
            return contract("not a Boolean function");
        }
        PmFunction::new(f.arity, f.table.iter().map(|&p| if p == 1 { -1 } else { 1 }).collect())
    }
}

pub(crate) fn full_mask(arity: usize) -> u32 {
    ((1u64 << arity) - 1) as u32
}

/// Mask of `a∘π`: bit `j` is bit `π(j)` of `a`.
pub(crate) fn compose(a: u32, pi: &[usize]) -> u32 {
    pi.iter().enumerate().fold(0, |m, (j, &p)| m | ((a >> p & 1) << j))
}

/// Representatives `A^N_*`: tuples with `+1` at coordinate 0.
pub fn is_representative(a: u32) -> bool {
    a & 1 == 0
}

/// `⌊a⌋`: `a` or `-a`, whichever is a representative.
pub fn representative(a: u32, arity: usize) -> u32 {
    if is_representative(a) {
        a
    } else {
        a ^ full_mask(arity)
    }
}

/// `⌊f⌋(a) = f(a)` on representatives and `-f(-a)` elsewhere.
pub fn fold(f: &PmFunction) -> Result<PmFunction> {
    if f.arity == 0 {
        return contract("folding needs a nonempty coordinate set");
    }
    let full = full_mask(f.arity);
    PmFunction::from_fn(f.arity, |a| if is_representative(a) { f.value(a) } else { -f.value(a ^ full) })
}

/// Coefficients `f̂_I = ⟨f, χ_I⟩`, indexed by the mask of `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierExpansion {
    pub arity: usize,
    pub coeffs: Vec<Q>,
}

impl FourierExpansion {
    pub fn coeff(&self, set: u32) -> &Q {
        &self.coeffs[set as usize]
    }

    /// `Σ_I f̂_I χ_I(a)` at every `a`.
    pub fn reconstruct(&self) -> Vec<Q> {
        (0..self.coeffs.len() as u32)
            .map(|a| self.coeffs.iter().enumerate().fold(zero(), |acc, (i, c)| if chi_value(i as u32, a) == 1 { acc + c } else { acc - c }))
            .collect()
    }

    /// `Σ_I f̂_I²`.
    pub fn mass(&self) -> Q {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

pub fn fourier_expand(f: &PmFunction) -> Result<FourierExpansion> {
    fourier_expand_bounded(f, FOURIER_MAX_ARITY)
}

/// Exact Walsh-Hadamard transform divided by `2^{|N|}`.
pub fn fourier_expand_bounded(f: &PmFunction, bound: usize) -> Result<FourierExpansion> {
    if f.arity > bound {
        return Err(Error::ResourceLimit {
            what: String::from("Fourier expansion"),
            needed: format!("arity {} ({} coefficients)", f.arity, 1u64 << f.arity),
            limit: format!("arity {bound}"),
        });
    }
    let mut w: Vec<i64> = f.table.iter().map(|&v| i64::from(v)).collect();
    let mut h = 1;
    while h < w.len() {
        for i in (0..w.len()).step_by(2 * h) {
            for j in i..i + h {
                let (x, y) = (w[j], w[j + h]);
                w[j] = x + y;
                w[j + h] = x - y;
            }
        }
        h *= 2;
    }
    let scale = qi(1i64 << f.arity);
    Ok(FourierExpansion { arity: f.arity, coeffs: w.into_iter().map(|c| qi(c) / &scale).collect() })
}

/// `Λ(f)(d) = Σ_{d∈I} p̂_I² / |I|` with `p = ⌊f⌋`.
pub fn lambda_dist(f: &PmFunction) -> Result<Vec<Q>> {
    Ok(lambda_from_expansion(&fourier_expand(&fold(f)?)?))
}

pub(crate) fn lambda_from_expansion(p: &FourierExpansion) -> Vec<Q> {
    let mut out = vec![zero(); p.arity];
    for (i, c) in p.coeffs.iter().enumerate().skip(1) {
        if num_traits::Zero::is_zero(c) {
            continue;
        }
        let size = (i as u32).count_ones();
        let share = c * c / qi(i64::from(size));
        for (d, slot) in out.iter_mut().enumerate() {
            if i >> d & 1 == 1 {
                *slot += &share;
            }
        }
    }
    out
}

/// `{n' : |π^{-1}(n') ∩ I| odd}`.
pub fn oddim(pi: &[usize], set: u32) -> u32 {
    pi.iter().enumerate().filter(|(i, _)| set >> i & 1 == 1).fold(0, |m, (_, &p)| m ^ (1 << p))
}

/// `E_ν χ_K(ν)` with independent `ν(k) = -1` w.p. `δ`: `(1 - 2δ)^{|K|}`.
pub fn noise_expectation(delta: &Q, size: usize) -> Q {
    let base = one() - qi(2) * delta;
    (0..size).fold(one(), |acc, _| acc * &base)
}
