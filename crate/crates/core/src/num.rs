//! Exact rationals and the extended value set `Q ∪ {-inf}`.

use alloc::format;
use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Contract(format!("malformed rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Always renders as `"p/q"`.
/// `p/q` in lowest terms, or just `p` for integers.
pub fn fmt_q(x: &Q) -> String {
    format!("{x}")
}

pub fn is_nonneg(x: &Q) -> bool {
    !x.is_negative()
}

/// A value in `Q ∪ {-inf}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ext {
    NegInf,
    Fin(Q),
}

impl Ext {
    pub fn zero() -> Ext {
        Ext::Fin(Q::zero())
    }

    pub fn int(n: i64) -> Ext {
        Ext::Fin(qi(n))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Ext::Fin(_))
    }

    pub fn finite(&self) -> Option<&Q> {
        match self {
            Ext::Fin(x) => Some(x),
            Ext::NegInf => None,
        }
    }

    pub fn add(&self, other: &Ext) -> Ext {
        match (self, other) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a + b),
            _ => Ext::NegInf,
        }
    }

    /// `w * self` for a weight `w >= 0`, with `0 * -inf = -inf`.
    pub fn scale(&self, w: &Q) -> Ext {
        match self {
            Ext::Fin(a) => Ext::Fin(a * w),
            Ext::NegInf => Ext::NegInf,
        }
    }

    pub fn sub_q(&self, c: &Q) -> Ext {
        match self {
            Ext::Fin(a) => Ext::Fin(a - c),
            Ext::NegInf => Ext::NegInf,
        }
    }

    pub fn ge_q(&self, c: &Q) -> bool {
        matches!(self, Ext::Fin(a) if a >= c)
    }

    pub fn lt_q(&self, c: &Q) -> bool {
        !self.ge_q(c)
    }

    pub fn parse(s: &str) -> Result<Ext> {
        if s.trim() == "-inf" {
            Ok(Ext::NegInf)
        } else {
            parse_q(s).map(Ext::Fin)
        }
    }

    pub fn render(&self) -> String {
        match self {
            Ext::NegInf => String::from("-inf"),
            Ext::Fin(x) => fmt_q(x),
        }
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ext {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Ext::NegInf, Ext::NegInf) => Ordering::Equal,
            (Ext::NegInf, Ext::Fin(_)) => Ordering::Less,
            (Ext::Fin(_), Ext::NegInf) => Ordering::Greater,
            (Ext::Fin(a), Ext::Fin(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl From<Q> for Ext {
    fn from(x: Q) -> Ext {
        Ext::Fin(x)
    }
}

pub(crate) fn one() -> Q {
    Q::one()
}

pub(crate) fn zero() -> Q {
    Q::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render_round_trip() {
        assert_eq!(parse_q("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_q("-4").unwrap(), qi(-4));
        assert_eq!(fmt_q(&q(-2, 4)), "-1/2");
        assert_eq!(fmt_q(&qi(3)), "3");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
        assert_eq!(Ext::parse("-inf").unwrap(), Ext::NegInf);
    }

    #[test]
    fn zero_weight_keeps_infeasibility() {
        assert_eq!(Ext::NegInf.scale(&zero()), Ext::NegInf);
        assert_eq!(Ext::int(5).scale(&zero()), Ext::zero());
        assert!(Ext::NegInf < Ext::int(-1000));
    }
}
