//! Transport of VMC instances along a distribution of minion homomorphisms.

use super::mc::VmcInstance;
use crate::algebra::NaryFunction;
use crate::canonical::Beta;
use crate::error::{contract, Result};
use crate::num::Q;
use crate::polymorphism::{MinionCache, MinionHomTable};
use crate::prelude::*;
use num_traits::{One, Signed, Zero};

/// A distribution `Ξ` over minion homomorphisms, queried one function at a time.
pub trait HomDistribution {
    /// `E_{ξ∼Ξ} β'(ξ(f))` when `f` lies in the support minion, `None` otherwise.
    fn expectation(&self, f: &NaryFunction, beta: &Beta) -> Result<Option<Q>>;
}

/// Finitely many tabulated homomorphisms with probabilities, plus an optional support.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiniteHomDistribution {
    pub homs: Vec<(Q, MinionHomTable)>,
    /// Functions of the support per arity; when absent, every tabulated function counts.
    pub support: Option<BTreeMap<usize, BTreeSet<NaryFunction>>>,
}

impl FiniteHomDistribution {
    pub fn point(xi: MinionHomTable) -> FiniteHomDistribution {
        FiniteHomDistribution { homs: vec![(Q::one(), xi)], support: None }
    }

    pub fn validate(&self) -> Result<()> {
        crate::valued::check_distribution(self.homs.iter().map(|(p, _)| p), "hom distribution")
    }
}

impl HomDistribution for FiniteHomDistribution {
    fn expectation(&self, f: &NaryFunction, beta: &Beta) -> Result<Option<Q>> {
        if let Some(s) = &self.support {
            if !s.get(&f.arity).is_some_and(|l| l.contains(f)) {
                return Ok(None);
            }
        }
        let mut e = Q::zero();
        for (p, xi) in &self.homs {
            let Some(g) = xi.get(f) else {
                return contract(format!("homomorphism has no image for a function of arity {}", f.arity));
            };
            e += p * beta.get(g);
        }
        Ok(Some(e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SentinelPolicy {
    /// `-(max(C, 0)·|U| + 1)`.
    Guarded,
    /// `-(|C|·|U| + 1)`.
    Absolute,
}

/// `C = max β'_u`, taken over explicit entries and defaults.
fn max_beta(inst: &VmcInstance) -> Q {
    inst.beta.iter().flat_map(|b| core::iter::once(&b.default).chain(b.entries.values())).max().cloned().unwrap_or_default()
}

pub fn sentinel(inst: &VmcInstance, policy: &SentinelPolicy) -> Q {
    let c = max_beta(inst);
    let base = match policy {
        SentinelPolicy::Guarded => {
            if c.is_positive() {
                c
            } else {
                Q::zero()
            }
        }
        SentinelPolicy::Absolute => c.abs(),
    };
    -(base * Q::from_integer((inst.mc.u.len() as i64).into()) + Q::one())
}

/// Replaces `β'_u` by `f ↦ E β'_u(ξ(f))` on the support and the sentinel elsewhere.
/// `cache` enumerates `M^{(D_u)}` for the target problem's minion.
pub fn between_vmcs(
    inst: &VmcInstance,
    cache: &mut MinionCache,
    hom: &dyn HomDistribution,
    policy: &SentinelPolicy,
) -> Result<VmcInstance> {
    inst.validate()?;
    let low = sentinel(inst, policy);
    let mut beta = Vec::with_capacity(inst.beta.len());
    for (x, old) in inst.mc.u.iter().zip(&inst.beta) {
        let level = cache.level(x.domain.len())?;
        let mut b = Beta::constant(low.clone());
        for f in &level.functions {
            if let Some(v) = hom.expectation(f, old)? {
                b.set(f.clone(), v);
            }
        }
        beta.push(b);
    }
    Ok(VmcInstance { beta, ..inst.clone() })
}
