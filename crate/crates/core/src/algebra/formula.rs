use crate::algebra::signature::Signature;
use crate::algebra::structure::ValuedStructure;
use crate::error::{contract, Result};
use crate::num::{fmt_q, is_nonneg, Ext, Q};
use crate::prelude::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Var {
    pub name: String,
    pub sort: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub weight: Q,
    pub sym: usize,
    pub args: Vec<usize>,
}

/// `Σ_i w_i φ_i(x_i)` over a sorted variable set.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PayoffFormula {
    pub vars: Vec<Var>,
    pub constraints: Vec<Constraint>,
}

impl PayoffFormula {
    pub fn new(vars: Vec<Var>, constraints: Vec<Constraint>, sig: &Signature) -> Result<PayoffFormula> {
        let f = PayoffFormula { vars, constraints };
        f.validate(sig)?;
        Ok(f)
    }

    pub fn validate(&self, sig: &Signature) -> Result<()> {
        let mut names = BTreeSet::new();
        for v in &self.vars {
            if v.sort >= sig.sorts.len() {
                return contract(format!("variable {}: unknown sort", v.name));
            }
            if !names.insert(v.name.as_str()) {
                return contract(format!("duplicate variable {}", v.name));
            }
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if !is_nonneg(&c.weight) {
                return contract(format!("constraint {i}: negative weight {}", fmt_q(&c.weight)));
            }
            let Some(decl) = sig.symbols.get(c.sym) else {
                return contract(format!("constraint {i}: unknown symbol"));
            };
            if decl.arity() != c.args.len() {
                return contract(format!("constraint {i}: {} expects {} arguments", decl.name, decl.arity()));
            }
            for (z, &x) in c.args.iter().enumerate() {
                let Some(v) = self.vars.get(x) else {
                    return contract(format!("constraint {i}: unknown variable index {x}"));
                };
                if v.sort != decl.sorts[z] {
                    return contract(format!(
                        "constraint {i}: variable {} has sort {}, coordinate {} of {} needs {}",
                        v.name, sig.sorts[v.sort], decl.coords[z], decl.name, sig.sorts[decl.sorts[z]]
                    ));
                }
            }
        }
        Ok(())
    }

    /// `w(Φ)`: sum of weights.
    pub fn weight(&self) -> Q {
        self.constraints.iter().map(|c| &c.weight).sum()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// `Φ^A(h)` where `h` maps variables to element ids.
    pub fn evaluate(&self, s: &ValuedStructure, h: &[usize]) -> Ext {
        let mut total = Q::from_integer(0.into());
        let mut args = Vec::new();
        for c in &self.constraints {
            args.clear();
            args.extend(c.args.iter().map(|&x| h[x]));
            match s.value_elems(c.sym, &args) {
                Ext::NegInf => return Ext::NegInf,
                Ext::Fin(v) => {
                    if !num_traits::Zero::is_zero(&c.weight) {
                        total += v * &c.weight;
                    }
                }
            }
        }
        Ext::Fin(total)
    }

    /// Checks that `h` respects variable sorts.
    pub fn check_assignment(&self, s: &ValuedStructure, h: &[usize]) -> Result<()> {
        if h.len() != self.vars.len() {
            return contract("assignment length differs from the variable count");
        }
        for (v, &e) in self.vars.iter().zip(h) {
            if e >= s.dom.len() || s.dom.sort_of(e) != v.sort {
                return contract(format!("variable {}: value of the wrong sort", v.name));
            }
        }
        Ok(())
    }

    /// Multiplies every weight by `k >= 0`.
    pub fn scaled(&self, k: &Q) -> PayoffFormula {
        let mut f = self.clone();
        for c in &mut f.constraints {
            c.weight = &c.weight * k;
        }
        f
    }
}
