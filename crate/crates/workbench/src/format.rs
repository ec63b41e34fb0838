//! JSON file formats. Rationals are strings `"p/q"` (or `"p"`), payoffs may also be `"-inf"`.
//!
//! Tables of a structure list the values of a symbol in tuple-rank order: positions within each
//! coordinate's sort, coordinate 0 least significant. Functions are lists of target positions in
//! cell order, which is the same little-endian order per sort.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use vpcsp_core::algebra::{
    Constraint, Domain, NaryFunction, Params, PayoffFormula, Signature, SymbolDecl, ValuedStructure, ValuedTemplate, Var,
};
use vpcsp_core::canonical::Beta;
use vpcsp_core::lp::{LpResult, LpSystem};
use vpcsp_core::num::{fmt_q, parse_q, Ext, Q};
use vpcsp_core::reductions::{McInstance, McVar, MinorCondition, VmcInstance};
use vpcsp_core::valued::Weighting;

/// A load failure located by a JSON pointer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{pointer}: {message}")]
pub struct FormatError {
    pub pointer: String,
    pub message: String,
}

fn fail<T>(pointer: impl Into<String>, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError { pointer: pointer.into(), message: message.into() })
}

fn escape(seg: &str) -> String {
    seg.replace('~', "~0").replace('/', "~1")
}

/// Deserializes `text`, reporting structural errors at their JSON pointer.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|err| {
        let mut pointer = String::new();
        for seg in err.path().iter() {
            use serde_path_to_error::Segment;
            match seg {
                Segment::Seq { index } => pointer.push_str(&format!("/{index}")),
                Segment::Map { key } => pointer.push_str(&format!("/{}", escape(key))),
                Segment::Enum { variant } => pointer.push_str(&format!("/{}", escape(variant))),
                Segment::Unknown => pointer.push_str("/?"),
            }
        }
        FormatError { pointer, message: err.into_inner().to_string() }
    })
}

fn rat(s: &str, at: &str) -> Result<Q, FormatError> {
    parse_q(s).or_else(|_| fail(at, format!("expected a rational \"p/q\", found {s:?}")))
}

fn prob(s: &str, at: &str) -> Result<Q, FormatError> {
    let p = rat(s, at)?;
    if p < Q::from_integer(0.into()) {
        return fail(at, format!("negative probability {s}"));
    }
    Ok(p)
}

fn ext(s: &str, at: &str) -> Result<Ext, FormatError> {
    Ext::parse(s).or_else(|_| fail(at, format!("expected a rational or \"-inf\", found {s:?}")))
}

fn sum_to_one(probs: &[Q], at: &str, what: &str) -> Result<(), FormatError> {
    let total: Q = probs.iter().sum();
    if total != Q::from_integer(1.into()) {
        return fail(at, format!("{what} sums to {}, not 1", fmt_q(&total)));
    }
    Ok(())
}

fn rats(v: &[String], at: &str) -> Result<Vec<Q>, FormatError> {
    v.iter().enumerate().map(|(i, s)| rat(s, &format!("{at}/{i}"))).collect()
}

fn strs(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolFile {
    pub name: String,
    pub sorts: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementFile {
    pub label: String,
    pub sort: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub domain: Vec<ElementFile>,
    pub tables: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemplateFile {
    pub sorts: Vec<String>,
    pub symbols: Vec<SymbolFile>,
    pub a: StructureFile,
    pub b: StructureFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<String>,
}

fn sort_index(sorts: &[String], name: &str, at: &str) -> Result<usize, FormatError> {
    match sorts.iter().position(|s| s == name) {
        Some(i) => Ok(i),
        None => fail(at, format!("unknown sort {name:?}")),
    }
}

fn structure(sig: &Signature, f: &StructureFile, at: &str) -> Result<ValuedStructure, FormatError> {
    let mut elems = Vec::new();
    for (i, e) in f.domain.iter().enumerate() {
        elems.push((e.label.clone(), sort_index(&sig.sorts, &e.sort, &format!("{at}/domain/{i}/sort"))?));
    }
    let dom = Domain::new(sig.sorts.len(), elems).or_else(|e| fail(format!("{at}/domain"), e.to_string()))?;
    for name in f.tables.keys() {
        if sig.symbol_index(name).is_none() {
            return fail(format!("{at}/tables/{}", escape(name)), "table for an undeclared symbol");
        }
    }
    let mut tables = Vec::new();
    for decl in &sig.symbols {
        let tat = format!("{at}/tables/{}", escape(&decl.name));
        let Some(raw) = f.tables.get(&decl.name) else {
            return fail(tat, format!("missing table for {}", decl.name));
        };
        let expected: usize = decl.sorts.iter().map(|&t| dom.sort_size(t)).product();
        if raw.len() != expected {
            return fail(tat, format!("{} entries, expected {expected}", raw.len()));
        }
        tables.push(raw.iter().enumerate().map(|(i, s)| ext(s, &format!("{tat}/{i}"))).collect::<Result<Vec<_>, _>>()?);
    }
    ValuedStructure::new(sig.clone(), dom, tables).or_else(|e| fail(at, e.to_string()))
}

impl TemplateFile {
    pub fn to_template(&self) -> Result<ValuedTemplate, FormatError> {
        let mut symbols = Vec::new();
        for (i, s) in self.symbols.iter().enumerate() {
            let sorts = s
                .sorts
                .iter()
                .enumerate()
                .map(|(j, t)| sort_index(&self.sorts, t, &format!("/symbols/{i}/sorts/{j}")))
                .collect::<Result<Vec<_>, _>>()?;
            let coords = s.coords.clone().unwrap_or_else(|| (0..sorts.len()).map(|z| z.to_string()).collect());
            symbols.push(SymbolDecl { name: s.name.clone(), coords, sorts });
        }
        let sig = Signature::new(self.sorts.clone(), symbols).or_else(|e| fail("/symbols", e.to_string()))?;
        let a = structure(&sig, &self.a, "/a")?;
        let b = structure(&sig, &self.b, "/b")?;
        let params = match (&self.c, &self.s, &self.kappa) {
            (Some(c), Some(s), None) => Params::Gap { c: rat(c, "/c")?, s: rat(s, "/s")? },
            (None, None, Some(k)) => Params::ConstantFactor { kappa: rat(k, "/kappa")? },
            _ => return fail("", "give either both c and s, or kappa"),
        };
        ValuedTemplate::new(a, b, params).or_else(|e| fail("", e.to_string()))
    }

    pub fn from_template(t: &ValuedTemplate) -> TemplateFile {
        let sig = t.sig();
        let structure = |s: &ValuedStructure| StructureFile {
            domain: (0..s.dom.len())
                .map(|e| ElementFile { label: s.dom.label(e).to_string(), sort: sig.sorts[s.dom.sort_of(e)].clone() })
                .collect(),
            tables: sig.symbols.iter().enumerate().map(|(i, d)| (d.name.clone(), s.table(i).iter().map(Ext::render).collect())).collect(),
        };
        let (c, s, kappa) = match &t.params {
            Params::Gap { c, s } => (Some(fmt_q(c)), Some(fmt_q(s)), None),
            Params::ConstantFactor { kappa } => (None, None, Some(fmt_q(kappa))),
        };
        TemplateFile {
            sorts: sig.sorts.clone(),
            symbols: sig
                .symbols
                .iter()
                .map(|d| SymbolFile {
                    name: d.name.clone(),
                    sorts: d.sorts.iter().map(|&t| sig.sorts[t].clone()).collect(),
                    coords: Some(d.coords.clone()),
                })
                .collect(),
            a: structure(&t.a),
            b: structure(&t.b),
            c,
            s,
            kappa,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarFile {
    pub name: String,
    pub sort: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintFile {
    pub weight: String,
    pub symbol: String,
    pub args: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormulaFile {
    pub vars: Vec<VarFile>,
    pub constraints: Vec<ConstraintFile>,
}

impl FormulaFile {
    pub fn to_formula(&self, sig: &Signature) -> Result<PayoffFormula, FormatError> {
        let mut vars = Vec::new();
        for (i, v) in self.vars.iter().enumerate() {
            vars.push(Var { name: v.name.clone(), sort: sort_index(&sig.sorts, &v.sort, &format!("/vars/{i}/sort"))? });
        }
        let mut constraints = Vec::new();
        for (i, c) in self.constraints.iter().enumerate() {
            let at = format!("/constraints/{i}");
            let weight = rat(&c.weight, &format!("{at}/weight"))?;
            let Some(sym) = sig.symbol_index(&c.symbol) else {
                return fail(format!("{at}/symbol"), format!("unknown symbol {:?}", c.symbol));
            };
            let mut args = Vec::new();
            for (j, a) in c.args.iter().enumerate() {
                match vars.iter().position(|v: &Var| v.name == *a) {
                    Some(x) => args.push(x),
                    None => return fail(format!("{at}/args/{j}"), format!("unknown variable {a:?}")),
                }
            }
            let con = Constraint { weight, sym, args };
            let single = PayoffFormula { vars: vars.clone(), constraints: vec![con.clone()] };
            single.validate(sig).or_else(|e| fail(&at, e.to_string()))?;
            constraints.push(con);
        }
        PayoffFormula::new(vars, constraints, sig).or_else(|e| fail("", e.to_string()))
    }

    pub fn from_formula(f: &PayoffFormula, sig: &Signature) -> FormulaFile {
        FormulaFile {
            vars: f.vars.iter().map(|v| VarFile { name: v.name.clone(), sort: sig.sorts[v.sort].clone() }).collect(),
            constraints: f
                .constraints
                .iter()
                .map(|c| ConstraintFile {
                    weight: fmt_q(&c.weight),
                    symbol: sig.symbols[c.sym].name.clone(),
                    args: c.args.iter().map(|&x| f.vars[x].name.clone()).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedFunction {
    pub function: Vec<u32>,
    pub p: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightingFile {
    pub input: Vec<String>,
    pub output: Vec<WeightedFunction>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightingsFile {
    pub weightings: Vec<WeightingFile>,
}

impl WeightingsFile {
    /// Distributions are checked here; polymorphism of the support needs a template and is left to the caller.
    pub fn to_weightings(&self) -> Result<Vec<Weighting>, FormatError> {
        let mut out = Vec::new();
        for (i, w) in self.weightings.iter().enumerate() {
            let at = format!("/weightings/{i}");
            let input = w.input.iter().enumerate().map(|(j, s)| prob(s, &format!("{at}/input/{j}"))).collect::<Result<Vec<_>, _>>()?;
            sum_to_one(&input, &format!("{at}/input"), "input distribution")?;
            let mut output = BTreeMap::new();
            for (j, o) in w.output.iter().enumerate() {
                let p = prob(&o.p, &format!("{at}/output/{j}/p"))?;
                if p == Q::from_integer(0.into()) {
                    return fail(format!("{at}/output/{j}/p"), "stored probabilities must be positive");
                }
                let f = NaryFunction { arity: input.len(), table: o.function.clone() };
                if output.insert(f, p).is_some() {
                    return fail(format!("{at}/output/{j}/function"), "function listed twice");
                }
            }
            let probs: Vec<Q> = output.values().cloned().collect();
            sum_to_one(&probs, &format!("{at}/output"), "output distribution")?;
            out.push(Weighting::new(input, output).or_else(|e| fail(&at, e.to_string()))?);
        }
        Ok(out)
    }

    pub fn from_weightings(ws: &[Weighting]) -> WeightingsFile {
        WeightingsFile {
            weightings: ws
                .iter()
                .map(|w| WeightingFile {
                    input: strs(&w.input),
                    output: w.output.iter().map(|(f, p)| WeightedFunction { function: f.table.clone(), p: fmt_q(p) }).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McVarFile {
    pub name: String,
    pub domain: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionFile {
    pub u: String,
    pub v: String,
    pub pi: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaEntry {
    pub function: Vec<u32>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaFile {
    pub default: String,
    #[serde(default)]
    pub entries: Vec<BetaEntry>,
}

/// A minor condition instance; with `alpha` and `beta` it is valued.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub k: usize,
    pub u: Vec<McVarFile>,
    pub v: Vec<McVarFile>,
    pub conditions: Vec<ConditionFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<BetaFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub completeness: Option<String>,
}

fn beta_value(s: &str, at: &str) -> Result<Q, FormatError> {
    if s.trim() == "-inf" {
        return fail(at, "beta values must be rational; -inf is not allowed");
    }
    rat(s, at)
}

impl InstanceFile {
    pub fn to_mc(&self) -> Result<McInstance, FormatError> {
        let vars = |xs: &[McVarFile]| xs.iter().map(|x| McVar { name: x.name.clone(), domain: x.domain.clone() }).collect::<Vec<_>>();
        let (u, v) = (vars(&self.u), vars(&self.v));
        let mut conditions = Vec::new();
        for (i, c) in self.conditions.iter().enumerate() {
            let at = format!("/conditions/{i}");
            let Some(cu) = u.iter().position(|x| x.name == c.u) else {
                return fail(format!("{at}/u"), format!("unknown U-variable {:?}", c.u));
            };
            let Some(cv) = v.iter().position(|x| x.name == c.v) else {
                return fail(format!("{at}/v"), format!("unknown V-variable {:?}", c.v));
            };
            conditions.push(MinorCondition { u: cu, v: cv, pi: c.pi.clone() });
        }
        let mc = McInstance { k: self.k, u, v, conditions };
        mc.validate().or_else(|e| fail("", e.to_string()))?;
        Ok(mc)
    }

    pub fn to_vmc(&self) -> Result<VmcInstance, FormatError> {
        let mc = self.to_mc()?;
        let (Some(alpha), Some(beta)) = (&self.alpha, &self.beta) else {
            return fail("", "a valued instance needs alpha and beta");
        };
        if alpha.len() != mc.u.len() {
            return fail("/alpha", format!("{} entries, one per U-variable ({}) expected", alpha.len(), mc.u.len()));
        }
        if beta.len() != mc.u.len() {
            return fail("/beta", format!("{} entries, one per U-variable ({}) expected", beta.len(), mc.u.len()));
        }
        let alpha = alpha.iter().enumerate().map(|(i, a)| rats(a, &format!("/alpha/{i}"))).collect::<Result<Vec<_>, _>>()?;
        let mut betas = Vec::new();
        for (i, b) in beta.iter().enumerate() {
            let at = format!("/beta/{i}");
            let mut out = Beta::constant(beta_value(&b.default, &format!("{at}/default"))?);
            for (j, e) in b.entries.iter().enumerate() {
                let f = NaryFunction { arity: mc.u[i].domain.len(), table: e.function.clone() };
                out.set(f, beta_value(&e.value, &format!("{at}/entries/{j}/value"))?);
            }
            betas.push(out);
        }
        let completeness = self.completeness.as_deref().map(|c| rat(c, "/completeness")).transpose()?;
        let inst = VmcInstance { mc, alpha, beta: betas, completeness };
        inst.validate().or_else(|e| fail("", e.to_string()))?;
        Ok(inst)
    }

    pub fn from_mc(mc: &McInstance) -> InstanceFile {
        let vars = |xs: &[McVar]| xs.iter().map(|x| McVarFile { name: x.name.clone(), domain: x.domain.clone() }).collect();
        InstanceFile {
            k: mc.k,
            u: vars(&mc.u),
            v: vars(&mc.v),
            conditions: mc
                .conditions
                .iter()
                .map(|c| ConditionFile { u: mc.u[c.u].name.clone(), v: mc.v[c.v].name.clone(), pi: c.pi.clone() })
                .collect(),
            alpha: None,
            beta: None,
            completeness: None,
        }
    }

    pub fn from_vmc(inst: &VmcInstance) -> InstanceFile {
        InstanceFile {
            alpha: Some(inst.alpha.iter().map(|a| strs(a)).collect()),
            beta: Some(inst.beta.iter().map(beta_file).collect()),
            completeness: inst.completeness.as_ref().map(fmt_q),
            ..InstanceFile::from_mc(&inst.mc)
        }
    }
}

pub fn beta_file(b: &Beta) -> BetaFile {
    BetaFile {
        default: fmt_q(&b.default),
        entries: b.entries.iter().map(|(f, v)| BetaEntry { function: f.table.clone(), value: fmt_q(v) }).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LpRowFile {
    pub label: String,
    pub coeffs: Vec<String>,
    pub rhs: String,
}

/// `F y <= q` with `y >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LpFile {
    pub columns: Vec<String>,
    pub rows: Vec<LpRowFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase", deny_unknown_fields)]
pub enum LpResultFile {
    Feasible { y: Vec<String> },
    Infeasible { x: Vec<String> },
}

/// A system together with a claimed witness or Farkas certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LpCertificateFile {
    pub system: LpFile,
    pub result: LpResultFile,
}

impl LpFile {
    pub fn to_system(&self) -> Result<LpSystem, FormatError> {
        let mut sys = LpSystem::new(self.columns.clone());
        for (i, r) in self.rows.iter().enumerate() {
            let at = format!("/rows/{i}");
            if r.coeffs.len() != self.columns.len() {
                return fail(format!("{at}/coeffs"), format!("{} coefficients for {} columns", r.coeffs.len(), self.columns.len()));
            }
            sys.push_row(r.label.clone(), rats(&r.coeffs, &format!("{at}/coeffs"))?, rat(&r.rhs, &format!("{at}/rhs"))?);
        }
        Ok(sys)
    }

    pub fn from_system(s: &LpSystem) -> LpFile {
        LpFile {
            columns: s.col_labels.clone(),
            rows: (0..s.rows()).map(|i| LpRowFile { label: s.row_labels[i].clone(), coeffs: strs(&s.f[i]), rhs: fmt_q(&s.q[i]) }).collect(),
        }
    }
}

impl LpResultFile {
    pub fn to_result(&self, at: &str) -> Result<LpResult, FormatError> {
        Ok(match self {
            LpResultFile::Feasible { y } => LpResult::Feasible { y: rats(y, &format!("{at}/y"))? },
            LpResultFile::Infeasible { x } => LpResult::Infeasible { x: rats(x, &format!("{at}/x"))? },
        })
    }

    pub fn from_result(r: &LpResult) -> LpResultFile {
        match r {
            LpResult::Feasible { y } => LpResultFile::Feasible { y: strs(y) },
            LpResult::Infeasible { x } => LpResultFile::Infeasible { x: strs(x) },
        }
    }
}

impl LpCertificateFile {
    pub fn new(sys: &LpSystem, r: &LpResult) -> LpCertificateFile {
        LpCertificateFile { system: LpFile::from_system(sys), result: LpResultFile::from_result(r) }
    }

    pub fn parts(&self) -> Result<(LpSystem, LpResult), FormatError> {
        let sys = self.system.to_system().map_err(|e| FormatError { pointer: format!("/system{}", e.pointer), ..e })?;
        Ok((sys, self.result.to_result("/result")?))
    }
}

pub fn function_json(f: &NaryFunction) -> Vec<u32> {
    f.table.clone()
}

/// One canonical-LP family member `(N, α, β)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub arity: usize,
    pub alpha: Vec<String>,
    pub beta: BetaFile,
}

impl FamilyFile {
    pub fn to_family(&self, at: &str) -> Result<vpcsp_core::canonical::Family, FormatError> {
        if self.alpha.len() != self.arity {
            return fail(format!("{at}/alpha"), format!("{} values for arity {}", self.alpha.len(), self.arity));
        }
        let alpha = rats(&self.alpha, &format!("{at}/alpha"))?;
        let mut beta = Beta::constant(beta_value(&self.beta.default, &format!("{at}/beta/default"))?);
        for (j, e) in self.beta.entries.iter().enumerate() {
            let f = NaryFunction { arity: self.arity, table: e.function.clone() };
            beta.set(f, beta_value(&e.value, &format!("{at}/beta/entries/{j}/value"))?);
        }
        Ok(vpcsp_core::canonical::Family { arity: self.arity, alpha, beta })
    }
}
