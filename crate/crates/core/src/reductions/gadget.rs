//! Gadget substitution and the pointwise check behind gadget homomorphisms.

use crate::algebra::{Constraint, FnSpace, NaryFunction, PayoffFormula, Signature, ValuedTemplate, Var};
use crate::error::{contract, Result};
use crate::polymorphism::{verify_minion_hom, HomViolation, MinionCache, MinionHomTable};
use crate::prelude::*;

/// Replacement for one source symbol: a target formula over local variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    pub formula: PayoffFormula,
    /// Source coordinate `z` is wired to local variable `iota[z]`.
    pub iota: Vec<usize>,
    /// Local variables shared by all constraints, identified by name.
    pub shared: Vec<usize>,
}

/// What each target coordinate of a gadget reads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GadgetArg {
    Coord(usize),
    Shared(String),
}

/// A single-constraint gadget `target_sym(args)`.
pub fn simple_gadget(source: &Signature, target: &Signature, src_sym: usize, target_sym: usize, args: &[GadgetArg]) -> Result<Gadget> {
    let sd = &source.symbols[src_sym];
    let td = &target.symbols[target_sym];
    if args.len() != td.arity() {
        return contract(format!("gadget for {} has {} arguments, {} expects {}", sd.name, args.len(), td.name, td.arity()));
    }
    let sort_in = |name: &str| target.sort_index(name).ok_or_else(|| crate::Error::Contract(format!("sort {name} missing in the target")));
    let mut vars = Vec::new();
    for (z, c) in sd.coords.iter().enumerate() {
        vars.push(Var { name: c.clone(), sort: sort_in(&source.sorts[sd.sorts[z]])? });
    }
    let mut shared = Vec::new();
    let mut cargs = Vec::new();
    for (j, a) in args.iter().enumerate() {
        let idx = match a {
            GadgetArg::Coord(z) if *z < sd.arity() => *z,
            GadgetArg::Coord(z) => return contract(format!("gadget refers to coordinate {z} of {}", sd.name)),
            GadgetArg::Shared(name) => match vars.iter().position(|v| v.name == *name) {
                Some(i) => i,
                None => {
                    vars.push(Var { name: name.clone(), sort: td.sorts[j] });
                    shared.push(vars.len() - 1);
                    vars.len() - 1
                }
            },
        };
        if vars[idx].sort != td.sorts[j] {
            return contract(format!("gadget argument {j} of {} has the wrong sort", td.name));
        }
        cargs.push(idx);
    }
    let formula = PayoffFormula::new(vars, vec![Constraint { weight: crate::num::one(), sym: target_sym, args: cargs }], target)?;
    Ok(Gadget { formula, iota: (0..sd.arity()).collect(), shared })
}

/// Replaces each constraint by its gadget, scaling weights and unifying shared variables.
pub fn gadget_substitute(f: &PayoffFormula, source: &Signature, target: &Signature, gadgets: &[Gadget]) -> Result<PayoffFormula> {
    f.validate(source)?;
    if gadgets.len() != source.symbols.len() {
        return contract("one gadget per source symbol expected");
    }
    let mut vars = Vec::new();
    for v in &f.vars {
        let name = &source.sorts[v.sort];
        let sort = target.sort_index(name).ok_or_else(|| crate::Error::Contract(format!("sort {name} missing in the target")))?;
        vars.push(Var { name: v.name.clone(), sort });
    }
    let mut shared_idx: BTreeMap<String, usize> = BTreeMap::new();
    for (g, decl) in gadgets.iter().zip(&source.symbols) {
        g.formula.validate(target)?;
        if g.iota.len() != decl.arity() {
            return contract(format!("gadget for {} has the wrong arity", decl.name));
        }
        let mut seen = BTreeSet::new();
        if !g.iota.iter().all(|x| seen.insert(*x)) {
            return contract(format!("gadget for {} wires two coordinates to one variable", decl.name));
        }
        for &x in &g.shared {
            let v = &g.formula.vars[x];
            match shared_idx.get(&v.name) {
                Some(&i) if vars[i].sort != v.sort => return contract(format!("shared variable {} has two sorts", v.name)),
                Some(_) => {}
                None => {
                    if vars.iter().any(|w| w.name == v.name) {
                        return contract(format!("shared variable {} clashes with an input variable", v.name));
                    }
                    shared_idx.insert(v.name.clone(), vars.len());
                    vars.push(v.clone());
                }
            }
        }
    }
    let mut constraints = Vec::new();
    for (i, c) in f.constraints.iter().enumerate() {
        let g = &gadgets[c.sym];
        let mut local = vec![usize::MAX; g.formula.vars.len()];
        for (z, &x) in g.iota.iter().enumerate() {
            local[x] = c.args[z];
        }
        for &x in &g.shared {
            local[x] = shared_idx[&g.formula.vars[x].name];
        }
        for (x, slot) in local.iter_mut().enumerate() {
            if *slot == usize::MAX {
                let v = &g.formula.vars[x];
                vars.push(Var { name: format!("{}#{i}", v.name), sort: v.sort });
                *slot = vars.len() - 1;
            }
        }
        for gc in &g.formula.constraints {
            constraints.push(Constraint { weight: &c.weight * &gc.weight, sym: gc.sym, args: gc.args.iter().map(|&x| local[x]).collect() });
        }
    }
    PayoffFormula::new(vars, constraints, target)
}

/// A row of the lifted matrix: a row of the source matrix or a constant row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PadRow {
    Copy(usize),
    /// Constant row at the given position of the coordinate's sort.
    Const(usize),
}

/// How a source pair `(φ', M')` becomes a target pair `(φ, M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolLift {
    pub target_sym: usize,
    pub rows: Vec<PadRow>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetHomReport {
    pub pairs_checked: usize,
    /// A function of the target minion at arity `<= k` with no image.
    pub uncovered: Option<NaryFunction>,
    pub mismatch: Option<String>,
    pub minor_failure: Option<HomViolation>,
}

impl GadgetHomReport {
    pub fn ok(&self) -> bool {
        self.uncovered.is_none() && self.mismatch.is_none() && self.minor_failure.is_none()
    }
}

/// Checks `φ'(ξ(f) rows M') = φ(f rows M)` and `φ'(col_n M') = φ(col_n M)` for every `f` of
/// the target minion and every pair of `Mat(A', N)`, `|N| <= k`; `ξ` maps target polymorphisms
/// to source ones. Also checks that `ξ` commutes with minors.
pub fn verify_gadget_hom(
    xi: &MinionHomTable,
    source: &ValuedTemplate,
    target: &ValuedTemplate,
    lifts: &[SymbolLift],
    k: usize,
) -> Result<GadgetHomReport> {
    if lifts.len() != source.sig().symbols.len() {
        return contract("one lift per source symbol expected");
    }
    let mut src = MinionCache::new(&source.a, &source.b, Default::default());
    let mut tgt = MinionCache::new(&target.a, &target.b, Default::default());
    let mut report = GadgetHomReport { pairs_checked: 0, uncovered: None, mismatch: None, minor_failure: None };
    for n in 1..=k {
        let mat = src.mat(n)?;
        let level = tgt.level(n)?;
        let s_space = FnSpace::new(&source.a.dom, &source.b.dom, n)?;
        let t_space = FnSpace::new(&target.a.dom, &target.b.dom, n)?;
        for p in &mat.pairs {
            let lift = &lifts[p.sym];
            let tdecl = &target.sig().symbols[lift.target_sym];
            if lift.rows.len() != tdecl.arity() {
                return contract(format!("lift into {} has the wrong number of rows", tdecl.name));
            }
            let rows: Vec<usize> = lift
                .rows
                .iter()
                .enumerate()
                .map(|(j, r)| match r {
                    PadRow::Copy(z) => p.rows[*z],
                    PadRow::Const(c) => t_space.constant_rank(tdecl.sorts[j], *c),
                })
                .collect();
            for col in 0..n {
                let vt: Vec<usize> = lift
                    .rows
                    .iter()
                    .map(|r| match r {
                        PadRow::Copy(z) => mat.entry(p, *z, col),
                        PadRow::Const(c) => *c,
                    })
                    .collect();
                if mat.col_value(&source.a, p, col) != target.a.value_pos(lift.target_sym, &vt) {
                    report.mismatch = Some(format!("input payoff differs on column {col} of a {}-pair", source.sig().symbols[p.sym].name));
                    return Ok(report);
                }
            }
            for f in &level.functions {
                let Some(g) = xi.get(f) else {
                    report.uncovered = Some(f.clone());
                    return Ok(report);
                };
                let lhs = mat.image_value(&source.b, &s_space, g, p);
                let img: Vec<usize> = rows.iter().enumerate().map(|(j, &r)| t_space.eval(f, tdecl.sorts[j], r)).collect();
                if lhs != target.b.value_pos(lift.target_sym, &img) {
                    report.mismatch = Some(format!("output payoff differs for a {}-pair", source.sig().symbols[p.sym].name));
                    return Ok(report);
                }
            }
            report.pairs_checked += 1;
        }
    }
    report.minor_failure = verify_minion_hom(xi, (&target.a.dom, &target.b.dom), (&source.a.dom, &source.b.dom))?;
    Ok(report)
}

/// `ξ` on the target minion up to arity `k`, given pointwise.
pub fn tabulate_hom(cache: &mut MinionCache, k: usize, xi: impl Fn(&NaryFunction, &FnSpace) -> NaryFunction) -> Result<MinionHomTable> {
    let mut levels = BTreeMap::new();
    for n in 1..=k {
        let level = cache.level(n)?;
        let space = cache.space(n)?;
        levels.insert(n, level.functions.iter().map(|f| (f.clone(), xi(f, &space))).collect());
    }
    Ok(MinionHomTable { k, levels })
}

/// `ξ(f) = f` if `f(0,…,0) = 0`, else `t∘f` with `t` the transposition of a two-element sort.
pub fn flip_if_one(f: &NaryFunction, space: &FnSpace) -> NaryFunction {
    if space.eval(f, 0, space.constant_rank(0, 0)) == 0 {
        f.clone()
    } else {
        NaryFunction { arity: f.arity, table: f.table.iter().map(|&b| 1 - b).collect() }
    }
}
