use crate::algebra::signature::Signature;
use crate::error::{contract, Result};
use crate::num::{Ext, Q};
use crate::prelude::*;

/// Disjoint union of the per-sort universes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    labels: Vec<String>,
    sort_of: Vec<usize>,
    pos: Vec<usize>,
    by_sort: Vec<Vec<usize>>,
}

impl Domain {
    /// `elems` lists `(label, sort)`; order within a sort fixes element positions.
    pub fn new(num_sorts: usize, elems: Vec<(String, usize)>) -> Result<Domain> {
        let mut by_sort = vec![Vec::new(); num_sorts];
        let mut pos = Vec::with_capacity(elems.len());
        let mut labels = Vec::with_capacity(elems.len());
        let mut sort_of = Vec::with_capacity(elems.len());
        let mut seen = BTreeSet::new();
        for (i, (label, t)) in elems.into_iter().enumerate() {
            if t >= num_sorts {
                return contract(format!("element {label}: unknown sort index {t}"));
            }
            if !seen.insert(label.clone()) {
                return contract(format!("duplicate element {label}"));
            }
            pos.push(by_sort[t].len());
            by_sort[t].push(i);
            labels.push(label);
            sort_of.push(t);
        }
        Ok(Domain { labels, sort_of, pos, by_sort })
    }

    /// Single-sorted domain with the given labels.
    pub fn single(labels: &[&str]) -> Domain {
        Domain::new(1, labels.iter().map(|l| (l.to_string(), 0)).collect()).expect("distinct labels")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_sorts(&self) -> usize {
        self.by_sort.len()
    }

    pub fn label(&self, e: usize) -> &str {
        &self.labels[e]
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn sort_of(&self, e: usize) -> usize {
        self.sort_of[e]
    }

    /// Position of `e` inside its sort.
    pub fn pos(&self, e: usize) -> usize {
        self.pos[e]
    }

    pub fn elems_of(&self, t: usize) -> &[usize] {
        &self.by_sort[t]
    }

    pub fn sort_size(&self, t: usize) -> usize {
        self.by_sort[t].len()
    }

    pub fn sort_sizes(&self) -> Vec<usize> {
        self.by_sort.iter().map(Vec::len).collect()
    }

    /// Element at position `p` of sort `t`.
    pub fn at(&self, t: usize, p: usize) -> usize {
        self.by_sort[t][p]
    }
}

/// A valued structure: one table over `A^{ar(φ)}` per symbol, values in `Q ∪ {-inf}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuedStructure {
    pub sig: Signature,
    pub dom: Domain,
    tables: Vec<Vec<Ext>>,
    strides: Vec<Vec<usize>>,
}

impl ValuedStructure {
    /// Tables are indexed by tuple rank (see [`ValuedStructure::rank`]).
    pub fn new(sig: Signature, dom: Domain, tables: Vec<Vec<Ext>>) -> Result<ValuedStructure> {
        if dom.num_sorts() != sig.sorts.len() {
            return contract("domain and signature disagree on the number of sorts");
        }
        if tables.len() != sig.symbols.len() {
            return contract("one table per symbol expected");
        }
        let mut strides = Vec::with_capacity(tables.len());
        for (sym, table) in sig.symbols.iter().zip(&tables) {
            let mut st = Vec::with_capacity(sym.arity());
            let mut acc = 1usize;
            for &t in &sym.sorts {
                st.push(acc);
                acc = acc
                    .checked_mul(dom.sort_size(t))
                    .ok_or_else(|| crate::error::Error::Contract(format!("symbol {}: table too large", sym.name)))?;
            }
            if table.len() != acc {
                return contract(format!("symbol {}: table has {} entries, expected {acc}", sym.name, table.len()));
            }
            strides.push(st);
        }
        Ok(ValuedStructure { sig, dom, tables, strides })
    }

    /// Builds a structure from a value function on position tuples.
    pub fn from_fn(sig: Signature, dom: Domain, mut value: impl FnMut(usize, &[usize]) -> Ext) -> Result<ValuedStructure> {
        let mut tables = Vec::with_capacity(sig.symbols.len());
        for (i, sym) in sig.symbols.iter().enumerate() {
            let radix: Vec<usize> = sym.sorts.iter().map(|&t| dom.sort_size(t)).collect();
            let mut table = Vec::new();
            for_each_tuple(&radix, |tuple| table.push(value(i, tuple)));
            tables.push(table);
        }
        ValuedStructure::new(sig, dom, tables)
    }

    pub fn num_symbols(&self) -> usize {
        self.tables.len()
    }

    pub fn table(&self, sym: usize) -> &[Ext] {
        &self.tables[sym]
    }

    /// Per-coordinate domain sizes of a symbol.
    pub fn radix(&self, sym: usize) -> Vec<usize> {
        self.sig.symbols[sym].sorts.iter().map(|&t| self.dom.sort_size(t)).collect()
    }

    pub fn strides(&self, sym: usize) -> &[usize] {
        &self.strides[sym]
    }

    /// Rank of a tuple of positions: little-endian mixed radix, coordinate 0 least significant.
    pub fn rank(&self, sym: usize, positions: &[usize]) -> usize {
        positions.iter().zip(&self.strides[sym]).map(|(p, s)| p * s).sum()
    }

    pub fn unrank(&self, sym: usize, mut rank: usize) -> Vec<usize> {
        self.radix(sym)
            .into_iter()
            .map(|r| {
                let p = rank % r;
                rank /= r;
                p
            })
            .collect()
    }

    pub fn value_at(&self, sym: usize, rank: usize) -> &Ext {
        &self.tables[sym][rank]
    }

    /// Value on a tuple of positions.
    pub fn value_pos(&self, sym: usize, positions: &[usize]) -> &Ext {
        &self.tables[sym][self.rank(sym, positions)]
    }

    /// Value on a tuple of element ids.
    pub fn value_elems(&self, sym: usize, elems: &[usize]) -> &Ext {
        let r: usize = elems.iter().zip(&self.strides[sym]).map(|(&e, s)| self.dom.pos(e) * s).sum();
        &self.tables[sym][r]
    }

    /// Feasible tuples of a symbol, as position tuples in rank order.
    pub fn feasible_tuples(&self, sym: usize) -> Vec<Vec<usize>> {
        self.tables[sym].iter().enumerate().filter(|(_, v)| v.is_finite()).map(|(r, _)| self.unrank(sym, r)).collect()
    }

    /// True when every tuple of `sym` is feasible.
    pub fn is_total(&self, sym: usize) -> bool {
        self.tables[sym].iter().all(Ext::is_finite)
    }

    /// Same feasible set, value 0 on it.
    pub fn feasibility(&self) -> ValuedStructure {
        let tables =
            self.tables.iter().map(|t| t.iter().map(|v| if v.is_finite() { Ext::zero() } else { Ext::NegInf }).collect()).collect();
        ValuedStructure { sig: self.sig.clone(), dom: self.dom.clone(), tables, strides: self.strides.clone() }
    }

    /// Every value is `0` or `-inf`.
    pub fn is_crisp(&self) -> bool {
        self.tables.iter().flatten().all(|v| match v {
            Ext::NegInf => true,
            Ext::Fin(x) => num_traits::Zero::is_zero(x),
        })
    }

    /// `A <= c`: every finite value is at most `c`.
    pub fn bounded_by(&self, c: &Q) -> bool {
        self.tables.iter().flatten().all(|v| v.finite().is_none_or(|x| x <= c))
    }

    /// Largest finite value of a symbol, if any.
    pub fn max_value(&self, sym: usize) -> Option<&Q> {
        self.tables[sym].iter().filter_map(Ext::finite).max()
    }
}

/// Visits every tuple of `radix` in rank order (coordinate 0 fastest).
pub fn for_each_tuple(radix: &[usize], mut f: impl FnMut(&[usize])) {
    if radix.contains(&0) {
        return;
    }
    let mut t = vec![0usize; radix.len()];
    loop {
        f(&t);
        let mut i = 0;
        loop {
            if i == radix.len() {
                return;
            }
            t[i] += 1;
            if t[i] < radix[i] {
                break;
            }
            t[i] = 0;
            i += 1;
        }
    }
}

/// Thresholds of a valued promise template.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Params {
    Gap { c: Q, s: Q },
    ConstantFactor { kappa: Q },
}

/// `(A, B, c, s)` or `(A, B, κ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuedTemplate {
    pub a: ValuedStructure,
    pub b: ValuedStructure,
    pub params: Params,
}

impl ValuedTemplate {
    pub fn new(a: ValuedStructure, b: ValuedStructure, params: Params) -> Result<ValuedTemplate> {
        if a.sig != b.sig {
            return contract("template structures must share a signature");
        }
        if let Params::ConstantFactor { kappa } = &params {
            if num_traits::Signed::is_negative(kappa) {
                return contract("kappa must be nonnegative");
            }
        }
        Ok(ValuedTemplate { a, b, params })
    }

    pub fn gap(a: ValuedStructure, b: ValuedStructure, c: Q, s: Q) -> Result<ValuedTemplate> {
        ValuedTemplate::new(a, b, Params::Gap { c, s })
    }

    pub fn sig(&self) -> &Signature {
        &self.a.sig
    }

    /// `(c, s)`, or an error for constant-factor templates.
    pub fn cs(&self) -> Result<(&Q, &Q)> {
        match &self.params {
            Params::Gap { c, s } => Ok((c, s)),
            Params::ConstantFactor { .. } => contract("gap template expected"),
        }
    }

    pub fn kappa(&self) -> Result<&Q> {
        match &self.params {
            Params::ConstantFactor { kappa } => Ok(kappa),
            Params::Gap { .. } => contract("constant-factor template expected"),
        }
    }
}
