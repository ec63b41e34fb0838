use crate::error::{contract, Result};
use crate::prelude::*;

/// A relation symbol whose arity is a finite sorted set of named coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolDecl {
    pub name: String,
    pub coords: Vec<String>,
    pub sorts: Vec<usize>,
}

impl SymbolDecl {
    pub fn arity(&self) -> usize {
        self.sorts.len()
    }
}

/// Multi-sorted relational signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub sorts: Vec<String>,
    pub symbols: Vec<SymbolDecl>,
}

impl Signature {
    pub fn new(sorts: Vec<String>, symbols: Vec<SymbolDecl>) -> Result<Signature> {
        let sig = Signature { sorts, symbols };
        sig.validate()?;
        Ok(sig)
    }

    /// One sort, every coordinate of that sort, coordinates named `0..k`.
    pub fn single_sorted(sort: &str, symbols: &[(&str, usize)]) -> Signature {
        let symbols = symbols
            .iter()
            .map(|(name, k)| SymbolDecl { name: name.to_string(), coords: (0..*k).map(|z| z.to_string()).collect(), sorts: vec![0; *k] })
            .collect();
        Signature { sorts: vec![sort.to_string()], symbols }
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for s in &self.sorts {
            if !seen.insert(s.as_str()) {
                return contract(format!("duplicate sort {s}"));
            }
        }
        let mut seen = BTreeSet::new();
        for sym in &self.symbols {
            if !seen.insert(sym.name.as_str()) {
                return contract(format!("duplicate symbol {}", sym.name));
            }
            if sym.coords.len() != sym.sorts.len() {
                return contract(format!("symbol {}: coordinate/sort length mismatch", sym.name));
            }
            let mut cs = BTreeSet::new();
            for c in &sym.coords {
                if !cs.insert(c.as_str()) {
                    return contract(format!("symbol {}: duplicate coordinate {c}", sym.name));
                }
            }
            if let Some(t) = sym.sorts.iter().find(|&&t| t >= self.sorts.len()) {
                return contract(format!("symbol {}: unknown sort index {t}", sym.name));
            }
        }
        Ok(())
    }

    pub fn sort_index(&self, name: &str) -> Option<usize> {
        self.sorts.iter().position(|s| s == name)
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn symbol(&self, i: usize) -> &SymbolDecl {
        &self.symbols[i]
    }
}
