//! Signatures, valued structures, payoff formulas, functions and relation matrices.

pub mod formula;
pub mod function;
pub mod mat;
pub mod signature;
pub mod structure;

pub use formula::{Constraint, PayoffFormula, Var};
pub use function::{all_maps, minor, FnSpace, NaryFunction};
pub use mat::{canonical_rows, Mat, MatPair};
pub use signature::{Signature, SymbolDecl};
pub use structure::{for_each_tuple, Domain, Params, ValuedStructure, ValuedTemplate};
