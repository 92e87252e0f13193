//! Exact linear algebra: Smith normal form over Z, ranks over Q and F_p,
//! incremental rational spans and a small exact simplex solver.

pub mod lp;
pub mod rank;
pub mod snf;
pub mod span;

pub use rank::{field_registry, PrimeField, RankField, RationalField, Reduction, SparseMatrix};
pub use snf::{smith_normal_form, SmithForm};
pub use span::RationalSpan;
