//! Multigraded Betti numbers, minimal binomial generators and
//! indispensability diagnostics for lattice ideals `I_L ⊂ k[x_1..x_n]`.
//!
//! The grading group is `Z^n / L`; every computation works one degree at a
//! time on the finite fiber `C_b` of monomials of that degree. Betti numbers
//! come from the gcd-complex of the fiber and, independently, from a Koszul
//! strand on the variables; the two are compared in [`verify`].

// index loops mirror the matrix notation
#![allow(clippy::needless_range_loop)]

pub mod betti;
pub mod complexes;
pub mod corpus;
pub mod fibers;
pub mod lattice;
pub mod linalg;
pub mod problem;
pub mod registry;
pub mod report;
pub mod syzygy;
pub mod union_find;
pub mod verify;
pub mod warning;

pub use betti::{BettiOracle, BettiTable, HOMOLOGY_SHIFT};
pub use complexes::{HomologyProfile, SimplicialComplex};
pub use fibers::{Bound, Fiber, FiberStore};
pub use lattice::{Degree, GradingMap, LatticeError, LatticePresentation};
pub use problem::{Command, InputSpec, ProblemSpec};
pub use report::{run, Report, RunOptions};
pub use warning::Warning;
