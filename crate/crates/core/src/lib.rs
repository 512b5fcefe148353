//! Exact computations around the permanent versus determinant problem.
//!
//! The crate covers symmetric-group characters, Kronecker and plethysm
//! coefficients, the occurrence-obstruction search, determinantal
//! representations of the permanent with their Hessian-rank lower bound,
//! discrete-tomography bounds on Kronecker coefficients and signed Latin
//! square counts. Everything is exact: big integers and rationals, or
//! residues modulo a fixed prime for randomized identity tests.

pub mod caps;
pub mod character;
pub mod error;
pub mod kronecker;
pub mod latin;
pub mod partition;
pub mod polynomials;
pub mod specht;
pub mod symfun;
pub mod tomography;

pub use error::{Error, Result};
pub use partition::{enumerate_partitions, ClassType, Partition};
