//! Decomposition, Ritt collisions and exact census of univariate polynomials
//! over finite fields.

pub mod census;
pub mod decompose;
pub mod error;
pub mod field;
pub mod poly;
pub mod ritt;

pub use census::{CensusOptions, CensusReport};
pub use decompose::NormalDecomposition;
pub use error::{Error, Result};
pub use field::{Fe, FieldSpec};
pub use poly::{LinearUnit, Poly};
