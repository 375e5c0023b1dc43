//! Exact eigenvalue-configuration computations for pairs of symmetric matrices.

pub mod charpoly;
pub mod ec;
pub mod error;
pub mod multipoly;
pub mod rational;
pub mod roots;
pub mod sample;
pub mod ring;
pub mod symmetric;
pub mod transform;
pub mod unipoly;
pub mod vars;

pub use error::{Error, Result};
pub use multipoly::MultiPoly;
pub use rational::Rational;
pub use unipoly::UniPoly;
pub use vars::VarTable;
