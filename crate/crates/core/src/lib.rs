//! Weil restriction and descent for algebras with D-structure.

pub mod algebra;
pub mod cert;
pub mod compose;
pub mod dalgebra;
pub mod descent_matrix;
pub mod dstructure;
pub mod enumerate;
pub mod error;
pub mod evidence;
pub mod cli;
pub mod input;
pub mod instances;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod report;
pub mod ring;
pub mod scalar;
pub mod weil;
pub mod weil_d;

pub use error::{Error, Result};
