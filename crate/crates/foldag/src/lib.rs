//! Folded algebraic-geometric codes from Galois extensions of function
//! fields: exact finite-field algebra, the rational-cyclic and Hermitian
//! function fields with their folding automorphisms, the folded encoder,
//! the multiplicity-interpolation list decoder with both root-finding
//! backends, and the experiment harness behind the `foldag` CLI.

pub mod additive;
pub mod code;
pub mod curve;
pub mod decoder;
pub mod error;
pub mod frobenius;
pub mod local;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod series;

pub use error::{Error, Result};
pub use field::{Fe, FieldSpec};
