//! Exact arithmetic: prime-field residues, sparse polynomials, dense
//! matrices over F_p and big-integer binomials.

pub mod binomial;
pub mod field;
pub mod matrix;
pub mod poly;

pub use binomial::{binomial, factorial, pow2};
pub use field::{FpScalar, Prime};
pub use matrix::FpMatrix;
pub use poly::{Monomial, Polynomial};
