//! Frobenius push-forwards of line bundles on smooth quadrics `Q_n` over
//! fields of odd characteristic.
//!
//! The crate computes the decomposition of `F_* O(t)` into line bundles
//! and spinor bundles, the Hilbert functions that control the
//! multiplicities, and cohomology/Ext tables used to decide whether the
//! push-forward is quasi-exceptional or tilting. Every closed formula has
//! an independent brute-force counterpart over `F_p`.

pub mod algebra;
pub mod cohomology;
pub mod context;
pub mod error;
pub mod graded;
pub mod hilbert;
pub mod matfac;
pub mod pushforward;
pub mod suites;

pub use context::QuadricContext;
pub use error::{Error, Result};
