//! High-precision evaluation of ordinary generating functions Σ aₙ zⁿ of
//! classical arithmetic functions near z = 1, by direct summation and by
//! inverse-Mellin contour integration, together with the asymptotic
//! envelopes and expansions those series are compared against.

pub mod arith;
pub mod asym;
pub mod error;
pub mod hpnum;
pub mod mellin;
pub mod numfmt;
pub mod quad;
pub mod series;

pub use error::{Error, Result};
