//! Exact and certified-numeric verification of identities around sums of
//! three squares: truncated integer q-series, lattice-point counts, binary
//! quadratic forms and Hurwitz class numbers, and arbitrary-precision
//! evaluation of the multivariate Kronecker-type identities.

pub mod counts;
pub mod error;
pub mod genfun;
pub mod numeric;
pub mod qforms;
pub mod series;

pub use error::{Error, Result};
pub use series::IntSeries;

/// Version string reported by front ends.
pub const ENGINE_VERSION: &str = concat!("threesq ", env!("CARGO_PKG_VERSION"));
