//! High-precision numerics for the Flint Hills series `Σ 1/(n³ sin²n)` and
//! its companion series.
//!
//! The numerical core is generic over [`Real`]; the aliases below fix the
//! two supported backends.

pub mod error;
pub mod checkpoint;
pub mod diophantine;
pub mod exact;
pub mod kernel;
pub mod polylog;
pub mod precision;
pub mod relation;
pub mod report;
pub mod series;
pub mod spectral;

pub use error::{Error, Result};
pub use precision::{Complex, PrecisionContext, PrecisionStamp, Real};

/// Arbitrary-precision real (MPFR).
pub type Mp = rug::Float;
pub type MpComplex = Complex<Mp>;
pub type MpContext = PrecisionContext<Mp>;
pub type F64Context = PrecisionContext<f64>;

/// Builds an arbitrary-precision context with the default guard digits.
pub fn make_context(decimal_digits: u32) -> Result<MpContext> {
    PrecisionContext::new(decimal_digits)
}
