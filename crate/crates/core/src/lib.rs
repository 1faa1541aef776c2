//! Exact moments of derivatives of characteristic polynomials of Haar-random
//! unitary matrices, expressed as finite sums over integer partitions, with a
//! Monte Carlo oracle over sampled spectra.

pub mod algebra;
pub mod error;
pub mod hypergeom;
pub mod mc;
pub mod moments;
pub mod partition;
pub mod pochhammer;
pub mod schur;

pub use algebra::{BigRational, PolynomialQ, RationalFunctionQ};
pub use error::{Error, Result};
pub use partition::{Cell, Partition};
