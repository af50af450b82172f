//! Toeplitz and finite Wiener-Hopf determinants for Fisher-Hartwig symbols.
//!
//! The crate is `no_std` with `alloc`. Everything is computed in log scale:
//! a determinant of size a few hundred easily leaves the range of `f64`.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]
extern crate alloc;

pub mod constants;
pub mod error;
pub mod fredholm;
pub mod limits;
pub mod linalg;
pub mod quadrature;
pub mod special;
pub mod symbols;
pub mod toeplitz;
pub mod wienerhopf;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use num_complex::Complex64 as C64;
pub use quadrature::QuadratureRule;
pub use symbols::{FhParams, SymbolSpec};

/// Library version string, echoed in report headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `x^a` for real `x > 0` and complex exponent.
#[inline]
pub(crate) fn rpow(x: f64, a: C64) -> C64 {
    (a * x.ln()).exp()
}

/// Reduce the imaginary part of a log value into (-π, π].
pub fn wrap_log(z: C64) -> C64 {
    use core::f64::consts::PI;
    let mut im = z.im % (2.0 * PI);
    if im > PI {
        im -= 2.0 * PI;
    } else if im <= -PI {
        im += 2.0 * PI;
    }
    C64::new(z.re, im)
}

/// Distance between two log values modulo `2πi`.
pub fn log_distance(a: C64, b: C64) -> f64 {
    wrap_log(a - b).norm()
}
