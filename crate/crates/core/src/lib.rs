//! Numerical estimators for wavefront sets of distributions and for the
//! asymptotic correlation spectrum of translation-invariant n-point kernels.
//!
//! Everything is organised around one quantity: the decay, as λ → 0, of a
//! windowed Fourier transform of the distribution probed by a λ-scaled test
//! function. The [`decay`] module turns a ladder of such magnitudes into a
//! Regular / Singular / Indeterminate verdict.

pub mod acs;
pub mod decay;
pub mod distributions;
pub mod func;
pub mod grid;
pub mod oscillatory;
pub mod quad;
pub mod scenario;
pub mod testfn;
pub mod wavefront;

pub use num_complex::Complex64 as C64;
