//! Scalar abstraction. Every matrix in the crate is built from
//! `Complex<T>` with `T: Real`, so the same code runs in `f64` (the default
//! used by the experiment runner) and `f32`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Complex scalar over a [`Real`] field.
pub type C<T> = Complex<T>;

/// Real floating-point field used for all numerics.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Round-off floor for structural checks on single operators
    /// (Hermiticity, trace, unitarity of small matrices).
    fn tight_tol() -> Self;

    /// Round-off floor for quantities accumulated over long compositions
    /// (Choi eigenvalues, trace preservation of powered superoperators).
    fn loose_tol() -> Self;

    /// Converts an `f64` literal. Panics only if the target type cannot
    /// represent finite `f64` values, which does not happen for `f32`/`f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn tight_tol() -> Self {
        1e-12
    }
    fn loose_tol() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn tight_tol() -> Self {
        2e-5
    }
    fn loose_tol() -> Self {
        2e-4
    }
}

#[inline]
pub(crate) fn cr<T: Real>(re: T) -> C<T> {
    C::new(re, T::zero())
}
