//! Dense complex linear algebra and multi-qubit bookkeeping.
//!
//! Conventions used throughout the crate:
//!
//! * natural units `hbar = 1`, `J = 1`; user-facing frequencies are in units
//!   of `J/h`, so one period of a frequency `f` lasts `2 pi / f` internal time
//!   units (see [`period_from_frequency`]);
//! * layout order is tensor order, leftmost label = most significant bit;
//! * Bloch components follow `rho = 1/2 + p_x X + p_y Y + p_z Z`, so each
//!   component lies in `[-1/2, 1/2]` and equals `Tr(sigma_k rho) / 2`.

pub mod eig;
pub mod layout;
pub mod matrix;
pub mod operator;
pub mod pauli;

pub use eig::HermitianEigen;
pub use layout::{Qubit, Role, SystemLayout};
pub use matrix::CMatrix;
pub use operator::{DensityMatrix, HermitianOperator, Operator};
pub use pauli::{Axis, Pauli};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Tensor product with `a`'s layout preceding `b`'s.
pub fn kron<T: Real>(a: &Operator<T>, b: &Operator<T>) -> Result<Operator<T>> {
    a.kron(b)
}

/// Reduced state on the labels not listed in `over`.
pub fn partial_trace<T: Real>(rho: &DensityMatrix<T>, over: &[&str]) -> Result<DensityMatrix<T>> {
    Ok(DensityMatrix::from_operator_unchecked(
        rho.operator().partial_trace(over)?,
    ))
}

/// `exp(-i H t)` by Hermitian eigendecomposition.
pub fn expm_hermitian<T: Real>(h: &HermitianOperator<T>, t: T) -> Result<Operator<T>> {
    Operator::new(
        h.layout().clone(),
        eig::expm_hermitian_matrix(h.matrix(), t)?,
    )
}

/// Paper-normalized Bloch components `p_k = Tr(sigma_k rho) / 2`.
///
/// Note the factor one half: a pure state has `|p| = 1/2`, not 1.
pub fn bloch_vector<T: Real>(rho: &DensityMatrix<T>) -> Result<[T; 3]> {
    if rho.matrix().dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho.matrix().dim(),
        });
    }
    let half = T::lit(0.5);
    Ok([Pauli::X, Pauli::Y, Pauli::Z].map(|p| rho.expect(&p.matrix()) * half))
}

/// Internal duration of one period at frequency `freq_over_h` (units of `J/h`).
pub fn period_from_frequency<T: Real>(freq_over_h: T) -> T {
    T::TAU() / freq_over_h
}

/// Converts an internal duration (`hbar/J`) to units of `(J/h)^-1`.
pub fn to_h_units<T: Real>(t: T) -> T {
    t / T::TAU()
}
