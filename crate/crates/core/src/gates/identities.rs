use crate::error::Result;
use crate::qcore::{expm_hermitian, Operator, Pauli, SystemLayout};
use crate::scalar::{Real, C};

use super::{hamiltonian_catalog, InteractionKind};

/// `sum_k c_k P_k` over Pauli products.
fn combination<T: Real>(layout: &SystemLayout, terms: &[(C<T>, &[(&str, Pauli)])]) -> Result<Operator<T>> {
    let mut acc = Operator::zeros(layout);
    for (c, factors) in terms {
        let p = Operator::pauli_product(layout, factors, T::one())?;
        let scaled = Operator::new(layout.clone(), p.matrix().scale(*c))?;
        acc = acc.try_add(&scaled)?;
    }
    Ok(acc)
}

fn re<T: Real>(x: f64) -> C<T> {
    C::new(T::lit(x), T::zero())
}

fn im<T: Real>(x: f64) -> C<T> {
    C::new(T::zero(), T::lit(x))
}

/// `(1 - i Z) / sqrt 2`.
pub fn r_z<T: Real>(layout: &SystemLayout, q: &str) -> Result<Operator<T>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    combination(layout, &[(re(s), &[]), (im(-s), &[(q, Pauli::Z)])])
}

/// `(1 - i Z Z) / sqrt 2`.
pub fn r_zz<T: Real>(layout: &SystemLayout, q1: &str, q2: &str) -> Result<Operator<T>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    combination(layout, &[(re(s), &[]), (im(-s), &[(q1, Pauli::Z), (q2, Pauli::Z)])])
}

/// `(1 - Z_d)/2 - i (1 + Z_d) Z_a / 2`.
pub fn r_zz_prime_displayed<T: Real>(layout: &SystemLayout, d: &str, a: &str) -> Result<Operator<T>> {
    combination(
        layout,
        &[
            (re(0.5), &[]),
            (re(-0.5), &[(d, Pauli::Z)]),
            (im(-0.5), &[(a, Pauli::Z)]),
            (im(-0.5), &[(d, Pauli::Z), (a, Pauli::Z)]),
        ],
    )
}

/// Controlled phase as displayed: `(1 - Z_1)/2 + (1 + Z_1) Z_2 / 2`.
/// Its `-1` sits on `|0 1>`.
pub fn lambda_z<T: Real>(layout: &SystemLayout, q1: &str, q2: &str) -> Result<Operator<T>> {
    combination(
        layout,
        &[
            (re(0.5), &[]),
            (re(-0.5), &[(q1, Pauli::Z)]),
            (re(0.5), &[(q2, Pauli::Z)]),
            (re(0.5), &[(q1, Pauli::Z), (q2, Pauli::Z)]),
        ],
    )
}

/// Controlled phase with its `-1` on `|1 1>`: `(1 + Z_1)/2 + (1 - Z_1) Z_2 / 2`.
pub fn lambda_z_standard<T: Real>(layout: &SystemLayout, q1: &str, q2: &str) -> Result<Operator<T>> {
    combination(
        layout,
        &[
            (re(0.5), &[]),
            (re(0.5), &[(q1, Pauli::Z)]),
            (re(0.5), &[(q2, Pauli::Z)]),
            (re(-0.5), &[(q1, Pauli::Z), (q2, Pauli::Z)]),
        ],
    )
}

/// `(XX + YY + ZZ + 1) / 2`.
pub fn swap<T: Real>(layout: &SystemLayout, q1: &str, q2: &str) -> Result<Operator<T>> {
    combination(
        layout,
        &[
            (re(0.5), &[]),
            (re(0.5), &[(q1, Pauli::X), (q2, Pauli::X)]),
            (re(0.5), &[(q1, Pauli::Y), (q2, Pauli::Y)]),
            (re(0.5), &[(q1, Pauli::Z), (q2, Pauli::Z)]),
        ],
    )
}

/// `(Z_A Z_C1 + Z_A Z_P2 + Z_C1 Z_P2 - 1) / 2`; squares to the identity.
pub fn xy_phase_factor<T: Real>(layout: &SystemLayout, a: &str, c1: &str, p2: &str) -> Result<Operator<T>> {
    combination(
        layout,
        &[
            (re(-0.5), &[]),
            (re(0.5), &[(a, Pauli::Z), (c1, Pauli::Z)]),
            (re(0.5), &[(a, Pauli::Z), (p2, Pauli::Z)]),
            (re(0.5), &[(c1, Pauli::Z), (p2, Pauli::Z)]),
        ],
    )
}

/// Flight time `pi / (2 sqrt 2)` of the XY swap.
pub fn swap_time<T: Real>() -> T {
    T::PI() / (T::lit(2.0) * T::SQRT_2())
}

/// `|exp(-i H_XY t) - phase * SWAP_{C1,P2}|_F` on the catalog labels.
pub fn swap_identity_deviation<T: Real>(t: T) -> Result<T> {
    let h = hamiltonian_catalog::<T>(InteractionKind::Xy)?;
    let layout = h.layout().clone();
    let u = expm_hermitian(&h, t)?;
    let rhs = xy_phase_factor(&layout, "A", "C1", "P2")?.try_mul(&swap(&layout, "C1", "P2")?)?;
    Ok(u.matrix().distance(rhs.matrix()))
}

/// Deviation at the swap time.
pub fn swap_identity_check<T: Real>() -> Result<T> {
    swap_identity_deviation(swap_time())
}
