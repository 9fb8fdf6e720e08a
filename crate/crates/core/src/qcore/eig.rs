//! Hermitian eigendecomposition (cyclic complex Jacobi) and the matrix
//! exponential built on it.
//!
//! Dimensions in this crate stay below a few hundred, so the Jacobi method's
//! cubic sweep cost is irrelevant while its unconditional accuracy on
//! Hermitian input is exactly what the long superoperator compositions need.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::qcore::matrix::CMatrix;
use crate::scalar::{Real, C};

const MAX_SWEEPS: usize = 100;

/// `H = V diag(values) V^dag`, eigenvalues ascending, eigenvectors in the
/// columns of `vectors`.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T: Real> {
    pub values: Vec<T>,
    pub vectors: CMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// Decomposes `h`, which is assumed Hermitian; only its Hermitian part is used.
    pub fn new(h: &CMatrix<T>) -> Result<Self> {
        let n = h.dim();
        let half = T::lit(0.5);
        let mut a = CMatrix::from_fn(n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * half);
        let mut v = CMatrix::<T>::identity(n);

        let scale = a.frobenius_norm();
        if scale == T::zero() {
            return Ok(Self {
                values: vec![T::zero(); n],
                vectors: v,
            });
        }
        let stop = T::epsilon() * scale;

        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            let off = off_diagonal_norm(&a);
            if off <= stop {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
        if !converged && off_diagonal_norm(&a) > stop {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
        let values = order.iter().map(|&i| a[(i, i)].re).collect();
        let vectors = CMatrix::from_fn(n, |r, c| v[(r, order[c])]);
        Ok(Self { values, vectors })
    }

    /// `V f(Lambda) V^dag` for a complex-valued spectral function.
    pub fn map(&self, f: impl Fn(T) -> C<T>) -> CMatrix<T> {
        let n = self.values.len();
        let fv: Vec<C<T>> = self.values.iter().map(|&x| f(x)).collect();
        CMatrix::from_fn(n, |i, j| {
            (0..n).fold(C::zero(), |s, k| {
                s + self.vectors[(i, k)] * fv[k] * self.vectors[(j, k)].conj()
            })
        })
    }
}

fn off_diagonal_norm<T: Real>(a: &CMatrix<T>) -> T {
    let n = a.dim();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One Jacobi rotation annihilating `a[p][q]`. The unitary is a phase on
/// column `q` that makes the pivot real, followed by a real Givens rotation.
fn rotate<T: Real>(a: &mut CMatrix<T>, v: &mut CMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == T::zero() {
        return;
    }
    let n = a.dim();
    let e = apq / g;
    let ec = e.conj();
    let one = T::one();
    let two = T::lit(2.0);

    let theta = (a[(q, q)].re - a[(p, p)].re) / (two * g);
    let t = if theta == T::zero() {
        one
    } else {
        theta.signum() / (theta.abs() + (theta * theta + one).sqrt())
    };
    let c = one / (t * t + one).sqrt();
    let s = t * c;

    // A <- A G and V <- V G, with G_pp = c, G_pq = s, G_qp = -s e*, G_qq = c e*
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * c - akq * ec * s;
        a[(k, q)] = akp * s + akq * ec * c;
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * c - vkq * ec * s;
        v[(k, q)] = vkp * s + vkq * ec * c;
    }
    // A <- G^dag A
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = apk * c - aqk * e * s;
        a[(q, k)] = apk * s + aqk * e * c;
    }
    a[(p, q)] = C::zero();
    a[(q, p)] = C::zero();
    a[(p, p)] = C::new(a[(p, p)].re, T::zero());
    a[(q, q)] = C::new(a[(q, q)].re, T::zero());
}

/// `exp(-i H t)` for Hermitian `h`.
pub fn expm_hermitian_matrix<T: Real>(h: &CMatrix<T>, t: T) -> Result<CMatrix<T>> {
    if t == T::zero() {
        return Ok(CMatrix::identity(h.dim()));
    }
    let eig = HermitianEigen::new(h)?;
    Ok(eig.map(|lambda| C::from_polar(T::one(), -lambda * t)))
}

/// Eigenvalues only, ascending.
pub fn eigvalsh<T: Real>(h: &CMatrix<T>) -> Result<Vec<T>> {
    Ok(HermitianEigen::new(h)?.values)
}
