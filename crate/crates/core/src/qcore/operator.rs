use num_traits::Zero;

use crate::error::{Error, Result};
use crate::qcore::eig::eigvalsh;
use crate::qcore::layout::SystemLayout;
use crate::qcore::matrix::CMatrix;
use crate::qcore::pauli::Pauli;
use crate::scalar::{cr, Real, C};

/// A square matrix together with the labeled system it acts on.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator<T: Real> {
    layout: SystemLayout,
    matrix: CMatrix<T>,
}

impl<T: Real> Operator<T> {
    pub fn new(layout: SystemLayout, matrix: CMatrix<T>) -> Result<Self> {
        if matrix.dim() != layout.dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.dim(),
                found: matrix.dim(),
            });
        }
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self { layout, matrix })
    }

    pub fn identity(layout: &SystemLayout) -> Self {
        Self {
            matrix: CMatrix::identity(layout.dim()),
            layout: layout.clone(),
        }
    }

    pub fn zeros(layout: &SystemLayout) -> Self {
        Self {
            matrix: CMatrix::zeros(layout.dim()),
            layout: layout.clone(),
        }
    }

    /// `coeff * prod_k P_k` with unlisted qubits carrying the identity.
    pub fn pauli_product(layout: &SystemLayout, factors: &[(&str, Pauli)], coeff: T) -> Result<Self> {
        let mut paulis = vec![Pauli::I; layout.len()];
        for (label, p) in factors {
            paulis[layout.index_of(label)?] = *p;
        }
        let m = paulis
            .iter()
            .fold(CMatrix::identity(1), |acc, p| acc.kron(&p.matrix()));
        Ok(Self {
            layout: layout.clone(),
            matrix: m.scale_re(coeff),
        })
    }

    /// Lifts `local` (whose labels must all occur in `layout`) to the full
    /// layout, acting as the identity elsewhere.
    pub fn embed(layout: &SystemLayout, local: &Operator<T>) -> Result<Self> {
        let n = layout.len();
        let positions: Vec<usize> = local
            .layout
            .labels()
            .map(|l| layout.index_of(l))
            .collect::<Result<_>>()?;
        let local_mask: usize = positions.iter().map(|&p| 1usize << (n - 1 - p)).sum();
        let k = positions.len();
        let local_index = |full: usize| -> usize {
            positions
                .iter()
                .enumerate()
                .map(|(slot, &p)| ((full >> (n - 1 - p)) & 1) << (k - 1 - slot))
                .sum()
        };
        let d = layout.dim();
        let idx: Vec<usize> = (0..d).map(local_index).collect();
        let matrix = CMatrix::from_fn(d, |i, j| {
            if (i & !local_mask) == (j & !local_mask) {
                local.matrix[(idx[i], idx[j])]
            } else {
                C::zero()
            }
        });
        Ok(Self {
            layout: layout.clone(),
            matrix,
        })
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn trace(&self) -> C<T> {
        self.matrix.trace()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            layout: self.layout.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            layout: self.layout.clone(),
            matrix: self.matrix.scale_re(s),
        }
    }

    fn same_layout(&self, other: &Self) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch(format!(
                "{} vs {}",
                self.layout, other.layout
            )));
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_layout(other)?;
        Ok(Self {
            layout: self.layout.clone(),
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_layout(other)?;
        Ok(Self {
            layout: self.layout.clone(),
            matrix: &self.matrix + &other.matrix,
        })
    }

    /// Tensor product; `self`'s qubits precede `other`'s.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            layout: self.layout.concat(&other.layout)?,
            matrix: self.matrix.kron(&other.matrix),
        })
    }

    /// Reorders qubits to match `target`, which must hold the same labels.
    pub fn permuted(&self, target: &SystemLayout) -> Result<Self> {
        if target.len() != self.layout.len() {
            return Err(Error::LayoutMismatch(format!(
                "cannot permute {} into {}",
                self.layout, target
            )));
        }
        Self::embed(target, self)
    }

    /// Partial trace over the listed labels.
    pub fn partial_trace(&self, over: &[&str]) -> Result<Self> {
        let keep_layout = self.layout.without(over)?;
        let n = self.layout.len();
        let traced: Vec<usize> = over
            .iter()
            .map(|l| self.layout.index_of(l))
            .collect::<Result<_>>()?;
        let kept: Vec<usize> = (0..n).filter(|p| !traced.contains(p)).collect();

        let place = |bits: usize, positions: &[usize]| -> usize {
            let m = positions.len();
            positions
                .iter()
                .enumerate()
                .map(|(slot, &p)| ((bits >> (m - 1 - slot)) & 1) << (n - 1 - p))
                .sum()
        };
        let dk = 1usize << kept.len();
        let dt = 1usize << traced.len();
        let kept_idx: Vec<usize> = (0..dk).map(|b| place(b, &kept)).collect();
        let traced_idx: Vec<usize> = (0..dt).map(|b| place(b, &traced)).collect();

        let matrix = CMatrix::from_fn(dk, |r, c| {
            traced_idx.iter().fold(C::zero(), |s, &t| {
                s + self.matrix[(kept_idx[r] | t, kept_idx[c] | t)]
            })
        });
        Ok(Self {
            layout: keep_layout,
            matrix,
        })
    }
}

/// Hermitian operator in units of the coupling strength `J` (with `hbar = 1`).
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator<T: Real>(Operator<T>);

impl<T: Real> HermitianOperator<T> {
    pub fn new(op: Operator<T>) -> Result<Self> {
        let defect = op.matrix.hermiticity_defect();
        let scale = op.matrix.frobenius_norm().max(T::one());
        if defect > T::tight_tol() * scale {
            return Err(Error::NotHermitian(defect.as_f64()));
        }
        Ok(Self(op))
    }

    pub fn operator(&self) -> &Operator<T> {
        &self.0
    }

    pub fn layout(&self) -> &SystemLayout {
        self.0.layout()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        self.0.matrix()
    }

    /// Sum of Hermitian terms on a shared layout.
    pub fn sum(terms: &[HermitianOperator<T>]) -> Result<Self> {
        let first = terms.first().ok_or(Error::EmptyLayout)?;
        let mut acc = first.0.clone();
        for t in &terms[1..] {
            acc = acc.try_add(&t.0)?;
        }
        Ok(Self(acc))
    }

    /// Real coefficients `c_P = Tr(P H) / d` in the Pauli basis, base-4 indexed.
    pub fn pauli_coefficients(&self) -> Vec<T> {
        let n = self.layout().len();
        let d = T::lit(self.0.dim() as f64);
        (0..(1usize << (2 * n)))
            .map(|k| {
                let p = crate::qcore::pauli::pauli_string_matrix::<T>(
                    &crate::qcore::pauli::pauli_string(k, n),
                );
                p.hs_inner(self.matrix()).re / d
            })
            .collect()
    }
}

/// Positive unit-trace operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T: Real>(Operator<T>);

impl<T: Real> DensityMatrix<T> {
    pub fn new(op: Operator<T>) -> Result<Self> {
        Self::with_tolerance(op, T::tight_tol())
    }

    /// Validates with trace/Hermiticity tolerance `tol`; eigenvalues may dip
    /// to `-max(tol, 1e-10)`.
    pub fn with_tolerance(op: Operator<T>, tol: T) -> Result<Self> {
        let herm = op.matrix.hermiticity_defect();
        if herm > tol {
            return Err(Error::InvalidState(format!(
                "not Hermitian (defect {:e})",
                herm.as_f64()
            )));
        }
        let tr = op.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!(
                "trace {} + {}i",
                tr.re.as_f64(),
                tr.im.as_f64()
            )));
        }
        let floor = tol.max(T::lit(1e-10));
        let min = eigvalsh(op.matrix())?
            .first()
            .copied()
            .unwrap_or_else(T::zero);
        if min < -floor {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:e}",
                min.as_f64()
            )));
        }
        Ok(Self(op))
    }

    pub fn maximally_mixed(layout: &SystemLayout) -> Self {
        let d = T::lit(layout.dim() as f64);
        Self(Operator::identity(layout).scale(T::one() / d))
    }

    /// Computational basis state `|index><index|`.
    pub fn basis(layout: &SystemLayout, index: usize) -> Result<Self> {
        if index >= layout.dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.dim(),
                found: index,
            });
        }
        let m = CMatrix::unit(layout.dim(), index, index);
        Ok(Self(Operator::new(layout.clone(), m)?))
    }

    /// Pure state from (not necessarily normalized) amplitudes.
    pub fn pure(layout: &SystemLayout, amplitudes: &[C<T>]) -> Result<Self> {
        if amplitudes.len() != layout.dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.dim(),
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
        if norm == T::zero() {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let v: Vec<C<T>> = amplitudes.iter().map(|a| *a / norm).collect();
        Self::new(Operator::new(layout.clone(), CMatrix::outer(&v, &v))?)
    }

    /// `|+><+|` on a single qubit.
    pub fn plus(label: &str) -> Self {
        let layout = SystemLayout::registers(&[label]).expect("one label");
        let h = T::lit(0.5);
        let m = CMatrix::from_fn(2, |_, _| cr(h));
        Self(Operator::new(layout, m).expect("2x2"))
    }

    /// Single-qubit state from half-normalized Bloch components
    /// `rho = 1/2 + p_x X + p_y Y + p_z Z`.
    pub fn from_bloch(layout: &SystemLayout, p: [T; 3]) -> Result<Self> {
        if layout.len() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: layout.dim(),
            });
        }
        let mut m = CMatrix::<T>::identity(2).scale_re(T::lit(0.5));
        for (coeff, pauli) in p.iter().zip([Pauli::X, Pauli::Y, Pauli::Z]) {
            m = &m + &pauli.matrix::<T>().scale_re(*coeff);
        }
        Self::new(Operator::new(layout.clone(), m)?)
    }

    pub fn operator(&self) -> &Operator<T> {
        &self.0
    }

    pub fn into_operator(self) -> Operator<T> {
        self.0
    }

    pub fn layout(&self) -> &SystemLayout {
        self.0.layout()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        self.0.matrix()
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.kron(&other.0)?))
    }

    /// Expectation value `Tr(rho A)` (real part).
    pub fn expect(&self, a: &CMatrix<T>) -> T {
        (a * self.matrix()).trace().re
    }

    /// Internal constructor for matrices already known to be states.
    pub(crate) fn from_operator_unchecked(op: Operator<T>) -> Self {
        Self(op)
    }

    pub fn relabeled(&self, label: &str) -> Result<Self> {
        if self.layout().len() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.0.dim(),
            });
        }
        let layout = SystemLayout::new(vec![crate::qcore::layout::Qubit {
            label: label.to_owned(),
            role: self.layout().qubits()[0].role,
        }])?;
        Ok(Self(Operator::new(layout, self.matrix().clone())?))
    }
}
