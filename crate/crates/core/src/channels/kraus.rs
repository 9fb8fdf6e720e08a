use crate::error::{Error, Result};
use crate::qcore::{CMatrix, SystemLayout};
use crate::scalar::Real;

/// Operator-sum realization `E(rho) = sum_m K_m rho K_m^dag`.
#[derive(Clone, Debug)]
pub struct KrausSet<T: Real> {
    layout: SystemLayout,
    ops: Vec<CMatrix<T>>,
}

impl<T: Real> KrausSet<T> {
    /// Checks `sum_m K_m^dag K_m = 1` to `1e-10`.
    pub fn new(layout: SystemLayout, ops: Vec<CMatrix<T>>) -> Result<Self> {
        let d = layout.dim();
        if ops.is_empty() {
            return Err(Error::NotTracePreserving(1.0));
        }
        if let Some(bad) = ops.iter().find(|k| k.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.dim(),
            });
        }
        let set = Self { layout, ops };
        let defect = set.completeness_defect();
        if defect > T::lit(1e-10).max(T::tight_tol()) {
            return Err(Error::NotTracePreserving(defect.as_f64()));
        }
        Ok(set)
    }

    pub(crate) fn new_unchecked(layout: SystemLayout, ops: Vec<CMatrix<T>>) -> Self {
        Self { layout, ops }
    }

    /// `|sum_m K_m^dag K_m - 1|_F`.
    pub fn completeness_defect(&self) -> T {
        let d = self.layout.dim();
        let sum = self
            .ops
            .iter()
            .fold(CMatrix::zeros(d), |acc, k| &acc + &(&k.adjoint() * k));
        sum.distance(&CMatrix::identity(d))
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn ops(&self) -> &[CMatrix<T>] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// `sum_m K_m rho K_m^dag`.
    pub fn apply(&self, rho: &CMatrix<T>) -> CMatrix<T> {
        self.ops.iter().fold(CMatrix::zeros(rho.dim()), |acc, k| {
            &acc + &(&(k * rho) * &k.adjoint())
        })
    }
}
