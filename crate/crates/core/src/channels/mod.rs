//! Quantum channels as superoperator matrices.
//!
//! A channel on `d` dimensions is stored as its `d^2 x d^2` transfer matrix
//! `S` in the column-stacking convention `vec(A rho B) = (B^T kron A) vec(rho)`,
//! so composition is a matrix product and `N` repetitions are a matrix power.
//! The Choi matrix is `sum_ij |i><j| kron E(|i><j|)` (trace `d`).

mod kraus;
mod twirl;

pub use kraus::KrausSet;
pub use twirl::{entanglement_fidelity, marginal_error, pauli_twirl, PauliErrorDistribution};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qcore::eig::HermitianEigen;
use crate::qcore::{CMatrix, DensityMatrix, Operator, Pauli, SystemLayout};
use crate::scalar::{Real, C};

/// Choi eigenvalues may dip to `-CP_TOL` before a map counts as not CP.
pub const CP_TOL: f64 = 1e-9;
/// Trace preservation tolerance on the matrix-unit basis.
pub const TP_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct Channel<T: Real> {
    layout: SystemLayout,
    superop: CMatrix<T>,
}

impl<T: Real> Channel<T> {
    /// Wraps a transfer matrix without checking complete positivity.
    pub fn from_superoperator(layout: SystemLayout, superop: CMatrix<T>) -> Result<Self> {
        let d = layout.dim();
        if superop.dim() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: superop.dim(),
            });
        }
        if !superop.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self { layout, superop })
    }

    /// Builds the transfer matrix column by column from the action on the
    /// matrix units `|i><j|`.
    pub fn from_action(layout: SystemLayout, mut f: impl FnMut(&CMatrix<T>) -> CMatrix<T>) -> Self {
        let d = layout.dim();
        let d2 = d * d;
        let mut s = CMatrix::zeros(d2);
        for j in 0..d {
            for i in 0..d {
                let out = f(&CMatrix::unit(d, i, j));
                let col = i + j * d;
                for b in 0..d {
                    for a in 0..d {
                        s[(a + b * d, col)] = out[(a, b)];
                    }
                }
            }
        }
        Self { layout, superop: s }
    }

    pub fn identity(layout: &SystemLayout) -> Self {
        let d = layout.dim();
        Self {
            layout: layout.clone(),
            superop: CMatrix::identity(d * d),
        }
    }

    pub fn from_kraus(set: &KrausSet<T>) -> Self {
        let d = set.layout().dim();
        let superop = set
            .ops()
            .iter()
            .fold(CMatrix::zeros(d * d), |acc, k| &acc + &k.conj().kron(k));
        Self {
            layout: set.layout().clone(),
            superop,
        }
    }

    /// `rho -> U rho U^dag`; `U` must be unitary to `1e-10`.
    pub fn unitary(u: &Operator<T>) -> Result<Self> {
        let defect = u.matrix().unitarity_defect();
        if defect > T::lit(1e-10).max(T::tight_tol()) {
            return Err(Error::NotUnitary(defect.as_f64()));
        }
        Ok(Self::unitary_unchecked(u))
    }

    pub(crate) fn unitary_unchecked(u: &Operator<T>) -> Self {
        let m = u.matrix();
        Self {
            layout: u.layout().clone(),
            superop: m.conj().kron(m),
        }
    }

    /// `(1 - 3e/4) rho + (e/4) sum_k s_k rho s_k` on `target`, identity elsewhere.
    pub fn depolarizing(layout: &SystemLayout, target: &str, epsilon: T) -> Result<Self> {
        if !(epsilon >= T::zero() && epsilon <= T::one()) {
            return Err(Error::OutOfRange {
                name: "epsilon",
                value: epsilon.as_f64(),
            });
        }
        let local = SystemLayout::new(vec![layout.qubits()[layout.index_of(target)?].clone()])?;
        let quarter = epsilon / T::lit(4.0);
        let mut ops = vec![CMatrix::identity(2).scale_re((T::one() - T::lit(3.0) * quarter).sqrt())];
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            ops.push(p.matrix().scale_re(quarter.sqrt()));
        }
        Channel::from_kraus(&KrausSet::new_unchecked(local, ops)).embed(layout)
    }

    /// Resets `target` to `|0><0|`, identity elsewhere.
    pub fn initialization(layout: &SystemLayout, target: &str) -> Result<Self> {
        let local = SystemLayout::new(vec![layout.qubits()[layout.index_of(target)?].clone()])?;
        let ops = vec![CMatrix::unit(2, 0, 0), CMatrix::unit(2, 0, 1)];
        Channel::from_kraus(&KrausSet::new_unchecked(local, ops)).embed(layout)
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn superoperator(&self) -> &CMatrix<T> {
        &self.superop
    }

    pub fn into_superoperator(self) -> CMatrix<T> {
        self.superop
    }

    /// Dimension `d` of the underlying Hilbert space.
    pub fn hilbert_dim(&self) -> usize {
        self.layout.dim()
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &Self) -> Result<Self> {
        if self.layout != first.layout {
            return Err(Error::LayoutMismatch(format!(
                "cannot compose {} after {}",
                self.layout, first.layout
            )));
        }
        Ok(Self {
            layout: self.layout.clone(),
            superop: &self.superop * &first.superop,
        })
    }

    /// `N`-fold composition by binary exponentiation.
    pub fn pow(&self, n: u64) -> Self {
        Self {
            layout: self.layout.clone(),
            superop: self.superop.pow(n),
        }
    }

    /// Action on an arbitrary matrix via the vec convention.
    pub fn apply_matrix(&self, x: &CMatrix<T>) -> CMatrix<T> {
        CMatrix::unvec_col(&self.superop.matvec(&x.vec_col())).expect("square output")
    }

    pub fn apply_operator(&self, x: &Operator<T>) -> Result<Operator<T>> {
        self.check_layout(x.layout())?;
        Operator::new(self.layout.clone(), self.apply_matrix(x.matrix()))
    }

    /// Output state; validated with the long-composition tolerance.
    pub fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        let out = self.apply_operator(rho.operator())?;
        DensityMatrix::with_tolerance(out, T::loose_tol())
    }

    fn check_layout(&self, other: &SystemLayout) -> Result<()> {
        if &self.layout != other {
            return Err(Error::LayoutMismatch(format!(
                "channel on {} applied to {}",
                self.layout, other
            )));
        }
        Ok(())
    }

    /// `sum_ij |i><j| kron E(|i><j|)`.
    pub fn choi(&self) -> CMatrix<T> {
        let d = self.hilbert_dim();
        CMatrix::from_fn(d * d, |r, c| {
            let (i, a) = (r / d, r % d);
            let (j, b) = (c / d, c % d);
            self.superop[(a + b * d, i + j * d)]
        })
    }

    pub fn from_choi(layout: SystemLayout, choi: &CMatrix<T>) -> Result<Self> {
        let d = layout.dim();
        if choi.dim() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: choi.dim(),
            });
        }
        let superop = CMatrix::from_fn(d * d, |r, c| {
            let (a, b) = (r % d, r / d);
            let (i, j) = (c % d, c / d);
            choi[(i * d + a, j * d + b)]
        });
        Self::from_superoperator(layout, superop)
    }

    /// Canonical Kraus operators from the Choi eigendecomposition; eigenvalues
    /// at or below round-off are dropped.
    pub fn kraus(&self) -> Result<KrausSet<T>> {
        let d = self.hilbert_dim();
        let eig = HermitianEigen::new(&self.choi())?;
        let floor = T::loose_tol();
        let mut ops = Vec::new();
        for (k, &lambda) in eig.values.iter().enumerate() {
            if lambda < -T::lit(CP_TOL) {
                return Err(Error::NotCompletelyPositive(lambda.as_f64()));
            }
            if lambda <= floor {
                continue;
            }
            let s = lambda.sqrt();
            ops.push(CMatrix::from_fn(d, |a, i| eig.vectors[(i * d + a, k)] * s));
        }
        Ok(KrausSet::new_unchecked(self.layout.clone(), ops))
    }

    /// Largest `|Tr E(|i><j|) - delta_ij|` over the matrix units.
    pub fn trace_preservation_defect(&self) -> T {
        let d = self.hilbert_dim();
        let mut worst = T::zero();
        for j in 0..d {
            for i in 0..d {
                let col = i + j * d;
                let tr = (0..d).fold(C::<T>::zero(), |s, a| s + self.superop[(a + a * d, col)]);
                let target = if i == j { C::one() } else { C::zero() };
                worst = worst.max((tr - target).norm());
            }
        }
        worst
    }

    pub fn min_choi_eigenvalue(&self) -> Result<T> {
        let vals = crate::qcore::eig::eigvalsh(&self.choi())?;
        Ok(vals.first().copied().unwrap_or_else(T::zero))
    }

    /// Checks both channel invariants.
    pub fn validate(&self) -> Result<()> {
        let tp = self.trace_preservation_defect();
        if tp > T::lit(TP_TOL).max(T::tight_tol()) {
            return Err(Error::NotTracePreserving(tp.as_f64()));
        }
        let min = self.min_choi_eigenvalue()?;
        if min < -T::lit(CP_TOL).max(T::loose_tol()) {
            return Err(Error::NotCompletelyPositive(min.as_f64()));
        }
        Ok(())
    }

    /// `self kron other`; `self`'s qubits precede `other`'s.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let layout = self.layout.concat(&other.layout)?;
        let (da, db) = (self.hilbert_dim(), other.hilbert_dim());
        let left: Vec<CMatrix<T>> = (0..da * da)
            .map(|col| self.unit_image(col))
            .collect();
        let right: Vec<CMatrix<T>> = (0..db * db)
            .map(|col| other.unit_image(col))
            .collect();
        Ok(Self::from_action(layout, |unit| {
            let d = da * db;
            let pos = unit
                .as_slice()
                .iter()
                .position(|z| !z.is_zero())
                .expect("matrix unit");
            let (r, c) = (pos / d, pos % d);
            let (i1, i2) = (r / db, r % db);
            let (j1, j2) = (c / db, c % db);
            left[i1 + j1 * da].kron(&right[i2 + j2 * db])
        }))
    }

    /// `E(|i><j|)` for column `i + j d` of the transfer matrix.
    fn unit_image(&self, col: usize) -> CMatrix<T> {
        let d = self.hilbert_dim();
        CMatrix::from_fn(d, |a, b| self.superop[(a + b * d, col)])
    }

    /// Reorders qubits to match `target`, which holds the same labels.
    pub fn permuted(&self, target: &SystemLayout) -> Result<Self> {
        let perm = self.layout.permutation_to(target)?;
        let d = self.hilbert_dim();
        let mut s = CMatrix::zeros(d * d);
        for j in 0..d {
            for i in 0..d {
                let src_col = i + j * d;
                let dst_col = perm[i] + perm[j] * d;
                for b in 0..d {
                    for a in 0..d {
                        s[(perm[a] + perm[b] * d, dst_col)] = self.superop[(a + b * d, src_col)];
                    }
                }
            }
        }
        Ok(Self {
            layout: target.clone(),
            superop: s,
        })
    }

    /// Lifts a channel on a subset of `layout` to all of it, acting as the
    /// identity on the remaining qubits.
    pub fn embed(&self, layout: &SystemLayout) -> Result<Self> {
        if &self.layout == layout {
            return Ok(self.clone());
        }
        let own: Vec<&str> = self.layout.labels().collect();
        let rest: Vec<&str> = layout.labels().filter(|l| !own.contains(l)).collect();
        for l in &own {
            layout.index_of(l)?;
        }
        let wide = if rest.is_empty() {
            self.clone()
        } else {
            self.tensor(&Self::identity(&layout.select(&rest)?))?
        };
        wide.permuted(layout)
    }

    /// Register map `sigma -> Tr_env[E(env kron sigma)]` with the environment
    /// held in the fixed state `env`, whose labels must belong to this layout.
    pub fn contract(&self, env: &DensityMatrix<T>) -> Result<Self> {
        let env_labels: Vec<&str> = env.layout().labels().collect();
        let reduced = self.layout.without(&env_labels)?;
        let env_op = env.operator();
        let mut failure = None;
        let out = Self::from_action(reduced.clone(), |unit| {
            let run = || -> Result<CMatrix<T>> {
                let x = env_op
                    .kron(&Operator::new(reduced.clone(), unit.clone())?)?
                    .permuted(&self.layout)?;
                let y = self.apply_operator(&x)?;
                Ok(y.partial_trace(&env_labels)?.into_matrix())
            };
            run().unwrap_or_else(|e| {
                failure = Some(e);
                CMatrix::zeros(unit.dim())
            })
        });
        match failure {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::Role;

    fn q(label: &str) -> SystemLayout {
        SystemLayout::registers(&[label]).unwrap()
    }

    fn hadamard() -> Operator<f64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Operator::new(q("a"), CMatrix::from_real_rows(&[&[s, s], &[s, -s]])).unwrap()
    }

    fn mixed_input() -> DensityMatrix<f64> {
        DensityMatrix::from_bloch(&q("a"), [0.1, -0.2, 0.3]).unwrap()
    }

    #[test]
    fn full_depolarization_freezes_to_mixed() {
        let e = Channel::depolarizing(&q("a"), "a", 1.0).unwrap();
        let out = e.apply(&mixed_input()).unwrap();
        assert!(out.matrix().distance(&CMatrix::identity(2).scale_re(0.5)) < 1e-15);
        let id = Channel::depolarizing(&q("a"), "a", 0.0).unwrap();
        assert!(id.superoperator().distance(Channel::identity(&q("a")).superoperator()) < 1e-15);
        assert!(Channel::depolarizing(&q("a"), "a", 1.5).is_err());
        assert!(Channel::depolarizing(&q("a"), "a", f64::NAN).is_err());
        assert!(Channel::depolarizing(&q("a"), "b", 0.1).is_err());
    }

    #[test]
    fn depolarizing_leaves_other_qubits_alone() {
        let l = SystemLayout::registers(&["a", "b"]).unwrap();
        let e = Channel::depolarizing(&l, "b", 1.0).unwrap();
        let rho = DensityMatrix::<f64>::basis(&l, 0b10).unwrap();
        let out = e.apply(&rho).unwrap();
        // |1><1| on a, maximally mixed on b
        let expect = CMatrix::diag(&[0.0, 0.0, 0.5, 0.5].map(|x| C::new(x, 0.0)));
        assert!(out.matrix().distance(&expect) < 1e-15);
    }

    #[test]
    fn initialization_resets() {
        let e = Channel::initialization(&q("a"), "a").unwrap();
        let one = DensityMatrix::<f64>::basis(&q("a"), 1).unwrap();
        assert_eq!(e.apply(&one).unwrap().matrix(), &CMatrix::unit(2, 0, 0));
        let mixed = DensityMatrix::<f64>::maximally_mixed(&q("a"));
        assert_eq!(e.apply(&mixed).unwrap().matrix(), &CMatrix::unit(2, 0, 0));
        assert_eq!(e.kraus().unwrap().len(), 2);
    }

    #[test]
    fn noisy_initialization_gives_biased_state() {
        let l = SystemLayout::actuators(&["A"]).unwrap();
        let init = Channel::initialization(&l, "A").unwrap();
        let noisy = Channel::depolarizing(&l, "A", 0.2).unwrap().compose(&init).unwrap();
        let out = noisy.apply(&DensityMatrix::maximally_mixed(&l)).unwrap();
        let expect = CMatrix::from_real_rows(&[&[0.9, 0.0], &[0.0, 0.1]]);
        assert!(out.matrix().distance(&expect) < 1e-15);
    }

    #[test]
    fn unitary_channels_compose() {
        let h = Channel::unitary(&hadamard()).unwrap();
        let hh = h.compose(&h).unwrap();
        assert!(hh.superoperator().distance(Channel::identity(&q("a")).superoperator()) < 1e-14);
        let id = Channel::<f64>::unitary(&Operator::identity(&q("a"))).unwrap();
        assert_eq!(id, Channel::identity(&q("a")));
        let bad = Operator::new(q("a"), CMatrix::<f64>::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]])).unwrap();
        assert!(matches!(Channel::unitary(&bad), Err(Error::NotUnitary(_))));
        let other = Channel::identity(&q("b"));
        assert!(matches!(h.compose(&other), Err(Error::LayoutMismatch(_))));
    }

    #[test]
    fn noisy_hadamard_after_noisy_init_is_idempotent() {
        let l = SystemLayout::actuators(&["A"]).unwrap();
        let init = Channel::depolarizing(&l, "A", 0.2)
            .unwrap()
            .compose(&Channel::initialization(&l, "A").unwrap())
            .unwrap();
        let h = Operator::new(l.clone(), hadamard().into_matrix()).unwrap();
        let u = Channel::depolarizing(&l, "A", 0.1)
            .unwrap()
            .compose(&Channel::unitary(&h).unwrap())
            .unwrap();
        let ui = u.compose(&init).unwrap();
        let twice = ui.compose(&ui).unwrap();
        assert!(twice.superoperator().distance(ui.superoperator()) < 1e-14);
    }

    #[test]
    fn choi_examples() {
        let id = Channel::<f64>::identity(&q("a"));
        // 2 |Phi><Phi| = sum_ij |ii><jj|
        let expect = CMatrix::from_fn(4, |r, c| {
            if r % 3 == 0 && c % 3 == 0 {
                C::new(1.0, 0.0)
            } else {
                C::new(0.0, 0.0)
            }
        });
        assert_eq!(id.choi(), expect);

        // explicit construction for full depolarization: E(|i><j|) = delta_ij 1/2
        let dep = Channel::depolarizing(&q("a"), "a", 1.0).unwrap();
        let mut oracle = CMatrix::<f64>::zeros(4);
        for i in 0..2 {
            for j in 0..2 {
                let image = dep.apply_matrix(&CMatrix::unit(2, i, j));
                let block = CMatrix::unit(2, i, j).kron(&image);
                oracle = &oracle + &block;
            }
        }
        assert!(dep.choi().distance(&oracle) < 1e-15);
        assert!(dep.choi().distance(&CMatrix::identity(4).scale_re(0.5)) < 1e-15);
    }

    #[test]
    fn representation_round_trips() {
        let l = SystemLayout::of(&[("A", Role::Actuator), ("b", Role::Register)]).unwrap();
        let h = Operator::embed(&l, &Operator::new(SystemLayout::actuators(&["A"]).unwrap(), hadamard().into_matrix()).unwrap()).unwrap();
        let e = Channel::depolarizing(&l, "b", 0.3)
            .unwrap()
            .compose(&Channel::unitary(&h).unwrap())
            .unwrap()
            .compose(&Channel::initialization(&l, "A").unwrap())
            .unwrap();
        e.validate().unwrap();
        let back = Channel::from_choi(l.clone(), &e.choi()).unwrap();
        assert_eq!(back, e);
        let via_kraus = Channel::from_kraus(&e.kraus().unwrap());
        assert!(via_kraus.superoperator().distance(e.superoperator()) < 1e-12);
    }

    #[test]
    fn tensor_and_embed_agree() {
        let l = SystemLayout::registers(&["a", "b", "c"]).unwrap();
        let on_b = Channel::depolarizing(&q("b"), "b", 0.4).unwrap();
        let lifted = on_b.embed(&l).unwrap();
        let direct = Channel::depolarizing(&l, "b", 0.4).unwrap();
        assert!(lifted.superoperator().distance(direct.superoperator()) < 1e-15);

        let ha = Channel::unitary(&hadamard()).unwrap();
        let ib = Channel::initialization(&q("b"), "b").unwrap();
        let joint = ha.tensor(&ib).unwrap();
        let rho = DensityMatrix::<f64>::basis(&joint.layout().clone(), 0b01).unwrap();
        let out = joint.apply(&rho).unwrap();
        // |+><+| on a, |0><0| on b
        let expect = CMatrix::from_real_rows(&[&[0.5, 0.0, 0.5, 0.0], &[0.0; 4], &[0.5, 0.0, 0.5, 0.0], &[0.0; 4]]);
        assert!(out.matrix().distance(&expect) < 1e-15);
    }

    #[test]
    fn contract_with_fixed_environment() {
        // CNOT from A to Q with A frozen in |1><1| acts as X on Q
        let l = SystemLayout::of(&[("A", Role::Actuator), ("Q", Role::Register)]).unwrap();
        let cnot = Operator::<f64>::new(
            l.clone(),
            CMatrix::from_real_rows(&[
                &[1.0, 0.0, 0.0, 0.0],
                &[0.0, 1.0, 0.0, 0.0],
                &[0.0, 0.0, 0.0, 1.0],
                &[0.0, 0.0, 1.0, 0.0],
            ]),
        )
        .unwrap();
        let env = DensityMatrix::basis(&SystemLayout::actuators(&["A"]).unwrap(), 1).unwrap();
        let k = Channel::unitary(&cnot).unwrap().contract(&env).unwrap();
        let x = Operator::pauli_product(&SystemLayout::registers(&["Q"]).unwrap(), &[("Q", Pauli::X)], 1.0).unwrap();
        assert!(k.superoperator().distance(Channel::unitary(&x).unwrap().superoperator()) < 1e-15);
    }
}
