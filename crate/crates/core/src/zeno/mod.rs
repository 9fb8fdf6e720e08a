//! Operator-Zeno engine.
//!
//! One period of a noisy cycle applies the actuator channels (instantaneous,
//! in list order) and then lets the whole system evolve freely for
//! `dt = 2 pi / f` under the interaction Hamiltonian. After `N` periods the
//! register sees
//!
//! ```text
//! R'(sigma) = Tr_A[ (T o P)^N (rho_A kron sigma) ],   rho_A = 1/d_A
//! ```
//!
//! which approaches `exp(-i H_Q t)` with `H_Q = Tr_A(rho_U H)` as `f` grows.
//!
//! When the period map `P` discards the actuator and replaces it with a fixed
//! state (every initialization or twirl cycle), each period starts from
//! `rho_U kron sigma`, so `R'` is exactly `K^N` with
//! `K(sigma) = Tr_A[T(rho_U kron sigma)]`. [`NocoMethod::Auto`] uses that
//! reduction; [`NocoMethod::Full`] always powers the joint superoperator.

use num_traits::Zero;

use crate::channels::{entanglement_fidelity, Channel, KrausSet};
use crate::error::{Error, Result};
use crate::qcore::eig::expm_hermitian_matrix;
use crate::qcore::{
    expm_hermitian, period_from_frequency, CMatrix, DensityMatrix, HermitianOperator, Operator,
    Pauli, Qubit, Role, SystemLayout,
};
use crate::scalar::Real;

/// `|P^2 - P|_F` at or below this counts as a projector.
pub const PROJECTOR_TOL: f64 = 1e-10;

/// Noisy initialization `E_eps o I` of one actuator qubit.
pub fn noisy_initialization<T: Real>(label: &str, epsilon: T) -> Result<Channel<T>> {
    let l = single_actuator(label)?;
    Channel::depolarizing(&l, label, epsilon)?.compose(&Channel::initialization(&l, label)?)
}

/// Noisy unitary: `U`, then depolarizing at `epsilon` on each of its qubits.
/// Qubits of `u` are treated as actuators.
pub fn noisy_unitary<T: Real>(u: &Operator<T>, epsilon: T) -> Result<Channel<T>> {
    let layout = as_actuators(u.layout())?;
    let u = Operator::new(layout.clone(), u.matrix().clone())?;
    let mut ch = Channel::unitary(&u)?;
    for label in layout.labels() {
        ch = Channel::depolarizing(&layout, label, epsilon)?.compose(&ch)?;
    }
    Ok(ch)
}

/// Twirl `E_1` (depolarizing at rate one) of one actuator qubit.
pub fn twirl<T: Real>(label: &str) -> Result<Channel<T>> {
    Channel::depolarizing(&single_actuator(label)?, label, T::one())
}

fn single_actuator(label: &str) -> Result<SystemLayout> {
    SystemLayout::new(vec![Qubit::actuator(label)])
}

fn as_actuators(layout: &SystemLayout) -> Result<SystemLayout> {
    SystemLayout::new(layout.labels().map(Qubit::actuator).collect())
}

/// One Zeno period: interaction, actuator channels and repetition frequency.
#[derive(Clone, Debug)]
pub struct NoisyCycleSpec<T: Real> {
    hamiltonian: HermitianOperator<T>,
    actuator_ops: Vec<Channel<T>>,
    freq_over_h: T,
    actuators: SystemLayout,
    registers: SystemLayout,
}

impl<T: Real> NoisyCycleSpec<T> {
    /// `actuator_ops` run in order each period; each acts on a subset of the
    /// Hamiltonian's actuator qubits. `freq_over_h` is in units of `J/h`.
    pub fn new(
        hamiltonian: HermitianOperator<T>,
        actuator_ops: Vec<Channel<T>>,
        freq_over_h: T,
    ) -> Result<Self> {
        if !(freq_over_h > T::zero() && freq_over_h.is_finite()) {
            return Err(Error::OutOfRange {
                name: "freq_over_h",
                value: freq_over_h.as_f64(),
            });
        }
        let layout = hamiltonian.layout();
        let actuators = layout
            .with_role(Role::Actuator)
            .ok_or_else(|| Error::LayoutMismatch(format!("{layout} has no actuator")))?;
        let registers = layout
            .with_role(Role::Register)
            .ok_or_else(|| Error::LayoutMismatch(format!("{layout} has no register")))?;
        if actuator_ops.is_empty() {
            return Err(Error::Unsupported("a cycle needs at least one actuator operation".into()));
        }
        for op in &actuator_ops {
            for label in op.layout().labels() {
                if !actuators.contains(label) {
                    return Err(Error::LayoutMismatch(format!(
                        "operation on {} touches non-actuator `{label}`",
                        op.layout()
                    )));
                }
            }
        }
        Ok(Self {
            hamiltonian,
            actuator_ops,
            freq_over_h,
            actuators,
            registers,
        })
    }

    pub fn hamiltonian(&self) -> &HermitianOperator<T> {
        &self.hamiltonian
    }

    pub fn actuator_ops(&self) -> &[Channel<T>] {
        &self.actuator_ops
    }

    pub fn freq_over_h(&self) -> T {
        self.freq_over_h
    }

    pub fn with_frequency(&self, freq_over_h: T) -> Result<Self> {
        Self::new(self.hamiltonian.clone(), self.actuator_ops.clone(), freq_over_h)
    }

    pub fn layout(&self) -> &SystemLayout {
        self.hamiltonian.layout()
    }

    pub fn actuator_layout(&self) -> &SystemLayout {
        &self.actuators
    }

    pub fn register_layout(&self) -> &SystemLayout {
        &self.registers
    }

    /// Internal duration of one period.
    pub fn period(&self) -> T {
        period_from_frequency(self.freq_over_h)
    }

    /// Largest `N` with `N dt <= duration`. A relative slack of a few ulps
    /// keeps exact multiples from rounding down.
    pub fn periods_in(&self, duration: T) -> u64 {
        let x = duration / self.period();
        let slack = T::one() + T::epsilon() * T::lit(16.0);
        (x * slack).floor().to_u64().unwrap_or(0)
    }

    /// Composite actuator map `P` of one period, on the actuator layout.
    pub fn actuator_map(&self) -> Result<Channel<T>> {
        let mut p = Channel::identity(&self.actuators);
        for op in &self.actuator_ops {
            p = op.embed(&self.actuators)?.compose(&p)?;
        }
        Ok(p)
    }

    /// Free evolution `T` over one period, on the full layout.
    pub fn free_evolution(&self) -> Result<Channel<T>> {
        let u = expm_hermitian(&self.hamiltonian, self.period())?;
        Ok(Channel::unitary_unchecked(&u))
    }
}

/// Frozen actuator state of a cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedState<T: Real> {
    pub state: DensityMatrix<T>,
    /// The cycle fully depolarizes the actuator; `state` is then `1/d_A`.
    pub twirl_only: bool,
}

/// `rho_U = P(1/d_A)`, checked to be a fixed point of `P`.
pub fn fixed_state<T: Real>(spec: &NoisyCycleSpec<T>) -> Result<FixedState<T>> {
    let p = spec.actuator_map()?;
    let mixed = DensityMatrix::maximally_mixed(spec.actuator_layout());
    let state = p.apply(&mixed)?;
    let again = p.apply(&state)?;
    let drift = again.matrix().distance(state.matrix());
    if drift > T::lit(PROJECTOR_TOL).max(T::tight_tol()) {
        return Err(Error::InvalidState(format!(
            "actuator map does not fix its image of 1/d (drift {:e})",
            drift.as_f64()
        )));
    }
    let twirl_only = replacement_defect(&p, &mixed) <= T::tight_tol() * T::lit(p.hilbert_dim() as f64);
    Ok(FixedState { state, twirl_only })
}

/// `|S - vec(rho) vec(1)^T|_F`: zero iff `E(X) = Tr(X) rho` for all `X`.
pub fn replacement_defect<T: Real>(e: &Channel<T>, rho: &DensityMatrix<T>) -> T {
    let d = e.hilbert_dim();
    let s = e.superoperator();
    let r = rho.matrix();
    let mut acc = T::zero();
    for j in 0..d {
        for i in 0..d {
            let col = i + j * d;
            for b in 0..d {
                for a in 0..d {
                    let target = if i == j { r[(a, b)] } else { Zero::zero() };
                    acc = acc + (s[(a + b * d, col)] - target).norm_sqr();
                }
            }
        }
    }
    acc.sqrt()
}

/// Result of [`verify_projector`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectorCheck<T: Real> {
    pub is_projector: bool,
    pub defect: T,
}

/// `|P^2 - P|_F` for the period's actuator map.
pub fn verify_projector<T: Real>(spec: &NoisyCycleSpec<T>) -> Result<ProjectorCheck<T>> {
    Ok(projector_check(&spec.actuator_map()?))
}

pub fn projector_check<T: Real>(p: &Channel<T>) -> ProjectorCheck<T> {
    let sq = &p.superoperator().clone() * p.superoperator();
    let defect = sq.distance(p.superoperator());
    ProjectorCheck {
        is_projector: defect <= T::lit(PROJECTOR_TOL).max(T::tight_tol()),
        defect,
    }
}

/// Register Hamiltonian `H_Q = Tr_A((rho_U kron 1) H)`.
pub fn effective_hamiltonian<T: Real>(
    h: &HermitianOperator<T>,
    rho_u: &DensityMatrix<T>,
) -> Result<HermitianOperator<T>> {
    let traced: Vec<&str> = rho_u.layout().labels().collect();
    let lifted = Operator::embed(h.layout(), rho_u.operator())?;
    let product = lifted.try_mul(h.operator())?;
    let reduced = product.partial_trace(&traced)?;
    // symmetrize away round-off before the Hermiticity check
    let m = reduced.matrix();
    let sym = (m + &m.adjoint()).scale_re(T::lit(0.5));
    HermitianOperator::new(Operator::new(reduced.layout().clone(), sym)?)
}

/// How `M^N` is contracted onto the register.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NocoMethod {
    /// Reduced register map when the actuator map is a replacement channel,
    /// joint superoperator otherwise.
    #[default]
    Auto,
    /// `K^N` on the register only; requires a replacement-channel cycle.
    Reduced,
    /// `(T o P)^N` on the joint system, then contracted with `1/d_A`.
    Full,
}

/// A noisy-operation-controlled gate and its error decomposition.
#[derive(Clone, Debug)]
pub struct NocoResult<T: Real> {
    /// `R'` on the register layout.
    pub realized: Channel<T>,
    /// `R = exp(-i H_Q t)` as a unitary on the register layout.
    pub target: Operator<T>,
    pub ideal: Channel<T>,
    /// `E_R = R' o R^-1`.
    pub error: Channel<T>,
    pub periods: u64,
    /// `N dt` in internal units.
    pub elapsed: T,
    pub effective_hamiltonian: HermitianOperator<T>,
    pub method: NocoMethod,
}

impl<T: Real> NocoResult<T> {
    pub fn fidelity(&self) -> Result<T> {
        entanglement_fidelity(&self.realized, &self.target)
    }

    pub fn infidelity(&self) -> Result<T> {
        Ok(T::one() - self.fidelity()?)
    }
}

/// Realized register channel for a target duration `t`.
pub fn noco_channel<T: Real>(spec: &NoisyCycleSpec<T>, duration: T, method: NocoMethod) -> Result<NocoResult<T>> {
    if !(duration > T::zero() && duration.is_finite()) {
        return Err(Error::OutOfRange {
            name: "duration",
            value: duration.as_f64(),
        });
    }
    let periods = spec.periods_in(duration);
    if periods == 0 {
        return Err(Error::ZeroPeriods {
            duration: duration.as_f64(),
            period: spec.period().as_f64(),
        });
    }
    let p = spec.actuator_map()?;
    let fixed = fixed_state(spec)?;
    let free = spec.free_evolution()?;
    let replacement =
        replacement_defect(&p, &fixed.state) <= T::tight_tol() * T::lit(p.hilbert_dim() as f64);

    let (realized, used) = match (method, replacement) {
        (NocoMethod::Reduced, false) => {
            return Err(Error::Unsupported(
                "reduced contraction needs an actuator map that replaces the actuator state".into(),
            ))
        }
        (NocoMethod::Auto | NocoMethod::Reduced, true) => {
            (free.contract(&fixed.state)?.pow(periods), NocoMethod::Reduced)
        }
        (NocoMethod::Full, _) | (NocoMethod::Auto, false) => {
            let m = free.compose(&p.embed(spec.layout())?)?;
            let env = DensityMatrix::maximally_mixed(spec.actuator_layout());
            (m.pow(periods).contract(&env)?, NocoMethod::Full)
        }
    };

    let h_q = effective_hamiltonian(&spec.hamiltonian, &fixed.state)?;
    let target = expm_hermitian(&h_q, duration)?;
    let ideal = Channel::unitary_unchecked(&target);
    let error = realized.compose(&Channel::unitary_unchecked(&target.adjoint()))?;
    Ok(NocoResult {
        realized,
        target,
        ideal,
        error,
        periods,
        elapsed: spec.period() * T::lit(periods as f64),
        effective_hamiltonian: h_q,
        method: used,
    })
}

/// One row of an infidelity surface.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint<T: Real> {
    pub epsilon: T,
    pub freq_over_h: T,
    pub infidelity: T,
    pub periods: u64,
}

/// `1 - F` over a grid, `epsilon` outer and frequency inner. `build` returns
/// the cycle and target duration for a grid point.
pub fn infidelity_surface<T: Real>(
    epsilons: &[T],
    freqs: &[T],
    build: impl Fn(T, T) -> Result<(NoisyCycleSpec<T>, T)>,
) -> Result<Vec<SurfacePoint<T>>> {
    if epsilons.is_empty() || freqs.is_empty() {
        return Err(Error::Unsupported("empty grid".into()));
    }
    let mut rows = Vec::with_capacity(epsilons.len() * freqs.len());
    for &eps in epsilons {
        for &f in freqs {
            rows.push(surface_point(eps, f, &build)?);
        }
    }
    Ok(rows)
}

/// Single grid point of [`infidelity_surface`].
pub fn surface_point<T: Real>(
    epsilon: T,
    freq_over_h: T,
    build: impl Fn(T, T) -> Result<(NoisyCycleSpec<T>, T)>,
) -> Result<SurfacePoint<T>> {
    let (spec, t) = build(epsilon, freq_over_h)?;
    let r = noco_channel(&spec, t, NocoMethod::Auto)?;
    Ok(SurfacePoint {
        epsilon,
        freq_over_h,
        infidelity: r.infidelity()?,
        periods: r.periods,
    })
}

/// Step-by-step propagation of `(T o P)^N` applied to `1/d_A kron x`, traced
/// over the actuators. Independent of the superoperator machinery; used as
/// an oracle.
pub fn propagate_stepwise<T: Real>(spec: &NoisyCycleSpec<T>, x: &Operator<T>, periods: u64) -> Result<Operator<T>> {
    let act = spec.actuator_layout();
    let kraus: Vec<KrausSet<T>> = spec
        .actuator_ops
        .iter()
        .map(|op| op.embed(act)?.kraus())
        .collect::<Result<_>>()?;
    let lifted: Vec<Vec<CMatrix<T>>> = kraus
        .iter()
        .map(|set| {
            set.ops()
                .iter()
                .map(|k| {
                    let local = Operator::new(act.clone(), k.clone())?;
                    Ok(Operator::embed(spec.layout(), &local)?.into_matrix())
                })
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let u = expm_hermitian_matrix(spec.hamiltonian.matrix(), spec.period())?;
    let ud = u.adjoint();
    let mixed = DensityMatrix::maximally_mixed(act);
    let mut state = mixed.operator().kron(x)?.permuted(spec.layout())?.into_matrix();
    for _ in 0..periods {
        for ops in &lifted {
            state = ops.iter().fold(CMatrix::zeros(state.dim()), |acc, k| {
                &acc + &(&(k * &state) * &k.adjoint())
            });
        }
        state = &(&u * &state) * &ud;
    }
    let labels: Vec<&str> = act.labels().collect();
    Operator::new(spec.layout().clone(), state)?.partial_trace(&labels)
}

/// Single-qubit Pauli operator on a one-qubit register layout; a convenience
/// for targets built from `H_Q`.
pub fn register_pauli<T: Real>(label: &str, p: Pauli) -> Result<Operator<T>> {
    Operator::pauli_product(&SystemLayout::registers(&[label])?, &[(label, p)], T::one())
}
