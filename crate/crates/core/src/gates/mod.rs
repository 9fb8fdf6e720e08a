//! Interaction catalog, gate recipes and circuit identities.
//!
//! Labels used by the catalog (actuators first):
//!
//! | interaction | labels            | Hamiltonian                                 |
//! |-------------|-------------------|---------------------------------------------|
//! | Heisenberg  | `A`, `Q`          | `X_A X_Q + Y_A Y_Q + Z_A Z_Q`               |
//! | Ising3      | `A`, `Q1`, `Q2`   | `Z_A Z_Q1 Z_Q2`                             |
//! | XY          | `A`, `C1`, `P2`   | `X_A (X_C1 + X_P2) + Y_A (Y_C1 + Y_P2)`     |
//!
//! All energies are in units of `J`.

mod identities;
mod transfer;

pub use identities::{
    lambda_z, lambda_z_standard, r_z, r_zz, r_zz_prime_displayed, swap, swap_identity_check,
    swap_identity_deviation, swap_time, xy_phase_factor,
};
pub use transfer::{transfer_cphase_circuit, transfer_dependence, TransferMode};

use std::fmt;
use std::str::FromStr;

use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::qcore::{
    bloch_vector, expm_hermitian, CMatrix, DensityMatrix, HermitianOperator, Operator, Pauli,
    Qubit, Role, SystemLayout,
};
use crate::scalar::Real;
use crate::zeno::{noco_channel, noisy_initialization, noisy_unitary, twirl, NocoMethod, NocoResult, NoisyCycleSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InteractionKind {
    Heisenberg,
    Ising3,
    Xy,
}

impl InteractionKind {
    pub const ALL: [InteractionKind; 3] = [Self::Heisenberg, Self::Ising3, Self::Xy];

    /// Default labels, actuator first.
    pub fn labels(self) -> &'static [&'static str] {
        match self {
            Self::Heisenberg => &["A", "Q"],
            Self::Ising3 => &["A", "Q1", "Q2"],
            Self::Xy => &["A", "C1", "P2"],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Heisenberg => "heisenberg",
            Self::Ising3 => "ising3",
            Self::Xy => "xy",
        }
    }
}

impl fmt::Display for InteractionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InteractionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "interaction",
                name: s.to_owned(),
            })
    }
}

/// Layout with the first label as actuator and the rest as registers.
pub fn actuator_first_layout(labels: &[&str]) -> Result<SystemLayout> {
    SystemLayout::new(
        labels
            .iter()
            .enumerate()
            .map(|(i, l)| if i == 0 { Qubit::actuator(l) } else { Qubit::register(l) })
            .collect(),
    )
}

/// Interaction of `kind` between `labels` (actuator first), embedded in `layout`.
pub fn interaction<T: Real>(kind: InteractionKind, layout: &SystemLayout, labels: &[&str]) -> Result<HermitianOperator<T>> {
    let want = kind.labels().len();
    if labels.len() != want {
        return Err(Error::DimensionMismatch {
            expected: want,
            found: labels.len(),
        });
    }
    let term = |factors: &[(&str, Pauli)]| -> Result<Operator<T>> { Operator::pauli_product(layout, factors, T::one()) };
    let terms: Vec<Operator<T>> = match kind {
        InteractionKind::Heisenberg => [Pauli::X, Pauli::Y, Pauli::Z]
            .iter()
            .map(|&p| term(&[(labels[0], p), (labels[1], p)]))
            .collect::<Result<_>>()?,
        InteractionKind::Ising3 => vec![term(&[(labels[0], Pauli::Z), (labels[1], Pauli::Z), (labels[2], Pauli::Z)])?],
        InteractionKind::Xy => [Pauli::X, Pauli::Y]
            .iter()
            .flat_map(|&p| [term(&[(labels[0], p), (labels[1], p)]), term(&[(labels[0], p), (labels[2], p)])])
            .collect::<Result<_>>()?,
    };
    let mut acc = Operator::zeros(layout);
    for t in &terms {
        acc = acc.try_add(t)?;
    }
    HermitianOperator::new(acc)
}

/// Catalog Hamiltonian on its default labels.
pub fn hamiltonian_catalog<T: Real>(kind: InteractionKind) -> Result<HermitianOperator<T>> {
    let labels = kind.labels();
    interaction(kind, &actuator_first_layout(labels)?, labels)
}

/// Named register-level gates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateName {
    /// `sigma_z` phase gate via frequent initialization, `t = pi / (2 (1 - eps_i))`.
    PhaseZ,
    Rz,
    Rx,
    Rzz,
    RzzPrime,
    DecoupleHeisenberg,
    DecoupleIsing,
    DecoupleXy,
}

impl GateName {
    pub const ALL: [GateName; 8] = [
        Self::PhaseZ,
        Self::Rz,
        Self::Rx,
        Self::Rzz,
        Self::RzzPrime,
        Self::DecoupleHeisenberg,
        Self::DecoupleIsing,
        Self::DecoupleXy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::PhaseZ => "phase_z",
            Self::Rz => "rz",
            Self::Rx => "rx",
            Self::Rzz => "rzz",
            Self::RzzPrime => "rzz_prime",
            Self::DecoupleHeisenberg => "decouple_heisenberg",
            Self::DecoupleIsing => "decouple_ising",
            Self::DecoupleXy => "decouple_xy",
        }
    }

    pub fn is_decoupling(self) -> bool {
        matches!(self, Self::DecoupleHeisenberg | Self::DecoupleIsing | Self::DecoupleXy)
    }
}

impl fmt::Display for GateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "gate",
                name: s.to_owned(),
            })
    }
}

/// Depolarizing rates of the actuator operations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseRates<T> {
    pub epsilon_i: T,
    pub epsilon_h: T,
}

impl<T: Real> NoiseRates<T> {
    /// Every operation shares one rate.
    pub fn uniform(epsilon: T) -> Self {
        Self {
            epsilon_i: epsilon,
            epsilon_h: epsilon,
        }
    }

    fn check(&self) -> Result<()> {
        for (name, v) in [("epsilon_i", self.epsilon_i), ("epsilon_h", self.epsilon_h)] {
            if !(v >= T::zero() && v < T::one()) {
                return Err(Error::OutOfRange { name, value: v.as_f64() });
            }
        }
        Ok(())
    }
}

/// A gate, the cycle that realizes it and its ideal unitary.
#[derive(Clone, Debug)]
pub struct GateRecipe<T: Real> {
    pub name: GateName,
    pub spec: NoisyCycleSpec<T>,
    /// Internal units (`hbar / J`).
    pub duration: T,
    /// Ideal gate on the register layout of `spec`.
    pub target: Operator<T>,
}

impl<T: Real> GateRecipe<T> {
    pub fn realize(&self) -> Result<NocoResult<T>> {
        noco_channel(&self.spec, self.duration, NocoMethod::Auto)
    }

    /// `1 - F(R', target)`.
    pub fn infidelity(&self) -> Result<T> {
        let r = self.realize()?;
        Ok(T::one() - crate::channels::entanglement_fidelity(&r.realized, &self.target)?)
    }
}

fn hadamard<T: Real>(label: &str) -> Result<Operator<T>> {
    let s = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let l = SystemLayout::new(vec![Qubit::actuator(label)])?;
    Operator::new(l, CMatrix::from_fn(2, |i, j| crate::scalar::cr(if i == 1 && j == 1 { -s } else { s })))
}

fn rotation<T: Real>(layout: &SystemLayout, factors: &[(&str, Pauli)], angle: T) -> Result<Operator<T>> {
    let g = HermitianOperator::new(Operator::pauli_product(layout, factors, T::one())?)?;
    expm_hermitian(&g, angle)
}

/// Builds a recipe. Decoupling gates need `duration`; the others derive it
/// from the rates and reject an explicit one.
pub fn recipe<T: Real>(name: GateName, rates: NoiseRates<T>, freq_over_h: T, duration: Option<T>) -> Result<GateRecipe<T>> {
    rates.check()?;
    let quarter_pi = T::FRAC_PI_4();
    let ki = T::one() - rates.epsilon_i;
    let kh = T::one() - rates.epsilon_h;
    if !name.is_decoupling() && duration.is_some() {
        return Err(Error::Unsupported(format!("gate `{name}` has a fixed duration")));
    }

    let heis = || -> Result<HermitianOperator<T>> { hamiltonian_catalog(InteractionKind::Heisenberg) };
    let q = || SystemLayout::registers(&["Q"]);
    let (h, ops, t, target) = match name {
        GateName::PhaseZ => {
            let t = T::FRAC_PI_2() / ki;
            (heis()?, vec![noisy_initialization("A", rates.epsilon_i)?], t, rotation(&q()?, &[("Q", Pauli::Z)], T::FRAC_PI_2())?)
        }
        GateName::Rz => {
            let t = quarter_pi / ki;
            (heis()?, vec![noisy_initialization("A", rates.epsilon_i)?], t, r_z(&q()?, "Q")?)
        }
        GateName::Rx => {
            let t = quarter_pi / (ki * kh);
            let ops = vec![
                noisy_initialization("A", rates.epsilon_i)?,
                noisy_unitary(&hadamard("A")?, rates.epsilon_h)?,
            ];
            (heis()?, ops, t, rotation(&q()?, &[("Q", Pauli::X)], quarter_pi)?)
        }
        GateName::Rzz => {
            let t = quarter_pi / ki;
            let regs = SystemLayout::registers(&["Q1", "Q2"])?;
            (
                hamiltonian_catalog(InteractionKind::Ising3)?,
                vec![noisy_initialization("A", rates.epsilon_i)?],
                t,
                r_zz(&regs, "Q1", "Q2")?,
            )
        }
        GateName::RzzPrime => {
            // triangle actuator T on the ancilla, square actuator S on (d, a)
            let layout = SystemLayout::of(&[
                ("T", Role::Actuator),
                ("S", Role::Actuator),
                ("d", Role::Register),
                ("a", Role::Register),
            ])?;
            let h = HermitianOperator::sum(&[
                interaction(InteractionKind::Heisenberg, &layout, &["T", "a"])?,
                interaction(InteractionKind::Ising3, &layout, &["S", "d", "a"])?,
            ])?;
            let ops = vec![
                noisy_initialization("T", rates.epsilon_i)?,
                noisy_initialization("S", rates.epsilon_i)?,
            ];
            let regs = SystemLayout::registers(&["d", "a"])?;
            (h, ops, quarter_pi / ki, r_zz_prime_displayed(&regs, "d", "a")?)
        }
        GateName::DecoupleHeisenberg | GateName::DecoupleIsing | GateName::DecoupleXy => {
            let t = duration.ok_or_else(|| Error::Unsupported(format!("gate `{name}` needs a duration")))?;
            let kind = match name {
                GateName::DecoupleHeisenberg => InteractionKind::Heisenberg,
                GateName::DecoupleIsing => InteractionKind::Ising3,
                _ => InteractionKind::Xy,
            };
            let regs = SystemLayout::registers(&kind.labels()[1..])?;
            (hamiltonian_catalog(kind)?, vec![twirl("A")?], t, Operator::identity(&regs))
        }
    };
    Ok(GateRecipe {
        name,
        spec: NoisyCycleSpec::new(h, ops, freq_over_h)?,
        duration: t,
        target,
    })
}

/// Appendix-style admissibility of a noise model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseAdmissibility<T> {
    /// Bloch components `Tr(sigma rho) / 2`.
    pub bloch_i: [T; 3],
    pub bloch_h: [T; 3],
    pub bloch_s: [T; 3],
    /// `|p_I x p_H|` of the vectors above.
    pub cross_norm: T,
    /// `Tr(sigma_z rho_S)`.
    pub z_s: T,
    pub pass_c1: bool,
    pub pass_c2: bool,
}

/// Decision tolerance for both conditions.
pub const ADMISSIBILITY_TOL: f64 = 1e-9;

pub fn noise_conditions<T: Real>(
    rho_i: &DensityMatrix<T>,
    rho_h: &DensityMatrix<T>,
    rho_s: &DensityMatrix<T>,
) -> Result<NoiseAdmissibility<T>> {
    let pi = bloch_vector(rho_i)?;
    let ph = bloch_vector(rho_h)?;
    let ps = bloch_vector(rho_s)?;
    let cross = [
        pi[1] * ph[2] - pi[2] * ph[1],
        pi[2] * ph[0] - pi[0] * ph[2],
        pi[0] * ph[1] - pi[1] * ph[0],
    ];
    let cross_norm = cross.iter().map(|c| *c * *c).sum::<T>().sqrt();
    let z_s = ps[2] + ps[2];
    let tol = T::lit(ADMISSIBILITY_TOL);
    Ok(NoiseAdmissibility {
        bloch_i: pi,
        bloch_h: ph,
        bloch_s: ps,
        cross_norm,
        z_s,
        pass_c1: cross_norm > tol,
        pass_c2: z_s.abs() > tol,
    })
}

/// `(rho_I, rho_H, rho_S)` for depolarizing noise at one shared rate.
pub fn depolarizing_family<T: Real>(epsilon: T) -> Result<(DensityMatrix<T>, DensityMatrix<T>, DensityMatrix<T>)> {
    let l = SystemLayout::actuators(&["A"])?;
    let mixed = DensityMatrix::maximally_mixed(&l);
    let init = noisy_initialization("A", epsilon)?;
    let rho_i = init.apply(&mixed)?;
    let rho_h = noisy_unitary(&hadamard("A")?, epsilon)?.apply(&rho_i)?;
    let rho_s = init.apply(&mixed)?;
    Ok((rho_i, rho_h, rho_s))
}

/// Realized channel of a recipe relabeled onto other register labels.
pub fn relabel_channel<T: Real>(ch: &Channel<T>, labels: &[&str]) -> Result<Channel<T>> {
    if labels.len() != ch.layout().len() {
        return Err(Error::DimensionMismatch {
            expected: ch.layout().len(),
            found: labels.len(),
        });
    }
    let layout = SystemLayout::new(
        ch.layout()
            .qubits()
            .iter()
            .zip(labels)
            .map(|(q, l)| Qubit {
                label: (*l).to_owned(),
                role: q.role,
            })
            .collect(),
    )?;
    Channel::from_superoperator(layout, ch.superoperator().clone())
}
