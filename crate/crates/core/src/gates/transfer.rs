use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::qcore::{expm_hermitian, DensityMatrix, Operator, Role, SystemLayout};
use crate::scalar::Real;

use super::{hamiltonian_catalog, recipe, relabel_channel, r_zz, swap_time, GateName, InteractionKind, NoiseRates};

/// How the middle two-qubit phase gate of the transfer circuit is realized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TransferMode<T> {
    /// Exact `R_ZZ` on `(C2, P2)`.
    Ideal,
    /// Finite-frequency `R_ZZ` on `(C2, P2)` from its square actuator, with
    /// all operations at rate `epsilon`. The XY flights stay exact.
    FiniteFrequency { epsilon: T, freq_over_h: T },
}

fn circuit_layout() -> Result<SystemLayout> {
    SystemLayout::of(&[
        ("A", Role::Actuator),
        ("C1", Role::Register),
        ("P2", Role::Register),
        ("C2", Role::Register),
    ])
}

/// Channel induced on `(C1, C2)` by flight, phase gate on `(C2, P2)`, flight,
/// with the port qubit and ring actuator starting in the given states.
pub fn transfer_cphase_circuit<T: Real>(
    initial_p2: &DensityMatrix<T>,
    initial_a: &DensityMatrix<T>,
    mode: TransferMode<T>,
) -> Result<Channel<T>> {
    let layout = circuit_layout()?;
    let h = hamiltonian_catalog::<T>(InteractionKind::Xy)?;
    let flight = Operator::embed(&layout, &expm_hermitian(&h, swap_time())?)?;
    let flight = Channel::unitary(&flight)?;

    let middle = match mode {
        TransferMode::Ideal => {
            let pair = SystemLayout::registers(&["C2", "P2"])?;
            Channel::unitary(&r_zz(&pair, "C2", "P2")?)?
        }
        TransferMode::FiniteFrequency { epsilon, freq_over_h } => {
            let r = recipe(GateName::Rzz, NoiseRates::uniform(epsilon), freq_over_h, None)?;
            relabel_channel(&r.realize()?.realized, &["C2", "P2"])?
        }
    };
    let total = flight.compose(&middle.embed(&layout)?)?.compose(&flight)?;

    let env = initial_a.relabeled("A")?.kron(&initial_p2.relabeled("P2")?)?;
    if env.layout().dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: env.layout().dim(),
        });
    }
    total.contract(&env)
}

/// Largest Frobenius distance between the induced channels over the given
/// `(P2, A)` initial states.
pub fn transfer_dependence<T: Real>(
    states: &[(DensityMatrix<T>, DensityMatrix<T>)],
    mode: TransferMode<T>,
) -> Result<T> {
    let channels: Vec<Channel<T>> = states
        .iter()
        .map(|(p2, a)| transfer_cphase_circuit(p2, a, mode))
        .collect::<Result<_>>()?;
    let mut worst = T::zero();
    for (i, a) in channels.iter().enumerate() {
        for b in &channels[i + 1..] {
            worst = worst.max(a.superoperator().distance(b.superoperator()));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::CMatrix;

    fn q(l: &str) -> SystemLayout {
        SystemLayout::registers(&[l]).unwrap()
    }

    #[test]
    fn ideal_circuit_is_rzz_for_any_initial_states() {
        let zero = DensityMatrix::<f64>::basis(&q("x"), 0).unwrap();
        let one = DensityMatrix::<f64>::basis(&q("x"), 1).unwrap();
        let plus = DensityMatrix::<f64>::plus("x");
        let tilted = DensityMatrix::from_bloch(&q("x"), [0.2, -0.1, 0.3]).unwrap();
        let states = vec![(zero.clone(), plus.clone()), (one.clone(), one.clone()), (tilted.clone(), zero), (plus, tilted)];
        assert!(transfer_dependence(&states, TransferMode::Ideal).unwrap() <= 1e-10);

        let ch = transfer_cphase_circuit(&states[0].0, &states[0].1, TransferMode::Ideal).unwrap();
        let pair = SystemLayout::registers(&["C1", "C2"]).unwrap();
        let target = Channel::unitary(&r_zz(&pair, "C1", "C2").unwrap()).unwrap();
        assert!(ch.superoperator().distance(target.superoperator()) <= 1e-10);
        assert!(ch.superoperator().distance(&CMatrix::identity(16)) > 0.5);
    }
}
