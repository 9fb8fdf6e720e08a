use num_traits::{One, Zero};

use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::qcore::pauli::{pauli_string, pauli_string_label};
use crate::qcore::{Axis, Operator, Pauli, SystemLayout};
use crate::scalar::{Real, C};

/// Probabilities of the `4^n` Pauli strings, base-4 indexed with the first
/// layout qubit as the most significant digit.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliErrorDistribution<T: Real> {
    layout: SystemLayout,
    probs: Vec<T>,
}

impl<T: Real> PauliErrorDistribution<T> {
    /// Entries must be `>= -1e-9` and sum to `1 +- 1e-9`.
    pub fn new(layout: SystemLayout, probs: Vec<T>) -> Result<Self> {
        let expected = 1usize << (2 * layout.len());
        if probs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: probs.len(),
            });
        }
        let tol = T::lit(1e-9).max(T::loose_tol());
        if let Some(&p) = probs.iter().find(|p| !p.is_finite() || **p < -tol) {
            return Err(Error::OutOfRange {
                name: "pauli probability",
                value: p.as_f64(),
            });
        }
        let total: T = probs.iter().copied().sum();
        if (total - T::one()).abs() > tol {
            return Err(Error::NotTracePreserving((total - T::one()).as_f64()));
        }
        Ok(Self { layout, probs })
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probs
    }

    /// Probability of the string with the given per-qubit factors, in layout order.
    pub fn probability(&self, paulis: &[Pauli]) -> Result<T> {
        if paulis.len() != self.layout.len() {
            return Err(Error::DimensionMismatch {
                expected: self.layout.len(),
                found: paulis.len(),
            });
        }
        let k = paulis.iter().fold(0usize, |k, p| 4 * k + *p as usize);
        Ok(self.probs[k])
    }

    pub fn identity_probability(&self) -> T {
        self.probs[0]
    }

    /// `(label, probability)` pairs such as `("IZ", 0.01)`.
    pub fn labeled(&self) -> impl Iterator<Item = (String, T)> + '_ {
        let n = self.layout.len();
        self.probs
            .iter()
            .enumerate()
            .map(move |(k, p)| (pauli_string_label(k, n), *p))
    }
}

/// `P|i> = phase_i |perm_i>` for a Pauli string.
fn monomial<T: Real>(paulis: &[Pauli]) -> (Vec<usize>, Vec<C<T>>) {
    let n = paulis.len();
    let d = 1usize << n;
    let mut perm = vec![0; d];
    let mut phase = vec![C::<T>::one(); d];
    for i in 0..d {
        let mut out = i;
        let mut ph = C::<T>::one();
        for (q, p) in paulis.iter().enumerate() {
            let bit = (i >> (n - 1 - q)) & 1;
            let mask = 1 << (n - 1 - q);
            match p {
                Pauli::I => {}
                Pauli::X => out ^= mask,
                Pauli::Y => {
                    out ^= mask;
                    ph = ph * if bit == 0 { C::i() } else { -C::i() };
                }
                Pauli::Z => {
                    if bit == 1 {
                        ph = -ph;
                    }
                }
            }
        }
        perm[i] = out;
        phase[i] = ph;
    }
    (perm, phase)
}

/// Pauli-twirled error probabilities
/// `p_P = <Phi_P| choi(E) |Phi_P> / d^2` with `|Phi_P> = sum_i |i> kron P|i>`.
pub fn pauli_twirl<T: Real>(e: &Channel<T>) -> Result<PauliErrorDistribution<T>> {
    let n = e.layout().len();
    let d = e.hilbert_dim();
    let s = e.superoperator();
    let norm = T::lit((d * d) as f64);
    let probs: Vec<T> = (0..(1usize << (2 * n)))
        .map(|k| {
            let (perm, phase) = monomial::<T>(&pauli_string(k, n));
            let mut acc = C::<T>::zero();
            for j in 0..d {
                for i in 0..d {
                    acc = acc
                        + phase[i].conj() * phase[j] * s[(perm[i] + perm[j] * d, i + j * d)];
                }
            }
            acc.re / norm
        })
        .collect();
    PauliErrorDistribution::new(e.layout().clone(), probs)
}

/// Total probability of strings whose factor on `qubit` anticommutes with `axis`.
pub fn marginal_error<T: Real>(dist: &PauliErrorDistribution<T>, qubit: &str, axis: Axis) -> Result<T> {
    let n = dist.layout.len();
    let q = dist.layout.index_of(qubit)?;
    Ok(dist
        .probs
        .iter()
        .enumerate()
        .filter(|(k, _)| Pauli::from_digit(k >> (2 * (n - 1 - q))).anticommutes_with(axis))
        .map(|(_, p)| *p)
        .sum())
}

/// `F = <Phi| (id kron U^dag o E)(|Phi><Phi|) |Phi>`, clamped to `[0, 1]`.
pub fn entanglement_fidelity<T: Real>(e: &Channel<T>, target: &Operator<T>) -> Result<T> {
    if e.layout() != target.layout() {
        return Err(Error::LayoutMismatch(format!(
            "channel on {} vs target on {}",
            e.layout(),
            target.layout()
        )));
    }
    let d = e.hilbert_dim();
    let s = e.superoperator();
    let u = target.matrix();
    // sum over i, j, a, b of conj(U[a,i]) U[b,j] E(|i><j|)[a,b]
    let mut acc = C::<T>::zero();
    for j in 0..d {
        for i in 0..d {
            let col = i + j * d;
            for b in 0..d {
                let ubj = u[(b, j)];
                if ubj.is_zero() {
                    continue;
                }
                for a in 0..d {
                    acc = acc + u[(a, i)].conj() * ubj * s[(a + b * d, col)];
                }
            }
        }
    }
    let f = acc.re / T::lit((d * d) as f64);
    Ok(f.max(T::zero()).min(T::one()))
}
