use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::Error;
use crate::qcore::matrix::CMatrix;
use crate::scalar::{Real, C};

/// Single-qubit Pauli operator. The discriminant is the base-4 digit used to
/// index Pauli strings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
}

/// Bloch-sphere axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_digit(d: usize) -> Self {
        Self::ALL[d & 3]
    }

    pub fn matrix<T: Real>(self) -> CMatrix<T> {
        let o = C::<T>::zero();
        let l = C::<T>::one();
        let i = C::<T>::i();
        let data = match self {
            Pauli::I => vec![l, o, o, l],
            Pauli::X => vec![o, l, l, o],
            Pauli::Y => vec![o, -i, i, o],
            Pauli::Z => vec![l, o, o, -l],
        };
        CMatrix::from_vec(2, data).expect("2x2")
    }

    pub fn anticommutes_with(self, axis: Axis) -> bool {
        !matches!(
            (self, axis),
            (Pauli::I, _) | (Pauli::X, Axis::X) | (Pauli::Y, Axis::Y) | (Pauli::Z, Axis::Z)
        )
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl From<Axis> for Pauli {
    fn from(a: Axis) -> Self {
        match a {
            Axis::X => Pauli::X,
            Axis::Y => Pauli::Y,
            Axis::Z => Pauli::Z,
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for Axis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            _ => Err(Error::Unknown {
                kind: "axis",
                name: s.to_owned(),
            }),
        }
    }
}

/// Digits of Pauli-string index `k` over `n` qubits, most significant first.
pub fn pauli_string(k: usize, n: usize) -> Vec<Pauli> {
    (0..n)
        .map(|q| Pauli::from_digit(k >> (2 * (n - 1 - q))))
        .collect()
}

pub fn pauli_string_label(k: usize, n: usize) -> String {
    pauli_string(k, n).iter().map(|p| p.symbol()).collect()
}

/// Dense matrix of a Pauli string in layout order.
pub fn pauli_string_matrix<T: Real>(paulis: &[Pauli]) -> CMatrix<T> {
    paulis
        .iter()
        .fold(CMatrix::identity(1), |acc, p| acc.kron(&p.matrix()))
}
