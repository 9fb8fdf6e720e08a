use std::fmt;

use crate::error::{Error, Result};

/// Which subsystem a qubit belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    /// Stores quantum information and evolves coherently.
    Register,
    /// Directly driven by noisy operations.
    Actuator,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Qubit {
    pub label: String,
    pub role: Role,
}

impl Qubit {
    pub fn register(label: &str) -> Self {
        Self {
            label: label.to_owned(),
            role: Role::Register,
        }
    }

    pub fn actuator(label: &str) -> Self {
        Self {
            label: label.to_owned(),
            role: Role::Actuator,
        }
    }
}

/// Ordered list of labeled qubits.
///
/// Layout order is tensor order: the first qubit is the most significant bit
/// of a basis index, so `|q0 q1 ... q_{n-1}>` has index `sum q_k 2^(n-1-k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SystemLayout {
    qubits: Vec<Qubit>,
}

impl SystemLayout {
    pub fn new(qubits: Vec<Qubit>) -> Result<Self> {
        if qubits.is_empty() {
            return Err(Error::EmptyLayout);
        }
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].iter().any(|p| p.label == q.label) {
                return Err(Error::DuplicateLabel(q.label.clone()));
            }
        }
        Ok(Self { qubits })
    }

    /// Shorthand: `SystemLayout::of(&[("A", Role::Actuator), ("Q", Role::Register)])`.
    pub fn of(spec: &[(&str, Role)]) -> Result<Self> {
        Self::new(
            spec.iter()
                .map(|&(label, role)| Qubit {
                    label: label.to_owned(),
                    role,
                })
                .collect(),
        )
    }

    pub fn registers(labels: &[&str]) -> Result<Self> {
        Self::new(labels.iter().map(|l| Qubit::register(l)).collect())
    }

    pub fn actuators(labels: &[&str]) -> Result<Self> {
        Self::new(labels.iter().map(|l| Qubit::actuator(l)).collect())
    }

    pub fn qubits(&self) -> &[Qubit] {
        &self.qubits
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits.len()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.qubits.iter().map(|q| q.label.as_str())
    }

    pub fn contains(&self, label: &str) -> bool {
        self.qubits.iter().any(|q| q.label == label)
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.qubits
            .iter()
            .position(|q| q.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }

    pub fn role_of(&self, label: &str) -> Result<Role> {
        Ok(self.qubits[self.index_of(label)?].role)
    }

    /// `self` followed by `other`; fails on a shared label.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut qubits = self.qubits.clone();
        qubits.extend(other.qubits.iter().cloned());
        Self::new(qubits)
    }

    /// Qubits with the given role, in layout order. `None` if there are none.
    pub fn with_role(&self, role: Role) -> Option<Self> {
        let qubits: Vec<_> = self
            .qubits
            .iter()
            .filter(|q| q.role == role)
            .cloned()
            .collect();
        (!qubits.is_empty()).then_some(Self { qubits })
    }

    /// Layout without the listed labels. Every label must exist.
    pub fn without(&self, labels: &[&str]) -> Result<Self> {
        for l in labels {
            self.index_of(l)?;
        }
        Self::new(
            self.qubits
                .iter()
                .filter(|q| !labels.contains(&q.label.as_str()))
                .cloned()
                .collect(),
        )
    }

    /// Layout restricted to the listed labels, in the order given.
    pub fn select(&self, labels: &[&str]) -> Result<Self> {
        Self::new(
            labels
                .iter()
                .map(|l| self.index_of(l).map(|i| self.qubits[i].clone()))
                .collect::<Result<_>>()?,
        )
    }
}

impl SystemLayout {
    /// `perm[i]` is the index in `target` of basis state `i` of `self`, where
    /// both layouts hold the same labels in possibly different order.
    pub fn permutation_to(&self, target: &Self) -> Result<Vec<usize>> {
        if self.len() != target.len() {
            return Err(Error::LayoutMismatch(format!(
                "{self} and {target} hold different qubits"
            )));
        }
        let n = self.len();
        let slots: Vec<usize> = self
            .labels()
            .map(|l| target.index_of(l))
            .collect::<Result<_>>()?;
        Ok((0..self.dim())
            .map(|i| {
                slots
                    .iter()
                    .enumerate()
                    .map(|(src, &dst)| ((i >> (n - 1 - src)) & 1) << (n - 1 - dst))
                    .sum()
            })
            .collect())
    }
}

impl fmt::Display for SystemLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, q) in self.qubits.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let tag = match q.role {
                Role::Register => "reg",
                Role::Actuator => "act",
            };
            write!(f, "{}:{}", q.label, tag)?;
        }
        write!(f, "]")
    }
}
