//! Repeated-readout distillation of a data qubit and the vacuum-qubit error
//! budget that sets the fault-tolerance threshold.
//!
//! A distillation round prepares an ancilla in `|+>`, couples it to the data
//! qubit with the realized `R_ZZ'` channel and reads it in the `sigma^x`
//! basis. Outcome `-` signals data `|0>`. The simulation follows every outcome
//! string as a branch of a binary tree, carrying the unnormalized conditional
//! data state, so shared prefixes are evaluated once.

mod budget;

pub use budget::{
    error_rate_mapping, threshold, threshold_with, vacuum_error_budget, vacuum_error_budget_with, BudgetOptions,
    BudgetTerm, ErrorBudget, IdleAccounting, ThresholdPoint, DEFAULT_BUDGET, DEFAULT_BISECT_TOL,
};

use num_traits::Zero;

use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::gates::{r_zz_prime_displayed, recipe, GateName, NoiseRates};
use crate::qcore::{CMatrix, SystemLayout};
use crate::scalar::{Real, C};

/// Largest supported round count; the tree holds `2^rounds` leaves per run.
pub const MAX_ROUNDS: usize = 25;

/// Branches lighter than this are dropped and their mass reported.
pub const PRUNE_FLOOR: f64 = 1e-300;

/// Which parts of a round are noisy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NoisyParts {
    pub ancilla_prep: bool,
    pub gate: bool,
    pub measurement: bool,
    /// Twirl-decoupled Heisenberg idle on the data qubit for one round.
    pub data_idle: bool,
}

impl NoisyParts {
    pub const ALL: Self = Self {
        ancilla_prep: true,
        gate: true,
        measurement: true,
        data_idle: true,
    };

    pub const NONE: Self = Self {
        ancilla_prep: false,
        gate: false,
        measurement: false,
        data_idle: false,
    };
}

/// What the outcome string is used to infer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Readout {
    /// The data value before the rounds: measurement distillation.
    #[default]
    Input,
    /// The data value after the rounds: initialization distillation.
    Output,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistillationConfig<T> {
    pub rounds: usize,
    pub epsilon: T,
    pub freq_over_h: T,
    pub noisy: NoisyParts,
    pub readout: Readout,
}

impl<T: Real> DistillationConfig<T> {
    /// All parts noisy, input readout.
    pub fn new(rounds: usize, epsilon: T, freq_over_h: T) -> Result<Self> {
        let c = Self {
            rounds,
            epsilon,
            freq_over_h,
            noisy: NoisyParts::ALL,
            readout: Readout::Input,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn with_noise(mut self, noisy: NoisyParts) -> Self {
        self.noisy = noisy;
        self
    }

    pub fn with_readout(mut self, readout: Readout) -> Self {
        self.readout = readout;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 || self.rounds % 2 == 0 {
            return Err(Error::InvalidDistillation(format!("rounds must be odd and positive, got {}", self.rounds)));
        }
        if self.rounds > MAX_ROUNDS {
            return Err(Error::InvalidDistillation(format!("rounds {} exceeds {MAX_ROUNDS}", self.rounds)));
        }
        if !(self.epsilon >= T::zero() && self.epsilon <= T::one()) {
            return Err(Error::OutOfRange {
                name: "epsilon",
                value: self.epsilon.as_f64(),
            });
        }
        if !(self.freq_over_h > T::zero() && self.freq_over_h.is_finite()) {
            return Err(Error::OutOfRange {
                name: "freq_over_h",
                value: self.freq_over_h.as_f64(),
            });
        }
        Ok(())
    }
}

/// Per-outcome maps on the column-stacked data density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DistillationInstrument<T: Real> {
    pub plus: CMatrix<T>,
    pub minus: CMatrix<T>,
}

impl<T: Real> DistillationInstrument<T> {
    pub fn build(config: &DistillationConfig<T>) -> Result<Self> {
        config.validate()?;
        let eps = config.epsilon;
        let regs = SystemLayout::registers(&["d", "a"])?;
        let gate = if config.noisy.gate {
            recipe(GateName::RzzPrime, NoiseRates::uniform(eps), config.freq_over_h, None)?
                .realize()?
                .realized
        } else {
            Channel::unitary(&r_zz_prime_displayed(&regs, "d", "a")?)?
        };
        let idle = if config.noisy.data_idle {
            let t = T::FRAC_PI_4() / (T::one() - eps);
            Some(
                recipe(GateName::DecoupleHeisenberg, NoiseRates::uniform(eps), config.freq_over_h, Some(t))?
                    .realize()?
                    .realized,
            )
        } else {
            None
        };
        let meas_noise = if config.noisy.measurement { eps } else { T::zero() };
        let depol = Channel::depolarizing(&regs, "a", meas_noise)?;

        let half = T::lit(0.5);
        let prep_noise = if config.noisy.ancilla_prep { eps } else { T::zero() };
        // (1 - eps)|+><+| + eps 1/2
        let diag = C::new(half, T::zero());
        let off = C::new(half * (T::one() - prep_noise), T::zero());
        let ancilla = CMatrix::from_fn(2, |i, j| if i == j { diag } else { off });

        let build_one = |sign: T| -> CMatrix<T> {
            // projector (1 + sign X)/2
            let proj = [[half, half * sign], [half * sign, half]];
            let mut m = CMatrix::zeros(4);
            for j in 0..2 {
                for i in 0..2 {
                    let r = depol.apply_matrix(&gate.apply_matrix(&CMatrix::unit(2, i, j).kron(&ancilla)));
                    // Tr_a[(1 kron Pi) r]
                    for y in 0..2 {
                        for x in 0..2 {
                            let mut acc = C::zero();
                            for a in 0..2 {
                                for b in 0..2 {
                                    acc = acc + r[(2 * x + b, 2 * y + a)] * proj[a][b];
                                }
                            }
                            m[(x + 2 * y, i + 2 * j)] = acc;
                        }
                    }
                }
            }
            match &idle {
                Some(k) => k.superoperator() * &m,
                None => m,
            }
        };
        Ok(Self {
            plus: build_one(T::one()),
            minus: build_one(-T::one()),
        })
    }

    /// `M_o v` for outcome bit `o` (0 is `+`, 1 is `-`).
    pub fn apply(&self, outcome: usize, v: &[C<T>]) -> [C<T>; 4] {
        let m = if outcome == 0 { &self.plus } else { &self.minus };
        let mut out = [C::zero(); 4];
        for (r, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|c| m[(r, c)] * v[c]).fold(C::zero(), |s, x| s + x);
        }
        out
    }

    /// Unnormalized data state after the given outcomes, evaluated leaf by leaf.
    pub fn leaf(&self, initial: &CMatrix<T>, outcomes: &[usize]) -> [C<T>; 4] {
        let mut v: [C<T>; 4] = initial.vec_col().try_into().expect("single-qubit state");
        for &o in outcomes {
            v = self.apply(o, &v);
        }
        v
    }
}

/// One outcome string. Bit `k` from the top is round `k`; set bits are `-`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistillationRecord<T> {
    pub outcome: u64,
    pub probability: T,
    /// Posterior that the inferred data value is `0`.
    pub posterior: T,
}

impl<T: Real> DistillationRecord<T> {
    pub fn outcome_string(&self, rounds: usize) -> String {
        (0..rounds)
            .map(|k| if (self.outcome >> (rounds - 1 - k)) & 1 == 1 { '-' } else { '+' })
            .collect()
    }

    pub fn error(&self) -> T {
        self.probability * self.posterior.min(T::one() - self.posterior)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistillationResult<T> {
    pub rounds: usize,
    pub p_fail: T,
    pub records: Vec<DistillationRecord<T>>,
    /// Prior-weighted mass of dropped branches.
    pub pruned_mass: T,
}

impl<T: Real> DistillationResult<T> {
    pub fn total_probability(&self) -> T {
        self.records.iter().map(|r| r.probability).sum::<T>() + self.pruned_mass
    }
}

fn expand<T: Real>(inst: &DistillationInstrument<T>, initial: &CMatrix<T>, rounds: usize, pruned: &mut T) -> Vec<[C<T>; 4]> {
    let floor = T::lit(PRUNE_FLOOR).max(T::min_positive_value());
    let mut level: Vec<[C<T>; 4]> = vec![initial.vec_col().try_into().expect("single-qubit state")];
    for _ in 0..rounds {
        let mut next = Vec::with_capacity(level.len() * 2);
        for v in &level {
            for o in 0..2 {
                let mut w = inst.apply(o, v);
                let mass = w[0].re + w[3].re;
                if !(mass >= floor) {
                    *pruned = *pruned + mass.max(T::zero());
                    w = [C::zero(); 4];
                }
                next.push(w);
            }
        }
        level = next;
    }
    level
}

/// Runs both prior-weighted branches of the data qubit through the tree.
pub fn distill_with<T: Real>(inst: &DistillationInstrument<T>, config: &DistillationConfig<T>) -> Result<DistillationResult<T>> {
    config.validate()?;
    let half = T::lit(0.5);
    let mut pruned = T::zero();
    let zero = expand(inst, &CMatrix::unit(2, 0, 0), config.rounds, &mut pruned);
    let one = expand(inst, &CMatrix::unit(2, 1, 1), config.rounds, &mut pruned);
    let pruned_mass = pruned * half;

    let mut p_fail = T::zero();
    let records = zero
        .iter()
        .zip(&one)
        .enumerate()
        .map(|(k, (v0, v1))| {
            let (a, b) = match config.readout {
                Readout::Input => ((v0[0].re + v0[3].re) * half, (v1[0].re + v1[3].re) * half),
                Readout::Output => ((v0[0].re + v1[0].re) * half, (v0[3].re + v1[3].re) * half),
            };
            let (a, b) = (a.max(T::zero()), b.max(T::zero()));
            let p = a + b;
            p_fail = p_fail + a.min(b);
            DistillationRecord {
                outcome: k as u64,
                probability: p,
                posterior: if p > T::zero() { a / p } else { half },
            }
        })
        .collect();
    Ok(DistillationResult {
        rounds: config.rounds,
        p_fail,
        records,
        pruned_mass,
    })
}

pub fn distill<T: Real>(config: &DistillationConfig<T>) -> Result<DistillationResult<T>> {
    distill_with(&DistillationInstrument::build(config)?, config)
}
