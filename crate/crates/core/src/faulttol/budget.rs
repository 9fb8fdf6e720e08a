use crate::channels::{marginal_error, pauli_twirl};
use crate::error::{Error, Result};
use crate::gates::{recipe, GateName, NoiseRates};
use crate::qcore::Axis;
use crate::scalar::Real;

use super::{distill, DistillationConfig, NoisyParts, Readout};

/// Tolerable phase error rate of the topological code.
pub const DEFAULT_BUDGET: f64 = 0.03;
pub const DEFAULT_BISECT_TOL: f64 = 1e-4;

/// Where the data qubit's Heisenberg idle during distillation is counted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IdleAccounting {
    /// Not counted.
    Off,
    /// Applied to the data qubit inside every distillation round.
    #[default]
    InDistillation,
    /// A separate additive term over the whole distillation span.
    Additive,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BudgetOptions<T> {
    pub accounting: IdleAccounting,
    pub budget: T,
    pub bisect_tol: T,
}

impl<T: Real> Default for BudgetOptions<T> {
    fn default() -> Self {
        Self {
            accounting: IdleAccounting::default(),
            budget: T::lit(DEFAULT_BUDGET),
            bisect_tol: T::lit(DEFAULT_BISECT_TOL),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BudgetTerm<T> {
    pub label: String,
    pub value: T,
}

fn term<T>(label: &str, value: T) -> BudgetTerm<T> {
    BudgetTerm {
        label: label.to_owned(),
        value,
    }
}

/// First-order phase error budget of one vacuum qubit.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorBudget<T> {
    pub epsilon: T,
    pub freq_over_h: T,
    pub rounds: usize,
    pub p_init: T,
    pub p_meas: T,
    pub gates: Vec<BudgetTerm<T>>,
    pub decoupling: Vec<BudgetTerm<T>>,
    /// Schedule length in units of `h / J`.
    pub duration: T,
}

impl<T: Real> ErrorBudget<T> {
    pub fn total(&self) -> T {
        self.p_init + self.p_meas + self.gates.iter().chain(&self.decoupling).map(|t| t.value).sum::<T>()
    }
}

/// Marginal error of the twirled error channel of a gate on `qubit`.
fn gate_marginal<T: Real>(
    name: GateName,
    eps: T,
    f: T,
    duration: Option<T>,
    qubit: &str,
    axis: Axis,
) -> Result<(T, T)> {
    let r = recipe(name, NoiseRates::uniform(eps), f, duration)?;
    let t = r.duration;
    let dist = pauli_twirl(&r.realize()?.error)?;
    Ok((marginal_error(&dist, qubit, axis)?, t))
}

pub fn vacuum_error_budget<T: Real>(epsilon: T, freq_over_h: T, rounds: usize) -> Result<ErrorBudget<T>> {
    vacuum_error_budget_with(epsilon, freq_over_h, rounds, IdleAccounting::default())
}

/// Schedule: `n` initialization rounds, `R_X`, four parallel `R_ZZ`, `R_X`,
/// `n` measurement rounds. Each contribution is simulated with every other
/// operation perfect and read out in the data qubit's frame at that slot.
pub fn vacuum_error_budget_with<T: Real>(
    epsilon: T,
    freq_over_h: T,
    rounds: usize,
    accounting: IdleAccounting,
) -> Result<ErrorBudget<T>> {
    let noisy = NoisyParts {
        data_idle: accounting == IdleAccounting::InDistillation,
        ..NoisyParts::ALL
    };
    let config = DistillationConfig::new(rounds, epsilon, freq_over_h)?.with_noise(noisy);
    let p_init = distill(&config.with_readout(Readout::Output))?.p_fail;
    let p_meas = distill(&config.with_readout(Readout::Input))?.p_fail;

    let (f, e) = (freq_over_h, epsilon);
    let four = T::lit(4.0);
    let (rx_x, t_x) = gate_marginal(GateName::Rx, e, f, None, "Q", Axis::X)?;
    let (rx_z, _) = gate_marginal(GateName::Rx, e, f, None, "Q", Axis::Z)?;
    let (rzz, t_zz) = gate_marginal(GateName::Rzz, e, f, None, "Q1", Axis::X)?;
    let gates = vec![
        term("rx_first", rx_x),
        term("rzz_x4", four * rzz),
        term("rx_second", rx_z),
    ];

    let t_round = T::FRAC_PI_4() / (T::one() - e);
    let span = T::lit((2 * rounds) as f64) * t_round;
    let ising = |t: T, axis: Axis| gate_marginal(GateName::DecoupleIsing, e, f, Some(t), "Q1", axis).map(|p| four * p.0);
    let heis = |t: T, axis: Axis| gate_marginal(GateName::DecoupleHeisenberg, e, f, Some(t), "Q", axis).map(|p| p.0);
    let mut decoupling = vec![
        term("ising_x4_during_distillation", ising(span, Axis::Z)?),
        term("ising_x4_during_rx_first", ising(t_x, Axis::X)?),
        term("heisenberg_during_rzz", heis(t_zz, Axis::X)?),
        term("ising_x4_during_rx_second", ising(t_x, Axis::Z)?),
    ];
    if accounting == IdleAccounting::Additive {
        decoupling.insert(0, term("heisenberg_during_distillation", heis(span, Axis::Z)?));
    }

    Ok(ErrorBudget {
        epsilon,
        freq_over_h,
        rounds,
        p_init,
        p_meas,
        gates,
        decoupling,
        duration: (span + t_x + t_x + t_zz) / T::TAU(),
    })
}

/// `(init/measure, unitary)` error rates of depolarizing at `epsilon`.
pub fn error_rate_mapping<T: Real>(epsilon: T) -> Result<(T, T)> {
    if !(epsilon >= T::zero() && epsilon <= T::one()) {
        return Err(Error::OutOfRange {
            name: "epsilon",
            value: epsilon.as_f64(),
        });
    }
    Ok((epsilon / T::lit(2.0), epsilon * T::lit(0.75)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdPoint<T> {
    pub freq_over_h: T,
    pub rounds: usize,
    pub epsilon_star: T,
    /// Final `(lo, hi)` with `p(lo) < budget <= p(hi)`.
    pub bracket: (T, T),
    pub budget_at_bracket: (T, T),
    pub iterations: usize,
    pub budget: T,
    /// Coarse bracket first, then one entry per bisection step.
    pub history: Vec<(T, T)>,
}

fn coarse_grid<T: Real>() -> Vec<T> {
    (0..20).map(|k| T::lit(k as f64 * 0.05)).chain([T::lit(0.99)]).collect()
}

pub fn threshold<T: Real>(freq_over_h: T, rounds: usize, budget: T) -> Result<ThresholdPoint<T>> {
    threshold_with(
        freq_over_h,
        rounds,
        BudgetOptions {
            budget,
            ..BudgetOptions::default()
        },
    )
}

/// Coarse scan for the first crossing, strict monotonicity up to it, then
/// bisection to `bisect_tol` in `epsilon`.
pub fn threshold_with<T: Real>(freq_over_h: T, rounds: usize, options: BudgetOptions<T>) -> Result<ThresholdPoint<T>> {
    let budget = options.budget;
    if !(budget > T::zero() && options.bisect_tol > T::zero()) {
        return Err(Error::OutOfRange {
            name: "budget",
            value: budget.min(options.bisect_tol).as_f64(),
        });
    }
    let p = |e: T| vacuum_error_budget_with(e, freq_over_h, rounds, options.accounting).map(|b| b.total());
    let grid = coarse_grid::<T>();
    let eps_max = grid[grid.len() - 1].as_f64();

    let mut lo = grid[0];
    let mut p_lo = p(lo)?;
    if p_lo >= budget {
        return Err(Error::NoThreshold {
            budget: budget.as_f64(),
            eps_max,
            side: "above",
        });
    }
    let mut crossing = None;
    for &e in &grid[1..] {
        let pe = p(e)?;
        if !(pe > p_lo) {
            return Err(Error::NonMonotoneBudget {
                lo: lo.as_f64(),
                hi: e.as_f64(),
                p_lo: p_lo.as_f64(),
                p_hi: pe.as_f64(),
            });
        }
        if pe >= budget {
            crossing = Some((e, pe));
            break;
        }
        lo = e;
        p_lo = pe;
    }
    let (mut hi, mut p_hi) = crossing.ok_or(Error::NoThreshold {
        budget: budget.as_f64(),
        eps_max,
        side: "below",
    })?;

    let mut history = vec![(lo, hi)];
    let mut iterations = 0;
    while hi - lo > options.bisect_tol {
        let mid = (lo + hi) / T::lit(2.0);
        let pm = p(mid)?;
        if pm < budget {
            lo = mid;
            p_lo = pm;
        } else {
            hi = mid;
            p_hi = pm;
        }
        iterations += 1;
        history.push((lo, hi));
    }
    Ok(ThresholdPoint {
        freq_over_h,
        rounds,
        epsilon_star: (lo + hi) / T::lit(2.0),
        bracket: (lo, hi),
        budget_at_bracket: (p_lo, p_hi),
        iterations,
        budget,
        history,
    })
}
