use std::fmt;

use clap::ValueEnum;
use rayon::prelude::*;

use noqc::channels::Channel;
use noqc::faulttol::{self, BudgetOptions, DistillationConfig, IdleAccounting, NoisyParts};
use noqc::gates::{self, GateName, NoiseRates, TransferMode};
use noqc::qcore::pauli::pauli_string_label;
use noqc::qcore::{bloch_vector, DensityMatrix, SystemLayout};
use noqc::zeno::{effective_hamiltonian, fixed_state};

use crate::config::Config;
use crate::error::CliError;
use crate::table::{Cell, ResultTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    FixedState,
    EffH,
    GateError,
    SwapCheck,
    TransferCheck,
    Distill,
    Threshold,
    NoiseCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::FixedState => "fixed-state",
            Command::EffH => "eff-h",
            Command::GateError => "gate-error",
            Command::SwapCheck => "swap-check",
            Command::TransferCheck => "transfer-check",
            Command::Distill => "distill",
            Command::Threshold => "threshold",
            Command::NoiseCheck => "noise-check",
        }
    }

    /// Keys the command reads, with their defaults.
    pub fn defaults(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Command::FixedState | Command::EffH => &[
                ("epsilon", "0.1,0.2,0.5"),
                ("epsilon_h", "0.1,0.2,0.5"),
                ("gate", "rx"),
                ("freq_over_h", "1e4"),
                ("workers", "1"),
            ],
            Command::GateError => &[
                ("epsilon", "0.8"),
                ("freq_over_h", "1.5e4"),
                ("gate", "phase_z"),
                ("duration", "1"),
                ("workers", "1"),
            ],
            Command::SwapCheck => &[],
            Command::TransferCheck => &[("epsilon", "0.1"), ("freq_over_h", "1e4"), ("workers", "1")],
            Command::Distill => &[
                ("rounds", "1,3,5,7"),
                ("epsilon", "0.1"),
                ("freq_over_h", "1e4"),
                ("include_decoupling", "on"),
                ("workers", "1"),
            ],
            Command::Threshold => &[
                ("freq_over_h", "1e3,3e3,1e4,3e4,1e5"),
                ("rounds", "9,11,13,15,17"),
                ("budget", "0.03"),
                ("bisect_tol", "1e-4"),
                ("include_decoupling", "on"),
                ("workers", "1"),
            ],
            Command::NoiseCheck => &[("epsilon", "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1"), ("workers", "1")],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub struct Outcome {
    pub table: ResultTable,
    pub summary: String,
}

/// Maps `f` over `items` on `workers` threads, keeping input order.
fn par_map<I: Sync, R: Send>(
    workers: usize,
    items: &[I],
    f: impl Fn(&I) -> Result<R, CliError> + Sync + Send,
) -> Result<Vec<R>, CliError> {
    if workers <= 1 {
        return items.iter().map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Config(format!("worker pool: {e}")))?;
    pool.install(|| items.par_iter().map(f).collect())
}

fn grid2(a: &[f64], b: &[f64]) -> Vec<(f64, f64)> {
    a.iter().flat_map(|x| b.iter().map(move |y| (*x, *y))).collect()
}

fn workers(c: &Config) -> Result<usize, CliError> {
    let w = c.usizes("workers")?;
    match w.as_slice() {
        [n] if *n >= 1 => Ok(*n),
        _ => Err(CliError::Grid("`workers` must be one positive integer".into())),
    }
}

fn gate(c: &Config) -> Result<GateName, CliError> {
    let g = c.require("gate")?;
    g.parse().map_err(|_| CliError::UnknownGate(g.to_owned()))
}

fn accounting(c: &Config) -> Result<IdleAccounting, CliError> {
    if c.require("include_decoupling")?.eq_ignore_ascii_case("additive") {
        return Ok(IdleAccounting::Additive);
    }
    Ok(if c.flag("include_decoupling")? {
        IdleAccounting::InDistillation
    } else {
        IdleAccounting::Off
    })
}

fn positive(key: &str, values: &[f64]) -> Result<(), CliError> {
    match values.iter().find(|v| !(**v > 0.0)) {
        Some(v) => Err(CliError::Grid(format!("`{key}` must be positive, got {v}"))),
        None => Ok(()),
    }
}

pub fn run(cmd: Command, c: &Config) -> Result<Outcome, CliError> {
    match cmd {
        Command::FixedState => fixed_state_table(c),
        Command::EffH => eff_h_table(c),
        Command::GateError => gate_error_table(c),
        Command::SwapCheck => swap_check_table(),
        Command::TransferCheck => transfer_check_table(c),
        Command::Distill => distill_table(c),
        Command::Threshold => threshold_table(c),
        Command::NoiseCheck => noise_check_table(c),
    }
}

fn cycle_recipe(c: &Config, ei: f64, eh: f64) -> Result<gates::GateRecipe<f64>, CliError> {
    let g = gate(c)?;
    let rates = NoiseRates {
        epsilon_i: ei,
        epsilon_h: eh,
    };
    let duration = if g.is_decoupling() { Some(1.0) } else { None };
    Ok(gates::recipe(g, rates, c.float("freq_over_h")?, duration)?)
}

fn fixed_state_table(c: &Config) -> Result<Outcome, CliError> {
    let points = grid2(&c.floats("epsilon")?, &c.floats("epsilon_h")?);
    let rows = par_map(workers(c)?, &points, |&(ei, eh)| {
        let r = cycle_recipe(c, ei, eh)?;
        let rho = fixed_state(&r.spec)?.state;
        if rho.layout().len() != 1 {
            return Err(CliError::Config("fixed-state needs a single-actuator gate".into()));
        }
        let p = bloch_vector(&rho)?;
        Ok(vec![ei.into(), eh.into(), p[0].into(), p[1].into(), p[2].into()])
    })?;
    let mut t = ResultTable::new(["epsilon_i", "epsilon_h", "px", "py", "pz"]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(Outcome {
        summary: format!("{} fixed states", t.rows.len()),
        table: t,
    })
}

fn eff_h_table(c: &Config) -> Result<Outcome, CliError> {
    let points = grid2(&c.floats("epsilon")?, &c.floats("epsilon_h")?);
    let rows = par_map(workers(c)?, &points, |&(ei, eh)| {
        let r = cycle_recipe(c, ei, eh)?;
        let rho = fixed_state(&r.spec)?.state;
        let h = effective_hamiltonian(r.spec.hamiltonian(), &rho)?;
        let mut row: Vec<Cell> = vec![ei.into(), eh.into()];
        row.extend(h.pauli_coefficients().into_iter().map(Cell::from));
        Ok((h.layout().len(), row))
    })?;
    let n = rows.first().map_or(1, |r| r.0);
    let mut cols = vec!["epsilon_i".to_owned(), "epsilon_h".to_owned()];
    cols.extend((0..1usize << (2 * n)).map(|k| format!("c_{}", pauli_string_label(k, n))));
    let mut t = ResultTable::new(cols);
    rows.into_iter().for_each(|r| t.push(r.1));
    Ok(Outcome {
        summary: format!("{} effective Hamiltonians", t.rows.len()),
        table: t,
    })
}

fn gate_error_table(c: &Config) -> Result<Outcome, CliError> {
    let g = gate(c)?;
    let freqs = c.floats("freq_over_h")?;
    positive("freq_over_h", &freqs)?;
    let duration = if g.is_decoupling() { Some(c.float("duration")?) } else { None };
    let points = grid2(&c.floats("epsilon")?, &freqs);
    let rows = par_map(workers(c)?, &points, |&(e, f)| {
        let r = gates::recipe(g, NoiseRates::uniform(e), f, duration)?;
        let res = r.realize()?;
        let inf = 1.0 - noqc::channels::entanglement_fidelity(&res.realized, &r.target)?;
        Ok(vec![e.into(), f.into(), inf.into(), res.periods.into()])
    })?;
    let worst = rows
        .iter()
        .filter_map(|r| match r[2] {
            Cell::Float(x) => Some(x),
            _ => None,
        })
        .fold(0.0_f64, f64::max);
    let mut t = ResultTable::new(["epsilon", "freq_over_h", "infidelity", "N_periods"]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(Outcome {
        summary: format!("{g}: {} points, max infidelity {worst:.4e}", t.rows.len()),
        table: t,
    })
}

fn swap_check_table() -> Result<Outcome, CliError> {
    let t_s = gates::swap_time::<f64>();
    let dev = gates::swap_identity_check::<f64>()?;
    let mut t = ResultTable::new(["t", "deviation"]);
    t.push(vec![t_s.into(), dev.into()]);
    Ok(Outcome {
        summary: format!("swap identity deviation {dev:.3e} at t = {t_s:.6}"),
        table: t,
    })
}

fn transfer_states() -> Result<Vec<(DensityMatrix<f64>, DensityMatrix<f64>)>, CliError> {
    let l = SystemLayout::registers(&["x"])?;
    let zero = DensityMatrix::basis(&l, 0)?;
    let one = DensityMatrix::basis(&l, 1)?;
    let plus = DensityMatrix::plus("x");
    let mixed = DensityMatrix::maximally_mixed(&l);
    Ok(vec![(zero.clone(), zero.clone()), (one.clone(), plus.clone()), (plus, one), (mixed, zero)])
}

fn transfer_row(mode: TransferMode<f64>) -> Result<(f64, f64), CliError> {
    let states = transfer_states()?;
    let dep = gates::transfer_dependence(&states, mode)?;
    let ch = gates::transfer_cphase_circuit(&states[0].0, &states[0].1, mode)?;
    let pair = SystemLayout::registers(&["C1", "C2"])?;
    let target = Channel::unitary(&gates::r_zz(&pair, "C1", "C2")?)?;
    Ok((dep, ch.superoperator().distance(target.superoperator())))
}

fn transfer_check_table(c: &Config) -> Result<Outcome, CliError> {
    let freqs = c.floats("freq_over_h")?;
    positive("freq_over_h", &freqs)?;
    let points = grid2(&c.floats("epsilon")?, &freqs);
    let (dep0, dist0) = transfer_row(TransferMode::Ideal)?;
    let rows = par_map(workers(c)?, &points, |&(e, f)| {
        let (dep, dist) = transfer_row(TransferMode::FiniteFrequency {
            epsilon: e,
            freq_over_h: f,
        })?;
        Ok(vec!["finite".into(), e.into(), f.into(), dep.into(), dist.into()])
    })?;
    let mut t = ResultTable::new(["mode", "epsilon", "freq_over_h", "dependence", "distance_to_rzz"]);
    t.push(vec!["ideal".into(), f64::NAN.into(), f64::NAN.into(), dep0.into(), dist0.into()]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(Outcome {
        summary: format!("ideal transfer: dependence {dep0:.3e}, distance to R_ZZ {dist0:.3e}"),
        table: t,
    })
}

fn distill_table(c: &Config) -> Result<Outcome, CliError> {
    let rounds = c.usizes("rounds")?;
    let eps = c.floats("epsilon")?;
    let freqs = c.floats("freq_over_h")?;
    let noisy = NoisyParts {
        data_idle: accounting(c)? == IdleAccounting::InDistillation,
        ..NoisyParts::ALL
    };
    let points: Vec<(usize, f64, f64)> = rounds
        .iter()
        .flat_map(|&n| grid2(&eps, &freqs).into_iter().map(move |(e, f)| (n, e, f)))
        .collect();
    let rows = par_map(workers(c)?, &points, |&(n, e, f)| {
        let cfg = DistillationConfig::new(n, e, f)?.with_noise(noisy);
        let r = faulttol::distill(&cfg)?;
        Ok(vec![n.into(), e.into(), f.into(), r.p_fail.into()])
    })?;
    let mut t = ResultTable::new(["rounds", "epsilon", "freq_over_h", "p_fail"]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(Outcome {
        summary: format!("{} distillation runs", t.rows.len()),
        table: t,
    })
}

fn threshold_table(c: &Config) -> Result<Outcome, CliError> {
    let options = BudgetOptions {
        accounting: accounting(c)?,
        budget: c.float("budget")?,
        bisect_tol: c.float("bisect_tol")?,
    };
    positive("budget", &[options.budget])?;
    positive("bisect_tol", &[options.bisect_tol])?;
    let freqs = c.floats("freq_over_h")?;
    positive("freq_over_h", &freqs)?;
    let rounds = c.usizes("rounds")?;
    let points: Vec<(f64, usize)> = freqs.iter().flat_map(|&f| rounds.iter().map(move |&n| (f, n))).collect();
    let rows = par_map(workers(c)?, &points, |&(f, n)| {
        match faulttol::threshold_with(f, n, options) {
            Ok(p) => Ok(vec![f.into(), n.into(), p.epsilon_star.into(), p.iterations.into()]),
            Err(noqc::Error::NoThreshold { .. }) => Ok(vec![f.into(), n.into(), f64::NAN.into(), 0usize.into()]),
            Err(e) => Err(e.into()),
        }
    })?;
    let found = rows.iter().filter(|r| !matches!(r[2], Cell::Float(x) if x.is_nan())).count();
    let mut t = ResultTable::new(["freq_over_h", "rounds", "epsilon_star", "iterations"]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(Outcome {
        summary: format!("{found} of {} points have a threshold", t.rows.len()),
        table: t,
    })
}

fn noise_check_table(c: &Config) -> Result<Outcome, CliError> {
    let eps = c.floats("epsilon")?;
    let rows = par_map(workers(c)?, &eps, |&e| {
        let (ri, rh, rs) = gates::depolarizing_family(e)?;
        let a = gates::noise_conditions(&ri, &rh, &rs)?;
        Ok(vec![e.into(), a.cross_norm.into(), a.z_s.into(), a.pass_c1.into(), a.pass_c2.into()])
    })?;
    let failing = rows.iter().filter(|r| r[3] == Cell::Int(0) || r[4] == Cell::Int(0)).count();
    let mut t = ResultTable::new(["epsilon", "cross_norm", "z_s", "pass_c1", "pass_c2"]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(Outcome {
        summary: format!("{failing} of {} rates fail an admissibility condition", t.rows.len()),
        table: t,
    })
}
