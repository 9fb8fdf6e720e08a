use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use noqc_cli::{execute, out_path, resolve, CliError, Command, Config};

/// Noisy-operation-controlled gate experiments. Tables go to `--out` or stdout.
#[derive(Debug, Parser)]
#[command(name = "noqc", version)]
struct Args {
    command: Command,
    /// Flat `key = value` file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long = "epsilon_h", alias = "epsilon-h")]
    epsilon_h: Option<String>,
    #[arg(long = "freq_over_h", alias = "freq-over-h")]
    freq_over_h: Option<String>,
    #[arg(long)]
    rounds: Option<String>,
    #[arg(long)]
    gate: Option<String>,
    /// Decoupling gates only, in units of hbar/J.
    #[arg(long)]
    duration: Option<String>,
    #[arg(long)]
    budget: Option<String>,
    #[arg(long = "bisect_tol", alias = "bisect-tol")]
    bisect_tol: Option<String>,
    /// `on`, `off` or `additive`.
    #[arg(long = "include_decoupling", alias = "include-decoupling")]
    include_decoupling: Option<String>,
    #[arg(long)]
    workers: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

impl Args {
    fn overrides(&self) -> Result<Config, CliError> {
        let pairs = [
            ("epsilon", &self.epsilon),
            ("epsilon_h", &self.epsilon_h),
            ("freq_over_h", &self.freq_over_h),
            ("rounds", &self.rounds),
            ("gate", &self.gate),
            ("duration", &self.duration),
            ("budget", &self.budget),
            ("bisect_tol", &self.bisect_tol),
            ("include_decoupling", &self.include_decoupling),
            ("workers", &self.workers),
            ("out", &self.out),
        ];
        Config::from_pairs(pairs.iter().filter_map(|(k, v)| v.as_deref().map(|v| (*k, v))))
    }
}

fn run(args: &Args) -> Result<(), CliError> {
    let config = resolve(args.command, args.config.as_deref(), &args.overrides()?)?;
    let (table, summary) = execute(args.command, &config)?;
    match out_path(&config) {
        Some(path) => {
            std::fs::write(&path, table)?;
            println!("{summary} -> {}", path.display());
        }
        None => {
            print!("{table}");
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("noqc {}: {e}", args.command);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
