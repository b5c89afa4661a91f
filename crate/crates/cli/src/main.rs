//! `psu-saxl`: batch reports on the Saxl graph of PSU(3,q) acting on Baer subplanes.

mod output;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use saxl_core::field::split_prime_power;
use saxl_core::geometry::GramModel;

#[derive(Parser, Debug)]
#[command(name = "psu-saxl", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    args: RunArgs,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Suborbit census of the point stabilizer against the closed-form table.
    Census,
    /// Common regular neighbour for every suborbit representative.
    VerifyBg,
    /// Constructive common-neighbour finder on every representative.
    Construct,
    /// Closed-form bounds and the enumerated intersection criterion.
    Bounds,
    /// Polynomial-system and involution-pair laboratory.
    Lab5,
    /// Everything above.
    All,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Census => "census",
            Command::VerifyBg => "verify-bg",
            Command::Construct => "construct",
            Command::Bounds => "bounds",
            Command::Lab5 => "lab5",
            Command::All => "all",
        }
    }

    pub fn includes(self, other: Command) -> bool {
        self == other || self == Command::All
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Gram {
    Identity,
    Antidiag,
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    /// Field order q = p^m.
    #[arg(long, global = true, conflicts_with_all = ["p", "m"])]
    q: Option<u64>,
    #[arg(long, global = true, requires = "m")]
    p: Option<u32>,
    #[arg(long, global = true, requires = "p")]
    m: Option<u32>,
    #[arg(long, global = true, value_enum, default_value = "antidiag")]
    gram: Gram,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Polynomial systems sampled per generator family.
    #[arg(long, global = true, default_value_t = 200)]
    trials: usize,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Orbit cache file, read if present and written otherwise.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// JSON report path; the text summary goes next to it with a .txt extension.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Limit on suborbit representatives for the per-representative passes.
    #[arg(long, global = true)]
    max_reps: Option<usize>,
    #[arg(long, global = true, default_value_t = 13)]
    q_cap: u64,
}

/// Validated run parameters.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub p: u32,
    pub m: u32,
    pub q: u64,
    pub gram: GramModel,
    pub seed: u64,
    pub trials: usize,
    pub max_reps: Option<usize>,
    #[serde(skip)]
    pub cmd: Command,
    #[serde(skip)]
    pub jobs: Option<usize>,
    #[serde(skip)]
    pub cache: Option<PathBuf>,
    #[serde(skip)]
    pub out: PathBuf,
}

fn validate(cli: Cli) -> Result<RunConfig, String> {
    let a = cli.args;
    let (p, m) = match (a.q, a.p, a.m) {
        (Some(q), None, None) => split_prime_power(q).ok_or(format!("q = {q} is not a prime power"))?,
        (None, Some(p), Some(m)) => (p, m),
        _ => return Err("give --q or both --p and --m".into()),
    };
    let q = (p as u64)
        .checked_pow(m)
        .filter(|_| split_prime_power(p as u64) == Some((p, 1)) && m > 0)
        .ok_or(format!("p = {p}, m = {m} does not describe a prime power"))?;
    if p == 2 {
        return Err(format!("q = {q} is even"));
    }
    if q < 7 {
        return Err(format!("q = {q} is below 7"));
    }
    if q > a.q_cap {
        return Err(format!("q = {q} exceeds the cap {} (raise it with --q-cap)", a.q_cap));
    }
    if a.trials == 0 {
        return Err("--trials must be positive".into());
    }
    if a.jobs == Some(0) {
        return Err("--jobs must be positive".into());
    }
    let gram = match a.gram {
        Gram::Identity => GramModel::Identity,
        Gram::Antidiag => GramModel::AntiDiagonal,
    };
    if gram == GramModel::Identity && cli.command.includes(Command::Construct) {
        return Err("the constructive finder needs --gram antidiag".into());
    }
    let out = a
        .out
        .unwrap_or_else(|| PathBuf::from(format!("psu-saxl-q{q}-{}.json", cli.command.name())));
    Ok(RunConfig {
        command: cli.command.name(),
        p,
        m,
        q,
        gram,
        seed: a.seed,
        trials: a.trials,
        max_reps: a.max_reps,
        cmd: cli.command,
        jobs: a.jobs,
        cache: a.cache,
        out,
    })
}

fn main() -> ExitCode {
    let cfg = match validate(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(n) = cfg.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run::run(&cfg) {
        Ok(report) => {
            let failed: Vec<&str> = report.assertions.iter().filter(|a| !a.passed).map(|a| a.tag).collect();
            if let Err(e) = output::write(&cfg, &report) {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
            if failed.is_empty() {
                ExitCode::SUCCESS
            } else {
                eprintln!("assertion failed: {}", failed.join(", "));
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
