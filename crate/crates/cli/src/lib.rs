//! Front end for `lds`: system files in, reports out.

pub mod report;
pub mod system;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use lds_core::{
    enumerate_product_phase_graph, oracle_crosscheck_product, DecidedBy, Error, PeriodSearchConfig,
    ProductSystem, DEFAULT_MAX_PERIOD, DEFAULT_ORACLE_CAP,
};

use report::{
    CharpolyReport, CheckRow, Count, CrosscheckSummary, CycleRow, CyclesReport, Element,
    LfpsReport, PhaseGraphReport, Report, StabilizeReport,
};
pub use system::{ParseError, SystemFile, Warning};

#[derive(Debug, Parser)]
#[command(name = "lds", version, about = "Linear dynamical systems over Z/q")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Largest eventual period searched for.
    #[arg(long, default_value_t = DEFAULT_MAX_PERIOD, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub max_period: u64,
    /// Largest state space the brute-force oracle enumerates.
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP, global = true)]
    pub oracle_cap: u64,
    /// Stop powering as soon as `A^e = A^(e+1)`.
    #[arg(long, global = true)]
    pub early_exit: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether every trajectory ends in a fixed point.
    Lfps { file: PathBuf },
    /// Print A^B and the least r with A^r = A^(r+1).
    Stabilize { file: PathBuf },
    /// Print the characteristic polynomial, coefficients ascending.
    Charpoly { file: PathBuf },
    /// Print the eventual period and the cycle census.
    Cycles { file: PathBuf },
    /// Write the functional graph in DOT format.
    PhaseGraph { file: PathBuf },
    /// Compare the analytic results with brute-force enumeration.
    Crosscheck { file: PathBuf },
}

impl Command {
    pub fn file(&self) -> &Path {
        match self {
            Command::Lfps { file }
            | Command::Stabilize { file }
            | Command::Charpoly { file }
            | Command::Cycles { file }
            | Command::PhaseGraph { file }
            | Command::Crosscheck { file } => file,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Analysis(#[from] Error),
}

impl CliError {
    /// 3 when a configured cap was hit, 2 for every other failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Analysis(
                Error::PeriodExceedsCap { .. } | Error::StateSpaceTooLarge { .. },
            ) => 3,
            _ => 2,
        }
    }
}

pub fn load(path: &Path) -> Result<SystemFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut file = SystemFile::parse(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    file.source = Some(path.to_path_buf());
    Ok(file)
}

fn element(values: impl IntoIterator<Item = u64>) -> Element {
    Element(values.into_iter().collect())
}

/// Runs `cli.command` on an already loaded system.
pub fn run_command(cli: &Cli, file: &SystemFile) -> Result<Report, CliError> {
    let sys = file.system();
    let cfg = PeriodSearchConfig {
        max_period: cli.max_period,
        early_exit: cli.early_exit,
    };
    let (moduli, n) = (file.moduli.clone(), file.n);
    let report = match cli.command {
        Command::Lfps { .. } => {
            let d = sys.decide_fixed_point(&cfg)?;
            Report::Lfps(LfpsReport {
                moduli,
                n,
                fixed_point: d.is_fixed_point,
                bound: d.bound,
                shortcut: d.decided_by == DecidedBy::UnitDeterminant,
                determinant: element(d.determinants.iter().map(|r| r.value())),
                stopped_at: d.stopped_at(),
            })
        }
        Command::Stabilize { .. } => stabilize(&sys, moduli)?,
        Command::Charpoly { .. } => {
            let polys = sys
                .components()
                .iter()
                .map(|a| a.charpoly())
                .collect::<Result<Vec<_>, _>>()?;
            Report::Charpoly(CharpolyReport {
                moduli,
                n,
                coefficients: (0..=n)
                    .map(|i| element(polys.iter().map(|p| p.coeff(i))))
                    .collect(),
                determinant: element(sys.determinants()?.iter().map(|r| r.value())),
            })
        }
        Command::Cycles { .. } => {
            let census = sys.cycle_structure(&cfg)?;
            Report::Cycles(CyclesReport {
                moduli,
                n,
                period: census.period,
                classes: census
                    .classes
                    .iter()
                    .map(|c| CycleRow {
                        k: c.length,
                        n_k: Count(c.fixed_by_power.clone()),
                        p_k: Count(c.exact_period.clone()),
                        c_k: Count(c.cycles.clone()),
                    })
                    .collect(),
                periodic_points: Count(census.periodic_points.clone()),
                total_cycles: Count(census.total_cycles()),
            })
        }
        Command::PhaseGraph { .. } => {
            let graph = enumerate_product_phase_graph(&sys, cli.oracle_cap)?;
            Report::PhaseGraph(PhaseGraphReport {
                moduli,
                n,
                successors: graph.successors().to_vec(),
            })
        }
        Command::Crosscheck { .. } => {
            let r = oracle_crosscheck_product(&sys, cli.oracle_cap, &cfg)?;
            Report::Crosscheck(CrosscheckSummary {
                moduli,
                n,
                states: r.state_count,
                passed: r.passed(),
                checks: r
                    .checks
                    .into_iter()
                    .map(|c| CheckRow {
                        name: c.name,
                        oracle: c.oracle,
                        analytic: c.analytic,
                        passed: c.passed,
                    })
                    .collect(),
            })
        }
    };
    Ok(report)
}

fn stabilize(sys: &ProductSystem, moduli: Vec<u64>) -> Result<Report, CliError> {
    let n = sys.dim();
    let bound = sys.iteration_bound();
    let powers = sys.pow_u64(bound)?;
    let mut fixed_point = true;
    for (x, a) in powers.iter().zip(sys.components()) {
        fixed_point &= &x.mul(a)? == x;
    }
    let minimal_fixed_exponent = if fixed_point {
        sys.minimal_fixed_exponent()?
    } else {
        None
    };
    Ok(Report::Stabilize(StabilizeReport {
        moduli,
        n,
        bound,
        fixed_point,
        minimal_fixed_exponent,
        image_chain: sys.image_chain()?.into_iter().map(Count).collect(),
        stabilized: (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| element(powers.iter().map(|m| m.get(i, j))))
                    .collect()
            })
            .collect(),
    }))
}

pub fn render(cli: &Cli, report: &Report) -> String {
    match cli.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    }
}
