//! Command-line front end: classification, feasibility searches, and no-go
//! verification chains, emitting one JSON report on standard output and a
//! short human summary on standard error.
//!
//! Exit status: 0 when the run completed and every verification passed,
//! 1 when a verification step failed, 2 on usage errors.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lelm::fock::Statistics;
use lelm::report::{run_classify, run_nogo, run_search, NogoChain, RunReport};
use lelm::search::SearchConfig;

#[derive(Parser)]
#[command(
    name = "lelm",
    version,
    about = "Distinguishability limits for qudit Bell states under linear-evolution, local-measurement apparatuses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum StatisticsArg {
    Boson,
    Fermion,
}

impl From<StatisticsArg> for Statistics {
    fn from(s: StatisticsArg) -> Self {
        match s {
            StatisticsArg::Boson => Statistics::Boson,
            StatisticsArg::Fermion => Statistics::Fermion,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ChainArg {
    ProjectiveQutrit,
    PovmQubit,
    PovmQutrit,
    SixSetCoverage,
}

impl From<ChainArg> for NogoChain {
    fn from(c: ChainArg) -> Self {
        match c {
            ChainArg::ProjectiveQutrit => NogoChain::ProjectiveQutrit,
            ChainArg::PovmQubit => NogoChain::PovmQubit,
            ChainArg::PovmQutrit => NogoChain::PovmQutrit,
            ChainArg::SixSetCoverage => NogoChain::SixSetCoverage,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify all size-k sets of qutrit Bell states by tic-tac-toe class
    Classify {
        /// Set size: 4 (winner/loser) or 6 (anti-winner/anti-loser)
        #[arg(long)]
        k: usize,
        /// Qudit dimension (classification is defined for d = 3)
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Search every size-k set for a detector mode meeting the necessary criteria
    Search {
        /// Set size, between 1 and d²
        #[arg(long)]
        k: usize,
        /// Qudit dimension
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, value_enum, default_value_t = StatisticsArg::Boson)]
        statistics: StatisticsArg,
        /// Random restarts per set
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        /// Damped least-squares iterations per restart
        #[arg(long, default_value_t = 500)]
        max_iterations: usize,
        /// Seed for the per-set generators
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Squared-residual acceptance tolerance
        #[arg(long, default_value_t = 1e-16)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Verify a no-go chain; exits nonzero if any step fails
    Nogo {
        #[arg(long, value_enum)]
        chain: ChainArg,
        /// Random draws per elimination step
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Optimizer restarts for the numeric floors
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn emit(report: &RunReport, format: Format) {
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Csv => print!("{}", report.to_csv()),
    }
    eprintln!("{}", report.human_summary());
}

fn run(cli: Cli) -> Result<ExitCode, lelm::Error> {
    match cli.command {
        Command::Classify { k, d, format } => {
            let report = run_classify(k, d)?;
            emit(&report, format);
            Ok(ExitCode::SUCCESS)
        }
        Command::Search {
            k,
            d,
            statistics,
            restarts,
            max_iterations,
            seed,
            tol,
            format,
        } => {
            let cfg = SearchConfig {
                restarts,
                max_iterations,
                accept_tolerance: tol,
                seed,
                statistics: statistics.into(),
                ..SearchConfig::default()
            };
            let report = run_search(k, d, &cfg)?;
            emit(&report, format);
            Ok(ExitCode::SUCCESS)
        }
        Command::Nogo {
            chain,
            samples,
            seed,
            restarts,
            format,
        } => {
            let outcome = run_nogo(chain.into(), samples, seed, restarts)?;
            emit(&outcome.report, format);
            if outcome.all_verified {
                Ok(ExitCode::SUCCESS)
            } else {
                let failed: Vec<String> = outcome
                    .report
                    .results
                    .iter()
                    .filter_map(|r| match r {
                        lelm::report::ResultRecord::Elimination { name, verdict, .. }
                            if *verdict == lelm::nogo::Verdict::Survived =>
                        {
                            Some(name.clone())
                        }
                        lelm::report::ResultRecord::Certificate { certificate }
                            if !certificate.exact_infeasible =>
                        {
                            Some(certificate.name.clone())
                        }
                        _ => None,
                    })
                    .collect();
                eprintln!("verification failed: {}", failed.join(", "));
                Ok(ExitCode::FAILURE)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
