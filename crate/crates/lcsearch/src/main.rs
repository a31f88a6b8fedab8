use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lcsearch::config::{Args, Experiment, SimConfig};
use lcsearch::report::emit;

#[derive(Parser)]
#[command(name = "lcsearch", version, about = "Stochastic search for linear regression with log-concave errors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    args: Args,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Fit a CSV dataset by stochastic search.
    Fit,
    /// Scaled nearest-point distance against the Weibull limit.
    SimWeibull,
    /// Perturbed-normal nearest distance against its limit; tuning analysis with --c-grid.
    SimCorollary,
    /// Joint covariance of the OLS fit and weighted candidates.
    SimJoint,
    /// Minimal candidate distance to the truth over a B-grid.
    SimMindist,
    /// Conditional law of the weighted candidates given the data.
    SimBootstrap,
    /// Density and parameter error across sample sizes.
    SimConsistency,
    /// Regularity statistics for a dataset or the generator.
    CheckConditions,
}

impl From<Command> for Experiment {
    fn from(c: Command) -> Self {
        match c {
            Command::Fit => Experiment::Fit,
            Command::SimWeibull => Experiment::SimWeibull,
            Command::SimCorollary => Experiment::SimCorollary,
            Command::SimJoint => Experiment::SimJoint,
            Command::SimMindist => Experiment::SimMindist,
            Command::SimBootstrap => Experiment::SimBootstrap,
            Command::SimConsistency => Experiment::SimConsistency,
            Command::CheckConditions => Experiment::CheckConditions,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let run = || -> anyhow::Result<Option<bool>> {
        let config = SimConfig::resolve(cli.command.into(), &cli.args)?;
        let (report, outcome) = lcsearch::execute(config)?;
        emit(&report, &outcome.tables)?;
        for c in report.checks.iter().filter(|c| report.asserted && !c.pass) {
            log::warn!("check {} failed: {} {} {}", c.name, c.value, c.relation, c.threshold);
        }
        Ok(report.pass)
    };
    match run() {
        Ok(Some(false)) => ExitCode::from(2),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
