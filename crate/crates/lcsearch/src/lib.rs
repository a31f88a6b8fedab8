//! Command-line harness for `lcsearch-core`: CSV ingestion, JSON and CSV
//! reports, and the Monte Carlo experiments that check the estimator's
//! asymptotic behaviour at desk scale.

pub mod config;
pub mod data;
pub mod export;
pub mod fit;
pub mod generate;
pub mod ks;
pub mod report;
pub mod sim;
pub mod stats;

use std::time::Instant;

use anyhow::Result;

use config::{Experiment, SimConfig};
use report::{Outcome, Report};

/// Run one experiment and wrap its outcome into a report.
pub fn execute(mut config: SimConfig) -> Result<(Report, Outcome)> {
    let start = Instant::now();
    let outcome = match config.experiment {
        Experiment::Fit => fit::run(&mut config)?,
        Experiment::SimWeibull => sim::weibull::run(&config)?,
        Experiment::SimCorollary => sim::corollary::run(&config)?,
        Experiment::SimJoint => sim::joint::run(&config)?,
        Experiment::SimMindist => sim::mindist::run(&config)?,
        Experiment::SimBootstrap => sim::bootstrap::run(&config)?,
        Experiment::SimConsistency => sim::consistency::run(&config)?,
        Experiment::CheckConditions => sim::conditions::run(&mut config)?,
    };
    let report = Report::new(config, &outcome, start.elapsed().as_secs_f64());
    Ok((report, outcome))
}
