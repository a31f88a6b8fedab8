//! Monte Carlo experiments. Replicates run in parallel, each on its own
//! substream keyed by the seed and the replicate index, so results do not
//! depend on scheduling.

use rayon::prelude::*;

pub mod bootstrap;
pub mod conditions;
pub mod consistency;
pub mod corollary;
pub mod joint;
pub mod mindist;
pub mod weibull;

/// Path component reserved for fixed-design streams.
pub(crate) const DESIGN_KEY: u64 = u64::MAX;

/// `f(rep)` for every replicate, collected in replicate order.
pub(crate) fn par_reps<T, F>(reps: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..reps as u64).into_par_iter().map(f).collect()
}
