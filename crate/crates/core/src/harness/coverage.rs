//! Probability that a bound stays at or below the true mean.

use std::collections::{BTreeMap, BTreeSet};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{tabulate_samples, LowerBound};
use crate::dist::{Distribution, ZERO_MASS};
use crate::error::{Error, Result};
use crate::orders::enumerate_omega;
use crate::support::Sample;
use crate::SCHEMA_VERSION;

/// Slack on `bound <= mean`.
pub const COVER_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CoverageMode {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub schema_version: &'static str,
    pub method: String,
    pub alpha: Option<f64>,
    pub n: usize,
    pub distribution: Distribution,
    pub mean: f64,
    pub coverage: f64,
    pub mode: CoverageMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// `Σ_x P_F(x) · 1[bound(x) <= E[F]]` over the full sample space.
///
/// Bounds are only evaluated at samples with positive probability.
pub fn exact_coverage<B: LowerBound + ?Sized>(f: &Distribution, method: &B, n: usize) -> Result<CoverageReport> {
    let omega = enumerate_omega(f.grid(), n)?;
    let mut probs = BTreeMap::new();
    for x in omega {
        let p = f.sample_prob(&x)?;
        if p > ZERO_MASS {
            probs.insert(x, p);
        }
    }
    let table = tabulate_samples(method, probs.keys().cloned().collect())?;
    exact_coverage_from_table(f, &table, &method.name(), method.alpha(), n)
}

/// Exact coverage with precomputed bound values, which lets one table serve
/// many distributions.
pub fn exact_coverage_from_table(
    f: &Distribution,
    table: &BTreeMap<Sample, f64>,
    method: &str,
    alpha: Option<f64>,
    n: usize,
) -> Result<CoverageReport> {
    let mean = f.mean();
    let mut coverage = 0.0;
    for x in enumerate_omega(f.grid(), n)? {
        let p = f.sample_prob(&x)?;
        if p <= ZERO_MASS {
            continue;
        }
        let b = table.get(&x).ok_or(Error::MissingSamples(1))?;
        if *b <= mean + COVER_TOL {
            coverage += p;
        }
    }
    Ok(CoverageReport {
        schema_version: SCHEMA_VERSION,
        method: method.to_string(),
        alpha,
        n,
        distribution: f.clone(),
        mean,
        coverage: coverage.clamp(0.0, 1.0),
        mode: CoverageMode::Exact,
        trials: None,
        seed: None,
    })
}

/// Monte Carlo coverage. Trial `t` draws from the ChaCha8 stream `t` of
/// `seed`, so results do not depend on scheduling.
pub fn mc_coverage<B: LowerBound + ?Sized>(
    f: &Distribution,
    method: &B,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<CoverageReport> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let grid = *f.grid();
    let picker = WeightedIndex::new(f.mass()).map_err(|e| Error::InvalidDistribution(e.to_string()))?;
    let draws: Vec<Sample> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            let idx = (0..n).map(|_| picker.sample(&mut rng)).collect();
            Sample::from_indices(grid, idx)
        })
        .collect::<Result<_>>()?;
    let distinct: BTreeSet<Sample> = draws.iter().cloned().collect();
    let table = tabulate_samples(method, distinct.into_iter().collect())?;
    let mean = f.mean();
    let hits = draws.iter().filter(|x| table[*x] <= mean + COVER_TOL).count();
    Ok(CoverageReport {
        schema_version: SCHEMA_VERSION,
        method: method.name(),
        alpha: method.alpha(),
        n,
        distribution: f.clone(),
        mean,
        coverage: hits as f64 / trials as f64,
        mode: CoverageMode::MonteCarlo,
        trials: Some(trials),
        seed: Some(seed),
    })
}
