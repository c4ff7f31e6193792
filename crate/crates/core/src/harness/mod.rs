//! Coverage evaluation and theorem-level verification campaigns.

pub mod coverage;
pub mod verify;

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::closedform::optimal_pointwise_homogeneous;
use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::oracle::{pessimal_bound_oracle, OracleConfig};
use crate::orders::{enumerate_omega, OrderSelector};
use crate::quantile_approx::{quantile_bound_with, TailConvention};
use crate::support::{Sample, SupportGrid};

pub use coverage::{exact_coverage, exact_coverage_from_table, mc_coverage, CoverageMode, CoverageReport};
pub use verify::{
    run_campaign, verify_agreement, verify_consistency, verify_lipschitz, verify_refinement,
    verify_sandwich, verify_sandwich_with_orders, CampaignConfig, VerifyReport,
};

/// A lower confidence bound evaluated sample by sample.
pub trait LowerBound: Sync {
    fn name(&self) -> String;
    fn alpha(&self) -> Option<f64>;
    fn bound(&self, x: &Sample) -> Result<f64>;
}

/// Named bound constructions available to the harness and the CLI.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundMethod {
    /// Always `S_min`.
    Trivial,
    /// Optimal pointwise value; defined at homogeneous samples only.
    PointwiseClosedForm { alpha: f64 },
    Quantile { i: usize, alpha: f64, epsilon: f64, tail: TailConvention },
    /// Pessimal bound of an order, solved by the oracle.
    Oracle { order: OrderSelector, alpha: f64, config: OracleConfig },
}

impl LowerBound for BoundMethod {
    fn name(&self) -> String {
        match self {
            BoundMethod::Trivial => "trivial".into(),
            BoundMethod::PointwiseClosedForm { .. } => "pointwise-closed-form".into(),
            BoundMethod::Quantile { i, .. } => format!("quantile-approx:{i}"),
            BoundMethod::Oracle { order, .. } => format!("oracle:{order}"),
        }
    }

    fn alpha(&self) -> Option<f64> {
        match self {
            BoundMethod::Trivial => None,
            BoundMethod::PointwiseClosedForm { alpha }
            | BoundMethod::Quantile { alpha, .. }
            | BoundMethod::Oracle { alpha, .. } => Some(*alpha),
        }
    }

    fn bound(&self, x: &Sample) -> Result<f64> {
        match self {
            BoundMethod::Trivial => Ok(x.grid().s_min()),
            BoundMethod::PointwiseClosedForm { alpha } => {
                let i = x.homogeneous_index().ok_or_else(|| {
                    Error::Undefined(format!("no closed form at the non-homogeneous sample {x}"))
                })?;
                optimal_pointwise_homogeneous(x.grid(), i, x.n(), *alpha)
            }
            BoundMethod::Quantile { i, alpha, epsilon, tail } => {
                Ok(quantile_bound_with(x, *i, *alpha, *epsilon, *tail)?.bound)
            }
            BoundMethod::Oracle { order, alpha, config } => {
                Ok(pessimal_bound_oracle(x, &order.resolve(x), *alpha, config)?.value)
            }
        }
    }
}

/// Bound values over the whole sample space, computed in parallel.
pub fn tabulate<B: LowerBound + ?Sized>(method: &B, grid: &SupportGrid, n: usize) -> Result<BTreeMap<Sample, f64>> {
    tabulate_samples(method, enumerate_omega(grid, n)?)
}

pub(crate) fn tabulate_samples<B: LowerBound + ?Sized>(
    method: &B,
    samples: Vec<Sample>,
) -> Result<BTreeMap<Sample, f64>> {
    let values: Vec<(Sample, f64)> = samples
        .into_par_iter()
        .map(|x| method.bound(&x).map(|b| (x, b)))
        .collect::<Result<_>>()?;
    Ok(values.into_iter().collect())
}

/// Random distribution with i.i.d. exponential weights, which is uniform
/// on the simplex.
pub fn random_distribution<R: Rng + ?Sized>(grid: SupportGrid, rng: &mut R) -> Distribution {
    let w: Vec<f64> = (0..grid.m()).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    let mut mass: Vec<f64> = w.iter().map(|v| v / total).collect();
    let drift: f64 = 1.0 - mass.iter().sum::<f64>();
    mass[0] = (mass[0] + drift).max(0.0);
    Distribution::new(grid, mass).expect("normalized weights form a distribution")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_and_alpha() {
        assert_eq!(BoundMethod::Trivial.name(), "trivial");
        assert_eq!(BoundMethod::Trivial.alpha(), None);
        let q = BoundMethod::Quantile { i: 2, alpha: 0.1, epsilon: 1e-4, tail: TailConvention::default() };
        assert_eq!(q.name(), "quantile-approx:2");
        assert_eq!(q.alpha(), Some(0.1));
        let o = BoundMethod::Oracle {
            order: OrderSelector::LexiHigh,
            alpha: 0.2,
            config: OracleConfig::default(),
        };
        assert_eq!(o.name(), "oracle:lexi-high");
    }

    #[test]
    fn closed_form_refuses_mixed_samples() {
        let g = SupportGrid::unit(3).unwrap();
        let m = BoundMethod::PointwiseClosedForm { alpha: 0.25 };
        let x = Sample::from_indices(g, vec![0, 2]).unwrap();
        assert!(matches!(m.bound(&x), Err(Error::Undefined(_))));
        let x = Sample::homogeneous(g, 2, 2).unwrap();
        assert_eq!(m.bound(&x).unwrap(), 0.5);
    }

    #[test]
    fn tabulate_covers_omega() {
        let g = SupportGrid::unit(3).unwrap();
        let t = tabulate(&BoundMethod::Trivial, &g, 2).unwrap();
        assert_eq!(t.len(), 6);
        assert!(t.values().all(|&v| v == 0.0));
    }

    #[test]
    fn random_distributions_are_valid() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for m in [2, 5, 10] {
            let g = SupportGrid::unit(m).unwrap();
            for _ in 0..100 {
                let d = random_distribution(g, &mut rng);
                assert!((d.mass().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
    }
}
