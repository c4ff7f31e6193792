//! Exhaustive checks of the structural results at small grid sizes.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::random_distribution;
use crate::closedform::lexi_low_homogeneous;
use crate::dist::{agree_on, mean_lipschitz_check, transfer_to_augmented, SupportSet, AGREE_TOL};
use crate::error::{Error, Result};
use crate::oracle::{pessimal_bound_oracle, OracleConfig};
use crate::orders::{enumerate_omega, is_monotone, monotone_linear_extensions, upper_set, PreorderKind};
use crate::support::{Sample, SupportGrid};
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub schema_version: &'static str,
    pub theorem: String,
    pub instances_checked: usize,
    pub failures: Vec<String>,
    pub tolerance: f64,
    /// Orders or instances that did not meet a check's preconditions.
    pub skipped: usize,
}

impl VerifyReport {
    fn new(theorem: &str, tolerance: f64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            theorem: theorem.to_string(),
            instances_checked: 0,
            failures: Vec::new(),
            tolerance,
            skipped: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.instances_checked += 1;
        if !ok {
            self.failures.push(describe());
        }
    }
}

/// Sandwich theorem over every monotone linear extension of the
/// componentwise order.
pub fn verify_sandwich(grid: &SupportGrid, n: usize, alpha: f64, cfg: &OracleConfig) -> Result<VerifyReport> {
    let omega = enumerate_omega(grid, n)?;
    let orders = monotone_linear_extensions(&omega)?
        .into_iter()
        .map(PreorderKind::CustomTable)
        .collect();
    verify_sandwich_with_orders(grid, n, alpha, cfg, orders)
}

/// Sandwich checks for the given total orders. Orders that are not monotone
/// are counted in `skipped` and not checked.
///
/// For a monotone `T`, homogeneous `S_i`, and `S_i ≤_T x ≤_T S_{i+1}`:
/// `Ω(S_{i+1}, T_ℓ) ⊆ Ω(x, T) ⊆ Ω(S_i, T_h)` and
/// `B*_{T_h}(S_i) ≤ B*_T(x) ≤ B*_{T_ℓ}(S_{i+1})`. At homogeneous samples
/// every `B*_T(S_i)` also lies between the lexi-high value and the lexi-low
/// closed form.
pub fn verify_sandwich_with_orders(
    grid: &SupportGrid,
    n: usize,
    alpha: f64,
    cfg: &OracleConfig,
    orders: Vec<PreorderKind>,
) -> Result<VerifyReport> {
    let tol = cfg.tolerance(grid.range());
    let mut report = VerifyReport::new("sandwich", tol);
    let omega = enumerate_omega(grid, n)?;
    let m = grid.m();
    let homog: Vec<Sample> = (0..m).map(|i| Sample::homogeneous(*grid, i, n)).collect::<Result<_>>()?;

    let oracle = |x: &Sample, order: &PreorderKind| -> Result<f64> {
        Ok(pessimal_bound_oracle(x, order, alpha, cfg)?.value)
    };
    let high: Vec<f64> = homog.par_iter().map(|s| oracle(s, &PreorderKind::LexiHigh)).collect::<Result<_>>()?;
    let low: Vec<f64> = homog.par_iter().map(|s| oracle(s, &PreorderKind::LexiLow)).collect::<Result<_>>()?;
    let high_sets: Vec<_> = homog.iter().map(|s| upper_set(s, &PreorderKind::LexiHigh, &omega)).collect::<Result<_>>()?;
    let low_sets: Vec<_> = homog.iter().map(|s| upper_set(s, &PreorderKind::LexiLow, &omega)).collect::<Result<_>>()?;

    for (t_idx, order) in orders.iter().enumerate() {
        if !is_monotone(order, &omega)? {
            report.skipped += 1;
            continue;
        }
        let values: Vec<f64> = omega.par_iter().map(|x| oracle(x, order)).collect::<Result<_>>()?;
        let value_of = |x: &Sample| values[omega.binary_search(x).expect("x comes from omega")];

        for i in 0..m {
            let v = value_of(&homog[i]);
            report.check(v >= high[i] - tol && v <= lexi_low_homogeneous(grid, i, n, alpha)? + tol, || {
                format!("order #{t_idx}: B_T(S_{i}) = {v} outside [{} , lexi-low closed form]", high[i])
            });
        }
        for i in 0..m.saturating_sub(1) {
            for x in &omega {
                if !(order.le(&homog[i], x)? && order.le(x, &homog[i + 1])?) {
                    continue;
                }
                let ux = upper_set(x, order, &omega)?;
                report.check(ux.is_subset_of(&high_sets[i]), || {
                    format!("order #{t_idx}: Ω({x}, T) not inside Ω(S_{i}, T_h)")
                });
                report.check(low_sets[i + 1].is_subset_of(&ux), || {
                    format!("order #{t_idx}: Ω(S_{}, T_l) not inside Ω({x}, T)", i + 1)
                });
                let v = value_of(x);
                report.check(high[i] <= v + tol && v <= low[i + 1] + tol, || {
                    format!(
                        "order #{t_idx}, x = {x}: chain {} <= {v} <= {} fails",
                        high[i],
                        low[i + 1]
                    )
                });
            }
        }
    }
    Ok(report)
}

/// `x <_R y ⇒ B(x) <= B(y) + tol` and `x ∼_R y ⇒ |B(x) - B(y)| <= tol`.
pub fn verify_consistency(
    order: &PreorderKind,
    bound_values: &BTreeMap<Sample, f64>,
    tol: f64,
) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("consistency", tol);
    let first = bound_values
        .keys()
        .next()
        .ok_or_else(|| Error::InvalidConfig("no bound values given".into()))?;
    let omega = enumerate_omega(first.grid(), first.n())?;
    let missing = omega.iter().filter(|x| !bound_values.contains_key(*x)).count();
    if missing > 0 {
        return Err(Error::MissingSamples(missing));
    }
    for (a, x) in omega.iter().enumerate() {
        for y in &omega[a + 1..] {
            let (bx, by) = (bound_values[x], bound_values[y]);
            match order.compare(x, y)? {
                std::cmp::Ordering::Less => {
                    report.check(bx <= by + tol, || format!("{x} < {y} but B = {bx} > {by}"))
                }
                std::cmp::Ordering::Greater => {
                    report.check(by <= bx + tol, || format!("{y} < {x} but B = {by} > {bx}"))
                }
                std::cmp::Ordering::Equal => {
                    report.check((bx - by).abs() <= tol, || format!("{x} ~ {y} but B = {bx} vs {by}"))
                }
            }
        }
    }
    Ok(report)
}

/// The set on which agreement preserves the upper-set probability.
fn agreement_set(x: &Sample, order: &PreorderKind) -> Result<SupportSet> {
    match order {
        PreorderKind::Quantile(i) => SupportSet::new([x.order_stat(*i)?], x.grid()),
        PreorderKind::LexiLow => SupportSet::new(x.distinct_indices(), x.grid()),
        other => Err(Error::InvalidConfig(format!(
            "agreement is only claimed for lexi-low and quantile orders, not {}",
            other.label()
        ))),
    }
}

/// Random `G`, transferred to `H` on `C⁺`; the two must agree on `C` and
/// give the same probability to `Ω(x, R)`.
pub fn verify_agreement(x: &Sample, order: &PreorderKind, trials: u64, seed: u64) -> Result<VerifyReport> {
    let c = agreement_set(x, order)?;
    let omega = enumerate_omega(x.grid(), x.n())?;
    let upper = upper_set(x, order, &omega)?;
    let mut report = VerifyReport::new("agreement", AGREE_TOL);
    let outcomes: Vec<Result<Option<String>>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            let g = random_distribution(*x.grid(), &mut rng);
            let h = transfer_to_augmented(&g, &c)?;
            let pg = g.prob_upper_set(&upper)?;
            let ph = h.prob_upper_set(&upper)?;
            let agrees = agree_on(&g, &h, &c)?;
            let supported = h.is_supported_on(&c.augment(x.grid()));
            Ok(if agrees && supported && (pg - ph).abs() <= AGREE_TOL {
                None
            } else {
                Some(format!(
                    "trial {t}: P_G = {pg}, P_H = {ph}, agree = {agrees}, on C+ = {supported}"
                ))
            })
        })
        .collect();
    for outcome in outcomes {
        let failure = outcome?;
        report.check(failure.is_none(), || failure.unwrap_or_default());
    }
    Ok(report)
}

/// Oracle on the refined support against the oracle on the full grid, for
/// lexi-low and every quantile order at every sample.
pub fn verify_refinement(grid: &SupportGrid, n: usize, alpha: f64, cfg: &OracleConfig) -> Result<VerifyReport> {
    let tol = cfg.tolerance(grid.range());
    let mut report = VerifyReport::new("refinement", 2.0 * tol);
    let omega = enumerate_omega(grid, n)?;
    let orders: Vec<PreorderKind> = std::iter::once(PreorderKind::LexiLow)
        .chain((1..=n).map(PreorderKind::Quantile))
        .collect();
    let full_cfg = OracleConfig { support_override: Some(SupportSet::full(grid)), ..cfg.clone() };
    let jobs: Vec<(&Sample, &PreorderKind)> = omega.iter().flat_map(|x| orders.iter().map(move |o| (x, o))).collect();
    let results: Vec<(String, f64, f64)> = jobs
        .par_iter()
        .map(|(x, order)| {
            let refined = pessimal_bound_oracle(x, order, alpha, cfg)?.value;
            let full = pessimal_bound_oracle(x, order, alpha, &full_cfg)?.value;
            Ok((format!("{} at {x}", order.label()), refined, full))
        })
        .collect::<Result<_>>()?;
    for (label, refined, full) in results {
        report.check((refined - full).abs() <= 2.0 * tol, || {
            format!("{label}: refined {refined} vs full {full}")
        });
    }
    Ok(report)
}

/// `|E[u] - E[v]| <= sqrt(m) max|S_i| ||u - v||_2` on random pairs.
pub fn verify_lipschitz(ms: &[usize], pairs: u64, seed: u64) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("mean-lipschitz", 1e-12);
    for &m in ms {
        let grid = SupportGrid::unit(m)?;
        for t in 0..pairs {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ m as u64);
            rng.set_stream(t);
            let u = random_distribution(grid, &mut rng);
            let v = random_distribution(grid, &mut rng);
            report.check(mean_lipschitz_check(&u, &v)?, || format!("m = {m}, pair {t}"));
        }
    }
    Ok(report)
}

/// Scales and parameters for [`run_campaign`].
#[derive(Debug, Clone, Serialize)]
pub struct CampaignConfig {
    pub alpha: f64,
    pub oracle: OracleConfig,
    pub sandwich_m: usize,
    pub sandwich_n: usize,
    pub refinement_m: usize,
    pub refinement_n: usize,
    pub agreement_trials: u64,
    pub lipschitz_pairs: u64,
    pub seed: u64,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            alpha: 0.25,
            oracle: OracleConfig::default(),
            sandwich_m: 3,
            sandwich_n: 2,
            refinement_m: 3,
            refinement_n: 2,
            agreement_trials: 200,
            lipschitz_pairs: 1000,
            seed: 0,
        }
    }
}

/// Every check at the configured scale.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<Vec<VerifyReport>> {
    let mut reports = Vec::new();
    let sandwich_grid = SupportGrid::unit(cfg.sandwich_m)?;
    reports.push(verify_sandwich(&sandwich_grid, cfg.sandwich_n, cfg.alpha, &cfg.oracle)?);

    let tol = cfg.oracle.tolerance(sandwich_grid.range());
    for order in [PreorderKind::Quantile(1), PreorderKind::LexiLow, PreorderKind::LexiHigh] {
        let omega = enumerate_omega(&sandwich_grid, cfg.sandwich_n)?;
        let values = omega
            .par_iter()
            .map(|x| Ok((x.clone(), pessimal_bound_oracle(x, &order, cfg.alpha, &cfg.oracle)?.value)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let mut r = verify_consistency(&order, &values, tol)?;
        r.theorem = format!("consistency:{}", order.label());
        reports.push(r);
    }

    let grid5 = SupportGrid::unit(5)?;
    let x = Sample::from_indices(grid5, vec![1, 1, 3])?;
    for order in [PreorderKind::LexiLow, PreorderKind::Quantile(2)] {
        let mut r = verify_agreement(&x, &order, cfg.agreement_trials, cfg.seed)?;
        r.theorem = format!("agreement:{}", order.label());
        reports.push(r);
    }

    let refinement_grid = SupportGrid::unit(cfg.refinement_m)?;
    reports.push(verify_refinement(&refinement_grid, cfg.refinement_n, cfg.alpha, &cfg.oracle)?);
    reports.push(verify_lipschitz(&[2, 5, 10], cfg.lipschitz_pairs, cfg.seed)?);
    Ok(reports)
}
