//! Brute-force pessimal bounds.
//!
//! `B*_R(x) = min { E[F] : P_F[Ω(x, R)] >= α }` over distributions on a
//! support set. Every distribution on atoms `a_0 < a_1 < ... < a_{k-1}` is
//! `(1 - t) δ_{a_0} + t Q` for a direction `Q` on the remaining atoms. The
//! mean grows linearly in `t`, so for each direction the smallest feasible
//! `t` gives the best point on that ray. Directions are taken from a dense
//! simplex grid and then polished by local moves at halving step sizes.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::check_alpha;
use crate::dist::{multinomial, Distribution, SupportSet};
use crate::error::{Error, Result};
use crate::orders::{enumerate_omega, upper_set, PreorderKind, UpperSet};
use crate::support::Sample;

/// How many of the best directions survive into local refinement.
const REFINE_CANDIDATES: usize = 8;
const BISECT_ITERS: usize = 64;
const MAX_LOCAL_MOVES: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstraintMode {
    /// `P_F[Ω'] >= α`.
    #[default]
    GeqAlpha,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleConfig {
    /// Step of the direction grid.
    pub resolution: f64,
    pub refine_passes: u32,
    pub constraint: ConstraintMode,
    pub support_override: Option<SupportSet>,
    /// Cap on the number of grid directions; the step is coarsened to fit.
    pub max_directions: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            resolution: 1e-3,
            refine_passes: 3,
            constraint: ConstraintMode::GeqAlpha,
            support_override: None,
            max_directions: 20_000,
        }
    }
}

impl OracleConfig {
    pub fn with_resolution(resolution: f64) -> Self {
        Self { resolution, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.resolution > 0.0 && self.resolution <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "resolution must lie in (0, 1], got {}",
                self.resolution
            )));
        }
        if self.max_directions == 0 {
            return Err(Error::InvalidConfig("max_directions must be positive".into()));
        }
        Ok(())
    }

    /// Value tolerance `2 · resolution · range` used throughout the checks.
    pub fn tolerance(&self, range: f64) -> f64 {
        2.0 * self.resolution * range
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub value: f64,
    pub witness: Distribution,
    /// `P_witness[Ω(x, R)]`, recomputed by enumeration.
    pub constraint_prob: f64,
    pub support_used: SupportSet,
    /// Direction step after the last refinement round.
    pub final_step: f64,
    pub directions: usize,
}

/// Smallest support on which the pessimal bound is attained.
pub fn refined_support(x: &Sample, order: &PreorderKind) -> Result<SupportSet> {
    let grid = x.grid();
    match order {
        PreorderKind::Quantile(i) => SupportSet::new([x.order_stat(*i)?], grid).map(|c| c.augment(grid)),
        PreorderKind::LexiLow => SupportSet::new(x.distinct_indices(), grid).map(|c| c.augment(grid)),
        PreorderKind::Pointwise(x0) => SupportSet::new(x0.distinct_indices(), grid).map(|c| c.augment(grid)),
        PreorderKind::LexiHigh | PreorderKind::CustomTable(_) => Ok(SupportSet::full(grid)),
    }
}

pub fn pessimal_bound_oracle(
    x: &Sample,
    order: &PreorderKind,
    alpha: f64,
    cfg: &OracleConfig,
) -> Result<OracleResult> {
    check_alpha(alpha)?;
    cfg.validate()?;
    let omega = enumerate_omega(x.grid(), x.n())?;
    let upper = upper_set(x, order, &omega)?;
    let support = match &cfg.support_override {
        Some(c) => c.clone(),
        None => refined_support(x, order)?,
    };
    oracle_over(&upper, &support, alpha, cfg, &omega)
}

/// Pessimal bound for the singleton upper set `{x}`.
pub fn pointwise_bound_oracle(x: &Sample, alpha: f64, cfg: &OracleConfig) -> Result<OracleResult> {
    pessimal_bound_oracle(x, &PreorderKind::Pointwise(x.clone()), alpha, cfg)
}

/// Minimizes the mean subject to `P_F[upper] >= α` over distributions on
/// `support`. `upper` may be any set of samples; `omega` is the sample space
/// it lives in.
pub fn oracle_over(
    upper: &UpperSet,
    support: &SupportSet,
    alpha: f64,
    cfg: &OracleConfig,
    omega: &[Sample],
) -> Result<OracleResult> {
    check_alpha(alpha)?;
    cfg.validate()?;
    if support.is_empty() {
        return Err(Error::InvalidConfig("empty support".into()));
    }
    let grid = *upper.base.grid();
    let problem = Problem::new(upper, support, alpha, cfg, omega)?;
    let infeasible = || Error::Infeasible { alpha, support: support.to_vec() };

    let (best, final_step, directions) = if problem.prob_at_base() >= alpha {
        (problem.base_candidate(), 0.0, 0)
    } else if problem.d == 0 {
        return Err(infeasible());
    } else {
        let steps = direction_steps(problem.d, cfg);
        let dirs = compositions(steps, problem.d);
        let count = dirs.len();
        let mut found: Vec<Candidate> = dirs
            .into_par_iter()
            .filter_map(|c| {
                let w: Vec<f64> = c.iter().map(|&k| k as f64 / steps as f64).collect();
                problem.eval(w)
            })
            .collect();
        if found.is_empty() {
            return Err(infeasible());
        }
        found.sort_by(Candidate::cmp_key);
        found.truncate(REFINE_CANDIDATES);

        let mut h = 1.0 / steps as f64;
        for _ in 0..cfg.refine_passes {
            h /= 2.0;
            if problem.d < 2 {
                continue;
            }
            found = found.into_par_iter().map(|c| problem.polish(c, h)).collect();
            found.sort_by(Candidate::cmp_key);
        }
        (found.swap_remove(0), h, count)
    };

    let witness = Distribution::new(grid, problem.masses(&best))?;
    let constraint_prob = witness.prob_upper_set(upper)?;
    Ok(OracleResult {
        value: best.value,
        witness,
        constraint_prob,
        support_used: support.clone(),
        final_step,
        directions,
    })
}

/// Number of subdivisions per unit for the direction grid.
fn direction_steps(d: usize, cfg: &OracleConfig) -> usize {
    let mut steps = ((1.0 / cfg.resolution).round() as usize).max(1);
    while steps > 1 && composition_count(steps, d) > cfg.max_directions as u128 {
        steps -= 1;
    }
    steps
}

/// Ways to write `total` as an ordered sum of `parts` non-negative integers.
fn composition_count(total: usize, parts: usize) -> u128 {
    let (top, k) = ((total + parts - 1) as u128, (parts - 1) as u128);
    (0..k).fold(1u128, |acc, j| acc * (top - j) / (j + 1))
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<u32>> {
    fn rec(left: usize, slot: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slot + 1 == cur.len() {
            cur[slot] = left as u32;
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[slot] = k as u32;
            rec(left - k, slot + 1, cur, out);
        }
    }
    let mut out = Vec::with_capacity(composition_count(total, parts).min(1 << 24) as usize);
    rec(total, 0, &mut vec![0; parts], &mut out);
    out
}

#[derive(Debug, Clone)]
struct Candidate {
    value: f64,
    t: f64,
    w: Vec<f64>,
    mass: Vec<f64>,
}

impl Candidate {
    fn cmp_key(a: &Candidate, b: &Candidate) -> Ordering {
        a.value.total_cmp(&b.value).then_with(|| {
            a.mass
                .iter()
                .zip(&b.mass)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

/// A member of the upper set restricted to the support.
struct Term {
    coef: f64,
    /// Draws that land off the lowest atom.
    lifted: usize,
    /// Counts on atoms `1..k`.
    counts: Vec<usize>,
}

struct Problem {
    m: usize,
    n: usize,
    atoms: Vec<usize>,
    values: Vec<f64>,
    /// Number of non-base atoms.
    d: usize,
    terms: Vec<Term>,
    alpha: f64,
    up_closed: bool,
    scan_step: f64,
}

impl Problem {
    fn new(upper: &UpperSet, support: &SupportSet, alpha: f64, cfg: &OracleConfig, omega: &[Sample]) -> Result<Self> {
        let grid = upper.base.grid();
        let atoms = support.to_vec();
        if let Some(&bad) = atoms.iter().find(|&&i| i >= grid.m()) {
            return Err(Error::IndexOutOfRange { index: bad, m: grid.m() });
        }
        let mut pos = vec![usize::MAX; grid.m()];
        for (k, &a) in atoms.iter().enumerate() {
            pos[a] = k;
        }
        let n = upper.base.n();
        let terms = upper
            .members
            .iter()
            .filter(|y| y.indices().iter().all(|&j| pos[j] != usize::MAX))
            .map(|y| {
                let mut full = vec![0usize; atoms.len()];
                for &j in y.indices() {
                    full[pos[j]] += 1;
                }
                Term { coef: multinomial(&full), lifted: n - full[0], counts: full[1..].to_vec() }
            })
            .collect();
        Ok(Self {
            m: grid.m(),
            n,
            values: atoms.iter().map(|&a| grid.point_unchecked(a)).collect(),
            d: atoms.len() - 1,
            atoms,
            terms,
            alpha,
            up_closed: upper.is_up_closed(omega),
            scan_step: cfg.resolution,
        })
    }

    fn prob_at_base(&self) -> f64 {
        self.terms.iter().filter(|t| t.lifted == 0).map(|t| t.coef).sum()
    }

    fn base_candidate(&self) -> Candidate {
        let w = vec![0.0; self.d];
        let mut c = Candidate { value: self.values[0], t: 0.0, w, mass: Vec::new() };
        c.mass = self.masses(&c);
        c
    }

    fn masses(&self, c: &Candidate) -> Vec<f64> {
        let mut mass = vec![0.0; self.m];
        mass[self.atoms[0]] = 1.0 - c.t;
        for (j, &wj) in c.w.iter().enumerate() {
            mass[self.atoms[j + 1]] = c.t * wj;
        }
        mass
    }

    /// Best feasible point on the ray towards direction `w`, if any.
    fn eval(&self, w: Vec<f64>) -> Option<Candidate> {
        let mut beta = vec![0.0; self.n + 1];
        for term in &self.terms {
            let mut v = term.coef;
            for (&c, &wj) in term.counts.iter().zip(&w) {
                if c > 0 {
                    v *= wj.powi(c as i32);
                }
            }
            beta[term.lifted] += v;
        }
        let n = self.n;
        let prob = |t: f64| -> f64 {
            let s = 1.0 - t;
            beta.iter()
                .enumerate()
                .filter(|(_, b)| **b != 0.0)
                .map(|(a, b)| b * t.powi(a as i32) * s.powi((n - a) as i32))
                .sum()
        };
        let feasible = |t: f64| prob(t) >= self.alpha;

        let (mut lo, mut hi) = if self.up_closed {
            if !feasible(1.0) {
                return None;
            }
            (0.0, 1.0)
        } else {
            let steps = (1.0 / self.scan_step).ceil() as usize;
            let first = (1..=steps).find(|&k| feasible((k as f64 * self.scan_step).min(1.0)))?;
            ((first - 1) as f64 * self.scan_step, (first as f64 * self.scan_step).min(1.0))
        };
        for _ in 0..BISECT_ITERS {
            let mid = lo + (hi - lo) / 2.0;
            if mid <= lo || mid >= hi {
                break;
            }
            if feasible(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let lift: f64 = w.iter().zip(&self.values[1..]).map(|(wj, v)| wj * (v - self.values[0])).sum();
        let mut c = Candidate { value: self.values[0] + hi * lift, t: hi, w, mass: Vec::new() };
        c.mass = self.masses(&c);
        Some(c)
    }

    /// Steepest-descent moves of size `h` between pairs of direction weights.
    fn polish(&self, mut cur: Candidate, h: f64) -> Candidate {
        for _ in 0..MAX_LOCAL_MOVES {
            let mut best: Option<Candidate> = None;
            for from in 0..self.d {
                if cur.w[from] <= 0.0 {
                    continue;
                }
                let amount = h.min(cur.w[from]);
                for to in 0..self.d {
                    if to == from {
                        continue;
                    }
                    let mut w = cur.w.clone();
                    w[to] += amount;
                    w[from] = if amount == cur.w[from] { 0.0 } else { w[from] - amount };
                    let total: f64 = w.iter().sum();
                    w.iter_mut().for_each(|v| *v /= total);
                    if let Some(c) = self.eval(w) {
                        let better_than = best.as_ref().unwrap_or(&cur);
                        if Candidate::cmp_key(&c, better_than) == Ordering::Less {
                            best = Some(c);
                        }
                    }
                }
            }
            match best {
                Some(c) => cur = c,
                None => break,
            }
        }
        cur
    }
}
