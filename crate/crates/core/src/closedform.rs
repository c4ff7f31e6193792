//! Closed-form bound values at homogeneous samples `S_i = (S_i, ..., S_i)`.

use serde::Serialize;

use crate::check_alpha;
use crate::error::{Error, Result};
use crate::support::SupportGrid;

/// Interval known to contain the lexi-high pessimal bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    /// Set at `i = m - 1`, where `S_{i+1}` does not exist and `hi` is the
    /// exact value for the singleton upper set `{S_{m-1}}`.
    pub top_index: bool,
}

impl Bracket {
    pub fn contains(&self, value: f64, tol: f64) -> bool {
        value >= self.lo - tol && value <= self.hi + tol
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

fn check_args(grid: &SupportGrid, i: usize, n: usize, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if n == 0 {
        return Err(Error::EmptySample);
    }
    grid.point(i)
}

/// `S_min (1 - α^{1/n}) + S_i α^{1/n}`: the largest value any valid bound can
/// assign to the homogeneous sample `S_i`.
pub fn optimal_pointwise_homogeneous(
    grid: &SupportGrid,
    i: usize,
    n: usize,
    alpha: f64,
) -> Result<f64> {
    let s_i = check_args(grid, i, n, alpha)?;
    let root = alpha.powf(1.0 / n as f64);
    Ok(grid.s_min() * (1.0 - root) + s_i * root)
}

/// The low-lexicographic pessimal bound at `S_i`; it coincides with the
/// pointwise-optimal value.
pub fn lexi_low_homogeneous(grid: &SupportGrid, i: usize, n: usize, alpha: f64) -> Result<f64> {
    optimal_pointwise_homogeneous(grid, i, n, alpha)
}

/// Bracket around the high-lexicographic pessimal bound at `S_i`, `i >= 1`.
///
/// With `r = (1 - α)^{1/n}`: `lo = S_min r + S_i (1 - r)` and
/// `hi = S_min r + S_{i+1} (1 - r)`.
pub fn lexi_high_homogeneous_bracket(
    grid: &SupportGrid,
    i: usize,
    n: usize,
    alpha: f64,
) -> Result<Bracket> {
    let s_i = check_args(grid, i, n, alpha)?;
    if i == 0 {
        return Err(Error::Undefined("the lexi-high bracket needs i >= 1".into()));
    }
    let r = (1.0 - alpha).powf(1.0 / n as f64);
    let lo = grid.s_min() * r + s_i * (1.0 - r);
    if i + 1 == grid.m() {
        // Nothing ranks above S_{m-1}, so its upper set is the singleton.
        let hi = optimal_pointwise_homogeneous(grid, i, n, alpha)?;
        return Ok(Bracket { lo, hi, top_index: true });
    }
    let hi = grid.s_min() * r + grid.point_unchecked(i + 1) * (1.0 - r);
    Ok(Bracket { lo, hi, top_index: false })
}
