//! Evenly spaced support grids and samples drawn from them.
//!
//! A [`Sample`] stores grid indices rather than reals, sorted non-decreasing,
//! so that `x_(i)` is `indices()[i - 1]` and equality of support values is
//! integer equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Relative tolerance used when resolving a real value to a grid index.
const ON_GRID_RTOL: f64 = 1e-9;

/// `m` evenly spaced points from `s_min` to `s_max` inclusive.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SupportGrid {
    s_min: f64,
    s_max: f64,
    m: usize,
}

impl SupportGrid {
    pub fn new(s_min: f64, s_max: f64, m: usize) -> Result<Self> {
        if !s_min.is_finite() || !s_max.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "endpoints must be finite, got [{s_min}, {s_max}]"
            )));
        }
        if s_min >= s_max {
            return Err(Error::InvalidGrid(format!(
                "s_min must be below s_max, got [{s_min}, {s_max}]"
            )));
        }
        if m < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got m = {m}")));
        }
        Ok(Self { s_min, s_max, m })
    }

    /// The unit grid `{0, 1/(m-1), ..., 1}`.
    pub fn unit(m: usize) -> Result<Self> {
        Self::new(0.0, 1.0, m)
    }

    pub fn s_min(&self) -> f64 {
        self.s_min
    }

    pub fn s_max(&self) -> f64 {
        self.s_max
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn range(&self) -> f64 {
        self.s_max - self.s_min
    }

    /// Distance between neighbouring support points.
    pub fn spacing(&self) -> f64 {
        self.range() / (self.m - 1) as f64
    }

    pub fn point(&self, i: usize) -> Result<f64> {
        if i >= self.m {
            return Err(Error::IndexOutOfRange { index: i, m: self.m });
        }
        Ok(self.point_unchecked(i))
    }

    pub(crate) fn point_unchecked(&self, i: usize) -> f64 {
        // The top point is pinned so that point(m-1) - point(0) == s_max - s_min.
        if i + 1 == self.m {
            self.s_max
        } else {
            self.s_min + i as f64 * self.range() / (self.m - 1) as f64
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.m).map(|i| self.point_unchecked(i)).collect()
    }

    /// Largest absolute support value.
    pub fn max_abs(&self) -> f64 {
        self.s_min.abs().max(self.s_max.abs())
    }

    /// Resolves `value` to the index of the grid point it sits on.
    pub fn index_of(&self, value: f64) -> Result<usize> {
        if !value.is_finite() {
            return Err(Error::OffGrid(value));
        }
        let pos = ((value - self.s_min) / self.spacing()).round();
        if pos < 0.0 || pos > (self.m - 1) as f64 {
            return Err(Error::OffGrid(value));
        }
        let index = pos as usize;
        let scale = self.max_abs().max(self.range());
        if (self.point_unchecked(index) - value).abs() > ON_GRID_RTOL * scale {
            return Err(Error::OffGrid(value));
        }
        Ok(index)
    }

    fn key(&self) -> (u64, u64, usize) {
        (self.s_min.to_bits(), self.s_max.to_bits(), self.m)
    }
}

impl PartialEq for SupportGrid {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for SupportGrid {}

impl Hash for SupportGrid {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl fmt::Display for SupportGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] with m = {}", self.s_min, self.s_max, self.m)
    }
}

/// An n-sample in canonical order-statistic form.
#[derive(Debug, Clone)]
pub struct Sample {
    grid: SupportGrid,
    idx: Vec<usize>,
}

impl Sample {
    /// Builds a sample from grid indices in any order.
    pub fn from_indices(grid: SupportGrid, mut idx: Vec<usize>) -> Result<Self> {
        if idx.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= grid.m()) {
            return Err(Error::IndexOutOfRange { index: bad, m: grid.m() });
        }
        idx.sort_unstable();
        Ok(Self { grid, idx })
    }

    /// Builds a sample from real values, each of which must sit on the grid.
    pub fn from_values(grid: SupportGrid, values: &[f64]) -> Result<Self> {
        let idx = values
            .iter()
            .map(|&v| grid.index_of(v))
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(grid, idx)
    }

    /// Parses either a JSON array of numbers or comma-separated values.
    pub fn parse(grid: SupportGrid, text: &str) -> Result<Self> {
        let text = text.trim();
        let values: Vec<f64> = if text.starts_with('[') {
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?
        } else {
            text.split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
                })
                .collect::<Result<_>>()?
        };
        Self::from_values(grid, &values)
    }

    /// The homogeneous sample `(S_i, ..., S_i)` of length `n`.
    pub fn homogeneous(grid: SupportGrid, i: usize, n: usize) -> Result<Self> {
        if i >= grid.m() {
            return Err(Error::IndexOutOfRange { index: i, m: grid.m() });
        }
        if n == 0 {
            return Err(Error::EmptySample);
        }
        Ok(Self { grid, idx: vec![i; n] })
    }

    pub fn grid(&self) -> &SupportGrid {
        &self.grid
    }

    pub fn n(&self) -> usize {
        self.idx.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.idx
    }

    /// Grid index of the `i`-th smallest component (1-based).
    pub fn order_stat(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.n() {
            return Err(Error::QuantileIndex { i, n: self.n() });
        }
        Ok(self.idx[i - 1])
    }

    pub fn values(&self) -> Vec<f64> {
        self.idx.iter().map(|&i| self.grid.point_unchecked(i)).collect()
    }

    /// The common index if every component is equal.
    pub fn homogeneous_index(&self) -> Option<usize> {
        let first = self.idx[0];
        self.idx.iter().all(|&i| i == first).then_some(first)
    }

    /// Distinct grid indices, ascending.
    pub fn distinct_indices(&self) -> Vec<usize> {
        let mut d = self.idx.clone();
        d.dedup();
        d
    }

    /// Occurrence count of every grid index.
    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.grid.m()];
        for &i in &self.idx {
            c[i] += 1;
        }
        c
    }

    pub fn sample_mean(&self) -> f64 {
        self.values().iter().sum::<f64>() / self.n() as f64
    }

    pub(crate) fn check_compatible(&self, other: &Sample) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Mismatch(format!(
                "grids differ: {} vs {}",
                self.grid, other.grid
            )));
        }
        if self.n() != other.n() {
            return Err(Error::Mismatch(format!(
                "sample sizes differ: {} vs {}",
                self.n(),
                other.n()
            )));
        }
        Ok(())
    }

    /// Componentwise order on order statistics: `x_(i) <= y_(i)` for all i.
    pub fn leq_componentwise(&self, other: &Sample) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.leq_unchecked(other))
    }

    /// Strict variant: `x != y` and `x <= y`.
    pub fn lt_componentwise(&self, other: &Sample) -> Result<bool> {
        Ok(self.leq_componentwise(other)? && self.idx != other.idx)
    }

    pub(crate) fn leq_unchecked(&self, other: &Sample) -> bool {
        self.idx.iter().zip(&other.idx).all(|(a, b)| a <= b)
    }
}

impl PartialEq for Sample {
    fn eq(&self, other: &Self) -> bool {
        self.idx == other.idx && self.grid == other.grid
    }
}

impl Eq for Sample {}

impl Hash for Sample {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.grid.hash(state);
        self.idx.hash(state);
    }
}

impl PartialOrd for Sample {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical key: lexicographic on indices, grid as tie-breaker.
impl Ord for Sample {
    fn cmp(&self, other: &Self) -> Ordering {
        self.idx
            .cmp(&other.idx)
            .then_with(|| self.grid.key().cmp(&other.grid.key()))
    }
}

impl fmt::Display for Sample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values().iter().map(|v| format!("{v}")).collect();
        write!(f, "[{}]", vals.join(", "))
    }
}

impl Serialize for Sample {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.values().serialize(serializer)
    }
}
