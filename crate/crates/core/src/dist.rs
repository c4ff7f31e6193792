//! Probability mass vectors on a support grid and i.i.d. sample probabilities.

use std::collections::BTreeSet;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::orders::UpperSet;
use crate::support::{Sample, SupportGrid};

/// Absolute tolerance on total mass.
pub const MASS_TOL: f64 = 1e-12;
/// Absolute tolerance for pmf and cdf comparisons.
pub const AGREE_TOL: f64 = 1e-12;
/// Mass at or below this counts as zero for support membership.
pub const ZERO_MASS: f64 = 1e-15;

/// A point of the probability simplex over the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    grid: SupportGrid,
    mass: Vec<f64>,
}

impl Distribution {
    pub fn new(grid: SupportGrid, mass: Vec<f64>) -> Result<Self> {
        if mass.len() != grid.m() {
            return Err(Error::InvalidDistribution(format!(
                "expected {} masses, got {}",
                grid.m(),
                mass.len()
            )));
        }
        if let Some(bad) = mass.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidDistribution(format!("invalid mass {bad}")));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidDistribution(format!("masses sum to {total}")));
        }
        Ok(Self { grid, mass })
    }

    pub fn point_mass(grid: SupportGrid, i: usize) -> Result<Self> {
        if i >= grid.m() {
            return Err(Error::IndexOutOfRange { index: i, m: grid.m() });
        }
        let mut mass = vec![0.0; grid.m()];
        mass[i] = 1.0;
        Ok(Self { grid, mass })
    }

    pub fn uniform(grid: SupportGrid) -> Self {
        let m = grid.m();
        Self { grid, mass: vec![1.0 / m as f64; m] }
    }

    /// Loads a JSON array of `m` masses.
    pub fn from_json(grid: SupportGrid, text: &str) -> Result<Self> {
        let mass: Vec<f64> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(grid, mass)
    }

    pub fn grid(&self) -> &SupportGrid {
        &self.grid
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn pmf(&self, i: usize) -> f64 {
        self.mass[i]
    }

    /// `P[X <= S_i]`.
    pub fn cdf(&self, i: usize) -> f64 {
        self.mass[..=i].iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.mass
            .iter()
            .enumerate()
            .map(|(i, p)| p * self.grid.point_unchecked(i))
            .sum()
    }

    /// Probability that n i.i.d. draws sort to `x`.
    pub fn sample_prob(&self, x: &Sample) -> Result<f64> {
        if *x.grid() != self.grid {
            return Err(Error::Mismatch(format!(
                "sample grid {} differs from distribution grid {}",
                x.grid(),
                self.grid
            )));
        }
        Ok(multiset_prob(&x.counts(), &self.mass))
    }

    /// `P_F[U]`, summed over the members of the upper set.
    pub fn prob_upper_set(&self, upper: &UpperSet) -> Result<f64> {
        let mut total = 0.0;
        for y in &upper.members {
            total += self.sample_prob(y)?;
        }
        Ok(total.min(1.0))
    }

    /// Membership in the refinement `F_C`: no mass outside `c`.
    pub fn is_supported_on(&self, c: &SupportSet) -> bool {
        self.mass
            .iter()
            .enumerate()
            .all(|(i, p)| c.contains(i) || *p <= ZERO_MASS)
    }

    pub fn support(&self) -> SupportSet {
        SupportSet {
            indices: (0..self.grid.m()).filter(|&i| self.mass[i] > ZERO_MASS).collect(),
        }
    }
}

impl Serialize for Distribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.mass.serialize(serializer)
    }
}

/// Multinomial probability of occurrence counts under masses `p`.
pub(crate) fn multiset_prob(counts: &[usize], p: &[f64]) -> f64 {
    multinomial(counts)
        * counts
            .iter()
            .zip(p)
            .filter(|(c, _)| **c > 0)
            .map(|(&c, &q)| q.powi(c as i32))
            .product::<f64>()
}

/// `n! / prod(c_j!)` with `n = sum(c_j)`.
pub(crate) fn multinomial(counts: &[usize]) -> f64 {
    let mut coef = 1.0;
    let mut placed = 0usize;
    for &c in counts {
        for k in 1..=c {
            placed += 1;
            coef = coef * placed as f64 / k as f64;
        }
    }
    coef
}

/// A subset `C` of grid indices.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct SupportSet {
    indices: BTreeSet<usize>,
}

impl SupportSet {
    pub fn new<I: IntoIterator<Item = usize>>(indices: I, grid: &SupportGrid) -> Result<Self> {
        let indices: BTreeSet<usize> = indices.into_iter().collect();
        if let Some(&bad) = indices.iter().find(|&&i| i >= grid.m()) {
            return Err(Error::IndexOutOfRange { index: bad, m: grid.m() });
        }
        Ok(Self { indices })
    }

    pub fn full(grid: &SupportGrid) -> Self {
        Self { indices: (0..grid.m()).collect() }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.contains(&i)
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Ascending indices.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// `C⁺ = C ∪ {S_min} ∪ {successor of every non-maximal element of C}`.
    pub fn augment(&self, grid: &SupportGrid) -> SupportSet {
        let mut indices = self.indices.clone();
        indices.insert(0);
        for &i in &self.indices {
            if i + 1 < grid.m() {
                indices.insert(i + 1);
            }
        }
        SupportSet { indices }
    }
}

/// Pointwise and cumulative agreement on every index of `c`.
pub fn agree_on(g: &Distribution, h: &Distribution, c: &SupportSet) -> Result<bool> {
    if g.grid != h.grid {
        return Err(Error::Mismatch("distributions live on different grids".into()));
    }
    Ok(c.iter().all(|i| {
        (g.pmf(i) - h.pmf(i)).abs() <= AGREE_TOL && (g.cdf(i) - h.cdf(i)).abs() <= AGREE_TOL
    }))
}

/// Moves mass so the result lives on `C⁺` and agrees with `g` on `c`.
///
/// Mass below the smallest element of `c` goes to `S_min`; mass strictly
/// between consecutive elements (or above the largest) goes to the grid
/// successor of the lower element.
pub fn transfer_to_augmented(g: &Distribution, c: &SupportSet) -> Result<Distribution> {
    let m = g.grid.m();
    if let Some(bad) = c.iter().find(|&i| i >= m) {
        return Err(Error::IndexOutOfRange { index: bad, m });
    }
    let elems = c.to_vec();
    let Some(&first) = elems.first() else {
        return Distribution::point_mass(g.grid, 0);
    };
    let mut h = vec![0.0; m];
    h[0] += g.mass[..first].iter().sum::<f64>();
    for (k, &s) in elems.iter().enumerate() {
        h[s] += g.mass[s];
        let upper = elems.get(k + 1).copied().unwrap_or(m);
        if s + 1 < upper {
            h[s + 1] += g.mass[s + 1..upper].iter().sum::<f64>();
        }
    }
    Ok(Distribution { grid: g.grid, mass: h })
}

/// `|E[u] - E[v]| <= sqrt(m) * max|S_i| * ||u - v||_2`, with slack 1e-12.
pub fn mean_lipschitz_check(u: &Distribution, v: &Distribution) -> Result<bool> {
    if u.grid != v.grid {
        return Err(Error::Mismatch("distributions live on different grids".into()));
    }
    let l2 = u
        .mass
        .iter()
        .zip(&v.mass)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let lhs = (u.mean() - v.mean()).abs();
    Ok(lhs <= lipschitz_constant(&u.grid) * l2 + 1e-12)
}

pub fn lipschitz_constant(grid: &SupportGrid) -> f64 {
    (grid.m() as f64).sqrt() * grid.max_abs()
}
