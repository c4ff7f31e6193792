//! Total orders and preorders on the sample space.
//!
//! Every comparator returns [`Ordering::Equal`] for equivalent samples, so a
//! total order is one that never reports `Equal` for distinct samples.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::support::{Sample, SupportGrid};

/// Largest sample space `enumerate_omega` will materialize.
pub const ENUMERATION_LIMIT: u128 = 1_000_000;

/// Largest sample space whose linear extensions are enumerated.
pub const EXTENSION_LIMIT: usize = 8;

/// Explicit ranking of samples; equal ranks form an equivalence class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    ranks: BTreeMap<Sample, i64>,
}

impl RankTable {
    pub fn from_ranks<I: IntoIterator<Item = (Sample, i64)>>(ranks: I) -> Self {
        Self { ranks: ranks.into_iter().collect() }
    }

    /// Ranks samples by their position in `sequence` (first is lowest).
    pub fn from_sequence(sequence: &[Sample]) -> Self {
        Self::from_ranks(sequence.iter().cloned().zip(0..))
    }

    pub fn rank(&self, x: &Sample) -> Option<i64> {
        self.ranks.get(x).copied()
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Samples from lowest to highest rank.
    pub fn sequence(&self) -> Vec<Sample> {
        let mut v: Vec<_> = self.ranks.iter().collect();
        v.sort_by(|a, b| a.1.cmp(b.1).then_with(|| a.0.cmp(b.0)));
        v.into_iter().map(|(s, _)| s.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PreorderKind {
    /// Compare order statistics from the smallest upward.
    LexiLow,
    /// Compare order statistics from the largest downward.
    LexiHigh,
    /// Compare only the i-th smallest order statistic (1-based).
    Quantile(usize),
    /// Two classes: the given sample on top, everything else equivalent below.
    Pointwise(Sample),
    CustomTable(RankTable),
}

impl PreorderKind {
    pub fn compare(&self, x: &Sample, y: &Sample) -> Result<Ordering> {
        x.check_compatible(y)?;
        let (a, b) = (x.indices(), y.indices());
        match self {
            PreorderKind::LexiLow => Ok(a.cmp(b)),
            PreorderKind::LexiHigh => Ok(a.iter().rev().cmp(b.iter().rev())),
            PreorderKind::Quantile(i) => Ok(x.order_stat(*i)?.cmp(&y.order_stat(*i)?)),
            PreorderKind::Pointwise(top) => {
                top.check_compatible(x)?;
                Ok((x == top).cmp(&(y == top)))
            }
            PreorderKind::CustomTable(table) => {
                let rank = |s: &Sample| {
                    table
                        .rank(s)
                        .ok_or_else(|| Error::Mismatch(format!("sample {s} missing from rank table")))
                };
                Ok(rank(x)?.cmp(&rank(y)?))
            }
        }
    }

    /// `x ≲ y`.
    pub fn le(&self, x: &Sample, y: &Sample) -> Result<bool> {
        Ok(self.compare(x, y)? != Ordering::Greater)
    }

    /// `x < y` strictly.
    pub fn lt(&self, x: &Sample, y: &Sample) -> Result<bool> {
        Ok(self.compare(x, y)? == Ordering::Less)
    }

    /// Whether this kind is a total order by construction.
    pub fn is_total_by_construction(&self) -> bool {
        matches!(self, PreorderKind::LexiLow | PreorderKind::LexiHigh)
    }

    pub fn label(&self) -> String {
        match self {
            PreorderKind::LexiLow => "lexi-low".into(),
            PreorderKind::LexiHigh => "lexi-high".into(),
            PreorderKind::Quantile(i) => format!("quantile:{i}"),
            PreorderKind::Pointwise(x) => format!("pointwise{x}"),
            PreorderKind::CustomTable(t) => format!("custom-table({} samples)", t.len()),
        }
    }
}

/// Order selector as written on the command line.
///
/// `pointwise` needs a sample to resolve; see [`OrderSelector::resolve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderSelector {
    LexiLow,
    LexiHigh,
    Quantile(usize),
    Pointwise,
}

impl OrderSelector {
    pub fn resolve(&self, x: &Sample) -> PreorderKind {
        match *self {
            OrderSelector::LexiLow => PreorderKind::LexiLow,
            OrderSelector::LexiHigh => PreorderKind::LexiHigh,
            OrderSelector::Quantile(i) => PreorderKind::Quantile(i),
            OrderSelector::Pointwise => PreorderKind::Pointwise(x.clone()),
        }
    }
}

impl FromStr for OrderSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "lexi-low" => Ok(OrderSelector::LexiLow),
            "lexi-high" => Ok(OrderSelector::LexiHigh),
            "pointwise" => Ok(OrderSelector::Pointwise),
            other => {
                let i = other
                    .strip_prefix("quantile:")
                    .ok_or_else(|| Error::Parse(format!("unknown order selector {other:?}")))?;
                let i: usize = i
                    .parse()
                    .map_err(|e| Error::Parse(format!("quantile index {i:?}: {e}")))?;
                if i == 0 {
                    return Err(Error::Parse("quantile index is 1-based".into()));
                }
                Ok(OrderSelector::Quantile(i))
            }
        }
    }
}

impl serde::Serialize for OrderSelector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for OrderSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderSelector::LexiLow => write!(f, "lexi-low"),
            OrderSelector::LexiHigh => write!(f, "lexi-high"),
            OrderSelector::Quantile(i) => write!(f, "quantile:{i}"),
            OrderSelector::Pointwise => write!(f, "pointwise"),
        }
    }
}

/// Number of n-multisets over m points, `C(m + n - 1, n)`, saturating.
pub fn omega_size(m: usize, n: usize) -> u128 {
    let (top, k) = ((m + n - 1) as u128, n.min(m - 1) as u128);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = match acc.checked_mul(top - j) {
            Some(v) => v / (j + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// All samples of size `n` on `grid`, in lexicographic index order.
pub fn enumerate_omega(grid: &SupportGrid, n: usize) -> Result<Vec<Sample>> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let m = grid.m();
    let count = omega_size(m, n);
    if count > ENUMERATION_LIMIT {
        return Err(Error::EnumerationLimit { count, limit: ENUMERATION_LIMIT });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut cur = vec![0usize; n];
    loop {
        out.push(Sample::from_indices(*grid, cur.clone())?);
        // Advance to the next non-decreasing sequence.
        let Some(pos) = cur.iter().rposition(|&v| v + 1 < m) else {
            break;
        };
        let next = cur[pos] + 1;
        for v in &mut cur[pos..] {
            *v = next;
        }
    }
    debug_assert_eq!(out.len() as u128, count);
    Ok(out)
}

fn check_omega(omega: &[Sample]) -> Result<()> {
    let Some(first) = omega.first() else {
        return Err(Error::Mismatch("empty sample space".into()));
    };
    let expected = omega_size(first.grid().m(), first.n());
    if omega.len() as u128 != expected {
        return Err(Error::Mismatch(format!(
            "sample space has {} samples, expected {expected}",
            omega.len()
        )));
    }
    for s in omega {
        first.check_compatible(s)?;
    }
    Ok(())
}

/// `Ω(x, R) = { y : x ≲_R y }`.
#[derive(Debug, Clone)]
pub struct UpperSet {
    pub base: Sample,
    pub order: PreorderKind,
    /// Sorted by the canonical sample order.
    pub members: Vec<Sample>,
}

impl UpperSet {
    pub fn contains(&self, y: &Sample) -> bool {
        self.members.binary_search(y).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subset_of(&self, other: &UpperSet) -> bool {
        self.members.iter().all(|y| other.contains(y))
    }

    /// True when every sample componentwise above a member is a member.
    pub fn is_up_closed(&self, omega: &[Sample]) -> bool {
        self.members.iter().all(|y| {
            omega
                .iter()
                .filter(|z| y.leq_unchecked(z))
                .all(|z| self.contains(z))
        })
    }
}

pub fn upper_set(x: &Sample, order: &PreorderKind, omega: &[Sample]) -> Result<UpperSet> {
    check_omega(omega)?;
    x.check_compatible(&omega[0])?;
    let mut members = Vec::new();
    for y in omega {
        if order.le(x, y)? {
            members.push(y.clone());
        }
    }
    members.sort();
    if members.binary_search(x).is_err() {
        return Err(Error::Mismatch(format!("sample {x} is not in the sample space")));
    }
    Ok(UpperSet { base: x.clone(), order: order.clone(), members })
}

/// `x ≤ y` componentwise implies `x ≲ y` under `order`, over all pairs.
pub fn is_monotone(order: &PreorderKind, omega: &[Sample]) -> Result<bool> {
    for x in omega {
        for y in omega {
            if x.leq_componentwise(y)? && !order.le(x, y)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether the total order `total` agrees with `pre`: `x <_pre y` implies `x <_total y`.
pub fn agrees(total: &PreorderKind, pre: &PreorderKind, omega: &[Sample]) -> Result<bool> {
    for (a, x) in omega.iter().enumerate() {
        for y in &omega[a + 1..] {
            if total.compare(x, y)? == Ordering::Equal {
                return Err(Error::NotTotal(format!("{x} and {y} are equivalent")));
            }
        }
    }
    for x in omega {
        for y in omega {
            if pre.lt(x, y)? && !total.lt(x, y)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Checks totality and transitivity of `order` over every pair and triple.
pub fn is_total_preorder(order: &PreorderKind, omega: &[Sample]) -> Result<bool> {
    let k = omega.len();
    let mut le = vec![false; k * k];
    for (a, x) in omega.iter().enumerate() {
        for (b, y) in omega.iter().enumerate() {
            let c = order.compare(x, y)?;
            if c != order.compare(y, x)?.reverse() {
                return Ok(false);
            }
            le[a * k + b] = c != Ordering::Greater;
        }
    }
    for a in 0..k {
        for b in 0..k {
            if !le[a * k + b] && !le[b * k + a] {
                return Ok(false);
            }
            if !le[a * k + b] {
                continue;
            }
            for c in 0..k {
                if le[b * k + c] && !le[a * k + c] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// All total orders on `omega` that extend the componentwise order.
///
/// Enumerated by repeatedly placing a sample whose componentwise
/// predecessors are all placed; results are in deterministic order.
pub fn monotone_linear_extensions(omega: &[Sample]) -> Result<Vec<RankTable>> {
    if omega.len() > EXTENSION_LIMIT {
        return Err(Error::EnumerationLimit {
            count: omega.len() as u128,
            limit: EXTENSION_LIMIT as u128,
        });
    }
    check_omega(omega)?;
    let k = omega.len();
    let preds: Vec<Vec<usize>> = (0..k)
        .map(|b| {
            (0..k)
                .filter(|&a| a != b && omega[a].leq_unchecked(&omega[b]))
                .collect()
        })
        .collect();

    fn extend(
        preds: &[Vec<usize>],
        placed: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if placed.len() == preds.len() {
            out.push(placed.clone());
            return;
        }
        for b in 0..preds.len() {
            if !used[b] && preds[b].iter().all(|&a| used[a]) {
                used[b] = true;
                placed.push(b);
                extend(preds, placed, used, out);
                placed.pop();
                used[b] = false;
            }
        }
    }

    let mut orders = Vec::new();
    extend(&preds, &mut Vec::with_capacity(k), &mut vec![false; k], &mut orders);
    Ok(orders
        .into_iter()
        .map(|seq| {
            let seq: Vec<Sample> = seq.into_iter().map(|i| omega[i].clone()).collect();
            RankTable::from_sequence(&seq)
        })
        .collect())
}

/// Whether two preorders induce the same upper set at every sample.
pub fn same_upper_sets(a: &PreorderKind, b: &PreorderKind, omega: &[Sample]) -> Result<bool> {
    for x in omega {
        let (ua, ub) = (upper_set(x, a, omega)?, upper_set(x, b, omega)?);
        if ua.members != ub.members {
            return Ok(false);
        }
    }
    Ok(true)
}
