//! Binary-search approximation of the quantile-preorder pessimal bound.
//!
//! The search runs over the two-atom family `H_p` that puts mass `p` on
//! `x_(i)` and `1 - p` on `S_min`. Under `H_p` the upper set of the i-th
//! quantile preorder is hit exactly when enough draws land on `x_(i)`, so its
//! probability is a binomial tail that increases with `p`. The result is
//! within `c + ε` of the exact bound, with `c` the grid spacing.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::check_alpha;
use crate::error::{Error, Result};
use crate::support::Sample;

/// Which binomial tail stands in for `P_{H_p}[Ω(x, R_i)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailConvention {
    /// At least `n - i + 1` draws on `x_(i)`: the exact event `Y_(i) >= x_(i)`
    /// when `x_(i)` is the i-th smallest component.
    #[default]
    OrderStatistic,
    /// At least `i` draws on `x_(i)`, i.e. `1 - Bin(i - 1; n, p)`. This is
    /// the exact event when order statistics are counted from the top.
    AtLeastI,
    /// `1 - Bin(n - i - 1; n, p)`, at least `n - i` draws.
    PaperLiteral,
}

impl TailConvention {
    /// Minimum number of draws on `x_(i)` that the event requires.
    pub fn required_hits(&self, i: usize, n: usize) -> i64 {
        match self {
            TailConvention::OrderStatistic => (n - i + 1) as i64,
            TailConvention::AtLeastI => i as i64,
            TailConvention::PaperLiteral => n as i64 - i as i64,
        }
    }
}

impl FromStr for TailConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "order-statistic" => Ok(TailConvention::OrderStatistic),
            "at-least-i" => Ok(TailConvention::AtLeastI),
            "paper-literal" => Ok(TailConvention::PaperLiteral),
            other => Err(Error::Parse(format!("unknown tail convention {other:?}"))),
        }
    }
}

impl fmt::Display for TailConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TailConvention::OrderStatistic => "order-statistic",
            TailConvention::AtLeastI => "at-least-i",
            TailConvention::PaperLiteral => "paper-literal",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantileBoundResult {
    /// Estimate of the critical mass `p*` on `x_(i)`.
    pub p_hat: f64,
    pub bound: f64,
    pub epsilon: f64,
    /// Grid spacing, the irreducible part of the approximation error.
    pub c: f64,
    /// Search threshold `ε / max(x_(i) - S_min, ε)`.
    pub delta: f64,
    pub iterations: u32,
    pub i: usize,
    pub n: usize,
    pub tail: TailConvention,
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}

/// `P[X <= k]` for `X ~ Binomial(n, p)`.
pub fn binom_cdf(k: i64, n: u64, p: f64) -> Result<f64> {
    check_p(p)?;
    if k < 0 {
        return Ok(0.0);
    }
    if k as u64 >= n {
        return Ok(1.0);
    }
    let k = k as u64;
    let q = 1.0 - p;
    // Sum whichever side of the mean is shorter and smaller.
    if (k as f64) < n as f64 * p {
        Ok((0..=k).map(|j| binom_pmf(j, n, p, q)).sum::<f64>().min(1.0))
    } else {
        let upper: f64 = (k + 1..=n).map(|j| binom_pmf(j, n, p, q)).sum();
        Ok((1.0 - upper).max(0.0))
    }
}

/// `P[X >= k]` for `X ~ Binomial(n, p)`.
pub fn binom_tail_at_least(k: i64, n: u64, p: f64) -> Result<f64> {
    Ok(1.0 - binom_cdf(k - 1, n, p)?)
}

/// Probability under `H_p` that a sample lands in the i-th quantile upper set.
pub fn tail_prob_v(i: usize, n: usize, p: f64, tail: TailConvention) -> Result<f64> {
    if i == 0 || i > n {
        return Err(Error::QuantileIndex { i, n });
    }
    binom_tail_at_least(tail.required_hits(i, n), n as u64, p)
}

/// Approximates `B*_{R_i}(x)` by bisection on the two-atom family.
pub fn quantile_bound(x: &Sample, i: usize, alpha: f64, epsilon: f64) -> Result<QuantileBoundResult> {
    quantile_bound_with(x, i, alpha, epsilon, TailConvention::default())
}

pub fn quantile_bound_with(
    x: &Sample,
    i: usize,
    alpha: f64,
    epsilon: f64,
    tail: TailConvention,
) -> Result<QuantileBoundResult> {
    check_alpha(alpha)?;
    if epsilon <= 0.0 || !epsilon.is_finite() {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    let n = x.n();
    let grid = x.grid();
    let atom = grid.point_unchecked(x.order_stat(i)?);
    let lift = atom - grid.s_min();
    let delta = epsilon / lift.max(epsilon);

    let (mut a, mut b) = (0.0_f64, 1.0_f64);
    let mut iterations = 0u32;
    while b - a > delta {
        let mid = a + (b - a) / 2.0;
        if tail_prob_v(i, n, mid, tail)? < alpha {
            a = mid;
        } else {
            b = mid;
        }
        iterations += 1;
    }
    let p_hat = a;
    Ok(QuantileBoundResult {
        p_hat,
        bound: grid.s_min() * (1.0 - p_hat) + atom * p_hat,
        epsilon,
        c: grid.spacing(),
        delta,
        iterations,
        i,
        n,
        tail,
    })
}

// Binomial pmf via Loader's saddle-point expansion, accurate to a few ulps
// in relative terms across the whole range.

fn ln_factorial_small(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `ln n! - ln(sqrt(2πn) (n/e)^n)`.
fn stirlerr(n: u64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    if n <= 15 {
        return ln_factorial_small(n) - (nf + 0.5) * nf.ln() + nf - 0.5 * (2.0 * PI).ln();
    }
    let nn = nf * nf;
    if n > 500 {
        (S0 - S1 / nn) / nf
    } else if n > 80 {
        (S0 - (S1 - S2 / nn) / nn) / nf
    } else if n > 35 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / nf
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / nf
    }
}

/// Deviance term `x ln(x / np) + np - x`, computed without cancellation.
fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let mut v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / np).ln() + np - x
    }
}

fn binom_pmf(x: u64, n: u64, p: f64, q: f64) -> f64 {
    if p == 0.0 {
        return if x == 0 { 1.0 } else { 0.0 };
    }
    if q == 0.0 {
        return if x == n { 1.0 } else { 0.0 };
    }
    let nf = n as f64;
    if x == 0 {
        let lc = if p < 0.1 { -bd0(nf, nf * q) - nf * p } else { nf * q.ln() };
        return lc.exp();
    }
    if x == n {
        let lc = if q < 0.1 { -bd0(nf, nf * p) - nf * q } else { nf * p.ln() };
        return lc.exp();
    }
    let xf = x as f64;
    let lc = stirlerr(n) - stirlerr(x) - stirlerr(n - x) - bd0(xf, nf * p) - bd0(nf - xf, nf * q);
    let lf = (2.0 * PI).ln() + xf.ln() + (-xf / nf).ln_1p();
    (lc - 0.5 * lf).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::optimal_pointwise_homogeneous;
    use crate::support::SupportGrid;
    use proptest::prelude::*;
    use statrs::distribution::{Binomial, DiscreteCDF};

    /// Plain summation with multiplicatively built coefficients; fine for small n.
    fn direct_cdf(k: i64, n: u64, p: f64) -> f64 {
        let mut total = 0.0;
        for j in 0..=k.min(n as i64).max(-1) {
            let j = j as u64;
            let mut c = 1.0;
            for t in 0..j {
                c = c * (n - t) as f64 / (t + 1) as f64;
            }
            total += c * p.powi(j as i32) * (1.0 - p).powi((n - j) as i32);
        }
        total
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(binom_cdf(5, 5, 0.3).unwrap(), 1.0);
        assert_eq!(binom_cdf(-1, 5, 0.3).unwrap(), 0.0);
        assert!((binom_cdf(1, 2, 0.5).unwrap() - 0.75).abs() < 1e-15);
        assert!(binom_cdf(1, 2, 1.5).is_err());
        assert!(binom_cdf(1, 2, -0.01).is_err());
        assert_eq!(binom_cdf(0, 4, 0.0).unwrap(), 1.0);
        assert_eq!(binom_cdf(3, 4, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn cdf_matches_direct_summation() {
        for n in 1..=40u64 {
            for k in -1..=n as i64 {
                for &p in &[1e-6, 0.01, 0.1, 0.3, 0.5, 0.77, 0.99, 1.0 - 1e-9] {
                    let got = binom_cdf(k, n, p).unwrap();
                    let want = direct_cdf(k, n, p);
                    assert!((got - want).abs() < 1e-13, "k={k} n={n} p={p}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn cdf_matches_statrs_at_large_n() {
        for &n in &[100u64, 1000, 5000, 10_000] {
            for &p in &[0.001, 0.1, 0.5, 0.9] {
                let b = Binomial::new(p, n).unwrap();
                let mean = (n as f64 * p) as i64;
                let sd = (n as f64 * p * (1.0 - p)).sqrt() as i64 + 1;
                for k in (mean - 6 * sd).max(0)..=(mean + 6 * sd).min(n as i64) {
                    let got = binom_cdf(k, n, p).unwrap();
                    let want = b.cdf(k as u64);
                    // statrs itself is only good to a few 1e-12 here.
                    assert!((got - want).abs() < 1e-10, "k={k} n={n} p={p}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn cdf_matches_high_precision_references() {
        // 60-digit summations.
        let cases = [
            (4, 5000, 0.001, 0.44040550309094832997),
            (3, 10000, 0.0005, 0.26495571196784879048),
            (5000, 10000, 0.5, 0.50398932306969107688),
            (4950, 10000, 0.5, 0.16108709989765598689),
            (899, 1000, 0.9, 0.47340091870483486938),
            (95, 1000, 0.1, 0.32155407664562636536),
            (120, 1000, 0.1, 0.98274276947337993127),
            (30, 100, 0.3, 0.54912360076879044367),
            (9990, 10000, 0.999, 0.54213287602098149432),
            (50, 10000, 0.01, 2.1122399326323813463e-8),
        ];
        for (k, n, p, want) in cases {
            let got = binom_cdf(k, n, p).unwrap();
            assert!((got - want).abs() < 1e-13, "k={k} n={n} p={p}: {got} vs {want}");
        }
    }

    #[test]
    fn tail_examples() {
        for &p in &[0.0, 0.3, 1.0] {
            assert!((tail_prob_v(1, 1, p, TailConvention::OrderStatistic).unwrap() - p).abs() < 1e-15);
            assert!((tail_prob_v(1, 1, p, TailConvention::AtLeastI).unwrap() - p).abs() < 1e-15);
        }
        for n in 1..6 {
            assert_eq!(tail_prob_v(n, n, 1.0, TailConvention::AtLeastI).unwrap(), 1.0);
            assert_eq!(tail_prob_v(n, n, 1.0, TailConvention::OrderStatistic).unwrap(), 1.0);
        }
        // Two draws, p = 1/2: "both on x_(i)" is 1/4; "at least one" is 3/4.
        assert!((tail_prob_v(2, 2, 0.5, TailConvention::AtLeastI).unwrap() - 0.25).abs() < 1e-15);
        assert!((tail_prob_v(2, 2, 0.5, TailConvention::OrderStatistic).unwrap() - 0.75).abs() < 1e-15);
        assert!((tail_prob_v(1, 2, 0.5, TailConvention::OrderStatistic).unwrap() - 0.25).abs() < 1e-15);
        // n - i hits for the literal form: i = 1, n = 3 needs two of three.
        let lit = tail_prob_v(1, 3, 0.5, TailConvention::PaperLiteral).unwrap();
        assert!((lit - 0.5).abs() < 1e-15);
        assert!(tail_prob_v(0, 3, 0.5, TailConvention::OrderStatistic).is_err());
        assert!(tail_prob_v(4, 3, 0.5, TailConvention::OrderStatistic).is_err());
    }

    #[test]
    fn tail_matches_enumeration_over_two_atoms() {
        use crate::dist::Distribution;
        use crate::orders::{enumerate_omega, upper_set, PreorderKind};
        let g = SupportGrid::unit(4).unwrap();
        for n in 1..=4 {
            let omega = enumerate_omega(&g, n).unwrap();
            for &p in &[0.1, 0.45, 0.8] {
                let f = Distribution::new(g, vec![1.0 - p, 0.0, p, 0.0]).unwrap();
                for i in 1..=n {
                    // Any sample whose i-th order statistic sits on index 2.
                    let mut idx = vec![0; n];
                    for v in &mut idx[i - 1..] {
                        *v = 2;
                    }
                    let x = Sample::from_indices(g, idx).unwrap();
                    let u = upper_set(&x, &PreorderKind::Quantile(i), &omega).unwrap();
                    let exact = f.prob_upper_set(&u).unwrap();
                    let tail = tail_prob_v(i, n, p, TailConvention::OrderStatistic).unwrap();
                    assert!((exact - tail).abs() < 1e-14, "n={n} i={i} p={p}");
                }
            }
        }
    }

    #[test]
    fn bound_examples() {
        let g = SupportGrid::unit(2).unwrap();
        let x = Sample::from_indices(g, vec![1]).unwrap();
        let r = quantile_bound(&x, 1, 0.05, 1e-4).unwrap();
        assert!((r.p_hat - 0.05).abs() <= r.delta);
        assert!((r.bound - 0.05).abs() <= 1e-4);

        let x0 = Sample::from_indices(g, vec![0, 1]).unwrap();
        let r = quantile_bound(&x0, 1, 0.3, 1e-4).unwrap();
        assert_eq!(r.bound, 0.0);
        assert_eq!(r.iterations, 0);

        let x = Sample::homogeneous(g, 1, 2).unwrap();
        let r = quantile_bound_with(&x, 2, 0.25, 1e-4, TailConvention::AtLeastI).unwrap();
        assert!((r.p_hat - 0.5).abs() <= r.delta);
        let r = quantile_bound(&x, 1, 0.25, 1e-4).unwrap();
        assert!((r.bound - 0.5).abs() <= 1e-4);
        let r = quantile_bound(&x, 2, 0.25, 1e-4).unwrap();
        assert!((r.p_hat - (1.0 - 0.75f64.sqrt())).abs() <= r.delta);

        assert!(quantile_bound(&x, 3, 0.25, 1e-4).is_err());
        assert!(quantile_bound(&x, 1, 0.25, 0.0).is_err());
        assert!(quantile_bound(&x, 1, 1.0, 1e-4).is_err());
    }

    #[test]
    fn bound_on_shifted_grid_keeps_the_floor_term() {
        let g = SupportGrid::new(-1.0, 1.0, 3).unwrap();
        let x = Sample::homogeneous(g, 2, 3).unwrap();
        let r = quantile_bound(&x, 1, 0.1, 1e-6).unwrap();
        let exact = optimal_pointwise_homogeneous(&g, 2, 3, 0.1).unwrap();
        assert!((r.bound - exact).abs() <= r.delta * 2.0 + 1e-9);
        assert!((r.bound - (-1.0 + 2.0 * r.p_hat)).abs() < 1e-15);
    }

    #[test]
    fn iteration_count_is_logarithmic() {
        let g = SupportGrid::new(0.0, 10.0, 11).unwrap();
        for &eps in &[1e-1, 1e-3, 1e-6, 1e-9] {
            for j in 1..11 {
                let x = Sample::homogeneous(g, j, 3).unwrap();
                let r = quantile_bound(&x, 2, 0.2, eps).unwrap();
                assert!(r.iterations as f64 <= (1.0 / r.delta).log2().ceil() + 1.0);
                assert!(r.delta * (g.point(j).unwrap() - g.s_min()) <= eps * (1.0 + 1e-12));
            }
        }
    }

    proptest! {
        #[test]
        fn tail_is_monotone_in_p(n in 1usize..50, i_frac in 0.0f64..1.0, p in 0.0f64..1.0, q in 0.0f64..1.0) {
            let i = 1 + ((n - 1) as f64 * i_frac) as usize;
            let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
            for tail in [TailConvention::OrderStatistic, TailConvention::AtLeastI] {
                let a = tail_prob_v(i, n, lo, tail).unwrap();
                let b = tail_prob_v(i, n, hi, tail).unwrap();
                prop_assert!(a <= b + 1e-14);
            }
        }

        #[test]
        fn search_brackets_the_critical_mass(
            n in 1usize..12,
            i_frac in 0.0f64..1.0,
            alpha in 0.0f64..0.99,
            eps in 1e-8f64..1e-2,
        ) {
            let i = 1 + ((n - 1) as f64 * i_frac) as usize;
            let g = SupportGrid::unit(5).unwrap();
            let x = Sample::homogeneous(g, 3, n).unwrap();
            let r = quantile_bound(&x, i, alpha, eps).unwrap();
            let t = |p: f64| tail_prob_v(i, n, p.clamp(0.0, 1.0), TailConvention::OrderStatistic).unwrap();
            prop_assert!(t(r.p_hat + r.delta) >= alpha);
            prop_assert!(r.p_hat <= r.delta || t(r.p_hat - r.delta) <= alpha);
            let atom = g.point(3).unwrap();
            prop_assert!((r.bound - atom * r.p_hat).abs() < 1e-15);
        }
    }

    #[test]
    fn top_quantile_follows_the_max() {
        // i = n: the upper set is "max reaches x_(n)", so p* = 1 - (1 - α)^{1/n}.
        let g = SupportGrid::unit(3).unwrap();
        for n in 1..=6 {
            for &alpha in &[0.01, 0.1, 0.5] {
                let x = Sample::homogeneous(g, 2, n).unwrap();
                let r = quantile_bound(&x, n, alpha, 1e-8).unwrap();
                let p_star = 1.0 - (1.0 - alpha).powf(1.0 / n as f64);
                assert!((r.p_hat - p_star).abs() <= r.delta + 1e-12);
                let r = quantile_bound(&x, 1, alpha, 1e-8).unwrap();
                assert!((r.p_hat - alpha.powf(1.0 / n as f64)).abs() <= r.delta + 1e-12);
            }
        }
    }
}
