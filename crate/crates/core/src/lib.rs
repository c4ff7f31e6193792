//! Lower confidence bounds on the mean of a discrete bounded distribution
//! that respect an order or preorder on samples.
//!
//! Values live on an equally spaced grid `S_0 < ... < S_{m-1}`. A bound is
//! valid at level `1 - α` when, for every distribution `F` on the grid, a
//! sample of `n` draws from `F` yields a bound at or below `E[F]` with
//! probability at least `1 - α`. The pessimal bound of a preorder `R` at a
//! sample `x` is the smallest mean among distributions that put probability
//! at least `α` on the upper set `{y : x ≲_R y}`.
//!
//! The crate provides:
//!
//! * closed forms at homogeneous samples ([`closedform`]),
//! * a binary-search approximation for quantile preorders ([`quantile_approx`]),
//! * a brute-force pessimal-bound solver used as ground truth ([`oracle`]),
//! * coverage evaluation and theorem-level checks ([`harness`]).
//!
//! ```
//! use preorder_bounds::{closedform, SupportGrid};
//!
//! let grid = SupportGrid::unit(2).unwrap();
//! let b = closedform::optimal_pointwise_homogeneous(&grid, 1, 2, 0.25).unwrap();
//! assert_eq!(b, 0.5);
//! ```

pub mod closedform;
pub mod dist;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod orders;
pub mod quantile_approx;
pub mod support;

pub use dist::{Distribution, SupportSet};
pub use error::{Error, Result};
pub use oracle::{OracleConfig, OracleResult};
pub use orders::{OrderSelector, PreorderKind, RankTable, UpperSet};
pub use quantile_approx::{QuantileBoundResult, TailConvention};
pub use support::{Sample, SupportGrid};

/// Version tag carried by every JSON report.
pub const SCHEMA_VERSION: &str = "1";

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && (0.0..1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}
