//! Exact and Monte Carlo coverage of several bounds under one distribution.
//!
//! cargo run --example coverage

use preorder_bounds::harness::{exact_coverage, mc_coverage, BoundMethod};
use preorder_bounds::{Distribution, OracleConfig, OrderSelector, Result, SupportGrid, TailConvention};

fn main() -> Result<()> {
    let grid = SupportGrid::unit(4)?;
    let f = Distribution::new(grid, vec![0.3, 0.1, 0.2, 0.4])?;
    let (n, alpha) = (3, 0.1);
    let methods = [
        BoundMethod::Trivial,
        BoundMethod::Quantile { i: 2, alpha, epsilon: 1e-6, tail: TailConvention::default() },
        BoundMethod::Oracle { order: OrderSelector::LexiLow, alpha, config: OracleConfig::default() },
        BoundMethod::Oracle { order: OrderSelector::LexiHigh, alpha, config: OracleConfig::default() },
    ];
    println!("F = {:?}, mean {:.3}, n = {n}, target coverage {}", f.mass(), f.mean(), 1.0 - alpha);
    for method in &methods {
        let exact = exact_coverage(&f, method, n)?;
        let mc = mc_coverage(&f, method, n, 20_000, 1)?;
        println!("{:<24} exact {:.4}  monte carlo {:.4}", exact.method, exact.coverage, mc.coverage);
    }
    Ok(())
}
