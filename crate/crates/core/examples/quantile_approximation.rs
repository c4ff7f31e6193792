//! Binary-search approximation of the quantile-preorder bound, under each
//! binomial tail convention.
//!
//! cargo run --example quantile_approximation

use preorder_bounds::quantile_approx::{quantile_bound_with, tail_prob_v};
use preorder_bounds::{Result, Sample, SupportGrid, TailConvention};

fn main() -> Result<()> {
    let grid = SupportGrid::new(-1.0, 1.0, 9)?;
    let x = Sample::from_values(grid, &[-0.5, 0.25, 0.25, 0.75])?;
    let (alpha, eps) = (0.1, 1e-6);
    println!("x = {x}, alpha = {alpha}, epsilon = {eps}");
    for tail in [TailConvention::OrderStatistic, TailConvention::AtLeastI, TailConvention::PaperLiteral] {
        println!("{tail}:");
        for i in 1..=x.n() {
            let r = quantile_bound_with(&x, i, alpha, eps, tail)?;
            let at = tail_prob_v(i, x.n(), r.p_hat + r.delta, tail)?;
            println!(
                "  i = {i}: p_hat = {:.6}, bound = {:+.6}, {} iterations, P(p_hat + delta) = {at:.6}",
                r.p_hat, r.bound, r.iterations
            );
        }
    }
    Ok(())
}
