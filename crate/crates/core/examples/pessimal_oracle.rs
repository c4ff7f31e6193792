//! Brute-force pessimal bounds for every built-in order at one sample.
//!
//! cargo run --example pessimal_oracle -- 0.25,0.5,0.5

use preorder_bounds::oracle::{pessimal_bound_oracle, refined_support};
use preorder_bounds::{OracleConfig, PreorderKind, Result, Sample, SupportGrid};

fn main() -> Result<()> {
    let grid = SupportGrid::unit(5)?;
    let text = std::env::args().nth(1).unwrap_or_else(|| "0.25,0.5,0.5".into());
    let x = Sample::parse(grid, &text)?;
    let alpha = 0.1;
    let cfg = OracleConfig::default();

    let mut orders = vec![PreorderKind::LexiLow, PreorderKind::LexiHigh, PreorderKind::Pointwise(x.clone())];
    orders.extend((1..=x.n()).map(PreorderKind::Quantile));
    println!("x = {x}, alpha = {alpha}");
    for order in orders {
        let r = pessimal_bound_oracle(&x, &order, alpha, &cfg)?;
        println!(
            "{:<14} B* = {:.6}  P = {:.6}  support {:?}  witness {:?}",
            order.label(),
            r.value,
            r.constraint_prob,
            refined_support(&x, &order)?.to_vec(),
            r.witness.mass().iter().map(|p| (p * 1e4).round() / 1e4).collect::<Vec<_>>(),
        );
    }
    Ok(())
}
