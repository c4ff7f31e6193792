//! The sample space, the built-in orders and their upper sets.
//!
//! cargo run --example orders_and_upper_sets

use preorder_bounds::orders::{enumerate_omega, is_monotone, monotone_linear_extensions, upper_set};
use preorder_bounds::{PreorderKind, Result, Sample, SupportGrid};

fn main() -> Result<()> {
    let grid = SupportGrid::unit(3)?;
    let omega = enumerate_omega(&grid, 2)?;
    println!("Ω ({} samples): {}", omega.len(), omega.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" "));

    let x = Sample::from_indices(grid, vec![0, 2])?;
    for order in [PreorderKind::LexiLow, PreorderKind::LexiHigh, PreorderKind::Quantile(1), PreorderKind::Quantile(2)] {
        let u = upper_set(&x, &order, &omega)?;
        let mut sorted = omega.clone();
        sorted.sort_by(|a, b| order.compare(a, b).expect("same grid"));
        println!(
            "{:<11} monotone={}  ascending: {}  Ω({x}) has {} members",
            order.label(),
            is_monotone(&order, &omega)?,
            sorted.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" "),
            u.len()
        );
    }

    let ext = monotone_linear_extensions(&omega)?;
    println!("{} monotone linear extensions of the componentwise order:", ext.len());
    for t in ext {
        println!("  {}", t.sequence().iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" < "));
    }
    Ok(())
}
