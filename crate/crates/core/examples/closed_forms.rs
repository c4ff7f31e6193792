//! Closed-form bounds at homogeneous samples and the lexi-high bracket.
//!
//! cargo run --example closed_forms

use preorder_bounds::closedform::{lexi_high_homogeneous_bracket, lexi_low_homogeneous, optimal_pointwise_homogeneous};
use preorder_bounds::{Result, SupportGrid};

fn main() -> Result<()> {
    let grid = SupportGrid::unit(5)?;
    let (n, alpha) = (3, 0.05);
    println!("grid {grid}, n = {n}, alpha = {alpha}");
    println!("{:>3} {:>8} {:>10} {:>10} {:>21}", "i", "S_i", "pointwise", "lexi-low", "lexi-high bracket");
    for i in 0..grid.m() {
        let pw = optimal_pointwise_homogeneous(&grid, i, n, alpha)?;
        let ll = lexi_low_homogeneous(&grid, i, n, alpha)?;
        let br = match lexi_high_homogeneous_bracket(&grid, i, n, alpha) {
            Ok(b) => format!("[{:.4}, {:.4}]{}", b.lo, b.hi, if b.top_index { "*" } else { "" }),
            Err(_) => "-".into(),
        };
        println!("{i:>3} {:>8.3} {pw:>10.4} {ll:>10.4} {br:>21}", grid.point(i)?);
    }
    println!("* top index: hi is the exact value for the singleton upper set");
    Ok(())
}
