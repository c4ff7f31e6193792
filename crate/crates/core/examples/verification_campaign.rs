//! Runs every structural check at the default scale and prints the reports.
//!
//! cargo run --example verification_campaign

use preorder_bounds::harness::{run_campaign, CampaignConfig};

fn main() -> preorder_bounds::Result<()> {
    let reports = run_campaign(&CampaignConfig::default())?;
    for r in &reports {
        let status = if r.passed() { "ok" } else { "FAILED" };
        println!("{:<28} {:>6} checks  {status}", r.theorem, r.instances_checked);
        for f in &r.failures {
            println!("    {f}");
        }
    }
    if reports.iter().any(|r| !r.passed()) {
        std::process::exit(1);
    }
    Ok(())
}
