//! Mass transfer onto an augmented support preserves upper-set probabilities,
//! so the oracle may search the smaller support.
//!
//! cargo run --example support_refinement

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use preorder_bounds::dist::transfer_to_augmented;
use preorder_bounds::harness::random_distribution;
use preorder_bounds::oracle::{pessimal_bound_oracle, refined_support};
use preorder_bounds::orders::{enumerate_omega, upper_set};
use preorder_bounds::{OracleConfig, PreorderKind, Result, Sample, SupportGrid, SupportSet};

fn main() -> Result<()> {
    let grid = SupportGrid::unit(5)?;
    let x = Sample::from_indices(grid, vec![1, 1, 2])?;
    let omega = enumerate_omega(&grid, 3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g = random_distribution(grid, &mut rng);

    for order in [PreorderKind::LexiLow, PreorderKind::Quantile(2)] {
        let c = match &order {
            PreorderKind::Quantile(i) => SupportSet::new([x.order_stat(*i)?], &grid)?,
            _ => SupportSet::new(x.distinct_indices(), &grid)?,
        };
        let h = transfer_to_augmented(&g, &c)?;
        let u = upper_set(&x, &order, &omega)?;
        println!("{} with C = {:?}, C+ = {:?}", order.label(), c.to_vec(), c.augment(&grid).to_vec());
        println!("  G = {:.3?}\n  H = {:.3?}", g.mass(), h.mass());
        println!("  P_G = {:.15}  P_H = {:.15}", g.prob_upper_set(&u)?, h.prob_upper_set(&u)?);

        let cfg = OracleConfig::default();
        let refined = pessimal_bound_oracle(&x, &order, 0.2, &cfg)?;
        let full = pessimal_bound_oracle(
            &x,
            &order,
            0.2,
            &OracleConfig { support_override: Some(SupportSet::full(&grid)), ..cfg },
        )?;
        println!(
            "  oracle on {:?}: {:.6}   on the full grid: {:.6}",
            refined_support(&x, &order)?.to_vec(),
            refined.value,
            full.value
        );
    }
    Ok(())
}
