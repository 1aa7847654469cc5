//! Bucket each agent's values with a few queries, hand the rounded valuation
//! to a full-information allocator and check the transferred guarantee.

use efx_lab::fullinfo::EnvyCycleBlackbox;
use efx_lab::harness::gen::{random_uniform, seeded_rng};
use efx_lab::query_enhanced::{query_ceiling, virtual_efx, virtual_efx_bound};
use efx_lab::{evaluate, QueryOracle};

fn main() -> efx_lab::Result<()> {
    let (n, m) = (4, 64);
    let inst = random_uniform(&mut seeded_rng(3), n, m, 1000)?;
    for k in 1..=5 {
        let mut oracle = QueryOracle::new(&inst);
        let out = virtual_efx(&mut oracle, k, &EnvyCycleBlackbox)?;
        let alpha = evaluate(&inst, &out.allocation)?.alpha_efx;
        let bound = virtual_efx_bound(&out.measured_rho, m, k);
        println!(
            "k={k}: max queries {} (ceiling {}), virtual rho {}, true alpha {} >= {}",
            oracle.snapshot_counts().iter().max().unwrap(),
            query_ceiling(n, m, k),
            out.measured_rho.to_decimal_string(3),
            alpha.to_decimal_string(4),
            bound.to_decimal_string(4),
        );
    }
    Ok(())
}
