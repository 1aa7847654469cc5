//! Zero-query allocation from rankings alone: round-robin is EF1, and giving
//! the last agent everything left (rrla) is 1/(m-n)-EFX.

use efx_lab::harness::gen::{random_uniform, seeded_rng};
use efx_lab::ordinal::{round_robin, rrla};
use efx_lab::{evaluate, QueryOracle};

fn main() -> efx_lab::Result<()> {
    let inst = random_uniform(&mut seeded_rng(1), 3, 10, 50)?;
    let oracle = QueryOracle::new(&inst);

    let rr = round_robin(&oracle, None, None);
    let r = evaluate(&inst, &rr)?;
    println!("round_robin {:?}", rr.bundles());
    println!("  alpha_ef1 = {}, alpha_efx = {}", r.alpha_ef1, r.alpha_efx);

    let a = rrla(&oracle);
    let r = evaluate(&inst, &a)?;
    println!("rrla        {:?}", a.bundles());
    println!("  alpha_efx = {} (guarantee 1/7)", r.alpha_efx);
    println!("queries spent: {}", oracle.total_queries());
    Ok(())
}
