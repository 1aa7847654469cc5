//! Bivalued instances: exact EFX with full information, 1/2-EFX with
//! 1 + ceil(log2 n) queries, 1/n-EFX with two.

use efx_lab::bivalued::{match_and_freeze, mfrr_detailed, two_query_bivalued};
use efx_lab::harness::gen::{random_bivalued, seeded_rng};
use efx_lab::{evaluate, QueryOracle};

fn main() -> efx_lab::Result<()> {
    let inst = random_bivalued(&mut seeded_rng(4), 5, 16)?;
    for (i, bm) in inst.bivalued().unwrap().iter().enumerate() {
        println!("agent {i}: h = {}, l = {}", bm.high, bm.low);
    }

    let mf = match_and_freeze(&inst, None)?;
    println!("match_and_freeze: alpha {} in {} rounds, freezes {:?}",
        evaluate(&inst, &mf.allocation)?.alpha_efx, mf.rounds, mf.freeze_events);

    let mut oracle = QueryOracle::new(&inst);
    let out = mfrr_detailed(&mut oracle)?;
    println!("mfrr: alpha {}, matched side {:?}, round-robin side {:?}, queries {:?}",
        evaluate(&inst, &out.allocation)?.alpha_efx, out.matched_side, out.round_robin_side,
        oracle.snapshot_counts());

    let mut oracle = QueryOracle::new(&inst);
    let a = two_query_bivalued(&mut oracle)?;
    println!("two_query: alpha {}, queries {:?}", evaluate(&inst, &a)?.alpha_efx, oracle.snapshot_counts());
    Ok(())
}
