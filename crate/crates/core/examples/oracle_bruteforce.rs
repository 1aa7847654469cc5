//! Exhaustive search for the best alpha-EFX, compared with what each
//! algorithm achieves.

use efx_lab::fullinfo::best_alpha_bruteforce;
use efx_lab::harness::gen::{random_bivalued, seeded_rng};
use efx_lab::harness::run::{run_algorithm, Algorithm, RunParams};

fn main() -> efx_lab::Result<()> {
    let inst = random_bivalued(&mut seeded_rng(12), 3, 9)?;
    let best = best_alpha_bruteforce(&inst)?;
    println!("optimum {} after {} allocations, witness {:?}", best.best_alpha, best.enumerated, best.witness.bundles());
    for alg in Algorithm::ALL {
        match run_algorithm(&inst, "demo", alg, &RunParams::default()) {
            Ok(out) => println!("  {:<12} alpha {}", alg.name(), out.record.alpha_efx),
            Err(e) => println!("  {:<12} {e}", alg.name()),
        }
    }
    Ok(())
}
