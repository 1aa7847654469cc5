//! No ranking-only algorithm beats 1/(m-n): the adversary picks one of two
//! valuations after seeing the allocation.

use efx_lab::adversarial::{ordinal_adversary_pick, ordinal_lb_build};
use efx_lab::ordinal::{round_robin, rrla};
use efx_lab::{evaluate, QueryOracle};

fn main() -> efx_lab::Result<()> {
    let (n, m) = (3, 10);
    let family = ordinal_lb_build(n, m)?;
    let oracle = QueryOracle::new(&family.case1);
    for (name, a) in [("round_robin", round_robin(&oracle, None, None)), ("rrla", rrla(&oracle))] {
        let pick = ordinal_adversary_pick(&family, &a)?;
        println!(
            "{name:<12} {:?} -> {:?}, alpha {} <= {}",
            a.bundles(),
            pick.case,
            evaluate(&pick.instance, &a)?.alpha_efx,
            pick.bound
        );
    }
    Ok(())
}
