//! k-query algorithms against the segment family: the adversary completes the
//! valuation consistently with every answered query.

use efx_lab::harness::adversary::{run_adversary, FamilySpec};
use efx_lab::harness::run::{Algorithm, RunParams};

fn main() -> efx_lab::Result<()> {
    for (n, k, t) in [(2, 2, 3), (3, 3, 2), (2, 1, 3)] {
        println!("family n={n} k={k} t={t}");
        for alg in [Algorithm::RoundRobin, Algorithm::Rrla, Algorithm::Prr, Algorithm::TwoQuery] {
            let r = run_adversary(FamilySpec::Query { n, k, t }, alg, &RunParams::default())?;
            match (&r.skipped, &r.measured_alpha) {
                (Some(why), _) => println!("  {:<12} skipped: {why}", alg.name()),
                (None, Some(a)) => println!(
                    "  {:<12} {:?}: alpha {} vs target {} -> {}",
                    alg.name(),
                    r.case.as_ref().unwrap(),
                    a.to_decimal_string(4),
                    r.target.to_decimal_string(4),
                    if r.passed() == Some(true) { "PASS" } else { "FAIL" }
                ),
                _ => unreachable!(),
            }
        }
    }
    Ok(())
}
