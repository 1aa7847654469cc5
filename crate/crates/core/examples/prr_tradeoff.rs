//! How the PRR guarantee grows with the per-agent query budget k.

use efx_lab::harness::gen::{random_uniform, seeded_rng};
use efx_lab::query_enhanced::{prr, tradeoff_bound, tradeoff_lambda, tradeoff_params};
use efx_lab::{evaluate, QueryOracle};

fn main() -> efx_lab::Result<()> {
    let (n, m) = (3, 1024);
    let inst = random_uniform(&mut seeded_rng(9), n, m, 10_000)?;
    println!("k  lambda   guarantee  measured");
    for k in 1..=6 {
        let lambda = tradeoff_lambda(n, m, k);
        let params = match tradeoff_params(n, m, k, &lambda) {
            Ok(p) => p,
            Err(e) => {
                println!("{k}  skipped: {e}");
                continue;
            }
        };
        let mut oracle = QueryOracle::with_budget(&inst, k);
        let a = prr(&mut oracle, &params)?;
        println!(
            "{k}  {:<7}  {:<9}  {}",
            lambda.to_decimal_string(3),
            tradeoff_bound(n, m, k, &lambda).to_decimal_string(5),
            evaluate(&inst, &a)?.alpha_efx.to_decimal_string(5),
        );
    }
    Ok(())
}
