//! A small sweep over k for PRR, written as CSV to stdout.

use efx_lab::harness::{write_sweep_csv, SweepConfig};

fn main() -> efx_lab::Result<()> {
    let config = SweepConfig::from_json_str(
        r#"{"seed": 1, "jobs": [
            {"kind": "uniform", "n": 3, "m": 128, "k": 2, "algorithm": "prr", "trials": 3},
            {"kind": "uniform", "n": 3, "m": 128, "k": 3, "algorithm": "prr", "trials": 3},
            {"kind": "uniform", "n": 3, "m": 128, "k": 4, "algorithm": "prr", "trials": 3},
            {"kind": "query_lb", "n": 2, "k": 2, "t": 3, "algorithm": "prr"},
            {"kind": "query_lb", "n": 2, "k": 3, "t": 3, "algorithm": "prr"}
        ]}"#,
    )?;
    write_sweep_csv(&config, false, std::io::stdout().lock())
}
