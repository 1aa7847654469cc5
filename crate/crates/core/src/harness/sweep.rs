//! Parameter sweeps: a JSON config in, one CSV row per run out.
//!
//! Columns, in order:
//!
//! | column | meaning |
//! |---|---|
//! | job, trial | position in the config |
//! | kind, n, m, k, t, algorithm | what ran |
//! | instance_seed | seed of the generated instance |
//! | queries_max, queries_total | query counts |
//! | alpha_efx, alpha_ef1, bound | exact `p/q`, each followed by a `_dec` column |
//! | bound_satisfied, within_query_ceiling | guarantee checks |
//! | adversary_alpha, adversary_target | family kinds only: α after the adversary's pick and the family target |
//! | error | set when the run failed; the other measured columns are empty |
//! | wall_ms | only with timing enabled |

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::value::Value;

use super::adversary::{run_adversary, FamilySpec};
use super::gen::{derive_seed, generate, GenKind, GenParams};
use super::run::{run_algorithm, Algorithm, BlackboxKind, RunParams};

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub jobs: Vec<SweepJob>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepJob {
    pub kind: GenKind,
    pub n: usize,
    #[serde(default)]
    pub m: usize,
    pub k: Option<usize>,
    #[serde(default)]
    pub t: usize,
    pub algorithm: Algorithm,
    #[serde(default = "one")]
    pub trials: usize,
    pub seed: Option<u64>,
    pub lambda: Option<Value>,
    #[serde(default)]
    pub blackbox: BlackboxKind,
    pub budget: Option<usize>,
}

fn one() -> usize {
    1
}

impl SweepConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

pub const COLUMNS: [&str; 23] = [
    "job",
    "trial",
    "kind",
    "n",
    "m",
    "k",
    "t",
    "algorithm",
    "instance_seed",
    "queries_max",
    "queries_total",
    "alpha_efx",
    "alpha_efx_dec",
    "alpha_ef1",
    "alpha_ef1_dec",
    "bound",
    "bound_dec",
    "bound_satisfied",
    "within_query_ceiling",
    "adversary_alpha",
    "adversary_alpha_dec",
    "adversary_target",
    "error",
];

const DIGITS: usize = 6;

fn frac_and_dec(v: Option<&Value>) -> [String; 2] {
    match v {
        Some(v) => [v.to_string(), v.to_decimal_string(DIGITS)],
        None => [String::new(), String::new()],
    }
}

fn run_row(config_seed: u64, job_index: usize, job: &SweepJob, trial: usize, timing: bool) -> Vec<String> {
    let job_seed = job.seed.unwrap_or_else(|| derive_seed(config_seed, job_index as u64));
    let seed = derive_seed(job_seed, trial as u64);
    let k = job.k.unwrap_or(match job.kind {
        GenKind::QueryLb => 1,
        _ => 2,
    });
    let mut row = vec![
        job_index.to_string(),
        trial.to_string(),
        job.kind.name().to_string(),
        job.n.to_string(),
        job.m.to_string(),
        k.to_string(),
        job.t.to_string(),
        job.algorithm.name().to_string(),
        seed.to_string(),
    ];
    let start = Instant::now();
    // Family kinds derive m from their other parameters.
    let mut m_actual = job.m;
    let outcome = (|| -> Result<Vec<String>> {
        let gen = GenParams { k, t: job.t, ..GenParams::new(job.kind, job.n, job.m) };
        let instance = generate(&gen, seed)?;
        m_actual = instance.n_goods();
        let budget = match job.kind {
            GenKind::QueryLb => Some(job.budget.unwrap_or(k)),
            _ => job.budget,
        };
        let params = RunParams {
            k: Some(k),
            lambda: job.lambda.clone(),
            blackbox: job.blackbox,
            budget,
            order: None,
            timing: false,
        };
        let out = run_algorithm(&instance, &format!("{job_index}-{trial}"), job.algorithm, &params)?;
        let r = &out.record;
        let mut cols = vec![
            r.max_queries().to_string(),
            r.queries.iter().sum::<usize>().to_string(),
        ];
        cols.extend(frac_and_dec(Some(&r.alpha_efx)));
        cols.extend(frac_and_dec(Some(&r.alpha_ef1)));
        cols.extend(frac_and_dec(Some(&r.bound)));
        cols.push(r.bound_satisfied.to_string());
        cols.push(r.within_query_ceiling.to_string());
        let family = match job.kind {
            GenKind::OrdinalLb => Some(FamilySpec::Ordinal { n: job.n, m: job.m }),
            GenKind::QueryLb => Some(FamilySpec::Query { n: job.n, k, t: job.t }),
            _ => None,
        };
        match family {
            Some(spec) => {
                let rep = run_adversary(spec, job.algorithm, &params)?;
                cols.extend(frac_and_dec(rep.measured_alpha.as_ref()));
                cols.push(rep.target.to_string());
            }
            None => cols.extend([String::new(), String::new(), String::new()]),
        }
        cols.push(String::new());
        Ok(cols)
    })();
    row[4] = m_actual.to_string();
    match outcome {
        Ok(cols) => row.extend(cols),
        Err(e) => {
            row.extend(std::iter::repeat(String::new()).take(COLUMNS.len() - row.len() - 1));
            row.push(e.to_string());
        }
    }
    if timing {
        row.push(format!("{:.3}", start.elapsed().as_secs_f64() * 1e3));
    }
    row
}

/// All rows in config order; failed runs carry their error and the sweep goes on.
pub fn sweep_rows(config: &SweepConfig, timing: bool) -> Vec<Vec<String>> {
    let tasks: Vec<(usize, &SweepJob, usize)> = config
        .jobs
        .iter()
        .enumerate()
        .flat_map(|(j, job)| (0..job.trials).map(move |t| (j, job, t)))
        .collect();
    tasks
        .par_iter()
        .map(|&(j, job, t)| run_row(config.seed, j, job, t, timing))
        .collect()
}

pub fn write_sweep_csv<W: Write>(config: &SweepConfig, timing: bool, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = COLUMNS.to_vec();
    if timing {
        header.push("wall_ms");
    }
    w.write_record(&header)?;
    for row in sweep_rows(config, timing) {
        w.write_record(&row)?;
    }
    w.flush().map_err(Error::from)
}
