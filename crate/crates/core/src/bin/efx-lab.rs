use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use efx_lab::fullinfo::{best_alpha_bruteforce, exact_efx_bruteforce};
use efx_lab::harness::gen::SEED_ENV;
use efx_lab::harness::{
    generate, run_adversary, run_algorithm, write_sweep_csv, Algorithm, BlackboxKind, FamilySpec,
    GenKind, GenParams, RunParams, SweepConfig,
};
use efx_lab::{evaluate, Allocation, Error, Instance, Result, Value};

#[derive(Parser)]
#[command(name = "efx-lab", version, about = "Approximate-EFX allocation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Ordinal,
    Query,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance as JSON.
    Gen {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        t: usize,
        /// Largest value for uniform instances.
        #[arg(long, default_value_t = 100)]
        max_value: u64,
        /// Ordinal family member (1 or 2).
        #[arg(long, default_value_t = 2)]
        case: u8,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one algorithm and print its run record.
    Run {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        alg: String,
        #[command(flatten)]
        opts: RunOpts,
        /// Comma-separated agent order for round_robin and rrla.
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        timing: bool,
        /// Exit with status 3 when the guarantee does not hold.
        #[arg(long)]
        assert_bounds: bool,
    },
    /// Run a JSON sweep config and write CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Add a wall_ms column (breaks byte-identical reruns).
        #[arg(long)]
        timing: bool,
    },
    /// Exhaustive search for the best achievable alpha-EFX.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
        /// Only report whether an EFX allocation exists.
        #[arg(long)]
        exists: bool,
    },
    /// Run an algorithm on a lower-bound family and let the adversary pick values.
    Adversary {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long)]
        alg: String,
        #[arg(long)]
        assert_bounds: bool,
    },
    /// Validate an allocation and print its fairness report.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        allocation: PathBuf,
        /// Exit with status 3 if alpha-EFX is below this value.
        #[arg(long)]
        min_alpha: Option<String>,
    },
}

#[derive(clap::Args)]
struct RunOpts {
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long, default_value = "envy_cycle")]
    blackbox: String,
    #[arg(long)]
    budget: Option<usize>,
}

enum Outcome {
    Ok,
    Violation,
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.write_all(b"\n")?;
        }
    }
    Ok(())
}

fn pretty(v: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn execute(command: Command) -> Result<Outcome> {
    match command {
        Command::Gen { kind, n, m, k, t, max_value, case, seed, out } => {
            let kind: GenKind = kind.parse()?;
            let params = GenParams { kind, n, m, k, t, max_value, case };
            let inst = generate(&params, seed)?;
            emit(&inst.to_json_string(), out.as_deref())?;
            Ok(Outcome::Ok)
        }
        Command::Run { instance, alg, opts, order, timing, assert_bounds } => {
            let inst = Instance::from_json_str(&read(&instance)?)?;
            let alg: Algorithm = alg.parse()?;
            let order = order
                .map(|s| {
                    s.split(',')
                        .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Parse(x.to_string())))
                        .collect::<Result<Vec<_>>>()
                })
                .transpose()?;
            if let Some(o) = &order {
                let mut sorted = o.clone();
                sorted.sort_unstable();
                if sorted != (0..inst.n_agents()).collect::<Vec<_>>() {
                    return Err(Error::Domain("--order must be a permutation of the agents".into()));
                }
            }
            let params = RunParams {
                k: opts.k,
                lambda: opts.lambda.as_deref().map(Value::parse).transpose()?,
                blackbox: opts.blackbox.parse::<BlackboxKind>()?,
                budget: opts.budget,
                order,
                timing,
            };
            let id = instance.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let out = run_algorithm(&inst, &id, alg, &params)?;
            emit(&pretty(&out.record)?, None)?;
            let ok = out.record.bound_satisfied && out.record.within_query_ceiling;
            Ok(if assert_bounds && !ok { Outcome::Violation } else { Outcome::Ok })
        }
        Command::Sweep { config, out, timing } => {
            let cfg = SweepConfig::from_json_str(&read(&config)?)?;
            match out {
                Some(p) => write_sweep_csv(&cfg, timing, fs::File::create(p)?)?,
                None => write_sweep_csv(&cfg, timing, io::stdout().lock())?,
            }
            Ok(Outcome::Ok)
        }
        Command::Oracle { instance, exists } => {
            let inst = Instance::from_json_str(&read(&instance)?)?;
            let v = if exists {
                let found = exact_efx_bruteforce(&inst)?;
                json!({
                    "efx_exists": found.is_some(),
                    "witness": found.map(|a| a.to_json_value()),
                })
            } else {
                let r = best_alpha_bruteforce(&inst)?;
                json!({
                    "best_alpha": r.best_alpha.to_string(),
                    "witness": r.witness.to_json_value(),
                    "enumerated": r.enumerated,
                })
            };
            emit(&pretty(&v)?, None)?;
            Ok(Outcome::Ok)
        }
        Command::Adversary { family, n, m, k, t, alg, assert_bounds } => {
            let alg: Algorithm = alg.parse()?;
            let spec = match family {
                Family::Ordinal => FamilySpec::Ordinal { n, m },
                Family::Query => FamilySpec::Query { n, k, t },
            };
            let report = run_adversary(spec, alg, &RunParams::default())?;
            let mut v = serde_json::to_value(&report)?;
            if let Some(inst) = &report.instance {
                v["instance"] = serde_json::from_str(&inst.to_json_string())?;
            }
            emit(&pretty(&v)?, None)?;
            let verdict = match report.passed() {
                None => "SKIP",
                Some(true) => "PASS",
                Some(false) => "FAIL",
            };
            eprintln!("{verdict}: measured alpha <= target {}", report.target);
            Ok(if assert_bounds && report.passed() == Some(false) { Outcome::Violation } else { Outcome::Ok })
        }
        Command::Verify { instance, allocation, min_alpha } => {
            let inst = Instance::from_json_str(&read(&instance)?)?;
            let alloc = Allocation::from_json_str(&read(&allocation)?, inst.n_goods())?;
            alloc.validate(&inst)?;
            let report = evaluate(&inst, &alloc)?;
            emit(&pretty(&report)?, None)?;
            let min = min_alpha.as_deref().map(Value::parse).transpose()?;
            Ok(match min {
                Some(min) if report.alpha_efx < min => Outcome::Violation,
                _ => Outcome::Ok,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => {
            eprintln!("guarantee violated");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 1 })
        }
    }
}
