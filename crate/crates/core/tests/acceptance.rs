//! Acceptance suite: ten property/oracle checks, one PASS/FAIL line each.
//! Runs as a plain binary so the lines are always visible; exits nonzero if
//! any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use efx_lab::adversarial::{ordinal_adversary_pick, ordinal_lb_build};
use efx_lab::bivalued::{match_and_freeze, mfrr, two_query_bivalued};
use efx_lab::fullinfo::{best_alpha_bruteforce, exact_efx_bruteforce, EnvyCycleBlackbox, ExactBlackbox};
use efx_lab::harness::adversary::{run_adversary, FamilySpec};
use efx_lab::harness::gen::{derive_seed, random_bivalued, random_uniform, seeded_rng};
use efx_lab::harness::run::{run_algorithm, virtual_efx_exact_bound, Algorithm, RunParams};
use efx_lab::ordinal::{round_robin, rrla};
use efx_lab::query_enhanced::virtual_efx::ceil_log2;
use efx_lab::query_enhanced::{
    prr, query_ceiling, tradeoff_bound, tradeoff_lambda, tradeoff_params, virtual_efx, virtual_efx_bound,
};
use efx_lab::{evaluate, Error, Instance, QueryOracle, Value};

const SEED: u64 = 20_240_601;

struct Verdict {
    failures: Vec<String>,
    note: String,
}

impl Verdict {
    fn new() -> Self {
        Verdict { failures: Vec::new(), note: String::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

fn rng_for(criterion: u64) -> ChaCha8Rng {
    seeded_rng(derive_seed(SEED, criterion))
}

fn alpha(inst: &Instance, a: &efx_lab::Allocation) -> Value {
    evaluate(inst, a).expect("valid allocation").alpha_efx
}

fn frac(p: u64, q: u64) -> Value {
    Value::fraction(p, q).unwrap()
}

/// Corpus shared by criteria 1 and 2: n in 2..=6, m in 2..=30.
fn corpus_1000() -> Vec<Instance> {
    let mut rng = rng_for(1);
    (0..1000)
        .map(|_| {
            let n = rng.gen_range(2..=6);
            let m = rng.gen_range(2..=30);
            random_uniform(&mut rng, n, m, 100).unwrap()
        })
        .collect()
}

fn c1() -> Verdict {
    let mut v = Verdict::new();
    for (idx, inst) in corpus_1000().iter().enumerate() {
        let o = QueryOracle::new(inst);
        let a = round_robin(&o, None, None);
        let r = evaluate(inst, &a).unwrap();
        v.check(r.alpha_ef1 == Value::one(), || format!("instance {idx}: alpha_ef1 = {}", r.alpha_ef1));
        v.check(o.total_queries() == 0 && o.hidden_reads() == 0, || format!("instance {idx}: values read"));
    }
    v.note = "1000 instances".into();
    v
}

fn c2() -> Verdict {
    let mut v = Verdict::new();
    let mut checked = 0;
    for (idx, inst) in corpus_1000().iter().enumerate() {
        let (n, m) = (inst.n_agents(), inst.n_goods());
        if m <= n {
            continue;
        }
        checked += 1;
        let a = rrla(&QueryOracle::new(inst));
        let got = alpha(inst, &a);
        let bound = frac(1, (m - n) as u64);
        v.check(got >= bound, || format!("instance {idx}: {got} < {bound}"));
    }
    // All-ones valuation; the family builder also needs m > n + 2, which some
    // pairs here do not meet, so the valuation is built directly.
    for n in 2..=5usize {
        for m in 6..=12usize {
            let inst = Instance::new(vec![vec![Value::one(); m]; n]).unwrap();
            if m > n + 2 {
                assert_eq!(inst, ordinal_lb_build(n, m).unwrap().case2);
            }
            let got = alpha(&inst, &rrla(&QueryOracle::new(&inst)));
            let want = frac(1, (m - n) as u64);
            v.check(got == want, || format!("all-ones n={n} m={m}: {got} != {want}"));
        }
    }
    v.note = format!("{checked} random instances with m > n, 28 tight cases");
    v
}

fn c3() -> Verdict {
    let mut v = Verdict::new();
    let mut runs = 0;
    for n in 2..=4usize {
        for m in n + 3..=12 {
            let family = ordinal_lb_build(n, m).unwrap();
            for (name, a) in [
                ("round_robin", round_robin(&QueryOracle::new(&family.case1), None, None)),
                ("rrla", rrla(&QueryOracle::new(&family.case1))),
            ] {
                runs += 1;
                let pick = ordinal_adversary_pick(&family, &a).unwrap();
                let got = alpha(&pick.instance, &a);
                let target = frac(1, (m - n) as u64);
                v.check(got <= target, || format!("{name} n={n} m={m}: {got} > {target}"));
                v.check(got <= pick.bound, || format!("{name} n={n} m={m}: above case bound"));
            }
        }
    }
    v.note = format!("{runs} adversary picks");
    v
}

fn c4() -> Verdict {
    let mut v = Verdict::new();
    let mut rng = rng_for(4);
    for trial in 0..200 {
        let n = rng.gen_range(2..=3);
        let m = rng.gen_range(2..=9);
        let k = rng.gen_range(1..=3);
        let inst = random_uniform(&mut rng, n, m, 100).unwrap();
        let mut o = QueryOracle::new(&inst);
        let out = virtual_efx(&mut o, k, &ExactBlackbox).unwrap();
        let got = alpha(&inst, &out.allocation);
        let bound = virtual_efx_exact_bound(m, k);
        v.check(out.measured_rho == Value::one(), || format!("(a) trial {trial}: exact black box not EFX"));
        v.check(got >= bound, || format!("(a) trial {trial}: {got} < {bound}"));
        let cap = query_ceiling(n, m, k);
        v.check(o.snapshot_counts().iter().all(|&q| q <= cap), || format!("(a) trial {trial}: over {cap} queries"));
    }
    for trial in 0..200 {
        let n = rng.gen_range(2..=6);
        let m = rng.gen_range(2..=200);
        let k = rng.gen_range(1..=8);
        let inst = random_uniform(&mut rng, n, m, 1000).unwrap();
        let mut o = QueryOracle::new(&inst);
        let out = virtual_efx(&mut o, k, &EnvyCycleBlackbox).unwrap();
        let got = alpha(&inst, &out.allocation);
        let bound = virtual_efx_bound(&out.measured_rho, m, k);
        v.check(got >= bound, || format!("(b) trial {trial}: {got} < {bound}"));
        let cap = query_ceiling(n, m, k);
        v.check(o.snapshot_counts().iter().all(|&q| q <= cap), || format!("(b) trial {trial}: over {cap} queries"));
    }
    v.note = "200 exact + 200 envy-cycle runs".into();
    v
}

fn c5() -> Verdict {
    let mut v = Verdict::new();
    let mut rng = rng_for(5);
    for trial in 0..300 {
        let n = rng.gen_range(2..=5);
        let m = [32, 243, 1024][rng.gen_range(0..3)];
        let k = rng.gen_range(2..=3);
        let inst = random_uniform(&mut rng, n, m, 1000).unwrap();
        let lambda = tradeoff_lambda(n, m, k);
        let params = tradeoff_params(n, m, k, &lambda).unwrap();
        let mut o = QueryOracle::with_budget(&inst, k);
        let a = prr(&mut o, &params).unwrap();
        let got = alpha(&inst, &a);
        let bound = tradeoff_bound(n, m, k, &lambda);
        v.check(got >= bound, || format!("trial {trial} n={n} m={m} k={k}: {got} < {bound}"));
        v.check(o.snapshot_counts().iter().all(|&q| q <= k), || format!("trial {trial}: over {k} queries"));
    }
    v.note = "300 runs".into();
    v
}

fn c6() -> Verdict {
    let mut v = Verdict::new();
    let (mut runs, mut skipped, mut excluded) = (0, 0, Vec::new());
    for n in [2usize, 3] {
        for k in 1..=3usize {
            for t in [2usize, 3] {
                let spec = FamilySpec::Query { n, k, t };
                for alg in Algorithm::ALL {
                    let report = match run_adversary(spec, alg, &RunParams::default()) {
                        Ok(r) => r,
                        Err(Error::Domain(_)) => {
                            if alg == Algorithm::RoundRobin {
                                excluded.push(format!("(n={n},k={k},t={t})"));
                            }
                            continue;
                        }
                        Err(e) => {
                            v.failures.push(format!("{} n={n} k={k} t={t}: {e}", alg.name()));
                            continue;
                        }
                    };
                    if report.skipped.is_some() {
                        skipped += 1;
                        continue;
                    }
                    runs += 1;
                    let got = report.measured_alpha.clone().unwrap();
                    v.check(report.consistent == Some(true), || {
                        format!("{} n={n} k={k} t={t}: inconsistent completion", alg.name())
                    });
                    v.check(got <= report.target, || {
                        format!(
                            "{} n={n} k={k} t={t}: alpha {got} > target {} ({:?})",
                            alg.name(),
                            report.target.to_decimal_string(4),
                            report.case
                        )
                    });
                }
            }
        }
    }
    v.note = format!(
        "{runs} completions, {skipped} algorithm/family pairs over budget or off-domain, families not constructible: {}",
        excluded.join(" ")
    );
    v
}

fn c7() -> Verdict {
    let mut v = Verdict::new();
    let mut rng = rng_for(7);
    for trial in 0..300 {
        let n = rng.gen_range(2..=4);
        let m = rng.gen_range(2..=10);
        let inst = random_bivalued(&mut rng, n, m).unwrap();
        let out = match_and_freeze(&inst, None).unwrap();
        let got = alpha(&inst, &out.allocation);
        v.check(got == Value::one(), || format!("trial {trial}: alpha {got}"));
        v.check(exact_efx_bruteforce(&inst).unwrap().is_some(), || format!("trial {trial}: no EFX allocation"));
    }
    v.note = "300 instances".into();
    v
}

fn c8() -> Verdict {
    let mut v = Verdict::new();
    let mut rng = rng_for(8);
    for trial in 0..500 {
        let n = rng.gen_range(2..=6);
        let m = rng.gen_range(2..=40);
        let inst = random_bivalued(&mut rng, n, m).unwrap();
        let mut o = QueryOracle::new(&inst);
        let a = mfrr(&mut o).unwrap();
        let got = alpha(&inst, &a);
        v.check(got >= frac(1, 2), || format!("trial {trial}: alpha {got}"));
        let cap = 1 + ceil_log2(n);
        v.check(o.snapshot_counts().iter().all(|&q| q <= cap), || format!("trial {trial}: over {cap} queries"));
    }
    v.note = "500 instances".into();
    v
}

fn c9() -> Verdict {
    let mut v = Verdict::new();
    let mut rng = rng_for(9);
    for trial in 0..500 {
        let n = rng.gen_range(2..=6);
        let m = rng.gen_range(2 * n..=40);
        let inst = random_bivalued(&mut rng, n, m).unwrap();
        let mut o = QueryOracle::new(&inst);
        let a = two_query_bivalued(&mut o).unwrap();
        let got = alpha(&inst, &a);
        v.check(got >= frac(1, n as u64), || format!("trial {trial}: alpha {got} < 1/{n}"));
        v.check(o.snapshot_counts().iter().all(|&q| q <= 2), || format!("trial {trial}: over 2 queries"));
    }
    v.note = "500 instances".into();
    v
}

fn c10() -> Verdict {
    let mut v = Verdict::new();
    let mut rng = rng_for(10);
    let mut runs = 0;
    for trial in 0..100 {
        let n = rng.gen_range(2..=4);
        let max_m = match n {
            2 => 19,
            3 => 12,
            _ => 9,
        };
        let m = rng.gen_range(2..=max_m);
        assert!((n as u64).pow(m as u32) <= 1_000_000);
        let inst = if trial % 2 == 0 {
            random_uniform(&mut rng, n, m, 100).unwrap()
        } else {
            random_bivalued(&mut rng, n, m).unwrap()
        };
        let best = best_alpha_bruteforce(&inst).unwrap().best_alpha;
        for alg in Algorithm::ALL {
            let out = match run_algorithm(&inst, "c10", alg, &RunParams::default()) {
                Ok(o) => o,
                Err(
                    Error::NotBivalued(_) | Error::ZeroLowValue { .. } | Error::Domain(_) | Error::ParamDomain(_),
                ) => continue,
                Err(e) => {
                    v.failures.push(format!("trial {trial} {}: {e}", alg.name()));
                    continue;
                }
            };
            runs += 1;
            let got = out.record.alpha_efx;
            v.check(got <= best, || format!("trial {trial} {}: {got} beats optimum {best}", alg.name()));
        }
    }
    v.note = format!("100 instances, {runs} algorithm runs");
    v
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, u64, fn() -> Verdict);
    let criteria: [Criterion; 10] = [
        (1, "round_robin is EF1 with zero queries", 10, c1),
        (2, "rrla meets 1/(m-n), tight on all-ones", 10, c2),
        (3, "ordinal adversary forces 1/(m-n)", 5, c3),
        (4, "virtual_efx transferred guarantee and query ceiling", 60, c4),
        (5, "prr guarantee within k queries", 30, c5),
        (6, "query adversary forces 2 sqrt(k) m^(-1/(2k-1))", 20, c6),
        (7, "match_and_freeze is EFX", 60, c7),
        (8, "mfrr is 1/2-EFX within 1 + ceil(log2 n) queries", 30, c8),
        (9, "two_query is 1/n-EFX within 2 queries", 20, c9),
        (10, "no algorithm beats the exhaustive optimum", 120, c10),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (id, title, limit, run) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let verdict = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let ok = verdict.failures.is_empty() && in_time;
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {id}: {title} [{:.2}s / {limit}s] {}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            verdict.note
        );
        if !in_time {
            println!("    over the time limit");
        }
        for f in verdict.failures.iter().take(10) {
            println!("    {f}");
        }
        if verdict.failures.len() > 10 {
            println!("    ... {} more", verdict.failures.len() - 10);
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
