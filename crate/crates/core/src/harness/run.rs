//! Running one algorithm on one instance and attaching its guarantee.

use std::time::Instant;

use serde::Serialize;

use crate::allocation::Allocation;
use crate::bivalued::{match_and_freeze, mfrr};
use crate::elicitation::{QueryOracle, Transcript};
use crate::enclosure::inverse_power;
use crate::error::{Error, Result};
use crate::fullinfo::{EnvyCycleBlackbox, ExactBlackbox, FullInfoAllocator};
use crate::instance::Instance;
use crate::metrics::evaluate;
use crate::ordinal::{round_robin, rrla, rrla_with_order};
use crate::query_enhanced::virtual_efx::ceil_log2;
use crate::query_enhanced::{
    prr, query_ceiling, tradeoff_bound, tradeoff_lambda, tradeoff_params, two_query, virtual_efx,
    virtual_efx_bound,
};
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    RoundRobin,
    Rrla,
    VirtualEfx,
    Prr,
    MatchFreeze,
    Mfrr,
    TwoQuery,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::RoundRobin,
        Algorithm::Rrla,
        Algorithm::VirtualEfx,
        Algorithm::Prr,
        Algorithm::MatchFreeze,
        Algorithm::Mfrr,
        Algorithm::TwoQuery,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::RoundRobin => "round_robin",
            Algorithm::Rrla => "rrla",
            Algorithm::VirtualEfx => "virtual_efx",
            Algorithm::Prr => "prr",
            Algorithm::MatchFreeze => "match_freeze",
            Algorithm::Mfrr => "mfrr",
            Algorithm::TwoQuery => "two_query",
        }
    }

    /// Reads the full valuation instead of querying.
    pub fn is_full_information(self) -> bool {
        self == Algorithm::MatchFreeze
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::UnknownAlgorithm(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlackboxKind {
    Exact,
    #[default]
    EnvyCycle,
}

impl BlackboxKind {
    pub fn allocator(self) -> &'static dyn FullInfoAllocator {
        match self {
            BlackboxKind::Exact => &ExactBlackbox,
            BlackboxKind::EnvyCycle => &EnvyCycleBlackbox,
        }
    }

    pub fn name(self) -> &'static str {
        self.allocator().name()
    }
}

impl std::str::FromStr for BlackboxKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(BlackboxKind::Exact),
            "envy_cycle" => Ok(BlackboxKind::EnvyCycle),
            other => Err(Error::Domain(format!("unknown black box `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunParams {
    /// Bucket count for virtual_efx, query budget for prr. Defaults to 2.
    pub k: Option<usize>,
    /// PRR scale; defaults to the smallest admissible value.
    pub lambda: Option<Value>,
    pub blackbox: BlackboxKind,
    /// Per-agent query budget enforced by the oracle.
    pub budget: Option<usize>,
    /// Agent order for round_robin and rrla.
    pub order: Option<Vec<usize>>,
    pub timing: bool,
}

impl RunParams {
    pub fn k(&self) -> usize {
        self.k.unwrap_or(2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// The bound is on `alpha_efx`.
    Efx,
    /// The bound is on `alpha_ef1`.
    Ef1,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunRecord {
    pub instance_id: String,
    pub algorithm: String,
    pub n: usize,
    pub m: usize,
    pub k: Option<usize>,
    pub lambda: Option<Value>,
    pub blackbox: Option<String>,
    pub budget: Option<usize>,
    pub full_information: bool,
    pub queries: Vec<usize>,
    pub query_ceiling: Option<usize>,
    pub alpha_efx: Value,
    pub alpha_ef1: Value,
    pub measured_rho: Option<Value>,
    pub bound: Value,
    pub bound_kind: BoundKind,
    pub bound_satisfied: bool,
    pub within_query_ceiling: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
    pub allocation: Vec<Vec<usize>>,
}

impl RunRecord {
    /// Recomputes the bound flag from the record's own fields.
    pub fn recheck(&self) -> bool {
        let measured = match self.bound_kind {
            BoundKind::Efx => &self.alpha_efx,
            BoundKind::Ef1 => &self.alpha_ef1,
        };
        *measured >= self.bound
    }

    pub fn max_queries(&self) -> usize {
        self.queries.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub record: RunRecord,
    pub allocation: Allocation,
    pub transcript: Transcript,
}

/// `1 / (2 m^(1/(k+1)))` rounded down, the virtual_efx guarantee with an EFX black box.
pub fn virtual_efx_exact_bound(m: usize, k: usize) -> Value {
    let t = inverse_power(&Value::from_integer(m as u64), 1, (k + 1) as u32).lo().clone();
    &t / &Value::from_integer(2)
}

/// The guarantee each algorithm is checked against.
pub fn guarantee_bound(
    algorithm: Algorithm,
    n: usize,
    m: usize,
    k: usize,
    lambda: &Value,
    measured_rho: Option<&Value>,
) -> (Value, BoundKind) {
    let efx = |v: Value| (v, BoundKind::Efx);
    if m <= n && algorithm != Algorithm::RoundRobin {
        // One good per agent at most: every algorithm here is EFX.
        return efx(Value::one());
    }
    match algorithm {
        Algorithm::RoundRobin => (Value::one(), BoundKind::Ef1),
        Algorithm::Rrla => efx(Value::fraction(1, (m - n) as u64).expect("m > n")),
        Algorithm::VirtualEfx => {
            efx(virtual_efx_bound(measured_rho.expect("virtual_efx reports rho"), m, k))
        }
        Algorithm::Prr => efx(tradeoff_bound(n, m, k, lambda)),
        Algorithm::MatchFreeze => efx(Value::one()),
        Algorithm::Mfrr => efx(Value::fraction(1, 2).expect("nonzero")),
        Algorithm::TwoQuery => efx(Value::fraction(1, n as u64).expect("n >= 2")),
    }
}

/// Per-agent query ceiling of each algorithm.
pub fn query_ceiling_of(algorithm: Algorithm, n: usize, m: usize, k: usize) -> usize {
    match algorithm {
        Algorithm::RoundRobin | Algorithm::Rrla | Algorithm::MatchFreeze => 0,
        Algorithm::VirtualEfx => query_ceiling(n, m, k),
        Algorithm::Prr => k,
        Algorithm::Mfrr => 1 + ceil_log2(n),
        Algorithm::TwoQuery => 2,
    }
}

pub fn run_algorithm(
    instance: &Instance,
    instance_id: &str,
    algorithm: Algorithm,
    params: &RunParams,
) -> Result<RunOutput> {
    let n = instance.n_agents();
    let m = instance.n_goods();
    let k = params.k();
    let mut oracle = match params.budget {
        Some(b) => QueryOracle::with_budget(instance, b),
        None => QueryOracle::new(instance),
    };
    let lambda = match &params.lambda {
        Some(l) => l.clone(),
        None => tradeoff_lambda(n, m, k),
    };
    let start = Instant::now();
    let mut measured_rho = None;
    let allocation = match algorithm {
        Algorithm::RoundRobin => round_robin(&oracle, params.order.as_deref(), None),
        Algorithm::Rrla => match &params.order {
            Some(order) => rrla_with_order(&oracle, order),
            None => rrla(&oracle),
        },
        Algorithm::VirtualEfx => {
            let out = virtual_efx(&mut oracle, k, params.blackbox.allocator())?;
            measured_rho = Some(out.measured_rho);
            out.allocation
        }
        Algorithm::Prr => {
            let p = tradeoff_params(n, m, k, &lambda)?;
            prr(&mut oracle, &p)?
        }
        Algorithm::MatchFreeze => match_and_freeze(instance, None)?.allocation,
        Algorithm::Mfrr => mfrr(&mut oracle)?,
        Algorithm::TwoQuery => two_query(&mut oracle)?,
    };
    let wall_ms = params.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    allocation.validate(instance)?;
    let report = evaluate(instance, &allocation)?;
    let (bound, bound_kind) = guarantee_bound(algorithm, n, m, k, &lambda, measured_rho.as_ref());
    let queries = oracle.snapshot_counts();
    let ceiling = query_ceiling_of(algorithm, n, m, k);
    let uses_k = matches!(algorithm, Algorithm::VirtualEfx | Algorithm::Prr);
    let mut record = RunRecord {
        instance_id: instance_id.to_string(),
        algorithm: algorithm.name().to_string(),
        n,
        m,
        k: uses_k.then_some(k),
        lambda: (algorithm == Algorithm::Prr).then(|| lambda.clone()),
        blackbox: (algorithm == Algorithm::VirtualEfx).then(|| params.blackbox.name().to_string()),
        budget: params.budget,
        full_information: algorithm.is_full_information(),
        within_query_ceiling: queries.iter().all(|&q| q <= ceiling),
        queries,
        query_ceiling: Some(ceiling),
        alpha_efx: report.alpha_efx,
        alpha_ef1: report.alpha_ef1,
        measured_rho,
        bound,
        bound_kind,
        bound_satisfied: false,
        wall_ms,
        allocation: allocation.bundles().to_vec(),
    };
    record.bound_satisfied = record.recheck();
    Ok(RunOutput { record, allocation, transcript: oracle.into_transcript() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversarial::ordinal_lb_build;
    use crate::harness::gen::{generate, GenKind, GenParams};
    use crate::value::val;

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!(matches!("greedy".parse::<Algorithm>(), Err(Error::UnknownAlgorithm(_))));
    }

    #[test]
    fn rrla_on_case2_is_tight() {
        let f = ordinal_lb_build(3, 9).unwrap();
        let out = run_algorithm(&f.case2, "case2", Algorithm::Rrla, &RunParams::default()).unwrap();
        assert_eq!(out.record.alpha_efx, val("1/6"));
        assert_eq!(out.record.bound, val("1/6"));
        assert!(out.record.bound_satisfied);
        assert_eq!(out.record.queries, vec![0, 0, 0]);
    }

    #[test]
    fn virtual_efx_stays_under_ceiling() {
        let inst = generate(&GenParams::new(GenKind::Uniform, 4, 64), 3).unwrap();
        let p = RunParams { k: Some(3), ..RunParams::default() };
        let out = run_algorithm(&inst, "u", Algorithm::VirtualEfx, &p).unwrap();
        assert_eq!(out.record.query_ceiling, Some(21));
        assert!(out.record.max_queries() <= 21);
        assert!(out.record.bound_satisfied);
    }

    #[test]
    fn mfrr_rejects_general_values() {
        let inst = Instance::from_integers(&[[5u64, 3, 3, 2, 1], [1; 5], [1; 5], [1; 5], [1; 5]]).unwrap();
        assert!(matches!(
            run_algorithm(&inst, "x", Algorithm::Mfrr, &RunParams::default()),
            Err(Error::NotBivalued(_))
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let inst = generate(&GenParams::new(GenKind::Uniform, 3, 20), 1).unwrap();
        let p = RunParams { k: Some(2), budget: Some(1), ..RunParams::default() };
        assert!(matches!(
            run_algorithm(&inst, "u", Algorithm::VirtualEfx, &p),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn round_robin_bound_is_ef1() {
        let inst = generate(&GenParams::new(GenKind::Uniform, 3, 11), 5).unwrap();
        let out = run_algorithm(&inst, "u", Algorithm::RoundRobin, &RunParams::default()).unwrap();
        assert_eq!(out.record.bound_kind, BoundKind::Ef1);
        assert_eq!(out.record.alpha_ef1, Value::one());
    }
}
