//! Runs an algorithm against a lower-bound family and lets the adversary pick
//! the valuation afterwards.

use serde::Serialize;

use crate::adversarial::{
    is_consistent_completion, ordinal_adversary_pick, ordinal_lb_build, query_adversary_complete,
    query_lb_build, Completion, OrdinalCase,
};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::metrics::evaluate;
use crate::value::Value;

use super::run::{run_algorithm, Algorithm, RunParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    Ordinal { n: usize, m: usize },
    Query { n: usize, k: usize, t: usize },
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AdversaryCase {
    Ordinal(OrdinalCase),
    Query(Completion),
}

#[derive(Clone, Debug, Serialize)]
pub struct AdversaryReport {
    pub spec: FamilySpec,
    pub algorithm: String,
    /// Set when the algorithm cannot run on the family (budget, value structure).
    pub skipped: Option<String>,
    pub case: Option<AdversaryCase>,
    pub queries: Vec<usize>,
    /// The case analysis' own bound for the picked instance.
    pub case_bound: Option<Value>,
    /// The family's target: `1/(m-n)` for ordinal, `2 sqrt(k) / t` for query.
    pub target: Value,
    pub measured_alpha: Option<Value>,
    /// The picked valuation agrees with every answered query and the ranking.
    pub consistent: Option<bool>,
    /// Every completion considered, with its measured α.
    pub alternatives: Vec<(String, Value)>,
    #[serde(skip)]
    pub instance: Option<Instance>,
}

impl AdversaryReport {
    /// Ran, stayed consistent, and measured α is at most the target.
    pub fn passed(&self) -> Option<bool> {
        self.skipped.is_none().then(|| {
            self.consistent == Some(true)
                && self.measured_alpha.as_ref().is_some_and(|a| *a <= self.target)
        })
    }
}

/// Errors meaning the algorithm does not apply to the family rather than a bug.
fn not_applicable(e: &Error) -> bool {
    matches!(
        e,
        Error::BudgetExceeded { .. }
            | Error::NotBivalued(_)
            | Error::ZeroLowValue { .. }
            | Error::Domain(_)
            | Error::ParamDomain(_)
    )
}

/// Constant in the query family's target `C sqrt(k) m^(-1/(2k-1))`.
pub const QUERY_TARGET_CONSTANT: u64 = 2;

pub fn run_adversary(spec: FamilySpec, algorithm: Algorithm, params: &RunParams) -> Result<AdversaryReport> {
    match spec {
        FamilySpec::Ordinal { n, m } => {
            let family = ordinal_lb_build(n, m)?;
            let target = Value::fraction(1, (m - n) as u64).expect("m > n");
            let mut report = AdversaryReport {
                spec,
                algorithm: algorithm.name().into(),
                skipped: None,
                case: None,
                queries: vec![0; n],
                case_bound: None,
                target,
                measured_alpha: None,
                consistent: None,
                alternatives: Vec::new(),
                instance: None,
            };
            let out = match run_algorithm(&family.case2, "ordinal_lb", algorithm, params) {
                Ok(out) => out,
                Err(e) if not_applicable(&e) => {
                    report.skipped = Some(e.to_string());
                    return Ok(report);
                }
                Err(e) => return Err(e),
            };
            let pick = ordinal_adversary_pick(&family, &out.allocation)?;
            let measured = evaluate(&pick.instance, &out.allocation)?.alpha_efx;
            // Queried answers came from case 2; they must agree with the pick.
            let consistent = out
                .transcript
                .entries
                .iter()
                .all(|(a, g, v)| pick.instance.value(*a, *g) == v);
            report.queries = out.record.queries;
            report.case = Some(AdversaryCase::Ordinal(pick.case));
            report.case_bound = Some(pick.bound);
            report.measured_alpha = Some(measured);
            report.consistent = Some(consistent);
            report.instance = Some(pick.instance);
            Ok(report)
        }
        FamilySpec::Query { n, k, t } => {
            let family = query_lb_build(n, k, t)?;
            let mut report = AdversaryReport {
                spec,
                algorithm: algorithm.name().into(),
                skipped: None,
                case: None,
                queries: vec![0; n],
                case_bound: None,
                target: family.acceptance_bound(QUERY_TARGET_CONSTANT),
                measured_alpha: None,
                consistent: None,
                alternatives: Vec::new(),
                instance: None,
            };
            if algorithm.is_full_information() {
                report.skipped = Some("reads the full valuation, not a query algorithm".into());
                return Ok(report);
            }
            let params = RunParams {
                k: Some(params.k.unwrap_or(k)),
                budget: Some(params.budget.unwrap_or(k)),
                ..params.clone()
            };
            let out = match run_algorithm(&family.revealed, "query_lb", algorithm, &params) {
                Ok(out) => out,
                Err(e) if not_applicable(&e) => {
                    report.skipped = Some(e.to_string());
                    return Ok(report);
                }
                Err(e) => return Err(e),
            };
            let done = query_adversary_complete(&family, &out.transcript, &out.allocation)?;
            report.queries = out.record.queries;
            report.consistent = Some(is_consistent_completion(&family, &out.transcript, &done.instance));
            report.case = Some(AdversaryCase::Query(done.completion));
            report.case_bound = Some(done.bound);
            report.measured_alpha = Some(done.measured_alpha);
            report.alternatives = done
                .alternatives
                .into_iter()
                .map(|(c, a)| (format!("{c:?}"), a))
                .collect();
            report.instance = Some(done.instance);
            Ok(report)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordinal_round_robin_passes() {
        for alg in [Algorithm::RoundRobin, Algorithm::Rrla] {
            let r = run_adversary(FamilySpec::Ordinal { n: 3, m: 9 }, alg, &RunParams::default()).unwrap();
            assert_eq!(r.passed(), Some(true), "{alg:?}");
        }
    }

    #[test]
    fn query_family_respects_budget() {
        let spec = FamilySpec::Query { n: 2, k: 2, t: 2 };
        let r = run_adversary(spec, Algorithm::VirtualEfx, &RunParams::default()).unwrap();
        assert!(r.skipped.is_some());
        let r = run_adversary(spec, Algorithm::Prr, &RunParams::default()).unwrap();
        assert!(r.skipped.is_none());
        assert!(r.queries.iter().all(|&q| q <= 2));
        assert_eq!(r.consistent, Some(true));
    }
}
