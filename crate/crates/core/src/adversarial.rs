//! Lower-bound instance families and post-hoc adversaries that pick a
//! valuation consistent with everything an algorithm observed.
//!
//! Both families share one ranking across agents: the identity order on goods.

use std::ops::Range;

use serde::Serialize;

use crate::allocation::Allocation;
use crate::elicitation::Transcript;
use crate::enclosure::sqrt;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::metrics::evaluate;
use crate::ranking::build_ranking;
use crate::value::Value;

/// Largest good count the query family will materialize.
pub const MAX_FAMILY_GOODS: usize = 1 << 20;

/// Ordinal family: `case1` values the top `n - 1` goods at 1 and the rest at
/// 0, `case2` values everything at 1. Both induce the identity ranking.
#[derive(Clone, Debug)]
pub struct OrdinalLBFamily {
    pub n: usize,
    pub m: usize,
    pub case1: Instance,
    pub case2: Instance,
}

pub fn ordinal_lb_build(n: usize, m: usize) -> Result<OrdinalLBFamily> {
    if n < 2 {
        return Err(Error::Domain(format!("need n >= 2, got {n}")));
    }
    if m <= n + 2 {
        return Err(Error::Domain(format!("need m > n + 2, got n = {n}, m = {m}")));
    }
    let row1: Vec<Value> =
        (0..m).map(|g| if g + 1 < n { Value::one() } else { Value::zero() }).collect();
    let row2 = vec![Value::one(); m];
    Ok(OrdinalLBFamily {
        n,
        m,
        case1: Instance::new(vec![row1; n])?,
        case2: Instance::new(vec![row2; n])?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrdinalCase {
    /// A top good shares a bundle with another good.
    SharedTopGood,
    /// Every top good is a singleton.
    SingletonTops,
}

#[derive(Clone, Debug)]
pub struct OrdinalPick {
    pub case: OrdinalCase,
    pub instance: Instance,
    /// The α the case analysis guarantees as an upper bound.
    pub bound: Value,
}

/// Lowest-index agent holding none of the top `n - 1` goods.
fn agent_without_top(allocation: &Allocation, n: usize) -> usize {
    (0..n)
        .find(|&i| allocation.bundle(i).iter().all(|&g| g + 1 >= n))
        .expect("n - 1 top goods cannot cover n agents")
}

fn shared_top_good(allocation: &Allocation, n: usize) -> Option<(usize, usize)> {
    (0..n).find_map(|i| {
        let b = allocation.bundle(i);
        if b.len() < 2 {
            return None;
        }
        b.iter().copied().find(|&g| g + 1 < n).map(|g| (i, g))
    })
}

pub fn ordinal_adversary_pick(family: &OrdinalLBFamily, allocation: &Allocation) -> Result<OrdinalPick> {
    allocation.validate(&family.case1)?;
    if !allocation.is_complete() {
        return Err(Error::Domain("the adversary needs a complete allocation".into()));
    }
    Ok(match shared_top_good(allocation, family.n) {
        Some(_) => OrdinalPick {
            case: OrdinalCase::SharedTopGood,
            instance: family.case1.clone(),
            bound: Value::zero(),
        },
        None => OrdinalPick {
            case: OrdinalCase::SingletonTops,
            instance: family.case2.clone(),
            bound: Value::fraction(1, (family.m - family.n) as u64).expect("m > n"),
        },
    })
}

/// Which part of the shared ranking a good belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Top,
    /// `S_l` for `l = 1..k-1`.
    Segment(usize),
    B,
}

/// Query family with `m = t^(2k-1)`: top goods worth `s ~ sqrt(k)`, then
/// segments `S_l` of `t^(2l-1)` goods worth `t^(-2l)`, then `B` worth 0.
#[derive(Clone, Debug)]
pub struct QueryLBFamily {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub m: usize,
    /// Lower enclosure of `sqrt(k)`; exact when `k` is a square.
    pub sqrt_k: Value,
    pub segments: Vec<Range<usize>>,
    pub b: Range<usize>,
    pub revealed: Instance,
}

impl QueryLBFamily {
    pub fn part(&self, good: usize) -> Part {
        if good + 1 < self.n {
            return Part::Top;
        }
        match self.segments.iter().position(|r| r.contains(&good)) {
            Some(l) => Part::Segment(l + 1),
            None => Part::B,
        }
    }

    /// `t^(-2l)`.
    pub fn segment_value(&self, l: usize) -> Value {
        Value::one() / Value::from_integer(self.t as u64).pow(2 * l as u32)
    }

    pub fn revealed_value(&self, good: usize) -> Value {
        match self.part(good) {
            Part::Top => self.sqrt_k.clone(),
            Part::Segment(l) => self.segment_value(l),
            Part::B => Value::zero(),
        }
    }

    /// `2 * sqrt(k) * m^(-1/(2k-1)) = 2 sqrt(k) / t`, using the upper
    /// enclosure of `sqrt(k)` so a measured α at or below it is a sound pass.
    pub fn acceptance_bound(&self, c: u64) -> Value {
        let hi = sqrt(&Value::from_integer(self.k as u64)).hi().clone();
        &(&Value::from_integer(c) * &hi) / &Value::from_integer(self.t as u64)
    }
}

pub fn query_lb_build(n: usize, k: usize, t: usize) -> Result<QueryLBFamily> {
    if n < 2 || k < 1 || t < 2 {
        return Err(Error::Domain(format!("need n >= 2, k >= 1, t >= 2; got n = {n}, k = {k}, t = {t}")));
    }
    let m = (t as u64)
        .checked_pow((2 * k - 1) as u32)
        .filter(|&m| m <= MAX_FAMILY_GOODS as u64)
        .ok_or_else(|| Error::Domain(format!("t^(2k-1) exceeds {MAX_FAMILY_GOODS} goods")))?
        as usize;
    let mut segments = Vec::with_capacity(k.saturating_sub(1));
    let mut start = n - 1;
    for l in 1..k {
        let size = t.pow((2 * l - 1) as u32);
        segments.push(start..start + size);
        start += size;
    }
    if start >= m {
        return Err(Error::Domain(format!(
            "no goods left for B: n = {n}, k = {k}, t = {t}, m = {m}"
        )));
    }
    let b = start..m;
    // |B| >= m / 2, the constant fraction the construction needs.
    if 2 * b.len() < m {
        return Err(Error::Domain(format!(
            "|B| = {} is below m / 2 = {m}/2 for n = {n}, k = {k}, t = {t}",
            b.len()
        )));
    }
    let sqrt_k = sqrt(&Value::from_integer(k as u64)).lo().clone();
    let mut family = QueryLBFamily {
        n,
        k,
        t,
        m,
        sqrt_k,
        segments,
        b,
        revealed: Instance::new(vec![vec![Value::zero(); 2]; 2])?,
    };
    let row: Vec<Value> = (0..m).map(|g| family.revealed_value(g)).collect();
    family.revealed = Instance::new(vec![row; n])?;
    Ok(family)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Completion {
    /// Some top good shares a bundle: everyone keeps the revealed values.
    Revealed,
    /// The holder's own top good drops to the value of the next segment.
    DropOwnGood,
    /// Unqueried segment `S_l` rises to its predecessor's value.
    RaiseSegment(usize),
    /// Unqueried `B` rises to its predecessor's value.
    RaiseB,
}

#[derive(Clone, Debug)]
pub struct QueryAdversaryOutcome {
    pub completion: Completion,
    pub instance: Instance,
    /// Upper bound on α for the pair below, from the case analysis.
    pub bound: Value,
    pub envious: usize,
    pub envied: usize,
    pub measured_alpha: Value,
    /// Every consistent completion considered, with its measured α.
    pub alternatives: Vec<(Completion, Value)>,
}

fn check_transcript(family: &QueryLBFamily, transcript: &Transcript) -> Result<()> {
    for (a, g, v) in &transcript.entries {
        if *a >= family.n || *g >= family.m {
            return Err(Error::InconsistentTranscript(format!(
                "entry ({a}, {g}) is outside the {} x {} family",
                family.n, family.m
            )));
        }
        let expected = family.revealed_value(*g);
        if *v != expected {
            return Err(Error::InconsistentTranscript(format!(
                "agent {a}, good {g}: transcript says {v}, the family reveals {expected}"
            )));
        }
    }
    Ok(())
}

/// True when `instance` agrees with every transcript answer and every agent's
/// values are nonincreasing along the shared ranking.
pub fn is_consistent_completion(family: &QueryLBFamily, transcript: &Transcript, instance: &Instance) -> bool {
    let profile = build_ranking(instance);
    let identity: Vec<usize> = (0..family.m).collect();
    instance.n_agents() == family.n
        && instance.n_goods() == family.m
        && transcript.entries.iter().all(|(a, g, v)| instance.value(*a, *g) == v)
        && (0..family.n).all(|i| profile.ranking(i) == identity.as_slice())
}

pub fn query_adversary_complete(
    family: &QueryLBFamily,
    transcript: &Transcript,
    allocation: &Allocation,
) -> Result<QueryAdversaryOutcome> {
    check_transcript(family, transcript)?;
    allocation.validate(&family.revealed)?;
    if !allocation.is_complete() {
        return Err(Error::Domain("the adversary needs a complete allocation".into()));
    }
    let n = family.n;
    let last = agent_without_top(allocation, n);

    if let Some((holder, _)) = shared_top_good(allocation, n) {
        let instance = family.revealed.clone();
        let measured = evaluate(&instance, allocation)?.alpha_efx;
        // v_last(X_last) <= (k - 1) / t <= k / t and the holder's bundle keeps
        // a top good after any removal.
        let k = Value::from_integer(family.k as u64);
        let bound = (&k / &(&Value::from_integer(family.t as u64) * &family.sqrt_k)).cap_one();
        return Ok(QueryAdversaryOutcome {
            completion: Completion::Revealed,
            instance,
            bound,
            envious: last,
            envied: holder,
            measured_alpha: measured.clone(),
            alternatives: vec![(Completion::Revealed, measured)],
        });
    }

    // Every top good is a singleton, so `last` holds all other goods.
    let own = n - 2;
    let holder = (0..n)
        .find(|&i| allocation.bundle(i) == [own])
        .expect("singleton top goods");
    let queried: Vec<usize> = transcript
        .entries
        .iter()
        .filter(|(a, _, _)| *a == holder)
        .map(|(_, g, _)| *g)
        .collect();
    let tv = Value::from_integer(family.t as u64);
    let k = family.k;

    let mut candidates: Vec<(Completion, Vec<Value>, Value)> = Vec::new();
    let base: Vec<Value> = family.revealed.row(holder).to_vec();
    if !queried.contains(&own) {
        let mut row = base.clone();
        row[own] = if k >= 2 { family.segment_value(1) } else { Value::zero() };
        let bound = if k >= 2 {
            (Value::one() / (&Value::from_integer((k - 1) as u64) * &tv)).cap_one()
        } else {
            Value::one()
        };
        candidates.push((Completion::DropOwnGood, row, bound));
    }
    for (idx, range) in family.segments.iter().enumerate() {
        let l = idx + 1;
        if queried.iter().any(|g| range.contains(g)) {
            continue;
        }
        let mut row = base.clone();
        let raised = family.segment_value(l - 1);
        for g in range.clone() {
            row[g] = raised.clone();
        }
        let bound = (&family.sqrt_k / &tv).cap_one();
        candidates.push((Completion::RaiseSegment(l), row, bound));
    }
    if !queried.iter().any(|g| family.b.contains(g)) {
        let mut row = base.clone();
        let raised = if k >= 2 { family.segment_value(k - 1) } else { family.sqrt_k.clone() };
        for g in family.b.clone() {
            row[g] = raised.clone();
        }
        let rest = &Value::from_integer((k - 1) as u64) / &tv;
        let denom = &rest + &(&Value::from_integer((family.b.len() - 1) as u64) * &raised);
        let bound = match denom.is_zero() {
            true => Value::one(),
            false => (&family.sqrt_k / &denom).cap_one(),
        };
        candidates.push((Completion::RaiseB, row, bound));
    }
    if candidates.is_empty() {
        return Err(Error::InconsistentTranscript(format!(
            "agent {holder} was queried in every segment; more than {k} queries"
        )));
    }

    let mut alternatives = Vec::new();
    let mut best: Option<(Completion, Instance, Value, Value)> = None;
    for (completion, row, bound) in candidates {
        let instance = family.revealed.with_row(holder, row)?;
        debug_assert!(is_consistent_completion(family, transcript, &instance));
        let measured = evaluate(&instance, allocation)?.alpha_efx;
        alternatives.push((completion.clone(), measured.clone()));
        if best.as_ref().map_or(true, |(_, _, _, m)| measured < *m) {
            best = Some((completion, instance, bound, measured));
        }
    }
    let (completion, instance, bound, measured_alpha) = best.expect("at least one candidate");
    Ok(QueryAdversaryOutcome {
        completion,
        instance,
        bound,
        envious: holder,
        envied: last,
        measured_alpha,
        alternatives,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elicitation::QueryOracle;
    use crate::ordinal::{round_robin, rrla};
    use crate::value::val;

    #[test]
    fn ordinal_family_rows() {
        let f = ordinal_lb_build(2, 6).unwrap();
        assert_eq!(f.case1.row(0), &[val("1"), val("0"), val("0"), val("0"), val("0"), val("0")]);
        assert!(f.case2.row(1).iter().all(|v| *v == val("1")));
        assert_eq!(build_ranking(&f.case1), build_ranking(&f.case2));
        assert!(ordinal_lb_build(3, 5).is_err());
    }

    #[test]
    fn rrla_on_case2_is_tight() {
        let f = ordinal_lb_build(3, 8).unwrap();
        let a = rrla(&QueryOracle::new(&f.case2));
        assert_eq!(evaluate(&f.case2, &a).unwrap().alpha_efx, val("1/5"));
        let pick = ordinal_adversary_pick(&f, &a).unwrap();
        assert_eq!(pick.case, OrdinalCase::SingletonTops);
        assert_eq!(pick.bound, val("1/5"));
    }

    #[test]
    fn shared_top_good_is_zero_efx() {
        let f = ordinal_lb_build(2, 6).unwrap();
        let a = round_robin(&QueryOracle::new(&f.case1), None, None);
        let pick = ordinal_adversary_pick(&f, &a).unwrap();
        assert_eq!(pick.case, OrdinalCase::SharedTopGood);
        assert_eq!(evaluate(&pick.instance, &a).unwrap().alpha_efx, val("0"));
    }

    #[test]
    fn query_family_layout() {
        let f = query_lb_build(2, 2, 2).unwrap();
        assert_eq!(f.m, 8);
        assert_eq!(f.segments, vec![1..3]);
        assert_eq!(f.b, 3..8);
        assert_eq!(f.revealed_value(1), val("1/4"));
        assert_eq!(f.revealed_value(7), val("0"));
        assert!(f.sqrt_k.pow(2) <= val("2"));
        let k1 = query_lb_build(2, 1, 3).unwrap();
        assert!(k1.segments.is_empty());
        assert_eq!(k1.b, 1..3);
        assert!(build_ranking(&f.revealed).is_consistent_with(&f.revealed));
        assert!(query_lb_build(3, 1, 3).is_err());
    }

    #[test]
    fn unqueried_own_good_is_dropped() {
        let f = query_lb_build(2, 2, 3).unwrap();
        let a = Allocation::from_bundles(vec![vec![0], (1..27).collect()], 27);
        let out = query_adversary_complete(&f, &Transcript::default(), &a).unwrap();
        assert_eq!(out.envious, 0);
        assert!(is_consistent_completion(&f, &Transcript::default(), &out.instance));
        assert!(out.measured_alpha <= out.bound);
        // Dropping g0 to 1/9 against S_1 worth 3 * 1/9 gives 1/3; raising B to
        // 1/9 is worse for the algorithm.
        assert!(out.alternatives.iter().any(|(c, _)| *c == Completion::DropOwnGood));
        assert!(out.measured_alpha <= val("1/3"));
    }

    #[test]
    fn contradicting_transcript_is_rejected() {
        let f = query_lb_build(2, 2, 2).unwrap();
        let t = Transcript { entries: vec![(0, 1, val("1"))] };
        let a = Allocation::from_bundles(vec![vec![0], (1..8).collect()], 8);
        assert!(matches!(
            query_adversary_complete(&f, &t, &a),
            Err(Error::InconsistentTranscript(_))
        ));
    }

    #[test]
    fn too_many_queries_leave_no_completion() {
        let f = query_lb_build(2, 2, 2).unwrap();
        let entries = (0..8).map(|g| (0, g, f.revealed_value(g))).collect();
        let t = Transcript { entries };
        let a = Allocation::from_bundles(vec![vec![0], (1..8).collect()], 8);
        assert!(matches!(
            query_adversary_complete(&f, &t, &a),
            Err(Error::InconsistentTranscript(_))
        ));
    }
}
