//! Threshold-bucket virtual valuations fed to a full-information black box.

use crate::allocation::Allocation;
use crate::elicitation::QueryOracle;
use crate::enclosure::inverse_power;
use crate::error::{Error, Result};
use crate::fullinfo::FullInfoAllocator;
use crate::instance::Instance;
use crate::metrics::evaluate;
use crate::ordinal::trivial_allocation;
use crate::ranking::PreferenceProfile;
use crate::value::Value;

/// One agent's queried prefix and bucket cuts.
///
/// Bucket `S_l` (1-based, `l <= k`) covers ranking positions
/// `[cuts[l-1], cuts[l])` with `cuts[0] = n - 1`; positions from `cuts[k]` on
/// form the valueless last bucket.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgentBuckets {
    pub top_values: Vec<Value>,
    pub cuts: Vec<usize>,
}

impl AgentBuckets {
    /// The bucket index of a ranking position: 0 for the queried prefix,
    /// `1..=k` for threshold buckets, `k + 1` for the rest.
    pub fn bucket_of(&self, position: usize) -> usize {
        if position < self.cuts[0] {
            return 0;
        }
        match self.cuts[1..].iter().position(|&c| position < c) {
            Some(l) => l + 1,
            None => self.cuts.len(),
        }
    }

    /// The base `v_{i,n-1}` every threshold is scaled by.
    pub fn base(&self) -> Value {
        self.top_values.last().cloned().unwrap_or_else(Value::zero)
    }
}

#[derive(Clone, Debug)]
pub struct VirtualValuation {
    pub k: usize,
    /// `thetas[l]` for `l = 0..=k`; `thetas[0] = 1` and `thetas[l] = t^l` where
    /// `t <= m^(-1/(k+1))`.
    pub thetas: Vec<Value>,
    pub agents: Vec<AgentBuckets>,
}

impl VirtualValuation {
    /// Virtual value of the good at `position` in the agent's ranking.
    pub fn value_at(&self, agent: usize, position: usize) -> Value {
        let b = &self.agents[agent];
        match b.bucket_of(position) {
            0 => b.top_values[position].clone(),
            l if l <= self.k => &b.base() * &self.thetas[l],
            _ => Value::zero(),
        }
    }

    pub fn to_instance(&self, profile: &PreferenceProfile) -> Result<Instance> {
        let m = profile.n_goods();
        let rows = (0..self.agents.len())
            .map(|i| {
                let mut row = vec![Value::zero(); m];
                for (p, &g) in profile.ranking(i).iter().enumerate() {
                    row[g] = self.value_at(i, p);
                }
                row
            })
            .collect();
        Instance::new(rows)
    }
}

/// `thetas[l] = t^l` for `l = 0..=k`, with `t` the lower enclosure of
/// `m^(-1/(k+1))`.
pub fn thresholds(m: usize, k: usize) -> Vec<Value> {
    let t = inverse_power(&Value::from_integer(m as u64), 1, (k + 1) as u32).lo().clone();
    let mut thetas = vec![Value::one()];
    for l in 1..=k {
        let next = &thetas[l - 1] * &t;
        thetas.push(next);
    }
    thetas
}

/// Per-agent query ceiling: `(n - 1) + k * ceil(log2 m)`.
pub fn query_ceiling(n: usize, m: usize, k: usize) -> usize {
    (n - 1) + k * ceil_log2(m)
}

pub fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// Queries the agent's top `n - 1` goods, then binary-searches one cut per
/// threshold.
pub fn bucketize(oracle: &mut QueryOracle, agent: usize, k: usize) -> Result<AgentBuckets> {
    let thetas = thresholds(oracle.n_goods(), k);
    bucketize_with(oracle, agent, &thetas)
}

fn bucketize_with(oracle: &mut QueryOracle, agent: usize, thetas: &[Value]) -> Result<AgentBuckets> {
    let n = oracle.n_agents();
    let m = oracle.n_goods();
    let k = thetas.len() - 1;
    let prefix = n - 1;
    let mut top_values = Vec::with_capacity(prefix);
    for r in 0..prefix {
        top_values.push(oracle.query_rank(agent, r)?);
    }
    let base = top_values.last().cloned().unwrap_or_else(Value::zero);
    let mut cuts = vec![prefix; k + 1];
    if base.is_zero() {
        return Ok(AgentBuckets { top_values, cuts });
    }
    for l in 1..=k {
        let threshold = &base * &thetas[l];
        // First position at or after the previous cut whose value drops below
        // the threshold.
        let (mut lo, mut hi) = (cuts[l - 1], m);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if oracle.query_rank(agent, mid)? >= threshold {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        cuts[l] = lo;
    }
    Ok(AgentBuckets { top_values, cuts })
}

#[derive(Clone, Debug)]
pub struct VirtualEfxOutcome {
    pub allocation: Allocation,
    pub virtual_valuation: Option<VirtualValuation>,
    /// `alpha_efx` of the allocation under the virtual valuations.
    pub measured_rho: Value,
}

/// Builds every agent's virtual valuation, hands the materialized instance to
/// `blackbox` and reports how fair its answer is under the virtual values.
pub fn virtual_efx(
    oracle: &mut QueryOracle,
    k: usize,
    blackbox: &dyn FullInfoAllocator,
) -> Result<VirtualEfxOutcome> {
    if k == 0 {
        return Err(Error::ParamDomain("virtual_efx needs k >= 1".into()));
    }
    let n = oracle.n_agents();
    let m = oracle.n_goods();
    if m < n {
        return Ok(VirtualEfxOutcome {
            allocation: trivial_allocation(n, m),
            virtual_valuation: None,
            measured_rho: Value::one(),
        });
    }
    let thetas = thresholds(m, k);
    let agents = (0..n)
        .map(|i| bucketize_with(oracle, i, &thetas))
        .collect::<Result<Vec<_>>>()?;
    let vv = VirtualValuation { k, thetas, agents };
    let virtual_instance = vv.to_instance(oracle.ordinal_view())?;
    let allocation = blackbox.allocate(&virtual_instance)?;
    if let Err(e) = allocation.validate(&virtual_instance) {
        return Err(Error::BlackboxInvalid(e.to_string()));
    }
    if !allocation.is_complete() {
        return Err(Error::BlackboxInvalid("allocation is not complete".into()));
    }
    let measured_rho = evaluate(&virtual_instance, &allocation)?.alpha_efx;
    Ok(VirtualEfxOutcome { allocation, virtual_valuation: Some(vv), measured_rho })
}

/// `measured_rho * t / 2` with `t <= m^(-1/(k+1))`, a sound lower bound on the
/// true `alpha_efx` of the output.
pub fn virtual_efx_bound(measured_rho: &Value, m: usize, k: usize) -> Value {
    let t = inverse_power(&Value::from_integer(m as u64), 1, (k + 1) as u32).lo().clone();
    &(measured_rho * &t) / &Value::from_integer(2)
}
