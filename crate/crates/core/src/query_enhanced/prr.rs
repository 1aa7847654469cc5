//! Partition-and-RoundRobin: agents whose favourite good clearly dominates
//! their ranking take it alone, the rest share the leftovers round-robin.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::allocation::Allocation;
use crate::elicitation::QueryOracle;
use crate::enclosure::{root, sqrt};
use crate::error::{Error, Result};
use crate::ordinal::{round_robin_picks, trivial_allocation};
use crate::value::Value;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PRRParams {
    pub k: usize,
    /// Segment sizes `alpha_1..alpha_{k-1}`.
    pub alpha: Vec<usize>,
    /// Dominance thresholds `beta_1..beta_{k-1}`.
    pub beta: Vec<Value>,
    pub lambda: Value,
}

impl PRRParams {
    pub fn new(k: usize, alpha: Vec<usize>, beta: Vec<Value>, lambda: Value, m: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::ParamDomain("k must be at least 1".into()));
        }
        if alpha.len() != k - 1 || beta.len() != k - 1 {
            return Err(Error::ParamDomain(format!(
                "k = {k} needs {} segment sizes and thresholds",
                k - 1
            )));
        }
        if alpha.iter().any(|&a| a == 0) {
            return Err(Error::ParamDomain("segment sizes must be positive".into()));
        }
        if beta.iter().any(Value::is_zero) {
            return Err(Error::ParamDomain("thresholds must be positive".into()));
        }
        let total: usize = alpha.iter().sum();
        if total >= m {
            return Err(Error::ParamDomain(format!(
                "segment sizes sum to {total}, which leaves no goods of the {m} for the last segment"
            )));
        }
        Ok(PRRParams { k, alpha, beta, lambda })
    }
}

fn exponent(k: usize) -> u32 {
    (2 * k - 1) as u32
}

/// The smallest admissible scale: `max(1, n / m^(1/(2k-1)))`, rounded up to a
/// rational through the lower enclosure of the root.
pub fn tradeoff_lambda(n: usize, m: usize, k: usize) -> Value {
    let mroot = root(&Value::from_integer(m as u64), exponent(k));
    let floor = &Value::from_integer(n as u64) / mroot.lo();
    floor.max(Value::one())
}

/// Segment sizes `ceil(lambda * m^((2l-1)/(2k-1)))` and thresholds
/// `sqrt(k) * m^(2l/(2k-1))` for `l = 1..k-1`.
pub fn tradeoff_params(n: usize, m: usize, k: usize, lambda: &Value) -> Result<PRRParams> {
    if k == 0 {
        return Err(Error::ParamDomain("k must be at least 1".into()));
    }
    let e = exponent(k);
    let mv = Value::from_integer(m as u64);
    let nv = Value::from_integer(n as u64);
    // lambda >= n / m^(1/e)  <=>  lambda^e * m >= n^e
    if *lambda < Value::one() || &lambda.pow(e) * &mv < nv.pow(e) {
        return Err(Error::ParamDomain(format!(
            "lambda = {lambda} is below max(1, {n} / {m}^(1/{e}))"
        )));
    }
    let mut alpha = Vec::with_capacity(k - 1);
    let mut beta = Vec::with_capacity(k - 1);
    let kv = Value::from_integer(k as u64);
    for l in 1..k as u32 {
        let x = &lambda.pow(e) * &mv.pow(2 * l - 1);
        let size = crate::enclosure::ceil_power(&x, 1, e);
        let size = size.to_usize().ok_or_else(|| Error::ParamDomain("segment size overflow".into()))?;
        alpha.push(size);
        let b = &kv.pow(e) * &mv.pow(4 * l);
        beta.push(root(&b, 2 * e).lo().clone());
    }
    PRRParams::new(k, alpha, beta, lambda.clone(), m)
}

/// `min{1/((sqrt(k)+1) lambda M), 1/(1 + sqrt(k) (n/lambda) M)}` with
/// `M = m^(1/(2k-1))`, evaluated on upper enclosures so the result never
/// exceeds the exact bound.
pub fn tradeoff_bound(n: usize, m: usize, k: usize, lambda: &Value) -> Value {
    let sk = sqrt(&Value::from_integer(k as u64)).hi().clone();
    let big_m = root(&Value::from_integer(m as u64), exponent(k)).hi().clone();
    let one = Value::one();
    let first = &(&(&sk + &one) * lambda) * &big_m;
    let n_over = &Value::from_integer(n as u64) / lambda;
    let second = &one + &(&(&sk * &n_over) * &big_m);
    let a = first.recip().expect("positive");
    let b = second.recip().expect("positive");
    a.min(b)
}

/// Runs the main loop and finishes with round-robin over the agents that never
/// received a single good.
pub fn prr(oracle: &mut QueryOracle, params: &PRRParams) -> Result<Allocation> {
    let n = oracle.n_agents();
    let m = oracle.n_goods();
    if m < n {
        return Ok(trivial_allocation(n, m));
    }
    let profile = oracle.ordinal_view().clone();
    let mut available = vec![true; m];
    let mut active = vec![true; n];
    let mut in_b = vec![false; n];
    let mut b_count = 0usize;
    let mut bundles: Vec<Vec<usize>> = vec![Vec::new(); n];

    'main: while b_count < n - 1 && active.iter().any(|&a| a) {
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in (0..n).filter(|&i| active[i]) {
            let g = profile.top_available(i, &available).expect("m >= n keeps goods available");
            groups.entry(g).or_default().push(i);
        }
        for (g, agents) in groups {
            for i in agents {
                let order: Vec<usize> = profile.available_in_order(i, &available).collect();
                debug_assert_eq!(order[0], g);
                // Tops of the segments: sizes alpha_1..alpha_{k-1}, then the rest.
                let mut tops = Vec::with_capacity(params.k);
                let mut start = 0;
                for &size in &params.alpha {
                    if start >= order.len() {
                        break;
                    }
                    tops.push(order[start]);
                    start += size;
                }
                if start < order.len() {
                    tops.push(order[start]);
                }
                let mut values = Vec::with_capacity(tops.len());
                for &t in &tops {
                    values.push(oracle.query(i, t)?);
                }
                active[i] = false;
                let dominant = values
                    .iter()
                    .enumerate()
                    .skip(1)
                    .all(|(l, v)| values[0] >= &params.beta[l - 1] * v);
                if dominant {
                    bundles[i].push(g);
                    available[g] = false;
                    in_b[i] = true;
                    b_count += 1;
                    if b_count == n - 1 {
                        break 'main;
                    }
                    break;
                }
            }
        }
    }

    let rest: Vec<usize> = (0..n).filter(|&i| !in_b[i]).collect();
    let picks = round_robin_picks(oracle, &rest, &mut available);
    for (i, b) in picks.into_iter().enumerate() {
        bundles[i].extend(b);
    }
    Ok(Allocation::from_bundles(bundles, m))
}

/// Two queries per agent on bivalued instances: one singleton segment of size
/// `n - 1` and threshold `m / 2`.
pub fn two_query_params(n: usize, m: usize) -> Result<PRRParams> {
    if m < 2 * n {
        return Err(Error::Domain(format!("two_query needs m >= 2n, got n = {n}, m = {m}")));
    }
    let half = Value::from_ratio(BigRational::new(BigInt::from(m), BigInt::from(2)))
        .expect("non-negative");
    PRRParams::new(2, vec![n - 1], vec![half], Value::one(), m)
}

pub fn two_query(oracle: &mut QueryOracle) -> Result<Allocation> {
    let params = two_query_params(oracle.n_agents(), oracle.n_goods())?;
    prr(oracle, &params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Instance;
    use crate::metrics::evaluate;
    use crate::value::val;

    #[test]
    fn tradeoff_params_trace() {
        let p = tradeoff_params(2, 8, 2, &val("1")).unwrap();
        assert_eq!(p.alpha, vec![2]);
        // beta_1 = 4 sqrt(2), enclosed from below.
        let b = &p.beta[0];
        assert!(b.pow(2) <= val("32"));
        assert!(&(b + &val("1/1000000000")).pow(2) > &val("32"));
    }

    #[test]
    fn k1_has_no_interior_cuts() {
        let p = tradeoff_params(2, 8, 1, &val("1")).unwrap();
        assert!(p.alpha.is_empty() && p.beta.is_empty());
    }

    #[test]
    fn lambda_floor_is_enforced() {
        // n / m^(1/3) = 4 / 2 = 2 for m = 8, k = 2.
        assert!(matches!(tradeoff_params(4, 8, 2, &val("3/2")), Err(Error::ParamDomain(_))));
        assert_eq!(tradeoff_params(4, 8, 2, &val("2")).unwrap().alpha, vec![4]);
        assert!(matches!(tradeoff_params(2, 8, 2, &val("4")), Err(Error::ParamDomain(_))));
        assert_eq!(tradeoff_lambda(4, 8, 2), val("2"));
        assert_eq!(tradeoff_lambda(2, 8, 2), val("1"));
    }

    #[test]
    fn dominant_top_good_goes_alone() {
        let row = [9u64, 1, 1, 1, 1, 1, 1, 1];
        let inst = Instance::from_integers(&[row, row]).unwrap();
        let mut o = QueryOracle::new(&inst);
        let p = PRRParams::new(2, vec![1], vec![val("4")], val("1"), 8).unwrap();
        let a = prr(&mut o, &p).unwrap();
        assert_eq!(a.bundle(0), &[0]);
        assert_eq!(a.bundle(1), &[1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(o.snapshot_counts(), vec![2, 0]);
        assert_eq!(evaluate(&inst, &a).unwrap().alpha_efx, val("1"));

        let mut o2 = QueryOracle::new(&inst);
        assert_eq!(two_query(&mut o2).unwrap(), a);
    }

    #[test]
    fn nobody_dominant_falls_back_to_round_robin() {
        let row = [1u64; 8];
        let inst = Instance::from_integers(&[row, row, row]).unwrap();
        let mut o = QueryOracle::new(&inst);
        let p = PRRParams::new(2, vec![2], vec![val("4")], val("1"), 8).unwrap();
        let a = prr(&mut o, &p).unwrap();
        let rr = crate::ordinal::round_robin(&QueryOracle::new(&inst), None, None);
        assert_eq!(a, rr);
        assert!(o.snapshot_counts().iter().all(|&c| c <= 2));
    }

    #[test]
    fn bound_is_positive_and_at_most_one() {
        let lam = tradeoff_lambda(3, 243, 3);
        let b = tradeoff_bound(3, 243, 3, &lam);
        assert!(!b.is_zero() && b <= val("1"));
    }
}
