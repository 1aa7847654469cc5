//! Full-information allocators: exhaustive search and the envy-cycle procedure.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::allocation::Allocation;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::value::Value;

/// Largest `n^m` the exhaustive searches accept.
pub const ENUMERATION_LIMIT: u64 = 100_000_000;

/// An algorithm that sees the whole valuation matrix and returns a complete
/// allocation.
pub trait FullInfoAllocator {
    fn name(&self) -> &str;
    fn allocate(&self, instance: &Instance) -> Result<Allocation>;
}

impl<F> FullInfoAllocator for F
where
    F: Fn(&Instance) -> Result<Allocation>,
{
    fn name(&self) -> &str {
        "custom"
    }

    fn allocate(&self, instance: &Instance) -> Result<Allocation> {
        self(instance)
    }
}

/// First EFX allocation in enumeration order, or the best-α witness when none
/// exists.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExactBlackbox;

impl FullInfoAllocator for ExactBlackbox {
    fn name(&self) -> &str {
        "exact"
    }

    fn allocate(&self, instance: &Instance) -> Result<Allocation> {
        Ok(best_alpha_bruteforce(instance)?.witness)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EnvyCycleBlackbox;

impl FullInfoAllocator for EnvyCycleBlackbox {
    fn name(&self) -> &str {
        "envy_cycle"
    }

    fn allocate(&self, instance: &Instance) -> Result<Allocation> {
        Ok(envy_cycle_heuristic(instance))
    }
}

#[derive(Clone, Debug)]
pub struct BruteForceResult {
    pub best_alpha: Value,
    pub witness: Allocation,
    /// Complete allocations visited before the search stopped.
    pub enumerated: u64,
}

fn check_size(n: usize, m: usize) -> Result<u64> {
    let too_large = Error::TooLarge { n, m, limit: ENUMERATION_LIMIT };
    let m32 = u32::try_from(m).map_err(|_| Error::TooLarge { n, m, limit: ENUMERATION_LIMIT })?;
    match (n as u64).checked_pow(m32) {
        Some(total) if total <= ENUMERATION_LIMIT => Ok(total),
        _ => Err(too_large),
    }
}

/// Some allocation with `alpha_efx = 1`, or `None` if the instance has none.
pub fn exact_efx_bruteforce(instance: &Instance) -> Result<Option<Allocation>> {
    let r = best_alpha_bruteforce(instance)?;
    Ok(if r.best_alpha == Value::one() { Some(r.witness) } else { None })
}

/// Maximum `alpha_efx` over all complete allocations with the first maximizer
/// in enumeration order as witness. Good 0 is the most significant base-`n`
/// digit. The search stops at the first EFX allocation since nothing beats it.
pub fn best_alpha_bruteforce(instance: &Instance) -> Result<BruteForceResult> {
    check_size(instance.n_agents(), instance.n_goods())?;
    let rows = scaled_rows(instance);
    let fits = rows.iter().all(|row| {
        let total: BigInt = row.iter().sum();
        total.bits() < 63
    });
    let (num, den, assign, enumerated) = if fits {
        let rows: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_u64().expect("checked above")).collect())
            .collect();
        let (num, den, assign, count) = Search::new(rows).run();
        (BigInt::from(num), BigInt::from(den), assign, count)
    } else {
        Search::new(rows).run()
    };
    let best_alpha = Value::from_ratio(BigRational::new(num, den)).expect("non-negative");
    let n = instance.n_agents();
    let mut bundles = vec![Vec::new(); n];
    for (g, &a) in assign.iter().enumerate() {
        bundles[a].push(g);
    }
    Ok(BruteForceResult {
        best_alpha,
        witness: Allocation::from_bundles(bundles, instance.n_goods()),
        enumerated,
    })
}

/// Visits every complete allocation in enumeration order as an owner vector
/// and returns how many were visited.
pub fn for_each_allocation(
    n: usize,
    m: usize,
    mut visit: impl FnMut(&[usize]),
) -> Result<u64> {
    check_size(n, m)?;
    let mut assign = vec![0usize; m];
    let mut count = 0u64;
    loop {
        visit(&assign);
        count += 1;
        let mut g = m;
        loop {
            if g == 0 {
                return Ok(count);
            }
            g -= 1;
            assign[g] += 1;
            if assign[g] < n {
                break;
            }
            assign[g] = 0;
        }
    }
}

/// Each row scaled by its common denominator and divided by the gcd of its
/// entries. α-EFX only compares values of the same agent, so this is exact.
fn scaled_rows(instance: &Instance) -> Vec<Vec<BigInt>> {
    instance
        .rows()
        .iter()
        .map(|row| {
            let lcm = row.iter().fold(<BigInt as One>::one(), |acc, v| acc.lcm(v.denom()));
            let ints: Vec<BigInt> =
                row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
            let g = ints.iter().fold(<BigInt as Zero>::zero(), |acc, x| acc.gcd(x));
            if g.is_zero() || g.is_one() {
                ints
            } else {
                ints.into_iter().map(|x| x / &g).collect()
            }
        })
        .collect()
}

trait Scalar: Clone + Ord {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    /// Compares `a / b` with `c / d` for positive `b`, `d`.
    fn cmp_ratio(a: &Self, b: &Self, c: &Self, d: &Self) -> Ordering;
}

impl Scalar for u64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn cmp_ratio(a: &Self, b: &Self, c: &Self, d: &Self) -> Ordering {
        (*a as u128 * *d as u128).cmp(&(*c as u128 * *b as u128))
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn cmp_ratio(a: &Self, b: &Self, c: &Self, d: &Self) -> Ordering {
        (a * d).cmp(&(c * b))
    }
}

struct Search<T> {
    n: usize,
    m: usize,
    values: Vec<Vec<T>>,
    /// Each agent's goods by ascending value, for finding bundle minima.
    ascending: Vec<Vec<usize>>,
}

impl<T: Scalar> Search<T> {
    fn new(values: Vec<Vec<T>>) -> Self {
        let n = values.len();
        let m = values[0].len();
        let ascending = values
            .iter()
            .map(|row| {
                let mut goods: Vec<usize> = (0..m).collect();
                goods.sort_by(|&a, &b| row[a].cmp(&row[b]).then(a.cmp(&b)));
                goods
            })
            .collect();
        Search { n, m, values, ascending }
    }

    /// Returns `(num, den)` of the best capped α, its owner vector and the
    /// number of allocations visited.
    fn run(&self) -> (T, T, Vec<usize>, u64) {
        let (n, m) = (self.n, self.m);
        let mut assign = vec![0usize; m];
        // worth[i][j] = v_i(X_j)
        let mut worth = vec![vec![T::zero(); n]; n];
        for i in 0..n {
            worth[i][0] = self.values[i].iter().fold(T::zero(), |acc, v| acc.add(v));
        }
        let mut sizes = vec![0usize; n];
        sizes[0] = m;

        let mut best: Option<(T, T)> = None;
        let mut witness = assign.clone();
        let mut count = 0u64;
        loop {
            count += 1;
            if let Some(r) = self.alpha(&assign, &worth, &sizes, best.as_ref()) {
                let done = T::cmp_ratio(&r.0, &r.1, &T::one(), &T::one()) == Ordering::Equal;
                best = Some(r);
                witness.copy_from_slice(&assign);
                if done {
                    break;
                }
            }
            // Advance the odometer; the last good is the fastest digit.
            let mut g = m;
            let finished = loop {
                if g == 0 {
                    break true;
                }
                g -= 1;
                let old = assign[g];
                let new = if old + 1 == n { 0 } else { old + 1 };
                assign[g] = new;
                sizes[old] -= 1;
                sizes[new] += 1;
                for i in 0..n {
                    let v = &self.values[i][g];
                    worth[i][old] = worth[i][old].sub(v);
                    worth[i][new] = worth[i][new].add(v);
                }
                if new != 0 {
                    break false;
                }
            };
            if finished {
                break;
            }
        }
        let (num, den) = best.expect("at least one allocation");
        (num, den, witness, count)
    }

    /// The capped α of the current allocation, or `None` when it cannot beat
    /// `best`.
    fn alpha(
        &self,
        assign: &[usize],
        worth: &[Vec<T>],
        sizes: &[usize],
        best: Option<&(T, T)>,
    ) -> Option<(T, T)> {
        let mut cur = (T::one(), T::one());
        for i in 0..self.n {
            let own = &worth[i][i];
            for j in 0..self.n {
                if j == i || sizes[j] == 0 || own >= &worth[i][j] {
                    continue;
                }
                let worst = self.ascending[i]
                    .iter()
                    .find(|&&g| assign[g] == j)
                    .expect("nonempty bundle");
                let rest = worth[i][j].sub(&self.values[i][*worst]);
                if rest == T::zero() {
                    continue;
                }
                if T::cmp_ratio(own, &rest, &cur.0, &cur.1) == Ordering::Less {
                    cur = (own.clone(), rest);
                    if let Some((bn, bd)) = best {
                        if T::cmp_ratio(&cur.0, &cur.1, bn, bd) != Ordering::Greater {
                            return None;
                        }
                    }
                }
            }
        }
        match best {
            Some((bn, bd)) if T::cmp_ratio(&cur.0, &cur.1, bn, bd) != Ordering::Greater => None,
            _ => Some(cur),
        }
    }
}

/// Envy-cycle elimination. Goods are handed out by descending maximum value
/// (ties by index) to the lowest-index agent nobody envies; when every agent is
/// envied, the cycle found by walking back from agent 0 along lowest-index
/// enviers is rotated first.
pub fn envy_cycle_heuristic(instance: &Instance) -> Allocation {
    let n = instance.n_agents();
    let m = instance.n_goods();
    let mut order: Vec<usize> = (0..m).collect();
    let peak: Vec<Value> = (0..m)
        .map(|g| (0..n).map(|i| instance.value(i, g)).max().expect("n >= 2").clone())
        .collect();
    order.sort_by(|&a, &b| peak[b].cmp(&peak[a]).then(a.cmp(&b)));

    let mut bundles: Vec<Vec<usize>> = vec![Vec::new(); n];
    // worth[i][j] = v_i(bundle j)
    let mut worth = vec![vec![Value::zero(); n]; n];
    let envies = |worth: &[Vec<Value>], i: usize, j: usize| i != j && worth[i][j] > worth[i][i];

    for g in order {
        let target = loop {
            if let Some(j) = (0..n).find(|&j| (0..n).all(|i| !envies(&worth, i, j))) {
                break j;
            }
            // Everyone is envied: walk back along enviers until a repeat.
            let mut seen = vec![usize::MAX; n];
            let mut path = Vec::new();
            let mut c = 0;
            while seen[c] == usize::MAX {
                seen[c] = path.len();
                path.push(c);
                c = (0..n).find(|&e| envies(&worth, e, c)).expect("every agent is envied");
            }
            let cycle = &path[seen[c]..];
            // cycle[t + 1] envies cycle[t] and takes its bundle; the first
            // member envies the last.
            let len = cycle.len();
            let old: Vec<Vec<usize>> = cycle.iter().map(|&a| bundles[a].clone()).collect();
            for t in 0..len {
                let receiver = cycle[(t + 1) % len];
                bundles[receiver] = old[t].clone();
            }
            for i in 0..n {
                let cols: Vec<Value> = cycle.iter().map(|&a| worth[i][a].clone()).collect();
                for t in 0..len {
                    worth[i][cycle[(t + 1) % len]] = cols[t].clone();
                }
            }
        };
        bundles[target].push(g);
        for i in 0..n {
            worth[i][target] += instance.value(i, g);
        }
    }
    Allocation::from_bundles(bundles, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::evaluate;
    use crate::value::val;

    #[test]
    fn two_goods_all_ones() {
        let inst = Instance::from_integers(&[[1u64, 1], [1, 1]]).unwrap();
        let r = best_alpha_bruteforce(&inst).unwrap();
        assert_eq!(r.best_alpha, val("1"));
        assert_eq!(evaluate(&inst, &r.witness).unwrap().alpha_efx, val("1"));
        assert!(r.witness.bundles().iter().all(|b| b.len() == 1));
        assert!(exact_efx_bruteforce(&inst).unwrap().is_some());
    }

    #[test]
    fn single_valuable_good() {
        let inst = Instance::from_integers(&[[1u64, 0, 0, 0, 0], [1, 0, 0, 0, 0]]).unwrap();
        assert_eq!(best_alpha_bruteforce(&inst).unwrap().best_alpha, val("1"));
    }

    #[test]
    fn guard_rejects_huge_searches() {
        let inst = Instance::from_integers(&[[1u64; 27], [1; 27]]).unwrap();
        assert!(matches!(best_alpha_bruteforce(&inst), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn enumeration_counts_every_allocation() {
        let mut seen = Vec::new();
        let count = for_each_allocation(2, 3, |a| seen.push(a.to_vec())).unwrap();
        assert_eq!(count, 8);
        assert_eq!(seen[0], vec![0, 0, 0]);
        assert_eq!(seen[1], vec![0, 0, 1]);
        assert_eq!(seen[7], vec![1, 1, 1]);
        assert_eq!(for_each_allocation(3, 4, |_| {}).unwrap(), 81);
    }

    #[test]
    fn fractional_and_huge_values_take_the_big_path() {
        let big = Value::from_integer(u64::MAX);
        let inst = Instance::new(vec![
            vec![big.clone(), big.clone(), val("1/3")],
            vec![val("1"), val("2"), val("3")],
        ])
        .unwrap();
        let r = best_alpha_bruteforce(&inst).unwrap();
        assert_eq!(evaluate(&inst, &r.witness).unwrap().alpha_efx, r.best_alpha);
    }

    #[test]
    fn envy_cycle_identical_valuations() {
        let inst = Instance::from_integers(&[[4u64, 3, 2, 1], [4, 3, 2, 1]]).unwrap();
        let a = envy_cycle_heuristic(&inst);
        assert!(a.is_complete());
        assert_eq!(a.bundles(), &[vec![0, 3], vec![1, 2]]);
        assert_eq!(evaluate(&inst, &a).unwrap().alpha_ef1, val("1"));
    }

    #[test]
    fn envy_cycle_rotates() {
        // Agent 0 prefers g1, agent 1 prefers g0; after two picks each envies
        // the other, so the third good forces a rotation.
        let inst = Instance::from_integers(&[[5u64, 9, 1], [9, 5, 1]]).unwrap();
        let a = envy_cycle_heuristic(&inst);
        let r = evaluate(&inst, &a).unwrap();
        assert_eq!(r.alpha_ef1, val("1"));
        assert!(a.is_complete());
    }

    #[test]
    fn envy_cycle_all_zero() {
        let inst = Instance::from_integers(&[[0u64; 4], [0; 4], [0; 4]]).unwrap();
        let a = envy_cycle_heuristic(&inst);
        assert!(a.is_complete());
        assert_eq!(evaluate(&inst, &a).unwrap().alpha_efx, val("1"));
    }
}
