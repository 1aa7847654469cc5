//! Exact α-EFX and α-EF1 factors.

use serde::Serialize;

use crate::allocation::Allocation;
use crate::error::Result;
use crate::instance::Instance;
use crate::value::Value;

/// The pair `(envious, envied)` attaining the minimum, and the good whose
/// removal defines the bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Binding {
    pub envious: usize,
    pub envied: usize,
    pub removed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FairnessReport {
    pub alpha_efx: Value,
    pub alpha_ef1: Value,
    pub efx_binding: Option<Binding>,
    pub ef1_binding: Option<Binding>,
    /// Smallest uncapped EFX ratio over constraining pairs.
    pub raw_efx_ratio: Option<Value>,
}

impl FairnessReport {
    pub fn is_efx(&self) -> bool {
        self.alpha_efx == Value::one()
    }
}

#[derive(Clone, Copy)]
enum Removal {
    Worst,
    Best,
}

/// Returns the smallest ratio and where it is attained. `None` when no pair
/// constrains.
fn min_ratio(
    instance: &Instance,
    allocation: &Allocation,
    removal: Removal,
) -> Option<(Value, Binding)> {
    let n = allocation.n_agents();
    let mut best: Option<(Value, Binding)> = None;
    for i in 0..n {
        let own = instance.bundle_value(i, allocation.bundle(i));
        for j in 0..n {
            let other = allocation.bundle(j);
            if j == i || other.is_empty() {
                continue;
            }
            // First good attaining the extreme; bundles are sorted, so ties go
            // to the lowest index.
            let mut removed = other[0];
            for &g in &other[1..] {
                let better = match removal {
                    Removal::Worst => instance.value(i, g) < instance.value(i, removed),
                    Removal::Best => instance.value(i, g) > instance.value(i, removed),
                };
                if better {
                    removed = g;
                }
            }
            let total = instance.bundle_value(i, other);
            let rest = total
                .checked_sub(instance.value(i, removed))
                .expect("a bundle is worth at least any of its goods");
            let Some(ratio) = own.checked_div(&rest) else {
                continue;
            };
            if best.as_ref().map_or(true, |(b, _)| ratio < *b) {
                best = Some((ratio, Binding { envious: i, envied: j, removed }));
            }
        }
    }
    best
}

/// Computes both factors. Fails with `InvalidAllocation` on overlapping bundles
/// or unknown goods.
pub fn evaluate(instance: &Instance, allocation: &Allocation) -> Result<FairnessReport> {
    allocation.validate_structure(instance)?;
    let efx = min_ratio(instance, allocation, Removal::Worst);
    let ef1 = min_ratio(instance, allocation, Removal::Best);
    let (alpha_efx, efx_binding, raw_efx_ratio) = match efx {
        Some((r, b)) => (r.clone().cap_one(), Some(b), Some(r)),
        None => (Value::one(), None, None),
    };
    let (alpha_ef1, ef1_binding) = match ef1 {
        Some((r, b)) => (r.cap_one(), Some(b)),
        None => (Value::one(), None),
    };
    Ok(FairnessReport { alpha_efx, alpha_ef1, efx_binding, ef1_binding, raw_efx_ratio })
}

pub fn alpha_efx(instance: &Instance, allocation: &Allocation) -> Result<FairnessReport> {
    evaluate(instance, allocation)
}

pub fn alpha_ef1(instance: &Instance, allocation: &Allocation) -> Result<FairnessReport> {
    evaluate(instance, allocation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::val;

    fn alloc(bundles: Vec<Vec<usize>>, m: usize) -> Allocation {
        Allocation::from_bundles(bundles, m)
    }

    #[test]
    fn singletons_are_efx() {
        let inst = Instance::from_integers(&[[1u64, 1], [1, 1]]).unwrap();
        let r = evaluate(&inst, &alloc(vec![vec![0], vec![1]], 2)).unwrap();
        assert_eq!(r.alpha_efx, val("1"));
        assert_eq!(r.raw_efx_ratio, None);
    }

    #[test]
    fn worst_removal_gives_one_third() {
        let inst = Instance::from_integers(&[[3u64, 1, 1], [1, 1, 1]]).unwrap();
        let r = evaluate(&inst, &alloc(vec![vec![1], vec![0, 2]], 3)).unwrap();
        assert_eq!(r.alpha_efx, val("1/3"));
        assert_eq!(r.efx_binding, Some(Binding { envious: 0, envied: 1, removed: 2 }));
        assert_eq!(r.alpha_ef1, val("1"));
        assert_eq!(r.ef1_binding, Some(Binding { envious: 0, envied: 1, removed: 0 }));
    }

    #[test]
    fn all_ones_big_bundle() {
        // n = 3, m = 6: two singletons and one bundle of four goods.
        let inst = Instance::from_integers(&[[1u64; 6], [1; 6], [1; 6]]).unwrap();
        let r = evaluate(&inst, &alloc(vec![vec![0], vec![1], vec![2, 3, 4, 5]], 6)).unwrap();
        assert_eq!(r.alpha_efx, val("1/3"));
    }

    #[test]
    fn empty_bundle_is_skipped() {
        // Agent 1 values the single good held by agent 0 at 0 and nobody looks
        // at the empty bundle.
        let inst = Instance::from_integers(&[[1u64, 1], [0, 1]]).unwrap();
        let r = evaluate(&inst, &alloc(vec![vec![0], vec![]], 2)).unwrap();
        assert_eq!(r.alpha_ef1, val("1"));
        assert_eq!(r.alpha_efx, val("1"));
    }

    #[test]
    fn raw_ratio_is_uncapped() {
        let inst = Instance::from_integers(&[[5u64, 1, 1], [1, 1, 1]]).unwrap();
        let r = evaluate(&inst, &alloc(vec![vec![0], vec![1, 2]], 3)).unwrap();
        assert_eq!(r.raw_efx_ratio, Some(val("5")));
        assert_eq!(r.alpha_efx, val("1"));
    }

    #[test]
    fn overlapping_bundles_are_rejected() {
        let inst = Instance::from_integers(&[[1u64, 1], [1, 1]]).unwrap();
        assert!(evaluate(&inst, &alloc(vec![vec![0], vec![0]], 2)).is_err());
    }
}
