//! Seeded instance generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adversarial::{ordinal_lb_build, query_lb_build};
use crate::error::{Error, Result};
use crate::instance::{BivaluedMeta, Instance};
use crate::value::Value;

/// Environment variable holding the default seed.
pub const SEED_ENV: &str = "EFX_LAB_SEED";

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed from `EFX_LAB_SEED`, or 0.
pub fn default_seed() -> u64 {
    std::env::var(SEED_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(0)
}

/// Derives the seed of trial `index` from a base seed.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenKind {
    Uniform,
    Bivalued,
    OrdinalLb,
    QueryLb,
}

impl std::str::FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(GenKind::Uniform),
            "bivalued" => Ok(GenKind::Bivalued),
            "ordinal_lb" => Ok(GenKind::OrdinalLb),
            "query_lb" => Ok(GenKind::QueryLb),
            other => Err(Error::Domain(format!("unknown instance kind `{other}`"))),
        }
    }
}

impl GenKind {
    pub fn name(self) -> &'static str {
        match self {
            GenKind::Uniform => "uniform",
            GenKind::Bivalued => "bivalued",
            GenKind::OrdinalLb => "ordinal_lb",
            GenKind::QueryLb => "query_lb",
        }
    }
}

/// Parameters for [`generate`]. Unused fields are ignored by each kind.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    pub kind: GenKind,
    pub n: usize,
    #[serde(default)]
    pub m: usize,
    #[serde(default)]
    pub k: usize,
    #[serde(default)]
    pub t: usize,
    /// Largest integer value for `uniform`.
    #[serde(default = "default_max_value")]
    pub max_value: u64,
    /// Which ordinal family member to emit: 1 or 2.
    #[serde(default = "default_case")]
    pub case: u8,
}

fn default_max_value() -> u64 {
    100
}

fn default_case() -> u8 {
    2
}

impl GenParams {
    pub fn new(kind: GenKind, n: usize, m: usize) -> Self {
        GenParams { kind, n, m, k: 0, t: 0, max_value: default_max_value(), case: default_case() }
    }
}

pub fn generate(params: &GenParams, seed: u64) -> Result<Instance> {
    let mut rng = seeded_rng(seed);
    match params.kind {
        GenKind::Uniform => random_uniform(&mut rng, params.n, params.m, params.max_value),
        GenKind::Bivalued => random_bivalued(&mut rng, params.n, params.m),
        GenKind::OrdinalLb => {
            let f = ordinal_lb_build(params.n, params.m)?;
            match params.case {
                1 => Ok(f.case1),
                2 => Ok(f.case2),
                c => Err(Error::Domain(format!("ordinal family case must be 1 or 2, got {c}"))),
            }
        }
        GenKind::QueryLb => Ok(query_lb_build(params.n, params.k, params.t)?.revealed),
    }
}

/// Integer values drawn uniformly from `0..=max_value`.
pub fn random_uniform<R: Rng>(rng: &mut R, n: usize, m: usize, max_value: u64) -> Result<Instance> {
    let rows = (0..n)
        .map(|_| (0..m).map(|_| Value::from_integer(rng.gen_range(0..=max_value))).collect())
        .collect();
    Instance::new(rows)
}

/// Each agent draws `l` in `1..=6` and `h = l + d` with `d` in `1..=12`; each
/// good is high with probability 1/2.
pub fn random_bivalued<R: Rng>(rng: &mut R, n: usize, m: usize) -> Result<Instance> {
    let mut rows = Vec::with_capacity(n);
    let mut meta = Vec::with_capacity(n);
    for _ in 0..n {
        let low = rng.gen_range(1..=6u64);
        let high = low + rng.gen_range(1..=12u64);
        let (h, l) = (Value::from_integer(high), Value::from_integer(low));
        rows.push((0..m).map(|_| if rng.gen_bool(0.5) { h.clone() } else { l.clone() }).collect());
        meta.push(BivaluedMeta { high: h, low: l });
    }
    Instance::with_bivalued(rows, meta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_instance() {
        let p = GenParams::new(GenKind::Uniform, 3, 10);
        assert_eq!(
            generate(&p, 7).unwrap().to_json_string(),
            generate(&p, 7).unwrap().to_json_string()
        );
        assert_ne!(generate(&p, 7).unwrap(), generate(&p, 8).unwrap());
    }

    #[test]
    fn bivalued_has_meta() {
        let inst = generate(&GenParams::new(GenKind::Bivalued, 4, 9), 1).unwrap();
        let meta = inst.bivalued().unwrap();
        for (i, bm) in meta.iter().enumerate() {
            assert!(bm.high > bm.low && !bm.low.is_zero());
            assert!(inst.row(i).iter().all(|v| *v == bm.high || *v == bm.low));
        }
    }

    #[test]
    fn query_family_size() {
        let p = GenParams { k: 2, t: 2, ..GenParams::new(GenKind::QueryLb, 2, 0) };
        assert_eq!(generate(&p, 0).unwrap().n_goods(), 8);
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(5, 0), derive_seed(5, 1));
        assert_eq!(derive_seed(5, 3), derive_seed(5, 3));
    }
}
