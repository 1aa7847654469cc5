//! Valuation instances and their JSON file format.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::value::Value;

/// Personalized high/low values of one agent in a bivalued instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BivaluedMeta {
    #[serde(rename = "h")]
    pub high: Value,
    #[serde(rename = "l")]
    pub low: Value,
}

/// An `n x m` additive valuation matrix over exact non-negative rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    values: Vec<Vec<Value>>,
    bivalued: Option<Vec<BivaluedMeta>>,
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    n: usize,
    m: usize,
    values: Vec<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bivalued: Option<Vec<BivaluedMeta>>,
}

impl Instance {
    pub fn new(values: Vec<Vec<Value>>) -> Result<Self> {
        let n = values.len();
        if n < 2 {
            return Err(Error::InvalidInstance(format!("need at least 2 agents, got {n}")));
        }
        let m = values[0].len();
        if m < 2 {
            return Err(Error::InvalidInstance(format!("need at least 2 goods, got {m}")));
        }
        if let Some(i) = values.iter().position(|row| row.len() != m) {
            return Err(Error::InvalidInstance(format!(
                "row {i} has {} values, expected {m}",
                values[i].len()
            )));
        }
        Ok(Instance { values, bivalued: None })
    }

    /// Builds a bivalued instance; every value of agent `i` must be `h_i` or `l_i`
    /// with `h_i > l_i > 0`.
    pub fn with_bivalued(values: Vec<Vec<Value>>, meta: Vec<BivaluedMeta>) -> Result<Self> {
        let mut inst = Instance::new(values)?;
        if meta.len() != inst.n_agents() {
            return Err(Error::InvalidInstance(format!(
                "bivalued metadata has {} entries for {} agents",
                meta.len(),
                inst.n_agents()
            )));
        }
        for (i, (row, bm)) in inst.values.iter().zip(&meta).enumerate() {
            if bm.low.is_zero() {
                return Err(Error::ZeroLowValue { agent: i });
            }
            if bm.high <= bm.low {
                return Err(Error::InvalidInstance(format!(
                    "agent {i}: high value {} must exceed low value {}",
                    bm.high, bm.low
                )));
            }
            if let Some(g) = row.iter().position(|v| *v != bm.high && *v != bm.low) {
                return Err(Error::NotBivalued(format!(
                    "agent {i} values good {g} at {}, outside {{{}, {}}}",
                    row[g], bm.high, bm.low
                )));
            }
        }
        inst.bivalued = Some(meta);
        Ok(inst)
    }

    /// Integer-valued instance, mostly for tests and examples.
    pub fn from_integers<R: AsRef<[u64]>>(rows: &[R]) -> Result<Self> {
        Instance::new(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| Value::from_integer(v)).collect())
                .collect(),
        )
    }

    pub fn n_agents(&self) -> usize {
        self.values.len()
    }

    pub fn n_goods(&self) -> usize {
        self.values[0].len()
    }

    pub fn value(&self, agent: usize, good: usize) -> &Value {
        &self.values[agent][good]
    }

    pub fn row(&self, agent: usize) -> &[Value] {
        &self.values[agent]
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.values
    }

    pub fn bivalued(&self) -> Option<&[BivaluedMeta]> {
        self.bivalued.as_deref()
    }

    pub fn bundle_value(&self, agent: usize, goods: &[usize]) -> Value {
        goods.iter().map(|&g| &self.values[agent][g]).sum()
    }

    /// Recovers bivalued metadata when every row takes exactly two distinct
    /// values, the lower one positive.
    pub fn infer_bivalued(&self) -> Option<Vec<BivaluedMeta>> {
        self.values
            .iter()
            .map(|row| {
                let mut distinct: Vec<&Value> = row.iter().collect();
                distinct.sort();
                distinct.dedup();
                match distinct.as_slice() {
                    [lo, hi] if !lo.is_zero() => Some(BivaluedMeta {
                        high: (*hi).clone(),
                        low: (*lo).clone(),
                    }),
                    _ => None,
                }
            })
            .collect()
    }

    /// Replaces agent `agent`'s valuation row, dropping any bivalued metadata.
    pub fn with_row(&self, agent: usize, row: Vec<Value>) -> Result<Instance> {
        let mut values = self.values.clone();
        values[agent] = row;
        Instance::new(values)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(s)?;
        if file.values.len() != file.n {
            return Err(Error::InvalidInstance(format!(
                "declared n = {} but found {} rows",
                file.n,
                file.values.len()
            )));
        }
        if let Some(row) = file.values.iter().find(|r| r.len() != file.m) {
            return Err(Error::InvalidInstance(format!(
                "declared m = {} but found a row of length {}",
                file.m,
                row.len()
            )));
        }
        match file.bivalued {
            Some(meta) => Instance::with_bivalued(file.values, meta),
            None => Instance::new(file.values),
        }
    }

    pub fn to_json_string(&self) -> String {
        let file = InstanceFile {
            n: self.n_agents(),
            m: self.n_goods(),
            values: self.values.clone(),
            bivalued: self.bivalued.clone(),
        };
        serde_json::to_string(&file).expect("instance serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::val;

    #[test]
    fn rejects_ragged_and_tiny_matrices() {
        assert!(Instance::from_integers(&[[1u64, 2]]).is_err());
        assert!(Instance::from_integers(&[[1u64], [2]]).is_err());
        assert!(Instance::new(vec![vec![val("1"), val("2")], vec![val("1")]]).is_err());
    }

    #[test]
    fn bivalued_validation() {
        let rows = vec![vec![val("3"), val("1")], vec![val("2"), val("2")]];
        let meta = vec![
            BivaluedMeta { high: val("3"), low: val("1") },
            BivaluedMeta { high: val("5"), low: val("2") },
        ];
        assert!(Instance::with_bivalued(rows.clone(), meta).is_ok());

        let bad = vec![
            BivaluedMeta { high: val("3"), low: val("1") },
            BivaluedMeta { high: val("5"), low: val("1") },
        ];
        assert!(matches!(Instance::with_bivalued(rows.clone(), bad), Err(Error::NotBivalued(_))));

        let zero = vec![
            BivaluedMeta { high: val("3"), low: val("0") },
            BivaluedMeta { high: val("5"), low: val("2") },
        ];
        assert!(matches!(
            Instance::with_bivalued(rows, zero),
            Err(Error::ZeroLowValue { agent: 0 })
        ));
    }

    #[test]
    fn json_round_trip_keeps_exact_values() {
        let s = r#"{"n":2,"m":3,"values":[["1/3","0.5",2],["0","7/7","3"]]}"#;
        let inst = Instance::from_json_str(s).unwrap();
        assert_eq!(inst.value(0, 1), &val("1/2"));
        assert_eq!(inst.value(1, 1), &val("1"));
        let back = Instance::from_json_str(&inst.to_json_string()).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn json_dimension_mismatch_is_rejected() {
        let s = r#"{"n":3,"m":2,"values":[["1","2"],["1","2"]]}"#;
        assert!(Instance::from_json_str(s).is_err());
    }

    #[test]
    fn infers_bivalued_rows() {
        let inst = Instance::from_integers(&[[3u64, 1, 3], [2, 5, 5]]).unwrap();
        let meta = inst.infer_bivalued().unwrap();
        assert_eq!(meta[0].high, val("3"));
        assert_eq!(meta[1].low, val("2"));
        let flat = Instance::from_integers(&[[3u64, 3], [2, 5]]).unwrap();
        assert!(flat.infer_bivalued().is_none());
    }
}
