//! Generalized Stirling functions.
//!
//! A Stirling function with threshold `t` is an integer function `f(n, m)` on
//! `n >= t`, `m ∈ Z`, satisfying
//!
//! ```text
//! f(n, m) = f(n-1, m-1) + (n-1) f(n-1, m)   and   f(n, m) = 0 for m > n
//! ```
//!
//! for every `n > t`. It is fixed by its row at `n = t`. Seed rows may have a
//! constant tail: `f(t, m) = tail` for all `m < m_floor`. Below `m_floor` both
//! recurrence inputs lie in the tail, so every later row is constant there as
//! well, with value `n * tail(n-1)`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StirlingError {
    #[error("seed index {m} exceeds the threshold {t}")]
    SeedAboveThreshold { m: i64, t: usize },
    #[error("seed index {m} is below m_floor {floor}")]
    SeedBelowFloor { m: i64, floor: i64 },
    #[error("n = {n} is below the threshold {t}")]
    BelowThreshold { n: usize, t: usize },
    #[error("row {0} has not been materialized; call warm_up first")]
    NotMaterialized(usize),
    #[error("bad seed json: {0}")]
    Json(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Row {
    // Values for m in m_floor..=n.
    values: Vec<BigUint>,
    tail: BigUint,
}

/// A memoizing Stirling function. `eval` extends rows on demand and needs
/// `&mut self`; after [`StirlingFunction::warm_up`] the read-only
/// [`StirlingFunction::get`] may be used from any number of threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StirlingFunction {
    threshold: usize,
    m_floor: i64,
    // rows[i] is the row n = threshold + i.
    rows: Vec<Row>,
}

impl StirlingFunction {
    /// Seed with values at `n = t`; missing indices in `m_floor..=t` are zero
    /// and every `m < m_floor` takes `tail`. `m_floor` defaults to the
    /// smallest seed key (or `t + 1` for an empty seed).
    pub fn new(
        t: usize,
        seed: &BTreeMap<i64, BigUint>,
        tail: BigUint,
    ) -> Result<Self, StirlingError> {
        let floor = seed.keys().next().copied().unwrap_or(t as i64 + 1);
        Self::with_floor(t, floor, seed, tail)
    }

    pub fn with_floor(
        t: usize,
        m_floor: i64,
        seed: &BTreeMap<i64, BigUint>,
        tail: BigUint,
    ) -> Result<Self, StirlingError> {
        let t_i = t as i64;
        let m_floor = m_floor.min(t_i + 1);
        let mut values = vec![BigUint::zero(); (t_i - m_floor + 1).max(0) as usize];
        for (&m, v) in seed {
            if m > t_i {
                return Err(StirlingError::SeedAboveThreshold { m, t });
            }
            if m < m_floor {
                return Err(StirlingError::SeedBelowFloor { m, floor: m_floor });
            }
            values[(m - m_floor) as usize] = v.clone();
        }
        Ok(StirlingFunction {
            threshold: t,
            m_floor,
            rows: vec![Row { values, tail }],
        })
    }

    /// Unsigned first-kind Stirling numbers: threshold 1, `f(1,1) = 1`.
    pub fn classical() -> Self {
        let seed = BTreeMap::from([(1, BigUint::from(1u32))]);
        Self::new(1, &seed, BigUint::zero()).expect("valid seed")
    }

    /// Ball sizes of the transposition graph: `f(2,2) = 1`, `f(2,m) = 2` for `m < 2`.
    pub fn transposition_balls() -> Self {
        let seed = BTreeMap::from([(2, BigUint::from(1u32))]);
        Self::new(2, &seed, BigUint::from(2u32)).expect("valid seed")
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn m_floor(&self) -> i64 {
        self.m_floor
    }

    /// Highest row materialized so far.
    pub fn materialized_up_to(&self) -> usize {
        self.threshold + self.rows.len() - 1
    }

    /// Materializes every row up to `n`.
    pub fn warm_up(&mut self, n: usize) -> Result<(), StirlingError> {
        if n < self.threshold {
            return Err(StirlingError::BelowThreshold {
                n,
                t: self.threshold,
            });
        }
        while self.materialized_up_to() < n {
            let next_n = self.materialized_up_to() + 1;
            let parent = self.rows.last().expect("seed row present");
            let row = self.extend(parent, next_n);
            self.rows.push(row);
        }
        Ok(())
    }

    fn extend(&self, parent: &Row, n: usize) -> Row {
        let factor = BigUint::from(n - 1);
        let lookup = |m: i64| -> BigUint { Self::row_value(parent, self.m_floor, n - 1, m) };
        let values = (self.m_floor..=n as i64)
            .map(|m| lookup(m - 1) + &factor * lookup(m))
            .collect();
        let tail = &parent.tail + &factor * &parent.tail;
        Row { values, tail }
    }

    fn row_value(row: &Row, m_floor: i64, n: usize, m: i64) -> BigUint {
        if m > n as i64 {
            BigUint::zero()
        } else if m < m_floor {
            row.tail.clone()
        } else {
            row.values[(m - m_floor) as usize].clone()
        }
    }

    /// Exact `f(n, m)`, extending the memo as needed.
    pub fn eval(&mut self, n: usize, m: i64) -> Result<BigUint, StirlingError> {
        self.warm_up(n)?;
        self.get(n, m)
    }

    /// `f(n, n - r)`; zero for `r < 0`.
    pub fn eval_r(&mut self, n: usize, r: i64) -> Result<BigUint, StirlingError> {
        self.eval(n, n as i64 - r)
    }

    /// Read-only lookup of a materialized row.
    pub fn get(&self, n: usize, m: i64) -> Result<BigUint, StirlingError> {
        if n < self.threshold {
            return Err(StirlingError::BelowThreshold {
                n,
                t: self.threshold,
            });
        }
        let row = self
            .rows
            .get(n - self.threshold)
            .ok_or(StirlingError::NotMaterialized(n))?;
        Ok(Self::row_value(row, self.m_floor, n, m))
    }

    pub fn get_r(&self, n: usize, r: i64) -> Result<BigUint, StirlingError> {
        self.get(n, n as i64 - r)
    }

    /// Tail value of row `n` (the value for every `m < m_floor`).
    pub fn tail(&mut self, n: usize) -> Result<BigUint, StirlingError> {
        self.warm_up(n)?;
        Ok(self.rows[n - self.threshold].tail.clone())
    }

    /// Seed-row description of this function.
    pub fn to_seed_json(&self) -> SeedJson {
        let seed_row = &self.rows[0];
        let seed = seed_row
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| ((self.m_floor + i as i64).to_string(), v.to_string()))
            .collect();
        SeedJson {
            threshold: self.threshold,
            m_floor: self.m_floor,
            tail: seed_row.tail.to_string(),
            seed,
        }
    }

    pub fn from_seed_json(json: &SeedJson) -> Result<Self, StirlingError> {
        let mut seed = BTreeMap::new();
        for (m, v) in &json.seed {
            let m: i64 = m
                .parse()
                .map_err(|_| StirlingError::Json(format!("bad index {m:?}")))?;
            seed.insert(m, parse_decimal(v)?);
        }
        Self::with_floor(json.threshold, json.m_floor, &seed, parse_decimal(&json.tail)?)
    }
}

fn parse_decimal(s: &str) -> Result<BigUint, StirlingError> {
    s.parse()
        .map_err(|_| StirlingError::Json(format!("bad decimal {s:?}")))
}

/// Serialized seed row; integers are decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedJson {
    pub threshold: usize,
    pub m_floor: i64,
    pub tail: String,
    pub seed: BTreeMap<String, String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn classical_values() {
        let mut c = StirlingFunction::classical();
        assert_eq!(c.eval(4, 2).unwrap(), big(11));
        assert_eq!(c.eval_r(5, 1).unwrap(), big(10));
        for n in 1..15 {
            assert_eq!(c.eval(n, n as i64).unwrap(), big(1));
            assert_eq!(c.eval(n, n as i64 + 3).unwrap(), big(0));
            assert_eq!(c.eval(n, 0).unwrap(), big(0));
        }
        assert_eq!(c.eval(10, 3).unwrap(), big(1_172_700));
    }

    #[test]
    fn transposition_ball_seed() {
        let mut f = StirlingFunction::transposition_balls();
        assert_eq!(f.eval(3, 1).unwrap(), big(6));
        assert_eq!(f.eval_r(4, 1).unwrap(), big(7));
        assert_eq!(f.eval_r(4, 0).unwrap(), big(1));
        // Saturates at n! once r >= n-1, tail included.
        assert_eq!(f.eval_r(6, 5).unwrap(), big(720));
        assert_eq!(f.eval_r(6, 40).unwrap(), big(720));
        assert_eq!(f.tail(6).unwrap(), big(720));
    }

    #[test]
    fn zero_function() {
        let mut f = StirlingFunction::new(3, &BTreeMap::new(), BigUint::zero()).unwrap();
        for n in 3..10 {
            for m in -5..12 {
                assert_eq!(f.eval(n, m).unwrap(), big(0));
            }
        }
    }

    #[test]
    fn negative_r_is_zero() {
        let mut f = StirlingFunction::transposition_balls();
        assert_eq!(f.eval_r(7, -1).unwrap(), big(0));
    }

    #[test]
    fn errors() {
        let seed = BTreeMap::from([(4, big(1))]);
        assert_eq!(
            StirlingFunction::new(3, &seed, big(0)),
            Err(StirlingError::SeedAboveThreshold { m: 4, t: 3 })
        );
        let mut f = StirlingFunction::classical();
        f.warm_up(3).unwrap();
        assert!(matches!(
            StirlingFunction::transposition_balls().eval(1, 0),
            Err(StirlingError::BelowThreshold { n: 1, t: 2 })
        ));
        assert_eq!(f.get(9, 2), Err(StirlingError::NotMaterialized(9)));
        assert_eq!(f.get(3, 2).unwrap(), big(3));
    }

    #[test]
    fn values_exceed_u64() {
        let mut c = StirlingFunction::classical();
        let v = c.eval(25, 1).unwrap();
        assert_eq!(v, crate::cycle_type::factorial(24));
        assert!(v > BigUint::from(u64::MAX));
    }

    #[test]
    fn json_round_trip() {
        let f = StirlingFunction::transposition_balls();
        let json = serde_json::to_string(&f.to_seed_json()).unwrap();
        let back: SeedJson = serde_json::from_str(&json).unwrap();
        assert_eq!(StirlingFunction::from_seed_json(&back).unwrap(), f);
        assert!(json.contains("\"tail\":\"2\""));
    }
}
