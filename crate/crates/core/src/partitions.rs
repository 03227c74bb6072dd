//! Young diagrams as weakly decreasing row lengths.
//!
//! Partitions are stored without trailing zero rows, so two diagrams are
//! equal exactly when their row vectors are equal. Anything that needs a
//! fixed length (row-wise addition, flattening into spectra) pads on demand.
//!
//! The textual form is a comma-separated list of rows (`"4,2,1"`), with
//! `"-"` standing for the empty diagram.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    rows: Vec<u32>,
}

impl Partition {
    /// Builds a partition from row lengths. Trailing zeros are dropped;
    /// anything else that is not weakly decreasing is rejected.
    pub fn new(mut rows: Vec<u32>) -> Result<Self> {
        while rows.last() == Some(&0) {
            rows.pop();
        }
        if rows.contains(&0) || rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "rows {rows:?} are not weakly decreasing positive integers"
            )));
        }
        Ok(Self { rows })
    }

    pub fn empty() -> Self {
        Self { rows: Vec::new() }
    }

    /// The one-row diagram `(k)`.
    pub fn single_row(k: u32) -> Self {
        if k == 0 {
            Self::empty()
        } else {
            Self { rows: vec![k] }
        }
    }

    /// The one-column diagram `(1^k)`.
    pub fn single_column(k: u32) -> Self {
        Self {
            rows: vec![1; k as usize],
        }
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    /// Row `i`, or zero beyond the last row.
    pub fn row(&self, i: usize) -> u32 {
        self.rows.get(i).copied().unwrap_or(0)
    }

    /// Number of boxes.
    pub fn size(&self) -> u32 {
        self.rows.iter().sum()
    }

    /// Number of nonzero rows.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows padded with zeros to `len` entries. `len` must be at least `self.len()`.
    pub fn padded(&self, len: usize) -> Vec<u32> {
        let mut out = self.rows.clone();
        out.resize(len.max(self.rows.len()), 0);
        out
    }

    pub fn add_rowwise(&self, other: &Partition) -> Partition {
        let len = self.len().max(other.len());
        let rows = (0..len).map(|i| self.row(i) + other.row(i)).collect();
        Partition { rows }
    }

    pub fn scale(&self, factor: u32) -> Partition {
        if factor == 0 {
            return Partition::empty();
        }
        Partition {
            rows: self.rows.iter().map(|&r| r * factor).collect(),
        }
    }

    pub fn normalize(&self) -> Result<NormalizedPartition> {
        if self.is_empty() {
            return Err(Error::EmptyDiagram);
        }
        let k = BigInt::from(self.size());
        let weights = self
            .rows
            .iter()
            .map(|&r| BigRational::new(BigInt::from(r), k.clone()))
            .collect();
        Ok(NormalizedPartition { weights })
    }

    /// Transposed diagram: column lengths become rows.
    pub fn conjugate(&self) -> Partition {
        let first = self.row(0) as usize;
        let rows = (0..first)
            .map(|j| self.rows.iter().filter(|&&r| r as usize > j).count() as u32)
            .collect();
        Partition { rows }
    }

    /// Hook lengths in row-major box order.
    pub fn hook_lengths(&self) -> Vec<u32> {
        let conj = self.conjugate();
        let mut hooks = Vec::with_capacity(self.size() as usize);
        for (i, &r) in self.rows.iter().enumerate() {
            for j in 0..r as usize {
                let arm = r - j as u32 - 1;
                let leg = conj.row(j) - i as u32 - 1;
                hooks.push(arm + leg + 1);
            }
        }
        hooks
    }

    /// Whether `self` fits inside `outer` box by box.
    pub fn is_contained_in(&self, outer: &Partition) -> bool {
        self.len() <= outer.len() && self.rows.iter().zip(&outer.rows).all(|(a, b)| a <= b)
    }

    /// Multiplicities `m_j` of each part size `j` (index 0 unused).
    pub fn multiplicities(&self) -> Vec<u32> {
        let mut m = vec![0u32; self.row(0) as usize + 1];
        for &r in &self.rows {
            m[r as usize] += 1;
        }
        m
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows.is_empty() {
            return f.write_str("-");
        }
        let mut first = true;
        for r in &self.rows {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "-" {
            return Ok(Partition::empty());
        }
        if s.is_empty() {
            return Err(Error::InvalidPartition("empty text (use \"-\" for the empty diagram)".into()));
        }
        let rows = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidPartition(format!("bad row {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.contains(&0) {
            return Err(Error::InvalidPartition(format!("zero row in {s:?}")));
        }
        Partition::new(rows)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A diagram divided by its box count: an exact probability vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalizedPartition {
    weights: Vec<BigRational>,
}

impl NormalizedPartition {
    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    /// Weights padded with zeros to `len` entries.
    pub fn padded(&self, len: usize) -> Vec<BigRational> {
        let mut out = self.weights.clone();
        out.resize(len.max(self.weights.len()), BigRational::zero());
        out
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

/// All partitions of `k` with at most `max_rows` rows, in lexicographically
/// decreasing order. `k = 0` yields only the empty diagram.
pub fn enumerate_partitions(k: u32, max_rows: usize) -> Vec<Partition> {
    fn extend(remaining: u32, max_part: u32, rows_left: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { rows: cur.clone() });
            return;
        }
        if rows_left == 0 {
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            // the remaining rows can hold at most part * (rows_left - 1) boxes
            if u64::from(remaining - part) > u64::from(part).saturating_mul(rows_left as u64 - 1) {
                break;
            }
            cur.push(part);
            extend(remaining - part, part, rows_left - 1, cur, out);
            cur.pop();
        }
    }

    let mut out = Vec::new();
    extend(k, k, max_rows, &mut Vec::new(), &mut out);
    out
}
