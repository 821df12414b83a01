//! Graded cohomology dimension vectors, possibly with bounded unknowns.

use serde::{Deserialize, Serialize};
use std::fmt;

/// One graded entry: an exact dimension or an interval for an undetermined one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Entry {
    Known(u64),
    /// `hi == None` means no finite upper bound was certified.
    Unknown { var: usize, lo: u64, hi: Option<u64> },
}

impl Entry {
    pub fn known(self) -> Option<u64> {
        match self {
            Entry::Known(v) => Some(v),
            Entry::Unknown { lo, hi: Some(hi), .. } if lo == hi => Some(lo),
            Entry::Unknown { .. } => None,
        }
    }

    pub fn bounds(self) -> (u64, Option<u64>) {
        match self {
            Entry::Known(v) => (v, Some(v)),
            Entry::Unknown { lo, hi, .. } => (lo, hi),
        }
    }

    pub fn contains(self, v: u64) -> bool {
        let (lo, hi) = self.bounds();
        v >= lo && hi.is_none_or(|h| v <= h)
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.bounds() {
            (lo, Some(hi)) if lo == hi => write!(f, "{lo}"),
            (lo, Some(hi)) => write!(f, "[{lo},{hi}]"),
            (lo, None) => write!(f, "[{lo},inf)"),
        }
    }
}

/// Dimensions of `H^0, ..., H^n` of some sheaf.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohVector {
    pub entries: Vec<Entry>,
}

impl CohVector {
    pub fn from_known(v: &[u64]) -> Self {
        CohVector {
            entries: v.iter().map(|&x| Entry::Known(x)).collect(),
        }
    }

    pub fn zero(len: usize) -> Self {
        Self::from_known(&vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_determined(&self) -> bool {
        self.entries.iter().all(|e| e.known().is_some())
    }

    /// Exact values, if every entry is determined.
    pub fn values(&self) -> Option<Vec<u64>> {
        self.entries.iter().map(|e| e.known()).collect()
    }

    pub fn get(&self, i: usize) -> Entry {
        self.entries.get(i).copied().unwrap_or(Entry::Known(0))
    }

    pub fn euler_characteristic(&self) -> Option<i64> {
        let v = self.values()?;
        Some(
            v.iter()
                .enumerate()
                .map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) })
                .sum(),
        )
    }

    /// Pads with zeros or truncates to `len` entries.
    pub fn resized(&self, len: usize) -> Self {
        let mut e = self.entries.clone();
        e.resize(len, Entry::Known(0));
        CohVector { entries: e }
    }

    pub fn add(&self, other: &CohVector) -> Option<CohVector> {
        let a = self.values()?;
        let b = other.values()?;
        let n = a.len().max(b.len());
        let v: Vec<u64> = (0..n)
            .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
            .collect();
        Some(CohVector::from_known(&v))
    }
}

impl fmt::Display for CohVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u64>> for CohVector {
    fn from(v: Vec<u64>) -> Self {
        CohVector::from_known(&v)
    }
}
