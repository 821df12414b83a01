//! Classification invariants, closed-form Euler characteristics, and the
//! polyvector parallelogram.

use crate::coh::CohVector;
use crate::error::{HkrError, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Number of deformation families per Picard rank, ranks 1..=10.
pub const FAMILIES_PER_RANK: [u32; 10] = [17, 36, 31, 13, 3, 1, 1, 1, 1, 1];

/// A Mori–Mukai family label `rho-index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyId {
    pub rho: u32,
    pub index: u32,
}

impl FamilyId {
    pub fn new(rho: u32, index: u32) -> Result<Self> {
        let id = FamilyId { rho, index };
        if id.is_valid() {
            Ok(id)
        } else {
            Err(HkrError::InvalidFamily(format!("{rho}-{index}")))
        }
    }

    pub fn is_valid(&self) -> bool {
        (1..=10).contains(&self.rho)
            && self.index >= 1
            && self.index <= FAMILIES_PER_RANK[self.rho as usize - 1]
    }

    /// All 105 ids in rank-then-index order.
    pub fn all() -> Vec<FamilyId> {
        let mut out = Vec::with_capacity(105);
        for (r, &count) in FAMILIES_PER_RANK.iter().enumerate() {
            for i in 1..=count {
                out.push(FamilyId { rho: r as u32 + 1, index: i });
            }
        }
        out
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.rho, self.index)
    }
}

impl FromStr for FamilyId {
    type Err = HkrError;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || HkrError::InvalidFamily(s.to_string());
        let (a, b) = s.trim().split_once('-').ok_or_else(bad)?;
        let rho = a.parse().map_err(|_| bad())?;
        let index = b.parse().map_err(|_| bad())?;
        FamilyId::new(rho, index)
    }
}

/// Numerical invariants of one family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub id: FamilyId,
    pub c1_cubed: u32,
    pub h12: u32,
    /// Generic (lowest) value when `aut_jumps` is set.
    pub dim_aut0: u32,
    pub aut_jumps: bool,
}

impl ClassificationRecord {
    pub fn validate(&self) -> Result<()> {
        let bad = |reason: &str| HkrError::InconsistentRecord {
            id: self.id.to_string(),
            reason: reason.to_string(),
        };
        if !self.id.is_valid() {
            return Err(bad("invalid family id"));
        }
        if !self.c1_cubed.is_multiple_of(2) || !(2..=64).contains(&self.c1_cubed) {
            return Err(bad("c1^3 must be even and in 2..=64"));
        }
        Ok(())
    }

    pub fn rho(&self) -> i64 {
        self.id.rho as i64
    }
}

pub fn chi_tangent(rec: &ClassificationRecord) -> i64 {
    rec.c1_cubed as i64 / 2 + rec.rho() - 18 - rec.h12 as i64
}

pub fn chi_wedge2_tangent(rec: &ClassificationRecord) -> i64 {
    rec.c1_cubed as i64 - 18 - rec.rho() + rec.h12 as i64
}

pub fn chi_anticanonical(rec: &ClassificationRecord) -> i64 {
    rec.c1_cubed as i64 / 2 + 3
}

/// `(h^0(T), h^1(T))` from the automorphism dimension.
pub fn h_tangent(rec: &ClassificationRecord) -> Result<(u64, u64)> {
    let h0 = rec.dim_aut0 as i64;
    let h1 = h0 - chi_tangent(rec);
    if h1 < 0 {
        return Err(HkrError::InconsistentRecord {
            id: rec.id.to_string(),
            reason: format!("h^1(T) would be {h1}"),
        });
    }
    Ok((h0 as u64, h1 as u64))
}

/// Hochschild homology dimensions `HH_{-3} .. HH_3`.
pub fn hochschild_homology_dims(rec: &ClassificationRecord) -> [u64; 7] {
    let h = rec.h12 as u64;
    [0, 0, h, 2 + 2 * rec.id.rho as u64, h, 0, 0]
}

/// The six possibly nonzero `dim H^p(X, wedge^q T)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Parallelogram {
    pub pv01: u64,
    pub pv11: u64,
    pub pv02: u64,
    pub pv12: u64,
    pub pv22: u64,
    pub pv03: u64,
}

impl Parallelogram {
    pub fn from_array(a: [u64; 6]) -> Self {
        Parallelogram {
            pv01: a[0],
            pv11: a[1],
            pv02: a[2],
            pv12: a[3],
            pv22: a[4],
            pv03: a[5],
        }
    }

    pub fn to_array(&self) -> [u64; 6] {
        [self.pv01, self.pv11, self.pv02, self.pv12, self.pv22, self.pv03]
    }

    /// `HH^0 .. HH^6`.
    pub fn hochschild_cohomology_dims(&self) -> [u64; 7] {
        [
            1,
            self.pv01,
            self.pv11 + self.pv02,
            self.pv12 + self.pv03,
            self.pv22,
            0,
            0,
        ]
    }

    /// Checks the three Euler characteristic identities against `rec`.
    pub fn chi_checks(&self, rec: &ClassificationRecord) -> [bool; 3] {
        [
            self.pv01 as i64 - self.pv11 as i64 == chi_tangent(rec),
            self.pv02 as i64 - self.pv12 as i64 + self.pv22 as i64 == chi_wedge2_tangent(rec),
            self.pv03 as i64 == chi_anticanonical(rec),
        ]
    }
}

/// Combines the record-derived entries with computed `H^*(wedge^2 T)`.
pub fn assemble_parallelogram(rec: &ClassificationRecord, wedge2: &CohVector) -> Result<Parallelogram> {
    let vals = wedge2.values().ok_or_else(|| {
        HkrError::UnknownEntries(format!("wedge^2 T cohomology {wedge2} is not determined"))
    })?;
    if vals.len() != 3 {
        return Err(HkrError::Consistency(format!(
            "expected three graded entries for wedge^2 T, got {}",
            vals.len()
        )));
    }
    let (pv01, pv11) = h_tangent(rec)?;
    let pg = Parallelogram {
        pv01,
        pv11,
        pv02: vals[0],
        pv12: vals[1],
        pv22: vals[2],
        pv03: chi_anticanonical(rec) as u64,
    };
    let chi = vals[0] as i64 - vals[1] as i64 + vals[2] as i64;
    if chi != chi_wedge2_tangent(rec) {
        return Err(HkrError::Consistency(format!(
            "{}: chi(wedge^2 T) from cohomology is {chi}, closed form gives {}",
            rec.id,
            chi_wedge2_tangent(rec)
        )));
    }
    Ok(pg)
}

/// Renders the parallelogram in its triangular layout, one row per `HH^i`.
pub fn render_parallelogram(p: &Parallelogram) -> String {
    render_rows(&[
        vec!["1".into()],
        vec!["0".into(), p.pv01.to_string()],
        vec!["0".into(), p.pv11.to_string(), p.pv02.to_string()],
        vec!["0".into(), "0".into(), p.pv12.to_string(), p.pv03.to_string()],
        vec!["0".into(), p.pv22.to_string(), "0".into()],
        vec!["0".into(), "0".into()],
        vec!["0".into()],
    ])
}

/// Same layout with arbitrary cell text, used for interval output.
pub fn render_rows(rows: &[Vec<String>]) -> String {
    let width = rows.iter().flatten().map(|s| s.len()).max().unwrap_or(1).max(2);
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        // rows 4..6 are shifted right by their starting column
        let lead = match i {
            4 => 1,
            5 => 2,
            6 => 3,
            _ => 0,
        };
        out.push_str(&format!("HH^{i}: "));
        out.push_str(&" ".repeat(lead * (width + 1)));
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}
