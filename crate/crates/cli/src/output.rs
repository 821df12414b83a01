//! Machine-readable records. The schema lives in `docs/output-schema.json`.

use hkr_core::invariants::{chi_anticanonical, chi_tangent, chi_wedge2_tangent, render_rows};
use hkr_core::pipeline::{ComputationReport, Determinacy, TraceEntry};
use hkr_core::{ClassificationRecord, Entry};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// An exact value, or an interval `[lo, hi]` with `hi = null` when unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Exact(u64),
    Interval([Option<u64>; 2]),
}

impl Cell {
    pub fn from_entry(e: Entry) -> Cell {
        match e.known() {
            Some(v) => Cell::Exact(v),
            None => {
                let (lo, hi) = e.bounds();
                Cell::Interval([Some(lo), hi])
            }
        }
    }

    fn range(self) -> (i64, Option<i64>) {
        match self {
            Cell::Exact(v) => (v as i64, Some(v as i64)),
            Cell::Interval([lo, hi]) => (lo.unwrap_or(0) as i64, hi.map(|h| h as i64)),
        }
    }

    fn render(self) -> String {
        match self {
            Cell::Exact(v) => v.to_string(),
            Cell::Interval([lo, hi]) => {
                let hi = hi.map_or("inf".to_string(), |h| h.to_string());
                format!("[{},{hi}]", lo.unwrap_or(0))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cells {
    pub pv01: Cell,
    pub pv11: Cell,
    pub pv02: Cell,
    pub pv12: Cell,
    pub pv22: Cell,
    pub pv03: Cell,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub schema_version: u32,
    pub family: String,
    pub engine: String,
    /// `"Determined"` or `"Underdetermined"`.
    pub determinacy: String,
    pub parallelogram: Cells,
    /// The three Euler characteristic identities, in the order T, wedge^2 T, omega^*.
    /// For intervals, true means the identity is satisfiable.
    pub chi_checks: [bool; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceEntry>>,
}

/// Whether `sum sign_i * cell_i = target` is satisfiable.
fn satisfiable(terms: &[(i64, Cell)], target: i64) -> bool {
    let mut lo = 0i64;
    let mut hi = Some(0i64);
    for &(sign, c) in terms {
        let (a, b) = c.range();
        if sign > 0 {
            lo += a;
            hi = hi.zip(b).map(|(h, b)| h + b);
        } else {
            // subtracting [a, b] gives [-b, -a]
            match b {
                Some(b) => lo -= b,
                None => lo = i64::MIN / 2,
            }
            hi = hi.map(|h| h - a);
        }
    }
    lo <= target && hi.is_none_or(|h| target <= h)
}

impl OutputRecord {
    pub fn from_report(rep: &ComputationReport, rec: &ClassificationRecord, with_trace: bool) -> OutputRecord {
        let c: Vec<Cell> = rep.cells.iter().map(|&e| Cell::from_entry(e)).collect();
        let cells = Cells { pv01: c[0], pv11: c[1], pv02: c[2], pv12: c[3], pv22: c[4], pv03: c[5] };
        let chi_checks = [
            satisfiable(&[(1, c[0]), (-1, c[1])], chi_tangent(rec)),
            satisfiable(&[(1, c[2]), (-1, c[3]), (1, c[4])], chi_wedge2_tangent(rec)),
            satisfiable(&[(1, c[5])], chi_anticanonical(rec)),
        ];
        OutputRecord {
            schema_version: SCHEMA_VERSION,
            family: rep.id.to_string(),
            engine: rep.engine.to_string(),
            determinacy: match rep.determinacy {
                Determinacy::Determined => "Determined".into(),
                Determinacy::Underdetermined(_) => "Underdetermined".into(),
            },
            parallelogram: cells,
            chi_checks,
            trace: with_trace.then(|| rep.trace.entries.clone()),
        }
    }

    /// The triangular layout with fixed zeros and the apex.
    pub fn render(&self) -> String {
        let p = &self.parallelogram;
        let z = || "0".to_string();
        render_rows(&[
            vec!["1".into()],
            vec![z(), p.pv01.render()],
            vec![z(), p.pv11.render(), p.pv02.render()],
            vec![z(), z(), p.pv12.render(), p.pv03.render()],
            vec![z(), p.pv22.render(), z()],
            vec![z(), z()],
            vec![z()],
        ])
    }
}
