//! Per-family orchestration: pick an engine, compute `H^*(X, wedge^2 T_X)`,
//! and assemble the polyvector parallelogram.

mod homogeneous;
mod special;
mod toric_ci;

pub use homogeneous::{homogeneous_ci, HomogeneousModel};
pub use special::{blowup_reduce, special_case, surface_table, SpecialTag, SurfaceData};
pub use toric_ci::{toric_ci, ToricEngine, ToricFanSpec, ToricModel};

use crate::coh::{CohVector, Entry};
use crate::error::{HkrError, Result};
use crate::exactseq::{conormal_assemble_into, koszul_restrict_into, short_exact_into, terms_of, ChaseProblem, Term};
use crate::invariants::{assemble_parallelogram, chi_anticanonical, chi_wedge2_tangent, h_tangent};
use crate::invariants::{ClassificationRecord, FamilyId, Parallelogram};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    Toric(ToricModel),
    Homogeneous(HomogeneousModel),
    Special(SpecialTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Toric,
    Homogeneous,
    Special,
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EngineKind::Toric => "toric",
            EngineKind::Homogeneous => "homogeneous",
            EngineKind::Special => "special",
        })
    }
}

impl std::str::FromStr for EngineKind {
    type Err = HkrError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "toric" => Ok(EngineKind::Toric),
            "homogeneous" => Ok(EngineKind::Homogeneous),
            "special" => Ok(EngineKind::Special),
            _ => Err(HkrError::NoModel(format!("unknown engine {s}"))),
        }
    }
}

impl ModelKind {
    pub fn engine(&self) -> EngineKind {
        match self {
            ModelKind::Toric(_) => EngineKind::Toric,
            ModelKind::Homogeneous(_) => EngineKind::Homogeneous,
            ModelKind::Special(_) => EngineKind::Special,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyModel {
    pub id: FamilyId,
    pub kind: ModelKind,
}

/// Read access to classification records and surface data, used by recipes
/// that refer to other families.
pub trait Lookup {
    fn record(&self, id: FamilyId) -> Option<&ClassificationRecord>;
    fn surface(&self, name: &str) -> Option<&SurfaceData>;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub label: String,
    pub value: String,
}

/// Ordered record of intermediate vectors.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Trace {
    pub entries: Vec<TraceEntry>,
}

impl Trace {
    pub fn push(&mut self, label: impl Into<String>, v: &CohVector) {
        self.entries.push(TraceEntry { label: label.into(), value: v.to_string() });
    }

    pub fn note(&mut self, label: impl Into<String>, value: impl Into<String>) {
        self.entries.push(TraceEntry { label: label.into(), value: value.into() });
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Determinacy {
    Determined,
    /// Parallelogram cells (by name) that the constraints leave open.
    Underdetermined(Vec<(String, Entry)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComputationReport {
    pub id: FamilyId,
    pub engine: EngineKind,
    /// `h^0, h^1, h^2` of `wedge^2 T_X`.
    pub wedge2: CohVector,
    /// Cells in the order `pv01, pv11, pv02, pv12, pv22, pv03`.
    pub cells: [Entry; 6],
    pub parallelogram: Option<Parallelogram>,
    pub determinacy: Determinacy,
    pub trace: Trace,
}

pub const CELL_NAMES: [&str; 6] = ["pv01", "pv11", "pv02", "pv12", "pv22", "pv03"];

impl ComputationReport {
    pub fn is_determined(&self) -> bool {
        matches!(self.determinacy, Determinacy::Determined)
    }
}

/// Koszul data for both conormal terms: `first[j]` and `second[j]` hold
/// `H^*(F, wedge^j E^* (x) G)` for the two twists `G`.
pub(crate) struct ConormalData {
    pub first: Vec<CohVector>,
    pub second: Vec<CohVector>,
}

/// Registers the Koszul restrictions and the conormal sequence. Returns the
/// terms for the two restricted conormal terms and for `wedge^2 T_X`.
pub(crate) fn conormal_chase_into(
    p: &mut ChaseProblem,
    data: &ConormalData,
    chi: Option<i64>,
    pin_top: bool,
) -> (Vec<Term>, Vec<Term>, Vec<Term>) {
    let reg = |p: &mut ChaseProblem, v: &[CohVector], label: &str| -> Vec<Vec<Term>> {
        v.iter().enumerate().map(|(j, c)| terms_of(p, c, &format!("{label}{j}"))).collect()
    };
    let a = reg(p, &data.first, "first.K");
    let b = reg(p, &data.second, "second.K");
    let first = koszul_restrict_into(p, &a, 3, "first");
    let second = koszul_restrict_into(p, &b, 3, "second");
    let w = if pin_top {
        conormal_assemble_into(p, &first, &second, chi)
    } else {
        let c = short_exact_into(p, &first, &second, 4, "wedge2T");
        if let Some(chi) = chi {
            p.pin_linear(&[(1, c[0]), (-1, c[1]), (1, c[2]), (-1, c[3])], chi);
        }
        c
    };
    (first, second, w)
}

/// Runs the full conormal chase with the Kodaira–Nakano and Euler characteristic pins.
pub(crate) fn solve_conormal(data: &ConormalData, rec: &ClassificationRecord, trace: &mut Trace) -> Result<CohVector> {
    for (j, v) in data.first.iter().enumerate() {
        trace.push(format!("H(F, wedge^{j} E* (x) E* (x) L)"), v);
    }
    for (j, v) in data.second.iter().enumerate() {
        trace.push(format!("H(F, wedge^{j} E* (x) Omega_F (x) L)"), v);
    }
    let mut p = ChaseProblem::new();
    let (first, second, w) = conormal_chase_into(&mut p, data, Some(chi_wedge2_tangent(rec)), true);
    let sol = p.solve()?;
    trace.push("H(X, E* (x) L) restricted", &sol.vector_of_terms(&first));
    trace.push("H(X, Omega_F (x) L) restricted", &sol.vector_of_terms(&second));
    let out = sol.vector_of_terms(&w);
    trace.push("H(X, wedge^2 T_X)", &out);
    Ok(out)
}

/// Builds the report from `H^0..H^3(wedge^2 T_X)`.
pub fn report_from_wedge2(
    rec: &ClassificationRecord,
    engine: EngineKind,
    wedge2: &CohVector,
    trace: Trace,
) -> Result<ComputationReport> {
    if let Some(top) = wedge2.get(3).known() {
        if top != 0 {
            return Err(HkrError::Consistency(format!("{}: h^3(wedge^2 T) = {top}", rec.id)));
        }
    }
    let w = wedge2.resized(3);
    let (h0t, h1t) = h_tangent(rec)?;
    let cells = [
        Entry::Known(h0t),
        Entry::Known(h1t),
        w.get(0),
        w.get(1),
        w.get(2),
        Entry::Known(chi_anticanonical(rec) as u64),
    ];
    let (parallelogram, determinacy) = if w.is_determined() {
        (Some(assemble_parallelogram(rec, &w)?), Determinacy::Determined)
    } else {
        let open = CELL_NAMES
            .iter()
            .zip(&cells)
            .filter(|(_, e)| e.known().is_none())
            .map(|(n, e)| (n.to_string(), *e))
            .collect();
        (None, Determinacy::Underdetermined(open))
    };
    Ok(ComputationReport { id: rec.id, engine, wedge2: w, cells, parallelogram, determinacy, trace })
}

/// Computes the report for one model.
pub fn compute(model: &FamilyModel, rec: &ClassificationRecord, lookup: &dyn Lookup) -> Result<ComputationReport> {
    if model.id != rec.id {
        return Err(HkrError::Consistency(format!("model for {} paired with record {}", model.id, rec.id)));
    }
    let mut trace = Trace::default();
    let wedge2 = match &model.kind {
        ModelKind::Toric(m) => toric_ci(m, rec, &mut trace)?,
        ModelKind::Homogeneous(m) => homogeneous_ci(m, rec, &mut trace)?,
        ModelKind::Special(tag) => special_case(*tag, rec, lookup, &mut trace)?,
    };
    report_from_wedge2(rec, model.kind.engine(), &wedge2, trace)
}

/// Picks the model to run: special recipes override, then toric, then homogeneous.
pub fn select_model(models: &[FamilyModel], engine: Option<EngineKind>) -> Option<&FamilyModel> {
    let rank = |m: &FamilyModel| match m.kind.engine() {
        EngineKind::Special => 0,
        EngineKind::Toric => 1,
        EngineKind::Homogeneous => 2,
    };
    models
        .iter()
        .filter(|m| engine.is_none_or(|e| m.kind.engine() == e))
        .min_by_key(|m| rank(m))
}

/// True iff the family carries no nonzero global bivector.
pub fn poisson_bivector_absence(report: &ComputationReport) -> Result<bool> {
    match &report.parallelogram {
        Some(p) => Ok(p.pv02 == 0),
        None => Err(HkrError::UnknownEntries(format!("{} is underdetermined", report.id))),
    }
}
