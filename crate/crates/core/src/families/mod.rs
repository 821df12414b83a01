//! Bundled classification data, geometric models, and their validation.

mod format;

pub use format::{parse_fan, parse_str, serialize, SUPPORTED_VERSION};

use crate::bwb::total_dim;
use crate::error::{HkrError, Result};
use crate::invariants::{ClassificationRecord, FamilyId, Parallelogram};
use crate::pipeline::{surface_table, EngineKind, FamilyModel, Lookup, ModelKind, SurfaceData, ToricEngine};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

const BUNDLED: &str = include_str!("../../data/fano3.dat");

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyEntry {
    pub record: ClassificationRecord,
    pub expected: Parallelogram,
    pub models: Vec<FamilyModel>,
}

/// An immutable, validated dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub version: u32,
    pub surfaces: Vec<SurfaceData>,
    pub families: Vec<FamilyEntry>,
    index: HashMap<FamilyId, usize>,
}

impl Dataset {
    pub(crate) fn from_parts(version: u32, surfaces: Vec<SurfaceData>, families: Vec<FamilyEntry>) -> Self {
        let index = families.iter().enumerate().map(|(i, f)| (f.record.id, i)).collect();
        Dataset { version, surfaces, families, index }
    }

    pub fn empty() -> Self {
        Dataset::from_parts(SUPPORTED_VERSION, Vec::new(), Vec::new())
    }

    /// The dataset shipped with the crate.
    pub fn bundled() -> Result<Self> {
        Dataset::parse(BUNDLED)
    }

    pub fn bundled_text() -> &'static str {
        BUNDLED
    }

    /// Parses and validates.
    pub fn parse(text: &str) -> Result<Self> {
        let d = parse_str(text)?;
        d.validate()?;
        Ok(d)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HkrError::Parse { line: 0, reason: format!("{}: {e}", path.display()) })?;
        Dataset::parse(&text)
    }

    pub fn entry(&self, id: FamilyId) -> Option<&FamilyEntry> {
        self.index.get(&id).map(|&i| &self.families[i])
    }

    pub fn to_text(&self) -> String {
        serialize(self)
    }

    /// Checks every invariant of the format; reports the first failure.
    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for s in &self.surfaces {
            if !seen.insert(s.name.clone()) {
                return Err(verr(&s.name, "duplicate surface"));
            }
            surface_table(self, &s.name)?;
        }
        let mut ids = HashSet::new();
        for f in &self.families {
            let id = f.record.id;
            if !ids.insert(id) {
                return Err(verr(id, "duplicate family id"));
            }
            f.record.validate().map_err(|e| verr(id, &e.to_string()))?;
            let names = ["chi(T)", "chi(wedge^2 T)", "chi(omega^*)"];
            for (ok, name) in f.expected.chi_checks(&f.record).iter().zip(names) {
                if !ok {
                    return Err(verr(id, &format!("expected row violates {name}")));
                }
            }
            if f.expected.pv01 != f.record.dim_aut0 as u64 {
                return Err(verr(id, "pv01 differs from dimaut0"));
            }
            for m in &f.models {
                validate_model(id, m)?;
            }
        }
        Ok(())
    }

    /// All models attached to `id`.
    pub fn models_of(&self, id: FamilyId) -> &[FamilyModel] {
        self.entry(id).map_or(&[], |e| &e.models)
    }
}

fn verr(id: impl ToString, check: &str) -> HkrError {
    HkrError::Validation { id: id.to_string(), check: check.to_string() }
}

fn validate_model(id: FamilyId, m: &FamilyModel) -> Result<()> {
    if m.id != id {
        return Err(verr(id, "model attached to the wrong family"));
    }
    match &m.kind {
        ModelKind::Special(tag) => {
            if tag.family() != id {
                return Err(verr(id, &format!("special recipe {tag} belongs to {}", tag.family())));
            }
        }
        ModelKind::Toric(t) => {
            let engine = ToricEngine::build(&t.fan, t.class_projection.as_ref()).map_err(|e| verr(id, &e.to_string()))?;
            if engine.dim() != 3 + t.sections.len() {
                return Err(verr(id, "toric ambient dimension is not 3 plus the number of sections"));
            }
            let rank = engine.lattice().class_rank();
            if t.sections.iter().any(|s| s.len() != rank) {
                return Err(verr(id, &format!("section classes must have {rank} entries")));
            }
        }
        ModelKind::Homogeneous(h) => {
            let e = h.parsed().map_err(|e| verr(id, &e.to_string()))?;
            if e.rank() as usize != h.codim {
                return Err(verr(id, &format!("bundle rank {} differs from codim {}", e.rank(), h.codim)));
            }
            if total_dim(&h.factors) != 3 + h.codim {
                return Err(verr(id, "ambient dimension is not 3 plus codim"));
            }
        }
    }
    Ok(())
}

impl Lookup for Dataset {
    fn record(&self, id: FamilyId) -> Option<&ClassificationRecord> {
        self.entry(id).map(|e| &e.record)
    }

    fn surface(&self, name: &str) -> Option<&SurfaceData> {
        self.surfaces.iter().find(|s| s.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    pub models_by_kind: BTreeMap<EngineKind, usize>,
    pub covered: Vec<FamilyId>,
    /// Valid ids with no model, including ids absent from the dataset.
    pub missing: Vec<FamilyId>,
    /// Families with two or more models, usable for engine agreement.
    pub multi_model: Vec<FamilyId>,
    /// `(id, printed, stored)` codimension disagreements.
    pub codim_discrepancies: Vec<(FamilyId, usize, usize)>,
}

pub fn coverage_report(d: &Dataset) -> CoverageReport {
    let mut models_by_kind = BTreeMap::new();
    let (mut covered, mut missing, mut multi_model, mut codim_discrepancies) = (vec![], vec![], vec![], vec![]);
    for id in FamilyId::all() {
        let models = d.models_of(id);
        for m in models {
            *models_by_kind.entry(m.kind.engine()).or_insert(0) += 1;
            if let ModelKind::Homogeneous(h) = &m.kind {
                if let Some(p) = h.printed_codim.filter(|&p| p != h.codim) {
                    codim_discrepancies.push((id, p, h.codim));
                }
            }
        }
        match models.len() {
            0 => missing.push(id),
            n => {
                covered.push(id);
                if n > 1 {
                    multi_model.push(id);
                }
            }
        }
    }
    CoverageReport { models_by_kind, covered, missing, multi_model, codim_discrepancies }
}
