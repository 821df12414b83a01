//! Shared fixtures for the benchmarks.

use hkr_core::families::Dataset;
use hkr_core::pipeline::{compute, select_model, ComputationReport, EngineKind};
use hkr_core::FamilyId;

pub fn dataset() -> Dataset {
    Dataset::bundled().expect("bundled dataset is valid")
}

/// Runs the preferred model of `family`, optionally forcing an engine.
pub fn run(data: &Dataset, family: &str, engine: Option<EngineKind>) -> ComputationReport {
    let id: FamilyId = family.parse().expect("valid id");
    let e = data.entry(id).expect("family present");
    let m = select_model(&e.models, engine).expect("model present");
    compute(m, &e.record, data).expect("computation succeeds")
}

/// Runs every model of every family; returns the number of reports.
pub fn run_all(data: &Dataset) -> usize {
    let mut count = 0;
    for f in &data.families {
        for m in &f.models {
            compute(m, &f.record, data).expect("computation succeeds");
            count += 1;
        }
    }
    count
}
