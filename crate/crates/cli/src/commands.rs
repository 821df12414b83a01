use crate::config::Settings;
use crate::output::{OutputRecord, SCHEMA_VERSION};
use crate::EngineChoice;
use hkr_core::bwb::{cohomology, parse_bundle, parse_factors};
use hkr_core::families::{coverage_report, parse_fan, Dataset, FamilyEntry};
use hkr_core::pipeline::{compute as run_model, select_model, ComputationReport, EngineKind, FamilyModel, ToricEngine};
use hkr_core::{FamilyId, HkrError};
use rayon::prelude::*;
use serde::Serialize;
use std::path::Path;

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_NO_MODEL: u8 = 2;
pub const EXIT_UNDERDETERMINED: u8 = 3;
pub const EXIT_ENGINE_FAILURE: u8 = 4;

fn exit_code_for(e: &HkrError) -> u8 {
    match e {
        HkrError::NoModel(_) => EXIT_NO_MODEL,
        HkrError::InvalidFamily(_) | HkrError::Parse { .. } | HkrError::Grammar { .. } | HkrError::Validation { .. } => {
            EXIT_ERROR
        }
        _ => EXIT_ENGINE_FAILURE,
    }
}

fn load(settings: &Settings) -> Option<Dataset> {
    match settings.dataset() {
        Ok(d) => Some(d),
        Err(e) => {
            eprintln!("error: dataset: {e}");
            None
        }
    }
}

fn engine_kind(choice: EngineChoice) -> Option<EngineKind> {
    match choice {
        EngineChoice::Auto => None,
        EngineChoice::Toric => Some(EngineKind::Toric),
        EngineChoice::Homogeneous => Some(EngineKind::Homogeneous),
        EngineChoice::Special => Some(EngineKind::Special),
    }
}

pub fn compute(settings: &Settings, family: &str, engine: EngineChoice, trace: bool, json: bool) -> u8 {
    let Some(data) = load(settings) else { return EXIT_ERROR };
    let id: FamilyId = match family.parse() {
        Ok(id) => id,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    let Some(entry) = data.entry(id) else {
        eprintln!("error: family {id} is not in the dataset");
        return EXIT_NO_MODEL;
    };
    let Some(model) = select_model(&entry.models, engine_kind(engine)) else {
        let which = engine_kind(engine).map_or("any".to_string(), |k| k.to_string());
        eprintln!("error: no {which} model for {id}");
        return EXIT_NO_MODEL;
    };
    let report = match run_model(model, &entry.record, &data) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {id}: {e}");
            return exit_code_for(&e);
        }
    };
    let rec = OutputRecord::from_report(&report, &entry.record, trace);
    if json {
        println!("{}", serde_json::to_string_pretty(&rec).expect("record serializes"));
    } else {
        println!("{id} ({} engine, {})", rec.engine, rec.determinacy);
        print!("{}", rec.render());
        if let Some(t) = &rec.trace {
            for e in t {
                println!("  {}: {}", e.label, e.value);
            }
        }
    }
    if report.is_determined() {
        EXIT_OK
    } else {
        EXIT_UNDERDETERMINED
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Underdetermined,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
            Status::Underdetermined => "UNDERDETERMINED",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct ModelOutcome {
    engine: String,
    status: Status,
    detail: String,
}

#[derive(Debug, Clone, Serialize)]
struct FamilyOutcome {
    family: String,
    status: Status,
    models: Vec<ModelOutcome>,
}

#[derive(Debug, Serialize)]
struct Summary {
    considered: usize,
    pass: usize,
    fail: usize,
    skipped: usize,
    underdetermined: usize,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    schema_version: u32,
    results: Vec<FamilyOutcome>,
    summary: Summary,
}

fn judge(entry: &FamilyEntry, result: Result<ComputationReport, HkrError>) -> (Status, String) {
    let want = entry.expected;
    match result {
        Err(e) => (Status::Fail, e.to_string()),
        Ok(rep) => match rep.parallelogram {
            Some(p) if p == want => (Status::Pass, format!("{:?}", p.to_array())),
            Some(p) => (Status::Fail, format!("expected {:?}, got {:?}", want.to_array(), p.to_array())),
            None => {
                let fits = rep.cells.iter().zip(want.to_array()).all(|(c, w)| c.contains(w));
                if fits {
                    (Status::Underdetermined, "expected row lies within the computed intervals".into())
                } else {
                    (Status::Fail, format!("expected {:?} lies outside the computed intervals", want.to_array()))
                }
            }
        },
    }
}

fn verify_family(data: &Dataset, entry: &FamilyEntry, all_models: bool) -> FamilyOutcome {
    let models: Vec<&FamilyModel> = if all_models {
        entry.models.iter().collect()
    } else {
        select_model(&entry.models, None).into_iter().collect()
    };
    let outcomes: Vec<ModelOutcome> = models
        .iter()
        .map(|m| {
            let (status, detail) = judge(entry, run_model(m, &entry.record, data));
            ModelOutcome { engine: m.kind.engine().to_string(), status, detail }
        })
        .collect();
    let status = if outcomes.is_empty() {
        Status::Skipped
    } else if outcomes.iter().any(|o| o.status == Status::Fail) {
        Status::Fail
    } else if outcomes.iter().any(|o| o.status == Status::Underdetermined) {
        Status::Underdetermined
    } else {
        Status::Pass
    };
    FamilyOutcome { family: entry.record.id.to_string(), status, models: outcomes }
}

pub fn verify_all(settings: &Settings, only: Option<u32>, threads: usize, report: Option<&Path>, all_models: bool) -> u8 {
    let Some(data) = load(settings) else { return EXIT_ERROR };
    let entries: Vec<&FamilyEntry> = data.families.iter().filter(|f| only.is_none_or(|r| f.record.id.rho == r)).collect();
    let run = || -> Vec<FamilyOutcome> {
        entries.par_iter().map(|e| verify_family(&data, e, all_models)).collect()
    };
    let results = if threads <= 1 {
        entries.iter().map(|e| verify_family(&data, e, all_models)).collect()
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(run),
            Err(e) => {
                eprintln!("error: thread pool: {e}");
                return EXIT_ERROR;
            }
        }
    };
    for r in &results {
        let engines: Vec<&str> = r.models.iter().map(|m| m.engine.as_str()).collect();
        let mut line = format!("{:<6} {}", r.family, r.status.label());
        if !engines.is_empty() {
            line.push_str(&format!(" [{}]", engines.join(",")));
        }
        for m in r.models.iter().filter(|m| m.status != Status::Pass) {
            line.push_str(&format!(" {}: {}", m.engine, m.detail));
        }
        println!("{line}");
    }
    let count = |s: Status| results.iter().filter(|r| r.status == s).count();
    let summary = Summary {
        considered: results.len(),
        pass: count(Status::Pass),
        fail: count(Status::Fail),
        skipped: count(Status::Skipped),
        underdetermined: count(Status::Underdetermined),
    };
    println!(
        "considered {}: PASS {}, FAIL {}, SKIPPED {}, UNDERDETERMINED {}",
        summary.considered, summary.pass, summary.fail, summary.skipped, summary.underdetermined
    );
    let failed = summary.fail > 0;
    if let Some(path) = report {
        let rep = VerifyReport { schema_version: SCHEMA_VERSION, results, summary };
        let text = serde_json::to_string_pretty(&rep).expect("report serializes");
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: writing {}: {e}", path.display());
            return EXIT_ERROR;
        }
    }
    if failed {
        EXIT_ERROR
    } else {
        EXIT_OK
    }
}

pub fn bwb(factors: &str, bundle: &str) -> u8 {
    let result = parse_factors(factors).and_then(|f| {
        let e = parse_bundle(&f, bundle)?;
        Ok(cohomology(&f, &e))
    });
    match result {
        Ok(v) => {
            println!("{v}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

pub fn toric(fan: &Path, coeffs: &str, cotangent: bool) -> u8 {
    let run = || -> anyhow::Result<String> {
        let text = std::fs::read_to_string(fan)?;
        let model = parse_fan(&text)?;
        let engine = ToricEngine::build(&model.fan, model.class_projection.as_ref())?;
        let d: Vec<i64> = coeffs
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| anyhow::anyhow!("bad coefficient {t:?}")))
            .collect::<anyhow::Result<_>>()?;
        let n = engine.lattice().projection.first().map_or(0, |r| r.len());
        anyhow::ensure!(d.len() == n, "expected {n} coefficients, one per ray, got {}", d.len());
        let v = if cotangent { engine.cotangent_of_divisor(&d)? } else { engine.line_bundle_of_divisor(&d)? };
        Ok(v.to_string())
    };
    match run() {
        Ok(s) => {
            println!("{s}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

pub fn coverage(settings: &Settings) -> u8 {
    let Some(data) = load(settings) else { return EXIT_ERROR };
    let c = coverage_report(&data);
    for (kind, n) in &c.models_by_kind {
        println!("{kind} models: {n}");
    }
    println!("families with a model: {}", c.covered.len());
    let ids = |v: &[FamilyId]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
    println!("families without a model ({}): {}", c.missing.len(), ids(&c.missing));
    println!("families with several models: {}", ids(&c.multi_model));
    for (id, printed, stored) in &c.codim_discrepancies {
        println!("codimension differs from the printed value for {id}: printed {printed}, stored {stored}");
    }
    EXIT_OK
}

pub fn export_data(settings: &Settings) -> u8 {
    let Some(data) = load(settings) else { return EXIT_ERROR };
    print!("{}", data.to_text());
    EXIT_OK
}
