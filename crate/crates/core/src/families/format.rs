//! Line-oriented text format for datasets.
//!
//! ```text
//! version 1
//! surface NAME
//!   ksquared K
//!   triple H0T H1T H0A
//! end
//! family RHO-N
//!   invariants c1cubed C h12 H dimaut0 A jumps yes|no
//!   expected P01 P11 P02 P12 P22 P03
//!   model special TAG
//!   model toric
//!     dim D | ray ... | cone ... | class ... | weight ... | stability ... | section ...
//!   end
//!   model homogeneous
//!     factors SPEC | bundle EXPR | codim R | printed_codim R
//!   end
//! end
//! ```
//!
//! Blank lines and text after `#` are ignored.

use super::{Dataset, FamilyEntry};
use crate::bwb::parse_factors;
use crate::error::{HkrError, Result};
use crate::invariants::{ClassificationRecord, FamilyId, Parallelogram};
use crate::pipeline::{FamilyModel, HomogeneousModel, ModelKind, SpecialTag, SurfaceData, ToricFanSpec, ToricModel};
use std::fmt::Write as _;
use std::str::FromStr;

pub const SUPPORTED_VERSION: u32 = 1;

fn perr(line: usize, reason: impl Into<String>) -> HkrError {
    HkrError::Parse { line, reason: reason.into() }
}

struct Lines<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Lines { items, pos: 0 }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let out = self.items.get(self.pos).copied();
        self.pos += 1;
        out
    }

    fn last_line(&self) -> usize {
        self.items.last().map_or(0, |x| x.0)
    }
}

fn split_key(s: &str) -> (&str, &str) {
    match s.split_once(char::is_whitespace) {
        Some((k, v)) => (k, v.trim()),
        None => (s, ""),
    }
}

fn ints<T: FromStr>(line: usize, s: &str) -> Result<Vec<T>> {
    s.split_whitespace()
        .map(|t| t.parse::<T>().map_err(|_| perr(line, format!("expected an integer, found {t:?}"))))
        .collect()
}

fn one<T: FromStr>(line: usize, s: &str) -> Result<T> {
    let v = ints::<T>(line, s)?;
    match v.len() {
        1 => Ok(v.into_iter().next().expect("length checked")),
        n => Err(perr(line, format!("expected one integer, found {n}"))),
    }
}

pub fn parse_str(text: &str) -> Result<Dataset> {
    let mut lines = Lines::new(text);
    let version = match lines.next() {
        Some((n, l)) => match split_key(l) {
            ("version", v) => one::<u32>(n, v)?,
            _ => return Err(perr(n, "first line must be `version N`")),
        },
        None => return Err(perr(0, "empty file")),
    };
    if version != SUPPORTED_VERSION {
        return Err(perr(1, format!("unsupported version {version}")));
    }
    let mut surfaces = Vec::new();
    let mut families = Vec::new();
    while let Some((n, l)) = lines.next() {
        match split_key(l) {
            ("surface", name) if !name.is_empty() => surfaces.push(parse_surface(&mut lines, n, name)?),
            ("family", id) => families.push(parse_family(&mut lines, n, id)?),
            _ => return Err(perr(n, format!("expected `surface` or `family`, found {l:?}"))),
        }
    }
    Ok(Dataset::from_parts(version, surfaces, families))
}

fn parse_surface(lines: &mut Lines<'_>, start: usize, name: &str) -> Result<SurfaceData> {
    let mut k2 = None;
    let mut triple = None;
    loop {
        let (n, l) = lines.next().ok_or_else(|| perr(lines.last_line(), format!("surface at line {start} not closed")))?;
        match split_key(l) {
            ("end", "") => break,
            ("ksquared", v) => k2 = Some(one::<i64>(n, v)?),
            ("triple", v) => {
                let t = ints::<u64>(n, v)?;
                if t.len() != 3 {
                    return Err(perr(n, "triple needs three integers"));
                }
                triple = Some(t);
            }
            _ => return Err(perr(n, format!("unexpected {l:?} in surface block"))),
        }
    }
    let k_squared = k2.ok_or_else(|| perr(start, "surface without ksquared"))?;
    let t = triple.ok_or_else(|| perr(start, "surface without triple"))?;
    Ok(SurfaceData { name: name.to_string(), k_squared, h0_tangent: t[0], h1_tangent: t[1], h0_anticanonical: t[2] })
}

fn parse_invariants(n: usize, v: &str, id: FamilyId) -> Result<ClassificationRecord> {
    let toks: Vec<&str> = v.split_whitespace().collect();
    if !toks.len().is_multiple_of(2) {
        return Err(perr(n, "invariants must be key value pairs"));
    }
    let (mut c, mut h, mut a, mut j) = (None, None, None, None);
    for kv in toks.chunks(2) {
        let num = || kv[1].parse::<u32>().map_err(|_| perr(n, format!("bad value for {}", kv[0])));
        match kv[0] {
            "c1cubed" => c = Some(num()?),
            "h12" => h = Some(num()?),
            "dimaut0" => a = Some(num()?),
            "jumps" => {
                j = Some(match kv[1] {
                    "yes" => true,
                    "no" => false,
                    other => return Err(perr(n, format!("jumps must be yes or no, found {other:?}"))),
                })
            }
            other => return Err(perr(n, format!("unknown invariant {other:?}"))),
        }
    }
    let need = |x: Option<u32>, k: &str| x.ok_or_else(|| perr(n, format!("missing {k}")));
    Ok(ClassificationRecord {
        id,
        c1_cubed: need(c, "c1cubed")?,
        h12: need(h, "h12")?,
        dim_aut0: need(a, "dimaut0")?,
        aut_jumps: j.ok_or_else(|| perr(n, "missing jumps"))?,
    })
}

fn parse_family(lines: &mut Lines<'_>, start: usize, id: &str) -> Result<FamilyEntry> {
    let id: FamilyId = id.parse().map_err(|_| perr(start, format!("invalid family id {id:?}")))?;
    let mut record = None;
    let mut expected = None;
    let mut models = Vec::new();
    loop {
        let (n, l) = lines.next().ok_or_else(|| perr(lines.last_line(), format!("family {id} not closed")))?;
        match split_key(l) {
            ("end", "") => break,
            ("invariants", v) => record = Some(parse_invariants(n, v, id)?),
            ("expected", v) => {
                let e = ints::<u64>(n, v)?;
                let arr: [u64; 6] = e.try_into().map_err(|_| perr(n, "expected needs six integers"))?;
                expected = Some(Parallelogram::from_array(arr));
            }
            ("model", "toric") => models.push(FamilyModel { id, kind: ModelKind::Toric(parse_toric(lines, n)?) }),
            ("model", "homogeneous") => {
                models.push(FamilyModel { id, kind: ModelKind::Homogeneous(parse_homogeneous(lines, n)?) })
            }
            ("model", rest) => match split_key(rest) {
                ("special", tag) => {
                    let tag: SpecialTag = tag.parse().map_err(|_| perr(n, format!("unknown special tag {tag:?}")))?;
                    models.push(FamilyModel { id, kind: ModelKind::Special(tag) });
                }
                _ => return Err(perr(n, format!("unknown model kind {rest:?}"))),
            },
            _ => return Err(perr(n, format!("unexpected {l:?} in family block"))),
        }
    }
    Ok(FamilyEntry {
        record: record.ok_or_else(|| perr(start, format!("family {id} has no invariants")))?,
        expected: expected.ok_or_else(|| perr(start, format!("family {id} has no expected row")))?,
        models,
    })
}

/// A standalone fan file: the body of a toric model block, without the
/// surrounding `model toric` and `end` lines.
pub fn parse_fan(text: &str) -> Result<ToricModel> {
    let mut lines = Lines::new(text);
    parse_toric_body(&mut lines, 1, false)
}

fn parse_toric(lines: &mut Lines<'_>, start: usize) -> Result<ToricModel> {
    parse_toric_body(lines, start, true)
}

fn parse_toric_body(lines: &mut Lines<'_>, start: usize, closed: bool) -> Result<ToricModel> {
    let mut dim = None;
    let (mut rays, mut cones, mut class, mut weights, mut sections) = (vec![], vec![], vec![], vec![], vec![]);
    let mut stability = None;
    let mut ray_lines = vec![];
    loop {
        let Some((n, l)) = lines.next() else {
            if closed {
                return Err(perr(lines.last_line(), format!("toric model at line {start} not closed")));
            }
            break;
        };
        match split_key(l) {
            ("end", "") if closed => break,
            ("dim", v) => dim = Some(one::<usize>(n, v)?),
            ("ray", v) => {
                rays.push(ints(n, v)?);
                ray_lines.push(n);
            }
            ("cone", v) => cones.push(ints(n, v)?),
            ("class", v) => class.push(ints(n, v)?),
            ("weight", v) => weights.push(ints(n, v)?),
            ("stability", v) => stability = Some(ints(n, v)?),
            ("section", v) => sections.push(ints(n, v)?),
            _ => return Err(perr(n, format!("unexpected {l:?} in toric model"))),
        }
    }
    let fan = match (weights.is_empty(), rays.is_empty()) {
        (true, false) => {
            let dim = dim.ok_or_else(|| perr(start, "explicit fan needs dim"))?;
            if let Some((r, &n)) = rays.iter().zip(&ray_lines).find(|(r, _)| r.len() != dim) {
                return Err(perr(n, format!("ray has {} entries, expected {dim}", r.len())));
            }
            ToricFanSpec::Explicit { dim, rays, cones }
        }
        (false, true) => {
            if dim.is_some() || !cones.is_empty() {
                return Err(perr(start, "weights exclude dim and cone lines"));
            }
            let stability = stability.ok_or_else(|| perr(start, "weights need a stability line"))?;
            ToricFanSpec::Weights { weights, stability }
        }
        _ => return Err(perr(start, "toric model needs either rays or weights")),
    };
    let class_projection = if class.is_empty() { None } else { Some(class) };
    Ok(ToricModel { fan, class_projection, sections })
}

fn parse_homogeneous(lines: &mut Lines<'_>, start: usize) -> Result<HomogeneousModel> {
    let (mut factors, mut bundle, mut codim, mut printed) = (None, None, None, None);
    loop {
        let (n, l) = lines.next().ok_or_else(|| perr(lines.last_line(), format!("homogeneous model at line {start} not closed")))?;
        match split_key(l) {
            ("end", "") => break,
            ("factors", v) => factors = Some(parse_factors(v).map_err(|e| perr(n, e.to_string()))?),
            ("bundle", v) => bundle = Some(v.to_string()),
            ("codim", v) => codim = Some(one::<usize>(n, v)?),
            ("printed_codim", v) => printed = Some(one::<usize>(n, v)?),
            _ => return Err(perr(n, format!("unexpected {l:?} in homogeneous model"))),
        }
    }
    Ok(HomogeneousModel {
        factors: factors.ok_or_else(|| perr(start, "homogeneous model needs factors"))?,
        bundle: bundle.ok_or_else(|| perr(start, "homogeneous model needs bundle"))?,
        codim: codim.ok_or_else(|| perr(start, "homogeneous model needs codim"))?,
        printed_codim: printed,
    })
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Canonical text; `parse_str(&serialize(d))` reproduces `d`.
pub fn serialize(d: &Dataset) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "version {}\n", d.version);
    for sf in &d.surfaces {
        let _ = writeln!(
            s,
            "surface {}\n  ksquared {}\n  triple {} {} {}\nend\n",
            sf.name, sf.k_squared, sf.h0_tangent, sf.h1_tangent, sf.h0_anticanonical
        );
    }
    for f in &d.families {
        let r = &f.record;
        let _ = writeln!(s, "family {}", r.id);
        let _ = writeln!(
            s,
            "  invariants c1cubed {} h12 {} dimaut0 {} jumps {}",
            r.c1_cubed,
            r.h12,
            r.dim_aut0,
            if r.aut_jumps { "yes" } else { "no" }
        );
        let _ = writeln!(s, "  expected {}", join(&f.expected.to_array()));
        for m in &f.models {
            write_model(&mut s, &m.kind);
        }
        let _ = writeln!(s, "end\n");
    }
    s
}

fn write_model(s: &mut String, m: &ModelKind) {
    match m {
        ModelKind::Special(tag) => {
            let _ = writeln!(s, "  model special {tag}");
        }
        ModelKind::Toric(t) => {
            let _ = writeln!(s, "  model toric");
            match &t.fan {
                ToricFanSpec::Explicit { dim, rays, cones } => {
                    let _ = writeln!(s, "    dim {dim}");
                    for r in rays {
                        let _ = writeln!(s, "    ray {}", join(r));
                    }
                    for c in cones {
                        let _ = writeln!(s, "    cone {}", join(c));
                    }
                }
                ToricFanSpec::Weights { weights, stability } => {
                    for w in weights {
                        let _ = writeln!(s, "    weight {}", join(w));
                    }
                    let _ = writeln!(s, "    stability {}", join(stability));
                }
            }
            for c in t.class_projection.iter().flatten() {
                let _ = writeln!(s, "    class {}", join(c));
            }
            for sec in &t.sections {
                let _ = writeln!(s, "    section {}", join(sec));
            }
            let _ = writeln!(s, "  end");
        }
        ModelKind::Homogeneous(h) => {
            let factors: Vec<String> = h.factors.iter().map(|f| f.to_string()).collect();
            let _ = writeln!(s, "  model homogeneous\n    factors {}\n    bundle {}", factors.join(" x "), h.bundle);
            let _ = writeln!(s, "    codim {}", h.codim);
            if let Some(p) = h.printed_codim {
                let _ = writeln!(s, "    printed_codim {p}");
            }
            let _ = writeln!(s, "  end");
        }
    }
}
