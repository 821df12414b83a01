//! Scripted computations for the families that need more than a single
//! complete-intersection chase. Every intermediate value with a known
//! reference is asserted, so silent errors cannot cancel downstream.

use super::toric_ci::{toric_conormal_data, ToricEngine, ToricFanSpec};
use super::{conormal_chase_into, Lookup, Trace};
use crate::coh::CohVector;
use crate::error::{HkrError, Result};
use crate::exactseq::{koszul_restrict, kunneth, short_exact_into, terms_of, ChaseProblem, Term};
use crate::invariants::{chi_wedge2_tangent, ClassificationRecord, FamilyId};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpecialTag {
    M1_1,
    M2_1,
    M2_3,
    M4_13,
    M10_1,
}

impl SpecialTag {
    pub const ALL: [SpecialTag; 5] = [SpecialTag::M1_1, SpecialTag::M2_1, SpecialTag::M2_3, SpecialTag::M4_13, SpecialTag::M10_1];

    pub fn family(&self) -> FamilyId {
        let (r, n) = match self {
            SpecialTag::M1_1 => (1, 1),
            SpecialTag::M2_1 => (2, 1),
            SpecialTag::M2_3 => (2, 3),
            SpecialTag::M4_13 => (4, 13),
            SpecialTag::M10_1 => (10, 1),
        };
        FamilyId::new(r, n).expect("valid id")
    }
}

impl fmt::Display for SpecialTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let id = self.family();
        write!(f, "M{}-{}", id.rho, id.index)
    }
}

impl FromStr for SpecialTag {
    type Err = HkrError;
    fn from_str(s: &str) -> Result<Self> {
        SpecialTag::ALL
            .into_iter()
            .find(|t| t.to_string() == s)
            .ok_or_else(|| HkrError::NoModel(format!("unknown recipe tag {s}")))
    }
}

/// One row of the del Pezzo table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceData {
    pub name: String,
    pub k_squared: i64,
    pub h0_tangent: u64,
    pub h1_tangent: u64,
    pub h0_anticanonical: u64,
}

/// `(h^0 T, h^1 T, h^0 omega^*)`, checked against surface Riemann–Roch.
pub fn surface_table(lookup: &dyn Lookup, name: &str) -> Result<(u64, u64, u64)> {
    let s = lookup.surface(name).ok_or_else(|| HkrError::NoModel(format!("surface {name}")))?;
    let chi_t = s.h0_tangent as i64 - s.h1_tangent as i64;
    if chi_t != 2 * s.k_squared - 10 {
        return Err(HkrError::Validation { id: name.into(), check: format!("chi(T) = {chi_t}, expected 2K^2 - 10") });
    }
    if s.h0_anticanonical as i64 != s.k_squared + 1 {
        return Err(HkrError::Validation { id: name.into(), check: "h^0(-K) differs from K^2 + 1".into() });
    }
    Ok((s.h0_tangent, s.h1_tangent, s.h0_anticanonical))
}

fn anchor(recipe: SpecialTag, what: &str, expected: &[u64], got: &CohVector) -> Result<()> {
    let mut want = expected.to_vec();
    want.resize(got.len().max(want.len()), 0);
    let vals = got.values().map(|mut v| {
        v.resize(want.len(), 0);
        v
    });
    if vals.as_deref() != Some(&want[..]) {
        return Err(HkrError::AnchorMismatch {
            recipe: recipe.to_string(),
            what: what.into(),
            expected: format!("{want:?}"),
            got: got.to_string(),
        });
    }
    Ok(())
}

fn weighted(weights: &[Vec<i64>]) -> Result<ToricEngine> {
    let stability = vec![1; weights.len()];
    ToricEngine::build(&ToricFanSpec::Weights { weights: weights.to_vec(), stability }, None)
}

fn pad(v: &CohVector, len: usize) -> CohVector {
    v.resized(len)
}

/// Registers `0 -> I_Z (x) V -> V -> V|_Z -> 0` and returns the terms of the
/// ideal-twisted piece, given terms for `H(Y, V)` and `H(Z, V|_Z)`.
pub(crate) fn blowup_reduce_into(p: &mut ChaseProblem, y: &[Term], z: &[Term]) -> Vec<Term> {
    let len = y.len();
    let w: Vec<Term> = (0..len).map(|i| Term::Var(p.new_var(format!("ideal[{i}]")))).collect();
    let mut seq = Vec::new();
    for i in 0..len {
        seq.push(w[i]);
        seq.push(y[i]);
        seq.push(z.get(i).copied().unwrap_or(Term::Known(0)));
    }
    p.add_exact_sequence(&seq);
    w
}

/// Constraints for `H(Y, V (x) I_Z)` from `H(Y, V)` and `H(Z, V|_Z)`.
pub fn blowup_reduce(y: &CohVector, z: &CohVector) -> (ChaseProblem, Vec<Term>) {
    let mut p = ChaseProblem::new();
    let yt = terms_of(&mut p, y, "Y");
    let zt = terms_of(&mut p, z, "Z");
    let w = blowup_reduce_into(&mut p, &yt, &zt);
    (p, w)
}

pub fn special_case(
    tag: SpecialTag,
    rec: &ClassificationRecord,
    lookup: &dyn Lookup,
    trace: &mut Trace,
) -> Result<CohVector> {
    if rec.id != tag.family() {
        return Err(HkrError::Consistency(format!("recipe {tag} applied to {}", rec.id)));
    }
    match tag {
        SpecialTag::M1_1 => sextic_double_solid(rec, trace),
        SpecialTag::M2_1 => blowup_of_index_two(&M2_1, rec, lookup, trace),
        SpecialTag::M2_3 => blowup_of_index_two(&M2_3, rec, lookup, trace),
        SpecialTag::M4_13 => curve_in_p1_cubed(trace),
        SpecialTag::M10_1 => product_with_surface(lookup, trace),
    }
}

/// Sextic in `P(1,1,1,1,3)`: the chase leaves `(0,0,35+a,a)`, and the
/// Kodaira–Nakano pin forces `a = 0`.
fn sextic_double_solid(rec: &ClassificationRecord, trace: &mut Trace) -> Result<CohVector> {
    let tag = SpecialTag::M1_1;
    let engine = weighted(&[vec![1, 1, 1, 1, 3]])?;
    let data = toric_conormal_data(&engine, &[vec![6]], trace)?;
    let chi = chi_wedge2_tangent(rec);
    let mut p = ChaseProblem::new();
    let (_, _, w) = conormal_chase_into(&mut p, &data, Some(chi), false);
    let open = p.solve()?.vector_of_terms(&w);
    trace.push("H(X, wedge^2 T) before the top-degree pin", &open);
    let (h2, h3) = (open.get(2).bounds(), open.get(3).bounds());
    if open.get(0).known() != Some(0) || open.get(1).known() != Some(0) || h2.0 != 35 + h3.0 {
        return Err(HkrError::AnchorMismatch {
            recipe: tag.to_string(),
            what: "unpinned chase".into(),
            expected: "(0,0,35+a,a)".into(),
            got: open.to_string(),
        });
    }
    p.pin_linear(&[(1, w[3])], 0);
    let out = p.solve()?.vector_of_terms(&w);
    trace.push("H(X, wedge^2 T)", &out);
    anchor(tag, "final", &[0, 0, 35, 0], &out)?;
    Ok(out)
}

/// Data for a blowup of an index-two hypersurface `Y` in a weighted projective
/// space along a complete intersection of two half-anticanonical divisors.
struct IndexTwoRecipe {
    tag: SpecialTag,
    weights: [i64; 5],
    degree: i64,
    base: (u32, u32),
    top_of_conormal: u64,
    restricted_ambient: Option<[u64; 4]>,
    omega_f: [u64; 5],
    y_data: [u64; 4],
    z_data: u64,
    result: [u64; 4],
}

const M2_1: IndexTwoRecipe = IndexTwoRecipe {
    tag: SpecialTag::M2_1,
    weights: [1, 1, 1, 2, 3],
    degree: 6,
    base: (1, 11),
    top_of_conormal: 14,
    restricted_ambient: Some([0, 0, 0, 1]),
    omega_f: [0, 2, 21, 0, 0],
    y_data: [3, 0, 7, 0],
    z_data: 4,
    result: [1, 2, 7, 0],
};

const M2_3: IndexTwoRecipe = IndexTwoRecipe {
    tag: SpecialTag::M2_3,
    weights: [1, 1, 1, 1, 2],
    degree: 4,
    base: (1, 12),
    top_of_conormal: 4,
    restricted_ambient: None,
    omega_f: [0, 2, 10, 0, 0],
    y_data: [6, 0, 1, 0],
    z_data: 8,
    result: [1, 3, 1, 0],
};

fn blowup_of_index_two(
    r: &IndexTwoRecipe,
    rec: &ClassificationRecord,
    lookup: &dyn Lookup,
    trace: &mut Trace,
) -> Result<CohVector> {
    let tag = r.tag;
    let base_id = FamilyId::new(r.base.0, r.base.1)?;
    let base = lookup.record(base_id).ok_or_else(|| HkrError::NoModel(format!("record {base_id}")))?;
    let pw = weighted(&[r.weights.to_vec()])?;
    let d = r.degree;
    let restrict = |lb: bool, t: i64| -> Result<CohVector> {
        let amb = if lb {
            vec![pw.line_bundle(&[t])?, pw.line_bundle(&[t - d])?]
        } else {
            vec![pw.cotangent(&[t])?, pw.cotangent(&[t - d])?]
        };
        koszul_restrict(&amb, 3)
    };

    // first step: X as a (1,1) divisor in Y x P^1
    let a = restrict(true, 1 - d)?;
    trace.push("H(Y, O_Y(1-d))", &a);
    anchor(tag, "H(Y, O_Y(1-d))", &[0, 0, 0, r.top_of_conormal], &a)?;
    let b = restrict(false, 1)?;
    trace.push("H(Y, Omega_P(1)|_Y)", &b);
    if let Some(want) = r.restricted_ambient {
        anchor(tag, "H(Y, Omega_P(1)|_Y)", &want, &b)?;
    }
    let hodge_y = CohVector::from_known(&[0, base.id.rho as u64, base.h12 as u64, 0]);
    let p1 = weighted(&[vec![1, 1]])?;
    let omega_f = kunneth(&hodge_y, &p1.line_bundle(&[0])?)?
        .add(&kunneth(&CohVector::from_known(&[1, 0, 0, 0]), &p1.cotangent(&[0])?)?)
        .expect("known vectors");
    trace.push("H(F, Omega_F)", &omega_f);
    anchor(tag, "H(F, Omega_F)", &r.omega_f, &omega_f)?;
    let o_plus = p1.line_bundle(&[1])?.values().expect("known");
    anchor(tag, "H(P^1, O(-1))", &[0, 0], &p1.line_bundle(&[-1])?)?;

    let mut p = ChaseProblem::new();
    let at = terms_of(&mut p, &a, "A");
    let bt = terms_of(&mut p, &b, "B");
    let c = short_exact_into(&mut p, &at, &bt, 4, "Omega_Y(1)");
    // H(F, Omega_F(1,1)) = H(Y, Omega_Y(1)) (x) H(P^1, O(1))
    let m: Vec<Term> = (0..5).map(|i| Term::Var(p.new_var(format!("Omega_F(1,1)[{i}]")))).collect();
    for (i, &mi) in m.iter().enumerate() {
        let mut lhs = vec![(1, mi)];
        for (j, &cj) in c.iter().enumerate() {
            if i >= j && i - j < o_plus.len() && o_plus[i - j] > 0 {
                lhs.push((-(o_plus[i - j] as i64), cj));
            }
        }
        p.pin_linear(&lhs, 0);
    }
    let of = terms_of(&mut p, &omega_f, "Omega_F");
    let restricted = short_exact_into(&mut p, &of, &m, 5, "Omega_F(1,1)|_X");
    p.pin_linear(&[(1, restricted[4])], 0);
    let ox = [Term::Known(1), Term::Known(0), Term::Known(0), Term::Known(0)];
    let w = short_exact_into(&mut p, &ox, &restricted, 4, "wedge2T");
    p.pin_linear(&[(1, w[3])], 0);

    // second step: blowup of Y along Z
    let y1 = restrict(true, 2 - d)?;
    let y2 = restrict(false, 2)?;
    let mut q = ChaseProblem::new();
    let t1 = terms_of(&mut q, &y1, "A");
    let t2 = terms_of(&mut q, &y2, "B");
    let yv_t = short_exact_into(&mut q, &t1, &t2, 4, "Omega_Y(2)");
    q.pin_linear(&[(1, yv_t[3])], 0);
    let yv = q.solve()?.vector_of_terms(&yv_t);
    trace.push("H(Y, Omega_Y (x) omega_Y^*)", &yv);
    anchor(tag, "H(Y, Omega_Y (x) omega_Y^*)", &r.y_data, &yv)?;
    // O_Z(k) on the elliptic curve Z has degree k H^3 with H^3 = c1^3 / 8
    let h3 = base.c1_cubed as u64 / 8;
    let zv = CohVector::from_known(&[2 * h3 + 2 * h3, 0]);
    trace.push("H(Z, (Omega_Y (x) omega_Y^*)|_Z)", &zv);
    anchor(tag, "H(Z, (Omega_Y (x) omega_Y^*)|_Z)", &[r.z_data, 0], &zv)?;
    let yt = terms_of(&mut p, &yv, "Yv");
    let zt = terms_of(&mut p, &zv, "Zv");
    let ideal = blowup_reduce_into(&mut p, &yt, &zt);
    for (x, y) in w.iter().zip(&ideal) {
        p.pin_linear(&[(1, *x), (-1, *y)], 0);
    }
    let chi = chi_wedge2_tangent(rec);
    p.pin_linear(&[(1, w[0]), (-1, w[1]), (1, w[2]), (-1, w[3])], chi);
    let sol = p.solve()?;
    trace.push("H(Y, Omega_Y(1))", &sol.vector_of_terms(&c));
    trace.push("H(X, Omega_F(1,1)|_X)", &sol.vector_of_terms(&restricted));
    let out = sol.vector_of_terms(&w);
    trace.push("H(X, wedge^2 T)", &out);
    anchor(tag, "final", &r.result, &out)?;
    Ok(out)
}

/// Blowup of `P^1 x P^1 x P^1` in a curve of tridegree `(1,1,3)`, pushed to
/// the three `P^1 x P^1` quotients.
fn curve_in_p1_cubed(trace: &mut Trace) -> Result<CohVector> {
    let tag = SpecialTag::M4_13;
    let y = weighted(&[vec![1, 1, 0, 0, 0, 0], vec![0, 0, 1, 1, 0, 0], vec![0, 0, 0, 0, 1, 1]])?;
    let q = weighted(&[vec![1, 1, 0, 0], vec![0, 0, 1, 1]])?;
    let p1 = weighted(&[vec![1, 1]])?;
    // Omega_Y (x) omega_Y^* is the sum of the three pullbacks of O(2,2)
    let whole = y.cotangent(&[2, 2, 2])?;
    let piece = kunneth(&q.line_bundle(&[2, 2])?, &p1.line_bundle(&[0])?)?;
    let sum = piece.add(&piece).and_then(|s| s.add(&piece)).expect("known");
    trace.push("H(Y, Omega_Y (x) omega_Y^*)", &whole);
    anchor(tag, "H(Y, Omega_Y (x) omega_Y^*)", &sum.values().expect("known"), &whole)?;
    let images: [[i64; 2]; 3] = [[1, 1], [1, 3], [3, 1]];
    let mut total = CohVector::zero(3);
    for img in images {
        let h = q.line_bundle(&[2 - img[0], 2 - img[1]])?;
        trace.push(format!("H(P1xP1, O(2,2) (x) I of bidegree {img:?})"), &h);
        total = total.add(&h).expect("known");
    }
    let out = pad(&total, 4);
    trace.push("H(X, wedge^2 T)", &out);
    anchor(tag, "final", &[4, 0, 0, 0], &out)?;
    Ok(out)
}

/// `P^1 x S` with `S` the degree one del Pezzo surface.
fn product_with_surface(lookup: &dyn Lookup, trace: &mut Trace) -> Result<CohVector> {
    let tag = SpecialTag::M10_1;
    let (h0t, h1t, h0a) = surface_table(lookup, "Bl8")?;
    let p1 = weighted(&[vec![1, 1]])?;
    let t_p1 = p1.line_bundle(&[2])?;
    let o_p1 = p1.line_bundle(&[0])?;
    let t_s = CohVector::from_known(&[h0t, h1t, 0]);
    let a_s = CohVector::from_known(&[h0a, 0, 0]);
    let x = kunneth(&t_p1, &t_s)?;
    let y = kunneth(&o_p1, &a_s)?;
    trace.push("H(T_P1 (x) T_S)", &x);
    trace.push("H(O_P1 (x) omega_S^*)", &y);
    let out = pad(&x.add(&y).expect("known"), 4);
    trace.push("H(X, wedge^2 T)", &out);
    anchor(tag, "final", &[2, 24, 0, 0], &out)?;
    Ok(out)
}
