//! Dimension chasing through exact sequences.
//!
//! An exact sequence `0 -> V_0 -> ... -> V_m -> 0` is encoded with rank
//! variables `r_i >= 0` for the maps `V_i -> V_{i+1}`, subject to
//! `dim V_i = r_{i-1} + r_i`. Together with linear pins this is a small
//! integer program. `solve` returns, for every user variable, the exact
//! projection of the integer feasible set.

mod solver;

pub use solver::{ChaseProblem, Solution, Term};

use crate::coh::{CohVector, Entry};
use crate::error::{HkrError, Result};

/// Turns a vector into solver terms, registering its unknown entries.
pub fn terms_of(p: &mut ChaseProblem, v: &CohVector, label: &str) -> Vec<Term> {
    v.entries
        .iter()
        .enumerate()
        .map(|(i, e)| match *e {
            Entry::Known(x) => Term::Known(x),
            Entry::Unknown { lo, hi, .. } => {
                let id = p.new_var(format!("{label}[{i}]"));
                p.set_bounds(id, lo, hi);
                Term::Var(id)
            }
        })
        .collect()
}

/// Registers the Koszul chase for `G|_X` given `H^*(F, wedge^j E^* (x) G)` for
/// `j = 0..=r`, each of length `dim F + 1`. Returns terms for `H^0..H^{dim_x}(X, G|_X)`.
pub fn koszul_restrict_into(p: &mut ChaseProblem, ambient: &[Vec<Term>], dim_x: usize, label: &str) -> Vec<Term> {
    let r = ambient.len() - 1;
    let len = ambient.iter().map(|v| v.len()).max().unwrap_or(0);
    let pad = |v: &Vec<Term>| -> Vec<Term> {
        let mut v = v.clone();
        v.resize(len, Term::Known(0));
        v
    };
    if r == 0 {
        let k0 = pad(&ambient[0]);
        for t in k0.iter().skip(dim_x + 1) {
            p.pin_linear(&[(1, *t)], 0);
        }
        return k0.into_iter().take(dim_x + 1).collect();
    }
    // s[j] = cohomology of the j-th syzygy sheaf; s[0] = G|_X, s[r] = K_r.
    let mut s: Vec<Vec<Term>> = Vec::with_capacity(r + 1);
    for j in 0..r {
        s.push(
            (0..len)
                .map(|i| Term::Var(p.new_var(format!("{label}.S{j}[{i}]"))))
                .collect(),
        );
    }
    s.push(pad(&ambient[r]));
    for j in 0..r {
        let k = pad(&ambient[j]);
        let mut seq = Vec::with_capacity(3 * len);
        for i in 0..len {
            seq.push(s[j + 1][i]);
            seq.push(k[i]);
            seq.push(s[j][i]);
        }
        p.add_exact_sequence(&seq);
    }
    for t in s[0].iter().skip(dim_x + 1) {
        p.pin_linear(&[(1, *t)], 0);
    }
    s[0].iter().take(dim_x + 1).copied().collect()
}

/// Registers the long exact sequence of `0 -> A -> B -> C -> 0` on a threefold
/// and returns the terms of `C`, pinned by `h^3(C) = 0` and optionally `chi(C)`.
pub fn conormal_assemble_into(p: &mut ChaseProblem, first: &[Term], second: &[Term], chi: Option<i64>) -> Vec<Term> {
    let c = short_exact_into(p, first, second, 4, "wedge2T");
    p.pin_linear(&[(1, c[3])], 0);
    if let Some(chi) = chi {
        p.pin_linear(&[(1, c[0]), (-1, c[1]), (1, c[2]), (-1, c[3])], chi);
    }
    c
}

/// Registers `0 -> A -> B -> C -> 0` with `len` graded pieces and returns
/// fresh terms for `C`, with no further pins.
pub fn short_exact_into(p: &mut ChaseProblem, a: &[Term], b: &[Term], len: usize, label: &str) -> Vec<Term> {
    let c: Vec<Term> = (0..len).map(|i| Term::Var(p.new_var(format!("{label}[{i}]")))).collect();
    let get = |v: &[Term], i: usize| v.get(i).copied().unwrap_or(Term::Known(0));
    let mut seq = Vec::new();
    for i in 0..len {
        seq.push(get(a, i));
        seq.push(get(b, i));
        seq.push(c[i]);
    }
    p.add_exact_sequence(&seq);
    c
}

pub fn koszul_restrict(ambient: &[CohVector], dim_x: usize) -> Result<CohVector> {
    let mut p = ChaseProblem::new();
    let terms: Vec<Vec<Term>> = ambient
        .iter()
        .enumerate()
        .map(|(j, v)| terms_of(&mut p, v, &format!("K{j}")))
        .collect();
    let out = koszul_restrict_into(&mut p, &terms, dim_x, "koszul");
    let sol = p.solve()?;
    Ok(sol.vector_of_terms(&out))
}

pub fn conormal_assemble(first: &CohVector, second: &CohVector, chi: Option<i64>) -> Result<CohVector> {
    let mut p = ChaseProblem::new();
    let a = terms_of(&mut p, first, "A");
    let b = terms_of(&mut p, second, "B");
    let c = conormal_assemble_into(&mut p, &a, &b, chi);
    let sol = p.solve()?;
    let out = sol.vector_of_terms(&c);
    if let (Some(chi), Some(e)) = (chi, out.euler_characteristic()) {
        assert_eq!(chi, e, "assembled vector violates its own chi pin");
    }
    Ok(out)
}

/// Graded convolution of two fully known vectors.
pub fn kunneth(x: &CohVector, y: &CohVector) -> Result<CohVector> {
    let a = x
        .values()
        .ok_or_else(|| HkrError::UnknownEntries(format!("{x}")))?;
    let b = y
        .values()
        .ok_or_else(|| HkrError::UnknownEntries(format!("{y}")))?;
    if a.is_empty() || b.is_empty() {
        return Ok(CohVector::from_known(&[]));
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &u) in a.iter().enumerate() {
        for (j, &v) in b.iter().enumerate() {
            out[i + j] += u * v;
        }
    }
    Ok(CohVector::from_known(&out))
}
