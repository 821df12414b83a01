//! Line bundle cohomology by sign patterns of characters.
//!
//! For a character `m` let `V(m)` be the rays with `<m, u> < -a`. Then
//! `H^i(O(D))_m` is the reduced cohomology `H~^{i-1}` of the subcomplex
//! induced on `V(m)`. Rather than scanning a box of characters, we loop over
//! subsets `V` with nonzero reduced cohomology and count the lattice points of
//! the polytope of characters realizing exactly that sign pattern.

use super::fan::Fan;
use super::polytope::Polyhedron;
use crate::coh::CohVector;
use crate::error::{HkrError, Result};
use rayon::prelude::*;

/// Characters grouped by the sign pattern that contributes them.
#[derive(Debug, Clone)]
pub struct PatternPoints {
    pub negative: u64,
    pub betti: Vec<usize>,
    pub points: Vec<Vec<i64>>,
}

fn pattern_polyhedron(fan: &Fan, a: &[i64], v: u64) -> Polyhedron {
    let mut normals = Vec::with_capacity(fan.num_rays());
    let mut rhs = Vec::with_capacity(fan.num_rays());
    for (i, u) in fan.rays().iter().enumerate() {
        if v >> i & 1 == 1 {
            normals.push(u.iter().map(|x| -x).collect());
            rhs.push(a[i] + 1);
        } else {
            normals.push(u.clone());
            rhs.push(-a[i]);
        }
    }
    Polyhedron::new(fan.dim(), normals, rhs)
}

fn check_len(fan: &Fan, a: &[i64]) -> Result<()> {
    if a.len() != fan.num_rays() {
        return Err(HkrError::InvalidFan(format!(
            "divisor has {} coefficients, fan has {} rays",
            a.len(),
            fan.num_rays()
        )));
    }
    Ok(())
}

/// Every sign pattern with nonzero reduced cohomology together with its characters.
pub fn contributing_patterns(fan: &Fan, a: &[i64]) -> Result<Vec<PatternPoints>> {
    check_len(fan, a)?;
    let n = fan.num_rays();
    let results: Vec<Result<Option<PatternPoints>>> = (0..(1u64 << n))
        .into_par_iter()
        .map(|v| {
            let betti = fan.reduced_betti(v);
            if betti.iter().all(|&b| b == 0) {
                return Ok(None);
            }
            let poly = pattern_polyhedron(fan, a, v);
            match poly.lattice_points() {
                Some(points) if points.is_empty() => Ok(None),
                Some(points) => Ok(Some(PatternPoints { negative: v, betti, points })),
                None => Err(HkrError::IncompleteFan(format!(
                    "unbounded character region for sign pattern {v:#b}"
                ))),
            }
        })
        .collect();
    let mut out = Vec::new();
    for r in results {
        if let Some(p) = r? {
            out.push(p);
        }
    }
    Ok(out)
}

pub fn line_bundle_cohomology(fan: &Fan, a: &[i64]) -> Result<CohVector> {
    let mut h = vec![0u64; fan.dim() + 1];
    for p in contributing_patterns(fan, a)? {
        for (i, &b) in p.betti.iter().enumerate() {
            h[i] += (b * p.points.len()) as u64;
        }
    }
    Ok(CohVector::from_known(&h))
}

/// Characters of global sections: lattice points of `{<m,u> >= -a}`.
pub fn section_basis(fan: &Fan, a: &[i64]) -> Result<Vec<Vec<i64>>> {
    check_len(fan, a)?;
    pattern_polyhedron(fan, a, 0)
        .lattice_points()
        .ok_or_else(|| HkrError::IncompleteFan("section polytope is unbounded".into()))
}

/// The negative-ray set `V(m)` for divisor `a`.
pub fn negative_set(fan: &Fan, a: &[i64], m: &[i64]) -> u64 {
    let mut v = 0u64;
    for (i, u) in fan.rays().iter().enumerate() {
        let s: i64 = u.iter().zip(m).map(|(x, y)| x * y).sum();
        if s < -a[i] {
            v |= 1 << i;
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Fan {
        Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1]], vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    #[test]
    fn p2_line_bundles() {
        let f = p2();
        assert_eq!(line_bundle_cohomology(&f, &[1, 0, 0]).unwrap().values().unwrap(), vec![3, 0, 0]);
        assert_eq!(line_bundle_cohomology(&f, &[-1, -1, -1]).unwrap().values().unwrap(), vec![0, 0, 1]);
        assert_eq!(line_bundle_cohomology(&f, &[1, 1, 1]).unwrap().values().unwrap(), vec![10, 0, 0]);
        assert_eq!(line_bundle_cohomology(&f, &[0, 0, 0]).unwrap().values().unwrap(), vec![1, 0, 0]);
        assert_eq!(line_bundle_cohomology(&f, &[-1, 0, 0]).unwrap().values().unwrap(), vec![0, 0, 0]);
        assert_eq!(section_basis(&f, &[1, 0, 0]).unwrap().len(), 3);
    }
}
