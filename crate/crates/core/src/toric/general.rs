//! Čech cohomology on the affine cover by maximal cones, valid for complete
//! fans that need not be simplicial.
//!
//! Sections of a torus-invariant reflexive sheaf over `U_tau` in degree `m`
//! are the intersection over rays of `tau` of per-ray filtration steps. For
//! `O(D)` the step is all of `k` or zero; for the twisted cotangent sheaf it
//! is `M_k`, `u^perp`, or zero according to the sign of `<m,u> + a`.
//! Cohomology in degree `m` depends only on these per-ray types, so we sum
//! over type regions weighted by their lattice point counts.

use super::fan::TorusDivisor;
use super::polytope::{dot, Polyhedron};
use crate::coh::CohVector;
use crate::error::{HkrError, Result};
use crate::linalg::{integer_kernel, rank, solve_integer, sparse_rank};
use rayon::prelude::*;

/// A complete fan with arbitrary (possibly non-simplicial) maximal cones.
#[derive(Debug, Clone)]
pub struct GeneralFan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
    /// For each nonempty subset of cones (bitmask index), the rays of the intersection.
    inter: Vec<u64>,
}

/// Per-ray type of `<m,u> + a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Neg,
    Zero,
    Pos,
}

impl GeneralFan {
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>) -> Result<GeneralFan> {
        if cones.len() > 16 {
            return Err(HkrError::InvalidFan("Čech engine supports at most 16 maximal cones".into()));
        }
        if cones.iter().flatten().any(|&i| i >= rays.len()) {
            return Err(HkrError::InvalidFan("cone references a missing ray".into()));
        }
        for (i, c) in cones.iter().enumerate() {
            let m: Vec<Vec<i64>> = c.iter().map(|&j| rays[j].clone()).collect();
            if rank(&m) != dim {
                return Err(HkrError::InvalidFan(format!("cone {i} is not full-dimensional")));
            }
        }
        let masks: Vec<u64> = cones.iter().map(|c| c.iter().map(|&i| 1u64 << i).sum()).collect();
        let n = cones.len();
        let mut inter = vec![0u64; 1 << n];
        for s in 1usize..(1 << n) {
            let low = s.trailing_zeros() as usize;
            let rest = s & (s - 1);
            inter[s] = if rest == 0 { masks[low] } else { inter[rest] & masks[low] };
        }
        Ok(GeneralFan { dim, rays, cones, inter })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(|c| c.len() == self.dim)
    }

    pub fn is_cartier(&self, a: &[i64]) -> bool {
        self.cones.iter().all(|c| {
            let rows: Vec<Vec<i64>> = c.iter().map(|&i| self.rays[i].clone()).collect();
            let rhs: Vec<i64> = c.iter().map(|&i| -a[i]).collect();
            solve_integer(&rows, self.dim, &rhs).is_some()
        })
    }

    fn kinds(&self, a: &[i64], m: &[i64]) -> Vec<Kind> {
        self.rays
            .iter()
            .zip(a)
            .map(|(u, &ai)| match dot(u, m) + ai {
                t if t < 0 => Kind::Neg,
                0 => Kind::Zero,
                _ => Kind::Pos,
            })
            .collect()
    }

    /// Basis (as rows) of the section space over the cone with ray mask `tau`.
    fn local_space(&self, kinds: &[Kind], tau: u64, cotangent: bool) -> Vec<Vec<i64>> {
        let d = self.dim;
        let rays_in = (0..self.rays.len()).filter(|&i| tau >> i & 1 == 1);
        if !cotangent {
            // O(D): k when every ray has <m,u> + a >= 0
            let ok = rays_in.clone().all(|i| kinds[i] != Kind::Neg);
            return if ok { vec![vec![1]] } else { vec![] };
        }
        let mut zero_rows = Vec::new();
        for i in rays_in {
            match kinds[i] {
                Kind::Neg => return vec![],
                Kind::Zero => zero_rows.push(self.rays[i].clone()),
                Kind::Pos => {}
            }
        }
        if zero_rows.is_empty() {
            return (0..d).map(|j| (0..d).map(|k| i64::from(j == k)).collect()).collect();
        }
        integer_kernel(&zero_rows, d)
    }

    fn cech(&self, kinds: &[Kind], cotangent: bool) -> Vec<u64> {
        let n = self.cones.len();
        let amb = if cotangent { self.dim } else { 1 };
        // subsets grouped by size
        let by_size: Vec<Vec<usize>> = (1..=n)
            .map(|k| (1usize..(1 << n)).filter(|s| s.count_ones() as usize == k).collect())
            .collect();
        let spaces: Vec<Vec<Vec<i64>>> = (0..(1usize << n))
            .map(|s| if s == 0 { vec![] } else { self.local_space(kinds, self.inter[s], cotangent) })
            .collect();
        let dim_c = |p: usize| by_size[p].iter().map(|&s| spaces[s].len()).sum::<usize>();
        // delta^p : C^p -> C^{p+1} into ambient coordinates
        let ranks: Vec<usize> = (0..n)
            .map(|p| {
                if p + 1 >= n {
                    return 0;
                }
                let src = &by_size[p];
                let dst = &by_size[p + 1];
                let cols = dim_c(p);
                if cols == 0 {
                    return 0;
                }
                let dst_index: std::collections::HashMap<usize, usize> =
                    dst.iter().enumerate().map(|(i, &s)| (s, i)).collect();
                let mut columns: Vec<Vec<(usize, i64)>> = Vec::with_capacity(cols);
                for &s in src {
                    for basis in &spaces[s] {
                        let mut col = Vec::new();
                        for j in 0..n {
                            if s >> j & 1 == 1 {
                                continue;
                            }
                            let t = s | (1 << j);
                            let sign = if (s & ((1 << j) - 1)).count_ones() % 2 == 0 { 1 } else { -1 };
                            let row0 = dst_index[&t] * amb;
                            col.extend(basis.iter().enumerate().map(|(k, &x)| (row0 + k, sign * x)));
                        }
                        col.sort_unstable_by_key(|e| e.0);
                        columns.push(col);
                    }
                }
                sparse_rank(&columns, dst.len() * amb)
            })
            .collect();
        (0..n)
            .map(|p| {
                let into = if p == 0 { 0 } else { ranks[p - 1] };
                (dim_c(p) - into - ranks[p]) as u64
            })
            .collect()
    }

    /// `dim H^i(O(D))_m` for `i = 0..=d`.
    pub fn line_bundle_character(&self, a: &[i64], m: &[i64]) -> Vec<u64> {
        let mut h = self.cech(&self.kinds(a, m), false);
        h.resize(self.dim + 1, 0);
        h
    }

    /// `dim H^i(Omega(D))_m` for `i = 0..=d`.
    pub fn cotangent_character(&self, a: &[i64], m: &[i64]) -> Vec<u64> {
        let mut h = self.cech(&self.kinds(a, m), true);
        h.resize(self.dim + 1, 0);
        h
    }

    /// Characters of the given type; `pos_from` is the least value of
    /// `<m,u> + a` counted as positive.
    fn region(&self, a: &[i64], kinds: &[Kind], pos_from: i64) -> Polyhedron {
        let mut normals = Vec::new();
        let mut rhs = Vec::new();
        for ((u, &ai), &k) in self.rays.iter().zip(a).zip(kinds) {
            let neg: Vec<i64> = u.iter().map(|x| -x).collect();
            match k {
                Kind::Neg => {
                    normals.push(neg);
                    rhs.push(ai + 1);
                }
                Kind::Zero => {
                    normals.push(u.clone());
                    rhs.push(-ai);
                    normals.push(neg);
                    rhs.push(ai);
                }
                Kind::Pos => {
                    normals.push(u.clone());
                    rhs.push(pos_from - ai);
                }
            }
        }
        Polyhedron::new(self.dim, normals, rhs)
    }

    fn total(&self, a: &[i64], cotangent: bool) -> Result<CohVector> {
        if a.len() != self.rays.len() {
            return Err(HkrError::InvalidFan("divisor length does not match rays".into()));
        }
        let n = self.rays.len();
        let types: Vec<Vec<Kind>> = if cotangent {
            let mut all = vec![vec![]];
            for _ in 0..n {
                all = all
                    .into_iter()
                    .flat_map(|t: Vec<Kind>| {
                        [Kind::Neg, Kind::Zero, Kind::Pos].into_iter().map(move |k| {
                            let mut t = t.clone();
                            t.push(k);
                            t
                        })
                    })
                    .collect();
            }
            all
        } else {
            // Zero and Pos behave alike for line bundles; use Zero-or-Pos regions.
            (0..(1u64 << n))
                .map(|v| (0..n).map(|i| if v >> i & 1 == 1 { Kind::Neg } else { Kind::Pos }).collect())
                .collect()
        };
        let parts: Vec<Result<Vec<u64>>> = types
            .par_iter()
            .map(|kinds| {
                // for line bundles "Pos" stands for a nonnegative value
                let poly = self.region(a, kinds, if cotangent { 1 } else { 0 });
                if poly.is_empty() {
                    return Ok(vec![]);
                }
                let count = poly.lattice_points().map(|pts| pts.len() as u64);
                if count == Some(0) {
                    return Ok(vec![]);
                }
                let h = self.cech(kinds, cotangent);
                if h.iter().all(|&x| x == 0) {
                    return Ok(vec![]);
                }
                match count {
                    Some(c) => Ok(h.iter().map(|&x| x * c).collect()),
                    None => Err(HkrError::IncompleteFan(
                        "unbounded character region with nonzero cohomology".into(),
                    )),
                }
            })
            .collect();
        let mut out = vec![0u64; self.dim + 1];
        for p in parts {
            for (i, x) in p?.into_iter().enumerate() {
                if i <= self.dim {
                    out[i] += x;
                } else if x != 0 {
                    return Err(HkrError::Consistency("Čech cohomology above the dimension".into()));
                }
            }
        }
        Ok(CohVector::from_known(&out))
    }

    pub fn line_bundle_cohomology(&self, a: &TorusDivisor) -> Result<CohVector> {
        self.total(a, false)
    }

    pub fn cotangent_twist_cohomology(&self, a: &TorusDivisor) -> Result<CohVector> {
        self.total(a, true)
    }
}
