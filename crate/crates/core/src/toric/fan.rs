//! Complete simplicial fans, their face complexes, and divisor class data.

use super::polytope::dot;
use crate::error::{HkrError, Result};
use crate::linalg::{self, combinations, rank, solve_integer, solve_rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{HashMap, HashSet};
use std::sync::RwLock;

/// Integer coefficients `a_rho`, one per ray.
pub type TorusDivisor = Vec<i64>;

#[derive(Debug)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
    /// Every face of every maximal cone as a ray bitmask, grouped by size.
    faces_by_size: Vec<Vec<u64>>,
    betti_cache: RwLock<HashMap<u64, Vec<usize>>>,
}

impl Clone for Fan {
    fn clone(&self) -> Self {
        Fan {
            dim: self.dim,
            rays: self.rays.clone(),
            max_cones: self.max_cones.clone(),
            faces_by_size: self.faces_by_size.clone(),
            betti_cache: RwLock::new(self.betti_cache.read().unwrap().clone()),
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Fan {
    /// Builds and validates a complete simplicial fan.
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        let bad = |s: String| Err(HkrError::InvalidFan(s));
        if dim == 0 {
            return bad("dimension must be positive".into());
        }
        if rays.len() > 63 {
            return bad("at most 63 rays are supported".into());
        }
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return bad(format!("ray {i} has length {}, expected {dim}", r.len()));
            }
            if r.iter().fold(0, |g, &x| gcd(g, x)) != 1 {
                return bad(format!("ray {i} {r:?} is not primitive"));
            }
        }
        let mut cones = Vec::new();
        for (ci, c) in max_cones.iter().enumerate() {
            let mut c = c.clone();
            c.sort_unstable();
            c.dedup();
            if c.iter().any(|&i| i >= rays.len()) {
                return bad(format!("cone {ci} references a missing ray"));
            }
            if c.len() != dim {
                return bad(format!("cone {ci} has {} rays; simplicial cones need {dim}", c.len()));
            }
            let m: Vec<Vec<i64>> = c.iter().map(|&i| rays[i].clone()).collect();
            if rank(&m) != dim {
                return bad(format!("cone {ci} is not full-dimensional"));
            }
            cones.push(c);
        }
        let mut faces_by_size: Vec<HashSet<u64>> = vec![HashSet::new(); dim + 1];
        for c in &cones {
            let mask: u64 = c.iter().map(|&i| 1u64 << i).sum();
            let mut sub = mask;
            loop {
                faces_by_size[sub.count_ones() as usize].insert(sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & mask;
            }
        }
        let faces_by_size: Vec<Vec<u64>> = faces_by_size
            .into_iter()
            .map(|s| {
                let mut v: Vec<u64> = s.into_iter().collect();
                v.sort_unstable();
                v
            })
            .collect();
        let fan = Fan {
            dim,
            rays,
            max_cones: cones,
            faces_by_size,
            betti_cache: RwLock::new(HashMap::new()),
        };
        fan.check_complete()?;
        Ok(fan)
    }

    /// Simplicial fan of the GIT quotient with the given weight matrix and a
    /// generic stability class. Rays are read off the integer kernel of the weights.
    pub fn from_weights(weights: &[Vec<i64>], stability: &[i64]) -> Result<(Fan, ClassLattice)> {
        let r = weights.len();
        let n = weights.first().map_or(0, |w| w.len());
        let kernel = linalg::integer_kernel(weights, n);
        let d = kernel.len();
        if d + r != n {
            return Err(HkrError::ClassGroup("weight matrix does not have full row rank".into()));
        }
        let rays: Vec<Vec<i64>> = (0..n).map(|i| kernel.iter().map(|k| k[i]).collect()).collect();
        let cones = git_cones(weights, stability)?;
        let fan = Fan::new(d, rays, cones)?;
        let lattice = ClassLattice::new(&fan, weights.to_vec())?;
        Ok((fan, lattice))
    }

    /// Accepts printed cone data that may contain non-simplicial cones. Those
    /// are replaced by the GIT chamber fan of `stability`, which must refine
    /// the printed cones without adding rays.
    pub fn refined(
        dim: usize,
        rays: Vec<Vec<i64>>,
        printed: Vec<Vec<usize>>,
        weights: &[Vec<i64>],
        stability: &[i64],
    ) -> Result<Fan> {
        let git = git_cones(weights, stability)?;
        let printed_sets: Vec<HashSet<usize>> =
            printed.iter().map(|c| c.iter().copied().collect()).collect();
        for c in &git {
            if !printed_sets.iter().any(|p| c.iter().all(|i| p.contains(i))) {
                return Err(HkrError::InvalidFan(format!(
                    "chamber cone {c:?} is not contained in any printed cone"
                )));
            }
        }
        for (i, p) in printed_sets.iter().enumerate() {
            if !git.iter().any(|c| c.iter().all(|j| p.contains(j))) {
                return Err(HkrError::InvalidFan(format!("printed cone {i} is not subdivided")));
            }
        }
        Fan::new(dim, rays, git)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn faces_of_size(&self, k: usize) -> &[u64] {
        &self.faces_by_size[k]
    }

    pub fn all_rays_mask(&self) -> u64 {
        (1u64 << self.rays.len()) - 1
    }

    fn check_complete(&self) -> Result<()> {
        let d = self.dim;
        let mut ridge_count: HashMap<Vec<usize>, usize> = HashMap::new();
        for c in &self.max_cones {
            for skip in 0..d {
                let ridge: Vec<usize> = c
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &v)| v)
                    .collect();
                *ridge_count.entry(ridge).or_insert(0) += 1;
            }
        }
        if let Some((ridge, n)) = ridge_count.iter().find(|&(_, &n)| n != 2) {
            return Err(HkrError::IncompleteFan(format!(
                "ridge {ridge:?} lies in {n} maximal cones"
            )));
        }
        let mut probes: Vec<Vec<i64>> = Vec::new();
        for r in &self.rays {
            probes.push(r.clone());
            probes.push(r.iter().map(|x| -x).collect());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..64 {
            probes.push((0..d).map(|_| rng.gen_range(-20..=20)).collect());
        }
        for p in probes {
            if !self.cone_containing(&p) {
                return Err(HkrError::IncompleteFan(format!("probe {p:?} is not covered")));
            }
        }
        Ok(())
    }

    fn cone_containing(&self, v: &[i64]) -> bool {
        self.max_cones.iter().any(|c| {
            // columns are the cone rays
            let a: Vec<Vec<i64>> = (0..self.dim)
                .map(|row| c.iter().map(|&i| self.rays[i][row]).collect())
                .collect();
            match solve_rational(&a, v) {
                Some((x, _)) => x.iter().all(|&t| t >= 0),
                None => false,
            }
        })
    }

    /// Reduced Betti numbers of the induced subcomplex on the ray set `v`,
    /// indexed so that entry `i` is `dim H~^{i-1}`, for `i = 0..=dim`.
    pub fn reduced_betti(&self, v: u64) -> Vec<usize> {
        if let Some(b) = self.betti_cache.read().unwrap().get(&v) {
            return b.clone();
        }
        let b = self.compute_betti(v);
        self.betti_cache.write().unwrap().insert(v, b.clone());
        b
    }

    fn compute_betti(&self, v: u64) -> Vec<usize> {
        let d = self.dim;
        let faces: Vec<Vec<u64>> = (0..=d)
            .map(|k| self.faces_by_size[k].iter().copied().filter(|&f| f & !v == 0).collect())
            .collect();
        // coboundary ranks between sizes k and k+1
        let ranks: Vec<usize> = (0..d)
            .map(|k| rank(&coboundary_matrix(&faces[k], &faces[k + 1])))
            .collect();
        (0..=d)
            .map(|k| {
                let into = if k == 0 { 0 } else { ranks[k - 1] };
                let out = if k == d { 0 } else { ranks[k] };
                faces[k].len() - into - out
            })
            .collect()
    }

    /// Whether `D` is Cartier: an integral `m_sigma` on every maximal cone.
    pub fn is_cartier(&self, a: &[i64]) -> bool {
        self.cartier_data(a).is_some()
    }

    /// Per-cone characters `m_sigma` with `<m_sigma, u_rho> = -a_rho` on the cone.
    pub fn cartier_data(&self, a: &[i64]) -> Option<Vec<Vec<i64>>> {
        let mut out = Vec::new();
        for c in &self.max_cones {
            let rows: Vec<Vec<i64>> = c.iter().map(|&i| self.rays[i].clone()).collect();
            let rhs: Vec<i64> = c.iter().map(|&i| -a[i]).collect();
            let (x, den) = solve_rational(&rows, &rhs)?;
            if x.iter().any(|&t| t % den != 0) {
                return None;
            }
            out.push(x.iter().map(|&t| (t / den) as i64).collect());
        }
        Some(out)
    }

    /// Nef test for Cartier divisors by convexity of the support function.
    pub fn is_nef(&self, a: &[i64]) -> bool {
        let Some(ms) = self.cartier_data(a) else {
            return false;
        };
        ms.iter()
            .all(|m| self.rays.iter().zip(a).all(|(u, &ai)| dot(m, u) >= -ai))
    }

    pub fn anticanonical(&self) -> TorusDivisor {
        vec![1; self.rays.len()]
    }
}

/// Coboundary `C^{k-1} -> C^k` between faces of sizes `k` and `k+1`, rows
/// indexed by the larger faces.
pub fn coboundary_matrix(small: &[u64], big: &[u64]) -> Vec<Vec<i64>> {
    let index: HashMap<u64, usize> = small.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    big.iter()
        .map(|&f| {
            let mut row = vec![0i64; small.len()];
            let mut sign = 1i64;
            let mut rest = f;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                if let Some(&j) = index.get(&(f & !bit)) {
                    row[j] = sign;
                }
                sign = -sign;
                rest &= rest - 1;
            }
            row
        })
        .collect()
}

/// Maximal cones of the GIT fan: complements of column sets whose degrees
/// form a basis with the stability class strictly inside their cone.
pub fn git_cones(weights: &[Vec<i64>], stability: &[i64]) -> Result<Vec<Vec<usize>>> {
    let r = weights.len();
    let n = weights.first().map_or(0, |w| w.len());
    let mut cones = Vec::new();
    for j in combinations(n, r) {
        let a: Vec<Vec<i64>> = (0..r).map(|k| j.iter().map(|&c| weights[k][c]).collect()).collect();
        let Some((x, _)) = solve_rational(&a, stability) else {
            continue;
        };
        if x.iter().all(|&t| t > 0) {
            cones.push((0..n).filter(|c| !j.contains(c)).collect());
        } else if x.contains(&0) && x.iter().all(|&t| t >= 0) {
            return Err(HkrError::InvalidFan(format!(
                "stability class {stability:?} lies on a wall"
            )));
        }
    }
    Ok(cones)
}

/// Projection from torus-invariant divisors onto the class group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassLattice {
    pub projection: Vec<Vec<i64>>,
}

impl ClassLattice {
    /// Validates `projection` against the fan: it kills principal divisors,
    /// has full rank, and the class group is torsion-free.
    pub fn new(fan: &Fan, projection: Vec<Vec<i64>>) -> Result<ClassLattice> {
        ClassLattice::for_rays(fan.dim(), fan.rays(), projection)
    }

    /// Same checks given only the rays.
    pub fn for_rays(d: usize, rays: &[Vec<i64>], projection: Vec<Vec<i64>>) -> Result<ClassLattice> {
        let n = rays.len();
        if linalg::maximal_minor_gcd(rays) != 1 {
            return Err(HkrError::ClassGroup("class group has torsion".into()));
        }
        if projection.len() + d != n || projection.iter().any(|r| r.len() != n) {
            return Err(HkrError::ClassGroup(format!(
                "projection must be {} x {n}",
                n - d
            )));
        }
        for row in &projection {
            for j in 0..d {
                let s: i64 = (0..n).map(|i| row[i] * rays[i][j]).sum();
                if s != 0 {
                    return Err(HkrError::ClassGroup(
                        "projection does not vanish on principal divisors".into(),
                    ));
                }
            }
        }
        let cols: Vec<Vec<i64>> = (0..n).map(|i| projection.iter().map(|r| r[i]).collect()).collect();
        if projection.is_empty() {
            return Ok(ClassLattice { projection });
        }
        if linalg::maximal_minor_gcd(&cols) != 1 {
            return Err(HkrError::ClassGroup("projection is not onto the class group".into()));
        }
        Ok(ClassLattice { projection })
    }

    /// Integer kernel of the ray matrix, used when no projection is supplied.
    pub fn from_fan(fan: &Fan) -> Result<ClassLattice> {
        ClassLattice::from_rays(fan.dim(), fan.rays())
    }

    pub fn from_rays(d: usize, rays: &[Vec<i64>]) -> Result<ClassLattice> {
        let n = rays.len();
        let ut: Vec<Vec<i64>> = (0..d).map(|j| rays.iter().map(|r| r[j]).collect()).collect();
        let k = linalg::integer_kernel(&ut, n);
        ClassLattice::for_rays(d, rays, k)
    }

    pub fn class_rank(&self) -> usize {
        self.projection.len()
    }

    pub fn class_of(&self, a: &[i64]) -> Vec<i64> {
        self.projection.iter().map(|row| dot(row, a)).collect()
    }

    pub fn representative_of(&self, c: &[i64]) -> Result<TorusDivisor> {
        let n = self.projection.first().map_or(0, |r| r.len());
        solve_integer(&self.projection, n, c)
            .ok_or_else(|| HkrError::ClassGroup(format!("no representative for class {c:?}")))
    }

    /// Class of the ray divisor `D_i`.
    pub fn ray_class(&self, i: usize) -> Vec<i64> {
        self.projection.iter().map(|row| row[i]).collect()
    }
}
