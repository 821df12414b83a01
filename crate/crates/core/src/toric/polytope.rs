//! Rational polyhedra `{m : <n_k, m> >= b_k}` and their lattice points.

use crate::linalg::{combinations, rank, solve_rational};

#[derive(Debug, Clone)]
pub struct Polyhedron {
    pub dim: usize,
    pub normals: Vec<Vec<i64>>,
    pub rhs: Vec<i64>,
}

impl Polyhedron {
    pub fn new(dim: usize, normals: Vec<Vec<i64>>, rhs: Vec<i64>) -> Self {
        Polyhedron { dim, normals, rhs }
    }

    fn satisfies(&self, m: &[i64]) -> bool {
        self.normals
            .iter()
            .zip(&self.rhs)
            .all(|(n, &b)| dot(n, m) >= b)
    }

    /// True when the recession cone `{y : <n_k, y> >= 0}` is zero.
    pub fn is_bounded(&self) -> bool {
        let d = self.dim;
        if d == 0 {
            return true;
        }
        if rank(&self.normals) < d {
            return false;
        }
        // A pointed cone is nonzero iff it has an extreme ray, and every
        // extreme ray is cut out by d-1 independent tight constraints.
        for combo in combinations(self.normals.len(), d - 1) {
            let rows: Vec<Vec<i64>> = combo.iter().map(|&i| self.normals[i].clone()).collect();
            if rank(&rows) != d - 1 {
                continue;
            }
            let y = orthogonal_complement_generator(&rows, d);
            for sign in [1i64, -1] {
                let ys: Vec<i64> = y.iter().map(|v| v * sign).collect();
                if self.normals.iter().all(|n| dot(n, &ys) >= 0) {
                    return false;
                }
            }
        }
        true
    }

    /// True when no real point satisfies the constraints. Conservative
    /// (`false`) when the normals do not span.
    pub fn is_empty(&self) -> bool {
        // a nonempty polyhedron with spanning normals has a vertex
        self.dim > 0 && rank(&self.normals) == self.dim && self.bounding_box().is_none()
    }

    /// Componentwise integer bounding box, `None` when the polyhedron is empty.
    /// Requires boundedness.
    pub fn bounding_box(&self) -> Option<Vec<(i64, i64)>> {
        let d = self.dim;
        let mut lo = vec![i128::MAX; d];
        let mut hi = vec![i128::MIN; d];
        let mut any = false;
        for combo in combinations(self.normals.len(), d) {
            let a: Vec<Vec<i64>> = combo.iter().map(|&i| self.normals[i].clone()).collect();
            let b: Vec<i64> = combo.iter().map(|&i| self.rhs[i]).collect();
            let Some((x, den)) = solve_rational(&a, &b) else {
                continue;
            };
            let feasible = self.normals.iter().zip(&self.rhs).all(|(n, &r)| {
                let s: i128 = n.iter().zip(&x).map(|(&ni, &xi)| ni as i128 * xi).sum();
                s >= r as i128 * den
            });
            if !feasible {
                continue;
            }
            any = true;
            for j in 0..d {
                lo[j] = lo[j].min(x[j].div_euclid(den) + i128::from(x[j].rem_euclid(den) != 0));
                hi[j] = hi[j].max(x[j].div_euclid(den));
            }
        }
        if !any {
            return None;
        }
        Some(lo.into_iter().zip(hi).map(|(l, h)| (l as i64, h as i64)).collect())
    }

    /// All lattice points, or `None` if the polyhedron is unbounded.
    pub fn lattice_points(&self) -> Option<Vec<Vec<i64>>> {
        if !self.is_bounded() {
            return None;
        }
        let mut out = Vec::new();
        if self.dim == 0 {
            if self.rhs.iter().all(|&b| b <= 0) {
                out.push(vec![]);
            }
            return Some(out);
        }
        let Some(bx) = self.bounding_box() else {
            return Some(out);
        };
        let mut m: Vec<i64> = bx.iter().map(|&(l, _)| l).collect();
        if bx.iter().any(|&(l, h)| l > h) {
            return Some(out);
        }
        loop {
            if self.satisfies(&m) {
                out.push(m.clone());
            }
            let mut j = 0;
            loop {
                if j == self.dim {
                    return Some(out);
                }
                if m[j] < bx[j].1 {
                    m[j] += 1;
                    break;
                }
                m[j] = bx[j].0;
                j += 1;
            }
        }
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A nonzero integer vector orthogonal to the `d-1` independent rows.
fn orthogonal_complement_generator(rows: &[Vec<i64>], d: usize) -> Vec<i64> {
    // Generalized cross product via signed minors.
    (0..d)
        .map(|j| {
            let minor: Vec<Vec<i64>> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect())
                .collect();
            let m = crate::linalg::det(&minor) as i64;
            if j % 2 == 0 {
                m
            } else {
                -m
            }
        })
        .collect()
}
