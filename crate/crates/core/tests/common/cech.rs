//! Line bundle cohomology of smooth complete toric varieties computed
//! directly from the Čech complex of the standard affine cover, one
//! character at a time, with ranks taken modulo a large prime.

use hkr_core::toric::{line_bundle_cohomology, ClassLattice, Fan, GeneralFan};
use std::collections::HashMap;

const P: i64 = 1_000_000_007;

#[derive(Debug, Clone)]
pub struct SmoothFan {
    pub name: &'static str,
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
}

fn cyclic(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|i| vec![i, (i + 1) % n]).collect()
}

pub fn small_fans() -> Vec<SmoothFan> {
    let surface = |name, rays: Vec<[i64; 2]>| SmoothFan {
        name,
        dim: 2,
        cones: cyclic(rays.len()),
        rays: rays.into_iter().map(|r| r.to_vec()).collect(),
    };
    vec![
        surface("P2", vec![[1, 0], [0, 1], [-1, -1]]),
        surface("P1xP1", vec![[1, 0], [0, 1], [-1, 0], [0, -1]]),
        surface("F1", vec![[1, 0], [0, 1], [-1, 1], [0, -1]]),
        surface("Bl2P2", vec![[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1]]),
        SmoothFan {
            name: "P3",
            dim: 3,
            rays: vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![-1, -1, -1]],
            cones: vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
        },
    ]
}

fn pow_mod(mut b: i64, mut e: i64) -> i64 {
    let mut r = 1;
    b = b.rem_euclid(P);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    r
}

pub fn rank_mod_p(mut rows: Vec<Vec<i64>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c].rem_euclid(P) != 0) else { continue };
        rows.swap(rank, piv);
        let inv = pow_mod(rows[rank][c], P - 2);
        let pivot_row: Vec<i64> = rows[rank].iter().map(|x| x.rem_euclid(P) * inv % P).collect();
        for r in 0..rows.len() {
            if r != rank {
                let f = rows[r][c].rem_euclid(P);
                if f != 0 {
                    for (x, p) in rows[r].iter_mut().zip(&pivot_row) {
                        *x = (*x - f * p).rem_euclid(P);
                    }
                }
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Cohomology of `O(sum a_i D_i)` in the weight-`m` part.
fn character_cohomology(fan: &SmoothFan, a: &[i64], m: &[i64]) -> Vec<u64> {
    let k = fan.cones.len();
    let masks: Vec<u64> = fan.cones.iter().map(|c| c.iter().fold(0u64, |s, &r| s | 1 << r)).collect();
    let ok: Vec<bool> = fan.rays.iter().zip(a).map(|(u, &ai)| dot(m, u) >= -ai).collect();
    // Cochains: subsets of maximal cones whose common face lies in the polytope side.
    let mut by_size: Vec<Vec<u32>> = vec![Vec::new(); k + 1];
    for s in 1u32..(1 << k) {
        let common = (0..k).filter(|i| s >> i & 1 == 1).fold(u64::MAX, |acc, i| acc & masks[i]);
        if (0..fan.rays.len()).filter(|r| common >> r & 1 == 1).all(|r| ok[r]) {
            by_size[s.count_ones() as usize].push(s);
        }
    }
    let rank_of = |p: usize| -> usize {
        if p + 2 > k || by_size[p + 1].is_empty() || by_size[p + 2].is_empty() {
            return 0;
        }
        let index: HashMap<u32, usize> = by_size[p + 2].iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let rows = by_size[p + 1]
            .iter()
            .map(|&s| {
                let mut row = vec![0i64; by_size[p + 2].len()];
                for j in (0..k).filter(|j| s >> j & 1 == 0) {
                    if let Some(&col) = index.get(&(s | 1 << j)) {
                        let pos = (s & ((1 << j) - 1)).count_ones();
                        row[col] = if pos % 2 == 0 { 1 } else { -1 };
                    }
                }
                row
            })
            .collect();
        rank_mod_p(rows)
    };
    let ranks: Vec<usize> = (0..k).map(rank_of).collect();
    let mut h = vec![0u64; fan.dim + 1];
    for p in 0..k {
        let below = if p == 0 { 0 } else { ranks[p - 1] };
        let v = by_size[p + 1].len() - ranks[p] - below;
        if v > 0 {
            assert!(p <= fan.dim, "Čech cohomology above the dimension");
            h[p] += v as u64;
        }
    }
    h
}

/// Solves a square system in floating point; `None` if singular.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[piv][c].abs() < 1e-9 {
            return None;
        }
        a.swap(c, piv);
        b.swap(c, piv);
        for r in 0..n {
            if r != c {
                let f = a[r][c] / a[c][c];
                for j in 0..n {
                    a[r][j] -= f * a[c][j];
                }
                b[r] -= f * b[c];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Box containing every vertex of the arrangement `m.u_i in {-a_i, -a_i - 1}`,
/// hence every bounded region of it.
fn character_box(fan: &SmoothFan, a: &[i64]) -> Vec<(i64, i64)> {
    let d = fan.dim;
    let mut lo = vec![i64::MAX; d];
    let mut hi = vec![i64::MIN; d];
    for s in subsets(fan.rays.len(), d) {
        for shift in 0u32..(1 << d) {
            let mat = s.iter().map(|&i| fan.rays[i].iter().map(|&x| x as f64).collect()).collect();
            let rhs = s.iter().enumerate().map(|(j, &i)| (-a[i] - (shift >> j & 1) as i64) as f64).collect();
            if let Some(x) = solve(mat, rhs) {
                for (t, v) in x.iter().enumerate() {
                    lo[t] = lo[t].min(v.floor() as i64 - 1);
                    hi[t] = hi[t].max(v.ceil() as i64 + 1);
                }
            }
        }
    }
    lo.into_iter().zip(hi).collect()
}

/// Sum over all characters of the Čech cohomology.
pub fn oracle_cohomology(fan: &SmoothFan, a: &[i64]) -> Vec<u64> {
    let bx = character_box(fan, a);
    let mut total = vec![0u64; fan.dim + 1];
    let mut m: Vec<i64> = bx.iter().map(|b| b.0).collect();
    loop {
        for (t, v) in character_cohomology(fan, a, &m).into_iter().enumerate() {
            total[t] += v;
        }
        let mut i = 0;
        loop {
            if i == m.len() {
                return total;
            }
            if m[i] < bx[i].1 {
                m[i] += 1;
                break;
            }
            m[i] = bx[i].0;
            i += 1;
        }
    }
}

fn padded(v: Option<Vec<u64>>, len: usize) -> Option<Vec<u64>> {
    v.map(|mut v| {
        v.resize(len, 0);
        v
    })
}

/// Compares both library backends with the oracle on every coefficient
/// vector in `[-bound, bound]^rays`. Returns the number of vectors checked.
pub fn compare_all(fan: &SmoothFan, bound: i64) -> Result<usize, String> {
    let simplicial = Fan::new(fan.dim, fan.rays.clone(), fan.cones.clone()).map_err(|e| e.to_string())?;
    let general = GeneralFan::new(fan.dim, fan.rays.clone(), fan.cones.clone()).map_err(|e| e.to_string())?;
    let lattice = ClassLattice::from_fan(&simplicial).map_err(|e| e.to_string())?;
    let n = fan.rays.len();
    let mut cache: HashMap<Vec<i64>, Vec<u64>> = HashMap::new();
    let mut a = vec![-bound; n];
    let mut count = 0;
    loop {
        let class = lattice.class_of(&a);
        let want = cache.entry(class).or_insert_with(|| oracle_cohomology(fan, &a)).clone();
        let got = padded(line_bundle_cohomology(&simplicial, &a).map_err(|e| e.to_string())?.values(), fan.dim + 1);
        if got.as_ref() != Some(&want) {
            return Err(format!("{}: a = {a:?}: simplicial {got:?}, Čech oracle {want:?}", fan.name));
        }
        let got = padded(general.line_bundle_cohomology(&a).map_err(|e| e.to_string())?.values(), fan.dim + 1);
        if got.as_ref() != Some(&want) {
            return Err(format!("{}: a = {a:?}: general backend {got:?}, Čech oracle {want:?}", fan.name));
        }
        count += 1;
        let mut i = 0;
        loop {
            if i == n {
                return Ok(count);
            }
            if a[i] < bound {
                a[i] += 1;
                break;
            }
            a[i] = -bound;
            i += 1;
        }
    }
}
