//! Exact integer linear algebra: ranks over Q, determinants, small rational
//! solves, and unimodular column reduction for lattice kernels.

use num_bigint::BigInt;
use num_traits::Zero;

/// Rank over Q of an integer matrix given by rows.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    let m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    match bareiss_rank_i128(m) {
        Some(r) => r,
        None => bareiss_rank_big(rows),
    }
}

fn bareiss_rank_i128(mut m: Vec<Vec<i128>>) -> Option<usize> {
    let nrows = m.len();
    let ncols = m[0].len();
    let mut prev: i128 = 1;
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        let piv = m[r][c];
        for i in (r + 1)..nrows {
            let f = m[i][c];
            for j in (c + 1)..ncols {
                let a = piv.checked_mul(m[i][j])?;
                let b = f.checked_mul(m[r][j])?;
                m[i][j] = a.checked_sub(b)? / prev;
            }
            m[i][c] = 0;
        }
        prev = piv;
        r += 1;
    }
    Some(r)
}

fn bareiss_rank_big(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let nrows = m.len();
    let ncols = m[0].len();
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let piv = m[r][c].clone();
        for i in (r + 1)..nrows {
            let f = m[i][c].clone();
            for j in (c + 1)..ncols {
                let v = (&piv * &m[i][j] - &f * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = piv;
        r += 1;
    }
    r
}

/// Rank over Q of a sparse integer matrix given as `(index, value)` vectors,
/// each sorted by index. Incremental echelon form with gcd-normalized rows;
/// falls back to the dense path if an entry would overflow.
pub fn sparse_rank(vectors: &[Vec<(usize, i64)>], width: usize) -> usize {
    let mut pivots: std::collections::HashMap<usize, Vec<(usize, i128)>> = std::collections::HashMap::new();
    for v in vectors {
        let mut row: Vec<(usize, i128)> = v.iter().filter(|e| e.1 != 0).map(|&(i, x)| (i, x as i128)).collect();
        while let Some(&(lead, a)) = row.first() {
            let Some(p) = pivots.get(&lead) else {
                pivots.insert(lead, row);
                break;
            };
            match eliminate(&row, p, a) {
                Some(r) => row = r,
                None => {
                    let dense: Vec<Vec<i64>> = vectors
                        .iter()
                        .map(|v| {
                            let mut d = vec![0i64; width];
                            for &(i, x) in v {
                                d[i] += x;
                            }
                            d
                        })
                        .collect();
                    return rank(&dense);
                }
            }
        }
    }
    pivots.len()
}

/// `p0 * row - a * pivot`, divided by its content; `None` on overflow.
fn eliminate(row: &[(usize, i128)], pivot: &[(usize, i128)], a: i128) -> Option<Vec<(usize, i128)>> {
    let p0 = pivot[0].1;
    let g = gcd(p0, a);
    let (fr, fp) = (p0 / g, a / g);
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let (idx, val) = match (row.get(i), pivot.get(j)) {
            (Some(&(ri, rv)), Some(&(pj, _))) if ri < pj => {
                i += 1;
                (ri, rv.checked_mul(fr)?)
            }
            (Some(&(ri, rv)), Some(&(pj, pv))) if ri == pj => {
                i += 1;
                j += 1;
                (ri, rv.checked_mul(fr)?.checked_sub(pv.checked_mul(fp)?)?)
            }
            (_, Some(&(pj, pv))) => {
                j += 1;
                (pj, pv.checked_mul(fp)?.checked_neg()?)
            }
            (Some(&(ri, rv)), None) => {
                i += 1;
                (ri, rv.checked_mul(fr)?)
            }
            (None, None) => unreachable!(),
        };
        if val != 0 {
            out.push((idx, val));
        }
    }
    let content = out.iter().fold(0i128, |c, e| gcd(c, e.1));
    if content > 1 {
        for e in &mut out {
            e.1 /= content;
        }
    }
    Some(out)
}

/// Determinant of a small square integer matrix.
pub fn det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = ((k + 1)..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Solves `A x = b` for square nonsingular `A` by Cramer's rule.
/// Returns numerators and a positive common denominator.
pub fn solve_rational(a: &[Vec<i64>], b: &[i64]) -> Option<(Vec<i128>, i128)> {
    let d = det(a);
    if d == 0 {
        return None;
    }
    let n = a.len();
    let mut x = Vec::with_capacity(n);
    for j in 0..n {
        let mut aj: Vec<Vec<i64>> = a.to_vec();
        for i in 0..n {
            aj[i][j] = b[i];
        }
        x.push(det(&aj));
    }
    if d < 0 {
        Some((x.into_iter().map(|v| -v).collect(), -d))
    } else {
        Some((x, d))
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Greatest common divisor of all maximal minors of an `n x d` matrix with `n >= d`.
pub fn maximal_minor_gcd(rows: &[Vec<i64>]) -> i128 {
    let n = rows.len();
    let d = rows.first().map_or(0, |r| r.len());
    let mut g = 0i128;
    for combo in combinations(n, d) {
        let sub: Vec<Vec<i64>> = combo.iter().map(|&i| rows[i].clone()).collect();
        g = gcd(g, det(&sub));
        if g == 1 {
            break;
        }
    }
    g
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in (i + 1)..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Column-reduces the `r x n` matrix `a` by unimodular column operations.
/// Returns `(h, v, pivots)` with `a * v = h`, where `h` is in column echelon
/// form and `pivots[i]` is the row of the pivot in column `i`.
pub fn column_echelon(a: &[Vec<i64>], ncols: usize) -> (Vec<Vec<i128>>, Vec<Vec<i128>>, Vec<usize>) {
    let r = a.len();
    let mut h: Vec<Vec<i128>> = a
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    let mut v: Vec<Vec<i128>> = (0..ncols)
        .map(|i| (0..ncols).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut col = 0;
    for row in 0..r {
        if col == ncols {
            break;
        }
        // Euclid across columns col.. in this row.
        loop {
            let nz: Vec<usize> = (col..ncols).filter(|&j| h[row][j] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&j| h[row][j].abs()).unwrap();
            swap_cols(&mut h, &mut v, col, p);
            let mut done = true;
            for j in (col + 1)..ncols {
                if h[row][j] != 0 {
                    let q = h[row][j].div_euclid(h[row][col]);
                    add_col(&mut h, &mut v, j, col, -q);
                    if h[row][j] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[row][col] != 0 {
            if h[row][col] < 0 {
                for hr in h.iter_mut() {
                    hr[col] = -hr[col];
                }
                for vr in v.iter_mut() {
                    vr[col] = -vr[col];
                }
            }
            pivots.push(row);
            col += 1;
        }
    }
    (h, v, pivots)
}

fn swap_cols(h: &mut [Vec<i128>], v: &mut [Vec<i128>], a: usize, b: usize) {
    if a == b {
        return;
    }
    for r in h.iter_mut() {
        r.swap(a, b);
    }
    for r in v.iter_mut() {
        r.swap(a, b);
    }
}

fn add_col(h: &mut [Vec<i128>], v: &mut [Vec<i128>], dst: usize, src: usize, f: i128) {
    for r in h.iter_mut() {
        r[dst] += f * r[src];
    }
    for r in v.iter_mut() {
        r[dst] += f * r[src];
    }
}

/// A Z-basis of the integer vectors `x` with `a x = 0`, where `a` has `ncols` columns.
pub fn integer_kernel(a: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let (_, v, pivots) = column_echelon(a, ncols);
    let k = pivots.len();
    (k..ncols)
        .map(|c| v.iter().map(|row| row[c] as i64).collect())
        .collect()
}

/// Some integer solution of `a x = c`, if one exists.
pub fn solve_integer(a: &[Vec<i64>], ncols: usize, c: &[i64]) -> Option<Vec<i64>> {
    let (h, v, pivots) = column_echelon(a, ncols);
    let mut y = vec![0i128; ncols];
    let mut resid: Vec<i128> = c.iter().map(|&x| x as i128).collect();
    for (col, &prow) in pivots.iter().enumerate() {
        // Rows strictly between pivots must already be satisfied.
        let start = if col == 0 { 0 } else { pivots[col - 1] + 1 };
        for row in start..prow {
            if resid[row] != 0 {
                return None;
            }
        }
        let p = h[prow][col];
        if resid[prow] % p != 0 {
            return None;
        }
        let val = resid[prow] / p;
        y[col] = val;
        for (row, rv) in resid.iter_mut().enumerate() {
            *rv -= h[row][col] * val;
        }
    }
    if resid.iter().any(|&x| x != 0) {
        return None;
    }
    Some(
        (0..ncols)
            .map(|i| (0..ncols).map(|j| v[i][j] * y[j]).sum::<i128>() as i64)
            .collect(),
    )
}
