//! Littlewood–Richardson coefficients by enumerating LR tableaux, and
//! Weyl dimensions by the hook-content formula.

pub fn partitions(n: usize) -> Vec<Vec<i64>> {
    fn go(n: i64, max: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=max.min(n)).rev() {
            prefix.push(part);
            go(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n as i64, n as i64, &mut Vec::new(), &mut out);
    out
}

fn at(p: &[i64], i: usize) -> i64 {
    p.get(i).copied().unwrap_or(0)
}

fn contains(nu: &[i64], lambda: &[i64]) -> bool {
    (0..lambda.len()).all(|i| at(nu, i) >= lambda[i])
}

/// Number of LR tableaux of shape `nu / lambda` and content `mu`.
pub fn lr_coefficient(lambda: &[i64], mu: &[i64], nu: &[i64]) -> u64 {
    if !contains(nu, lambda) || nu.iter().sum::<i64>() != lambda.iter().sum::<i64>() + mu.iter().sum::<i64>() {
        return 0;
    }
    // Reading order: rows top to bottom, each right to left.
    let mut cells = Vec::new();
    for r in 0..nu.len() {
        for c in (at(lambda, r)..nu[r]).rev() {
            cells.push((r, c));
        }
    }
    let mut fill: std::collections::HashMap<(usize, i64), usize> = Default::default();
    let mut count = vec![0i64; mu.len()];
    fn go(
        k: usize,
        cells: &[(usize, i64)],
        mu: &[i64],
        fill: &mut std::collections::HashMap<(usize, i64), usize>,
        count: &mut Vec<i64>,
    ) -> u64 {
        if k == cells.len() {
            return (count.as_slice() == mu) as u64;
        }
        let (r, c) = cells[k];
        let mut total = 0;
        for v in 0..mu.len() {
            if count[v] == mu[v] || (v > 0 && count[v] + 1 > count[v - 1]) {
                continue;
            }
            if let Some(&right) = fill.get(&(r, c + 1)) {
                if v > right {
                    continue;
                }
            }
            if r > 0 {
                if let Some(&above) = fill.get(&(r - 1, c)) {
                    if v <= above {
                        continue;
                    }
                }
            }
            fill.insert((r, c), v);
            count[v] += 1;
            total += go(k + 1, cells, mu, fill, count);
            count[v] -= 1;
            fill.remove(&(r, c));
        }
        total
    }
    go(0, &cells, mu, &mut fill, &mut count)
}

/// `dim V_lambda` for `GL(n)`, for a partition `lambda`.
pub fn hook_content(lambda: &[i64], n: usize) -> u128 {
    if lambda.len() > n {
        return 0;
    }
    let conj = |j: i64| lambda.iter().filter(|&&x| x > j).count() as i64;
    let (mut num, mut den) = (1u128, 1u128);
    for (i, &row) in lambda.iter().enumerate() {
        for j in 0..row {
            let content = n as i64 + j - i as i64;
            let hook = (row - j - 1) + (conj(j) - i as i64 - 1) + 1;
            num *= content as u128;
            den *= hook as u128;
        }
    }
    num / den
}

pub fn pad(p: &[i64], n: usize) -> Vec<i64> {
    let mut v = p.to_vec();
    v.resize(n, 0);
    v
}
