//! Weyl dimensions, the dotted Weyl action, and tensor product expansion.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

/// Dimension of the irreducible `GL(n)` representation with highest weight `lambda`.
///
/// A shorter `lambda` is padded with zeros, which only makes sense when its
/// entries are nonnegative.
pub fn weyl_dim(lambda: &[i64], n: usize) -> u64 {
    assert!(lambda.len() <= n, "weight longer than rank");
    if lambda.len() < n {
        assert!(lambda.iter().all(|&x| x >= 0), "padding needs a partition");
    }
    let mut l = lambda.to_vec();
    l.resize(n, 0);
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for i in 0..n {
        for j in (i + 1)..n {
            num *= l[i] - l[j] + (j - i) as i64;
            den *= (j - i) as i64;
        }
    }
    if num.is_zero() {
        return 0;
    }
    (num / den).to_u64().expect("dimension overflows u64")
}

/// Bott's algorithm for `GL(n)`: `None` if `w + rho` has a repeated entry,
/// else the number of inversions and the Weyl dimension of the sorted weight.
pub fn dotted_action(w: &[i64]) -> Option<(usize, Vec<i64>)> {
    let n = w.len();
    let shifted: Vec<i64> = w.iter().enumerate().map(|(i, &x)| x + (n - 1 - i) as i64).collect();
    let mut inversions = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            match shifted[i].cmp(&shifted[j]) {
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Less => inversions += 1,
                std::cmp::Ordering::Greater => {}
            }
        }
    }
    let mut sorted = shifted;
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let lambda = sorted.iter().enumerate().map(|(i, &x)| x - (n - 1 - i) as i64).collect();
    Some((inversions, lambda))
}

type WeightTable = HashMap<Vec<i64>, u64>;

fn weight_cache() -> &'static Mutex<HashMap<Vec<i64>, std::sync::Arc<WeightTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<i64>, std::sync::Arc<WeightTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Weight multiplicities of the `GL(n)` irreducible `lambda` (length `n`),
/// via Gelfand–Tsetlin branching to `GL(n-1)`.
pub fn weight_multiplicities(lambda: &[i64]) -> std::sync::Arc<WeightTable> {
    if let Some(t) = weight_cache().lock().unwrap().get(lambda) {
        return t.clone();
    }
    let n = lambda.len();
    let mut table = WeightTable::new();
    if n == 0 {
        table.insert(vec![], 1);
    } else if n == 1 {
        table.insert(vec![lambda[0]], 1);
    } else {
        // interlacing mu: lambda[i+1] <= mu[i] <= lambda[i]
        let total: i64 = lambda.iter().sum();
        let mut mu: Vec<i64> = (0..n - 1).map(|i| lambda[i + 1]).collect();
        loop {
            let sub = weight_multiplicities(&mu);
            let last = total - mu.iter().sum::<i64>();
            for (w, &c) in sub.iter() {
                let mut full = w.clone();
                full.push(last);
                *table.entry(full).or_insert(0) += c;
            }
            let mut i = 0;
            loop {
                if i == n - 1 {
                    break;
                }
                if mu[i] < lambda[i] {
                    mu[i] += 1;
                    break;
                }
                mu[i] = lambda[i + 1];
                i += 1;
            }
            if i == n - 1 {
                break;
            }
        }
    }
    let arc = std::sync::Arc::new(table);
    weight_cache().lock().unwrap().insert(lambda.to_vec(), arc.clone());
    arc
}

/// Expands `V(x) (x) V(y)` for `GL(rank)` by the Brauer–Klimyk rule.
pub fn lr_tensor(x: &[i64], y: &[i64], rank: usize) -> BTreeMap<Vec<i64>, u64> {
    assert_eq!(x.len(), rank);
    assert_eq!(y.len(), rank);
    // iterate over the weights of the smaller factor
    let (big, small) = if weyl_dim(x, rank) >= weyl_dim(y, rank) { (x, y) } else { (y, x) };
    let mut acc: HashMap<Vec<i64>, i64> = HashMap::new();
    for (w, &c) in weight_multiplicities(small).iter() {
        let s: Vec<i64> = big.iter().zip(w).map(|(a, b)| a + b).collect();
        if let Some((inv, lambda)) = dotted_action(&s) {
            let sign = if inv % 2 == 0 { 1 } else { -1 };
            *acc.entry(lambda).or_insert(0) += sign * c as i64;
        }
    }
    let mut out = BTreeMap::new();
    for (k, v) in acc {
        assert!(v >= 0, "negative Littlewood–Richardson coefficient");
        if v > 0 {
            out.insert(k, v as u64);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims() {
        assert_eq!(weyl_dim(&[1, 0], 2), 2);
        assert_eq!(weyl_dim(&[2, 0, 0], 3), 6);
        assert_eq!(weyl_dim(&[1, 1, 0, 0, 0], 5), 10);
        assert_eq!(weyl_dim(&[1, 0, 0, -1], 4), 15);
        assert_eq!(weyl_dim(&[1, 1], 5), 10);
    }

    #[test]
    fn weights_sum_to_dim() {
        for l in [vec![2, 1, 0], vec![3, 1, -2], vec![1, 1, 0, 0]] {
            let t = weight_multiplicities(&l);
            assert_eq!(t.values().sum::<u64>(), weyl_dim(&l, l.len()));
        }
    }

    #[test]
    fn tensor_examples() {
        let r = lr_tensor(&[1, 0], &[1, 0], 2);
        assert_eq!(r, BTreeMap::from([(vec![2, 0], 1), (vec![1, 1], 1)]));
        let r = lr_tensor(&[2, 1, 0], &[1, 0, 0], 3);
        assert_eq!(
            r,
            BTreeMap::from([(vec![3, 1, 0], 1), (vec![2, 2, 0], 1), (vec![2, 1, 1], 1)])
        );
        let r = lr_tensor(&[1, 1], &[1, 1], 2);
        assert_eq!(r, BTreeMap::from([(vec![2, 2], 1)]));
        let r = lr_tensor(&[0, -1], &[1, 0], 2);
        assert_eq!(r, BTreeMap::from([(vec![1, -1], 1), (vec![0, 0], 1)]));
    }
}
