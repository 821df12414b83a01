use crate::coh::{CohVector, Entry};
use crate::error::{HkrError, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// Upper bound marker for variables without a finite bound.
const INF: i64 = i64::MAX / 8;
/// Values at or above this are reported as unbounded.
const REPORT_CAP: i64 = 1 << 20;
/// Lower bounds past this prove infeasibility: they only arise from bounds
/// diverging around a contradictory cycle, never from dimensions in scope.
const VALUE_CAP: i64 = 1 << 40;
/// Propagation rounds before falling back to search.
const MAX_ROUNDS: usize = 64;

/// A reference to a dimension: a fixed value or a solver variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Term {
    Known(u64),
    Var(usize),
}

#[derive(Debug, Clone)]
struct LinEq {
    coeffs: Vec<(i64, usize)>,
    rhs: i64,
}

#[derive(Debug, Clone, Default)]
pub struct ChaseProblem {
    names: Vec<String>,
    lo: Vec<i64>,
    hi: Vec<i64>,
    internal: Vec<bool>,
    eqs: Vec<LinEq>,
}

/// Tight bounds for every variable of a solved problem.
#[derive(Debug, Clone)]
pub struct Solution {
    pub lo: Vec<u64>,
    pub hi: Vec<Option<u64>>,
    pub names: Vec<String>,
}

impl Solution {
    pub fn entry(&self, t: Term) -> Entry {
        match t {
            Term::Known(v) => Entry::Known(v),
            Term::Var(i) if self.hi[i] == Some(self.lo[i]) => Entry::Known(self.lo[i]),
            Term::Var(i) => Entry::Unknown {
                var: i,
                lo: self.lo[i],
                hi: self.hi[i],
            },
        }
    }

    pub fn vector(&self, vars: &[usize]) -> CohVector {
        CohVector {
            entries: vars.iter().map(|&v| self.entry(Term::Var(v))).collect(),
        }
    }

    pub fn vector_of_terms(&self, terms: &[Term]) -> CohVector {
        CohVector {
            entries: terms.iter().map(|&t| self.entry(t)).collect(),
        }
    }

    pub fn is_determined(&self, v: usize) -> bool {
        self.hi[v] == Some(self.lo[v])
    }
}

impl ChaseProblem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    /// A nonnegative unbounded variable whose tight bounds are reported.
    pub fn new_var(&mut self, name: impl Into<String>) -> usize {
        self.push_var(name.into(), false)
    }

    fn push_var(&mut self, name: String, internal: bool) -> usize {
        self.names.push(name);
        self.lo.push(0);
        self.hi.push(INF);
        self.internal.push(internal);
        self.names.len() - 1
    }

    pub fn set_bounds(&mut self, v: usize, lo: u64, hi: Option<u64>) {
        self.lo[v] = self.lo[v].max(lo as i64);
        if let Some(h) = hi {
            self.hi[v] = self.hi[v].min(h as i64);
        }
    }

    /// Adds `sum c_i t_i = rhs`.
    pub fn pin_linear(&mut self, terms: &[(i64, Term)], rhs: i64) {
        let mut rhs = rhs;
        let mut coeffs: Vec<(i64, usize)> = Vec::new();
        for &(c, t) in terms {
            match t {
                Term::Known(v) => rhs -= c * v as i64,
                Term::Var(i) => match coeffs.iter_mut().find(|(_, j)| *j == i) {
                    Some(e) => e.0 += c,
                    None => coeffs.push((c, i)),
                },
            }
        }
        coeffs.retain(|&(c, _)| c != 0);
        self.eqs.push(LinEq { coeffs, rhs });
    }

    /// Registers exactness of `0 -> t_0 -> ... -> t_m -> 0` and returns the
    /// rank variables, `ranks[i]` being the rank of `t_i -> t_{i+1}`.
    pub fn add_exact_sequence(&mut self, terms: &[Term]) -> Vec<usize> {
        if terms.is_empty() {
            return vec![];
        }
        let m = terms.len() - 1;
        let ranks: Vec<usize> = (0..m).map(|i| self.push_var(format!("rank{i}"), true)).collect();
        for (i, &t) in terms.iter().enumerate() {
            let mut lhs = vec![(1, t)];
            if i > 0 {
                lhs.push((-1, Term::Var(ranks[i - 1])));
            }
            if i < m {
                lhs.push((-1, Term::Var(ranks[i])));
            }
            self.pin_linear(&lhs, 0);
        }
        ranks
    }

    fn describe(&self) -> String {
        format!("{} variables, {} equations", self.names.len(), self.eqs.len())
    }

    /// Tight bounds for all variables, or `Infeasible`.
    pub fn solve(&self) -> Result<Solution> {
        let strengthened = self.with_implied_equations();
        strengthened.solve_direct()
    }

    /// Adds the rows of two reduced echelon forms of the system, one pivoting
    /// on reported variables first and one on internal ranks first, so that
    /// propagation sees relations that only follow from several equations.
    fn with_implied_equations(&self) -> ChaseProblem {
        let n = self.names.len();
        let reported: Vec<usize> = (0..n).filter(|&v| !self.internal[v]).collect();
        let internal: Vec<usize> = (0..n).filter(|&v| self.internal[v]).collect();
        let mut out = self.clone();
        for order in [[&reported[..], &internal[..]].concat(), [&internal[..], &reported[..]].concat()] {
            for eq in reduced_rows(&self.eqs, n, &order) {
                if !out.eqs.iter().any(|e| e.rhs == eq.rhs && e.coeffs == eq.coeffs) {
                    out.eqs.push(eq);
                }
            }
        }
        out
    }

    fn solve_direct(&self) -> Result<Solution> {
        let mut dom: Vec<(i64, i64)> = self.lo.iter().copied().zip(self.hi.iter().copied()).collect();
        if !self.propagate(&mut dom) {
            return Err(HkrError::Infeasible(self.describe()));
        }
        let Some(first) = self.find(&dom) else {
            return Err(HkrError::Infeasible(self.describe()));
        };
        let n = self.names.len();
        let mut wmin = first.clone();
        let mut wmax = first.clone();
        let mut lo = vec![0u64; n];
        let mut hi = vec![None; n];
        for v in 0..n {
            if self.internal[v] {
                lo[v] = dom[v].0 as u64;
                hi[v] = (dom[v].1 < INF).then_some(dom[v].1 as u64);
                continue;
            }
            // minimum
            let (mut a, mut b) = (dom[v].0, wmin[v]);
            while a < b {
                let mid = a + (b - a) / 2;
                let mut d = dom.clone();
                d[v].1 = mid;
                match self.find(&d) {
                    Some(s) => {
                        absorb(&mut wmin, &mut wmax, &s);
                        b = s[v];
                    }
                    None => a = mid + 1,
                }
            }
            lo[v] = b as u64;
            // maximum
            let top = if dom[v].1 >= INF {
                let mut d = dom.clone();
                d[v].0 = d[v].0.max(REPORT_CAP);
                if let Some(s) = self.find(&d) {
                    absorb(&mut wmin, &mut wmax, &s);
                    hi[v] = None;
                    continue;
                }
                REPORT_CAP - 1
            } else {
                dom[v].1
            };
            let (mut a, mut b) = (wmax[v], top);
            while a < b {
                let mid = a + (b - a + 1) / 2;
                let mut d = dom.clone();
                d[v].0 = mid;
                match self.find(&d) {
                    Some(s) => {
                        absorb(&mut wmin, &mut wmax, &s);
                        a = s[v];
                    }
                    None => b = mid - 1,
                }
            }
            hi[v] = Some(a as u64);
        }
        Ok(Solution {
            lo,
            hi,
            names: self.names.clone(),
        })
    }

    /// Interval propagation; `false` on a proven contradiction.
    fn propagate(&self, dom: &mut [(i64, i64)]) -> bool {
        for _ in 0..MAX_ROUNDS {
            let mut changed = false;
            for eq in &self.eqs {
                let mut smin: i128 = 0;
                let mut smax: i128 = 0;
                let mut max_inf = 0usize;
                let mut min_inf = 0usize;
                for &(c, v) in &eq.coeffs {
                    let (l, h) = dom[v];
                    let (tl, th, tl_inf, th_inf) = if c > 0 {
                        (c as i128 * l as i128, c as i128 * h as i128, false, h >= INF)
                    } else {
                        (c as i128 * h as i128, c as i128 * l as i128, h >= INF, false)
                    };
                    if tl_inf {
                        min_inf += 1;
                    } else {
                        smin += tl;
                    }
                    if th_inf {
                        max_inf += 1;
                    } else {
                        smax += th;
                    }
                }
                let rhs = eq.rhs as i128;
                if min_inf == 0 && smin > rhs {
                    return false;
                }
                if max_inf == 0 && smax < rhs {
                    return false;
                }
                for &(c, v) in &eq.coeffs {
                    let (l, h) = dom[v];
                    let c128 = c as i128;
                    let (tl, th, tl_inf, th_inf) = if c > 0 {
                        (c128 * l as i128, c128 * h as i128, false, h >= INF)
                    } else {
                        (c128 * h as i128, c128 * l as i128, h >= INF, false)
                    };
                    // bounds for the rest of the sum
                    let rest_min = if min_inf - usize::from(tl_inf) > 0 { None } else { Some(smin - if tl_inf { 0 } else { tl }) };
                    let rest_max = if max_inf - usize::from(th_inf) > 0 { None } else { Some(smax - if th_inf { 0 } else { th }) };
                    // c * x in [rhs - rest_max, rhs - rest_min]
                    let lo_cx = rest_max.map(|r| rhs - r);
                    let hi_cx = rest_min.map(|r| rhs - r);
                    let (new_lo, new_hi) = if c > 0 {
                        (lo_cx.map(|x| div_ceil(x, c128)), hi_cx.map(|x| div_floor(x, c128)))
                    } else {
                        (hi_cx.map(|x| div_ceil(x, c128)), lo_cx.map(|x| div_floor(x, c128)))
                    };
                    let mut nl = l;
                    let mut nh = h;
                    if let Some(x) = new_lo {
                        if x > nl as i128 {
                            nl = x.min(INF as i128) as i64;
                        }
                    }
                    if let Some(x) = new_hi {
                        if x < nh as i128 {
                            nh = x.max(-1) as i64;
                        }
                    }
                    if nl > nh || nl > VALUE_CAP {
                        return false;
                    }
                    if (nl, nh) != (l, h) {
                        dom[v] = (nl, nh);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        true
    }

    fn satisfied(&self, x: &[i64]) -> bool {
        self.eqs
            .iter()
            .all(|e| e.coeffs.iter().map(|&(c, v)| c as i128 * x[v] as i128).sum::<i128>() == e.rhs as i128)
    }

    /// Some integer point of the domain satisfying all equations.
    fn find(&self, dom: &[(i64, i64)]) -> Option<Vec<i64>> {
        let mut d = dom.to_vec();
        if !self.propagate(&mut d) {
            return None;
        }
        let mut best: Option<(usize, i64)> = None;
        let mut unbounded: Option<usize> = None;
        for (v, &(l, h)) in d.iter().enumerate() {
            if l == h {
                continue;
            }
            if h >= INF {
                unbounded.get_or_insert(v);
                continue;
            }
            let w = h - l;
            if best.is_none_or(|(_, bw)| w < bw) {
                best = Some((v, w));
            }
        }
        if let Some((v, _)) = best {
            let (l, h) = d[v];
            let mid = l + (h - l) / 2;
            let mut left = d.clone();
            left[v].1 = mid;
            if let Some(s) = self.find(&left) {
                return Some(s);
            }
            let mut right = d;
            right[v].0 = mid + 1;
            return self.find(&right);
        }
        if let Some(v) = unbounded {
            // Geometric windows keep the depth logarithmic.
            let l = d[v].0;
            let mut width: i64 = 16;
            let mut start = l;
            while start < INF {
                let end = start.saturating_add(width).min(INF - 1);
                let mut win = d.clone();
                win[v] = (start, end);
                if let Some(s) = self.find(&win) {
                    return Some(s);
                }
                if end >= REPORT_CAP * 4 {
                    return None;
                }
                start = end + 1;
                width = width.saturating_mul(2);
            }
            return None;
        }
        let x: Vec<i64> = d.iter().map(|&(l, _)| l).collect();
        self.satisfied(&x).then_some(x)
    }
}

/// Nonzero rows of the reduced echelon form of `eqs`, pivoting on columns
/// in `order`. Rows whose entries overflow `i64` are dropped.
fn reduced_rows(eqs: &[LinEq], n: usize, order: &[usize]) -> Vec<LinEq> {
    let mut rows: Vec<Vec<BigInt>> = eqs
        .iter()
        .map(|e| {
            let mut r = vec![BigInt::zero(); n + 1];
            for &(c, v) in &e.coeffs {
                r[v] += c;
            }
            r[n] = BigInt::from(e.rhs);
            r
        })
        .collect();
    let mut top = 0;
    for &col in order {
        let Some(piv) = (top..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(top, piv);
        let p = rows[top][col].clone();
        for r in 0..rows.len() {
            if r == top || rows[r][col].is_zero() {
                continue;
            }
            let f = rows[r][col].clone();
            let (pr, rest) = if r < top {
                let (a, b) = rows.split_at_mut(top);
                (&b[0], &mut a[r])
            } else {
                let (a, b) = rows.split_at_mut(r);
                (&a[top], &mut b[0])
            };
            for (x, y) in rest.iter_mut().zip(pr) {
                *x = &*x * &p - &f * y;
            }
            normalize(rest);
        }
        top += 1;
    }
    rows.truncate(top);
    rows.into_iter()
        .filter_map(|mut r| {
            normalize(&mut r);
            let rhs = r[n].to_i64()?;
            let coeffs = (0..n)
                .filter(|&v| !r[v].is_zero())
                .map(|v| r[v].to_i64().map(|c| (c, v)))
                .collect::<Option<Vec<_>>>()?;
            Some(LinEq { coeffs, rhs })
        })
        .collect()
}

fn normalize(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && g != BigInt::from(1) {
        row.iter_mut().for_each(|x| *x = &*x / &g);
    }
    if let Some(first) = row.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            row.iter_mut().for_each(|x| *x = -&*x);
        }
    }
}

fn absorb(wmin: &mut [i64], wmax: &mut [i64], s: &[i64]) {
    for i in 0..s.len() {
        wmin[i] = wmin[i].min(s[i]);
        wmax[i] = wmax[i].max(s[i]);
    }
}

fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -div_floor(-a, b)
}
