//! Homogeneous bundles on products of Grassmannians.
//!
//! A weight `(a|b)` on `Gr(k,n)` stands for `Sigma^a U^* (x) Sigma^b Q^*`, with
//! `O(1) = det U^*`. Bott's algorithm runs on the concatenation `(a|b)`.

mod grammar;
mod weyl;

pub use grammar::{parse_bundle, parse_factors};
pub use weyl::{dotted_action, lr_tensor, weight_multiplicities, weyl_dim};

use crate::coh::CohVector;
use crate::error::{HkrError, Result};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GrassFactor {
    pub k: usize,
    pub n: usize,
}

impl GrassFactor {
    pub fn new(k: usize, n: usize) -> Result<GrassFactor> {
        if k == 0 || k >= n {
            return Err(HkrError::Grammar { pos: 0, reason: format!("Gr({k},{n}) needs 1 <= k < n") });
        }
        Ok(GrassFactor { k, n })
    }

    pub fn projective(dim: usize) -> GrassFactor {
        GrassFactor { k: 1, n: dim + 1 }
    }

    pub fn dim(&self) -> usize {
        self.k * (self.n - self.k)
    }

    /// Index of the canonical bundle: `omega = O(-n)`.
    pub fn index(&self) -> i64 {
        self.n as i64
    }
}

impl fmt::Display for GrassFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "P({})", self.n - 1)
        } else {
            write!(f, "Gr({},{})", self.k, self.n)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactorWeight {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
}

fn decreasing(v: &[i64]) -> bool {
    v.windows(2).all(|w| w[0] >= w[1])
}

impl FactorWeight {
    pub fn new(factor: GrassFactor, a: Vec<i64>, b: Vec<i64>) -> Result<FactorWeight> {
        if a.len() != factor.k || b.len() != factor.n - factor.k || !decreasing(&a) || !decreasing(&b) {
            return Err(HkrError::Grammar { pos: 0, reason: format!("bad weight ({a:?}|{b:?}) on {factor}") });
        }
        Ok(FactorWeight { a, b }.normalized())
    }

    pub fn line(factor: GrassFactor, t: i64) -> FactorWeight {
        FactorWeight { a: vec![t; factor.k], b: vec![0; factor.n - factor.k] }
    }

    /// `det U^* (x) det Q^*` is trivial, so shift until `b` ends in zero.
    fn normalized(mut self) -> FactorWeight {
        let c = *self.b.last().unwrap();
        if c != 0 {
            self.a.iter_mut().for_each(|x| *x -= c);
            self.b.iter_mut().for_each(|x| *x -= c);
        }
        self
    }

    pub fn rank(&self) -> u64 {
        weyl_dim(&self.a, self.a.len()) * weyl_dim(&self.b, self.b.len())
    }

    pub fn dual(&self) -> FactorWeight {
        FactorWeight {
            a: self.a.iter().rev().map(|x| -x).collect(),
            b: self.b.iter().rev().map(|x| -x).collect(),
        }
        .normalized()
    }

    fn twist(&self, t: i64) -> FactorWeight {
        FactorWeight { a: self.a.iter().map(|x| x + t).collect(), b: self.b.clone() }
    }

    /// `O(t)` if this is a line bundle.
    pub fn as_line(&self) -> Option<i64> {
        (self.b.iter().all(|&x| x == 0) && self.a.iter().all(|&x| x == self.a[0])).then(|| self.a[0])
    }

    /// First Chern class degree `c1 = t` with `det = O(t)`.
    pub fn det_degree(&self) -> i64 {
        let (k, q) = (self.a.len() as i64, self.b.len() as i64);
        let (da, db) = (weyl_dim(&self.a, self.a.len()) as i64, weyl_dim(&self.b, self.b.len()) as i64);
        let sa: i64 = self.a.iter().sum();
        let sb: i64 = self.b.iter().sum();
        db * (sa * da / k) - da * (sb * db / q)
    }

    fn tensor(&self, other: &FactorWeight) -> BTreeMap<FactorWeight, u64> {
        let aa = lr_tensor(&self.a, &other.a, self.a.len());
        let bb = lr_tensor(&self.b, &other.b, self.b.len());
        let mut out = BTreeMap::new();
        for (a, ca) in &aa {
            for (b, cb) in &bb {
                let w = FactorWeight { a: a.clone(), b: b.clone() }.normalized();
                *out.entry(w).or_insert(0) += ca * cb;
            }
        }
        out
    }
}

/// Bott on one factor: `None` when all cohomology vanishes, else `(degree, dim)`.
pub fn bott(factor: GrassFactor, w: &FactorWeight) -> Option<(usize, u64)> {
    let mut full = w.a.clone();
    full.extend_from_slice(&w.b);
    debug_assert_eq!(full.len(), factor.n);
    dotted_action(&full).map(|(deg, lambda)| (deg, weyl_dim(&lambda, factor.n)))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IrredSummand {
    pub parts: Vec<FactorWeight>,
}

impl IrredSummand {
    pub fn trivial(factors: &[GrassFactor]) -> IrredSummand {
        Self::line(factors, &vec![0; factors.len()])
    }

    pub fn line(factors: &[GrassFactor], degrees: &[i64]) -> IrredSummand {
        IrredSummand { parts: factors.iter().zip(degrees).map(|(&f, &t)| FactorWeight::line(f, t)).collect() }
    }

    pub fn rank(&self) -> u64 {
        self.parts.iter().map(|p| p.rank()).product()
    }

    pub fn dual(&self) -> IrredSummand {
        IrredSummand { parts: self.parts.iter().map(|p| p.dual()).collect() }
    }

    /// Per-factor degrees of the determinant.
    pub fn det_degrees(&self) -> Vec<i64> {
        let ranks: Vec<i64> = self.parts.iter().map(|p| p.rank() as i64).collect();
        let total: i64 = ranks.iter().product();
        self.parts.iter().zip(&ranks).map(|(p, &r)| p.det_degree() * (total / r)).collect()
    }

    fn tensor(&self, other: &IrredSummand) -> BTreeMap<IrredSummand, u64> {
        let mut acc: BTreeMap<IrredSummand, u64> = BTreeMap::from([(IrredSummand { parts: vec![] }, 1)]);
        for (x, y) in self.parts.iter().zip(&other.parts) {
            let local = x.tensor(y);
            let mut next = BTreeMap::new();
            for (s, c) in &acc {
                for (w, cw) in &local {
                    let mut parts = s.parts.clone();
                    parts.push(w.clone());
                    *next.entry(IrredSummand { parts }).or_insert(0) += c * cw;
                }
            }
            acc = next;
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BundleExpr {
    pub summands: BTreeMap<IrredSummand, u64>,
}

impl BundleExpr {
    pub fn zero() -> BundleExpr {
        BundleExpr::default()
    }

    pub fn from_summand(s: IrredSummand, mult: u64) -> BundleExpr {
        let mut e = BundleExpr::zero();
        e.add_summand(s, mult);
        e
    }

    pub fn trivial(factors: &[GrassFactor]) -> BundleExpr {
        Self::from_summand(IrredSummand::trivial(factors), 1)
    }

    pub fn line(factors: &[GrassFactor], degrees: &[i64]) -> BundleExpr {
        Self::from_summand(IrredSummand::line(factors, degrees), 1)
    }

    pub fn add_summand(&mut self, s: IrredSummand, mult: u64) {
        if mult > 0 {
            *self.summands.entry(s).or_insert(0) += mult;
        }
    }

    pub fn sum(&self, other: &BundleExpr) -> BundleExpr {
        let mut out = self.clone();
        for (s, &m) in &other.summands {
            out.add_summand(s.clone(), m);
        }
        out
    }

    pub fn scaled(&self, m: u64) -> BundleExpr {
        BundleExpr { summands: self.summands.iter().filter(|_| m > 0).map(|(s, &c)| (s.clone(), c * m)).collect() }
    }

    pub fn rank(&self) -> u64 {
        self.summands.iter().map(|(s, m)| s.rank() * m).sum()
    }

    pub fn dual(&self) -> BundleExpr {
        BundleExpr { summands: self.summands.iter().map(|(s, &m)| (s.dual(), m)).collect() }
    }

    pub fn tensor(&self, other: &BundleExpr) -> BundleExpr {
        let mut out = BundleExpr::zero();
        for (x, mx) in &self.summands {
            for (y, my) in &other.summands {
                for (z, mz) in x.tensor(y) {
                    out.add_summand(z, mx * my * mz);
                }
            }
        }
        out
    }

    pub fn twist(&self, degrees: &[i64]) -> BundleExpr {
        BundleExpr {
            summands: self
                .summands
                .iter()
                .map(|(s, &m)| {
                    let parts = s.parts.iter().zip(degrees).map(|(p, &t)| p.twist(t)).collect();
                    (IrredSummand { parts }, m)
                })
                .collect(),
        }
    }

    pub fn det_degrees(&self, nfactors: usize) -> Vec<i64> {
        let mut out = vec![0; nfactors];
        for (s, &m) in &self.summands {
            for (o, d) in out.iter_mut().zip(s.det_degrees()) {
                *o += d * m as i64;
            }
        }
        out
    }

    pub fn det_line(&self, factors: &[GrassFactor]) -> IrredSummand {
        IrredSummand::line(factors, &self.det_degrees(factors.len()))
    }
}

impl fmt::Display for BundleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (s, m) in &self.summands {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let parts: Vec<String> = s.parts.iter().map(|p| format!("({:?}|{:?})", p.a, p.b)).collect();
            write!(f, "{}", parts.join("x"))?;
            if *m > 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}

/// Which side of a factor carries a fundamental representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    A,
    B,
}

/// A standard representation (or its dual) of `GL` on one side of one factor.
#[derive(Debug, Clone, Copy)]
struct Fundamental {
    factor: usize,
    side: Side,
    dual: bool,
    rank: usize,
}

impl Fundamental {
    /// Weight of `Sigma^lambda` of this representation, or `None` if it vanishes.
    fn schur(&self, lambda: &[usize]) -> Option<Vec<i64>> {
        if lambda.len() > self.rank {
            return None;
        }
        let mut w: Vec<i64> = lambda.iter().map(|&x| x as i64).collect();
        w.resize(self.rank, 0);
        if self.dual {
            w = w.iter().rev().map(|x| -x).collect();
        }
        Some(w)
    }
}

/// Splits an irreducible into `(fundamental pieces, line degrees)`, or `None`
/// if some side is neither a line nor a twisted fundamental representation.
fn decompose(s: &IrredSummand) -> Option<(Vec<Fundamental>, Vec<i64>)> {
    let mut funds = Vec::new();
    let mut lines = vec![0i64; s.parts.len()];
    for (i, p) in s.parts.iter().enumerate() {
        for (side, w) in [(Side::A, &p.a), (Side::B, &p.b)] {
            let r = w.len();
            // B-side constant s is det(Q^*)^s = O(-s)
            let sign = if side == Side::A { 1 } else { -1 };
            let t = *w.last().unwrap();
            if w.iter().all(|&x| x == t) {
                lines[i] += sign * t;
                continue;
            }
            let head = w[0];
            if w[0] == head && w[1..].iter().all(|&x| x == head - 1) {
                lines[i] += sign * (head - 1);
                funds.push(Fundamental { factor: i, side, dual: false, rank: r });
            } else if w[..r - 1].iter().all(|&x| x == head) && w[r - 1] == head - 1 {
                lines[i] += sign * head;
                funds.push(Fundamental { factor: i, side, dual: true, rank: r });
            } else {
                return None;
            }
        }
    }
    Some((funds, lines))
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn conjugate(lambda: &[usize]) -> Vec<usize> {
    let len = lambda.first().copied().unwrap_or(0);
    (0..len).map(|j| lambda.iter().filter(|&&x| x > j).count()).collect()
}

/// `wedge^j` of one irreducible.
fn wedge_irreducible(factors: &[GrassFactor], s: &IrredSummand, j: usize) -> Result<BundleExpr> {
    if j == 0 {
        return Ok(BundleExpr::trivial(factors));
    }
    let (funds, lines) = decompose(s).ok_or_else(|| {
        HkrError::UnsupportedPlethysm(format!("wedge^{j} of {}", BundleExpr::from_summand(s.clone(), 1)))
    })?;
    let twist: Vec<i64> = lines.iter().map(|t| t * j as i64).collect();
    // place side weights into a summand
    let build = |pieces: &[(Fundamental, Vec<i64>)]| -> IrredSummand {
        let mut parts: Vec<FactorWeight> =
            factors.iter().map(|f| FactorWeight { a: vec![0; f.k], b: vec![0; f.n - f.k] }).collect();
        for (fd, w) in pieces {
            let p = &mut parts[fd.factor];
            match fd.side {
                Side::A => p.a = w.clone(),
                Side::B => p.b = w.clone(),
            }
        }
        IrredSummand { parts: parts.into_iter().map(|p| p.normalized()).collect() }
    };
    let mut out = BundleExpr::zero();
    match funds.as_slice() {
        [] => {
            if j == 1 {
                out.add_summand(build(&[]), 1);
            }
        }
        [f] => {
            let ones = vec![1; j];
            if let Some(w) = f.schur(&ones) {
                out.add_summand(build(&[(*f, w)]), 1);
            }
        }
        [f, g] => {
            for lambda in partitions(j, j) {
                if let (Some(wf), Some(wg)) = (f.schur(&lambda), g.schur(&conjugate(&lambda))) {
                    out.add_summand(build(&[(*f, wf), (*g, wg)]), 1);
                }
            }
        }
        _ => {
            return Err(HkrError::UnsupportedPlethysm(format!(
                "wedge^{j} of a product of {} fundamental pieces",
                funds.len()
            )))
        }
    }
    Ok(out.twist(&twist))
}

/// `wedge^j e`, expanded multinomially over the summands.
pub fn exterior_power(factors: &[GrassFactor], e: &BundleExpr, j: usize) -> Result<BundleExpr> {
    let all = exterior_powers(factors, e, j)?;
    Ok(all.into_iter().nth(j).unwrap_or_default())
}

/// `wedge^i e` for all `i = 0..=max`.
pub fn exterior_powers(factors: &[GrassFactor], e: &BundleExpr, max: usize) -> Result<Vec<BundleExpr>> {
    let mut dp: Vec<BundleExpr> = vec![BundleExpr::zero(); max + 1];
    dp[0] = BundleExpr::trivial(factors);
    for (s, &m) in &e.summands {
        let r = s.rank() as usize;
        let pieces: Vec<BundleExpr> =
            (0..=r.min(max)).map(|i| wedge_irreducible(factors, s, i)).collect::<Result<_>>()?;
        for _ in 0..m {
            let mut next = vec![BundleExpr::zero(); max + 1];
            for (d, acc) in dp.iter().enumerate() {
                if acc.summands.is_empty() {
                    continue;
                }
                for (i, p) in pieces.iter().enumerate() {
                    if d + i <= max && !p.summands.is_empty() {
                        next[d + i] = next[d + i].sum(&acc.tensor(p));
                    }
                }
            }
            dp = next;
        }
    }
    Ok(dp)
}

/// `U (x) Q^*` on factor `i`, trivial elsewhere.
pub fn cotangent(factors: &[GrassFactor], i: usize) -> IrredSummand {
    let mut s = IrredSummand::trivial(factors);
    let f = factors[i];
    let mut a = vec![0; f.k];
    a[f.k - 1] = -1;
    let mut b = vec![0; f.n - f.k];
    b[0] = 1;
    s.parts[i] = FactorWeight { a, b }.normalized();
    s
}

pub fn ambient_cotangent(factors: &[GrassFactor]) -> BundleExpr {
    let mut e = BundleExpr::zero();
    for i in 0..factors.len() {
        e.add_summand(cotangent(factors, i), 1);
    }
    e
}

/// `omega^* = O(n_1, ..., n_f)`.
pub fn anticanonical_degrees(factors: &[GrassFactor]) -> Vec<i64> {
    factors.iter().map(|f| f.index()).collect()
}

pub fn total_dim(factors: &[GrassFactor]) -> usize {
    factors.iter().map(|f| f.dim()).sum()
}

/// Cohomology of one irreducible: `None` if it vanishes, else `(degree, dim)`.
pub fn summand_cohomology(factors: &[GrassFactor], s: &IrredSummand) -> Option<(usize, u64)> {
    let mut deg = 0;
    let mut dim = 1;
    for (f, w) in factors.iter().zip(&s.parts) {
        let (d, h) = bott(*f, w)?;
        deg += d;
        dim *= h;
    }
    Some((deg, dim))
}

pub fn cohomology(factors: &[GrassFactor], e: &BundleExpr) -> CohVector {
    let mut h = vec![0u64; total_dim(factors) + 1];
    for (s, &m) in &e.summands {
        if let Some((deg, dim)) = summand_cohomology(factors, s) {
            h[deg] += dim * m;
        }
    }
    CohVector::from_known(&h)
}

/// Checks the weight convention against three known values.
pub fn calibrate() -> Result<()> {
    let check = |what: &str, got: CohVector, want: &[u64]| -> Result<()> {
        let mut w = want.to_vec();
        w.resize(got.len(), 0);
        if got.values().as_deref() != Some(&w[..]) {
            return Err(HkrError::AnchorMismatch {
                recipe: "bwb calibration".into(),
                what: what.into(),
                expected: format!("{w:?}"),
                got: format!("{got}"),
            });
        }
        Ok(())
    };
    let g25 = [GrassFactor { k: 2, n: 5 }];
    check("H(Gr(2,5), O(1))", cohomology(&g25, &BundleExpr::line(&g25, &[1])), &[10])?;
    let g24 = [GrassFactor { k: 2, n: 4 }];
    check("H(Gr(2,4), cotangent)", cohomology(&g24, &ambient_cotangent(&g24)), &[0, 1])?;
    check("H(Gr(2,4), tangent)", cohomology(&g24, &ambient_cotangent(&g24).dual()), &[15])?;
    Ok(())
}
