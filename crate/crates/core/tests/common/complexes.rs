//! Random exact complexes with hidden entries, and a brute-force solver.

use hkr_core::exactseq::{ChaseProblem, Term};
use rand::Rng;

#[derive(Debug, Clone)]
pub struct Instance {
    pub dims: Vec<u64>,
    /// Positions replaced by solver variables, with optional bounds.
    pub hidden: Vec<(usize, u64, Option<u64>)>,
    /// `sum c_i dims[pos_i] = rhs` over hidden positions.
    pub pins: Vec<(Vec<(i64, usize)>, i64)>,
}

pub fn random_instance<R: Rng>(rng: &mut R, tight: bool) -> Instance {
    let len = rng.gen_range(2..=7);
    let ranks: Vec<u64> = (0..len - 1).map(|_| rng.gen_range(0..=5)).collect();
    let dims: Vec<u64> = (0..len)
        .map(|i| (if i > 0 { ranks[i - 1] } else { 0 }) + ranks.get(i).copied().unwrap_or(0))
        .collect();
    let nhidden = rng.gen_range(1..=len.min(if tight { 3 } else { len }));
    let mut positions: Vec<usize> = (0..len).collect();
    for i in 0..len {
        positions.swap(i, rng.gen_range(i..len));
    }
    positions.truncate(nhidden);
    positions.sort_unstable();
    let hidden = positions
        .iter()
        .map(|&p| {
            let v = dims[p];
            if tight || rng.gen_bool(0.3) {
                let lo = v.saturating_sub(rng.gen_range(0..=4));
                (p, lo, Some(v + rng.gen_range(0..=4)))
            } else {
                (p, 0, None)
            }
        })
        .collect();
    let mut pins = Vec::new();
    if rng.gen_bool(0.3) {
        let coeffs: Vec<(i64, usize)> = positions.iter().map(|&p| (rng.gen_range(-2..=2), p)).collect();
        let rhs = coeffs.iter().map(|&(c, p)| c * dims[p] as i64).sum();
        pins.push((coeffs, rhs));
    }
    Instance { dims, hidden, pins }
}

pub fn build(inst: &Instance) -> (ChaseProblem, Vec<usize>) {
    let mut p = ChaseProblem::new();
    let mut terms: Vec<Term> = inst.dims.iter().map(|&d| Term::Known(d)).collect();
    let mut vars = Vec::new();
    for &(pos, lo, hi) in &inst.hidden {
        let v = p.new_var(format!("x{pos}"));
        p.set_bounds(v, lo, hi);
        terms[pos] = Term::Var(v);
        vars.push(v);
    }
    p.add_exact_sequence(&terms);
    for (coeffs, rhs) in &inst.pins {
        let t: Vec<(i64, Term)> = coeffs.iter().map(|&(c, pos)| (c, terms[pos])).collect();
        p.pin_linear(&t, *rhs);
    }
    (p, vars)
}

/// Whether `0 -> d_0 -> ... -> d_m -> 0` can be exact.
pub fn exact_possible(d: &[u64]) -> bool {
    let mut prev: i64 = 0;
    for (i, &x) in d.iter().enumerate() {
        let r = x as i64 - prev;
        if r < 0 {
            return false;
        }
        if i + 1 == d.len() {
            return r == 0;
        }
        prev = r;
    }
    true
}

/// Exact `(min, max)` of every hidden entry over all feasible fillings.
/// Needs finite upper bounds on every hidden entry.
pub fn brute_force(inst: &Instance) -> Option<Vec<(u64, u64)>> {
    let mut best: Option<Vec<(u64, u64)>> = None;
    let k = inst.hidden.len();
    let mut vals: Vec<u64> = inst.hidden.iter().map(|h| h.1).collect();
    loop {
        let mut d = inst.dims.clone();
        for (i, &(pos, _, _)) in inst.hidden.iter().enumerate() {
            d[pos] = vals[i];
        }
        let pins_ok = inst
            .pins
            .iter()
            .all(|(c, rhs)| c.iter().map(|&(x, p)| x * d[p] as i64).sum::<i64>() == *rhs);
        if pins_ok && exact_possible(&d) {
            let b = best.get_or_insert_with(|| vals.iter().map(|&v| (v, v)).collect());
            for (slot, &v) in b.iter_mut().zip(&vals) {
                slot.0 = slot.0.min(v);
                slot.1 = slot.1.max(v);
            }
        }
        let mut i = 0;
        loop {
            if i == k {
                return best;
            }
            if vals[i] < inst.hidden[i].2.expect("bounded") {
                vals[i] += 1;
                break;
            }
            vals[i] = inst.hidden[i].1;
            i += 1;
        }
    }
}
