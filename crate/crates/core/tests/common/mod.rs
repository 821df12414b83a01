//! Oracle suites shared by the test targets and the acceptance harness.
//! Each suite returns a short summary on success and a description of the
//! first disagreement on failure.

#![allow(dead_code)]

pub mod cech;
pub mod complexes;
pub mod tableaux;

use hkr_core::bwb::{
    ambient_cotangent, bott, calibrate, cohomology, exterior_power, lr_tensor, summand_cohomology, weyl_dim,
    BundleExpr, FactorWeight, GrassFactor, IrredSummand,
};
use hkr_core::exactseq::kunneth;
use hkr_core::families::Dataset;
use hkr_core::pipeline::{ModelKind, ToricEngine};
use hkr_core::CohVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub type Suite = Result<String, String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn values(v: &CohVector, len: usize) -> Vec<u64> {
    let mut x = v.values().expect("fully known vector");
    x.resize(len, 0);
    x
}

pub fn toric_oracle_suite() -> Suite {
    let mut total = 0;
    for fan in cech::small_fans() {
        total += cech::compare_all(&fan, 3)?;
    }
    Ok(format!("{total} divisors on 5 fans agree with the Čech oracle"))
}

/// Codimension-zero toric models of the bundled dataset.
pub fn toric_fanos(data: &Dataset) -> Vec<(String, ToricEngine)> {
    let mut out = Vec::new();
    for f in &data.families {
        for m in &f.models {
            if let ModelKind::Toric(t) = &m.kind {
                if t.sections.is_empty() {
                    let e = ToricEngine::build(&t.fan, t.class_projection.as_ref()).expect("bundled fan builds");
                    out.push((f.record.id.to_string(), e));
                }
            }
        }
    }
    out
}

pub fn serre_duality_suite(count: usize) -> Suite {
    let data = Dataset::bundled().map_err(|e| e.to_string())?;
    let fanos = toric_fanos(&data);
    let mut r = rng(7);
    let mut done = 0;
    while done < count {
        let (id, engine) = &fanos[r.gen_range(0..fanos.len())];
        let n = engine.lattice().projection[0].len();
        let a: Vec<i64> = (0..n).map(|_| r.gen_range(-4..=4)).collect();
        if !engine.is_cartier(&a) {
            continue;
        }
        let dual: Vec<i64> = a.iter().map(|x| -1 - x).collect();
        let h = values(&engine.line_bundle_of_divisor(&a).map_err(|e| e.to_string())?, 4);
        let mut hd = values(&engine.line_bundle_of_divisor(&dual).map_err(|e| e.to_string())?, 4);
        hd.reverse();
        if h != hd {
            return Err(format!("{id}: a = {a:?}: H = {h:?}, reversed H(K - D) = {hd:?}"));
        }
        done += 1;
    }
    Ok(format!("{count} random Cartier divisors on {} toric Fanos satisfy Serre duality", fanos.len()))
}

/// LR expansion versus tableau counting, for all partition pairs with at
/// most `max_boxes` boxes each, in `GL(2 max_boxes)` so nothing is truncated.
pub fn lr_suite(max_boxes: usize) -> Suite {
    let n = 2 * max_boxes;
    let mut pairs = 0;
    for s in 0..=max_boxes {
        for t in 0..=max_boxes {
            for lambda in tableaux::partitions(s) {
                for mu in tableaux::partitions(t) {
                    let got = lr_tensor(&tableaux::pad(&lambda, n), &tableaux::pad(&mu, n), n);
                    let mut want = BTreeMap::new();
                    for nu in tableaux::partitions(s + t) {
                        let c = tableaux::lr_coefficient(&lambda, &mu, &nu);
                        if c > 0 {
                            want.insert(tableaux::pad(&nu, n), c);
                        }
                    }
                    if got != want {
                        return Err(format!("{lambda:?} x {mu:?}: expansion {got:?}, tableaux {want:?}"));
                    }
                    let lhs: u128 = got.iter().map(|(nu, &c)| c as u128 * weyl_dim(nu, n) as u128).sum();
                    let rhs = tableaux::hook_content(&lambda, n) * tableaux::hook_content(&mu, n);
                    if lhs != rhs {
                        return Err(format!("{lambda:?} x {mu:?}: dimensions {lhs} != {rhs}"));
                    }
                    pairs += 1;
                }
            }
        }
    }
    for k in 0..=max_boxes {
        for lambda in tableaux::partitions(k) {
            for m in lambda.len().max(1)..=n {
                if weyl_dim(&lambda, m) as u128 != tableaux::hook_content(&lambda, m) {
                    return Err(format!("dim of {lambda:?} for GL({m})"));
                }
            }
        }
    }
    Ok(format!("{pairs} partition pairs agree with LR tableaux"))
}

fn binom(n: i64, k: i64) -> u64 {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Bott's formula for `H^q(P^n, Omega^p(t))`.
fn bott_formula(n: i64, p: i64, t: i64, q: i64) -> u64 {
    if q == 0 && t > p {
        binom(t + n - p, t) * binom(t - 1, p)
    } else if q == n && t < p - n {
        binom(-t + p, -t) * binom(-t - 1, n - p)
    } else if q == p && t == 0 {
        1
    } else {
        0
    }
}

fn sorted_desc(mut v: Vec<i64>) -> Vec<i64> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

pub fn bwb_suite() -> Suite {
    calibrate().map_err(|e| e.to_string())?;
    let mut checks = 0;
    // Bott's formula on projective spaces.
    for n in 1..=4i64 {
        let g = [GrassFactor::projective(n as usize)];
        for p in 0..=n {
            let om = exterior_power(&g, &ambient_cotangent(&g), p as usize).map_err(|e| e.to_string())?;
            for t in -7..=7 {
                let got = values(&cohomology(&g, &om.twist(&[t])), n as usize + 1);
                let want: Vec<u64> = (0..=n).map(|q| bott_formula(n, p, t, q)).collect();
                if got != want {
                    return Err(format!("H(P{n}, Omega^{p}({t})) = {got:?}, Bott gives {want:?}"));
                }
                checks += 1;
            }
        }
    }
    // Dichotomy and Serre duality for random irreducible bundles.
    let mut r = rng(11);
    let spaces: [&[GrassFactor]; 3] = [
        &[GrassFactor { k: 2, n: 4 }],
        &[GrassFactor { k: 2, n: 5 }],
        &[GrassFactor { k: 2, n: 4 }, GrassFactor::projective(2)],
    ];
    for factors in spaces {
        let dim: usize = factors.iter().map(|f| f.dim()).sum();
        let canonical: Vec<i64> = factors.iter().map(|f| -f.index()).collect();
        for _ in 0..150 {
            let parts = factors
                .iter()
                .map(|&f| {
                    let a = sorted_desc((0..f.k).map(|_| r.gen_range(-4..=4)).collect());
                    let b = sorted_desc((0..f.n - f.k).map(|_| r.gen_range(-4..=4)).collect());
                    FactorWeight::new(f, a, b).expect("dominant weight")
                })
                .collect::<Vec<_>>();
            let s = IrredSummand { parts: parts.clone() };
            let e = BundleExpr::from_summand(s.clone(), 1);
            let h = values(&cohomology(factors, &e), dim + 1);
            let nonzero = h.iter().filter(|&&x| x > 0).count();
            if nonzero > 1 {
                return Err(format!("{s:?} has cohomology in several degrees: {h:?}"));
            }
            // Vanishing exactly when some factor's shifted weight repeats.
            let vanishes = factors.iter().zip(&parts).any(|(&f, w)| {
                let full: Vec<i64> = w.a.iter().chain(&w.b).copied().collect();
                let shifted: Vec<i64> = full.iter().enumerate().map(|(i, x)| x + (f.n - 1 - i) as i64).collect();
                (0..shifted.len()).any(|i| (i + 1..shifted.len()).any(|j| shifted[i] == shifted[j]))
            });
            if vanishes != (nonzero == 0) || vanishes != summand_cohomology(factors, &s).is_none() {
                return Err(format!("{s:?}: vanishing {vanishes}, cohomology {h:?}"));
            }
            for (&f, w) in factors.iter().zip(&parts) {
                if let Some((_, d)) = bott(f, w) {
                    if d == 0 {
                        return Err(format!("{w:?} on {f}: zero-dimensional nonvanishing group"));
                    }
                }
            }
            let mut hd = values(&cohomology(factors, &e.dual().twist(&canonical)), dim + 1);
            hd.reverse();
            if h != hd {
                return Err(format!("{s:?}: H = {h:?}, reversed H(E^* (x) omega) = {hd:?}"));
            }
            checks += 1;
        }
    }
    Ok(format!("calibration holds, {checks} Bott and duality checks pass"))
}

pub fn chase_suite(count: usize) -> Suite {
    let mut r = rng(13);
    let mut tight_checked = 0;
    for i in 0..count {
        let tight = i % 2 == 0;
        let inst = complexes::random_instance(&mut r, tight);
        let (p, vars) = complexes::build(&inst);
        let sol = p.solve().map_err(|e| format!("instance {inst:?}: {e}"))?;
        for (&v, &(pos, _, _)) in vars.iter().zip(&inst.hidden) {
            let e = sol.entry(hkr_core::exactseq::Term::Var(v));
            if !e.contains(inst.dims[pos]) {
                return Err(format!("instance {inst:?}: true value {} outside {e}", inst.dims[pos]));
            }
        }
        if tight {
            let exact = complexes::brute_force(&inst).ok_or("brute force found no solution")?;
            for ((&v, &(pos, _, _)), &(lo, hi)) in vars.iter().zip(&inst.hidden).zip(&exact) {
                let got = sol.entry(hkr_core::exactseq::Term::Var(v)).bounds();
                if got != (lo, Some(hi)) {
                    return Err(format!("instance {inst:?}: position {pos} bounds {got:?}, exhaustive ({lo}, {hi})"));
                }
            }
            tight_checked += 1;
        }
    }
    // Breaking exactness of a fully known complex must be detected.
    for _ in 0..100 {
        let mut inst = complexes::random_instance(&mut r, false);
        inst.hidden.clear();
        inst.pins.clear();
        let k = r.gen_range(0..inst.dims.len());
        inst.dims[k] += 1;
        if p_ok(&inst) {
            return Err(format!("inconsistent complex {:?} accepted", inst.dims));
        }
    }
    Ok(format!("{count} random complexes solved soundly, {tight_checked} with exhaustive bounds"))
}

fn p_ok(inst: &complexes::Instance) -> bool {
    complexes::build(inst).0.solve().is_ok()
}

pub fn kunneth_suite() -> Suite {
    let mut r = rng(17);
    let random = |r: &mut ChaCha8Rng| {
        let len = r.gen_range(1..=4);
        CohVector::from_known(&(0..len).map(|_| r.gen_range(0..=5)).collect::<Vec<u64>>())
    };
    let unit = CohVector::from_known(&[1]);
    let k = |a: &CohVector, b: &CohVector| kunneth(a, b).map_err(|e| e.to_string());
    for _ in 0..300 {
        let (x, y, z) = (random(&mut r), random(&mut r), random(&mut r));
        if k(&x, &unit)? != x || k(&unit, &x)? != x {
            return Err(format!("unit fails on {x}"));
        }
        if k(&k(&x, &y)?, &z)? != k(&x, &k(&y, &z)?)? {
            return Err(format!("associativity fails on {x}, {y}, {z}"));
        }
        if k(&x, &y)? != k(&y, &x)? {
            return Err(format!("commutativity fails on {x}, {y}"));
        }
        let chi = k(&x, &y)?.euler_characteristic();
        if chi != Some(x.euler_characteristic().unwrap() * y.euler_characteristic().unwrap()) {
            return Err(format!("Euler characteristic not multiplicative on {x}, {y}"));
        }
    }
    // Products of projective lines against the toric engine.
    let p1 = [GrassFactor::projective(1)];
    let quadric = cech::small_fans().into_iter().find(|f| f.name == "P1xP1").unwrap();
    let fan = hkr_core::toric::Fan::new(2, quadric.rays.clone(), quadric.cones.clone()).map_err(|e| e.to_string())?;
    for a in -4..=4 {
        for b in -4..=4 {
            let ha = cohomology(&p1, &BundleExpr::line(&p1, &[a]));
            let hb = cohomology(&p1, &BundleExpr::line(&p1, &[b]));
            let prod = values(&k(&ha, &hb)?, 3);
            let toric = values(&hkr_core::toric::line_bundle_cohomology(&fan, &[a, b, 0, 0]).map_err(|e| e.to_string())?, 3);
            if prod != toric {
                return Err(format!("O({a},{b}) on P1xP1: Künneth {prod:?}, toric {toric:?}"));
            }
        }
    }
    Ok("unit, associativity, commutativity and Euler multiplicativity hold".into())
}
