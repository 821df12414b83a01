//! Complete intersections of Cartier divisors in complete toric varieties.

use super::{solve_conormal, ConormalData, Trace};
use crate::coh::CohVector;
use crate::error::{HkrError, Result};
use crate::invariants::ClassificationRecord;
use crate::linalg::combinations;
use crate::toric::{cotangent_twist_cohomology, line_bundle_cohomology, ClassLattice, Fan, GeneralFan, TorusDivisor};

#[derive(Debug, Clone, PartialEq)]
pub enum ToricFanSpec {
    /// Explicit rays and maximal cones; cones need not be simplicial.
    Explicit { dim: usize, rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>> },
    /// GIT quotient of affine space by a torus with these weights.
    Weights { weights: Vec<Vec<i64>>, stability: Vec<i64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToricModel {
    pub fan: ToricFanSpec,
    /// Rows of the map from torus-invariant divisors to the class group.
    /// Defaults to the weights, or to a kernel basis of the ray matrix.
    pub class_projection: Option<Vec<Vec<i64>>>,
    /// Classes of the divisors cutting out `X`.
    pub sections: Vec<Vec<i64>>,
}

/// A built fan plus the cohomology backend suited to it.
pub enum ToricEngine {
    Simplicial(Fan, ClassLattice),
    Cech(GeneralFan, ClassLattice),
}

impl ToricEngine {
    pub fn build(spec: &ToricFanSpec, projection: Option<&Vec<Vec<i64>>>) -> Result<ToricEngine> {
        match spec {
            ToricFanSpec::Weights { weights, stability } => {
                let (fan, lat) = Fan::from_weights(weights, stability)?;
                let lat = match projection {
                    Some(p) => ClassLattice::new(&fan, p.clone())?,
                    None => lat,
                };
                Ok(ToricEngine::Simplicial(fan, lat))
            }
            ToricFanSpec::Explicit { dim, rays, cones } => {
                let lat = match projection {
                    Some(p) => ClassLattice::for_rays(*dim, rays, p.clone())?,
                    None => ClassLattice::from_rays(*dim, rays)?,
                };
                if cones.iter().all(|c| c.len() == *dim) {
                    Ok(ToricEngine::Simplicial(Fan::new(*dim, rays.clone(), cones.clone())?, lat))
                } else {
                    Ok(ToricEngine::Cech(GeneralFan::new(*dim, rays.clone(), cones.clone())?, lat))
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ToricEngine::Simplicial(f, _) => f.dim(),
            ToricEngine::Cech(f, _) => f.dim(),
        }
    }

    pub fn lattice(&self) -> &ClassLattice {
        match self {
            ToricEngine::Simplicial(_, l) | ToricEngine::Cech(_, l) => l,
        }
    }

    pub fn is_cartier(&self, d: &[i64]) -> bool {
        match self {
            ToricEngine::Simplicial(f, _) => f.is_cartier(d),
            ToricEngine::Cech(f, _) => f.is_cartier(d),
        }
    }

    /// Class of `-K`.
    pub fn anticanonical_class(&self) -> Vec<i64> {
        let n = self.lattice().projection.first().map_or(0, |r| r.len());
        self.lattice().class_of(&vec![1; n])
    }

    pub fn divisor(&self, class: &[i64]) -> Result<TorusDivisor> {
        self.lattice().representative_of(class)
    }

    pub fn line_bundle(&self, class: &[i64]) -> Result<CohVector> {
        self.line_bundle_of_divisor(&self.divisor(class)?)
    }

    /// Cohomology of the reflexive sheaf `Omega(L)` for the class `L`.
    pub fn cotangent(&self, class: &[i64]) -> Result<CohVector> {
        self.cotangent_of_divisor(&self.divisor(class)?)
    }

    pub fn line_bundle_of_divisor(&self, d: &[i64]) -> Result<CohVector> {
        let d = d.to_vec();
        match self {
            ToricEngine::Simplicial(f, _) => line_bundle_cohomology(f, &d),
            ToricEngine::Cech(f, _) => f.line_bundle_cohomology(&d),
        }
    }

    pub fn cotangent_of_divisor(&self, d: &[i64]) -> Result<CohVector> {
        let d = d.to_vec();
        match self {
            ToricEngine::Simplicial(f, l) => cotangent_twist_cohomology(f, l, &d),
            ToricEngine::Cech(f, _) => f.cotangent_twist_cohomology(&d),
        }
    }
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add_into(acc: &mut Vec<u64>, v: &CohVector) -> Result<()> {
    let vals = v.values().ok_or_else(|| HkrError::UnknownEntries(v.to_string()))?;
    acc.resize(acc.len().max(vals.len()), 0);
    for (a, x) in acc.iter_mut().zip(vals) {
        *a += x;
    }
    Ok(())
}

/// Koszul data for `X = S_1 ∩ ... ∩ S_r`; twist `L = -K_F - sum S_i`.
pub(crate) fn toric_conormal_data(engine: &ToricEngine, sections: &[Vec<i64>], trace: &mut Trace) -> Result<ConormalData> {
    let d = engine.dim();
    let r = sections.len();
    for s in sections {
        let div = engine.divisor(s)?;
        if !engine.is_cartier(&div) {
            return Err(HkrError::NonCartier(format!("section class {s:?}")));
        }
    }
    let mut l = engine.anticanonical_class();
    for s in sections {
        l = sub(&l, s);
    }
    trace.note("omega_X^* class", format!("{l:?}"));
    let mut first = Vec::with_capacity(r + 1);
    let mut second = Vec::with_capacity(r + 1);
    for j in 0..=r {
        let mut a = vec![0u64; d + 1];
        let mut b = vec![0u64; d + 1];
        for subset in combinations(r, j) {
            let mut base = l.clone();
            for &i in &subset {
                base = sub(&base, &sections[i]);
            }
            for s in sections {
                add_into(&mut a, &engine.line_bundle(&sub(&base, s))?)?;
            }
            add_into(&mut b, &engine.cotangent(&base)?)?;
        }
        first.push(CohVector::from_known(&a));
        second.push(CohVector::from_known(&b));
    }
    Ok(ConormalData { first, second })
}

/// `H^0..H^3(X, wedge^2 T_X)` for a toric complete intersection threefold.
pub fn toric_ci(model: &ToricModel, rec: &ClassificationRecord, trace: &mut Trace) -> Result<CohVector> {
    let engine = ToricEngine::build(&model.fan, model.class_projection.as_ref())?;
    if engine.dim() != 3 + model.sections.len() {
        return Err(HkrError::Validation {
            id: rec.id.to_string(),
            check: format!("ambient dimension {} with {} sections", engine.dim(), model.sections.len()),
        });
    }
    trace.note(
        "toric backend",
        match engine {
            ToricEngine::Simplicial(..) => "simplicial",
            ToricEngine::Cech(..) => "cech",
        },
    );
    let data = toric_conormal_data(&engine, &model.sections, trace)?;
    solve_conormal(&data, rec, trace)
}
