//! Zero loci of completely reducible homogeneous bundles on products of Grassmannians.

use super::{solve_conormal, ConormalData, Trace};
use crate::bwb::{
    ambient_cotangent, anticanonical_degrees, cohomology, exterior_powers, parse_bundle, total_dim, BundleExpr,
    GrassFactor,
};
use crate::coh::CohVector;
use crate::error::{HkrError, Result};
use crate::invariants::ClassificationRecord;
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousModel {
    pub factors: Vec<GrassFactor>,
    /// Bundle in the text grammar of `bwb`.
    pub bundle: String,
    /// Codimension of `X` in the ambient; must equal the bundle rank.
    pub codim: usize,
    /// Codimension as printed in the source table, when it differs from the rank.
    pub printed_codim: Option<usize>,
}

impl HomogeneousModel {
    pub fn parsed(&self) -> Result<BundleExpr> {
        parse_bundle(&self.factors, &self.bundle)
    }
}

pub(crate) fn homogeneous_conormal_data(factors: &[GrassFactor], e: &BundleExpr, trace: &mut Trace) -> Result<ConormalData> {
    let r = e.rank() as usize;
    let det = e.det_degrees(factors.len());
    let l: Vec<i64> = anticanonical_degrees(factors).iter().zip(&det).map(|(a, d)| a - d).collect();
    trace.note("omega_X^* degrees", format!("{l:?}"));
    let edual = e.dual();
    let powers = exterior_powers(factors, &edual, r)?;
    let g1 = edual.twist(&l);
    let g2 = ambient_cotangent(factors).twist(&l);
    let pairs: Vec<(CohVector, CohVector)> = powers
        .par_iter()
        .map(|w| (cohomology(factors, &w.tensor(&g1)), cohomology(factors, &w.tensor(&g2))))
        .collect();
    let (first, second) = pairs.into_iter().unzip();
    Ok(ConormalData { first, second })
}

/// `H^0..H^3(X, wedge^2 T_X)` for a homogeneous zero locus threefold.
pub fn homogeneous_ci(model: &HomogeneousModel, rec: &ClassificationRecord, trace: &mut Trace) -> Result<CohVector> {
    let e = model.parsed()?;
    let dim_f = total_dim(&model.factors);
    if e.rank() as usize != model.codim {
        return Err(HkrError::Validation {
            id: rec.id.to_string(),
            check: format!("bundle rank {} differs from codimension {}", e.rank(), model.codim),
        });
    }
    if dim_f != 3 + e.rank() as usize {
        return Err(HkrError::Validation {
            id: rec.id.to_string(),
            check: format!("rank {} does not cut a threefold out of dimension {dim_f}", e.rank()),
        });
    }
    let data = homogeneous_conormal_data(&model.factors, &e, trace)?;
    solve_conormal(&data, rec, trace)
}
