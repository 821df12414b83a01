//! Polyvector parallelograms of Fano threefolds.
//!
//! The crate computes `dim H^p(X, wedge^q T_X)` for Fano threefolds described
//! as complete intersections in toric varieties or as zero loci of
//! homogeneous bundles on products of Grassmannians, and checks the results
//! against a bundled classification table.

pub mod bwb;
pub mod coh;
pub mod error;
pub mod exactseq;
pub mod families;
pub mod invariants;
pub mod linalg;
pub mod pipeline;
pub mod toric;

pub use coh::{CohVector, Entry};
pub use error::{HkrError, Result};
pub use invariants::{ClassificationRecord, FamilyId, Parallelogram};
