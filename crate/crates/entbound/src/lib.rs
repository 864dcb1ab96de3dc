//! Entanglement bounds on OO-invariant bipartite states.
//!
//! A bipartite state on two d-dimensional systems that commutes with
//! every O (x) O, O orthogonal, is fixed by two numbers: the
//! expectations f of the flip operator and fhat of d times the
//! maximally entangled projector. On this two-parameter family three
//! entanglement quantities have exact expressions, all computed here:
//!
//! * the relative entropy of entanglement with respect to PPT states
//!   (REEP), from a three-candidate witness table;
//! * the Rains bound, from a per-region case analysis;
//! * the asymptotic (regularized) REEP, which coincides with the Rains
//!   bound everywhere on the family.
//!
//! Every closed form is cross-checked against independent numerics:
//! full-matrix relative entropy on the embedded 9x9-and-up operators,
//! derivative-free minimization of the defining variational problems,
//! and finite-difference stationarity tests. The [`oracle`] module
//! holds those independent paths, [`binegativity`] the positivity
//! search that backs the modified Rains bound discussion.
//!
//! Computations are generic over the scalar type through [`Real`]
//! (closed forms) and [`MatrixReal`] (matrix-backed checks); the
//! `...64`/`...32` aliases at the crate root pin the common choices.

pub mod areep;
pub mod binegativity;
pub mod config;
pub mod error;
pub mod measures;
pub mod oo_space;
pub mod operator_algebra;
mod opt;
pub mod oracle;
pub mod rains;
pub mod scalar;

pub use areep::{areep, extension_line, line_for_point, tangent_bound, tangent_touch_check};
pub use areep::{ExtensionLine, TangentTouchReport};
pub use binegativity::{
    binegativity_defect, oo_sector_defect, random_state, search_binegative, BinegativityReport,
};
pub use config::LogBase;
pub use error::{Error, Result};
pub use measures::{
    additivity_check, is_additive_region, negativity_closed, reep, relent_closed, werner_reep,
    AdditivityLevel, AdditivityVerdict, MeasureResult,
};
pub use oo_space::{key_points, twirl, KeyPoints, OOState, Region, RegionSubtag, RegionTag};
pub use operator_algebra::HermitianOperator;
pub use rains::{
    rains_closed, rains_numeric, rains_objective, BranchExclusion, RainsBranch, RainsWitness,
};
pub use scalar::{MatrixReal, Real};

/// Invariant state with f64 coordinates.
pub type OOState64 = oo_space::OOState<f64>;
/// Invariant state with f32 coordinates.
pub type OOState32 = oo_space::OOState<f32>;
/// Bipartite Hermitian operator over f64.
pub type HermitianOperator64 = operator_algebra::HermitianOperator<f64>;
/// Bipartite Hermitian operator over f32.
pub type HermitianOperator32 = operator_algebra::HermitianOperator<f32>;
/// Measure outcome over f64.
pub type MeasureResult64 = measures::MeasureResult<f64>;
/// Named triangle points over f64.
pub type KeyPoints64 = oo_space::KeyPoints<f64>;
