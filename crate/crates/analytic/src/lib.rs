//! Vector-valued series over a filtered φ-module: the operator `Φ = φ ⊗ φ`,
//! the order `𝔇_φ`, finite-layer membership checks, Wronskians, orbit
//! wedges, and the order-versus-divisibility argument that forces certain
//! determinants to vanish.

mod contradiction;
mod logterms;
mod membership;
mod order;
pub mod synthetic;
mod vector;
mod wedge;

pub use contradiction::{
    contradiction_pipeline, determinant_log_check, layer_values, probe_depth, ContradictionReport, DeterminantLogCheck, Mode, Outcome,
    PipelineConfig,
};
pub use logterms::LogTerms;
pub use membership::{
    check_a_membership, Condition, ConditionKind, MembershipParams, MembershipReport, OrderCheck, Status, Verdict, DEFAULT_GUARD,
};
pub use order::{phi_growth_order, slope_decomposition, PhiOrder};
pub use vector::VectorSeries;
pub use wedge::{
    det, orbit_relation, pairwise_wedge, phi_orbit, phi_orbit_wedge, subsets, truncated_det, wedge_coords, wedge_structured,
    wronskian_det, wronskian_rows, wronskian_structured, Entry, OrbitRelation, SeriesQuotient,
};

use unorm_padic::PadicError;
use unorm_phimod::PhiModError;
use unorm_series::SeriesError;

#[derive(Debug, Clone, thiserror::Error)]
pub enum AnalyticError {
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    PhiMod(#[from] PhiModError),
    #[error("shape: {0}")]
    Shape(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
