//! Filtered φ-modules over an unramified field: Hodge and Newton degrees,
//! φ-stable subspaces, weak admissibility, twists, tensor and exterior
//! powers, and the rank of the positive-weight part.

mod admissible;
mod constructions;
mod module;
pub mod presets;
pub mod random;
mod stable;

pub use admissible::{
    fil1, is_weakly_admissible, max_subspace_slope, n_condition, slope_bound_check, slope_lambda, subspace_invariants, totaro_check,
    universal_norm_rank, Certificate, SubInvariants,
};
pub use constructions::{tensor_product, wedge_power};
pub use module::{FilStep, FilteredPhiModule, HodgeData, NewtonPolygon, Subspace};
pub use stable::phi_stable_subspaces;

use unorm_padic::{FieldElement, PadicError};

#[derive(Debug, Clone, thiserror::Error)]
pub enum PhiModError {
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("invalid module: {0}")]
    Invalid(String),
    #[error("phi not invertible")]
    NotInvertible,
    #[error("subspace is not phi-stable: image {image:?} leaves it")]
    NotStable { image: Vec<FieldElement> },
    #[error("non-generic, unsupported: {0}")]
    Unsupported(String),
    #[error("{0} is not a jump of the filtration")]
    NotAJump(i64),
    #[error("sum not admissible: {0}")]
    SumNotAdmissible(String),
    #[error("slope undefined on the zero module")]
    ZeroModule,
    #[error("modules live over different fields")]
    FieldMismatch,
}
