//! Exact arithmetic in ℚ_p, in unramified extensions `K` with their Frobenius,
//! and in the cyclotomic layers `K_n = K(μ_{p^n})`, with tracked precision.

pub mod cyclo;
pub mod exec;
pub mod field;
pub mod kpoly;
pub mod linalg;
pub mod residue;
pub mod scalar;

pub use cyclo::{CyclotomicElement, CyclotomicLayer};
pub use field::{FieldElement, UnramifiedField, DEFAULT_PREC};
pub use scalar::Padic;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PadicError {
    #[error("p = {0} must be an odd prime")]
    InvalidPrime(u32),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("division by a value indistinguishable from zero")]
    DivisionByZero,
    #[error("value indistinguishable from zero")]
    IndistinguishableFromZero,
    #[error("matrix is singular at working precision")]
    Singular,
    #[error("layer n = {n} exceeds the configured maximum {max}")]
    UnsupportedLayer { n: u32, max: u32 },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precision exhausted: {0}")]
    Precision(String),
}
