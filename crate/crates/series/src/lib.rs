//! Truncated power series over an unramified `p`-adic field, with the
//! Frobenius `φ`, its left inverse `ψ`, `D = (1+x) d/dx`, the `Γ`-action,
//! evaluation at cyclotomic points, division by `log(1+x)` and growth orders.

pub mod divide;
pub mod eval;
pub mod logpoly;
pub mod norm;
pub mod ops;
mod series;
mod tables;

pub use divide::{divide_by_log, divide_by_log_with, log_order, DivideConfig, LogOrder, Witness};
pub use eval::{cyclotomic_evaluate, cyclotomic_evaluate_to, Evaluation};
pub use logpoly::{growth_order_estimate, phi_quotient_scalar, LogPolynomial, OrderInterval};
pub use norm::{rho_norm, RhoNorm};
pub use series::{lgp, tail_valuation_bound, Tail, TruncatedSeries};

use num_rational::Rational64;
use unorm_padic::PadicError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeriesError {
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("{0} needs a bound on the untracked tail")]
    TailUnknown(&'static str),
    #[error("tail bound {tail} does not dominate the tracked minimum; raise the truncation")]
    TailDominated { tail: Rational64 },
    #[error("psi(f) is nonzero at coefficient {index}")]
    PsiNonzero { index: usize },
    #[error("not divisible by log(1+x): {0}")]
    NotDivisible(Witness),
    #[error("undecidable at working precision: {0}")]
    Undecidable(String),
    #[error("divisibility checks disagree: {0}")]
    Inconsistent(String),
    #[error("growth order of the zero function")]
    ZeroOrder,
    #[error("shape: {0}")]
    Shape(String),
    #[error("automorphism parameter must be a p-adic unit")]
    NotUnit,
    #[error("series has no unit constant term")]
    NotInvertible,
    #[error("quotient is not constant at coefficient {index}")]
    NotScalar { index: usize },
}
