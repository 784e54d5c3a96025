//! Evaluation of truncated series at `π_n = ζ_{p^n} - 1`.

use std::sync::Arc;

use num_rational::Rational64;
use unorm_padic::{CyclotomicElement, CyclotomicLayer};

use crate::series::{tail_valuation_bound, Tail, TruncatedSeries};
use crate::SeriesError;

#[derive(Clone, Debug)]
pub struct Evaluation {
    /// `Σ_{i<=N} a_i π_n^i`.
    pub value: CyclotomicElement,
    /// Lower bound on the valuation of the untracked part; `None` for polynomials.
    pub tail: Option<Rational64>,
}

impl Evaluation {
    /// The true value is known modulo `p^precision`.
    pub fn precision(&self) -> Rational64 {
        let v = self.value.prec();
        match self.tail {
            Some(t) => v.min(t),
            None => v,
        }
    }

    /// Certified valuation of the true value, if it is visibly nonzero.
    pub fn certified_valuation(&self) -> Option<Rational64> {
        self.value.valuation().filter(|v| *v < self.precision())
    }

    /// Zero to the precision at hand, provided that precision reaches `threshold`.
    pub fn is_zero_at(&self, threshold: Rational64) -> bool {
        self.certified_valuation().is_none() && self.precision() >= threshold
    }
}

pub fn cyclotomic_evaluate(s: &TruncatedSeries, layer: &Arc<CyclotomicLayer>) -> Result<Evaluation, SeriesError> {
    if **layer.field() != **s.field() {
        return Err(SeriesError::Shape("series and layer live over different fields".into()));
    }
    let e = layer.ramification() as i64;
    let tail = match s.tail() {
        Tail::Zero => None,
        Tail::Bounded { b, r } => Some(tail_valuation_bound(s.p(), s.trunc(), b, r, e)),
        Tail::Unknown => return Err(SeriesError::TailUnknown("cyclotomic_evaluate")),
    };
    let c = s.coeffs();
    let mut acc = layer.from_field(&c[c.len() - 1]);
    for a in c.iter().rev().skip(1) {
        acc = acc.mul_pi().add_field(a);
    }
    Ok(Evaluation { value: acc, tail })
}

/// As [`cyclotomic_evaluate`], failing when the tail bound is below `threshold`.
pub fn cyclotomic_evaluate_to(
    s: &TruncatedSeries,
    layer: &Arc<CyclotomicLayer>,
    threshold: Rational64,
) -> Result<Evaluation, SeriesError> {
    let ev = cyclotomic_evaluate(s, layer)?;
    match ev.tail {
        Some(t) if t < threshold => Err(SeriesError::TailDominated { tail: t }),
        _ => Ok(ev),
    }
}
