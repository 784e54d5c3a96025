//! The norms `‖f‖_{ρ_n}` with `ρ_n = p^{-1/(p^n(p-1))}`, reported in
//! valuation form: `min_i (v(a_i) + i/(p^n(p-1)))`.
//!
//! `ρ_n` is the absolute value of `ζ_{p^{n+1}} - 1`.

use num_rational::Rational64;

use crate::series::{tail_valuation_bound, Tail, TruncatedSeries};
use crate::SeriesError;
use unorm_padic::PadicError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RhoNorm {
    pub n: u32,
    /// `-log_p ‖f‖_{ρ_n}`.
    pub value: Rational64,
    /// Index attaining the minimum.
    pub index: usize,
}

/// `p^n(p-1)`, so that `ρ_n = p^{-1/e}`.
pub fn rho_denominator(p: u32, n: u32) -> i64 {
    (p as i64).pow(n) * (p as i64 - 1)
}

pub fn rho_norm(f: &TruncatedSeries, n: u32) -> Result<RhoNorm, SeriesError> {
    if n == 0 {
        return Err(SeriesError::Shape("rho_n needs n >= 1".into()));
    }
    let p = f.p();
    let e = rho_denominator(p, n);
    let mut best: Option<(Rational64, usize)> = None;
    for (i, a) in f.coeffs().iter().enumerate() {
        if let Some(v) = a.val() {
            let w = Rational64::from(v) + Rational64::new(i as i64, e);
            if best.is_none_or(|(b, _)| w < b) {
                best = Some((w, i));
            }
        }
    }
    let (value, index) = best.ok_or(SeriesError::Padic(PadicError::IndistinguishableFromZero))?;
    // A coefficient known only to be small still caps what can be asserted.
    for (i, a) in f.coeffs().iter().enumerate() {
        if a.val().is_none() && Rational64::from(a.prec()) + Rational64::new(i as i64, e) < value {
            return Err(PadicError::Precision(format!("coefficient {i} is zero only to precision {}", a.prec())).into());
        }
    }
    match f.tail() {
        Tail::Zero => {}
        Tail::Unknown => return Err(SeriesError::TailUnknown("rho_norm")),
        Tail::Bounded { b, r } => {
            let t = tail_valuation_bound(p, f.trunc(), b, r, e);
            if t < value {
                return Err(SeriesError::TailDominated { tail: t });
            }
        }
    }
    Ok(RhoNorm { n, value, index })
}
