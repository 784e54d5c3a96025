//! Log-polynomials `Σ c_i log^i(1+x)` with bounded `c_i`, their exact growth
//! order, a numeric estimator for general series, and the scalar `μ` relating
//! two `φ`-quotients.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::Signed;
use unorm_padic::FieldElement;

use crate::norm::rho_norm;
use crate::ops::phi;
use crate::series::{Tail, TruncatedSeries};
use crate::SeriesError;

#[derive(Clone, Debug)]
pub struct LogPolynomial {
    terms: BTreeMap<u32, TruncatedSeries>,
}

impl LogPolynomial {
    /// Terms must be bounded (`r = 0`) and visibly nonzero; zero terms are dropped.
    pub fn new(terms: impl IntoIterator<Item = (u32, TruncatedSeries)>) -> Result<Self, SeriesError> {
        let mut out = BTreeMap::new();
        for (i, c) in terms {
            match c.bound_pair() {
                Some((_, 0)) => {}
                _ => return Err(SeriesError::Shape(format!("log-polynomial term {i} is not bounded"))),
            }
            if c.coeffs().iter().all(|a| a.val().is_none()) {
                if c.is_zero() {
                    continue;
                }
                return Err(SeriesError::Shape(format!("log-polynomial term {i} has no certified nonzero coefficient")));
            }
            if out.insert(i, c).is_some() {
                return Err(SeriesError::Shape(format!("duplicate log-polynomial term {i}")));
            }
        }
        Ok(LogPolynomial { terms: out })
    }

    pub fn terms(&self) -> &BTreeMap<u32, TruncatedSeries> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `𝔇(f)`: the top log-power with a nonzero coefficient.
    pub fn growth_order(&self) -> Result<Rational64, SeriesError> {
        self.terms.keys().next_back().map(|&i| Rational64::from(i as i64)).ok_or(SeriesError::ZeroOrder)
    }

    /// The single series `Σ c_i log^i`, tracked to degree `n`.
    pub fn expand(&self, n: usize) -> Result<TruncatedSeries, SeriesError> {
        let (_, first) = self.terms.iter().next().ok_or(SeriesError::ZeroOrder)?;
        let k = first.field();
        let log = TruncatedSeries::log1p(k, n);
        let mut acc = TruncatedSeries::from_parts(k, vec![k.exact_zero(); n + 1], Tail::Zero);
        for (&i, c) in &self.terms {
            if c.trunc() < n && c.tail() != Tail::Zero {
                return Err(SeriesError::Shape(format!("term {i} is tracked only to degree {}", c.trunc())));
            }
            let term = log.pow(i).mul(c).truncate(n);
            acc = acc.add(&term);
        }
        Ok(acc.truncate(n))
    }
}

pub fn growth_order(f: &LogPolynomial) -> Result<Rational64, SeriesError> {
    f.growth_order()
}

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderInterval {
    pub lo: Rational64,
    pub hi: Rational64,
}

impl OrderInterval {
    pub fn contains(&self, x: Rational64) -> bool {
        self.lo <= x && x <= self.hi
    }
    pub fn midpoint(&self) -> Rational64 {
        (self.lo + self.hi) / 2
    }
}

/// Estimate of `𝔇(f)` from the slope of `n ↦ log_p ‖f‖_{ρ_n}` over
/// `n = 1..=n_max`, widened by the largest residual of the fit.
///
/// This is a heuristic for unstructured inputs.
pub fn growth_order_estimate(f: &TruncatedSeries, n_max: u32) -> Result<OrderInterval, SeriesError> {
    if n_max == 0 {
        return Err(SeriesError::Shape("n_max must be positive".into()));
    }
    let ys: Vec<Rational64> = (1..=n_max).map(|n| rho_norm(f, n).map(|r| r.value)).collect::<Result<_, _>>()?;
    if n_max == 1 {
        return Ok(OrderInterval { lo: Rational64::from(0), hi: Rational64::from(0) });
    }
    // value_n = -log_p‖f‖_{ρ_n} and ‖f‖_{ρ_n} grows like p^{n·𝔇}.
    let m = Rational64::from(n_max as i64);
    let xbar = (m + 1) / 2;
    let ybar = ys.iter().copied().sum::<Rational64>() / m;
    let mut sxy = Rational64::from(0);
    let mut sxx = Rational64::from(0);
    for (i, y) in ys.iter().enumerate() {
        let dx = Rational64::from(i as i64 + 1) - xbar;
        sxy += dx * (*y - ybar);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    let half = ys
        .iter()
        .enumerate()
        .map(|(i, y)| {
            let fit = ybar + slope * (Rational64::from(i as i64 + 1) - xbar);
            (*y - fit).abs()
        })
        .max()
        .unwrap();
    let est = -slope;
    Ok(OrderInterval { lo: est - half, hi: est + half })
}

/// `μ = p^s·φ(c1)·c2 / (c1·φ(c2))`, checked to be a constant.
///
/// When `φ(f)/f = μ·φ(g)/g` for `f = log^a c1`, `g = log^b c2` this is the
/// scalar with `s = a - b`.
pub fn phi_quotient_scalar(c1: &TruncatedSeries, c2: &TruncatedSeries, s: i64) -> Result<FieldElement, SeriesError> {
    let n = c1.trunc().min(c2.trunc());
    let num = phi(c1).truncate(n).mul(c2).truncate(n);
    let den = c1.mul(&phi(c2).truncate(n)).truncate(n);
    let q = num.div(&den)?;
    if let Some(index) = q.coeffs().iter().skip(1).position(|a| a.val().is_some()) {
        return Err(SeriesError::NotScalar { index: index + 1 });
    }
    Ok(q.coeffs()[0].shift(s))
}
