//! Exact sums `Σ c_i log^i(1+x)` with bounded (usually polynomial) `c_i`.
//!
//! These carry the structure of the synthetic inputs, so that `D`, `Φ`,
//! evaluation at `ζ_{p^n} - 1` and log-divisibility can be computed without
//! truncating `log(1+x)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Rational64;
use unorm_padic::{CyclotomicLayer, FieldElement, UnramifiedField};
use unorm_series::ops::{d, phi, psi};
use unorm_series::{cyclotomic_evaluate, Evaluation, LogPolynomial, Tail, TruncatedSeries};

use crate::AnalyticError;

#[derive(Clone, Debug)]
pub struct LogTerms {
    k: Arc<UnramifiedField>,
    terms: BTreeMap<u32, TruncatedSeries>,
}

fn visibly_zero(c: &TruncatedSeries) -> bool {
    c.tail() == Tail::Zero && c.coeffs().iter().all(|a| a.val().is_none())
}

impl LogTerms {
    pub fn zero(k: &Arc<UnramifiedField>) -> Self {
        LogTerms { k: k.clone(), terms: BTreeMap::new() }
    }

    /// `c·log^i`.
    pub fn monomial(i: u32, c: TruncatedSeries) -> Self {
        let mut t = LogTerms::zero(c.field());
        t.push(i, c);
        t
    }

    pub fn from_series(c: TruncatedSeries) -> Self {
        LogTerms::monomial(0, c)
    }

    fn push(&mut self, i: u32, c: TruncatedSeries) {
        let c = match self.terms.remove(&i) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !visibly_zero(&c) {
            self.terms.insert(i, c);
        }
    }

    pub fn field(&self) -> &Arc<UnramifiedField> {
        &self.k
    }

    pub fn terms(&self) -> &BTreeMap<u32, TruncatedSeries> {
        &self.terms
    }

    /// Zero when every coefficient is zero to its precision.
    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&i, c) in &o.terms {
            out.push(i, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LogTerms { k: self.k.clone(), terms: self.terms.iter().map(|(&i, c)| (i, c.neg())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = LogTerms::zero(&self.k);
        for (&i, a) in &self.terms {
            for (&j, b) in &o.terms {
                out.push(i + j, a.mul(b));
            }
        }
        out
    }

    pub fn scale(&self, s: &FieldElement) -> Self {
        let mut out = LogTerms::zero(&self.k);
        for (&i, c) in &self.terms {
            out.push(i, c.scale(s));
        }
        out
    }

    /// `D(c·log^i) = D(c)·log^i + i·c·log^{i-1}`, since `D(log(1+x)) = 1`.
    pub fn d(&self) -> Result<Self, AnalyticError> {
        let mut out = LogTerms::zero(&self.k);
        for (&i, c) in &self.terms {
            out.push(i, d(c)?);
            if i > 0 {
                out.push(i - 1, c.scale(&self.k.exact_int(i as i128)));
            }
        }
        Ok(out)
    }

    /// `φ(c·log^i) = p^i·φ(c)·log^i`.
    pub fn phi(&self) -> Self {
        let mut out = LogTerms::zero(&self.k);
        for (&i, c) in &self.terms {
            out.push(i, phi(c).shift(i as i64));
        }
        out
    }

    /// `ψ(c·log^i) = p^{-i}·ψ(c)·log^i`; zero exactly when every `ψ(c_i)` is.
    pub fn psi_is_zero(&self) -> Result<bool, AnalyticError> {
        for c in self.terms.values() {
            if !psi(c)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Value at `ζ_{p^n} - 1`, where `log(1+x)` vanishes: only `c_0` is left.
    pub fn evaluate(&self, layer: &Arc<CyclotomicLayer>) -> Result<Evaluation, AnalyticError> {
        match self.terms.get(&0) {
            Some(c) => Ok(cyclotomic_evaluate(c, layer)?),
            None => Ok(Evaluation { value: layer.zero(), tail: None }),
        }
    }

    /// Exact order of vanishing along `log(1+x)`: a nonzero bounded series
    /// has finitely many zeros in the open disc, so it is never divisible.
    pub fn log_order(&self) -> Option<u32> {
        self.terms.iter().find(|(_, c)| !c.is_zero()).map(|(&i, _)| i)
    }

    /// Top log-power, the growth order when all coefficients are bounded.
    pub fn growth_order(&self) -> Option<Rational64> {
        self.terms.iter().rev().find(|(_, c)| !c.is_zero()).map(|(&i, _)| Rational64::from(i as i64))
    }

    pub fn to_log_polynomial(&self) -> Result<LogPolynomial, AnalyticError> {
        Ok(LogPolynomial::new(self.terms.iter().map(|(&i, c)| (i, c.clone())))?)
    }

    /// The single series, tracked to degree `n`.
    pub fn expand(&self, n: usize) -> Result<TruncatedSeries, AnalyticError> {
        let mut acc = TruncatedSeries::from_parts(&self.k, vec![self.k.exact_zero(); n + 1], Tail::Zero);
        if self.terms.is_empty() {
            return Ok(acc);
        }
        let log = TruncatedSeries::log1p(&self.k, n);
        for (&i, c) in &self.terms {
            acc = acc.add(&log.pow(i).mul(c).truncate(n));
        }
        Ok(acc.truncate(n))
    }
}
