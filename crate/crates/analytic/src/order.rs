//! The order `𝔇_φ(g)`: the least `r` with `‖p^{rn}(1⊗φ)^{-n} g‖_{ρ_n}` bounded.

use std::fmt;

use num_rational::Rational64;
use num_traits::Signed;
use unorm_padic::linalg::Mat;
use unorm_padic::FieldElement;
use unorm_phimod::{phi_stable_subspaces, FilteredPhiModule, PhiModError};
use unorm_series::{rho_norm, OrderInterval, Tail, TruncatedSeries};

use crate::logterms::LogTerms;
use crate::vector::VectorSeries;
use crate::AnalyticError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhiOrder {
    /// From a slope decomposition of a structured input.
    Exact(Rational64),
    /// Numeric fit; never used for decisions.
    Estimate { interval: OrderInterval, reason: String },
    /// `g = 0`.
    Zero,
}

impl fmt::Display for PhiOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiOrder::Exact(r) => write!(f, "{r}"),
            PhiOrder::Estimate { interval, .. } => write!(f, "~[{}, {}]", interval.lo, interval.hi),
            PhiOrder::Zero => write!(f, "-inf"),
        }
    }
}

/// Slope parts `(slope, basis columns)` whose bases together span the module.
pub fn slope_decomposition(m: &FilteredPhiModule) -> Result<Vec<(Rational64, Mat)>, AnalyticError> {
    let np = m.newton_slopes()?;
    let mult = np.multiplicities();
    let d = m.dim();
    if mult.len() == 1 {
        return Ok(vec![(mult[0].0, Mat::identity(m.field(), d))]);
    }
    let stable = phi_stable_subspaces(m)?;
    let mut parts = Vec::new();
    for (s, k) in mult {
        let mut found = None;
        for sub in stable.iter().filter(|x| x.dim() == k) {
            let ind = m.induced_submodule(sub)?;
            if ind.newton_slopes()?.slopes.iter().all(|&t| t == s) {
                found = Some(sub.basis().clone());
                break;
            }
        }
        match found {
            Some(b) => parts.push((s, b)),
            None => return Err(PhiModError::Unsupported(format!("no stable part of slope {s}")).into()),
        }
    }
    Ok(parts)
}

/// Exact via the slope decomposition when `g` carries its log-polynomial
/// structure, otherwise a fit of `log_p ‖A^{-n} g‖_{ρ_n}` over `n = 1..=n_max`
/// (`f = 1` only).
pub fn phi_growth_order(g: &VectorSeries, n_max: u32) -> Result<PhiOrder, AnalyticError> {
    if g.is_zero() {
        return Ok(PhiOrder::Zero);
    }
    let m = g.module();
    if let Some(s) = g.structure() {
        match slope_decomposition(m) {
            Ok(parts) => return exact_order(&parts, s).map(PhiOrder::Exact),
            Err(AnalyticError::PhiMod(PhiModError::Unsupported(why))) => return estimate(g, n_max, why),
            Err(e) => return Err(e),
        }
    }
    estimate(g, n_max, "no log-polynomial structure".into())
}

fn exact_order(parts: &[(Rational64, Mat)], s: &[LogTerms]) -> Result<Rational64, AnalyticError> {
    let k = s[0].field().clone();
    let cols: Vec<Vec<FieldElement>> = parts.iter().flat_map(|(_, b)| b.columns()).collect();
    let d = s.len();
    let p = Mat::from_cols(&k, d, cols);
    let pinv = p.inverse()?;
    let mut best: Option<Rational64> = None;
    let mut col = 0;
    for (slope, b) in parts {
        for _ in 0..b.cols() {
            let y = (0..d).fold(LogTerms::zero(&k), |acc, i| acc.add(&s[i].scale(pinv.get(col, i))));
            if let Some(o) = y.growth_order() {
                let v = *slope + o;
                best = Some(best.map_or(v, |b| b.max(v)));
            }
            col += 1;
        }
    }
    best.ok_or(AnalyticError::Series(unorm_series::SeriesError::ZeroOrder))
}

fn estimate(g: &VectorSeries, n_max: u32, reason: String) -> Result<PhiOrder, AnalyticError> {
    let m = g.module();
    if m.field().degree() != 1 {
        return Err(AnalyticError::Unsupported(format!("order estimate needs f = 1 ({reason})")));
    }
    if n_max < 2 {
        return Err(AnalyticError::Unsupported("order estimate needs n_max >= 2".into()));
    }
    let k = m.field();
    let ainv = m.phi().inverse()?;
    let mut cur: Vec<TruncatedSeries> = g.comps().to_vec();
    let mut ys = Vec::new();
    for n in 1..=n_max {
        cur = (0..cur.len())
            .map(|r| {
                let n0 = cur[0].trunc();
                cur.iter().enumerate().fold(
                    TruncatedSeries::from_parts(k, vec![k.exact_zero(); n0 + 1], Tail::Zero),
                    |acc, (c, x)| acc.add(&x.scale(ainv.get(r, c))),
                )
            })
            .collect();
        let mut best: Option<Rational64> = None;
        for c in &cur {
            if let Ok(r) = rho_norm(c, n) {
                best = Some(best.map_or(r.value, |b| b.min(r.value)));
            }
        }
        ys.push(best.ok_or_else(|| AnalyticError::Unsupported("no certified norm".into()))?);
    }
    Ok(PhiOrder::Estimate { interval: fit(&ys), reason })
}

/// Least-squares slope of `-y_n` against `n`, widened by the largest residual.
fn fit(ys: &[Rational64]) -> OrderInterval {
    let m = Rational64::from(ys.len() as i64);
    let xbar = (m + 1) / 2;
    let ybar = ys.iter().copied().sum::<Rational64>() / m;
    let (mut sxy, mut sxx) = (Rational64::from(0), Rational64::from(0));
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
            (*y - ybar - slope * (Rational64::from(i as i64 + 1) - xbar)).abs()
        })
        .max()
        .unwrap();
    OrderInterval { lo: -slope - half, hi: -slope + half }
}
