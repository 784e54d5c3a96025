//! Test inputs `log^u(1+x)·Σ c_i(x) w_i` with polynomial `c_i`.
//!
//! With `u = -(lowest jump)`, `D^k g` vanishes at every `ζ_{p^n} - 1` for
//! `k < u` and `Fil^{-u}` is the whole space, so every layer condition of
//! `𝒜̃_{0,J}` holds exactly. They are not members in the full sense: the
//! order condition generally fails.

use std::sync::Arc;

use rand::Rng;
use unorm_padic::FieldElement;
use unorm_phimod::FilteredPhiModule;
use unorm_series::TruncatedSeries;

use crate::logterms::LogTerms;
use crate::vector::VectorSeries;
use crate::AnalyticError;

/// The smallest `u ≥ 0` making `log^u·(anything)` satisfy the layer conditions.
pub fn layer_exponent(m: &FilteredPhiModule) -> u32 {
    (-m.min_jump().unwrap_or(0)).max(0) as u32
}

/// `log^u·c·w`.
pub fn log_power_vector(
    m: &Arc<FilteredPhiModule>,
    u: u32,
    c: &TruncatedSeries,
    w: &[FieldElement],
    n: usize,
) -> Result<VectorSeries, AnalyticError> {
    let terms = w.iter().map(|wi| LogTerms::monomial(u, c.scale(wi))).collect();
    VectorSeries::from_log_terms(m, terms, n)
}

/// `log^u·Σ_i c_i e_i` with coordinates given directly.
pub fn log_power_coords(m: &Arc<FilteredPhiModule>, u: u32, cs: &[TruncatedSeries], n: usize) -> Result<VectorSeries, AnalyticError> {
    let terms = cs.iter().map(|c| LogTerms::monomial(u, c.clone())).collect();
    VectorSeries::from_log_terms(m, terms, n)
}

/// A random polynomial `Σ_{a ∈ {1, 2}} λ_a (1+x)^a` with `ψ = 0`.
pub fn random_psi_free<R: Rng>(m: &FilteredPhiModule, rng: &mut R) -> TruncatedSeries {
    let k = m.field();
    let mut acc = TruncatedSeries::polynomial(k, vec![k.exact_zero()]);
    for a in 1..=2 {
        let lam = k.exact_int(rng.gen_range(1..k.p() as i128));
        acc = acc.add(&TruncatedSeries::one_plus_x_pow(k, a, a as usize).scale(&lam));
    }
    acc
}

/// A synthetic member: `log^u` times a random `ψ`-free polynomial vector.
pub fn random_member<R: Rng>(m: &Arc<FilteredPhiModule>, n: usize, rng: &mut R) -> Result<VectorSeries, AnalyticError> {
    let u = layer_exponent(m);
    let cs: Vec<TruncatedSeries> = (0..m.dim()).map(|_| random_psi_free(m, rng)).collect();
    log_power_coords(m, u, &cs, n)
}
