//! Standard modules: modular-form modules, the unit object and the `ℚ_p(1)` analog.

use std::sync::Arc;

use num_rational::Rational64;
use unorm_padic::linalg::Mat;
use unorm_padic::scalar::EXACT;
use unorm_padic::{FieldElement, Padic, UnramifiedField};

use crate::admissible::subspace_invariants;
use crate::module::FilteredPhiModule;
use crate::stable::phi_stable_subspaces;
use crate::PhiModError;

fn ratio(k: &Arc<UnramifiedField>, r: Rational64) -> Result<FieldElement, PhiModError> {
    let x = Padic::from_ratio(k.p(), &(*r.numer()).into(), &(*r.denom()).into(), EXACT)?;
    Ok(k.from_padic(x))
}

/// Dimension 2 with `φ = p^{-(w-1)}·C`, `C` the companion matrix of
/// `X² - a_p X + p^{w-1}`; `Fil` is everything up to `-(w-1)`, then the
/// given line (default `e₁ + e₂`) up to `0`, then zero.
pub fn modular_form_module(
    k: &Arc<UnramifiedField>,
    weight: i64,
    a_p: Rational64,
    line: Option<Vec<FieldElement>>,
) -> Result<FilteredPhiModule, PhiModError> {
    if weight < 2 {
        return Err(PhiModError::Invalid(format!("weight {weight} must be at least 2")));
    }
    let a = ratio(k, a_p)?;
    if a.val().is_some_and(|v| v < 0) {
        return Err(PhiModError::Invalid("a_p must be p-integral".into()));
    }
    let s = weight - 1;
    let phi = Mat::from_rows(
        k,
        vec![vec![k.exact_zero(), k.exact_int(-1)], vec![k.exact_int(1).shift(-s), a.shift(-s)]],
    )?;
    let line = line.unwrap_or_else(|| vec![k.exact_int(1), k.exact_int(1)]);
    if line.len() != 2 {
        return Err(PhiModError::Invalid("filtration line needs two coordinates".into()));
    }
    FilteredPhiModule::new(k, phi, vec![(-s, Mat::identity(k, 2)), (0, Mat::from_cols(k, 2, vec![line]))])
}

/// Dimension 1, `φ = 1`, jump `0`.
pub fn unit_object(k: &Arc<UnramifiedField>) -> FilteredPhiModule {
    FilteredPhiModule::new(k, Mat::identity(k, 1), vec![(0, Mat::identity(k, 1))]).expect("unit object")
}

/// Dimension 1, `φ = p^{-1}`, jump `-1`.
pub fn qp1_analog(k: &Arc<UnramifiedField>) -> FilteredPhiModule {
    unit_object(k).twist(1)
}

/// A one-dimensional stable subspace of smallest `t_N`, as a vector.
pub fn lowest_slope_line(m: &FilteredPhiModule) -> Result<Vec<FieldElement>, PhiModError> {
    let mut best: Option<(i64, Vec<FieldElement>)> = None;
    for s in phi_stable_subspaces(m)?.iter().filter(|s| s.dim() == 1) {
        let t = subspace_invariants(m, s)?.t_n;
        if best.as_ref().is_none_or(|(b, _)| t < *b) {
            best = Some((t, s.basis().col(0)));
        }
    }
    best.map(|(_, v)| v).ok_or_else(|| PhiModError::Unsupported("no stable line".into()))
}

/// Names accepted by [`preset`].
pub const PRESETS: [&str; 5] = ["supersingular", "ordinary", "weight4", "qp1", "ordinary-eigenline"];

/// The shipped examples over `ℚ_5`: supersingular `(5, 2, 0)`, ordinary
/// `(5, 2, 1)`, weight 4 `(5, 4, 0)`, `ℚ_p(1)`, and the ordinary module with
/// its line moved onto the slope `-1` eigenline.
pub fn preset(name: &str, prec: i64) -> Result<FilteredPhiModule, PhiModError> {
    let k = UnramifiedField::qp(5, prec)?;
    let int = Rational64::from_integer;
    match name {
        "supersingular" => modular_form_module(&k, 2, int(0), None),
        "ordinary" => modular_form_module(&k, 2, int(1), None),
        "weight4" => modular_form_module(&k, 4, int(0), None),
        "qp1" => Ok(qp1_analog(&k)),
        "ordinary-eigenline" => {
            let m = modular_form_module(&k, 2, int(1), None)?;
            let line = lowest_slope_line(&m)?;
            modular_form_module(&k, 2, int(1), Some(line))
        }
        _ => Err(PhiModError::Invalid(format!("unknown preset {name:?}; known: {}", PRESETS.join(", ")))),
    }
}
