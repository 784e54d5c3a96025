//! Seedable generators of diagonalizable modules with generic filtrations.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use unorm_padic::linalg::Mat;
use unorm_padic::UnramifiedField;

use crate::admissible::is_weakly_admissible;
use crate::module::FilteredPhiModule;
use crate::PhiModError;

const MAX_TRIES: usize = 200;

/// An integer matrix with unit determinant.
pub fn random_unimodular<R: Rng>(k: &Arc<UnramifiedField>, d: usize, rng: &mut R) -> Mat {
    let bound = (k.p() * k.p()) as i128;
    loop {
        let rows = (0..d).map(|_| (0..d).map(|_| k.exact_int(rng.gen_range(-bound..=bound))).collect()).collect();
        let m = Mat::from_rows(k, rows).unwrap();
        if m.det().ok().and_then(|x| x.val()) == Some(0) {
            return m;
        }
    }
}

/// `φ = P·diag(u_i p^{s_i})·P^{-1}` with distinct units `u_i`, and the
/// filtration `Fil^j = span{q_i : w_i ≥ j}` for a random unimodular `Q`.
pub fn random_module<R: Rng>(
    k: &Arc<UnramifiedField>,
    slopes: &[i64],
    weights: &[i64],
    rng: &mut R,
) -> Result<FilteredPhiModule, PhiModError> {
    let d = slopes.len();
    assert_eq!(d, weights.len());
    let p = k.p() as i128;
    let mut units: Vec<i128> = (1..p * p).filter(|u| u % p != 0).collect();
    units.shuffle(rng);
    let mut diag = Mat::zeros(k, d, d);
    for (i, &s) in slopes.iter().enumerate() {
        diag.set(i, i, k.exact_int(units[i]).shift(s));
    }
    let pm = random_unimodular(k, d, rng);
    let phi = pm.mul(&diag).mul(&pm.inverse()?);
    let q = random_unimodular(k, d, rng);
    let mut w = weights.to_vec();
    w.sort();
    let mut jumps = w.clone();
    jumps.dedup();
    let steps = jumps
        .into_iter()
        .map(|j| {
            let idx: Vec<usize> = (0..d).filter(|&i| w[i] >= j).collect();
            (j, q.select_cols(&idx))
        })
        .collect();
    FilteredPhiModule::new(k, phi, steps)
}

/// Weights below the slopes in the sense of polygons, with equal sums:
/// start from the slopes and move units of weight outward.
pub fn spread_weights<R: Rng>(slopes: &[i64], moves: usize, rng: &mut R) -> Vec<i64> {
    let mut w = slopes.to_vec();
    w.sort();
    let d = w.len();
    if d < 2 {
        return w;
    }
    for _ in 0..moves {
        let a = rng.gen_range(0..d - 1);
        let b = rng.gen_range(a + 1..d);
        w[a] -= 1;
        w[b] += 1;
        w.sort();
    }
    w
}

/// Random integer slopes in `lo..=hi`.
pub fn random_slopes<R: Rng>(d: usize, lo: i64, hi: i64, rng: &mut R) -> Vec<i64> {
    let mut s: Vec<i64> = (0..d).map(|_| rng.gen_range(lo..=hi)).collect();
    s.sort();
    s
}

/// A weakly admissible module of dimension `d`, by rejection.
pub fn random_weakly_admissible<R: Rng>(
    k: &Arc<UnramifiedField>,
    d: usize,
    rng: &mut R,
) -> Result<FilteredPhiModule, PhiModError> {
    for _ in 0..MAX_TRIES {
        let slopes = random_slopes(d, -2, 1, rng);
        let moves = rng.gen_range(0..=2 * d);
        let weights = spread_weights(&slopes, moves, rng);
        let m = random_module(k, &slopes, &weights, rng)?;
        if is_weakly_admissible(&m)?.holds {
            return Ok(m);
        }
    }
    Err(PhiModError::Unsupported("no weakly admissible sample found".into()))
}

/// A module with independent random slopes and weights (not admissible in general).
pub fn random_generic<R: Rng>(
    k: &Arc<UnramifiedField>,
    d: usize,
    rng: &mut R,
) -> Result<FilteredPhiModule, PhiModError> {
    let slopes = random_slopes(d, -2, 2, rng);
    let weights: Vec<i64> = (0..d).map(|_| rng.gen_range(-2..=2)).collect();
    random_module(k, &slopes, &weights, rng)
}
