//! Tensor products and exterior powers.

use std::collections::BTreeSet;
use std::sync::Arc;

use unorm_padic::linalg::Mat;
use unorm_padic::FieldElement;

use crate::module::{FilStep, FilteredPhiModule, Subspace};
use crate::PhiModError;

/// Steps `Fil^s = span{v_i : w_i ≥ s}` for weighted independent vectors.
fn weighted_steps(
    k: &Arc<unorm_padic::UnramifiedField>,
    dim: usize,
    vecs: &[Vec<FieldElement>],
    weights: &[i64],
    guard: i64,
) -> Result<Vec<FilStep>, PhiModError> {
    let sums: BTreeSet<i64> = weights.iter().copied().collect();
    let mut steps = Vec::with_capacity(sums.len());
    for s in sums {
        let cols: Vec<Vec<FieldElement>> =
            vecs.iter().zip(weights).filter(|(_, &w)| w >= s).map(|(v, _)| v.clone()).collect();
        steps.push(FilStep { jump: s, space: Subspace::new(Mat::from_cols(k, dim, cols), guard)? });
    }
    Ok(steps)
}

fn kron_vec(a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// `φ₁ ⊗ φ₂` with `Fil^j = Σ_{a+b=j} Fil^a ⊗ Fil^b`.
pub fn tensor_product(m1: &FilteredPhiModule, m2: &FilteredPhiModule) -> Result<FilteredPhiModule, PhiModError> {
    if m1.field() != m2.field() {
        return Err(PhiModError::FieldMismatch);
    }
    let k = m1.field();
    let guard = m1.guard().max(m2.guard());
    let phi = m1.phi().kron(m2.phi());
    let (b1, w1) = m1.adapted_basis()?;
    let (b2, w2) = m2.adapted_basis()?;
    let mut vecs = Vec::new();
    let mut weights = Vec::new();
    for (i, u) in b1.columns().iter().enumerate() {
        for (j, v) in b2.columns().iter().enumerate() {
            vecs.push(kron_vec(u, v));
            weights.push(w1[i] + w2[j]);
        }
    }
    let d = m1.dim() * m2.dim();
    let steps = weighted_steps(k, d, &vecs, &weights, guard)?;
    Ok(FilteredPhiModule::from_parts(k, phi, steps, guard))
}

/// `v`-element subsets of `0..d` in lexicographic order.
pub(crate) fn subsets(d: usize, v: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, d: usize, v: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == v {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            rec(i + 1, d, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, d, v, &mut Vec::with_capacity(v), &mut out);
    out
}

/// `Λ^v M` in the basis `e_I`, `I` increasing.
pub fn wedge_power(m: &FilteredPhiModule, v: usize) -> Result<FilteredPhiModule, PhiModError> {
    let d = m.dim();
    if v == 0 || v > d {
        return Err(PhiModError::Invalid(format!("wedge power {v} outside 1..={d}")));
    }
    let k = m.field();
    let idx = subsets(d, v);
    let n = idx.len();
    let compound = |a: &Mat| -> Result<Mat, PhiModError> {
        let mut c = Mat::zeros(k, n, n);
        for (r, rows) in idx.iter().enumerate() {
            for (col, cols) in idx.iter().enumerate() {
                c.set(r, col, a.minor(rows, cols)?);
            }
        }
        Ok(c)
    };
    let phi = compound(m.phi())?;
    let (b, w) = m.adapted_basis()?;
    let cb = compound(&b)?;
    let weights: Vec<i64> = idx.iter().map(|s| s.iter().map(|&i| w[i]).sum()).collect();
    let steps = weighted_steps(k, n, &cb.columns(), &weights, m.guard())?;
    Ok(FilteredPhiModule::from_parts(k, phi, steps, m.guard()))
}
