use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Rational64;
use unorm_padic::kpoly::charpoly;
use unorm_padic::linalg::{contained, extend_basis, intersect, Mat, DEFAULT_GUARD};
use unorm_padic::{FieldElement, UnramifiedField};

use crate::PhiModError;

/// A subspace of `K^d` given by independent basis columns.
#[derive(Clone, Debug)]
pub struct Subspace {
    basis: Mat,
    /// Smallest `prec - val` over the pivots that certified independence.
    margin: i64,
}

impl Subspace {
    /// Keeps an independent subset of the columns of `basis`.
    pub fn new(basis: Mat, guard: i64) -> Result<Self, PhiModError> {
        if basis.cols() == 0 {
            return Ok(Subspace { basis, margin: i64::MAX });
        }
        let rr = basis.rref(guard)?;
        Ok(Subspace { basis: basis.select_cols(&rr.pivots), margin: rr.margin })
    }

    pub fn zero(k: &Arc<UnramifiedField>, d: usize) -> Self {
        Subspace { basis: Mat::zeros(k, d, 0), margin: i64::MAX }
    }

    pub fn full(k: &Arc<UnramifiedField>, d: usize) -> Self {
        Subspace { basis: Mat::identity(k, d), margin: i64::MAX }
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn margin(&self) -> i64 {
        self.margin
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &Subspace, guard: i64) -> Result<bool, PhiModError> {
        if other.dim() > self.dim() {
            return Ok(false);
        }
        Ok(contained(&other.basis, &self.basis, guard)?)
    }

    pub fn same(&self, other: &Subspace, guard: i64) -> Result<bool, PhiModError> {
        Ok(self.dim() == other.dim() && self.contains(other, guard)?)
    }

    pub fn intersect(&self, other: &Subspace, guard: i64) -> Result<Subspace, PhiModError> {
        Subspace::new(intersect(&self.basis, &other.basis, guard)?, guard)
    }

    pub fn sum(&self, other: &Subspace, guard: i64) -> Result<Subspace, PhiModError> {
        Subspace::new(self.basis.hcat(&other.basis), guard)
    }
}

#[derive(Clone, Debug)]
pub struct FilStep {
    pub jump: i64,
    pub space: Subspace,
}

/// Multiplicities `h_j` and the degree `t_H = Σ j·h_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeData {
    pub h: BTreeMap<i64, usize>,
    pub t_h: i64,
}

/// Frobenius slopes with multiplicity, increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub slopes: Vec<Rational64>,
}

impl NewtonPolygon {
    pub fn t_n(&self) -> Rational64 {
        self.slopes.iter().sum()
    }

    pub fn multiplicities(&self) -> Vec<(Rational64, usize)> {
        let mut out: Vec<(Rational64, usize)> = Vec::new();
        for s in &self.slopes {
            match out.last_mut() {
                Some((t, m)) if t == s => *m += 1,
                _ => out.push((*s, 1)),
            }
        }
        out
    }
}

/// `φ(v) = A·σ(v)` on `K^d` with a decreasing filtration.
///
/// `Fil^j` is the space of the first step whose jump is `≥ j`, and `0` past
/// the last jump. The first step is always the full space.
#[derive(Clone, Debug)]
pub struct FilteredPhiModule {
    k: Arc<UnramifiedField>,
    phi: Mat,
    steps: Vec<FilStep>,
    guard: i64,
}

impl FilteredPhiModule {
    /// Validates and builds a module from `(jump, basis)` pairs.
    pub fn new(k: &Arc<UnramifiedField>, phi: Mat, steps: Vec<(i64, Mat)>) -> Result<Self, PhiModError> {
        Self::with_guard(k, phi, steps, DEFAULT_GUARD)
    }

    pub fn with_guard(
        k: &Arc<UnramifiedField>,
        phi: Mat,
        steps: Vec<(i64, Mat)>,
        guard: i64,
    ) -> Result<Self, PhiModError> {
        let d = phi.rows();
        if phi.cols() != d {
            return Err(PhiModError::Invalid(format!("phi is {}x{}, expected square", d, phi.cols())));
        }
        if d == 0 {
            return Err(PhiModError::Invalid("dimension must be positive".into()));
        }
        if phi.det()?.val().is_none() {
            return Err(PhiModError::NotInvertible);
        }
        if steps.is_empty() {
            return Err(PhiModError::Invalid("filtration needs at least one step".into()));
        }
        let mut out: Vec<FilStep> = Vec::with_capacity(steps.len());
        for (i, (jump, b)) in steps.into_iter().enumerate() {
            if b.rows() != d {
                return Err(PhiModError::Invalid(format!("filtration[{i}]: basis has {} rows, expected {d}", b.rows())));
            }
            let space = Subspace::new(b, guard)?;
            if let Some(prev) = out.last() {
                if jump <= prev.jump {
                    return Err(PhiModError::Invalid(format!(
                        "filtration[{i}]: jumps {} and {jump} are not strictly increasing",
                        prev.jump
                    )));
                }
                if space.dim() >= prev.space.dim() || !prev.space.contains(&space, guard)? {
                    return Err(PhiModError::Invalid(format!(
                        "filtration[{i}]: Fil at jump {jump} is not strictly inside Fil at jump {}",
                        prev.jump
                    )));
                }
            } else if space.dim() != d {
                return Err(PhiModError::Invalid(format!(
                    "filtration[0]: the first step (jump {jump}) must be the full space"
                )));
            }
            if space.dim() > 0 {
                out.push(FilStep { jump, space });
            }
        }
        Ok(FilteredPhiModule { k: k.clone(), phi, steps: out, guard })
    }

    /// Trusted constructor for derived modules; drops redundant steps.
    pub(crate) fn from_parts(k: &Arc<UnramifiedField>, phi: Mat, steps: Vec<FilStep>, guard: i64) -> Self {
        FilteredPhiModule { k: k.clone(), phi, steps: normalize_steps(steps), guard }
    }

    /// The zero module on `K^0`.
    pub fn zero(k: &Arc<UnramifiedField>) -> Self {
        FilteredPhiModule { k: k.clone(), phi: Mat::zeros(k, 0, 0), steps: vec![], guard: DEFAULT_GUARD }
    }

    pub fn set_guard(mut self, guard: i64) -> Self {
        self.guard = guard;
        self
    }

    pub fn field(&self) -> &Arc<UnramifiedField> {
        &self.k
    }

    pub fn dim(&self) -> usize {
        self.phi.rows()
    }

    pub fn phi(&self) -> &Mat {
        &self.phi
    }

    pub fn steps(&self) -> &[FilStep] {
        &self.steps
    }

    pub fn guard(&self) -> i64 {
        self.guard
    }

    pub fn jumps(&self) -> Vec<i64> {
        self.steps.iter().map(|s| s.jump).collect()
    }

    pub fn min_jump(&self) -> Option<i64> {
        self.steps.first().map(|s| s.jump)
    }

    pub fn max_jump(&self) -> Option<i64> {
        self.steps.last().map(|s| s.jump)
    }

    pub fn fil(&self, j: i64) -> Subspace {
        match self.steps.iter().find(|s| s.jump >= j) {
            Some(s) => s.space.clone(),
            None => Subspace::zero(&self.k, self.dim()),
        }
    }

    pub fn hodge(&self) -> HodgeData {
        let mut h = BTreeMap::new();
        let mut t_h = 0;
        for (i, s) in self.steps.iter().enumerate() {
            let next = self.steps.get(i + 1).map_or(0, |t| t.space.dim());
            let hj = s.space.dim() - next;
            h.insert(s.jump, hj);
            t_h += s.jump * hj as i64;
        }
        HodgeData { h, t_h }
    }

    pub fn t_h(&self) -> i64 {
        self.hodge().t_h
    }

    /// Hodge jumps with multiplicity, increasing.
    pub fn hodge_weights(&self) -> Vec<i64> {
        self.hodge().h.into_iter().flat_map(|(j, m)| std::iter::repeat_n(j, m)).collect()
    }

    /// `A·σ(A)···σ^{f-1}(A)`, the matrix of the linear map `φ^f`.
    pub fn linearized_frobenius(&self) -> Mat {
        let f = self.k.degree() as i64;
        let mut b = self.phi.clone();
        for i in 1..f {
            b = b.mul(&self.phi.sigma_pow(i));
        }
        b
    }

    pub fn newton_slopes(&self) -> Result<NewtonPolygon, PhiModError> {
        if self.dim() == 0 {
            return Ok(NewtonPolygon { slopes: vec![] });
        }
        let f = self.k.degree() as i64;
        let cp = charpoly(&self.linearized_frobenius());
        let mut slopes: Vec<Rational64> = cp.newton_slopes()?.into_iter().map(|s| s / f).collect();
        slopes.sort();
        Ok(NewtonPolygon { slopes })
    }

    /// `t_N = v_p(det A)`, which equals the sum of the slopes.
    pub fn t_n(&self) -> Result<i64, PhiModError> {
        if self.dim() == 0 {
            return Ok(0);
        }
        self.phi.det()?.val().ok_or(PhiModError::NotInvertible)
    }

    pub fn phi_vec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        let s: Vec<FieldElement> = v.iter().map(|x| x.sigma()).collect();
        self.phi.mul_vec(&s)
    }

    /// Columns `φ(w)` for the columns `w` of `w`.
    pub fn phi_image(&self, w: &Mat) -> Mat {
        self.phi.mul(&w.sigma_pow(1))
    }

    /// Columns `φ^n(w)`.
    pub fn phi_pow_image(&self, w: &Mat, n: usize) -> Mat {
        let mut out = w.clone();
        for _ in 0..n {
            out = self.phi_image(&out);
        }
        out
    }

    pub fn is_stable(&self, s: &Subspace) -> Result<bool, PhiModError> {
        if s.dim() == 0 {
            return Ok(true);
        }
        Ok(contained(&self.phi_image(s.basis()), s.basis(), self.guard)?)
    }

    /// The module `S` with `φ|_S` and `Fil^j S = S ∩ Fil^j`, in the basis of `S`.
    pub fn induced_submodule(&self, s: &Subspace) -> Result<FilteredPhiModule, PhiModError> {
        if s.dim() == 0 {
            return Ok(FilteredPhiModule::zero(&self.k).set_guard(self.guard));
        }
        let b = s.basis();
        let img = self.phi_image(b);
        let mut cols = Vec::with_capacity(s.dim());
        for v in img.columns() {
            match b.solve(&v, self.guard)? {
                Some(x) => cols.push(x),
                None => return Err(PhiModError::NotStable { image: v }),
            }
        }
        let c = Mat::from_cols(&self.k, s.dim(), cols);
        let mut steps = Vec::new();
        for st in &self.steps {
            let w = intersect(b, st.space.basis(), self.guard)?;
            let coords = self.coords_in(b, &w)?;
            steps.push(FilStep { jump: st.jump, space: Subspace::new(coords, self.guard)? });
        }
        Ok(FilteredPhiModule::from_parts(&self.k, c, steps, self.guard))
    }

    fn coords_in(&self, b: &Mat, w: &Mat) -> Result<Mat, PhiModError> {
        let mut cols = Vec::with_capacity(w.cols());
        for v in w.columns() {
            let x = b.solve(&v, self.guard)?.ok_or_else(|| PhiModError::Invalid("vector outside subspace".into()))?;
            cols.push(x);
        }
        Ok(Mat::from_cols(&self.k, b.cols(), cols))
    }

    /// The Tate twist: `φ·p^{-k}` and every jump `j ↦ j - k`.
    pub fn twist(&self, k: i64) -> FilteredPhiModule {
        let steps = self.steps.iter().map(|s| FilStep { jump: s.jump - k, space: s.space.clone() }).collect();
        FilteredPhiModule { k: self.k.clone(), phi: self.phi.shift(-k), steps, guard: self.guard }
    }

    /// Same `φ`, with `Fil^k` replaced by `Fil^{k+1}`.
    pub fn tilde_modification(&self, k: i64) -> Result<FilteredPhiModule, PhiModError> {
        let idx = self.steps.iter().position(|s| s.jump == k).ok_or(PhiModError::NotAJump(k))?;
        let mut steps = self.steps.clone();
        if idx > 0 && steps[idx - 1].jump == k - 1 {
            steps.remove(idx);
        } else {
            steps[idx].jump = k - 1;
        }
        Ok(FilteredPhiModule { k: self.k.clone(), phi: self.phi.clone(), steps, guard: self.guard })
    }

    /// A basis `b_1..b_d` with weights `w_i` such that
    /// `Fil^j = span{b_i : w_i ≥ j}`.
    pub fn adapted_basis(&self) -> Result<(Mat, Vec<i64>), PhiModError> {
        let d = self.dim();
        let mut cur = Mat::zeros(&self.k, d, 0);
        let mut weights = Vec::with_capacity(d);
        for st in self.steps.iter().rev() {
            let add = extend_basis(&cur, st.space.basis(), self.guard)?;
            weights.extend(std::iter::repeat_n(st.jump, add.cols()));
            cur = cur.hcat(&add);
        }
        if cur.cols() != d {
            return Err(PhiModError::Invalid("filtration does not exhaust the space".into()));
        }
        Ok((cur, weights))
    }
}

/// Drops empty steps and steps equal to their successor.
fn normalize_steps(steps: Vec<FilStep>) -> Vec<FilStep> {
    let mut out: Vec<FilStep> = Vec::with_capacity(steps.len());
    for s in steps.into_iter().rev() {
        if s.space.dim() == 0 {
            continue;
        }
        if out.last().is_some_and(|n| n.space.dim() == s.space.dim()) {
            continue;
        }
        out.push(s);
    }
    out.reverse();
    out
}
