//! Degree inequalities over φ-stable subspaces, with certificates.

use num_rational::Rational64;
use unorm_padic::exec::Exec;

use crate::constructions::tensor_product;
use crate::module::{FilteredPhiModule, Subspace};
use crate::stable::phi_stable_subspaces;
use crate::PhiModError;

/// Degrees of the induced filtered module on a stable subspace.
#[derive(Clone, Debug)]
pub struct SubInvariants {
    pub space: Subspace,
    pub induced: FilteredPhiModule,
    pub t_h: i64,
    pub t_n: i64,
}

impl SubInvariants {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `λ = (t_H - t_N)/d`, undefined on the zero subspace.
    pub fn lambda(&self) -> Option<Rational64> {
        (self.dim() > 0).then(|| Rational64::new(self.t_h - self.t_n, self.dim() as i64))
    }

    pub fn fil_dim(&self, j: i64) -> usize {
        self.induced.fil(j).dim()
    }
}

/// Verdict together with the data of every stable subspace examined.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub holds: bool,
    pub entries: Vec<SubInvariants>,
    /// A violating entry when `holds` is false; for slope bounds, the entry
    /// with the largest slope.
    pub witness: Option<usize>,
}

impl Certificate {
    pub fn witness_entry(&self) -> Option<&SubInvariants> {
        self.witness.map(|i| &self.entries[i])
    }
}

pub fn subspace_invariants(m: &FilteredPhiModule, s: &Subspace) -> Result<SubInvariants, PhiModError> {
    let induced = m.induced_submodule(s)?;
    Ok(SubInvariants { space: s.clone(), t_h: induced.t_h(), t_n: induced.t_n()?, induced })
}

fn all_invariants(m: &FilteredPhiModule) -> Result<Vec<SubInvariants>, PhiModError> {
    let subs = phi_stable_subspaces(m)?;
    Exec::default().map_slice(&subs, |s| subspace_invariants(m, s)).into_iter().collect()
}

/// `t_H = t_N` on `m` and `t_H ≤ t_N` on every stable subspace.
pub fn is_weakly_admissible(m: &FilteredPhiModule) -> Result<Certificate, PhiModError> {
    let entries = all_invariants(m)?;
    let witness = entries
        .iter()
        .position(|e| e.t_h > e.t_n)
        .or_else(|| entries.iter().position(|e| e.dim() == m.dim() && e.t_h != e.t_n));
    Ok(Certificate { holds: witness.is_none(), entries, witness })
}

/// Every nonzero stable `S` with `Fil^j S = 0` has `t_H(S) < t_N(S)`.
pub fn n_condition(m: &FilteredPhiModule, j: i64) -> Result<Certificate, PhiModError> {
    let entries = all_invariants(m)?;
    let witness = entries.iter().position(|e| e.dim() > 0 && e.fil_dim(j) == 0 && e.t_h >= e.t_n);
    Ok(Certificate { holds: witness.is_none(), entries, witness })
}

/// Sum of the stable subspaces with `Fil^0 S = 0` and `t_H(S) = t_N(S)`.
pub fn fil1(m: &FilteredPhiModule) -> Result<Subspace, PhiModError> {
    let k = m.field();
    let entries = all_invariants(m)?;
    let mut acc = Subspace::zero(k, m.dim());
    for e in entries.iter().filter(|e| e.dim() > 0 && e.fil_dim(0) == 0 && e.t_h == e.t_n) {
        acc = acc.sum(&e.space, m.guard())?;
    }
    if acc.dim() == 0 {
        return Ok(acc);
    }
    let inv = subspace_invariants(m, &acc)?;
    if inv.fil_dim(0) != 0 || inv.t_h != inv.t_n {
        return Err(PhiModError::SumNotAdmissible(format!(
            "sum has dim Fil^0 = {}, t_H = {}, t_N = {}",
            inv.fil_dim(0),
            inv.t_h,
            inv.t_n
        )));
    }
    Ok(acc)
}

/// `[K : ℚ_p] · dim Fil¹`.
pub fn universal_norm_rank(m: &FilteredPhiModule) -> Result<usize, PhiModError> {
    Ok(m.field().degree() * fil1(m)?.dim())
}

pub fn slope_lambda(m: &FilteredPhiModule) -> Result<Rational64, PhiModError> {
    if m.dim() == 0 {
        return Err(PhiModError::ZeroModule);
    }
    Ok(Rational64::new(m.t_h() - m.t_n()?, m.dim() as i64))
}

/// `λ(S) ≤ c` (or `< c` when `strict`) for every nonzero stable `S`.
pub fn slope_bound_check(m: &FilteredPhiModule, c: Rational64, strict: bool) -> Result<Certificate, PhiModError> {
    let entries: Vec<SubInvariants> = all_invariants(m)?.into_iter().filter(|e| e.dim() > 0).collect();
    let witness = entries
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.lambda().cmp(&b.1.lambda()).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i);
    let holds = witness.is_none_or(|i| {
        let l = entries[i].lambda().unwrap();
        if strict {
            l < c
        } else {
            l <= c
        }
    });
    Ok(Certificate { holds, entries, witness })
}

/// The largest slope over nonzero stable subspaces.
pub fn max_subspace_slope(m: &FilteredPhiModule) -> Result<Rational64, PhiModError> {
    let cert = slope_bound_check(m, Rational64::from_integer(0), false)?;
    cert.witness_entry().and_then(|e| e.lambda()).ok_or(PhiModError::ZeroModule)
}

/// Checks that `m1 ⊗ m2` has slope `≤ c1 + c2`.
pub fn totaro_check(
    m1: &FilteredPhiModule,
    m2: &FilteredPhiModule,
    c1: Rational64,
    c2: Rational64,
) -> Result<Certificate, PhiModError> {
    let t = tensor_product(m1, m2)?;
    slope_bound_check(&t, c1 + c2, false)
}
