//! Enumeration of φ-stable subspaces through a primary decomposition of the
//! linear map `φ^f`.

use unorm_padic::exec::Exec;
use unorm_padic::kpoly::{charpoly, KPoly};
use unorm_padic::linalg::Mat;
use unorm_padic::{FieldElement, PadicError};

use crate::module::{FilteredPhiModule, Subspace};
use crate::PhiModError;

/// Combinations beyond this count are refused rather than enumerated.
const MAX_CANDIDATES: usize = 1 << 12;

/// A primary component of `φ^f` with its invariant subspaces.
enum Block {
    /// Invariant subspaces of the component are `0` and the component.
    Simple(Mat),
    /// A cyclic generalized eigenspace: `levels[i] = ker (B - λ)^{i+1}`.
    Chain(Vec<Mat>),
}

impl Block {
    fn choices(&self) -> usize {
        match self {
            Block::Simple(_) => 2,
            Block::Chain(l) => l.len() + 1,
        }
    }

    fn pick(&self, c: usize) -> Option<&Mat> {
        match (self, c) {
            (_, 0) => None,
            (Block::Simple(m), _) => Some(m),
            (Block::Chain(l), c) => Some(&l[c - 1]),
        }
    }
}

fn blocks(m: &FilteredPhiModule) -> Result<Vec<Block>, PhiModError> {
    let d = m.dim();
    let k = m.field();
    let b = m.linearized_frobenius();
    let cp = charpoly(&b);
    let id = Mat::identity(k, d);
    let mut out = Vec::new();
    let mut rest = cp.clone();
    for root in cp.roots()? {
        let shifted = b.sub(&id.scale(&root.value));
        for _ in 0..root.mult {
            let (q, _) = rest.div_linear(&root.value);
            rest = q;
        }
        if root.mult == 1 {
            out.push(Block::Simple(shifted.kernel_fixed_rank(d - 1)?));
            continue;
        }
        if d > 3 {
            return Err(PhiModError::Unsupported(format!(
                "repeated eigenvalue of multiplicity {} in dimension {d}",
                root.mult
            )));
        }
        let r = shifted.rank(m.guard())?;
        if r != d - 1 {
            return Err(PhiModError::Unsupported(format!(
                "eigenvalue of multiplicity {} with a {}-dimensional eigenspace",
                root.mult,
                d - r
            )));
        }
        let mut levels = Vec::with_capacity(root.mult);
        let mut pow = id.clone();
        for i in 1..=root.mult {
            pow = pow.mul(&shifted);
            levels.push(pow.kernel_fixed_rank(d - i)?);
        }
        out.push(Block::Chain(levels));
    }
    let deg = rest.degree();
    if deg > 0 {
        if deg > 3 {
            return Err(PhiModError::Unsupported(format!(
                "a factor of degree {deg} without roots in K may be reducible"
            )));
        }
        // No roots in K and degree at most 3: the factor is irreducible.
        let g = KPoly::new(k, rest.coeffs().to_vec());
        out.push(Block::Simple(g.eval_mat(&b).kernel_fixed_rank(d - deg)?));
    }
    Ok(out)
}

/// All φ-stable subspaces of `m`, from `0` up to the full space.
///
/// Supported when the characteristic polynomial of `φ^f` splits into
/// distinct linear factors and at most one rootless factor of degree `≤ 3`,
/// or when `d ≤ 3` and each repeated eigenvalue has a cyclic eigenspace.
pub fn phi_stable_subspaces(m: &FilteredPhiModule) -> Result<Vec<Subspace>, PhiModError> {
    let d = m.dim();
    let k = m.field();
    if d == 0 {
        return Ok(vec![Subspace::zero(k, 0)]);
    }
    let bl = blocks(m)?;
    let total = bl.iter().try_fold(1usize, |acc, b| acc.checked_mul(b.choices()).filter(|&t| t <= MAX_CANDIDATES));
    let Some(total) = total else {
        return Err(PhiModError::Unsupported("too many invariant subspaces to enumerate".into()));
    };
    let found = Exec::default().map_range(total, |idx| -> Result<Option<Subspace>, PhiModError> {
        let mut rem = idx;
        let mut cols: Vec<Vec<FieldElement>> = Vec::new();
        for b in &bl {
            let c = rem % b.choices();
            rem /= b.choices();
            if let Some(mat) = b.pick(c) {
                cols.extend(mat.columns());
            }
        }
        let n = cols.len();
        let s = Subspace::new(Mat::from_cols(k, d, cols), m.guard())?;
        if s.dim() != n {
            return Err(PhiModError::Padic(PadicError::Precision("primary components are not independent".into())));
        }
        Ok(if m.is_stable(&s)? { Some(s) } else { None })
    });
    let mut out: Vec<Subspace> = Vec::new();
    for r in found {
        if let Some(s) = r? {
            out.push(s);
        }
    }
    out.sort_by_key(|s| s.dim());
    Ok(out)
}
