//! Dense linear algebra over `K` with valuation-pivoted elimination.

use std::fmt;
use std::sync::Arc;

use crate::field::{FieldElement, UnramifiedField};
use crate::PadicError;

/// Default number of guard digits for zero/nonzero decisions.
pub const DEFAULT_GUARD: i64 = 4;

#[derive(Clone)]
pub struct Mat {
    k: Arc<UnramifiedField>,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", (0..self.cols).map(|c| self.get(r, c).clone()).collect::<Vec<_>>())?;
        }
        Ok(())
    }
}

/// Outcome of a zero test on a pivot candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Zero,
    NonZero,
    Ambiguous,
}

/// Classifies `x`: nonzero only with `guard` digits of margin below its
/// precision, zero only when known to `guard` digits above `base`.
pub fn classify(x: &FieldElement, base: i64, guard: i64) -> Verdict {
    match x.val() {
        Some(v) if v < x.prec() - guard => Verdict::NonZero,
        Some(_) => Verdict::Ambiguous,
        None if x.prec() - base >= guard => Verdict::Zero,
        None => Verdict::Ambiguous,
    }
}

/// Reduced row echelon form with the pivot data that certifies the rank.
#[derive(Clone, Debug)]
pub struct Rref {
    pub mat: Mat,
    pub pivots: Vec<usize>,
    /// Smallest `prec - val` over the chosen pivots.
    pub margin: i64,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Kernel basis of the original matrix as columns.
    pub fn kernel(&self) -> Mat {
        let n = self.mat.cols;
        let free: Vec<usize> = (0..n).filter(|c| !self.pivots.contains(c)).collect();
        let k = &self.mat.k;
        let mut out = Mat::zeros(k, n, free.len());
        for (j, &fc) in free.iter().enumerate() {
            out.set(fc, j, k.exact_int(1));
            for (r, &pc) in self.pivots.iter().enumerate() {
                out.set(pc, j, -self.mat.get(r, fc));
            }
        }
        out
    }
}

impl Mat {
    pub fn zeros(k: &Arc<UnramifiedField>, rows: usize, cols: usize) -> Self {
        Mat { k: k.clone(), rows, cols, data: vec![k.exact_zero(); rows * cols] }
    }

    pub fn identity(k: &Arc<UnramifiedField>, n: usize) -> Self {
        let mut m = Self::zeros(k, n, n);
        for i in 0..n {
            m.set(i, i, k.exact_int(1));
        }
        m
    }

    pub fn from_rows(k: &Arc<UnramifiedField>, rows: Vec<Vec<FieldElement>>) -> Result<Self, PadicError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(PadicError::Shape("ragged rows".into()));
        }
        Ok(Mat { k: k.clone(), rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_cols(k: &Arc<UnramifiedField>, rows: usize, cols: Vec<Vec<FieldElement>>) -> Self {
        let mut m = Self::zeros(k, rows, cols.len());
        for (j, col) in cols.into_iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, x) in col.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn field(&self) -> &Arc<UnramifiedField> {
        &self.k
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &FieldElement {
        &self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, x: FieldElement) {
        self.data[r * self.cols + c] = x;
    }

    pub fn col(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row(&self, r: usize) -> Vec<FieldElement> {
        (0..self.cols).map(|c| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<FieldElement>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        Mat::from_cols(&self.k, self.rows, idx.iter().map(|&c| self.col(c)).collect())
    }

    pub fn hcat(&self, o: &Mat) -> Mat {
        assert_eq!(self.rows, o.rows);
        let mut cols = self.columns();
        cols.extend(o.columns());
        Mat::from_cols(&self.k, self.rows, cols)
    }

    pub fn transpose(&self) -> Mat {
        let mut m = Mat::zeros(&self.k, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(c, r, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut m = Mat::zeros(&self.k, self.rows, o.cols);
        for r in 0..self.rows {
            for c in 0..o.cols {
                let mut acc = self.k.exact_zero();
                for i in 0..self.cols {
                    acc = &acc + &(self.get(r, i) * o.get(i, c));
                }
                m.set(r, c, acc);
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = self.k.exact_zero();
                for (i, x) in v.iter().enumerate() {
                    acc = &acc + &(self.get(r, i) * x);
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Mat) -> Mat {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        self.zip(o, |a, b| a - b)
    }

    fn zip(&self, o: &Mat, f: impl Fn(&FieldElement, &FieldElement) -> FieldElement) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            k: self.k.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&FieldElement) -> FieldElement) -> Mat {
        Mat { k: self.k.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, s: &FieldElement) -> Mat {
        self.map(|x| x * s)
    }

    /// Multiplies every entry by `p^k`.
    pub fn shift(&self, k: i64) -> Mat {
        self.map(|x| x.shift(k))
    }

    pub fn sigma_pow(&self, j: i64) -> Mat {
        self.map(|x| x.sigma_pow(j))
    }

    pub fn with_prec(&self, prec: i64) -> Mat {
        self.map(|x| x.with_prec(prec))
    }

    /// Kronecker product.
    pub fn kron(&self, o: &Mat) -> Mat {
        let mut m = Mat::zeros(&self.k, self.rows * o.rows, self.cols * o.cols);
        for a in 0..self.rows {
            for b in 0..self.cols {
                for c in 0..o.rows {
                    for d in 0..o.cols {
                        m.set(a * o.rows + c, b * o.cols + d, self.get(a, b) * o.get(c, d));
                    }
                }
            }
        }
        m
    }

    /// Minimal valuation over nonzero entries (0 for the zero matrix).
    pub fn min_val(&self) -> i64 {
        self.data.iter().filter_map(|x| x.val()).min().unwrap_or(0)
    }

    pub fn min_prec(&self) -> i64 {
        self.data.iter().map(|x| x.prec()).min().unwrap_or(crate::scalar::EXACT)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Row reduction deciding each pivot with `guard` digits of margin.
    pub fn rref(&self, guard: i64) -> Result<Rref, PadicError> {
        self.rref_impl(guard, None)
    }

    /// Row reduction that stops after `rank` pivots, taking the best
    /// candidate at each step. Used when the rank is known a priori.
    pub fn rref_fixed_rank(&self, rank: usize) -> Result<Rref, PadicError> {
        self.rref_impl(0, Some(rank))
    }

    fn rref_impl(&self, guard: i64, fixed: Option<usize>) -> Result<Rref, PadicError> {
        let base = self.min_val();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut margin = i64::MAX;
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows || fixed.is_some_and(|r| pivots.len() == r) {
                break;
            }
            let mut best: Option<(usize, i64)> = None;
            let mut ambiguous = false;
            for r in row..m.rows {
                let x = m.get(r, col);
                let ok = match fixed {
                    Some(_) => x.val().is_some(),
                    None => match classify(x, base, guard) {
                        Verdict::NonZero => true,
                        Verdict::Zero => false,
                        Verdict::Ambiguous => {
                            ambiguous = true;
                            false
                        }
                    },
                };
                if ok {
                    let v = x.val().unwrap();
                    if best.is_none_or(|(_, bv)| v < bv) {
                        best = Some((r, v));
                    }
                }
            }
            let Some((pr, _)) = best else {
                if ambiguous {
                    return Err(PadicError::Precision(format!(
                        "pivot in column {col} is within {guard} digits of the precision limit"
                    )));
                }
                continue;
            };
            for c in 0..m.cols {
                m.data.swap(row * m.cols + c, pr * m.cols + c);
            }
            let pv = m.get(row, col).clone();
            margin = margin.min(pv.prec() - pv.val().unwrap());
            let inv = pv.inv()?;
            for c in col..m.cols {
                let x = m.get(row, c) * &inv;
                m.set(row, c, x);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let fct = m.get(r, col).clone();
                for c in col..m.cols {
                    let t = &fct * m.get(row, c);
                    let x = m.get(r, c) - &t;
                    m.set(r, c, x);
                }
            }
            pivots.push(col);
            row += 1;
        }
        if fixed.is_some_and(|r| pivots.len() < r) {
            return Err(PadicError::Precision("matrix rank below the expected value".into()));
        }
        Ok(Rref { mat: m, pivots, margin })
    }

    pub fn rank(&self, guard: i64) -> Result<usize, PadicError> {
        Ok(self.rref(guard)?.rank())
    }

    pub fn kernel(&self, guard: i64) -> Result<Mat, PadicError> {
        Ok(self.rref(guard)?.kernel())
    }

    /// Kernel of a matrix known to have the given rank.
    pub fn kernel_fixed_rank(&self, rank: usize) -> Result<Mat, PadicError> {
        Ok(self.rref_fixed_rank(rank)?.kernel())
    }

    /// Independent columns spanning the column space (a subset of the columns).
    pub fn column_basis(&self, guard: i64) -> Result<Mat, PadicError> {
        let rr = self.rref(guard)?;
        Ok(self.select_cols(&rr.pivots))
    }

    pub fn det(&self) -> Result<FieldElement, PadicError> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut acc = self.k.exact_int(1);
        for col in 0..n {
            let best = (col..n)
                .filter(|&r| !m.get(r, col).is_zero())
                .min_by_key(|&r| m.get(r, col).val_lb());
            let Some(pr) = best else {
                // Every candidate is zero to its precision; the determinant is too.
                let prec = (col..n).map(|r| m.get(r, col).prec()).min().unwrap();
                return Ok((&acc * &self.k.exact_zero()).with_prec(prec + acc.val_lb()));
            };
            if pr != col {
                for c in 0..n {
                    m.data.swap(col * n + c, pr * n + c);
                }
                acc = -&acc;
            }
            let pv = m.get(col, col).clone();
            acc = &acc * &pv;
            let inv = pv.inv()?;
            for r in col + 1..n {
                if m.get(r, col).is_zero() {
                    continue;
                }
                let fct = m.get(r, col) * &inv;
                for c in col..n {
                    let t = &fct * m.get(col, c);
                    let x = m.get(r, c) - &t;
                    m.set(r, c, x);
                }
            }
        }
        Ok(acc)
    }

    pub fn inverse(&self) -> Result<Mat, PadicError> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = self.hcat(&Mat::identity(&self.k, n));
        let rr = aug.rref(0)?;
        if rr.pivots.len() < n || rr.pivots[..n].iter().enumerate().any(|(i, &c)| c != i) {
            return Err(PadicError::Singular);
        }
        Ok(rr.mat.select_cols(&(n..2 * n).collect::<Vec<_>>()))
    }

    /// Solves `self · x = b` for a consistent system; `None` if inconsistent.
    pub fn solve(&self, b: &[FieldElement], guard: i64) -> Result<Option<Vec<FieldElement>>, PadicError> {
        let bm = Mat::from_cols(&self.k, self.rows, vec![b.to_vec()]);
        let aug = self.hcat(&bm);
        let rr = aug.rref(guard)?;
        if rr.pivots.contains(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![self.k.exact_zero(); self.cols];
        for (r, &c) in rr.pivots.iter().enumerate() {
            x[c] = rr.mat.get(r, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// `i×i` minors indexed by row and column subsets, as used by exterior powers.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<FieldElement, PadicError> {
        let sub: Vec<Vec<FieldElement>> =
            rows.iter().map(|&r| cols.iter().map(|&c| self.get(r, c).clone()).collect()).collect();
        if rows.is_empty() {
            return Ok(self.k.exact_int(1));
        }
        Mat::from_rows(&self.k, sub)?.det()
    }
}

/// Basis of `span(A) ∩ span(B)` for matrices whose columns are independent.
pub fn intersect(a: &Mat, b: &Mat, guard: i64) -> Result<Mat, PadicError> {
    let k = a.field();
    if a.cols() == 0 || b.cols() == 0 {
        return Ok(Mat::zeros(k, a.rows(), 0));
    }
    let ker = a.hcat(&b.map(|x| -x)).kernel(guard)?;
    let top = Mat::from_cols(
        k,
        a.cols(),
        ker.columns().into_iter().map(|c| c[..a.cols()].to_vec()).collect(),
    );
    let vecs = a.mul(&top);
    vecs.column_basis(guard)
}

/// Basis of `span(A) + span(B)`.
pub fn sum(a: &Mat, b: &Mat, guard: i64) -> Result<Mat, PadicError> {
    a.hcat(b).column_basis(guard)
}

/// Whether `span(A) ⊆ span(B)`.
pub fn contained(a: &Mat, b: &Mat, guard: i64) -> Result<bool, PadicError> {
    if a.cols() == 0 {
        return Ok(true);
    }
    let rb = if b.cols() == 0 { 0 } else { b.rank(guard)? };
    Ok(b.hcat(a).rank(guard)? == rb)
}

/// Extends the columns of `s` (independent, inside `span(t)`) to a basis of
/// `span(t)`, returning only the added columns of `t`.
pub fn extend_basis(s: &Mat, t: &Mat, guard: i64) -> Result<Mat, PadicError> {
    let rr = s.hcat(t).rref(guard)?;
    let added: Vec<usize> = rr.pivots.iter().filter(|&&c| c >= s.cols()).map(|&c| c - s.cols()).collect();
    Ok(t.select_cols(&added))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(k: &Arc<UnramifiedField>, rows: &[&[i64]]) -> Mat {
        Mat::from_rows(k, rows.iter().map(|r| r.iter().map(|&x| k.from_i64(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn rank_kernel_det() {
        let k = UnramifiedField::qp(5, 20).unwrap();
        let a = m(&k, &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 5]]);
        assert_eq!(a.rank(4).unwrap(), 2);
        let ker = a.kernel(4).unwrap();
        assert_eq!(ker.cols(), 1);
        assert!(a.mul(&ker).is_zero());
        assert!(a.det().unwrap().is_zero());
        let b = m(&k, &[&[5, 1], &[1, 0]]);
        assert!(b.det().unwrap().eq_at(&k.from_i64(-1)));
        let bi = b.inverse().unwrap();
        assert!(b.mul(&bi).sub(&Mat::identity(&k, 2)).is_zero());
    }

    #[test]
    fn subspace_operations() {
        let k = UnramifiedField::qp(5, 20).unwrap();
        let a = m(&k, &[&[1, 0], &[0, 1], &[0, 0]]);
        let b = m(&k, &[&[1, 0], &[1, 0], &[0, 1]]);
        let i = intersect(&a, &b, 4).unwrap();
        assert_eq!(i.cols(), 1);
        assert!(contained(&i, &a, 4).unwrap() && contained(&i, &b, 4).unwrap());
        assert_eq!(sum(&a, &b, 4).unwrap().cols(), 3);
    }

    #[test]
    fn near_precision_pivot_is_ambiguous() {
        let k = UnramifiedField::qp(5, 20).unwrap();
        let tiny = k.from_i64(5i64.pow(18));
        let a = Mat::from_rows(&k, vec![vec![tiny]]).unwrap();
        assert!(matches!(a.rref(4), Err(PadicError::Precision(_))));
    }
}
