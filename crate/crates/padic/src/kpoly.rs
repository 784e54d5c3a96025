//! Polynomials over `K`: characteristic polynomials, Newton polygons, roots.

use std::sync::Arc;

use num_rational::Rational64;

use crate::field::{FieldElement, UnramifiedField};
use crate::linalg::Mat;
use crate::residue::ResidueField;
use crate::PadicError;

#[derive(Clone, Debug)]
pub struct KPoly {
    k: Arc<UnramifiedField>,
    /// Lowest degree first.
    c: Vec<FieldElement>,
}

/// A root in `K`. `mult > 1` marks a cluster of roots that agree to the
/// precision of `value` and could not be separated.
#[derive(Clone, Debug)]
pub struct Root {
    pub value: FieldElement,
    pub mult: usize,
}

impl KPoly {
    pub fn new(k: &Arc<UnramifiedField>, c: Vec<FieldElement>) -> Self {
        KPoly { k: k.clone(), c }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.c
    }

    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn field(&self) -> &Arc<UnramifiedField> {
        &self.k
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.k.exact_zero();
        for c in self.c.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `Σ c_i M^i` by Horner.
    pub fn eval_mat(&self, m: &Mat) -> Mat {
        let n = m.rows();
        let mut acc = Mat::zeros(&self.k, n, n);
        let id = Mat::identity(&self.k, n);
        for c in self.c.iter().rev() {
            acc = acc.mul(m).add(&id.scale(c));
        }
        acc
    }

    pub fn derivative(&self) -> KPoly {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, x)| x * &self.k.exact_int(i as i128))
            .collect();
        KPoly::new(&self.k, c)
    }

    pub fn mul(&self, o: &KPoly) -> KPoly {
        if self.c.is_empty() || o.c.is_empty() {
            return KPoly::new(&self.k, vec![]);
        }
        let mut c = vec![self.k.exact_zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        KPoly::new(&self.k, c)
    }

    /// Quotient and remainder on division by `X - r`.
    pub fn div_linear(&self, r: &FieldElement) -> (KPoly, FieldElement) {
        let d = self.degree();
        if self.c.len() < 2 {
            return (KPoly::new(&self.k, vec![]), self.c.first().cloned().unwrap_or(self.k.exact_zero()));
        }
        let mut q = vec![self.k.exact_zero(); d];
        let mut acc = self.c[d].clone();
        for i in (0..d).rev() {
            q[i] = acc.clone();
            acc = &self.c[i] + &(&acc * r);
        }
        (KPoly::new(&self.k, q), acc)
    }

    /// `P(a + X)`.
    pub fn taylor_shift(&self, a: &FieldElement) -> KPoly {
        let mut c = self.c.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = &c[j + 1] * a;
                c[j] = &c[j] + &t;
            }
        }
        KPoly::new(&self.k, c)
    }

    /// `P(p^s X)`.
    pub fn scale_var(&self, s: i64) -> KPoly {
        KPoly::new(&self.k, self.c.iter().enumerate().map(|(i, x)| x.shift(s * i as i64)).collect())
    }

    pub fn shift(&self, s: i64) -> KPoly {
        KPoly::new(&self.k, self.c.iter().map(|x| x.shift(s)).collect())
    }

    /// Valuations of the roots (with multiplicity), from the lower convex hull.
    pub fn newton_slopes(&self) -> Result<Vec<Rational64>, PadicError> {
        Ok(newton_polygon(&self.c)?
            .into_iter()
            .flat_map(|(s, m)| std::iter::repeat_n(s, m))
            .collect())
    }

    /// Roots in `K`, with clusters of unresolved repeated roots reported once.
    pub fn roots(&self) -> Result<Vec<Root>, PadicError> {
        let fq = ResidueField::new(self.k.residue_poly());
        let mut out = Vec::new();
        for (s, _) in newton_polygon(&self.c)? {
            if !s.is_integer() {
                continue;
            }
            let s = s.to_integer();
            let q = normalize(&self.scale_var(s))?;
            for r in integral_roots(&q, &fq, true, 0)? {
                out.push(Root { value: r.value.shift(s), mult: r.mult });
            }
        }
        Ok(out)
    }
}

/// Lower convex hull as (root valuation, multiplicity) pairs, increasing valuation.
pub fn newton_polygon(c: &[FieldElement]) -> Result<Vec<(Rational64, usize)>, PadicError> {
    let d = c.len().checked_sub(1).ok_or_else(|| PadicError::Shape("empty polynomial".into()))?;
    if c[d].val().is_none() {
        return Err(PadicError::Precision("leading coefficient indistinguishable from zero".into()));
    }
    if c[0].val().is_none() {
        return Err(PadicError::Precision("constant coefficient indistinguishable from zero".into()));
    }
    let pts: Vec<(i64, i64)> =
        c.iter().enumerate().filter_map(|(i, x)| x.val().map(|v| (i as i64, v))).collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // Drop b when it lies on or above the segment a..pt.
            if (b.1 - a.1) * (pt.0 - a.0) >= (pt.1 - a.1) * (b.0 - a.0) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    // Coefficients known only as zero to some precision must not undercut the hull.
    for (i, x) in c.iter().enumerate() {
        if x.val().is_some() {
            continue;
        }
        let i = i as i64;
        let w = hull.windows(2).find(|w| w[0].0 <= i && i <= w[1].0).unwrap();
        let (a, b) = (w[0], w[1]);
        let lhs = Rational64::from_integer(x.prec());
        let at = Rational64::from_integer(a.1) + Rational64::new((b.1 - a.1) * (i - a.0), b.0 - a.0);
        if lhs < at {
            return Err(PadicError::Precision(format!(
                "coefficient {i} is not known precisely enough to fix the Newton polygon"
            )));
        }
    }
    Ok(hull
        .windows(2)
        .map(|w| (Rational64::new(w[0].1 - w[1].1, w[1].0 - w[0].0), (w[1].0 - w[0].0) as usize))
        .collect())
}

/// Divides by the minimal coefficient valuation so the reduction is nonzero.
fn normalize(q: &KPoly) -> Result<KPoly, PadicError> {
    let m = q
        .c
        .iter()
        .filter_map(|x| x.val())
        .min()
        .ok_or_else(|| PadicError::Precision("polynomial indistinguishable from zero".into()))?;
    Ok(q.shift(-m))
}

fn reduce(q: &KPoly) -> Option<Vec<Vec<u64>>> {
    let f = q.k.degree();
    q.c.iter()
        .map(|x| match x.val() {
            Some(v) if v >= 1 => Some(vec![0; f]),
            Some(_) => Some(x.residue()),
            None if x.prec() >= 1 => Some(vec![0; f]),
            None => None,
        })
        .collect()
}

fn residue_multiplicity(fq: &ResidueField, c: &[Vec<u64>], y: &[u64]) -> usize {
    // Repeated synthetic division by (X - y) over the residue field.
    let mut cur: Vec<Vec<u64>> = c.to_vec();
    let mut mult = 0;
    loop {
        if cur.len() < 2 {
            return mult;
        }
        let d = cur.len() - 1;
        let mut q = vec![vec![0; y.len()]; d];
        let mut acc = cur[d].clone();
        for i in (0..d).rev() {
            q[i] = acc.clone();
            acc = fq.add(&cur[i], &fq.mul(&acc, y));
        }
        if !fq.is_zero(&acc) {
            return mult;
        }
        mult += 1;
        cur = q;
    }
}

fn integral_roots(q: &KPoly, fq: &ResidueField, units_only: bool, depth: usize) -> Result<Vec<Root>, PadicError> {
    let k = q.k.clone();
    let Some(red) = reduce(q) else {
        return Err(PadicError::Precision("root isolation ran out of precision".into()));
    };
    let mut out = Vec::new();
    for idx in 0..fq.size() {
        let y = fq.element(idx);
        if units_only && fq.is_zero(&y) {
            continue;
        }
        let (v, dv) = fq.eval_with_derivative(&red, &y);
        if !fq.is_zero(&v) {
            continue;
        }
        let x0 = k.lift_residue(&y);
        if !fq.is_zero(&dv) {
            out.push(Root { value: hensel(q, x0)?, mult: 1 });
            continue;
        }
        let mult = residue_multiplicity(fq, &red, &y);
        let r = q.taylor_shift(&x0).scale_var(1);
        let m = r.c.iter().filter_map(|x| x.val()).min();
        // Once the shifted polynomial carries no digit the cluster is unresolved.
        let exhausted = match m {
            None => true,
            Some(m) => r.c.iter().take(mult + 1).any(|x| x.prec() - m < 1),
        };
        if exhausted || depth > 64 {
            let prec = (depth as i64 + 1).min(k.prec());
            out.push(Root { value: x0.with_prec(prec), mult });
            continue;
        }
        let r = normalize(&r)?;
        for sub in integral_roots(&r, fq, false, depth + 1)? {
            out.push(Root { value: &x0 + &sub.value.shift(1), mult: sub.mult });
        }
    }
    Ok(out)
}

/// Newton iteration from a simple residue root; the result's precision is
/// the certified distance to the true root.
fn hensel(q: &KPoly, mut x: FieldElement) -> Result<FieldElement, PadicError> {
    let dq = q.derivative();
    let target = q.k.prec();
    for _ in 0..64 {
        let v = q.eval(&x);
        if v.is_zero() {
            break;
        }
        let d = dq.eval(&x);
        x = &x - &v.checked_div(&d)?;
        if v.val().is_some_and(|vv| vv >= target) {
            break;
        }
    }
    let v = q.eval(&x);
    let dv = dq.eval(&x).val().ok_or(PadicError::IndistinguishableFromZero)?;
    Ok(x.with_prec(v.val_lb() - dv))
}

/// Characteristic polynomial `det(X·I - M)` by Berkowitz (division-free).
pub fn charpoly(m: &Mat) -> KPoly {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let k = m.field().clone();
    // Coefficients highest degree first while building.
    let mut poly = vec![k.exact_int(1)];
    for size in 1..=n {
        let off = n - size;
        let a11 = m.get(off, off).clone();
        // Row R and column C of the trailing block.
        let r: Vec<FieldElement> = (off + 1..n).map(|j| m.get(off, j).clone()).collect();
        let mut col: Vec<FieldElement> = (off + 1..n).map(|i| m.get(i, off).clone()).collect();
        let mut t = vec![k.exact_int(1), -&a11];
        for _ in 0..size.saturating_sub(1) {
            let rc = r.iter().zip(&col).fold(k.exact_zero(), |acc, (a, b)| &acc + &(a * b));
            t.push(-&rc);
            col = (0..col.len())
                .map(|i| {
                    (0..col.len()).fold(k.exact_zero(), |acc, j| &acc + &(m.get(off + 1 + i, off + 1 + j) * &col[j]))
                })
                .collect();
        }
        // Toeplitz product: new[i] = Σ_j t[i-j] poly[j].
        let mut next = vec![k.exact_zero(); size + 1];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, pj) in poly.iter().enumerate() {
                if i >= j && i - j < t.len() {
                    *slot = &*slot + &(&t[i - j] * pj);
                }
            }
        }
        poly = next;
    }
    poly.reverse();
    KPoly::new(&k, poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_matches_trace_det() {
        let k = UnramifiedField::qp(5, 20).unwrap();
        let rows = [[1, 2, 0], [3, 4, 1], [0, 5, 6]];
        let m = Mat::from_rows(&k, rows.iter().map(|r| r.iter().map(|&x| k.from_i64(x)).collect()).collect())
            .unwrap();
        let cp = charpoly(&m);
        let det = m.det().unwrap();
        assert!(cp.coeffs()[3].eq_at(&k.from_i64(1)));
        assert!(cp.coeffs()[2].eq_at(&k.from_i64(-11)));
        assert!(cp.coeffs()[0].eq_at(&-&det));
        assert!(cp.eval_mat(&m).is_zero());
    }

    #[test]
    fn slopes_of_eisenstein_companion() {
        let k = UnramifiedField::qp(5, 20).unwrap();
        let cp = KPoly::new(&k, vec![k.from_i64(5), k.exact_zero(), k.exact_int(1)]);
        assert_eq!(cp.newton_slopes().unwrap(), vec![Rational64::new(1, 2); 2]);
    }

    #[test]
    fn roots_of_split_polynomial() {
        let k = UnramifiedField::with_degree(5, 2, 20).unwrap();
        // (X - 3)(X - 10)(X - 7/5)·5 expanded has roots of valuations 0, 1, -1.
        let lin = |a: FieldElement| KPoly::new(&k, vec![-&a, k.exact_int(1)]);
        let r1 = k.from_i64(3);
        let r2 = k.from_i64(10);
        let r3 = k.from_ratio(7, 5).unwrap();
        let p = lin(r1.clone()).mul(&lin(r2.clone())).mul(&lin(r3.clone()));
        let roots = p.roots().unwrap();
        assert_eq!(roots.len(), 3);
        for r in [r1, r2, r3] {
            assert!(roots.iter().any(|x| x.mult == 1 && x.value.eq_at(&r)), "missing root {r:?}");
        }
        // X^2 - 2 has no roots in Q_5 but splits over the quadratic extension.
        let q = KPoly::new(&k, vec![k.from_i64(-2), k.exact_zero(), k.exact_int(1)]);
        assert_eq!(q.roots().unwrap().len(), 2);
        let kq = UnramifiedField::qp(5, 20).unwrap();
        let q1 = KPoly::new(&kq, vec![kq.from_i64(-2), kq.exact_zero(), kq.exact_int(1)]);
        assert!(q1.roots().unwrap().is_empty());
    }

    #[test]
    fn repeated_root_is_a_cluster() {
        let k = UnramifiedField::qp(5, 12).unwrap();
        let lin = KPoly::new(&k, vec![k.from_i64(-2), k.exact_int(1)]);
        let p = lin.mul(&lin);
        let roots = p.roots().unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].mult, 2);
        assert!(roots[0].value.eq_at(&k.from_i64(2)));
    }
}
