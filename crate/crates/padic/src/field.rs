use std::any::Any;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use num_rational::Rational64;

use crate::residue::{rabin_irreducible, FpPoly};
use crate::scalar::{max_rel, Padic};
use crate::PadicError;

/// Default absolute precision exponent.
pub const DEFAULT_PREC: i64 = 20;

/// Memo table for derived data that is expensive to rebuild (substitution
/// tables, products over cyclotomic layers). Entries never change once set.
#[derive(Default)]
pub struct Memo {
    map: Mutex<HashMap<String, Arc<dyn Any + Send + Sync>>>,
}

impl Memo {
    pub fn get_or_insert<T, F>(&self, key: &str, build: F) -> Arc<T>
    where
        T: Any + Send + Sync,
        F: FnOnce() -> T,
    {
        if let Some(v) = self.map.lock().unwrap().get(key) {
            if let Ok(t) = v.clone().downcast::<T>() {
                return t;
            }
        }
        let built = Arc::new(build());
        self.map
            .lock()
            .unwrap()
            .entry(key.to_string())
            .or_insert_with(|| built.clone() as Arc<dyn Any + Send + Sync>)
            .clone()
            .downcast::<T>()
            .unwrap_or(built)
    }
}

impl Memo {
    /// Like [`Memo::get_or_insert`], but rebuilds when the cached value does
    /// not satisfy `covers` (tables that grow with the requested degree).
    pub fn get_or_grow<T, C, F>(&self, key: &str, covers: C, build: F) -> Arc<T>
    where
        T: Any + Send + Sync,
        C: Fn(&T) -> bool,
        F: FnOnce() -> T,
    {
        if let Some(v) = self.map.lock().unwrap().get(key) {
            if let Ok(t) = v.clone().downcast::<T>() {
                if covers(&t) {
                    return t;
                }
            }
        }
        let built = Arc::new(build());
        self.map.lock().unwrap().insert(key.to_string(), built.clone() as Arc<dyn Any + Send + Sync>);
        built
    }
}

/// The unramified extension `K = ℚ_p[t]/(P(t))` of degree `f`.
pub struct UnramifiedField {
    p: u32,
    f: usize,
    prec: i64,
    /// Non-leading coefficients `c_0..c_{f-1}` of the monic defining polynomial.
    defpoly: Vec<Padic>,
    defpoly_int: Vec<i64>,
    /// `sigma_pow[k][i]` are the coordinates of `σ^k(t^i)`.
    sigma_pow: Vec<Vec<Vec<Padic>>>,
    pub memo: Memo,
}

impl fmt::Debug for UnramifiedField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K(p={}, f={}, P={:?}, m={})", self.p, self.f, self.defpoly_int, self.prec)
    }
}

impl PartialEq for UnramifiedField {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.f == o.f && self.defpoly_int == o.defpoly_int
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl UnramifiedField {
    /// `ℚ_p` itself.
    pub fn qp(p: u32, prec: i64) -> Result<Arc<Self>, PadicError> {
        Self::new(p, &[0], prec)
    }

    /// Degree-`f` extension with the first irreducible polynomial found in a
    /// fixed search order.
    pub fn with_degree(p: u32, f: usize, prec: i64) -> Result<Arc<Self>, PadicError> {
        if f == 1 {
            return Self::qp(p, prec);
        }
        let poly = FpPoly::first_irreducible(p, f);
        let coeffs: Vec<i64> = poly.iter().map(|&c| c as i64).collect();
        Self::new(p, &coeffs, prec)
    }

    /// `defpoly` lists `c_0..c_{f-1}` of the monic polynomial `t^f + Σ c_i t^i`.
    pub fn new(p: u32, defpoly: &[i64], prec: i64) -> Result<Arc<Self>, PadicError> {
        if p == 2 || !is_prime(p) {
            return Err(PadicError::InvalidPrime(p));
        }
        let f = defpoly.len();
        if f == 0 {
            return Err(PadicError::Construction("empty defining polynomial".into()));
        }
        if prec <= 0 || prec > max_rel(p) - 4 {
            return Err(PadicError::Construction(format!(
                "precision {prec} outside 1..={} for p = {p}",
                max_rel(p) - 4
            )));
        }
        let mut red: Vec<u64> =
            defpoly.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
        red.push(1);
        if !rabin_irreducible(&FpPoly::new(p, red)) {
            return Err(PadicError::Construction(format!(
                "defining polynomial {:?} is reducible mod {p}",
                defpoly
            )));
        }
        let dp: Vec<Padic> = defpoly.iter().map(|&c| Padic::exact(p, c as i128)).collect();
        let mut k = UnramifiedField {
            p,
            f,
            prec,
            defpoly: dp,
            defpoly_int: defpoly.to_vec(),
            sigma_pow: Vec::new(),
            memo: Memo::default(),
        };
        k.sigma_pow = vec![identity(p, f)];
        if f > 1 {
            let theta = k.lift_frobenius()?;
            let mut powers = vec![unit_vec(p, f, 0)];
            for i in 1..f {
                powers.push(k.mul_raw(&powers[i - 1], &theta));
            }
            k.sigma_pow.push(powers);
            for j in 2..f {
                let prev = k.sigma_pow[j - 1].clone();
                let s1 = k.sigma_pow[1].clone();
                // σ^j(t^i) = σ(σ^{j-1}(t^i)) with σ applied Q_p-linearly through s1.
                let next: Vec<Vec<Padic>> =
                    prev.iter().map(|v| apply_matrix(&s1, v, p, f)).collect();
                k.sigma_pow.push(next);
            }
            let back: Vec<Vec<Padic>> = (0..f)
                .map(|i| apply_matrix(&k.sigma_pow[1], &k.sigma_pow[f - 1][i], p, f))
                .collect();
            for (i, v) in back.iter().enumerate() {
                let e = unit_vec(p, f, i);
                if !v.iter().zip(&e).all(|(a, b)| a.eq_at(b)) {
                    return Err(PadicError::Construction("sigma^f is not the identity".into()));
                }
            }
        }
        Ok(Arc::new(k))
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }
    #[inline]
    pub fn degree(&self) -> usize {
        self.f
    }
    #[inline]
    pub fn prec(&self) -> i64 {
        self.prec
    }
    pub fn defpoly(&self) -> &[i64] {
        &self.defpoly_int
    }

    /// Internal working precision for derived exact data.
    pub fn internal_prec(&self) -> i64 {
        max_rel(self.p) - 2
    }

    fn mul_raw(&self, a: &[Padic], b: &[Padic]) -> Vec<Padic> {
        let f = self.f;
        let p = self.p;
        let z = Padic::zero(p, crate::scalar::EXACT);
        let mut prod = vec![z; 2 * f - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() && x.prec() >= crate::scalar::EXACT {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = prod[i + j] + *x * *y;
            }
        }
        for d in (f..2 * f - 1).rev() {
            let c = prod[d];
            for i in 0..f {
                prod[d - f + i] = prod[d - f + i] - c * self.defpoly[i];
            }
        }
        prod.truncate(f);
        prod
    }

    /// Newton iteration for the root of `P` congruent to `t^p`.
    fn lift_frobenius(&self) -> Result<Vec<Padic>, PadicError> {
        let p = self.p;
        let f = self.f;
        let ip = self.internal_prec();
        let t = unit_vec(p, f, 1.min(f - 1));
        let mut theta = unit_vec(p, f, 0);
        for _ in 0..p {
            theta = self.mul_raw(&theta, &t);
        }
        let eval = |x: &[Padic]| -> (Vec<Padic>, Vec<Padic>) {
            // Horner for P and P'.
            let mut v = unit_vec(p, f, 0);
            let mut d = vec![Padic::zero(p, ip); f];
            for i in (0..f).rev() {
                d = add_vec(&self.mul_raw(&d, x), &v);
                v = self.mul_raw(&v, x);
                v[0] = v[0] + self.defpoly[i];
            }
            (v, d)
        };
        for _ in 0..64 {
            let (v, d) = eval(&theta);
            if v.iter().all(|c| c.is_zero() || c.val_lb() >= ip) {
                return Ok(theta.into_iter().map(|c| c.with_prec(ip)).collect());
            }
            let dinv = self.solve_inverse(&d)?;
            let step = self.mul_raw(&v, &dinv);
            theta = theta.iter().zip(&step).map(|(a, b)| (*a - *b).with_prec(ip)).collect();
        }
        Err(PadicError::Construction("Frobenius lift did not converge".into()))
    }

    /// Inverse by solving `M_a y = 1` for the multiplication matrix of `a`.
    fn solve_inverse(&self, a: &[Padic]) -> Result<Vec<Padic>, PadicError> {
        let f = self.f;
        let p = self.p;
        let cols: Vec<Vec<Padic>> = (0..f).map(|j| self.mul_raw(a, &unit_vec(p, f, j))).collect();
        let mut m: Vec<Vec<Padic>> =
            (0..f).map(|i| (0..f).map(|j| cols[j][i]).collect()).collect();
        let mut rhs = unit_vec(p, f, 0);
        solve_dense(&mut m, &mut rhs)?;
        Ok(rhs)
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement { k: self.clone(), c: vec![Padic::zero(self.p, self.prec); self.f] }
    }

    /// The exact zero (precision does not limit sums).
    pub fn exact_zero(self: &Arc<Self>) -> FieldElement {
        FieldElement { k: self.clone(), c: vec![Padic::zero(self.p, crate::scalar::EXACT); self.f] }
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.from_padic(Padic::one(self.p, self.prec))
    }

    pub fn exact_int(self: &Arc<Self>, n: i128) -> FieldElement {
        self.from_padic(Padic::exact(self.p, n))
    }

    pub fn from_i64(self: &Arc<Self>, n: i64) -> FieldElement {
        self.from_padic(Padic::from_i64(self.p, n, self.prec))
    }

    pub fn from_ratio(self: &Arc<Self>, n: i64, d: i64) -> Result<FieldElement, PadicError> {
        let x = Padic::from_ratio(self.p, &n.into(), &d.into(), self.prec)?;
        Ok(self.from_padic(x))
    }

    pub fn from_padic(self: &Arc<Self>, x: Padic) -> FieldElement {
        let mut c = vec![Padic::zero(self.p, crate::scalar::EXACT); self.f];
        c[0] = x;
        FieldElement { k: self.clone(), c }
    }

    pub fn from_coords(self: &Arc<Self>, c: Vec<Padic>) -> Result<FieldElement, PadicError> {
        if c.len() != self.f {
            return Err(PadicError::Shape(format!("expected {} coordinates, got {}", self.f, c.len())));
        }
        Ok(FieldElement { k: self.clone(), c })
    }

    /// The generator `t`.
    pub fn gen(self: &Arc<Self>) -> FieldElement {
        if self.f == 1 {
            return self.exact_zero();
        }
        FieldElement { k: self.clone(), c: unit_vec(self.p, self.f, 1) }
    }

    /// `σ(t)`, stored at construction.
    pub fn frobenius_image(self: &Arc<Self>) -> FieldElement {
        self.gen().sigma()
    }

    /// Lift of a residue-field element given by its coordinates mod `p`.
    pub fn lift_residue(self: &Arc<Self>, r: &[u64]) -> FieldElement {
        let c = r.iter().map(|&x| Padic::exact(self.p, x as i128)).collect();
        FieldElement { k: self.clone(), c }
    }

    /// Residue field size.
    pub fn residue_size(&self) -> u64 {
        (self.p as u64).pow(self.f as u32)
    }

    pub fn residue_poly(&self) -> FpPoly {
        let mut red: Vec<u64> =
            self.defpoly_int.iter().map(|&c| c.rem_euclid(self.p as i64) as u64).collect();
        red.push(1);
        FpPoly::new(self.p, red)
    }
}

fn identity(p: u32, f: usize) -> Vec<Vec<Padic>> {
    (0..f).map(|i| unit_vec(p, f, i)).collect()
}

fn unit_vec(p: u32, f: usize, i: usize) -> Vec<Padic> {
    let mut v = vec![Padic::zero(p, crate::scalar::EXACT); f];
    v[i] = Padic::exact(p, 1);
    v
}

fn add_vec(a: &[Padic], b: &[Padic]) -> Vec<Padic> {
    a.iter().zip(b).map(|(x, y)| *x + *y).collect()
}

/// `Σ_i v_i * cols[i]`.
fn apply_matrix(cols: &[Vec<Padic>], v: &[Padic], p: u32, f: usize) -> Vec<Padic> {
    let mut out = vec![Padic::zero(p, crate::scalar::EXACT); f];
    for (i, x) in v.iter().enumerate() {
        for j in 0..f {
            out[j] = out[j] + *x * cols[i][j];
        }
    }
    out
}

/// Gaussian elimination with minimal-valuation pivoting, in place.
pub(crate) fn solve_dense(m: &mut [Vec<Padic>], rhs: &mut [Padic]) -> Result<(), PadicError> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n)
            .filter(|&r| !m[r][col].is_zero())
            .min_by_key(|&r| m[r][col].val_lb())
            .ok_or(PadicError::Singular)?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        let inv = m[col][col].inv()?;
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let fct = m[r][col] * inv;
            for c in col..n {
                let t = fct * m[col][c];
                m[r][c] = m[r][c] - t;
            }
            rhs[r] = rhs[r] - fct * rhs[col];
        }
    }
    for i in 0..n {
        rhs[i] = rhs[i] * m[i][i].inv()?;
    }
    Ok(())
}

/// An element of `K` in the power basis.
#[derive(Clone)]
pub struct FieldElement {
    k: Arc<UnramifiedField>,
    c: Vec<Padic>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.len() == 1 {
            write!(f, "{}", self.c[0])
        } else {
            write!(f, "{:?}", self.c)
        }
    }
}

impl FieldElement {
    #[inline]
    pub fn field(&self) -> &Arc<UnramifiedField> {
        &self.k
    }
    #[inline]
    pub fn coords(&self) -> &[Padic] {
        &self.c
    }
    pub fn into_coords(self) -> Vec<Padic> {
        self.c
    }
    pub fn p(&self) -> u32 {
        self.k.p
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// Minimal coordinate valuation (exact for unramified `K`).
    pub fn val(&self) -> Option<i64> {
        self.c.iter().filter_map(|x| x.val()).min()
    }

    /// Valuation lower bound: the valuation, or the precision for a zero.
    pub fn val_lb(&self) -> i64 {
        self.val().unwrap_or_else(|| self.prec())
    }

    pub fn prec(&self) -> i64 {
        self.c.iter().map(|x| x.prec()).min().unwrap()
    }

    pub fn with_prec(&self, prec: i64) -> Self {
        FieldElement { k: self.k.clone(), c: self.c.iter().map(|x| x.with_prec(prec)).collect() }
    }

    pub fn shift(&self, k: i64) -> Self {
        FieldElement { k: self.k.clone(), c: self.c.iter().map(|x| x.shift(k)).collect() }
    }

    pub fn scale(&self, s: &Padic) -> Self {
        FieldElement { k: self.k.clone(), c: self.c.iter().map(|x| *x * *s).collect() }
    }

    pub fn eq_at(&self, o: &Self) -> bool {
        (self - o).is_zero()
    }

    /// The element lies in `ℚ_p` (all non-constant coordinates vanish).
    pub fn in_qp(&self) -> bool {
        self.c[1..].iter().all(|x| x.is_zero())
    }

    pub fn sigma_pow(&self, j: i64) -> Self {
        let f = self.k.f;
        let j = j.rem_euclid(f as i64) as usize;
        if j == 0 {
            return self.clone();
        }
        let c = apply_matrix(&self.k.sigma_pow[j], &self.c, self.k.p, f);
        FieldElement { k: self.k.clone(), c }
    }

    pub fn sigma(&self) -> Self {
        self.sigma_pow(1)
    }

    pub fn sigma_inv(&self) -> Self {
        self.sigma_pow(-1)
    }

    pub fn inv(&self) -> Result<Self, PadicError> {
        if self.is_zero() {
            return Err(PadicError::DivisionByZero);
        }
        if self.k.f == 1 {
            return Ok(self.k.from_padic(self.c[0].inv()?));
        }
        let v = self.val().unwrap();
        let scaled: Vec<Padic> = self.c.iter().map(|x| x.shift(-v)).collect();
        let inv = self.k.solve_inverse(&scaled)?;
        Ok(FieldElement { k: self.k.clone(), c: inv }.shift(-v))
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, PadicError> {
        Ok(self * &o.inv()?)
    }

    /// Norm `N_{K/ℚ_p}`.
    pub fn norm(&self) -> Padic {
        let mut acc = self.clone();
        for j in 1..self.k.f {
            acc = &acc * &self.sigma_pow(j as i64);
        }
        acc.c[0]
    }

    /// Residue coordinates for an integral element.
    pub fn residue(&self) -> Vec<u64> {
        self.c.iter().map(|x| x.residue() as u64).collect()
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.k.exact_int(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn val_rational(&self) -> Option<Rational64> {
        self.val().map(Rational64::from_integer)
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        FieldElement { k: self.k.clone(), c: add_vec(&self.c, &o.c) }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        FieldElement { k: self.k.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| *a - *b).collect() }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        if self.k.f == 1 {
            return FieldElement { k: self.k.clone(), c: vec![self.c[0] * o.c[0]] };
        }
        FieldElement { k: self.k.clone(), c: self.k.mul_raw(&self.c, &o.c) }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { k: self.k.clone(), c: self.c.iter().map(|x| -*x).collect() }
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, o: FieldElement) -> FieldElement {
        &self + &o
    }
}
impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, o: FieldElement) -> FieldElement {
        &self - &o
    }
}
impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, o: FieldElement) -> FieldElement {
        &self * &o
    }
}
impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qp_sigma_is_identity() {
        let k = UnramifiedField::qp(5, 20).unwrap();
        let a = k.from_i64(7);
        assert!(a.sigma().eq_at(&a));
    }

    #[test]
    fn quadratic_frobenius_lifts_t_to_the_p() {
        let k = UnramifiedField::with_degree(5, 2, 20).unwrap();
        let t = k.gen();
        let s = t.sigma();
        let tp = t.pow(5);
        assert!((&s - &tp).val_lb() >= 1);
        assert!(s.sigma().eq_at(&t));
    }

    #[test]
    fn reducible_defpoly_is_rejected() {
        // t^2 - 1 = (t - 1)(t + 1) mod 5
        assert!(UnramifiedField::new(5, &[-1, 0], 20).is_err());
        assert!(UnramifiedField::new(9, &[0], 20).is_err());
        assert!(UnramifiedField::new(2, &[0], 20).is_err());
    }

    #[test]
    fn inverse_and_norm() {
        let k = UnramifiedField::with_degree(3, 3, 20).unwrap();
        let t = k.gen();
        let a = &(&t * &t) + &k.from_i64(3);
        let ai = a.inv().unwrap();
        assert!((&a * &ai).eq_at(&k.one()));
        let n = a.norm();
        assert!(n.eq_at(&(a.norm())));
    }
}
