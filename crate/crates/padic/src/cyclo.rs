use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};

use crate::field::{FieldElement, UnramifiedField};
use crate::scalar::{Padic, EXACT};
use crate::PadicError;

/// Default cap on the layer index.
pub const DEFAULT_MAX_LAYER: u32 = 3;

/// `K_n = K(μ_{p^n})`, presented by the Eisenstein polynomial `Φ_{p^n}(1+X)`
/// in the uniformizer `π_n = ζ_{p^n} - 1`.
pub struct CyclotomicLayer {
    k: Arc<UnramifiedField>,
    n: u32,
    e: usize,
    /// Non-leading coefficients of the minimal polynomial of `π_n`.
    minpoly: Vec<Padic>,
}

impl fmt::Debug for CyclotomicLayer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K_{}(e={}) over {:?}", self.n, self.e, self.k)
    }
}

fn binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Integer coefficients of `Φ_{p^n}(1+X)`, lowest degree first.
pub fn cyclotomic_shifted(p: u32, n: u32) -> Vec<BigInt> {
    let q = (p as u64).pow(n - 1);
    let e = (q * (p as u64 - 1)) as usize;
    (0..=e as u64)
        .map(|k| (0..p as u64).map(|i| binom(i * q, k)).fold(BigInt::zero(), |a, b| a + b))
        .collect()
}

impl CyclotomicLayer {
    pub fn new(k: &Arc<UnramifiedField>, n: u32) -> Result<Arc<Self>, PadicError> {
        Self::with_cap(k, n, DEFAULT_MAX_LAYER)
    }

    pub fn with_cap(k: &Arc<UnramifiedField>, n: u32, max_n: u32) -> Result<Arc<Self>, PadicError> {
        if n == 0 || n > max_n {
            return Err(PadicError::UnsupportedLayer { n, max: max_n });
        }
        let p = k.p();
        let coeffs = cyclotomic_shifted(p, n);
        let e = coeffs.len() - 1;
        debug_assert_eq!(e as u64, (p as u64).pow(n - 1) * (p as u64 - 1));
        let pb = BigInt::from(p);
        let eisenstein = coeffs[e].is_one()
            && coeffs[..e].iter().all(|c| (c % &pb).is_zero())
            && !(&coeffs[0] % (&pb * &pb)).is_zero();
        if !eisenstein {
            return Err(PadicError::Construction(format!("Φ_{{{p}^{n}}}(1+X) is not Eisenstein")));
        }
        let one = BigInt::one();
        let minpoly = coeffs[..e]
            .iter()
            .map(|c| Padic::from_ratio(p, c, &one, k.internal_prec() + 4).unwrap())
            .collect();
        Ok(Arc::new(CyclotomicLayer { k: k.clone(), n, e, minpoly }))
    }

    pub fn field(&self) -> &Arc<UnramifiedField> {
        &self.k
    }
    pub fn index(&self) -> u32 {
        self.n
    }
    /// Ramification index `e_n = p^{n-1}(p-1)`.
    pub fn ramification(&self) -> usize {
        self.e
    }
    pub fn minpoly_coeffs(&self) -> &[Padic] {
        &self.minpoly
    }

    pub fn zero(self: &Arc<Self>) -> CyclotomicElement {
        CyclotomicElement { layer: self.clone(), c: vec![self.k.exact_zero(); self.e] }
    }

    pub fn from_field(self: &Arc<Self>, a: &FieldElement) -> CyclotomicElement {
        let mut z = self.zero();
        z.c[0] = a.clone();
        z
    }

    pub fn pi(self: &Arc<Self>) -> CyclotomicElement {
        let mut z = self.zero();
        if self.e == 1 {
            // p = 2 is excluded, so e >= 2 always; kept for completeness.
            return z.mul_pi();
        }
        z.c[1] = self.k.exact_int(1);
        z
    }

    pub fn zeta(self: &Arc<Self>) -> CyclotomicElement {
        &self.pi() + &self.from_field(&self.k.exact_int(1))
    }

    pub fn from_coords(self: &Arc<Self>, c: Vec<FieldElement>) -> Result<CyclotomicElement, PadicError> {
        if c.len() != self.e {
            return Err(PadicError::Shape(format!("expected {} coordinates", self.e)));
        }
        Ok(CyclotomicElement { layer: self.clone(), c })
    }
}

/// An element of `K_n`, coordinates in powers of `π_n`.
#[derive(Clone)]
pub struct CyclotomicElement {
    layer: Arc<CyclotomicLayer>,
    c: Vec<FieldElement>,
}

impl fmt::Debug for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.valuation() {
            Some(v) => write!(f, "K_{}[v={}, prec={}]", self.layer.n, v, self.prec()),
            None => write!(f, "K_{}[O(p^{})]", self.layer.n, self.prec()),
        }
    }
}

impl CyclotomicElement {
    pub fn layer(&self) -> &Arc<CyclotomicLayer> {
        &self.layer
    }
    pub fn coords(&self) -> &[FieldElement] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// `v_p` as an exact rational with denominator dividing `e_n`.
    pub fn valuation(&self) -> Option<Rational64> {
        let e = self.layer.e as i64;
        self.c
            .iter()
            .enumerate()
            .filter_map(|(i, x)| x.val().map(|v| Rational64::new(v * e + i as i64, e)))
            .min()
    }

    /// Absolute precision: the element is known modulo `p^prec`.
    pub fn prec(&self) -> Rational64 {
        let e = self.layer.e as i64;
        self.c
            .iter()
            .enumerate()
            .map(|(i, x)| Rational64::new(x.prec().min(EXACT) * e + i as i64, e))
            .min()
            .unwrap()
    }

    pub fn valuation_checked(&self) -> Result<Rational64, PadicError> {
        self.valuation().ok_or(PadicError::IndistinguishableFromZero)
    }

    /// Multiplication by `π_n`.
    pub fn mul_pi(&self) -> Self {
        let e = self.layer.e;
        let top = self.c[e - 1].clone();
        let mut c = Vec::with_capacity(e);
        c.push(-&top.scale(&self.layer.minpoly[0]));
        for i in 1..e {
            c.push(&self.c[i - 1] - &top.scale(&self.layer.minpoly[i]));
        }
        CyclotomicElement { layer: self.layer.clone(), c }
    }

    pub fn add_field(&self, a: &FieldElement) -> Self {
        let mut c = self.c.clone();
        c[0] = &c[0] + a;
        CyclotomicElement { layer: self.layer.clone(), c }
    }

    pub fn scale(&self, a: &FieldElement) -> Self {
        CyclotomicElement { layer: self.layer.clone(), c: self.c.iter().map(|x| x * a).collect() }
    }

    pub fn with_prec(&self, prec: i64) -> Self {
        CyclotomicElement { layer: self.layer.clone(), c: self.c.iter().map(|x| x.with_prec(prec)).collect() }
    }

    pub fn eq_at(&self, o: &Self) -> bool {
        (self - o).is_zero()
    }

    /// Lowest absolute precision reached by a coordinate, used for decisions
    /// in integer units.
    pub fn coord_prec_floor(&self) -> i64 {
        self.prec().floor().to_integer()
    }

    pub fn val_f64(&self) -> Option<f64> {
        self.valuation().map(|v| v.to_f64().unwrap())
    }
}

impl<'a> Add<&'a CyclotomicElement> for &'a CyclotomicElement {
    type Output = CyclotomicElement;
    fn add(self, o: &CyclotomicElement) -> CyclotomicElement {
        CyclotomicElement {
            layer: self.layer.clone(),
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a CyclotomicElement> for &'a CyclotomicElement {
    type Output = CyclotomicElement;
    fn sub(self, o: &CyclotomicElement) -> CyclotomicElement {
        CyclotomicElement {
            layer: self.layer.clone(),
            c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn neg(self) -> CyclotomicElement {
        CyclotomicElement { layer: self.layer.clone(), c: self.c.iter().map(|a| -a).collect() }
    }
}

impl<'a> Mul<&'a CyclotomicElement> for &'a CyclotomicElement {
    type Output = CyclotomicElement;
    fn mul(self, o: &CyclotomicElement) -> CyclotomicElement {
        // Horner in π over the coordinates of `o`.
        let mut acc = self.layer.zero();
        for b in o.c.iter().rev() {
            acc = &acc.mul_pi() + &self.scale(b);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomial_coefficients() {
        // Φ_5(1+X) = X^4 + 5X^3 + 10X^2 + 10X + 5
        let c = cyclotomic_shifted(5, 1);
        let want: Vec<BigInt> = [5, 10, 10, 5, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(c, want);
        assert_eq!(cyclotomic_shifted(5, 2).len(), 21);
    }

    #[test]
    fn valuations_of_uniformizers() {
        let k = UnramifiedField::qp(5, 20).unwrap();
        let l1 = CyclotomicLayer::new(&k, 1).unwrap();
        assert_eq!(l1.pi().valuation(), Some(Rational64::new(1, 4)));
        let p = l1.from_field(&k.from_i64(5));
        assert_eq!(p.valuation(), Some(Rational64::from_integer(1)));
        let l2 = CyclotomicLayer::new(&k, 2).unwrap();
        let pi2 = l2.pi();
        assert_eq!((&pi2 * &pi2).valuation(), Some(Rational64::new(1, 10)));
        assert!(CyclotomicLayer::new(&k, 4).is_err());
    }

    #[test]
    fn zeta_has_order_p() {
        let k = UnramifiedField::qp(5, 20).unwrap();
        let l1 = CyclotomicLayer::new(&k, 1).unwrap();
        let z = l1.zeta();
        let mut acc = l1.from_field(&k.one());
        for _ in 0..5 {
            acc = &acc * &z;
        }
        assert!(acc.eq_at(&l1.from_field(&k.one())));
    }
}
