use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use ethnum::U256;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::PadicError;

/// Absolute precision assigned to an exact zero.
pub const EXACT: i64 = 1 << 40;

/// Largest relative precision representable for `p`, i.e. the largest `k`
/// with `p^k < 2^126`.
pub fn max_rel(p: u32) -> i64 {
    if (p as usize) < MAX_REL_SMALL.len() {
        return MAX_REL_SMALL[p as usize];
    }
    max_rel_slow(p)
}

const fn max_rel_slow(p: u32) -> i64 {
    let mut k = 0;
    let mut acc: u128 = 1;
    while let Some(n) = acc.checked_mul(p as u128) {
        if n >= 1u128 << 126 {
            break;
        }
        acc = n;
        k += 1;
    }
    k
}

const MAX_REL_SMALL: [i64; 256] = {
    let mut t = [0i64; 256];
    let mut p = 2;
    while p < 256 {
        t[p] = max_rel_slow(p as u32);
        p += 1;
    }
    t
};

pub fn ppow(p: u32, k: i64) -> u128 {
    (p as u128).pow(k as u32)
}

#[inline]
fn mulmod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        (a * b) % m
    } else {
        let r = (U256::from(a) * U256::from(b)) % U256::from(m);
        r.as_u128()
    }
}

fn inv_mod(a: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "not a unit");
    s0.rem_euclid(m as i128) as u128
}

/// Multiplicity of `p` in `n` and the cofactor.
fn split_p(mut n: u128, p: u32) -> (i64, u128) {
    let p = p as u128;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    (v, n)
}

/// An element of ℚ_p known modulo `p^prec`.
///
/// A nonzero value is `p^val * unit` with `p ∤ unit` and
/// `unit < p^(prec - val)`. The zero value has `unit == 0` and `val == prec`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Padic {
    p: u32,
    val: i64,
    unit: u128,
    prec: i64,
}

impl Padic {
    pub fn zero(p: u32, prec: i64) -> Self {
        let prec = prec.min(EXACT);
        Padic { p, val: prec, unit: 0, prec }
    }

    pub fn one(p: u32, prec: i64) -> Self {
        Self::from_parts(p, 0, 1, prec)
    }

    /// Builds `p^val * unit + O(p^prec)` and normalizes.
    pub fn from_parts(p: u32, val: i64, unit: u128, prec: i64) -> Self {
        if unit == 0 || prec <= val {
            return Self::zero(p, prec);
        }
        let (extra, u) = split_p(unit, p);
        let val = val + extra;
        if prec <= val {
            return Self::zero(p, prec);
        }
        let rel = (prec - val).min(max_rel(p));
        Padic { p, val, unit: u % ppow(p, rel), prec: val + rel }
    }

    /// An integer, with the largest relative precision available.
    pub fn exact(p: u32, n: i128) -> Self {
        if n == 0 {
            return Self::zero(p, EXACT);
        }
        let (v, u) = split_p(n.unsigned_abs(), p);
        let rel = max_rel(p);
        let m = ppow(p, rel);
        let u = u % m;
        let u = if n < 0 { (m - u) % m } else { u };
        Padic { p, val: v, unit: u, prec: v + rel }
    }

    pub fn from_i64(p: u32, n: i64, prec: i64) -> Self {
        Self::exact(p, n as i128).with_prec(prec)
    }

    /// Converts `num/den` to absolute precision `prec`.
    pub fn from_ratio(p: u32, num: &BigInt, den: &BigInt, prec: i64) -> Result<Self, PadicError> {
        if den.is_zero() {
            return Err(PadicError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero(p, prec));
        }
        let pb = BigInt::from(p);
        let (vn, n) = big_split(num, &pb);
        let (vd, d) = big_split(den, &pb);
        let val = vn - vd;
        if prec <= val {
            return Ok(Self::zero(p, prec));
        }
        let rel = (prec - val).min(max_rel(p));
        let m = BigInt::from(ppow(p, rel));
        let nm = n.mod_floor(&m).to_u128().unwrap();
        let dm = d.mod_floor(&m).to_u128().unwrap();
        let mm = ppow(p, rel);
        let u = mulmod(nm, inv_mod(dm, mm), mm);
        Ok(Padic { p, val, unit: u, prec: val + rel })
    }

    pub fn from_digits(p: u32, val: i64, digits: &[u32], prec: i64) -> Result<Self, PadicError> {
        let mut u: u128 = 0;
        for &d in digits.iter().rev() {
            if d >= p {
                return Err(PadicError::Parse(format!("digit {d} out of range for p = {p}")));
            }
            u = u
                .checked_mul(p as u128)
                .and_then(|x| x.checked_add(d as u128))
                .ok_or_else(|| PadicError::Parse("too many digits".into()))?;
        }
        Ok(Self::from_parts(p, val, u, prec))
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }
    #[inline]
    pub fn prec(&self) -> i64 {
        self.prec
    }
    #[inline]
    pub fn is_zero(&self) -> bool {
        self.unit == 0
    }
    /// Valuation of a nonzero value, `None` when indistinguishable from zero.
    #[inline]
    pub fn val(&self) -> Option<i64> {
        if self.unit == 0 {
            None
        } else {
            Some(self.val)
        }
    }
    /// Valuation, or the precision for a zero (a lower bound for the true valuation).
    #[inline]
    pub fn val_lb(&self) -> i64 {
        self.val
    }
    #[inline]
    pub fn rel(&self) -> i64 {
        self.prec - self.val
    }
    #[inline]
    pub fn unit(&self) -> u128 {
        self.unit
    }

    /// Reduces to a lower absolute precision; never raises it.
    pub fn with_prec(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return *self;
        }
        if self.unit == 0 {
            return Self::zero(self.p, prec);
        }
        Self::from_parts(self.p, self.val, self.unit, prec)
    }

    /// Multiplies by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.unit == 0 {
            return Self::zero(self.p, self.prec + k);
        }
        Padic { val: self.val + k, prec: self.prec + k, ..*self }
    }

    pub fn inv(&self) -> Result<Self, PadicError> {
        if self.unit == 0 {
            return Err(PadicError::DivisionByZero);
        }
        let rel = self.rel();
        let u = inv_mod(self.unit, ppow(self.p, rel));
        Ok(Padic { p: self.p, val: -self.val, unit: u, prec: -self.val + rel })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, PadicError> {
        Ok(*self * other.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = *self;
        let mut acc = Self::exact(self.p, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// `a - b` is zero at the common precision.
    pub fn eq_at(&self, other: &Self) -> bool {
        (*self - *other).is_zero()
    }

    /// Residue class modulo `p` (only meaningful for integral values).
    pub fn residue(&self) -> u32 {
        if self.unit == 0 || self.val > 0 {
            0
        } else {
            debug_assert!(self.val == 0, "residue of a non-integral value");
            (self.unit % self.p as u128) as u32
        }
    }

    /// Base-`p` digits of the unit, least significant first, padded to the relative precision.
    pub fn digits(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut u = self.unit;
        for _ in 0..self.rel().max(0) {
            out.push((u % self.p as u128) as u32);
            u /= self.p as u128;
        }
        out
    }

    /// The integer `p^val * unit` when `val >= 0`.
    pub fn lift(&self) -> BigInt {
        if self.unit == 0 {
            return BigInt::zero();
        }
        assert!(self.val >= 0, "lift of a non-integral value");
        BigInt::from(self.unit) * BigInt::from(self.p).pow(self.val as u32)
    }

    /// Representative `p^val * unit` as a signed rational pair `(num, den)`,
    /// using the symmetric residue for the unit.
    pub fn to_ratio(&self) -> (BigInt, BigInt) {
        if self.unit == 0 {
            return (BigInt::zero(), BigInt::from(1));
        }
        let m = ppow(self.p, self.rel());
        let u = if self.unit > m / 2 {
            -BigInt::from(m - self.unit)
        } else {
            BigInt::from(self.unit)
        };
        let pv = BigInt::from(self.p).pow(self.val.unsigned_abs() as u32);
        if self.val >= 0 {
            (u * pv, BigInt::from(1))
        } else {
            (u, pv)
        }
    }
    /// Smallest rational `a/b` congruent to the value modulo `p^prec`, with
    /// `|a|, |b| <= sqrt(m/2)` for the unit modulus `m`; `None` if none exists.
    pub fn rational_reconstruction(&self) -> Option<(BigInt, BigInt)> {
        if self.unit == 0 {
            return Some((BigInt::zero(), BigInt::from(1)));
        }
        let m = BigInt::from(ppow(self.p, self.rel()));
        let bound = (&m / BigInt::from(2)).sqrt();
        let (mut r0, mut r1) = (m.clone(), BigInt::from(self.unit));
        let (mut t0, mut t1) = (BigInt::zero(), BigInt::from(1));
        while r1 > bound {
            let q = &r0 / &r1;
            let r2 = &r0 - &q * &r1;
            let t2 = &t0 - &q * &t1;
            (r0, r1, t0, t1) = (r1, r2, t1, t2);
        }
        if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
            return None;
        }
        let (mut a, mut b) = (r1, t1);
        if b.is_negative() {
            a = -a;
            b = -b;
        }
        let pv = BigInt::from(self.p).pow(self.val.unsigned_abs() as u32);
        if self.val >= 0 {
            Some((a * pv, b))
        } else {
            Some((a, b * pv))
        }
    }
}

fn big_split(n: &BigInt, p: &BigInt) -> (i64, BigInt) {
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            break;
        }
        n = q;
        v += 1;
    }
    (v, n)
}

impl fmt::Debug for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.unit == 0 {
            return write!(f, "O({}^{})", self.p, self.prec);
        }
        let (n, d) = self.to_ratio();
        if d == BigInt::from(1) {
            write!(f, "{n} + O({}^{})", self.p, self.prec)
        } else {
            write!(f, "{n}/{d} + O({}^{})", self.p, self.prec)
        }
    }
}

impl Add for Padic {
    type Output = Padic;
    fn add(self, o: Padic) -> Padic {
        debug_assert_eq!(self.p, o.p);
        let prec = self.prec.min(o.prec);
        if self.unit == 0 {
            return o.with_prec(prec);
        }
        if o.unit == 0 {
            return self.with_prec(prec);
        }
        let v = self.val.min(o.val);
        if prec <= v {
            return Padic::zero(self.p, prec);
        }
        let k = prec - v;
        let m = ppow(self.p, k);
        let lift = |x: &Padic| -> u128 {
            let s = x.val - v;
            if s >= k {
                0
            } else if s == 0 {
                x.unit % m
            } else {
                mulmod(x.unit % m, ppow(x.p, s), m)
            }
        };
        let a = lift(&self);
        let b = lift(&o);
        let s = if a >= m - b { a - (m - b) } else { a + b };
        Padic::from_parts(self.p, v, s, prec)
    }
}

impl Neg for Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        if self.unit == 0 {
            return self;
        }
        let m = ppow(self.p, self.rel());
        Padic { unit: m - self.unit, ..self }
    }
}

impl Sub for Padic {
    type Output = Padic;
    fn sub(self, o: Padic) -> Padic {
        self + (-o)
    }
}

impl Mul for Padic {
    type Output = Padic;
    fn mul(self, o: Padic) -> Padic {
        debug_assert_eq!(self.p, o.p);
        match (self.unit == 0, o.unit == 0) {
            (true, true) => Padic::zero(self.p, self.prec + o.prec),
            (true, false) => Padic::zero(self.p, self.prec + o.val),
            (false, true) => Padic::zero(self.p, o.prec + self.val),
            (false, false) => {
                let rel = self.rel().min(o.rel());
                let m = ppow(self.p, rel);
                let u = mulmod(self.unit % m, o.unit % m, m);
                Padic { p: self.p, val: self.val + o.val, unit: u, prec: self.val + o.val + rel }
            }
        }
    }
}

impl Div for Padic {
    type Output = Padic;
    /// Panics on division by a value indistinguishable from zero; use
    /// [`Padic::checked_div`] where that can happen.
    fn div(self, o: Padic) -> Padic {
        self.checked_div(&o).expect("division by zero")
    }
}

impl<'a> Add<&'a Padic> for &'a Padic {
    type Output = Padic;
    fn add(self, o: &Padic) -> Padic {
        *self + *o
    }
}
impl<'a> Sub<&'a Padic> for &'a Padic {
    type Output = Padic;
    fn sub(self, o: &Padic) -> Padic {
        *self - *o
    }
}
impl<'a> Mul<&'a Padic> for &'a Padic {
    type Output = Padic;
    fn mul(self, o: &Padic) -> Padic {
        *self * *o
    }
}

/// Valuation of a signed integer (`None` for zero).
pub fn int_val(n: i128, p: u32) -> Option<i64> {
    if n == 0 {
        None
    } else {
        Some(split_p(n.unsigned_abs(), p).0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Padic {
        Padic::from_ratio(5, &BigInt::from(n), &BigInt::from(d), 20).unwrap()
    }

    #[test]
    fn inverse_roundtrip() {
        let a = q(7, 3);
        assert!((a * a.inv().unwrap()).eq_at(&Padic::one(5, 20)));
        assert_eq!(q(1, 25).val(), Some(-2));
    }

    #[test]
    fn cancellation_lowers_relative_precision() {
        let a = q(1, 1);
        let b = q(1 + 5i64.pow(3), 1);
        let d = b - a;
        assert_eq!(d.val(), Some(3));
        assert_eq!(d.prec(), 20);
        assert_eq!(d.rel(), 17);
    }

    #[test]
    fn zero_times_value() {
        let z = Padic::zero(5, 10);
        let x = q(1, 5);
        assert_eq!((z * x).prec(), 9);
    }

    #[test]
    fn digits_are_least_significant_first() {
        let a = Padic::from_i64(5, 7, 3);
        assert_eq!(a.digits(), vec![2, 1, 0]);
        let b = Padic::from_digits(5, 0, &[2, 1, 0], 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn negative_ratio_representative() {
        let a = q(-3, 4);
        let (n, d) = a.to_ratio();
        let back = Padic::from_ratio(5, &n, &d, 20).unwrap();
        assert!(back.eq_at(&a));
    }
}
