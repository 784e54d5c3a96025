//! Truncated power series over `K` with a tail model.

use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;

use unorm_padic::exec::Exec;
use unorm_padic::{FieldElement, Padic, UnramifiedField};

use crate::SeriesError;

/// `⌊log_p i⌋`, with `0` for `i = 0`.
pub fn lgp(p: u32, i: usize) -> i64 {
    let mut k = 0;
    let mut x = i / p as usize;
    while x > 0 {
        k += 1;
        x /= p as usize;
    }
    k
}

/// `min_{i > n} (i/e - b - r·⌊log_p i⌋)`: a lower bound for the valuation
/// of the untracked part of a `Bounded { b, r }` series at a point of
/// valuation `1/e`.
pub fn tail_valuation_bound(p: u32, n: usize, b: i64, r: u32, e: i64) -> Rational64 {
    let pu = p as usize;
    let mut start = n + 1;
    let mut k = lgp(p, start);
    let mut best: Option<Rational64> = None;
    loop {
        let v = Rational64::new(start as i64, e) - b - r as i64 * k;
        best = Some(best.map_or(v, |x| x.min(v)));
        // Past the minimum the per-block values only grow.
        let next = match pu.checked_pow(k as u32 + 1) {
            Some(q) if q < (1usize << 52) => q,
            _ => break,
        };
        if Rational64::new(next as i64, e) - b - r as i64 * (k + 1) > best.unwrap() + Rational64::from(64) {
            break;
        }
        start = next;
        k += 1;
    }
    best.unwrap()
}

/// What is known about the coefficients beyond the truncation degree.
///
/// `Bounded { b, r }` asserts `v(a_i) >= -b - r·⌊log_p i⌋` for every index,
/// tracked or not.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tail {
    /// Exact polynomial.
    Zero,
    Bounded { b: i64, r: u32 },
    Unknown,
}

#[derive(Clone)]
pub struct TruncatedSeries {
    k: Arc<UnramifiedField>,
    c: Vec<FieldElement>,
    tail: Tail,
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series(N={}, tail={:?}, {:?})", self.trunc(), self.tail, self.c)
    }
}

impl TruncatedSeries {
    /// Raw constructor; the caller vouches for the tail model.
    pub fn from_parts(k: &Arc<UnramifiedField>, c: Vec<FieldElement>, tail: Tail) -> Self {
        assert!(!c.is_empty(), "a series tracks at least the constant term");
        TruncatedSeries { k: k.clone(), c, tail }
    }

    pub fn polynomial(k: &Arc<UnramifiedField>, c: Vec<FieldElement>) -> Self {
        let c = if c.is_empty() { vec![k.exact_zero()] } else { c };
        Self::from_parts(k, c, Tail::Zero)
    }

    /// Series with a declared bound, checked against the tracked coefficients.
    pub fn bounded(k: &Arc<UnramifiedField>, c: Vec<FieldElement>, b: i64, r: u32) -> Result<Self, SeriesError> {
        let p = k.p();
        for (i, a) in c.iter().enumerate() {
            if let Some(v) = a.val() {
                if v < -b - r as i64 * lgp(p, i) {
                    return Err(SeriesError::Shape(format!(
                        "coefficient {i} has valuation {v}, below the declared bound"
                    )));
                }
            }
        }
        Ok(Self::from_parts(k, c, Tail::Bounded { b, r }))
    }

    pub fn from_i64s(k: &Arc<UnramifiedField>, c: &[i64]) -> Self {
        Self::polynomial(k, c.iter().map(|&x| k.from_i64(x)).collect())
    }

    pub fn constant(k: &Arc<UnramifiedField>, a: FieldElement) -> Self {
        Self::polynomial(k, vec![a])
    }

    pub fn one(k: &Arc<UnramifiedField>) -> Self {
        Self::constant(k, k.one())
    }

    /// `x`.
    pub fn x(k: &Arc<UnramifiedField>) -> Self {
        Self::polynomial(k, vec![k.exact_zero(), k.exact_int(1)])
    }

    /// `log(1+x) = Σ (-1)^{i+1} x^i / i` to degree `n`.
    pub fn log1p(k: &Arc<UnramifiedField>, n: usize) -> Self {
        let mut c = vec![k.exact_zero()];
        for i in 1..=n {
            let s = if i % 2 == 1 { 1 } else { -1 };
            c.push(k.from_ratio(s, i as i64).expect("p-adic reciprocal"));
        }
        Self::from_parts(k, c, Tail::Bounded { b: 0, r: 1 })
    }

    /// `(1+x)^a` for an integer `a`; a polynomial when `a >= 0`.
    pub fn one_plus_x_pow(k: &Arc<UnramifiedField>, a: i64, n: usize) -> Self {
        let mut c = vec![k.exact_int(1)];
        let mut cur = Padic::exact(k.p(), 1);
        let top = if a >= 0 { n.min(a as usize) } else { n };
        for j in 1..=top {
            cur = cur * Padic::exact(k.p(), (a - j as i64 + 1) as i128);
            cur = cur.checked_div(&Padic::exact(k.p(), j as i128)).unwrap();
            c.push(k.from_padic(cur));
        }
        if a >= 0 {
            Self::polynomial(k, c)
        } else {
            Self::from_parts(k, c, Tail::Bounded { b: 0, r: 0 })
        }
    }

    pub fn field(&self) -> &Arc<UnramifiedField> {
        &self.k
    }
    pub fn p(&self) -> u32 {
        self.k.p()
    }
    pub fn trunc(&self) -> usize {
        self.c.len() - 1
    }
    pub fn coeffs(&self) -> &[FieldElement] {
        &self.c
    }
    pub fn coeff(&self, i: usize) -> Option<&FieldElement> {
        self.c.get(i)
    }
    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn with_tail(mut self, tail: Tail) -> Self {
        self.tail = tail;
        self
    }

    /// Index bound up to which products stay exact (`usize::MAX` for polynomials).
    fn reach(&self) -> usize {
        match self.tail {
            Tail::Zero => usize::MAX,
            _ => self.trunc(),
        }
    }

    /// The `(b, r)` model valid for every coefficient, if any.
    pub fn bound_pair(&self) -> Option<(i64, u32)> {
        match self.tail {
            Tail::Zero => Some((self.coeff_bound(0), 0)),
            Tail::Bounded { b, r } => Some((b, r)),
            Tail::Unknown => None,
        }
    }

    /// Smallest `b` with `v(a_i) >= -b - r·⌊log_p i⌋` over the tracked coefficients.
    pub fn coeff_bound(&self, r: u32) -> i64 {
        let p = self.p();
        self.c
            .iter()
            .enumerate()
            .map(|(i, a)| -a.val_lb() - r as i64 * lgp(p, i))
            .max()
            .unwrap()
    }

    pub fn truncate(&self, n: usize) -> Self {
        if n >= self.trunc() {
            return self.clone();
        }
        let tail = match self.tail {
            Tail::Zero => Tail::Bounded { b: self.coeff_bound(0), r: 0 },
            t => t,
        };
        Self::from_parts(&self.k, self.c[..=n].to_vec(), tail)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|a| a.is_zero())
    }

    pub fn min_prec(&self) -> i64 {
        self.c.iter().map(|a| a.prec()).min().unwrap()
    }

    pub fn min_val(&self) -> Option<i64> {
        self.c.iter().filter_map(|a| a.val()).min()
    }

    /// Agreement on the common tracked range at propagated precision.
    pub fn eq_at(&self, o: &Self) -> bool {
        self.c.iter().zip(&o.c).all(|(a, b)| a.eq_at(b))
    }

    /// Index of the first coefficient on which `self` and `o` provably differ.
    pub fn first_difference(&self, o: &Self) -> Option<usize> {
        self.c.iter().zip(&o.c).position(|(a, b)| !a.eq_at(b))
    }

    pub fn map_coeffs(&self, f: impl Fn(&FieldElement) -> FieldElement) -> Self {
        Self::from_parts(&self.k, self.c.iter().map(f).collect(), self.tail)
    }

    pub fn scale(&self, a: &FieldElement) -> Self {
        let tail = match (self.tail, a.val()) {
            (Tail::Bounded { b, r }, Some(v)) => Tail::Bounded { b: b - v, r },
            (Tail::Bounded { b, r }, None) => Tail::Bounded { b: b - a.prec(), r },
            (t, _) => t,
        };
        Self::from_parts(&self.k, self.c.iter().map(|x| x * a).collect(), tail)
    }

    /// Multiplication by `p^s`.
    pub fn shift(&self, s: i64) -> Self {
        let tail = match self.tail {
            Tail::Bounded { b, r } => Tail::Bounded { b: b - s, r },
            t => t,
        };
        Self::from_parts(&self.k, self.c.iter().map(|x| x.shift(s)).collect(), tail)
    }

    /// Coefficientwise σ (σ keeps valuations, so the tail model is unchanged).
    pub fn sigma_pow(&self, j: i64) -> Self {
        self.map_coeffs(|x| x.sigma_pow(j))
    }

    pub fn with_prec(&self, prec: i64) -> Self {
        self.map_coeffs(|x| x.with_prec(prec))
    }

    fn combine_tail_add(&self, o: &Self) -> Tail {
        match (self.tail, o.tail) {
            (Tail::Zero, Tail::Zero) => Tail::Zero,
            (Tail::Unknown, _) | (_, Tail::Unknown) => Tail::Unknown,
            _ => {
                let (b1, r1) = self.bound_pair().unwrap();
                let (b2, r2) = o.bound_pair().unwrap();
                Tail::Bounded { b: b1.max(b2), r: r1.max(r2) }
            }
        }
    }

    fn zip_with(&self, o: &Self, f: impl Fn(&FieldElement, &FieldElement) -> FieldElement) -> Self {
        let n = if self.tail == Tail::Zero && o.tail == Tail::Zero {
            self.trunc().max(o.trunc())
        } else {
            self.reach().min(o.reach())
        };
        let z = self.k.exact_zero();
        let c = (0..=n)
            .map(|i| f(self.c.get(i).unwrap_or(&z), o.c.get(i).unwrap_or(&z)))
            .collect();
        Self::from_parts(&self.k, c, self.combine_tail_add(o))
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip_with(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip_with(o, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|a| -a)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.mul_with(o, Exec::default())
    }

    pub fn mul_with(&self, o: &Self, exec: Exec) -> Self {
        let n = if self.tail == Tail::Zero && o.tail == Tail::Zero {
            self.trunc() + o.trunc()
        } else {
            self.reach().min(o.reach())
        };
        let k = &self.k;
        let (a, b) = (&self.c, &o.c);
        let c = exec.map_range(n + 1, |j| {
            let lo = j.saturating_sub(b.len() - 1);
            let hi = j.min(a.len() - 1);
            let mut acc = k.exact_zero();
            for i in lo..=hi {
                acc = &acc + &(&a[i] * &b[j - i]);
            }
            acc
        });
        let tail = match (self.tail, o.tail) {
            (Tail::Zero, Tail::Zero) => Tail::Zero,
            (Tail::Unknown, _) | (_, Tail::Unknown) => Tail::Unknown,
            _ => {
                let (b1, r1) = self.bound_pair().unwrap();
                let (b2, r2) = o.bound_pair().unwrap();
                Tail::Bounded { b: b1 + b2, r: r1 + r2 }
            }
        };
        Self::from_parts(k, c, tail)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.k);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse for a unit constant term, to the same degree.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let a0 = &self.c[0];
        let inv0 = a0.inv().map_err(|_| SeriesError::NotInvertible)?;
        let n = self.trunc();
        let mut out = vec![inv0.clone()];
        for j in 1..=n {
            let mut acc = self.k.exact_zero();
            for i in 1..=j {
                acc = &acc + &(&self.c[i] * &out[j - i]);
            }
            out.push(-&(&acc * &inv0));
        }
        // Integral series with a unit constant have integral inverses.
        let tail = match self.bound_pair() {
            Some((b, 0)) if b <= 0 && a0.val() == Some(0) => Tail::Bounded { b: 0, r: 0 },
            _ => Tail::Unknown,
        };
        Ok(Self::from_parts(&self.k, out, tail))
    }

    pub fn div(&self, o: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul(&o.inverse()?))
    }

    /// Whether all coefficients above the constant vanish to precision.
    pub fn is_constant(&self) -> bool {
        self.c[1..].iter().all(|a| a.is_zero())
    }
}
