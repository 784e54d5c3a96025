//! Polynomials over 𝔽_p and the residue field 𝔽_q of `K`.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    /// Coefficients, lowest degree first, no trailing zeros.
    c: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u32, c: Vec<u64>) -> Self {
        let p = p as u64;
        let mut out = FpPoly { p, c: c.into_iter().map(|x| x % p).collect() };
        out.trim();
        out
    }

    fn trim(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn x(p: u64) -> Self {
        FpPoly { p, c: vec![0, 1] }
    }

    fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| {
                let a = self.c.get(i).copied().unwrap_or(0);
                let b = o.c.get(i).copied().unwrap_or(0);
                (a + self.p - b) % self.p
            })
            .collect();
        let mut r = FpPoly { p: self.p, c };
        r.trim();
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return FpPoly { p: self.p, c: vec![] };
        }
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % self.p;
            }
        }
        let mut r = FpPoly { p: self.p, c };
        r.trim();
        r
    }

    pub fn rem(&self, m: &Self) -> Self {
        let mut r = self.c.clone();
        let dm = m.degree().expect("division by zero polynomial");
        let lead_inv = self.inv(m.c[dm]);
        while r.len() > dm {
            let top = r.len() - 1;
            let q = r[top] * lead_inv % self.p;
            if q != 0 {
                for i in 0..=dm {
                    let idx = top - dm + i;
                    r[idx] = (r[idx] + self.p - q * m.c[i] % self.p) % self.p;
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        FpPoly { p: self.p, c: r }
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if let Some(d) = a.degree() {
            let li = self.inv(a.c[d]);
            a.c.iter_mut().for_each(|x| *x = *x * li % self.p);
        }
        a
    }

    /// `self^p mod m`.
    fn frob_mod(&self, m: &Self) -> Self {
        let mut acc = FpPoly { p: self.p, c: vec![1] };
        let mut base = self.rem(m);
        let mut e = self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    fn x_pow_p_pow(&self, k: usize) -> Self {
        let mut h = Self::x(self.p).rem(self);
        for _ in 0..k {
            h = h.frob_mod(self);
        }
        h
    }

    /// First monic irreducible polynomial of degree `f` in lexicographic order;
    /// returns the non-leading coefficients.
    pub fn first_irreducible(p: u32, f: usize) -> Vec<u64> {
        let pp = p as u64;
        let total = pp.pow(f as u32);
        for idx in 0..total {
            let mut c = Vec::with_capacity(f + 1);
            let mut t = idx;
            for _ in 0..f {
                c.push(t % pp);
                t /= pp;
            }
            c.push(1);
            let g = FpPoly::new(p, c.clone());
            if rabin_irreducible(&g) {
                c.pop();
                return c;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % m;
        }
        a = a * a % m;
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test.
pub fn rabin_irreducible(g: &FpPoly) -> bool {
    let n = match g.degree() {
        Some(0) | None => return false,
        Some(n) => n,
    };
    if n == 1 {
        return true;
    }
    let x = FpPoly::x(g.p);
    if g.x_pow_p_pow(n).sub(&x.rem(g)) != (FpPoly { p: g.p, c: vec![] }) {
        return false;
    }
    for q in prime_factors(n) {
        let h = g.x_pow_p_pow(n / q).sub(&x);
        if g.gcd(&h).degree() != Some(0) {
            return false;
        }
    }
    true
}

/// The residue field `𝔽_q = 𝔽_p[t]/(ḡ)`, elements as coordinate vectors.
#[derive(Clone, Debug)]
pub struct ResidueField {
    p: u64,
    f: usize,
    g: FpPoly,
}

impl ResidueField {
    pub fn new(g: FpPoly) -> Self {
        let f = g.degree().unwrap();
        ResidueField { p: g.p, f, g }
    }

    pub fn size(&self) -> u64 {
        self.p.pow(self.f as u32)
    }

    pub fn element(&self, idx: u64) -> Vec<u64> {
        let mut t = idx;
        (0..self.f)
            .map(|_| {
                let d = t % self.p;
                t /= self.p;
                d
            })
            .collect()
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let pa = FpPoly::new(self.p as u32, a.to_vec());
        let pb = FpPoly::new(self.p as u32, b.to_vec());
        let mut r = pa.mul(&pb).rem(&self.g).c;
        r.resize(self.f, 0);
        r
    }

    /// Evaluates `Σ c_i y^i` and its derivative at `y`.
    pub fn eval_with_derivative(&self, c: &[Vec<u64>], y: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let zero = vec![0; self.f];
        let mut v = zero.clone();
        let mut d = zero;
        for ci in c.iter().rev() {
            d = self.add(&self.mul(&d, y), &v);
            v = self.add(&self.mul(&v, y), ci);
        }
        (v, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rabin_on_small_cases() {
        // x^2 + 2 is irreducible mod 5 (2 is not a square).
        assert!(rabin_irreducible(&FpPoly::new(5, vec![2, 0, 1])));
        // x^2 + 1 = (x - 2)(x + 2) mod 5.
        assert!(!rabin_irreducible(&FpPoly::new(5, vec![1, 0, 1])));
        // x^3 + 2x + 1 is irreducible mod 3.
        assert!(rabin_irreducible(&FpPoly::new(3, vec![1, 2, 0, 1])));
        assert!(!rabin_irreducible(&FpPoly::new(3, vec![0, 1, 0, 1])));
    }

    #[test]
    fn residue_field_has_no_zero_divisors() {
        let c = FpPoly::first_irreducible(3, 2);
        let mut g = c.clone();
        g.push(1);
        let fq = ResidueField::new(FpPoly::new(3, g));
        for i in 1..fq.size() {
            for j in 1..fq.size() {
                assert!(!fq.is_zero(&fq.mul(&fq.element(i), &fq.element(j))));
            }
        }
    }
}
