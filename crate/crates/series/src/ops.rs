//! The operators `φ`, `ψ`, `D`, the `γ`-action and `ℓ_j`.

use unorm_padic::exec::Exec;
use unorm_padic::scalar::EXACT;
use unorm_padic::{FieldElement, Padic};

use crate::series::{lgp, Tail, TruncatedSeries};
use crate::tables::{binomial_row, phi_table, psi_table};
use crate::SeriesError;

/// `f^σ((1+x)^p - 1)`.
///
/// A series tracked to degree `N` comes back tracked to `pN`; coefficients
/// above `N` carry the precision cap imposed by the untracked tail.
pub fn phi(f: &TruncatedSeries) -> TruncatedSeries {
    phi_with(f, usize::MAX, Exec::default())
}

/// `φ(f)` computed only up to degree `n_out`.
pub fn phi_to(f: &TruncatedSeries, n_out: usize) -> TruncatedSeries {
    phi_with(f, n_out, Exec::default())
}

pub fn phi_with(f: &TruncatedSeries, n_out: usize, exec: Exec) -> TruncatedSeries {
    let k = f.field();
    let p = k.p() as usize;
    let n = f.trunc();
    let top = match f.tail() {
        Tail::Unknown => n,
        _ => p * n,
    }
    .min(n_out);
    let table = phi_table(k, n);
    let a: Vec<FieldElement> = f.coeffs().iter().map(|x| x.sigma()).collect();
    let bound = f.bound_pair();
    let pol = f.tail() == Tail::Zero;
    let c = exec.map_range(top + 1, |j| {
        let mut acc = k.exact_zero();
        for i in j.div_ceil(p)..=j.min(n) {
            let t = &table.rows[i][j - i];
            if !t.is_zero() {
                acc = &acc + &a[i].scale(t);
            }
        }
        if j > n && !pol {
            let (b, r) = bound.unwrap();
            let cap = (n as i64 + 1) - ((j - n - 1) / (p - 1)) as i64 - b - r as i64 * lgp(k.p(), j);
            acc = acc.with_prec(cap);
        }
        acc
    });
    // A polynomial cut below its full degree keeps an integral-table tail.
    let tail = if pol && top < p * n { Tail::Bounded { b: f.coeff_bound(0), r: 0 } } else { f.tail() };
    TruncatedSeries::from_parts(k, c, tail)
}

/// `min_{i > n} (⌊i/p⌋ - r·⌊log_p i⌋)`.
fn psi_tail_min(p: u32, n: usize, r: u32) -> i64 {
    let pu = p as usize;
    let mut best = ((n + 1) / pu) as i64 - r as i64 * lgp(p, n + 1);
    let mut q: usize = 1;
    while let Some(nq) = q.checked_mul(pu) {
        q = nq;
        if q > n + 1 {
            let v = (q / pu) as i64 - r as i64 * lgp(p, q);
            best = best.min(v);
            if (q / pu) as i64 > best + 64 * r as i64 + 64 {
                break;
            }
        }
    }
    best
}

/// Extra loss in the tail model of `ψ(f)` beyond `b + r`.
fn psi_model_slack(p: u32, r: u32) -> i64 {
    let (p, r) = (p as i64, r as i64);
    let mut c = (r - 1).max(0);
    let mut pk: i64 = 1;
    for k in 1..40 {
        let prev = pk;
        pk = match pk.checked_mul(p) {
            Some(v) => v,
            None => break,
        };
        if k >= 2 {
            c = c.max(r * k - pk + p - 1);
        }
        c = c.max(r * k - r - prev);
    }
    c
}

/// `ψ(f)`, σ^{-1}-semilinear, tracked to degree `⌊N/p⌋`.
pub fn psi(f: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    psi_with(f, Exec::default())
}

pub fn psi_with(f: &TruncatedSeries, exec: Exec) -> Result<TruncatedSeries, SeriesError> {
    let k = f.field();
    let p = k.p();
    let pu = p as usize;
    let n = f.trunc();
    let m = n / pu;
    let cap0 = match f.tail() {
        Tail::Zero => None,
        Tail::Bounded { b, r } => Some(psi_tail_min(p, n, r) - b),
        Tail::Unknown => return Err(SeriesError::TailUnknown("psi")),
    };
    let table = psi_table(k, n);
    let a: Vec<FieldElement> = f.coeffs().iter().map(|x| x.sigma_inv()).collect();
    let c = exec.map_range(m + 1, |j| {
        let mut acc = k.exact_zero();
        for (i, ai) in a.iter().enumerate().skip(pu * j) {
            let t = &table.rows[i][j];
            if !t.is_zero() {
                acc = &acc + &ai.scale(t);
            }
        }
        match cap0 {
            Some(c0) => acc.with_prec(c0 - j as i64),
            None => acc,
        }
    });
    let tail = match f.tail() {
        Tail::Bounded { b, r } => Tail::Bounded { b: b + r as i64 + psi_model_slack(p, r), r },
        t => t,
    };
    Ok(TruncatedSeries::from_parts(k, c, tail))
}

/// `D(f) = (1+x) f'`. Tracked to `N - 1` unless `f` is a polynomial.
pub fn d(f: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    let k = f.field();
    let n = f.trunc();
    let a = f.coeffs();
    let z = k.exact_zero();
    let term = |j: usize| {
        let x = &a[j] * &k.exact_int(j as i128);
        let y = a.get(j + 1).map(|t| t * &k.exact_int(j as i128 + 1)).unwrap_or_else(|| z.clone());
        &x + &y
    };
    match f.tail() {
        Tail::Zero => Ok(TruncatedSeries::polynomial(k, (0..=n).map(term).collect())),
        t => {
            if n == 0 {
                return Err(SeriesError::Shape("D needs a series tracked to degree at least 1".into()));
            }
            let tail = match t {
                Tail::Bounded { b, r } => Tail::Bounded { b: b + r as i64, r },
                other => other,
            };
            Ok(TruncatedSeries::from_parts(k, (0..n).map(term).collect(), tail))
        }
    }
}

pub fn d_pow(f: &TruncatedSeries, e: usize) -> Result<TruncatedSeries, SeriesError> {
    let mut g = f.clone();
    for _ in 0..e {
        g = d(&g)?;
    }
    Ok(g)
}

/// `C(z, j)` for `j = 0..=n` as exact `p`-adic integers.
fn binomials_of(p: u32, z: i128, n: usize) -> Vec<Padic> {
    let mut out = Vec::with_capacity(n + 1);
    let mut cur = Padic::exact(p, 1);
    out.push(cur);
    for j in 1..=n {
        if z >= 0 && j as i128 > z {
            cur = Padic::exact(p, 0);
        } else {
            cur = (cur * Padic::exact(p, z - j as i128 + 1)).checked_div(&Padic::exact(p, j as i128)).unwrap();
        }
        out.push(cur);
    }
    out
}

/// `f((1+x)^c - 1)` for a unit `c ∈ ℤ_p^×`.
pub fn gamma_action(f: &TruncatedSeries, c: &Padic) -> Result<TruncatedSeries, SeriesError> {
    gamma_with(f, c, Exec::default())
}

pub fn gamma_with(f: &TruncatedSeries, c: &Padic, exec: Exec) -> Result<TruncatedSeries, SeriesError> {
    if c.val() != Some(0) {
        return Err(SeriesError::NotUnit);
    }
    let k = f.field();
    let p = k.p();
    let n = f.trunc();
    let a = f.coeffs();
    // A small symmetric lift keeps C(c0·m, j) within i128.
    let c = c.with_prec(c.prec().min(k.prec() + 2 * lgp(p, n) + 8));
    let c0: i128 = c.to_ratio().0.try_into().map_err(|_| SeriesError::Shape("unit too large to lift".into()))?;
    // Coordinates in the (1+x)-basis: b_m = Σ_{i>=m} (-1)^{i-m} C(i,m) a_i.
    // Scalars act coordinatewise, so work on the coordinate arrays directly.
    let fdeg = k.degree();
    let zero = Padic::zero(p, EXACT);
    let rows: Vec<Vec<Padic>> = (0..=n as u32).map(|i| binomial_row(p, i)).collect();
    let bcoef: Vec<Vec<Padic>> = exec.map_range(n + 1, |m| {
        let mut acc = vec![zero; fdeg];
        for (i, ai) in a.iter().enumerate().skip(m) {
            let r = rows[i][m];
            let neg = (i - m) % 2 == 1;
            for (s, x) in acc.iter_mut().zip(ai.coords()) {
                let t = *x * r;
                *s = if neg { *s - t } else { *s + t };
            }
        }
        acc
    });
    let gb: Vec<Vec<Padic>> = exec.map_range(n + 1, |m| binomials_of(p, c0 * m as i128, n));
    let bmin = bcoef
        .iter()
        .map(|x| {
            x.iter()
                .filter_map(|y| y.val())
                .min()
                .unwrap_or_else(|| x.iter().map(|y| y.prec()).min().unwrap())
        })
        .min()
        .unwrap();
    let out = exec.map_range(n + 1, |j| {
        let mut acc = vec![zero; fdeg];
        for (m, bm) in bcoef.iter().enumerate() {
            let t = gb[m][j];
            if !t.is_zero() {
                for (s, x) in acc.iter_mut().zip(bm) {
                    *s = *s + *x * t;
                }
            }
        }
        let lim = bmin + c.prec() - lgp(p, j);
        k.from_coords(acc.into_iter().map(|x| x.with_prec(lim)).collect()).unwrap()
    });
    let tail = match f.bound_pair() {
        Some((b, r)) => Tail::Bounded { b, r },
        None => Tail::Unknown,
    };
    Ok(TruncatedSeries::from_parts(k, out, tail))
}

/// `ℓ_j(f) = log(1+x)·D(f) - j·f` on `ker ψ`.
pub fn ell(f: &TruncatedSeries, j: i64) -> Result<TruncatedSeries, SeriesError> {
    let ps = psi(f)?;
    if let Some(idx) = ps.coeffs().iter().position(|x| !x.is_zero()) {
        return Err(SeriesError::PsiNonzero { index: idx });
    }
    let k = f.field();
    let df = d(f)?;
    let log = TruncatedSeries::log1p(k, df.trunc().max(1));
    let main = log.mul(&df);
    Ok(main.sub(&f.scale(&k.exact_int(j as i128))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slack_is_zero_for_small_growth() {
        assert_eq!(psi_model_slack(5, 0), 0);
        assert_eq!(psi_model_slack(5, 1), 0);
        assert!(psi_model_slack(5, 3) >= 2);
    }
}
