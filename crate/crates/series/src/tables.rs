//! Exact integer tables for `φ(x^i)` and `ψ(x^n)`, memoized per field.
//!
//! Working in the `x`-basis keeps the precision of each output coefficient
//! tied to the coefficients that actually feed it.

use std::sync::Arc;

use unorm_padic::{Padic, UnramifiedField};

/// `rows[i][t]` is the coefficient of `x^{i+t}` in `((1+x)^p - 1)^i`.
pub(crate) struct PhiTable {
    pub rows: Vec<Vec<Padic>>,
}

/// `rows[n][j]` is the coefficient of `x^j` in `ψ(x^n)`.
pub(crate) struct PsiTable {
    pub rows: Vec<Vec<Padic>>,
}

pub(crate) fn binomial_row(p: u32, n: u32) -> Vec<Padic> {
    let mut row = vec![Padic::exact(p, 1)];
    let mut cur = Padic::exact(p, 1);
    for j in 1..=n {
        cur = (cur * Padic::exact(p, (n - j + 1) as i128)).checked_div(&Padic::exact(p, j as i128)).unwrap();
        row.push(cur);
    }
    row
}

pub(crate) fn phi_table(k: &Arc<UnramifiedField>, n: usize) -> Arc<PhiTable> {
    k.memo.get_or_grow("series:phi", |t: &PhiTable| t.rows.len() > n, || {
        let p = k.p();
        let pu = p as usize;
        // φ(x) = Σ_{k=1}^{p} C(p,k) x^k, stored from degree 1.
        let phi_x: Vec<Padic> = binomial_row(p, p)[1..].to_vec();
        let cap = (n + 1).max(16).next_power_of_two();
        let mut rows: Vec<Vec<Padic>> = vec![vec![Padic::exact(p, 1)]];
        for i in 1..cap {
            let prev = &rows[i - 1];
            let mut next = vec![Padic::exact(p, 0); (pu - 1) * i + 1];
            for (t, a) in prev.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (s, b) in phi_x.iter().enumerate() {
                    // degree (i-1+t) + (s+1) relative to start i is t+s.
                    next[t + s] = next[t + s] + *a * *b;
                }
            }
            rows.push(next);
        }
        PhiTable { rows }
    })
}

pub(crate) fn psi_table(k: &Arc<UnramifiedField>, n: usize) -> Arc<PsiTable> {
    k.memo.get_or_grow("series:psi", |t: &PsiTable| t.rows.len() > n, || {
        let p = k.p();
        let pu = p as usize;
        let binom = binomial_row(p, p);
        let cap = (n + 1).max(64).next_power_of_two();
        let mut rows: Vec<Vec<Padic>> = Vec::with_capacity(cap);
        for m in 0..cap.min(pu) {
            rows.push(vec![Padic::exact(p, if m % 2 == 0 { 1 } else { -1 })]);
        }
        for m in pu..cap {
            let mut next = vec![Padic::exact(p, 0); m / pu + 1];
            for (j, a) in rows[m - pu].iter().enumerate() {
                next[j + 1] = next[j + 1] + *a;
            }
            for kk in 1..pu {
                for (j, a) in rows[m - pu + kk].iter().enumerate() {
                    next[j] = next[j] - *a * binom[kk];
                }
            }
            rows.push(next);
        }
        PsiTable { rows }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_of_p_power_binomial_row() {
        // ψ((1+x)^p) = 1 + x, so Σ_k C(p,k) ψ(x^k) = 1 + x.
        let k = UnramifiedField::qp(5, 20).unwrap();
        let t = psi_table(&k, 10);
        let b = binomial_row(5, 5);
        let mut acc = [Padic::exact(5, 0), Padic::exact(5, 0)];
        for (kk, c) in b.iter().enumerate() {
            for (j, a) in t.rows[kk].iter().enumerate() {
                acc[j] = acc[j] + *a * *c;
            }
        }
        assert!(acc[0].eq_at(&Padic::exact(5, 1)));
        assert!(acc[1].eq_at(&Padic::exact(5, 1)));
    }

    #[test]
    fn psi_table_valuation_floor() {
        // The tail caps in ψ rely on v(ψ(x^i)_j) >= ⌊i/p⌋ - j.
        for p in [3u32, 5, 7] {
            let k = UnramifiedField::qp(p, 20).unwrap();
            let t = psi_table(&k, 400);
            for (i, row) in t.rows.iter().enumerate().take(400) {
                for (j, a) in row.iter().enumerate() {
                    if let Some(v) = a.val() {
                        assert!(v >= (i / p as usize) as i64 - j as i64, "p={p} i={i} j={j} v={v}");
                    }
                }
            }
        }
    }
}
