use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::Rational64;
use unorm_padic::{CyclotomicLayer, Padic, UnramifiedField};
use unorm_series::ops::{d, ell, gamma_action, phi, psi};
use unorm_series::{
    cyclotomic_evaluate, divide_by_log, growth_order_estimate, log_order, rho_norm, LogOrder, LogPolynomial,
    SeriesError, Tail, TruncatedSeries, Witness,
};

fn qp(p: u32) -> Arc<UnramifiedField> {
    UnramifiedField::qp(p, 20).unwrap()
}

fn poly(k: &Arc<UnramifiedField>, c: &[i64]) -> TruncatedSeries {
    TruncatedSeries::from_i64s(k, c)
}

/// Polynomial `c` padded with zeros to degree `n`.
fn padded(k: &Arc<UnramifiedField>, c: &[i64], n: usize) -> TruncatedSeries {
    let mut v: Vec<i64> = c.to_vec();
    v.resize(n + 1, 0);
    poly(k, &v)
}

fn assert_agree(a: &TruncatedSeries, b: &TruncatedSeries, upto: usize) {
    for i in 0..=upto {
        let (x, y) = (&a.coeffs()[i], &b.coeffs()[i]);
        assert!(x.eq_at(y), "coefficient {i}: {x:?} vs {y:?}");
    }
}

// Schoolbook product, independent of TruncatedSeries::mul.
fn naive_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[test]
fn phi_of_one_plus_x() {
    let k = qp(5);
    let f = phi(&poly(&k, &[1, 1]));
    assert_agree(&f, &poly(&k, &[1, 5, 10, 10, 5, 1]), 5);
}

#[test]
fn phi_of_x_squared_p3() {
    let k = qp(3);
    let f = phi(&poly(&k, &[0, 0, 1]));
    let phi_x = [0, 3, 3, 1];
    let expect = naive_mul(&phi_x, &phi_x);
    assert_eq!(f.trunc(), 6);
    assert_agree(&f, &poly(&k, &expect), 6);
}

#[test]
fn phi_of_log_is_p_log() {
    let k = qp(5);
    let log = TruncatedSeries::log1p(&k, 40);
    let f = phi(&log);
    let five = k.exact_int(5);
    assert_agree(&f, &log.scale(&five), 40);
}

#[test]
fn psi_examples() {
    let k = qp(5);
    assert_agree(&psi(&padded(&k, &[1], 10)).unwrap(), &poly(&k, &[1, 0, 0]), 2);
    assert!(psi(&padded(&k, &[1, 1], 10)).unwrap().is_zero());
    let f = psi(&padded(&k, &[1, 5, 10, 10, 5, 1], 10)).unwrap();
    assert_agree(&f, &poly(&k, &[1, 1, 0]), 2);
}

#[test]
fn d_examples() {
    let k = qp(5);
    assert_agree(&d(&poly(&k, &[1, 1])).unwrap(), &poly(&k, &[1, 1]), 1);
    let dl = d(&TruncatedSeries::log1p(&k, 30)).unwrap();
    assert_agree(&dl, &padded(&k, &[1], 29), 29);
    assert_agree(&d(&poly(&k, &[0, 0, 1])).unwrap(), &poly(&k, &[0, 2, 2]), 2);
}

/// `exp(c·log(1+x))` to degree `n` at working precision `w`.
fn binomial_oracle(k: &Arc<UnramifiedField>, c: i64, n: usize, w: i64) -> TruncatedSeries {
    let p = k.p();
    let coef = |i: usize| {
        let s = if i % 2 == 1 { c } else { -c };
        k.from_padic(Padic::from_ratio(p, &BigInt::from(s), &BigInt::from(i as i64), w).unwrap())
    };
    let mut y = vec![k.exact_zero()];
    y.extend((1..=n).map(coef));
    let y = TruncatedSeries::polynomial(k, y);
    let mut acc = TruncatedSeries::polynomial(k, vec![k.exact_zero(); n + 1]);
    let mut term = TruncatedSeries::one(k);
    for m in 0..=n {
        if m > 0 {
            let inv = k.from_padic(Padic::from_ratio(p, &BigInt::from(1), &BigInt::from(m as i64), w).unwrap());
            term = term.mul(&y).truncate(n).scale(&inv);
        }
        acc = acc.add(&term);
    }
    acc.truncate(n)
}

#[test]
fn gamma_matches_exponential_oracle() {
    let k = qp(5);
    let n = 16;
    let c = Padic::exact(5, 6);
    let g = gamma_action(&padded(&k, &[1, 1], n), &c).unwrap();
    let oracle = binomial_oracle(&k, 6, n, 60);
    assert_agree(&g, &oracle, n);
    let g2 = gamma_action(&padded(&k, &[1, 2, 1], n), &Padic::exact(5, 3)).unwrap();
    assert_agree(&g2, &binomial_oracle(&k, 6, n, 60), n);
    let id = gamma_action(&padded(&k, &[3, 1, 4, 1, 5], n), &Padic::exact(5, 1)).unwrap();
    assert_agree(&id, &padded(&k, &[3, 1, 4, 1, 5], n), n);
}

#[test]
fn gamma_rejects_non_units() {
    let k = qp(5);
    assert_eq!(gamma_action(&poly(&k, &[1, 1]), &Padic::exact(5, 10)).unwrap_err(), SeriesError::NotUnit);
}

/// `(Σ_{i>=1} (-1)^{i+1} (γ-1)^i / i)(f) / log_p(c)` with `χ(γ) = c`.
fn operator_log(f: &TruncatedSeries, c: i64, terms: usize) -> TruncatedSeries {
    let k = f.field().clone();
    let p = k.p();
    let w = 60;
    let cp = Padic::exact(p, c as i128);
    let mut acc = f.scale(&k.exact_zero());
    let mut cur = f.clone();
    for i in 1..=terms {
        let next = gamma_action(&cur, &cp).unwrap().sub(&cur);
        cur = next.with_tail(Tail::Zero);
        let s = if i % 2 == 1 { 1 } else { -1 };
        let inv = k.from_padic(Padic::from_ratio(p, &BigInt::from(s), &BigInt::from(i as i64), w).unwrap());
        acc = acc.add(&cur.scale(&inv));
    }
    // log_p(c) = Σ (-1)^{i+1} (c-1)^i / i
    let u = c - 1;
    let mut lc = Padic::zero(p, w);
    let mut pw = Padic::exact(p, 1);
    for i in 1..=w as usize {
        pw = pw * Padic::exact(p, u as i128);
        let s = if i % 2 == 1 { 1 } else { -1 };
        lc = lc + pw * Padic::from_ratio(p, &BigInt::from(s), &BigInt::from(i as i64), w).unwrap();
    }
    acc.scale(&k.from_padic(lc.inv().unwrap()))
}

#[test]
fn ell_matches_operator_logarithm() {
    let k = qp(5);
    let n = 10;
    for (a, j) in [(1, 0), (2, 0), (1, 1), (3, 2)] {
        let f = TruncatedSeries::one_plus_x_pow(&k, a, n);
        let f = padded(&k, &[0], n).add(&f);
        let got = ell(&f, j).unwrap();
        let oracle = operator_log(&f, 6, 40).sub(&f.scale(&k.exact_int(j as i128)));
        for i in 0..=n - 1 {
            let diff = &got.coeffs()[i] - &oracle.coeffs()[i];
            assert!(diff.val_lb() >= 8 || diff.is_zero(), "a={a} j={j} coefficient {i}: {diff:?}");
        }
    }
}

#[test]
fn ell_closed_forms() {
    let k = qp(5);
    let n = 12;
    let f = padded(&k, &[1, 1], n);
    let log = TruncatedSeries::log1p(&k, n);
    let base = log.mul(&f);
    assert_agree(&ell(&f, 0).unwrap(), &base, n - 1);
    assert_agree(&ell(&f, 1).unwrap(), &base.sub(&f), n - 1);
    let err = ell(&padded(&k, &[1], n), 0).unwrap_err();
    assert_eq!(err, SeriesError::PsiNonzero { index: 0 });
}

#[test]
fn evaluation_examples() {
    let k = qp(5);
    let l1 = CyclotomicLayer::new(&k, 1).unwrap();
    let ev = cyclotomic_evaluate(&poly(&k, &[1, 1]), &l1).unwrap();
    assert!(ev.value.eq_at(&l1.zeta()));
    let l2 = CyclotomicLayer::new(&k, 2).unwrap();
    let ev = cyclotomic_evaluate(&poly(&k, &[0, 1]), &l2).unwrap();
    assert_eq!(ev.certified_valuation(), Some(Rational64::new(1, 20)));
    let ev = cyclotomic_evaluate(&TruncatedSeries::log1p(&k, 125), &l1).unwrap();
    assert!(ev.certified_valuation().is_none());
    assert!(ev.precision() >= Rational64::from(15));
}

#[test]
fn rho_norm_of_log() {
    let k = qp(5);
    let log = TruncatedSeries::log1p(&k, 60);
    let r = rho_norm(&log, 1).unwrap();
    // Direct minimization of -v(i) + i/20 over i <= 60.
    let oracle = (1..=60i64)
        .map(|i| {
            let mut v = 0;
            let mut m = i;
            while m % 5 == 0 {
                v += 1;
                m /= 5;
            }
            (Rational64::new(i, 20) - v, i)
        })
        .min()
        .unwrap();
    assert_eq!(r.value, oracle.0);
    assert_eq!(r.index as i64, oracle.1);
    assert_eq!(r.value, Rational64::new(-3, 4));
    assert_eq!(rho_norm(&poly(&k, &[25]), 3).unwrap().value, Rational64::from(2));
}

#[test]
fn rho_norm_flags_dominating_tail() {
    let k = qp(5);
    let log = TruncatedSeries::log1p(&k, 4);
    assert!(matches!(rho_norm(&log, 1), Err(SeriesError::TailDominated { .. })));
}

#[test]
fn growth_orders_of_log_polynomials() {
    let k = qp(5);
    for r in 0..=4u32 {
        let lp = LogPolynomial::new([(r, TruncatedSeries::one(&k))]).unwrap();
        assert_eq!(lp.growth_order().unwrap(), Rational64::from(r as i64));
    }
    let lp = LogPolynomial::new([(2, poly(&k, &[7])), (1, poly(&k, &[1]))]).unwrap();
    assert_eq!(lp.growth_order().unwrap(), Rational64::from(2));
    let lp = LogPolynomial::new([(0, poly(&k, &[1, 3, 1]))]).unwrap();
    assert_eq!(lp.growth_order().unwrap(), Rational64::from(0));
    assert_eq!(LogPolynomial::new([]).unwrap().growth_order().unwrap_err(), SeriesError::ZeroOrder);
}

#[test]
fn growth_estimates() {
    let k = qp(3);
    let n = 242;
    let log = TruncatedSeries::log1p(&k, n);
    let est = growth_order_estimate(&log.pow(3).truncate(n), 2).unwrap();
    assert!(est.contains(Rational64::from(3)), "{est:?}");
    let est = growth_order_estimate(&poly(&k, &[1]), 3).unwrap();
    assert!(est.contains(Rational64::from(0)), "{est:?}");
    let f = log.mul(&poly(&k, &[1, 3])).truncate(n);
    let est = growth_order_estimate(&f, 2).unwrap();
    assert!(est.contains(Rational64::from(1)), "{est:?}");
}

#[test]
fn divide_examples() {
    let k = qp(5);
    let n = 125;
    let log = TruncatedSeries::log1p(&k, n);
    let g = divide_by_log(&log, 1).unwrap();
    assert!(g.trunc() >= 20, "kept {}", g.trunc());
    assert_agree(&g, &padded(&k, &[1], g.trunc()), g.trunc());

    match divide_by_log(&padded(&k, &[0, 1], n).with_tail(Tail::Bounded { b: 0, r: 1 }), 1) {
        Err(SeriesError::NotDivisible(Witness::Layer { n: 1, valuation })) => {
            assert_eq!(valuation, Rational64::new(1, 4))
        }
        other => panic!("{other:?}"),
    }

    let h = poly(&k, &[1, 3, 1]);
    let f = log.mul(&h);
    let g = divide_by_log(&f, 1).unwrap();
    assert_agree(&g, &padded(&k, &[1, 3, 1], g.trunc()), g.trunc());
}

#[test]
fn log_order_examples() {
    let k = qp(5);
    let n = 200;
    let log = TruncatedSeries::log1p(&k, n);
    let f = log.pow(3).mul(&poly(&k, &[1, 1]));
    assert_eq!(log_order(&f, 1), LogOrder::Finite(3));
    assert_eq!(log_order(&padded(&k, &[1], n).with_tail(Tail::Bounded { b: 0, r: 0 }), 1), LogOrder::Finite(0));
    assert_eq!(log_order(&poly(&k, &[0]), 1), LogOrder::Infinite);
}
