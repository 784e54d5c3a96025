use std::sync::Arc;

use num_rational::Rational64;
use proptest::prelude::*;
use unorm_padic::{CyclotomicLayer, FieldElement, Padic, UnramifiedField};
use unorm_series::ops::{d, gamma_action, phi, psi};
use unorm_series::{
    cyclotomic_evaluate, log_order, phi_quotient_scalar, rho_norm, LogOrder, LogPolynomial, Tail, TruncatedSeries,
};

fn field() -> Arc<UnramifiedField> {
    UnramifiedField::with_degree(5, 2, 20).unwrap()
}

fn element(k: &Arc<UnramifiedField>, a: i64, b: i64) -> FieldElement {
    k.from_coords(vec![Padic::from_i64(5, a, 20), Padic::from_i64(5, b, 20)]).unwrap()
}

fn series(k: &Arc<UnramifiedField>, c: &[(i64, i64)]) -> TruncatedSeries {
    let c = c.iter().map(|&(a, b)| element(k, a, b)).collect();
    TruncatedSeries::bounded(k, c, 0, 0).unwrap()
}

fn coeffs(n: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-2000i64..2000, -2000i64..2000), n + 1..=n + 1)
}

fn unit() -> impl Strategy<Value = i64> {
    (1i64..10_000).prop_filter("unit", |c| c % 5 != 0)
}

fn agree(a: &TruncatedSeries, b: &TruncatedSeries) -> bool {
    a.eq_at(b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn psi_inverts_phi(c in coeffs(30)) {
        let k = field();
        let f = series(&k, &c);
        let g = psi(&phi(&f)).unwrap();
        prop_assert!(g.trunc() >= 30);
        prop_assert!(agree(&g, &f));
    }

    #[test]
    fn d_commutes_with_phi_and_psi(c in coeffs(40)) {
        let k = field();
        let f = series(&k, &c);
        let five = k.exact_int(5);
        let lhs = d(&phi(&f)).unwrap();
        let rhs = phi(&d(&f).unwrap()).scale(&five);
        prop_assert!(agree(&lhs, &rhs));
        let lhs = psi(&d(&f).unwrap()).unwrap();
        let rhs = d(&psi(&f).unwrap()).unwrap().scale(&five);
        prop_assert!(agree(&lhs, &rhs));
    }

    #[test]
    fn d_twists_gamma(c in coeffs(20), u in unit()) {
        let k = field();
        let f = series(&k, &c);
        let cp = Padic::from_i64(5, u, 20);
        let lhs = d(&gamma_action(&f, &cp).unwrap()).unwrap();
        let rhs = gamma_action(&d(&f).unwrap(), &cp).unwrap().scale(&k.from_padic(cp));
        prop_assert!(agree(&lhs, &rhs));
    }

    #[test]
    fn gamma_is_an_action(c in coeffs(20), u in unit(), v in unit()) {
        let k = field();
        let f = series(&k, &c);
        let (cu, cv) = (Padic::from_i64(5, u, 20), Padic::from_i64(5, v, 20));
        let lhs = gamma_action(&gamma_action(&f, &cv).unwrap(), &cu).unwrap();
        let rhs = gamma_action(&f, &(cu * cv)).unwrap();
        prop_assert!(agree(&lhs, &rhs));
    }

    #[test]
    fn phi_moves_norms_up_one_radius(c in coeffs(30), n in 1u32..=2) {
        let k = field();
        let f = series(&k, &c);
        let a = rho_norm(&f, n).unwrap();
        let b = rho_norm(&phi(&f), n + 1).unwrap();
        prop_assert_eq!(a.value, b.value);
    }

    #[test]
    fn rho_norm_is_multiplicative(c1 in coeffs(25), c2 in coeffs(25), n in 1u32..=3) {
        let k = field();
        let (f, g) = (series(&k, &c1), series(&k, &c2));
        let fg = f.mul(&g);
        let v = rho_norm(&fg, n).unwrap().value;
        prop_assert_eq!(v, rho_norm(&f, n).unwrap().value + rho_norm(&g, n).unwrap().value);
    }

    #[test]
    fn evaluation_is_multiplicative(c1 in coeffs(30), c2 in coeffs(30)) {
        let k = field();
        let (f, g) = (series(&k, &c1), series(&k, &c2));
        let layer = CyclotomicLayer::new(&k, 1).unwrap();
        let ef = cyclotomic_evaluate(&f, &layer).unwrap();
        let eg = cyclotomic_evaluate(&g, &layer).unwrap();
        let efg = cyclotomic_evaluate(&f.mul(&g), &layer).unwrap();
        let diff = &(&ef.value * &eg.value) - &efg.value;
        let bound = ef.precision().min(eg.precision()).min(efg.precision());
        let ok = match diff.valuation() { None => true, Some(v) => v >= bound };
        prop_assert!(ok);
    }

    #[test]
    fn growth_order_shift_by_phi_scalar(c in coeffs(30), ka in -50i64..50, kb in 1i64..50, a in 0u32..4, b in 0u32..4) {
        let k = field();
        let c2 = series(&k, &c);
        prop_assume!(c2.coeffs()[0].val() == Some(0));
        let kappa = element(&k, ka * 5 + 1, kb);
        let c1 = c2.scale(&kappa);
        let mu = phi_quotient_scalar(&c1, &c2, a as i64 - b as i64).unwrap();
        let f = LogPolynomial::new([(a, c1)]).unwrap();
        let g = LogPolynomial::new([(b, c2)]).unwrap();
        let ord = Rational64::from(mu.val().unwrap());
        prop_assert_eq!(f.growth_order().unwrap(), ord + g.growth_order().unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn log_order_recovers_power(c in coeffs(12), r in 0u32..=2) {
        let k = field();
        let n = 160;
        let mut h: Vec<FieldElement> = c.iter().map(|&(a, b)| element(&k, a, b)).collect();
        h.resize(n + 1, k.exact_zero());
        let h = TruncatedSeries::polynomial(&k, h);
        prop_assume!(h.coeffs()[0].val().is_some());
        let layer = CyclotomicLayer::new(&k, 1).unwrap();
        prop_assume!(cyclotomic_evaluate(&h, &layer).unwrap().certified_valuation().is_some());
        let log = TruncatedSeries::log1p(&k, n);
        let f = log.pow(r).mul(&h).with_tail(Tail::Bounded { b: h.coeff_bound(0), r });
        prop_assert_eq!(log_order(&f, 1), LogOrder::Finite(r));
    }
}
