use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use unorm_padic::linalg::Mat;
use unorm_padic::{CyclotomicLayer, FieldElement, Padic, UnramifiedField};

const P: u32 = 5;

fn padic(n: i64, d: i64) -> Padic {
    Padic::from_ratio(P, &BigInt::from(n), &BigInt::from(d), 30).unwrap()
}

fn nz_den() -> impl Strategy<Value = i64> {
    (1i64..2000).prop_filter("coprime to p", |d| d % P as i64 != 0)
}

fn felt(k: &std::sync::Arc<UnramifiedField>, c: &[i64]) -> FieldElement {
    k.from_coords(c.iter().map(|&x| Padic::from_i64(P, x, k.prec())).collect()).unwrap()
}

proptest! {
    #[test]
    fn ring_axioms(a in -10_000i64..10_000, b in -10_000i64..10_000, c in -10_000i64..10_000, d in nz_den()) {
        let (x, y, z) = (padic(a, d), padic(b, 1), padic(c, d));
        prop_assert!(((x + y) + z).eq_at(&(x + (y + z))));
        prop_assert!((x * (y + z)).eq_at(&(x * y + x * z)));
        prop_assert!((x * y).eq_at(&(y * x)));
        prop_assert!((x - x).is_zero());
    }

    #[test]
    fn rational_round_trip(n in -100_000i64..100_000, d in nz_den(), s in -3i64..3) {
        let q = BigRational::new(BigInt::from(n), BigInt::from(d)) * BigRational::from_integer(BigInt::from(P as i64).pow(s.unsigned_abs() as u32)).pow(s.signum() as i32);
        let x = Padic::from_ratio(P, q.numer(), q.denom(), 30).unwrap();
        let (num, den) = x.rational_reconstruction().unwrap();
        prop_assert_eq!(BigRational::new(num, den), q);
    }

    #[test]
    fn inverse_is_inverse(n in 1i64..100_000, d in nz_den()) {
        let x = padic(n, d);
        let one = Padic::one(P, 30);
        prop_assert!((x * x.inv().unwrap()).eq_at(&one));
    }

    #[test]
    fn frobenius_is_ring_hom(a in prop::collection::vec(-50i64..50, 3), b in prop::collection::vec(-50i64..50, 3)) {
        let k = UnramifiedField::with_degree(P, 3, 20).unwrap();
        let (x, y) = (felt(&k, &a), felt(&k, &b));
        prop_assert!((&x * &y).sigma().eq_at(&(&x.sigma() * &y.sigma())));
        prop_assert!((&x + &y).sigma().eq_at(&(&x.sigma() + &y.sigma())));
        prop_assert!(x.sigma_pow(3).eq_at(&x));
        prop_assert!(x.sigma().sigma_inv().eq_at(&x));
    }

    #[test]
    fn field_inverse(a in prop::collection::vec(-50i64..50, 2)) {
        let k = UnramifiedField::with_degree(P, 2, 20).unwrap();
        let x = felt(&k, &a);
        prop_assume!(!x.is_zero());
        prop_assert!((&x * &x.inv().unwrap()).eq_at(&k.one()));
    }

    #[test]
    fn cyclotomic_valuation_is_additive(a in prop::collection::vec(-20i64..20, 4), b in prop::collection::vec(-20i64..20, 4), n in 1u32..3) {
        let k = UnramifiedField::qp(P, 20).unwrap();
        let layer = CyclotomicLayer::new(&k, n).unwrap();
        let e = layer.ramification();
        let mk = |c: &[i64]| {
            let mut cs: Vec<FieldElement> = c.iter().map(|&x| k.from_i64(x)).collect();
            cs.resize(e, k.exact_zero());
            layer.from_coords(cs).unwrap()
        };
        let (x, y) = (mk(&a), mk(&b));
        prop_assume!(!x.is_zero() && !y.is_zero());
        let xy = &x * &y;
        prop_assert_eq!(xy.valuation().unwrap(), x.valuation().unwrap() + y.valuation().unwrap());
    }

    #[test]
    fn det_is_multiplicative(a in prop::collection::vec(-30i64..30, 9), b in prop::collection::vec(-30i64..30, 9)) {
        let k = UnramifiedField::qp(P, 20).unwrap();
        let mk = |v: &[i64]| Mat::from_rows(&k, v.chunks(3).map(|r| r.iter().map(|&x| k.from_i64(x)).collect()).collect()).unwrap();
        let (x, y) = (mk(&a), mk(&b));
        let lhs = x.mul(&y).det().unwrap();
        let rhs = &x.det().unwrap() * &y.det().unwrap();
        prop_assert!(lhs.eq_at(&rhs));
    }
}
