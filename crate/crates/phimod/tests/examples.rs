use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Rational64;
use unorm_padic::linalg::{Mat, DEFAULT_GUARD};
use unorm_padic::UnramifiedField;
use unorm_phimod::presets::{lowest_slope_line, modular_form_module, preset, qp1_analog, unit_object};
use unorm_phimod::*;

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn q5() -> Arc<UnramifiedField> {
    UnramifiedField::qp(5, 20).unwrap()
}

fn ints(k: &Arc<UnramifiedField>, rows: &[&[i128]]) -> Mat {
    Mat::from_rows(k, rows.iter().map(|row| row.iter().map(|&x| k.exact_int(x)).collect()).collect()).unwrap()
}

fn diag_shift(k: &Arc<UnramifiedField>, s: &[i64]) -> Mat {
    let mut m = Mat::zeros(k, s.len(), s.len());
    for (i, &e) in s.iter().enumerate() {
        m.set(i, i, k.exact_int(1).shift(e));
    }
    m
}

fn mf(a_p: i64, weight: i64) -> FilteredPhiModule {
    modular_form_module(&q5(), weight, Rational64::from_integer(a_p), None).unwrap()
}

#[test]
fn hodge_degree_examples() {
    let k = q5();
    let m = FilteredPhiModule::new(&k, Mat::identity(&k, 1), vec![(-1, Mat::identity(&k, 1))]).unwrap();
    assert_eq!(m.t_h(), -1);
    let h = mf(0, 2).hodge();
    assert_eq!(h.h, BTreeMap::from([(-1, 1), (0, 1)]));
    assert_eq!(h.t_h, -1);
    assert_eq!(unit_object(&k).t_h(), 0);
}

#[test]
fn newton_slope_examples() {
    let k = q5();
    let m = FilteredPhiModule::new(&k, diag_shift(&k, &[2, -1]), vec![(0, Mat::identity(&k, 2))]).unwrap();
    assert_eq!(m.newton_slopes().unwrap().slopes, vec![r(-1, 1), r(2, 1)]);

    // Companion matrix of X² + 5.
    let c = ints(&k, &[&[0, -5], &[1, 0]]);
    let m = FilteredPhiModule::new(&k, c, vec![(0, Mat::identity(&k, 2))]).unwrap();
    let np = m.newton_slopes().unwrap();
    assert_eq!(np.slopes, vec![r(1, 2), r(1, 2)]);
    assert_eq!(np.t_n(), Rational64::from_integer(m.t_n().unwrap()));

    // f = 2: A = [[0,1],[p,0]] has A·σ(A) = p·Id.
    let k2 = UnramifiedField::with_degree(5, 2, 20).unwrap();
    let a = ints(&k2, &[&[0, 1], &[5, 0]]);
    let m = FilteredPhiModule::new(&k2, a, vec![(0, Mat::identity(&k2, 2))]).unwrap();
    let b = m.linearized_frobenius();
    assert!(b.sub(&Mat::identity(&k2, 2).shift(1)).is_zero());
    let np = m.newton_slopes().unwrap();
    assert_eq!(np.slopes, vec![r(1, 2), r(1, 2)]);
    // v_p(det B)/f oracle.
    assert_eq!(np.t_n(), Rational64::new(b.det().unwrap().val().unwrap(), 2));
}

#[test]
fn stable_subspace_examples() {
    let k = q5();
    assert_eq!(phi_stable_subspaces(&unit_object(&k)).unwrap().len(), 2);
    let ord = mf(1, 2);
    let subs = phi_stable_subspaces(&ord).unwrap();
    assert_eq!(subs.iter().map(|s| s.dim()).collect::<Vec<_>>(), vec![0, 1, 1, 2]);
    // Eigen-decomposition oracle: each line is mapped to a multiple of itself.
    for s in subs.iter().filter(|s| s.dim() == 1) {
        let v = s.basis().col(0);
        let w = ord.phi_vec(&v);
        let det = &(&v[0] * &w[1]) - &(&v[1] * &w[0]);
        assert!(det.val().is_none_or(|x| x >= 15));
    }
    let ss = mf(0, 2);
    assert_eq!(phi_stable_subspaces(&ss).unwrap().iter().map(|s| s.dim()).collect::<Vec<_>>(), vec![0, 2]);
}

#[test]
fn repeated_eigenvalue_chain() {
    let k = q5();
    // A Jordan block: the only stable line is the eigenline.
    let m = FilteredPhiModule::new(&k, ints(&k, &[&[1, 1], &[0, 1]]), vec![(0, Mat::identity(&k, 2))]).unwrap();
    let subs = phi_stable_subspaces(&m).unwrap();
    assert_eq!(subs.iter().map(|s| s.dim()).collect::<Vec<_>>(), vec![0, 1, 2]);
    let e1 = Subspace::new(ints(&k, &[&[1], &[0]]), DEFAULT_GUARD).unwrap();
    assert!(subs[1].same(&e1, DEFAULT_GUARD).unwrap());
    // A scalar has infinitely many stable lines.
    let m = FilteredPhiModule::new(&k, Mat::identity(&k, 2), vec![(0, Mat::identity(&k, 2))]).unwrap();
    assert!(matches!(phi_stable_subspaces(&m), Err(PhiModError::Unsupported(_))));
}

#[test]
fn induced_submodule_examples() {
    let k = q5();
    let ord = mf(1, 2);
    let full = ord.induced_submodule(&Subspace::full(&k, 2)).unwrap();
    assert_eq!((full.t_h(), full.t_n().unwrap()), (ord.t_h(), ord.t_n().unwrap()));
    let zero = ord.induced_submodule(&Subspace::zero(&k, 2)).unwrap();
    assert_eq!((zero.dim(), zero.t_h(), zero.t_n().unwrap()), (0, 0, 0));
    // The slope-0 eigenline meets Fil^0 = span(e1 + e2) trivially.
    let s0 = phi_stable_subspaces(&ord)
        .unwrap()
        .into_iter()
        .find(|s| s.dim() == 1 && subspace_invariants(&ord, s).unwrap().t_n == 0)
        .unwrap();
    assert!(s0.intersect(&ord.fil(0), DEFAULT_GUARD).unwrap().dim() == 0);
    let ind = ord.induced_submodule(&s0).unwrap();
    assert_eq!(ind.jumps(), vec![-1]);
    // A non-stable line is rejected with its image.
    let e1 = Subspace::new(ints(&k, &[&[1], &[0]]), DEFAULT_GUARD).unwrap();
    assert!(matches!(ord.induced_submodule(&e1), Err(PhiModError::NotStable { .. })));
}

#[test]
fn weak_admissibility_examples() {
    let k = q5();
    let c = is_weakly_admissible(&qp1_analog(&k)).unwrap();
    assert!(c.holds);
    assert_eq!((k.p(), qp1_analog(&k).t_h(), qp1_analog(&k).t_n().unwrap()), (5, -1, -1));
    assert!(is_weakly_admissible(&mf(0, 2)).unwrap().holds);
    assert!(is_weakly_admissible(&mf(1, 2)).unwrap().holds);
    let bad = preset("ordinary-eigenline", 20).unwrap();
    let c = is_weakly_admissible(&bad).unwrap();
    assert!(!c.holds);
    let w = c.witness_entry().unwrap();
    assert_eq!((w.dim(), w.t_h, w.t_n), (1, 0, -1));
    assert!(w.space.same(&bad.fil(0), DEFAULT_GUARD).unwrap());
}

#[test]
fn n_condition_examples() {
    let k = q5();
    assert!(n_condition(&mf(0, 2), 0).unwrap().holds);
    // diag(p^{-1}, 1) with Fil^0 on the slope-0 line: the slope -1 line has
    // Fil^0 = 0 and t_H = t_N.
    let e2 = ints(&k, &[&[0], &[1]]);
    let m = FilteredPhiModule::new(&k, diag_shift(&k, &[-1, 0]), vec![(-1, Mat::identity(&k, 2)), (0, e2)]).unwrap();
    assert!(is_weakly_admissible(&m).unwrap().holds);
    let c = n_condition(&m, 0).unwrap();
    assert!(!c.holds);
    assert_eq!(c.witness_entry().unwrap().t_n, -1);
    assert!(n_condition(&unit_object(&k), 0).unwrap().holds);
}

#[test]
fn fil1_and_rank_examples() {
    let k = q5();
    assert_eq!(fil1(&mf(0, 2)).unwrap().dim(), 0);
    let f = fil1(&mf(0, 2).twist(1)).unwrap();
    assert!(f.same(&Subspace::full(&k, 2), DEFAULT_GUARD).unwrap());
    let ord = mf(1, 2);
    let f = fil1(&ord).unwrap();
    assert_eq!(f.dim(), 1);
    let line = Subspace::new(Mat::from_cols(&k, 2, vec![lowest_slope_line(&ord).unwrap()]), DEFAULT_GUARD).unwrap();
    assert!(f.same(&line, DEFAULT_GUARD).unwrap());
    assert_eq!(universal_norm_rank(&mf(0, 2)).unwrap(), 0);
    assert_eq!(universal_norm_rank(&mf(0, 2).twist(1)).unwrap(), 2);
    assert_eq!(universal_norm_rank(&ord).unwrap(), 1);
}

#[test]
fn rank_tables() {
    let table = |a_p: i64, w: i64, js: std::ops::RangeInclusive<i64>| -> Vec<usize> {
        let m = mf(a_p, w);
        js.map(|j| universal_norm_rank(&m.twist(j)).unwrap()).collect()
    };
    assert_eq!(table(0, 2, -3..=2), vec![0, 0, 0, 0, 2, 2]);
    assert_eq!(table(1, 2, -3..=2), vec![0, 0, 0, 1, 2, 2]);
    assert_eq!(table(0, 4, -4..=1), vec![0, 0, 0, 0, 0, 2]);
}

#[test]
fn twist_examples() {
    let k = q5();
    let m = mf(1, 2);
    let t = m.twist(0);
    assert!(t.phi().sub(m.phi()).is_zero());
    assert_eq!(t.jumps(), m.jumps());
    let u = unit_object(&k).twist(1);
    assert_eq!(u.jumps(), vec![-1]);
    assert!(u.phi().get(0, 0).eq_at(&k.exact_int(1).shift(-1)));
    let t = m.twist(3);
    assert_eq!(t.t_h(), m.t_h() - 6);
    assert_eq!(t.t_n().unwrap(), m.t_n().unwrap() - 6);
}

#[test]
fn tensor_examples() {
    let k = q5();
    let m = mf(1, 2);
    let t = tensor_product(&m, &unit_object(&k)).unwrap();
    assert!(t.phi().sub(m.phi()).is_zero());
    assert_eq!(t.hodge(), m.hodge());
    let a = FilteredPhiModule::new(&k, diag_shift(&k, &[2]), vec![(-3, Mat::identity(&k, 1))]).unwrap();
    let b = FilteredPhiModule::new(&k, diag_shift(&k, &[-1]), vec![(5, Mat::identity(&k, 1))]).unwrap();
    let t = tensor_product(&a, &b).unwrap();
    assert_eq!((t.jumps(), t.t_n().unwrap()), (vec![2], 1));
}

#[test]
fn tensor_hodge_numbers_convolve() {
    let k = q5();
    let m1 = mf(1, 2);
    let m2 = mf(0, 4);
    let t = tensor_product(&m1, &m2).unwrap();
    // Convolution of the h-vectors.
    let mut conv: BTreeMap<i64, usize> = BTreeMap::new();
    for (a, ha) in m1.hodge().h {
        for (b, hb) in m2.hodge().h.iter() {
            *conv.entry(a + b).or_default() += ha * hb;
        }
    }
    assert_eq!(t.hodge().h, conv);
    // Brute-force dimension count of Σ_{a+b=j} Fil^a ⊗ Fil^b.
    for j in -6..=2 {
        let mut cols = Vec::new();
        for a in -5..=3 {
            let (fa, fb) = (m1.fil(a), m2.fil(j - a));
            for u in fa.basis().columns() {
                for v in fb.basis().columns() {
                    cols.push(u.iter().flat_map(|x| v.iter().map(move |y| x * y)).collect());
                }
            }
        }
        let span = Subspace::new(Mat::from_cols(&k, 4, cols), DEFAULT_GUARD).unwrap();
        assert_eq!(span.dim(), t.fil(j).dim(), "j = {j}");
        assert!(span.same(&t.fil(j), DEFAULT_GUARD).unwrap());
    }
}

#[test]
fn wedge_examples() {
    let m = mf(1, 2);
    let w1 = wedge_power(&m, 1).unwrap();
    assert!(w1.phi().sub(m.phi()).is_zero());
    assert_eq!(w1.hodge(), m.hodge());
    for weight in [2, 4] {
        let m = mf(0, weight);
        let w = wedge_power(&m, 2).unwrap();
        assert_eq!(w.dim(), 1);
        assert_eq!(w.newton_slopes().unwrap().slopes, vec![Rational64::from_integer(-(weight - 1))]);
        assert_eq!(w.jumps(), vec![-(weight - 1)]);
        assert_eq!((w.t_h(), w.t_n().unwrap()), (m.t_h(), m.t_n().unwrap()));
    }
    assert!(wedge_power(&m, 3).is_err());
}

#[test]
fn slope_examples() {
    let k = q5();
    assert_eq!(slope_lambda(&mf(0, 2)).unwrap(), Rational64::from_integer(0));
    let m = FilteredPhiModule::new(&k, Mat::identity(&k, 1), vec![(-1, Mat::identity(&k, 1))]).unwrap();
    assert_eq!(slope_lambda(&m).unwrap(), Rational64::from_integer(-1));
    let m2 = FilteredPhiModule::new(&k, diag_shift(&k, &[0, 1]), vec![(-1, Mat::identity(&k, 2)), (0, ints(&k, &[&[1], &[1]]))])
        .unwrap();
    assert_eq!((m2.t_h(), m2.t_n().unwrap()), (-1, 1));
    assert_eq!(slope_lambda(&m2).unwrap(), Rational64::from_integer(-1));
    assert!(matches!(slope_lambda(&FilteredPhiModule::zero(&k)), Err(PhiModError::ZeroModule)));

    assert!(slope_bound_check(&mf(0, 2), Rational64::from_integer(0), false).unwrap().holds);
    let tilde = mf(0, 2).tilde_modification(0).unwrap();
    assert!(slope_bound_check(&tilde, Rational64::from_integer(0), true).unwrap().holds);
    assert!(!slope_bound_check(&m, Rational64::from_integer(-1), true).unwrap().holds);
    assert!(slope_bound_check(&m, Rational64::from_integer(-1), false).unwrap().holds);
}

#[test]
fn totaro_examples() {
    let k = q5();
    let z = Rational64::from_integer(0);
    assert!(totaro_check(&qp1_analog(&k), &unit_object(&k), z, z).unwrap().holds);
    let m = mf(1, 2);
    let c = max_subspace_slope(&m).unwrap();
    let direct = slope_bound_check(&m, c, false).unwrap();
    let via = totaro_check(&unit_object(&k), &m, z, c).unwrap();
    assert_eq!(direct.holds, via.holds);
    assert_eq!(direct.entries.len(), via.entries.len());
}

#[test]
fn tilde_examples() {
    let k = q5();
    let ss = mf(0, 2);
    let t = ss.tilde_modification(0).unwrap();
    assert_eq!(t.t_h(), ss.t_h() - ss.hodge().h[&0] as i64);
    assert_eq!((t.t_h(), t.t_n().unwrap()), (-2, -1));
    assert_eq!(t.jumps(), vec![-1]);
    // A jump that does not collide keeps its step one lower.
    let w4 = mf(0, 4).tilde_modification(0).unwrap();
    assert_eq!(w4.jumps(), vec![-3, -1]);
    assert_eq!(w4.t_h(), -4);
    assert!(matches!(unit_object(&k).twist(1).tilde_modification(0), Err(PhiModError::NotAJump(0))));
}

#[test]
fn modular_form_examples() {
    let ss = mf(0, 2);
    assert_eq!(ss.newton_slopes().unwrap().slopes, vec![r(-1, 2), r(-1, 2)]);
    assert_eq!(ss.jumps(), vec![-1, 0]);
    let ord = mf(1, 2);
    assert_eq!(ord.newton_slopes().unwrap().slopes, vec![r(-1, 1), r(0, 1)]);
    let w4 = mf(0, 4);
    assert_eq!((w4.t_h(), w4.t_n().unwrap()), (-3, -3));
}

#[test]
fn module_validation() {
    let k = q5();
    let sing = ints(&k, &[&[1, 2], &[2, 4]]);
    assert!(matches!(
        FilteredPhiModule::new(&k, sing, vec![(0, Mat::identity(&k, 2))]),
        Err(PhiModError::NotInvertible)
    ));
    let e1 = ints(&k, &[&[1], &[0]]);
    let err = FilteredPhiModule::new(&k, Mat::identity(&k, 2), vec![(0, Mat::identity(&k, 2)), (0, e1.clone())]);
    assert!(matches!(err, Err(PhiModError::Invalid(msg)) if msg.contains("jumps 0 and 0")));
    let err = FilteredPhiModule::new(&k, Mat::identity(&k, 2), vec![(0, e1)]);
    assert!(matches!(err, Err(PhiModError::Invalid(msg)) if msg.contains("full space")));
}
