use std::sync::Arc;

use num_rational::Rational64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unorm_padic::linalg::DEFAULT_GUARD;
use unorm_padic::UnramifiedField;
use unorm_phimod::random::{random_generic, random_module, random_slopes, random_weakly_admissible, spread_weights};
use unorm_phimod::*;

fn field(f: usize) -> Arc<UnramifiedField> {
    UnramifiedField::with_degree(5, f, 20).unwrap()
}

fn wa(seed: u64, f: usize, d: usize) -> FilteredPhiModule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_weakly_admissible(&field(f), d, &mut rng).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn twist_preserves_weak_admissibility(seed in any::<u64>(), f in 1usize..=2, d in 1usize..=3, k in -3i64..=3) {
        let m = wa(seed, f, d);
        prop_assert!(is_weakly_admissible(&m.twist(k)).unwrap().holds);
    }

    #[test]
    fn admissible_certificates_are_exact(seed in any::<u64>(), d in 1usize..=3) {
        let m = wa(seed, 1, d);
        let cert = is_weakly_admissible(&m).unwrap();
        for e in &cert.entries {
            prop_assert!(e.t_h <= e.t_n);
            // Recompute from scratch on the induced module.
            let ind = m.induced_submodule(&e.space).unwrap();
            prop_assert_eq!(ind.t_h(), e.t_h);
            prop_assert_eq!(Rational64::from_integer(e.t_n), ind.newton_slopes().unwrap().t_n());
        }
    }

    #[test]
    fn fil1_grows_under_twist(seed in any::<u64>(), f in 1usize..=2, d in 1usize..=3) {
        let m = wa(seed, f, d);
        let a = fil1(&m).unwrap();
        let b = fil1(&m.twist(1)).unwrap();
        prop_assert!(b.contains(&a, DEFAULT_GUARD).unwrap());
    }

    #[test]
    fn rank_staircase(seed in any::<u64>(), f in 1usize..=2, d in 1usize..=3) {
        let m = wa(seed, f, d);
        let (lo, hi) = (m.min_jump().unwrap(), m.max_jump().unwrap());
        let ranks: Vec<usize> = (lo - 1..=hi + 2).map(|j| universal_norm_rank(&m.twist(j)).unwrap()).collect();
        prop_assert!(ranks.windows(2).all(|w| w[0] <= w[1]), "{:?}", ranks);
        prop_assert_eq!(*ranks.last().unwrap(), f * d);
        prop_assert_eq!(universal_norm_rank(&m.twist(hi + 1)).unwrap(), f * d);
    }

    #[test]
    fn degrees_of_constructions(seed in any::<u64>(), d1 in 1usize..=3, d2 in 1usize..=2) {
        let k = field(1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m1 = random_generic(&k, d1, &mut rng).unwrap();
        let m2 = random_generic(&k, d2, &mut rng).unwrap();
        let top = wedge_power(&m1, d1).unwrap();
        prop_assert_eq!(top.t_h(), m1.t_h());
        prop_assert_eq!(top.t_n().unwrap(), m1.t_n().unwrap());
        let t = tensor_product(&m1, &m2).unwrap();
        prop_assert_eq!(t.t_h(), d2 as i64 * m1.t_h() + d1 as i64 * m2.t_h());
        prop_assert_eq!(t.t_n().unwrap(), d2 as i64 * m1.t_n().unwrap() + d1 as i64 * m2.t_n().unwrap());
        prop_assert_eq!(t.newton_slopes().unwrap().t_n(), Rational64::from_integer(t.t_n().unwrap()));
    }

    #[test]
    fn n_condition_gives_negative_tilde(seed in any::<u64>(), d in 1usize..=3) {
        let k = field(1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Weakly admissible with top jump 0, by twisting.
        let slopes = random_slopes(d, -2, 1, &mut rng);
        let moves = 2 * d;
        let w = spread_weights(&slopes, moves, &mut rng);
        let m = random_module(&k, &slopes, &w, &mut rng).unwrap();
        let m = m.twist(m.max_jump().unwrap());
        prop_assume!(is_weakly_admissible(&m).unwrap().holds);
        prop_assume!(n_condition(&m, 0).unwrap().holds);
        let t = m.tilde_modification(0).unwrap();
        prop_assert!(slope_bound_check(&t, Rational64::from_integer(0), true).unwrap().holds);
    }

    #[test]
    fn totaro_on_generic_pairs(seed in any::<u64>()) {
        let k = field(1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m1 = random_generic(&k, 2, &mut rng).unwrap();
        let m2 = random_generic(&k, 2, &mut rng).unwrap();
        let c1 = max_subspace_slope(&m1).unwrap();
        let c2 = max_subspace_slope(&m2).unwrap();
        prop_assert!(totaro_check(&m1, &m2, c1, c2).unwrap().holds);
    }
}
