use num_rational::Rational64;
use proptest::prelude::*;
use unorm_cli::table::mf_rank_table;

/// Expected rank: 0 below the lowest jump, 2 once both Hodge jumps are at
/// least 1, and 1 in between only when `a_p` is a unit.
fn expected(weight: i64, ordinary: bool, j: i64) -> usize {
    if j >= 1 {
        2
    } else if ordinary && j >= 2 - weight {
        1
    } else {
        0
    }
}

#[test]
fn shipped_tables() {
    let cases = [(2, 0, -3, 2, vec![0, 0, 0, 0, 2, 2]), (2, 1, -3, 2, vec![0, 0, 0, 1, 2, 2]), (4, 0, -4, 1, vec![0, 0, 0, 0, 0, 2])];
    for (k, ap, j0, j1, ranks) in cases {
        let t = mf_rank_table(5, k, Rational64::from(ap), j0, j1, 20).unwrap();
        assert_eq!(t.ranks(), ranks, "k = {k}, a_p = {ap}");
    }
}

#[test]
fn tsv_layout() {
    let t = mf_rank_table(5, 2, Rational64::from(1), -1, 1, 20).unwrap();
    assert_eq!(t.tsv(), "j\tdim_fil1\trank\n-1\t0\t0\n0\t1\t1\n1\t2\t2\n");
}

#[test]
fn rejects_reversed_range() {
    assert!(mf_rank_table(5, 2, Rational64::from(0), 2, -2, 20).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ordinary_and_supersingular_rows(pi in 0usize..4, weight in 2i64..=6, unit in 1i64..40, ordinary in any::<bool>()) {
        let p = [3u32, 5, 7, 11][pi];
        prop_assume!(unit % p as i64 != 0);
        let a_p = if ordinary { Rational64::from(unit) } else { Rational64::from(0) };
        let t = mf_rank_table(p, weight, a_p, -weight - 1, 2, 20).unwrap();
        for row in &t.rows {
            prop_assert_eq!(row.rank, expected(weight, ordinary, row.j), "j = {}", row.j);
            prop_assert_eq!(row.rank, row.dim_fil1);
        }
        prop_assert!(t.ranks().windows(2).all(|w| w[0] <= w[1]));
    }
}
