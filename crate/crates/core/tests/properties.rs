//! Randomized invariants of the matrix, cycle and search layers.

use proptest::prelude::*;

use qcets::cycles::{girth_from_exponent, six_cycle_exists};
use qcets::graph::{bfs_girth, lift};
use qcets::io::{parse_exponent_matrix, write_exponent_matrix};
use qcets::matrix::ExponentMatrix;
use qcets::{check_girth6_etsfree, check_girth8_etsfree, check_lemma7_six_cycle_conditions};

fn matrix() -> impl Strategy<Value = ExponentMatrix> {
    (2usize..=6, 2u32..=40).prop_flat_map(|(n, lifting)| {
        proptest::array::uniform3(proptest::collection::vec(0..lifting, n))
            .prop_map(move |rows| ExponentMatrix::new(lifting, rows).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pair_components_cancel(b in matrix()) {
        let dd = b.pair_difference_matrix();
        let modulus = b.lifting_degree();
        for row in 0..3 {
            for &(x, y) in dd.row(row) {
                prop_assert_eq!((x + y) % modulus, 0);
            }
        }
    }

    #[test]
    fn text_round_trip(b in matrix()) {
        prop_assert_eq!(parse_exponent_matrix(&write_exponent_matrix(&b)).unwrap(), b);
    }

    #[test]
    fn normalization_keeps_cycles_and_conditions(b in matrix()) {
        let nb = b.normalized();
        prop_assert!(nb.is_normalized());
        prop_assert_eq!(nb.pair_difference_matrix(), b.pair_difference_matrix());
        prop_assert_eq!(girth_from_exponent(&nb), girth_from_exponent(&b));
        prop_assert_eq!(check_girth6_etsfree(&nb).passed(), check_girth6_etsfree(&b).passed());
    }

    #[test]
    fn column_order_does_not_change_the_graph_girth(b in matrix(), seed in any::<u64>()) {
        let n = b.n_cols();
        let mut order: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let p = b.permute_columns(&order);
        prop_assert_eq!(bfs_girth(&lift(&p), 10), bfs_girth(&lift(&b), 10));
    }

    #[test]
    fn six_cycle_inequalities_match_the_cycle_test(b in matrix()) {
        let nb = b.normalized();
        let lemma = check_lemma7_six_cycle_conditions(&nb).unwrap().passed();
        prop_assert_eq!(lemma, six_cycle_exists(&nb).is_none());
    }

    #[test]
    fn girth8_conditions_imply_girth_eight(b in matrix()) {
        let nb = b.normalized();
        if check_girth8_etsfree(&nb).unwrap().passed() {
            prop_assert!(bfs_girth(&lift(&nb), 8).capped_value() >= 8);
        }
    }
}
