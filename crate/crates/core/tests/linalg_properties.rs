mod common;

use num_bigint::BigUint;
use proptest::prelude::*;

use common::{brute_f2_rank, brute_kernel_dim, identity_minus, invariant_factors_by_minors};
use lyagraph::linalg::{det_abs, f2_rank, mod2_reduce, smith_normal_form, F2Matrix, IntMatrix};
use lyagraph::sft::{invariant_report, is_permutation, k_invariant};

fn square(max_n: usize, max_entry: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(prop::collection::vec(0..=max_entry, n), n)
    })
}

fn bits(max_r: usize, max_c: usize) -> impl Strategy<Value = Vec<Vec<bool>>> {
    (1..=max_r, 1..=max_c).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(any::<bool>(), c), r)
    })
}

fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows).unwrap()
}

fn f2(rows: &[Vec<bool>]) -> F2Matrix {
    F2Matrix::from_fn(rows.len(), rows[0].len(), |r, c| rows[r][c])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn f2_rank_matches_brute_force(rows in bits(12, 12)) {
        let m = f2(&rows);
        prop_assert_eq!(f2_rank(&m), brute_f2_rank(&rows));
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn k_matches_kernel_count(rows in square(10, 3)) {
        prop_assert_eq!(k_invariant(&int_matrix(&rows)).unwrap(), brute_kernel_dim(&rows));
    }

    #[test]
    fn smith_form_matches_determinantal_divisors(rows in square(4, 3)) {
        let a = int_matrix(&rows);
        let snf = smith_normal_form(&a.identity_minus().unwrap());
        let expected: Vec<BigUint> = invariant_factors_by_minors(&identity_minus(&rows))
            .into_iter()
            .map(|d| BigUint::try_from(d).unwrap())
            .collect();
        prop_assert_eq!(&snf.invariant_factors, &expected);
    }

    #[test]
    fn smith_parities_and_determinant(rows in square(8, 3)) {
        let a = int_matrix(&rows);
        let i_minus_a = a.identity_minus().unwrap();
        let snf = smith_normal_form(&i_minus_a);
        prop_assert_eq!(snf.count_odd(), f2_rank(&mod2_reduce(&i_minus_a)));
        prop_assert_eq!(snf.count_even(), k_invariant(&a).unwrap());
        prop_assert_eq!(snf.product(), det_abs(&i_minus_a).unwrap());
        let report = invariant_report(&a).unwrap();
        prop_assert_eq!(report.parry_sullivan, snf.product());
    }

    #[test]
    fn k_is_a_conjugacy_invariant(rows in square(8, 3), seed in any::<u64>()) {
        let a = int_matrix(&rows);
        let n = rows.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut state = seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let k = k_invariant(&a).unwrap();
        prop_assert_eq!(k_invariant(&a.transpose()).unwrap(), k);
        prop_assert_eq!(k_invariant(&a.conjugate_by_permutation(&perm).unwrap()).unwrap(), k);
    }

    #[test]
    fn k_of_a_permutation_counts_cycles(perm in (1usize..=10).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())) {
        let n = perm.len();
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(perm[i] == j)).collect())
            .collect();
        let mut seen = vec![false; n];
        let mut cycles = 0;
        for start in 0..n {
            if !seen[start] {
                cycles += 1;
                let mut v = start;
                while !seen[v] {
                    seen[v] = true;
                    v = perm[v];
                }
            }
        }
        let a = int_matrix(&rows);
        prop_assert!(is_permutation(&a).unwrap());
        prop_assert_eq!(k_invariant(&a).unwrap(), cycles);
    }
}

#[test]
fn wide_matrices_cross_word_boundaries() {
    // Rows i < 70 have bits i and i + 64; each later row is the sum of two
    // earlier ones, so the rank stays 70.
    let mut rows: Vec<Vec<bool>> = (0..70)
        .map(|i| (0..140).map(|j| j == i || j == i + 64).collect())
        .collect();
    for i in 0..30 {
        let sum: Vec<bool> = (0..140).map(|j| rows[i][j] ^ rows[i + 40][j]).collect();
        rows.push(sum);
    }
    let m = f2(&rows);
    assert_eq!(m.rank(), 70);
    assert_eq!(m.transpose().rank(), 70);
}
