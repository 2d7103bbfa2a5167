//! Library results against independent brute-force references.

mod common;

use common::*;
use dyncool::analytics::excited_population_after_cooling;
use dyncool::protocols::{min_work_permutation, mirror_permutation, ppa_permutation};
use dyncool::work::{minimal_work_bucketed, minimal_work_explicit, permutation_work_quanta};
use dyncool::Permutation;
use proptest::prelude::*;

#[test]
fn cooled_population_matches_sorting() {
    for n in 1..=12 {
        for i in 0..=50 {
            let x = i as f64 / 100.0;
            let lib = excited_population_after_cooling(x, n).unwrap();
            let brute = brute_cooled_population(x, n);
            assert!((lib - brute).abs() < 1e-12, "n={n} x={x}: {lib} vs {brute}");
        }
    }
}

#[test]
fn nine_qubit_values_from_enumeration() {
    assert!((brute_cooled_population(0.01, 9) - 1.218_536_857e-8).abs() < 1e-15);
    assert!((brute_cooled_population(0.1, 9) - 8.909_2e-4).abs() < 1e-8);
    assert!((brute_cooled_population(0.25, 3) - 0.15625).abs() < 1e-16);
}

#[test]
fn exhaustive_three_qubit_minimum() {
    for x in x_grid() {
        let exhaustive = exhaustive_min_work(x, 3);
        let bucket = minimal_work_bucketed(x, 3).unwrap();
        assert!((exhaustive - bucket).abs() < 1e-15, "x={x}");
        assert!((exhaustive - x * (1.0 - x) * (1.0 - 2.0 * x)).abs() < 1e-15);
    }
    assert!((exhaustive_min_work(0.25, 3) - 0.09375).abs() < 1e-16);
}

#[test]
fn sorted_oracle_matches_bucket_matching() {
    for n in 3..=16 {
        for x in x_grid() {
            let oracle = sorted_min_work(x, n);
            let bucket = minimal_work_bucketed(x, n).unwrap();
            assert!((oracle - bucket).abs() <= 1e-10 * oracle, "n={n} x={x}");
        }
    }
}

#[test]
fn suboptimal_two_step_work_from_oracle() {
    let x = 0.25;
    let f = brute_cooled_population(x, 3);
    let w = 3.0 * sorted_min_work(x, 3) + sorted_min_work(f, 3);
    assert!((w - 0.37189).abs() < 1e-4);
    assert!((w - 0.37188720703125).abs() < 1e-14);
}

#[test]
fn table_cycles_have_expected_work() {
    let x = 0.25;
    let mirror = permutation_work_quanta(&mirror_permutation(4).unwrap(), x);
    assert!((mirror - 2.0 * (0.75f64.powi(3) * 0.25 - 0.75 * 0.25f64.powi(3))).abs() < 1e-15);
    let six = Permutation::from_cycles(3, vec![vec![0b001, 0b000, 0b011, 0b111, 0b101, 0b100]]).unwrap();
    let w6 = permutation_work_quanta(&six, x);
    assert!(w6 >= minimal_work_explicit(x, 3).unwrap());
}

proptest! {
    #[test]
    fn explicit_protocols_match_oracle(n in 3usize..=12, x in 0.01f64..0.49) {
        let oracle = sorted_min_work(x, n);
        let explicit = permutation_work_quanta(&min_work_permutation(n, x).unwrap(), x);
        prop_assert!((oracle - explicit).abs() <= 1e-10 * oracle);
        for other in [mirror_permutation(n).unwrap(), ppa_permutation(n, x).unwrap()] {
            prop_assert!(permutation_work_quanta(&other, x) >= explicit - 1e-12);
        }
    }

    #[test]
    fn population_is_monotone(n in 1usize..=200, a in 0.0f64..0.5, b in 0.0f64..0.5) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let plo = excited_population_after_cooling(lo, n).unwrap();
        let phi = excited_population_after_cooling(hi, n).unwrap();
        prop_assert!(plo <= phi + 1e-15);
        prop_assert!(phi <= hi + 1e-15);
    }

    #[test]
    fn more_qubits_cool_more(n in 1usize..=300, x in 0.001f64..0.499) {
        let a = excited_population_after_cooling(x, n).unwrap();
        let b = excited_population_after_cooling(x, n + 2).unwrap();
        prop_assert!(b <= a * (1.0 + 1e-12));
    }
}
