//! Independent brute-force references shared by the integration tests.
#![allow(dead_code)]

use std::io::Write;

/// Probability of every basis state of a product state.
pub fn product_probabilities(n: usize, x: f64) -> Vec<f64> {
    (0..1u64 << n)
        .map(|s| {
            let j = s.count_ones() as i32;
            x.powi(j) * (1.0 - x).powi(n as i32 - j)
        })
        .collect()
}

/// Smallest achievable target population: the least probable half of the
/// spectrum ends on target-excited states.
pub fn brute_cooled_population(x: f64, n: usize) -> f64 {
    let mut p = product_probabilities(n, x);
    p.sort_by(|a, b| b.total_cmp(a));
    p[p.len() / 2..].iter().sum()
}

fn energy(s: u64, n: usize) -> i64 {
    2 * s.count_ones() as i64 - n as i64
}

/// Minimal work of maximal cooling, in ħω: the most probable half goes to
/// target-0 states and, within each half, probability is paired with energy
/// in opposite order.
pub fn sorted_min_work(x: f64, n: usize) -> f64 {
    let p = product_probabilities(n, x);
    let mut sources: Vec<u64> = (0..1u64 << n).collect();
    sources.sort_by(|&a, &b| p[b as usize].total_cmp(&p[a as usize]).then(a.cmp(&b)));
    let top = 1u64 << (n - 1);
    let mut cold: Vec<u64> = (0..top).collect();
    let mut hot: Vec<u64> = (top..1u64 << n).collect();
    cold.sort_by_key(|&d| (energy(d, n), d));
    hot.sort_by_key(|&d| (energy(d, n), d));
    let mut w = 0.0;
    for (s, d) in sources.iter().zip(cold.iter().chain(hot.iter())) {
        w += p[*s as usize] * (energy(*d, n) - energy(*s, n)) as f64;
    }
    0.5 * w
}

/// Minimal work over every permutation of the 2^N states that reaches the
/// optimal population, by exhaustive enumeration (N ≤ 3).
pub fn exhaustive_min_work(x: f64, n: usize) -> f64 {
    assert!(n <= 3);
    let p = product_probabilities(n, x);
    let optimal = brute_cooled_population(x, n);
    let size = 1usize << n;
    let mut images: Vec<usize> = (0..size).collect();
    let mut best = f64::INFINITY;
    let mut c = vec![0usize; size];
    let mut visit = |img: &[usize]| {
        let target: f64 = (0..size).filter(|&s| img[s] >= size / 2).map(|s| p[s]).sum();
        if (target - optimal).abs() < 1e-12 {
            let w: f64 = (0..size)
                .map(|s| p[s] * (energy(img[s] as u64, n) - energy(s as u64, n)) as f64)
                .sum();
            best = best.min(0.5 * w);
        }
    };
    // Heap's algorithm
    visit(&images);
    let mut i = 0;
    while i < size {
        if c[i] < i {
            if i % 2 == 0 {
                images.swap(0, i);
            } else {
                images.swap(c[i], i);
            }
            visit(&images);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

/// Prints a result line on the real stderr so it shows without `--nocapture`.
pub fn report(tag: &str, pass: bool, name: &str, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr().lock(), "[{tag}] {status} {name}: {detail}");
}

pub fn info(tag: &str, name: &str, detail: &str) {
    let _ = writeln!(std::io::stderr().lock(), "[{tag}] INFO {name}: {detail}");
}

/// Grid `0.05, 0.10, ..., 0.45`.
pub fn x_grid() -> Vec<f64> {
    (1..=9).map(|i| i as f64 * 0.05).collect()
}
