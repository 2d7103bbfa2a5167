//! Work cost of cooling permutations.
//!
//! Work values are in units of `ħω` unless the name says joules. The minimal
//! work of maximal cooling at large `N` comes from matching excitation-count
//! buckets against destination groups with exact integer multiplicities.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::analytics::{quantum_energy, ThermalEnsembleSpec};
use crate::error::{CoolingError, Result};
use crate::numerics::{binomial_row, ln_biguint, mul_log, NeumaierSum};
use crate::protocols::min_work_permutation;
use crate::state::{check_indexed, energy_half_units, excitations, Permutation, MAX_EXPLICIT_QUBITS};
use crate::suboptimal::population_recursion;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorkMethod {
    Explicit,
    Bucketed,
    /// Sum over the steps of clustered cooling.
    Clustered,
}

impl fmt::Display for WorkMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WorkMethod::Explicit => "explicit",
            WorkMethod::Bucketed => "bucketed",
            WorkMethod::Clustered => "clustered",
        })
    }
}

/// Work done on the ensemble by a cooling unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkReport {
    pub n_qubits: usize,
    pub omega: f64,
    /// Total work in units of `ħω`.
    pub work_quanta: f64,
    pub method: WorkMethod,
}

impl WorkReport {
    pub fn work_joules(&self) -> f64 {
        self.work_quanta * quantum_energy(self.omega)
    }

    pub fn work_per_qubit_quanta(&self) -> f64 {
        self.work_quanta / self.n_qubits as f64
    }

    pub fn work_per_qubit_joules(&self) -> f64 {
        self.work_joules() / self.n_qubits as f64
    }
}

fn ln_state_probability(j: u64, n: u64, ln_x: f64, ln_y: f64) -> f64 {
    mul_log(n - j, ln_y) + mul_log(j, ln_x)
}

/// Energy change `Σ p(s) (E(π(s)) - E(s))` over moved states, in `ħω`.
pub fn permutation_work_quanta(perm: &Permutation, x: f64) -> f64 {
    let n = perm.n_qubits();
    let (ln_x, ln_y) = (x.ln(), (-x).ln_1p());
    let mut acc = NeumaierSum::new();
    for (s, d) in perm.moves() {
        let de = energy_half_units(d, n) - energy_half_units(s, n);
        if de != 0 {
            let p = ln_state_probability(excitations(s) as u64, n as u64, ln_x, ln_y).exp();
            acc.add(p * de as f64);
        }
    }
    0.5 * acc.value()
}

/// Work of applying `perm` to the thermal state described by `spec`.
pub fn work_of_permutation(perm: &Permutation, spec: &ThermalEnsembleSpec) -> Result<WorkReport> {
    if perm.n_qubits() != spec.n_qubits() {
        return Err(CoolingError::QubitMismatch {
            expected: spec.n_qubits(),
            found: perm.n_qubits(),
        });
    }
    Ok(WorkReport {
        n_qubits: spec.n_qubits(),
        omega: spec.omega(),
        work_quanta: permutation_work_quanta(perm, spec.excited_population()),
        method: WorkMethod::Explicit,
    })
}

/// Minimal work of maximal cooling by greedy bucket matching, in `ħω`.
///
/// Sources are excitation-count classes in order of decreasing per-state
/// probability. Destinations are the target-0 states grouped by excitation
/// count, followed by the target-1 states, each in increasing energy.
pub fn minimal_work_bucketed(x: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(CoolingError::domain("n_qubits", 0.0, ">= 1"));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(CoolingError::domain("x", x, "within [0, 1]"));
    }
    if x == 0.0 || x == 0.5 || n < 3 {
        return Ok(0.0);
    }
    let n64 = n as u64;
    let (ln_x, ln_y) = (x.ln(), (-x).ln_1p());
    let full = binomial_row(n64);
    let aux = binomial_row(n64 - 1);

    let mut classes: Vec<u64> = (0..=n64).collect();
    if x > 0.5 {
        classes.reverse();
    }
    // (remaining count, energy in half quanta)
    let mut groups: Vec<(BigUint, i64)> = Vec::with_capacity(2 * n);
    for (j, c) in aux.iter().enumerate() {
        groups.push((c.clone(), 2 * j as i64 - n as i64));
    }
    for (j, c) in aux.iter().enumerate() {
        groups.push((c.clone(), 2 * (j as i64 + 1) - n as i64));
    }

    let mut acc = NeumaierSum::new();
    let mut g = 0;
    for j in classes {
        let mut left = full[j as usize].clone();
        let source_energy = 2 * j as i64 - n as i64;
        let ln_p = ln_state_probability(j, n64, ln_x, ln_y);
        while !left.is_zero() {
            while groups[g].0.is_zero() {
                g += 1;
            }
            let take = (&left).min(&groups[g].0).clone();
            let de = groups[g].1 - source_energy;
            if de != 0 {
                acc.add((ln_biguint(&take) + ln_p).exp() * de as f64);
            }
            left -= &take;
            groups[g].0 -= &take;
        }
    }
    Ok(0.5 * acc.value())
}

/// Minimal work from the explicit minimal-work permutation, in `ħω`.
pub fn minimal_work_explicit(x: f64, n: usize) -> Result<f64> {
    check_indexed(n)?;
    if n > MAX_EXPLICIT_QUBITS {
        return Err(CoolingError::capacity(
            "explicit minimal work",
            n,
            MAX_EXPLICIT_QUBITS,
        ));
    }
    if x == 0.0 || x == 0.5 || n < 3 {
        return Ok(0.0);
    }
    Ok(permutation_work_quanta(&min_work_permutation(n, x)?, x))
}

/// Minimal work over all maximal-cooling permutations.
pub fn minimal_work(spec: &ThermalEnsembleSpec) -> Result<WorkReport> {
    let (n, x) = (spec.n_qubits(), spec.excited_population());
    let (work_quanta, method) = if n <= MAX_EXPLICIT_QUBITS && x > 0.0 && x < 0.5 {
        (minimal_work_explicit(x, n)?, WorkMethod::Explicit)
    } else {
        (minimal_work_bucketed(x, n)?, WorkMethod::Bucketed)
    };
    Ok(WorkReport {
        n_qubits: n,
        omega: spec.omega(),
        work_quanta,
        method,
    })
}

/// Large-ensemble per-qubit work `(x - 2x²)/2`, in `ħω`.
pub fn rescaled_work_limit(p1: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&p1) {
        return Err(CoolingError::domain("p1", p1, "within [0, 1/2]"));
    }
    Ok(0.5 * (p1 - 2.0 * p1 * p1))
}

/// Per-qubit work limit at reduced temperature `θ = k_BT/ħω`, in `ħω`.
pub fn rescaled_work_limit_reduced(theta: f64) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(CoolingError::domain("temperature", theta, "> 0"));
    }
    let a = 1.0 / theta;
    Ok(0.5 * (0.5 * a).tanh() / (a.exp() + 1.0))
}

/// Per-qubit work limit at temperature `T`, in `ħω`.
pub fn rescaled_work_limit_temperature(temperature: f64, omega: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(CoolingError::domain("omega", omega, "> 0"));
    }
    rescaled_work_limit_reduced(temperature / crate::analytics::characteristic_temperature(omega))
}

/// Work of `r`-step clustered cooling with clusters of `n` qubits:
/// step `k` runs `n^(r-k)` clusters at population `f_n^(k-1)(p1)`.
pub fn suboptimal_work(p1: f64, n: usize, r: u32, omega: f64) -> Result<WorkReport> {
    if n < 3 {
        return Err(CoolingError::domain(
            "cluster size",
            n as f64,
            ">= 3 (no cooling below)",
        ));
    }
    if r == 0 {
        return Err(CoolingError::domain("steps", 0.0, ">= 1"));
    }
    let total = (n as u64)
        .checked_pow(r)
        .filter(|&t| t <= usize::MAX as u64)
        .ok_or(CoolingError::domain(
            "steps",
            r as f64,
            "n^r must fit in the address space",
        ))?;
    let mut acc = NeumaierSum::new();
    for k in 1..=r {
        let x = population_recursion(p1, n, k - 1)?;
        let clusters = (n as f64).powi((r - k) as i32);
        let spec = ThermalEnsembleSpec::new(n, omega, x)?;
        acc.add(clusters * minimal_work(&spec)?.work_quanta);
    }
    Ok(WorkReport {
        n_qubits: total as usize,
        omega,
        work_quanta: acc.value(),
        method: WorkMethod::Clustered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::{mirror_permutation, ppa_permutation};

    const OMEGA: f64 = 5e9;

    fn spec(n: usize, x: f64) -> ThermalEnsembleSpec {
        ThermalEnsembleSpec::new(n, OMEGA, x).unwrap()
    }

    #[test]
    fn four_qubit_values() {
        let m = work_of_permutation(&mirror_permutation(4).unwrap(), &spec(4, 0.25)).unwrap();
        assert!((m.work_quanta - 0.1875).abs() < 1e-15);
        let w = minimal_work(&spec(4, 0.25)).unwrap();
        assert!((w.work_quanta - 0.09375).abs() < 1e-15);
        assert_eq!(w.method, WorkMethod::Explicit);
        let id = Permutation::identity(4).unwrap();
        assert_eq!(work_of_permutation(&id, &spec(4, 0.25)).unwrap().work_quanta, 0.0);
    }

    #[test]
    fn three_qubit_closed_form() {
        for i in 1..10 {
            let x = i as f64 * 0.05;
            let expected = x * (1.0 - x) * (1.0 - 2.0 * x);
            assert!((minimal_work_bucketed(x, 3).unwrap() - expected).abs() < 1e-15);
            assert!((minimal_work_bucketed(x, 4).unwrap() - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn endpoints_cost_nothing() {
        for n in [3, 10, 100] {
            assert_eq!(minimal_work_bucketed(0.0, n).unwrap(), 0.0);
            assert_eq!(minimal_work_bucketed(0.5, n).unwrap(), 0.0);
        }
        assert_eq!(minimal_work(&spec(5, 0.0)).unwrap().work_quanta, 0.0);
    }

    #[test]
    fn bucketed_matches_explicit() {
        for n in 3..=14 {
            for i in 1..10 {
                let x = i as f64 * 0.05;
                let b = minimal_work_bucketed(x, n).unwrap();
                let e = minimal_work_explicit(x, n).unwrap();
                assert!((b - e).abs() <= 1e-10 * e.abs().max(1e-300), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn min_work_beats_other_protocols() {
        for n in 3..=10 {
            for i in 1..10 {
                let x = i as f64 * 0.05;
                let best = minimal_work_explicit(x, n).unwrap();
                let mirror = permutation_work_quanta(&mirror_permutation(n).unwrap(), x);
                let ppa = permutation_work_quanta(&ppa_permutation(n, x).unwrap(), x);
                assert!(best <= mirror + 1e-15 && best <= ppa + 1e-15, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn large_ensembles_are_finite_and_positive() {
        for n in [1024, 4096] {
            let w = minimal_work_bucketed(0.25, n).unwrap();
            assert!(w.is_finite() && w > 0.0);
        }
        let w = minimal_work(&spec(64, 0.25)).unwrap();
        assert_eq!(w.method, WorkMethod::Bucketed);
    }

    #[test]
    fn limit_formula() {
        assert_eq!(rescaled_work_limit(0.25).unwrap(), 0.0625);
        assert_eq!(rescaled_work_limit(0.0).unwrap(), 0.0);
        assert_eq!(rescaled_work_limit(0.5).unwrap(), 0.0);
        assert!(rescaled_work_limit(0.6).is_err());
        let grid: Vec<f64> = (0..=500).map(|i| i as f64 / 1000.0).collect();
        let best = grid
            .iter()
            .copied()
            .max_by(|a, b| {
                rescaled_work_limit(*a)
                    .unwrap()
                    .total_cmp(&rescaled_work_limit(*b).unwrap())
            })
            .unwrap();
        assert_eq!(best, 0.25);
    }

    #[test]
    fn limit_in_temperature_form() {
        for theta in [0.05, 0.2, 1.0, 10.0] {
            let x = crate::analytics::population_from_reduced_temperature(theta).unwrap();
            let a = rescaled_work_limit_reduced(theta).unwrap();
            let b = rescaled_work_limit(x).unwrap();
            assert!((a - b).abs() < 1e-12, "theta={theta}");
        }
        let w = rescaled_work_limit_reduced(0.2).unwrap();
        assert!((w - 0.003_301_6).abs() < 1e-6, "{w}");
        assert!(rescaled_work_limit_reduced(0.01).unwrap() < 1e-40);
        let hot = rescaled_work_limit_reduced(1e4).unwrap();
        assert!((hot * 1e4 - 0.125).abs() < 1e-4);
    }

    #[test]
    fn clustered_work() {
        let one = suboptimal_work(0.25, 3, 1, OMEGA).unwrap();
        assert!((one.work_quanta - minimal_work(&spec(3, 0.25)).unwrap().work_quanta).abs() < 1e-15);
        let two = suboptimal_work(0.25, 3, 2, OMEGA).unwrap();
        assert!((two.work_quanta - 0.37188720703125).abs() < 1e-12);
        assert_eq!(two.n_qubits, 9);
        assert!(suboptimal_work(0.25, 2, 2, OMEGA).is_err());
    }
}
