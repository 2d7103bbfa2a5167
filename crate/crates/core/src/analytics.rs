//! Closed-form cooling mathematics for an ensemble of identical thermal qubits.
//!
//! Temperatures are in kelvin, angular frequencies in rad/s. Populations are
//! the excited-state probability of a single qubit. The optimal cooled
//! population of the target is evaluated in the log domain so it stays finite
//! and accurate for ensembles with thousands of qubits.

use crate::error::{CoolingError, Result};
use crate::numerics::{binomial_u64, ln_binomial, log_sum_exp, mul_log, softplus};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_BOLTZMANN: f64 = 1.380_649e-23;

/// Physical constants used for energy/temperature conversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub k_boltzmann: f64,
}

impl PhysicalConstants {
    pub const CODATA: PhysicalConstants = PhysicalConstants {
        hbar: HBAR,
        k_boltzmann: K_BOLTZMANN,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA
    }
}

/// `ħω / k_B` in kelvin.
pub fn characteristic_temperature(omega: f64) -> f64 {
    HBAR * omega / K_BOLTZMANN
}

/// One quantum `ħω` in joules.
pub fn quantum_energy(omega: f64) -> f64 {
    HBAR * omega
}

/// Effective temperature of a two-level population.
///
/// Populations above one half map to negative temperatures and are kept
/// distinct from the exact singular points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EffectiveTemperature {
    /// Positive finite temperature in kelvin.
    Finite(f64),
    /// Population inversion: negative temperature in kelvin.
    Inverted(f64),
    /// Excited population exactly zero.
    AbsoluteZero,
    /// Excited population exactly one half.
    Infinite,
    /// Excited population exactly one.
    InvertedSaturated,
}

impl EffectiveTemperature {
    /// Signed kelvin value; `0`, `+inf` and `-0` for the sentinels.
    pub fn kelvin(&self) -> f64 {
        match *self {
            EffectiveTemperature::Finite(t) | EffectiveTemperature::Inverted(t) => t,
            EffectiveTemperature::AbsoluteZero => 0.0,
            EffectiveTemperature::Infinite => f64::INFINITY,
            EffectiveTemperature::InvertedSaturated => -0.0,
        }
    }

    pub fn millikelvin(&self) -> f64 {
        self.kelvin() * 1e3
    }

    pub fn is_inverted(&self) -> bool {
        matches!(
            self,
            EffectiveTemperature::Inverted(_) | EffectiveTemperature::InvertedSaturated
        )
    }

    /// Finite positive kelvin value, if any.
    pub fn finite(&self) -> Option<f64> {
        match *self {
            EffectiveTemperature::Finite(t) => Some(t),
            _ => None,
        }
    }

    /// Builds the temperature from `ln p1` and `ln(1 - p1)`.
    pub fn from_log_populations(ln_excited: f64, ln_ground: f64, omega: f64) -> Self {
        if ln_excited == f64::NEG_INFINITY {
            return EffectiveTemperature::AbsoluteZero;
        }
        if ln_ground == f64::NEG_INFINITY {
            return EffectiveTemperature::InvertedSaturated;
        }
        let gap = ln_ground - ln_excited;
        if gap == 0.0 {
            return EffectiveTemperature::Infinite;
        }
        let t = characteristic_temperature(omega) / gap;
        if gap > 0.0 {
            EffectiveTemperature::Finite(t)
        } else {
            EffectiveTemperature::Inverted(t)
        }
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(CoolingError::domain("omega", omega, "finite and > 0"))
    }
}

fn check_temperature(t: f64) -> Result<()> {
    if t > 0.0 && !t.is_nan() {
        Ok(())
    } else {
        Err(CoolingError::domain("temperature", t, "> 0"))
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(CoolingError::domain("p1", p, "within [0, 1]"))
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n >= 1 {
        Ok(())
    } else {
        Err(CoolingError::domain("n_qubits", n as f64, ">= 1"))
    }
}

/// Physical description of N identical thermal qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalEnsembleSpec {
    n_qubits: usize,
    omega: f64,
    excited_population: f64,
}

impl ThermalEnsembleSpec {
    /// From a single-qubit excited population in `[0, 1)`.
    pub fn new(n_qubits: usize, omega: f64, excited_population: f64) -> Result<Self> {
        check_qubits(n_qubits)?;
        check_omega(omega)?;
        if !(0.0..1.0).contains(&excited_population) {
            return Err(CoolingError::domain("p1", excited_population, "within [0, 1)"));
        }
        Ok(Self {
            n_qubits,
            omega,
            excited_population,
        })
    }

    pub fn from_temperature(n_qubits: usize, omega: f64, temperature: f64) -> Result<Self> {
        let p1 = population_from_temperature(temperature, omega)?;
        Self::new(n_qubits, omega, p1)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn excited_population(&self) -> f64 {
        self.excited_population
    }

    pub fn with_n_qubits(&self, n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, self.omega, self.excited_population)
    }

    pub fn temperature(&self) -> EffectiveTemperature {
        temperature_from_population(self.excited_population, self.omega).expect("validated population")
    }
}

/// Thermal excited population `1 / (exp(ħω/k_BT) + 1)`.
pub fn population_from_temperature(temperature: f64, omega: f64) -> Result<f64> {
    check_temperature(temperature)?;
    check_omega(omega)?;
    let a = characteristic_temperature(omega) / temperature;
    Ok(1.0 / (a.exp() + 1.0))
}

/// Excited population at reduced temperature `θ = k_BT/ħω`.
pub fn population_from_reduced_temperature(theta: f64) -> Result<f64> {
    check_temperature(theta)?;
    Ok(1.0 / ((1.0 / theta).exp() + 1.0))
}

/// `k_BT/ħω = 1 / ln((1 - p1)/p1)` for `p1` in `(0, 1/2)`, extended to
/// inversions and the exact singular points.
pub fn reduced_temperature_from_population(p1: f64) -> Result<f64> {
    check_probability(p1)?;
    if p1 == 0.0 {
        return Ok(0.0);
    }
    if p1 == 0.5 {
        return Ok(f64::INFINITY);
    }
    if p1 == 1.0 {
        return Ok(-0.0);
    }
    Ok(1.0 / ((1.0 - 2.0 * p1) / p1).ln_1p())
}

/// Effective temperature of a qubit whose excited population is `p1`.
pub fn temperature_from_population(p1: f64, omega: f64) -> Result<EffectiveTemperature> {
    check_omega(omega)?;
    let theta = reduced_temperature_from_population(p1)?;
    Ok(if p1 == 0.0 {
        EffectiveTemperature::AbsoluteZero
    } else if p1 == 0.5 {
        EffectiveTemperature::Infinite
    } else if p1 == 1.0 {
        EffectiveTemperature::InvertedSaturated
    } else if p1 < 0.5 {
        EffectiveTemperature::Finite(theta * characteristic_temperature(omega))
    } else {
        EffectiveTemperature::Inverted(theta * characteristic_temperature(omega))
    })
}

/// Log-domain excited and ground populations of the cooled target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CooledPopulation {
    pub ln_excited: f64,
    pub ln_ground: f64,
}

impl CooledPopulation {
    /// Excited probability, renormalized against the ground mass.
    pub fn excited(&self) -> f64 {
        1.0 / (1.0 + (self.ln_ground - self.ln_excited).exp())
    }

    /// `k_BT/ħω` of the cooled target.
    pub fn reduced_temperature(&self) -> f64 {
        1.0 / (self.ln_ground - self.ln_excited)
    }
}

/// Optimal cooled target populations from `ln x` and `ln(1 - x)`.
///
/// States are grouped by their number of zero bits `k`, each carrying
/// probability `(1-x)^k x^(N-k)`. The half of the spectrum with fewer zeros
/// lands on the excited target, the other half on the ground target, and an
/// even-N middle layer is split evenly.
pub fn cooled_population_log(ln_x: f64, ln_one_minus_x: f64, n: usize) -> CooledPopulation {
    let n64 = n as u64;
    let term = |k: u64| ln_binomial(n64, k) + mul_log(k, ln_one_minus_x) + mul_log(n64 - k, ln_x);
    let mut lower = Vec::with_capacity(n / 2 + 2);
    let mut upper = Vec::with_capacity(n / 2 + 2);
    for k in 0..=n64 {
        let t = term(k);
        match (2 * k).cmp(&n64) {
            std::cmp::Ordering::Less => lower.push(t),
            std::cmp::Ordering::Greater => upper.push(t),
            std::cmp::Ordering::Equal => {
                let half = t - std::f64::consts::LN_2;
                lower.push(half);
                upper.push(half);
            }
        }
    }
    CooledPopulation {
        ln_excited: log_sum_exp(&lower),
        ln_ground: log_sum_exp(&upper),
    }
}

/// Largest ensemble evaluated by direct summation.
const DIRECT_LIMIT: usize = 50;

fn cooled_population_direct(x: f64, n: usize) -> f64 {
    let y = 1.0 - x;
    let n64 = n as u64;
    let mut acc = crate::numerics::NeumaierSum::new();
    for k in 0..=n64 {
        if 2 * k > n64 {
            break;
        }
        let c = binomial_u64(n64, k).expect("fits for n <= 50") as f64;
        let mut t = c * y.powi(k as i32) * x.powi((n64 - k) as i32);
        if 2 * k == n64 {
            t *= 0.5;
        }
        acc.add(t);
    }
    acc.value()
}

/// Minimal excited population of the target after an optimal global
/// permutation of `n` thermal qubits with excited population `p1`.
pub fn excited_population_after_cooling(p1: f64, n: usize) -> Result<f64> {
    check_qubits(n)?;
    check_probability(p1)?;
    if p1 == 0.0 || p1 == 0.5 || p1 == 1.0 {
        return Ok(p1);
    }
    if n <= DIRECT_LIMIT {
        return Ok(cooled_population_direct(p1, n));
    }
    Ok(cooled_population_log(p1.ln(), (-p1).ln_1p(), n).excited())
}

/// Cooled target state at reduced temperature `θ = k_BT/ħω`.
pub fn cooled_population_at_reduced_temperature(theta: f64, n: usize) -> Result<CooledPopulation> {
    check_temperature(theta)?;
    check_qubits(n)?;
    let a = 1.0 / theta;
    Ok(cooled_population_log(-softplus(a), -softplus(-a), n))
}

/// Reduced minimal final temperature `k_BT'/ħω` from `k_BT/ħω`.
pub fn reduced_minimal_final_temperature(theta: f64, n: usize) -> Result<f64> {
    Ok(cooled_population_at_reduced_temperature(theta, n)?.reduced_temperature())
}

/// Lowest effective target temperature reachable from temperature `T`.
pub fn minimal_final_temperature(temperature: f64, omega: f64, n: usize) -> Result<EffectiveTemperature> {
    check_temperature(temperature)?;
    check_omega(omega)?;
    let theta = temperature / characteristic_temperature(omega);
    let cooled = cooled_population_at_reduced_temperature(theta, n)?;
    Ok(EffectiveTemperature::from_log_populations(
        cooled.ln_excited,
        cooled.ln_ground,
        omega,
    ))
}

/// Exact and asymptotic slope coefficients for a cluster of `2s-1` or `2s`
/// qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingCoefficients {
    pub s: u64,
    /// High-temperature ratio `T / T'`.
    pub c_exact: f64,
    pub c_asymptotic: f64,
    /// Leading low-temperature coefficient `C(2s-1, s)`, exact while it fits.
    pub a_exact: Option<u64>,
    pub a_exact_log: f64,
    pub a_asymptotic_log: f64,
}

impl ScalingCoefficients {
    pub fn new(s: u64) -> Result<Self> {
        if s == 0 {
            return Err(CoolingError::domain("s", 0.0, ">= 1"));
        }
        let sf = s as f64;
        let ln_c = (2.0 - 2.0 * sf) * std::f64::consts::LN_2 + sf.ln() + ln_binomial(2 * s - 1, s);
        let a_exact = binomial_u64(2 * s - 1, s);
        let a_exact_log = match a_exact {
            Some(a) => (a as f64).ln(),
            None => ln_binomial(2 * s - 1, s),
        };
        Ok(Self {
            s,
            c_exact: ln_c.exp(),
            c_asymptotic: 2.0 / std::f64::consts::PI.sqrt() * sf.sqrt(),
            a_exact,
            a_exact_log,
            a_asymptotic_log: sf * 4f64.ln() - 0.5 * sf.ln() - (2.0 * std::f64::consts::PI).ln(),
        })
    }
}

/// High-temperature coefficients (`c_exact`, `c_asymptotic` are the relevant fields).
pub fn high_t_coefficient(s: u64) -> Result<ScalingCoefficients> {
    ScalingCoefficients::new(s)
}

/// Low-temperature coefficients (`a_exact`, `a_asymptotic_log` are the relevant fields).
pub fn low_t_coefficient(s: u64) -> Result<ScalingCoefficients> {
    ScalingCoefficients::new(s)
}

/// Temperature regime for the asymptotic scaling laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    High,
    Low,
}

/// Scaling-law estimate of the final temperature: `T·sqrt(π/2N)` at high
/// temperature, `2T/N` at low temperature.
pub fn asymptotic_final_temperature(temperature: f64, n: usize, regime: Regime) -> Result<f64> {
    check_temperature(temperature)?;
    if n < 3 {
        return Err(CoolingError::domain("n_qubits", n as f64, ">= 3"));
    }
    let nf = n as f64;
    Ok(match regime {
        Regime::High => temperature * (std::f64::consts::PI / (2.0 * nf)).sqrt(),
        Regime::Low => 2.0 * temperature / nf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const OMEGA: f64 = 5e9;

    #[test]
    fn characteristic_temperature_value() {
        assert_relative_eq!(
            characteristic_temperature(OMEGA),
            0.0381911628878882,
            max_relative = 1e-12
        );
    }

    #[test]
    fn population_limits() {
        let p = population_from_temperature(1e9, OMEGA).unwrap();
        assert!((p - 0.5).abs() < 1e-9);
        let p = population_from_temperature(8.3e-3, OMEGA).unwrap();
        assert!((p - 0.01).abs() < 2e-4);
        assert!(population_from_temperature(0.0, OMEGA).is_err());
        assert!(population_from_temperature(1.0, -1.0).is_err());
    }

    #[test]
    fn temperature_sentinels() {
        assert_eq!(
            temperature_from_population(0.5, OMEGA).unwrap(),
            EffectiveTemperature::Infinite
        );
        assert_eq!(
            temperature_from_population(0.0, OMEGA).unwrap(),
            EffectiveTemperature::AbsoluteZero
        );
        assert_eq!(
            temperature_from_population(1.0, OMEGA).unwrap(),
            EffectiveTemperature::InvertedSaturated
        );
        let t = temperature_from_population(0.6, OMEGA).unwrap();
        assert!(t.is_inverted());
        assert!(t.kelvin() < 0.0);
        assert!(temperature_from_population(1.5, OMEGA).is_err());
    }

    #[test]
    fn initial_temperature_of_one_percent() {
        let t = temperature_from_population(0.01, OMEGA).unwrap().kelvin();
        assert!((t - 8.31e-3).abs() / 8.31e-3 < 5e-3);
    }

    #[test]
    fn small_cases() {
        assert_relative_eq!(
            excited_population_after_cooling(0.25, 3).unwrap(),
            0.15625,
            max_relative = 1e-15
        );
        for n in [1, 2] {
            assert_relative_eq!(
                excited_population_after_cooling(0.3, n).unwrap(),
                0.3,
                max_relative = 1e-15
            );
        }
        for n in [1, 5, 64, 1000] {
            assert_eq!(excited_population_after_cooling(0.5, n).unwrap(), 0.5);
        }
        assert!(excited_population_after_cooling(0.2, 0).is_err());
    }

    #[test]
    fn nine_qubits() {
        let p = excited_population_after_cooling(0.01, 9).unwrap();
        assert!((p - 1.218_536_857e-8).abs() < 1e-11, "{p}");
        let p = excited_population_after_cooling(0.1, 9).unwrap();
        assert!((p - 8.909_2e-4).abs() < 1e-7, "{p}");
    }

    #[test]
    fn direct_and_log_paths_agree() {
        for n in 1..=50 {
            for i in 1..100 {
                let x = i as f64 / 100.0;
                let direct = cooled_population_direct(x, n);
                let log = cooled_population_log(x.ln(), (-x).ln_1p(), n).excited();
                assert!((direct - log).abs() < 1e-10, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn device_temperatures() {
        let t = temperature_from_population(0.01, OMEGA).unwrap().kelvin();
        let t9 = minimal_final_temperature(t, OMEGA, 9).unwrap().kelvin();
        assert!((t9 - 2.1e-3).abs() < 0.05e-3);
        let t10 = minimal_final_temperature(t, OMEGA, 10).unwrap().kelvin();
        assert!((t9 - t10).abs() / t9 < 1e-12);
        let t1 = minimal_final_temperature(t, OMEGA, 1).unwrap().kelvin();
        assert!((t1 - t).abs() / t < 1e-12);
        let low = asymptotic_final_temperature(8.3e-3, 10, Regime::Low).unwrap();
        assert_relative_eq!(low, 1.66e-3, max_relative = 1e-12);
    }

    #[test]
    fn extremely_cold_target_stays_finite() {
        let theta = reduced_minimal_final_temperature(0.01, 4096).unwrap();
        assert!(theta > 0.0 && theta < 0.01);
    }

    #[test]
    fn coefficients() {
        let c = high_t_coefficient(2).unwrap();
        assert_relative_eq!(c.c_exact, 1.5, max_relative = 1e-13);
        assert_relative_eq!(high_t_coefficient(1).unwrap().c_exact, 1.0, max_relative = 1e-13);
        let c = high_t_coefficient(10_000).unwrap();
        assert!((c.c_exact / c.c_asymptotic - 1.0).abs() < 1e-3);
        assert_eq!(low_t_coefficient(2).unwrap().a_exact, Some(3));
        assert_eq!(low_t_coefficient(1).unwrap().a_exact, Some(1));
        assert_eq!(
            low_t_coefficient(33).unwrap().a_exact,
            Some(3_609_714_217_008_132_870)
        );
        let a = low_t_coefficient(500).unwrap();
        assert!(a.a_exact.is_none());
        assert!((a.a_exact_log - a.a_asymptotic_log).abs() / a.a_exact_log < 1e-3);
    }

    #[test]
    fn c_matches_slope_at_half() {
        let h = 1e-6;
        let slope = (excited_population_after_cooling(0.5 + h, 3).unwrap()
            - excited_population_after_cooling(0.5 - h, 3).unwrap())
            / (2.0 * h);
        assert!((slope - 1.5).abs() < 1e-6);
    }

    #[test]
    fn high_regime_shrinks() {
        let a = asymptotic_final_temperature(1.0, 10, Regime::High).unwrap();
        let b = asymptotic_final_temperature(1.0, 10_000, Regime::High).unwrap();
        assert!(b < a && b < 0.02);
    }

    #[test]
    fn hot_large_registers_stay_normalized() {
        for n in [51, 64, 1024, 4097] {
            for x in [0.55, 0.75, 0.95] {
                let hot = excited_population_after_cooling(x, n).unwrap();
                let cold = excited_population_after_cooling(1.0 - x, n).unwrap();
                assert!(hot <= 1.0);
                assert!((hot + cold - 1.0).abs() < 1e-12, "n={n} x={x}");
            }
        }
    }
}
