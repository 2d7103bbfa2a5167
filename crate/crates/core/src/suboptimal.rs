//! Clustered multi-step cooling.
//!
//! `N = n^r` qubits are split into clusters of `n`. Each step cools the first
//! qubit of every cluster; the cooled qubits of one step form the clusters of
//! the next. Sub-circuits act on disjoint qubits of a product state, so the
//! cooled qubits stay independent and the target population follows the
//! `r`-fold composition of the single-cluster map.

use crate::analytics::{
    characteristic_temperature, cooled_population_log, excited_population_after_cooling,
    EffectiveTemperature, ThermalEnsembleSpec,
};
use crate::circuit::{estimate_cnot_count, synthesize_permutation, GateList};
use crate::error::{CoolingError, Result};
use crate::exec::Execution;
use crate::noise::{run_cooling_sim_with, CoolingReport, NoiseModel};
use crate::numerics::NeumaierSum;
use crate::protocols::{protocol_permutation, ProtocolKind};
use crate::state::MAX_INDEXED_QUBITS;
use crate::work::{permutation_work_quanta, WorkMethod, WorkReport};

/// Largest register simulated end to end.
pub const MAX_ORCHESTRATED_QUBITS: usize = 16;
/// Largest register for which a plan is materialized.
pub const MAX_PLAN_QUBITS: usize = 1 << 20;

fn check_cluster(n: usize) -> Result<()> {
    if n < 3 {
        Err(CoolingError::domain(
            "cluster size",
            n as f64,
            ">= 3 (no cooling below)",
        ))
    } else {
        Ok(())
    }
}

/// Cluster schedule of `r`-step cooling with clusters of `n` qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterPlan {
    n: usize,
    r: u32,
    steps: Vec<Vec<Vec<usize>>>,
}

impl ClusterPlan {
    pub fn new(n: usize, r: u32) -> Result<Self> {
        check_cluster(n)?;
        if r == 0 {
            return Err(CoolingError::domain("steps", 0.0, ">= 1"));
        }
        let total = (n as u64)
            .checked_pow(r)
            .filter(|&t| t <= MAX_PLAN_QUBITS as u64)
            .ok_or(CoolingError::capacity(
                "cluster plan",
                usize::MAX,
                MAX_PLAN_QUBITS,
            ))? as usize;
        let mut steps = Vec::with_capacity(r as usize);
        let mut active: Vec<usize> = (0..total).collect();
        for _ in 0..r {
            let clusters: Vec<Vec<usize>> = active.chunks(n).map(<[usize]>::to_vec).collect();
            active = clusters.iter().map(|c| c[0]).collect();
            steps.push(clusters);
        }
        Ok(Self { n, r, steps })
    }

    pub fn cluster_size(&self) -> usize {
        self.n
    }

    pub fn steps_count(&self) -> u32 {
        self.r
    }

    pub fn total_qubits(&self) -> usize {
        self.n.pow(self.r)
    }

    /// Clusters of every step; each cluster lists its qubits with the cooled
    /// qubit first.
    pub fn steps(&self) -> &[Vec<Vec<usize>>] {
        &self.steps
    }

    pub fn sub_circuit_count(&self) -> u64 {
        self.steps.iter().map(|s| s.len() as u64).sum()
    }

    /// Hilbert-space dimension of one sub-circuit.
    pub fn max_unitary_dimension(&self) -> u128 {
        1u128 << self.n
    }
}

/// `Σ_{k=1..r} n^(r-k) = (n^r - 1)/(n - 1)`.
pub fn sub_circuit_count(n: u64, r: u32) -> u128 {
    (0..r).map(|k| (n as u128).pow(k)).sum()
}

/// `k`-fold composition of the single-cluster cooling map.
pub fn population_recursion(p1: f64, n: usize, k: u32) -> Result<f64> {
    let mut x = excited_population_after_cooling(p1, 1)?;
    for _ in 0..k {
        x = excited_population_after_cooling(x, n)?;
    }
    Ok(x)
}

/// Log-domain composition starting from reduced temperature `θ = k_BT/ħω`;
/// returns `(ln p, ln(1 - p))` of the final target.
pub fn population_recursion_log(theta: f64, n: usize, k: u32) -> Result<(f64, f64)> {
    if !(theta > 0.0) {
        return Err(CoolingError::domain("temperature", theta, "> 0"));
    }
    let a = 1.0 / theta;
    let mut ln_p = -crate::numerics::softplus(a);
    let mut ln_q = -crate::numerics::softplus(-a);
    for _ in 0..k {
        let c = cooled_population_log(ln_p, ln_q, n);
        ln_p = c.ln_excited;
        ln_q = c.ln_ground;
    }
    Ok((ln_p, ln_q))
}

/// Final temperature of clustered cooling with scaling-law estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuboptimalTemperature {
    pub exact: EffectiveTemperature,
    /// Low-temperature law `N^(ln 2/ln n - 1) T`, kelvin.
    pub low_t_estimate: f64,
    /// High-temperature law `N^(ln(π/2)/ln n - 1/2) T`, kelvin.
    pub high_t_estimate: f64,
    /// Exponent `ln 2/ln n - 1` of the low-temperature law.
    pub exponent: f64,
}

pub fn suboptimal_temperature(
    temperature: f64,
    omega: f64,
    n: usize,
    r: u32,
) -> Result<SuboptimalTemperature> {
    check_cluster(n)?;
    if !(temperature > 0.0) || !(omega > 0.0) {
        return Err(CoolingError::domain(
            "temperature",
            temperature,
            "> 0 with omega > 0",
        ));
    }
    let theta = temperature / characteristic_temperature(omega);
    let (ln_p, ln_q) = population_recursion_log(theta, n, r)?;
    let ln_n = (n as f64).ln();
    let total = (n as f64).powi(r as i32);
    let exponent = std::f64::consts::LN_2 / ln_n - 1.0;
    let high = (std::f64::consts::PI / 2.0).ln() / ln_n - 0.5;
    Ok(SuboptimalTemperature {
        exact: EffectiveTemperature::from_log_populations(ln_p, ln_q, omega),
        low_t_estimate: total.powf(exponent) * temperature,
        high_t_estimate: total.powf(high) * temperature,
        exponent,
    })
}

/// Clustered circuit on the full register plus the noiseless work it costs.
pub fn build_suboptimal_circuit(plan: &ClusterPlan, kind: ProtocolKind, x: f64) -> Result<(GateList, f64)> {
    let total = plan.total_qubits();
    if total > MAX_INDEXED_QUBITS {
        return Err(CoolingError::capacity(
            "clustered circuit",
            total,
            MAX_INDEXED_QUBITS,
        ));
    }
    let n = plan.cluster_size();
    let mut gates = GateList::new(total)?;
    let mut work = NeumaierSum::new();
    let mut xk = x;
    for clusters in plan.steps() {
        let perm = protocol_permutation(kind, n, xk)?;
        let local = synthesize_permutation(&perm);
        for cluster in clusters {
            gates.append(&local.embed(cluster, total)?)?;
        }
        work.add(clusters.len() as f64 * permutation_work_quanta(&perm, xk));
        xk = excited_population_after_cooling(xk, n)?;
    }
    Ok((gates, work.value()))
}

/// Builds and simulates clustered cooling on `spec`'s thermal state.
pub fn orchestrate_suboptimal(
    spec: &ThermalEnsembleSpec,
    plan: &ClusterPlan,
    kind: ProtocolKind,
    noise: &NoiseModel,
    shots: u64,
    seed: u64,
    exec: Execution,
) -> Result<CoolingReport> {
    let total = plan.total_qubits();
    if total > MAX_ORCHESTRATED_QUBITS {
        return Err(CoolingError::capacity(
            "clustered simulation",
            total,
            MAX_ORCHESTRATED_QUBITS,
        ));
    }
    if spec.n_qubits() != total {
        return Err(CoolingError::QubitMismatch {
            expected: total,
            found: spec.n_qubits(),
        });
    }
    let x = spec.excited_population();
    let (gates, work_quanta) = build_suboptimal_circuit(plan, kind, x)?;
    let sim = run_cooling_sim_with(&gates, spec, noise, shots, seed, exec)?;
    Ok(CoolingReport {
        label: format!("suboptimal-n{}-r{}", plan.cluster_size(), plan.steps_count()),
        n_qubits: total,
        p1_initial: x,
        p1_noiseless: population_recursion(x, plan.cluster_size(), plan.steps_count())?,
        sim,
        work: WorkReport {
            n_qubits: total,
            omega: spec.omega(),
            work_quanta,
            method: WorkMethod::Clustered,
        },
        mcx_count: gates.len() as u64,
        cnot_estimate: estimate_cnot_count(&gates, false, &noise.cnot_model),
        sub_circuits: plan.sub_circuit_count(),
        max_unitary_dimension: plan.max_unitary_dimension(),
    })
}
