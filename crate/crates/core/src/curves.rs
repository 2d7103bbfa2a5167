//! Parameter sweeps that tabulate the library's main quantities.

use crate::analytics::{
    excited_population_after_cooling, high_t_coefficient, reduced_minimal_final_temperature,
};
use crate::circuit::{mirror_mcx_count, CnotModel};
use crate::error::Result;
use crate::exec::Execution;
use crate::noise::{NoiseModel, NoiseSweep, SweepRow};
use crate::protocols::ProtocolKind;
use crate::suboptimal::{orchestrate_suboptimal, ClusterPlan};
use crate::work::{minimal_work_bucketed, rescaled_work_limit, rescaled_work_limit_reduced, suboptimal_work};
use crate::ThermalEnsembleSpec;

/// `count` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..count)
            .map(|i| {
                if i + 1 == count {
                    b
                } else {
                    a + (b - a) * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

/// `count` log-spaced points from `a` to `b` inclusive.
pub fn logspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    let mut v: Vec<f64> = linspace(a.ln(), b.ln(), count)
        .into_iter()
        .map(f64::exp)
        .collect();
    if let Some(last) = v.last_mut() {
        *last = b;
    }
    if let Some(first) = v.first_mut() {
        *first = a;
    }
    v
}

fn cartesian<A: Copy + Sync, B: Copy + Sync>(a: &[A], b: &[B]) -> Vec<(A, B)> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationRow {
    pub n_qubits: usize,
    pub x: f64,
    pub p1_cooled: f64,
}

/// Optimal cooled population for every `(N, x)`, ordered by N then x.
pub fn population_curves(x_grid: &[f64], n_values: &[usize], exec: Execution) -> Result<Vec<PopulationRow>> {
    exec.map_slice(&cartesian(n_values, x_grid), |&(n, x)| {
        Ok(PopulationRow {
            n_qubits: n,
            x,
            p1_cooled: excited_population_after_cooling(x, n)?,
        })
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemperatureRow {
    pub s: u64,
    /// Reduced initial temperature `k_BT/ħω`.
    pub theta: f64,
    /// Reduced final temperature with `N = 2s` (equal to `2s - 1`).
    pub theta_final: f64,
    /// Low-temperature asymptote `θ/s`.
    pub low_asymptote: f64,
    /// High-temperature asymptote `θ/c` with the large-s coefficient.
    pub high_asymptote: f64,
}

pub fn temperature_curves(
    theta_grid: &[f64],
    s_values: &[u64],
    exec: Execution,
) -> Result<Vec<TemperatureRow>> {
    exec.map_slice(&cartesian(s_values, theta_grid), |&(s, theta)| {
        let c = high_t_coefficient(s)?;
        Ok(TemperatureRow {
            s,
            theta,
            theta_final: reduced_minimal_final_temperature(theta, 2 * s as usize)?,
            low_asymptote: theta / s as f64,
            high_asymptote: theta / c.c_asymptotic,
        })
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkRow {
    pub n_qubits: usize,
    pub x: f64,
    /// Minimal work per qubit, `ħω`.
    pub work_per_qubit: f64,
    /// Large-ensemble per-qubit limit, `ħω`.
    pub limit: f64,
}

/// `x` must lie in `[0, 1/2]`.
pub fn work_curves(x_grid: &[f64], n_values: &[usize], exec: Execution) -> Result<Vec<WorkRow>> {
    exec.map_slice(&cartesian(n_values, x_grid), |&(n, x)| {
        Ok(WorkRow {
            n_qubits: n,
            x,
            work_per_qubit: minimal_work_bucketed(x, n)? / n as f64,
            limit: rescaled_work_limit(x)?,
        })
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkTemperatureRow {
    pub theta: f64,
    pub limit: f64,
    /// Name of the device preset for marker rows.
    pub marker: Option<String>,
}

/// Per-qubit work limit versus reduced temperature, followed by one row per
/// named marker.
pub fn work_temperature_curve(
    theta_grid: &[f64],
    markers: &[(String, f64)],
) -> Result<Vec<WorkTemperatureRow>> {
    let mut rows = Vec::with_capacity(theta_grid.len() + markers.len());
    for &theta in theta_grid {
        rows.push(WorkTemperatureRow {
            theta,
            limit: rescaled_work_limit_reduced(theta)?,
            marker: None,
        });
    }
    for (name, theta) in markers {
        rows.push(WorkTemperatureRow {
            theta: *theta,
            limit: rescaled_work_limit_reduced(*theta)?,
            marker: Some(name.clone()),
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateCountRow {
    pub n_qubits: usize,
    pub mcx: u128,
    pub cnot_linear: u128,
    pub cnot_phase_exact: u128,
}

/// Mirror-protocol gate counts for `N` in `n_min..=n_max`.
pub fn gatecount_scaling(n_min: usize, n_max: usize, model: &CnotModel) -> Vec<GateCountRow> {
    (n_min.max(1)..=n_max)
        .map(|n| {
            let mcx = mirror_mcx_count(n);
            let controls = n - 1;
            GateCountRow {
                n_qubits: n,
                mcx,
                cnot_linear: mcx.saturating_mul(model.gate_cost(controls, false) as u128),
                cnot_phase_exact: mcx.saturating_mul(model.gate_cost(controls, true) as u128),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuboptimalWorkRow {
    pub x: f64,
    pub steps: u32,
    pub n_qubits: usize,
    /// Clustered work per qubit, `ħω`.
    pub work_per_qubit: f64,
    /// Minimal work per qubit of optimal cooling on the same register, `ħω`.
    pub optimal_per_qubit: f64,
}

pub fn suboptimal_work_curves(
    x_grid: &[f64],
    cluster: usize,
    steps: &[u32],
    omega: f64,
    exec: Execution,
) -> Result<Vec<SuboptimalWorkRow>> {
    exec.map_slice(&cartesian(steps, x_grid), |&(r, x)| {
        let w = suboptimal_work(x, cluster, r, omega)?;
        Ok(SuboptimalWorkRow {
            x,
            steps: r,
            n_qubits: w.n_qubits,
            work_per_qubit: w.work_per_qubit_quanta(),
            optimal_per_qubit: minimal_work_bucketed(x, w.n_qubits)? / w.n_qubits as f64,
        })
    })
    .into_iter()
    .collect()
}

/// Noise sweep of optimal protocol circuits followed by clustered cooling on
/// the same grid of noise strengths.
#[allow(clippy::too_many_arguments)]
pub fn optimal_vs_suboptimal(
    x: f64,
    omega: f64,
    protocol: ProtocolKind,
    optimal_n: &[usize],
    plan: &ClusterPlan,
    p_grid: &[f64],
    shots: u64,
    seed: u64,
    template: &NoiseModel,
    exec: Execution,
) -> Result<Vec<SweepRow>> {
    let sweep = NoiseSweep {
        protocol,
        n_values: optimal_n.to_vec(),
        p_grid: p_grid.to_vec(),
        shots,
        seed,
        template: *template,
    };
    let mut rows = sweep.run(x, omega, exec)?;
    let spec = ThermalEnsembleSpec::new(plan.total_qubits(), omega, x)?;
    for &p in p_grid {
        let report = orchestrate_suboptimal(&spec, plan, protocol, &template.with_p(p)?, shots, seed, exec)?;
        rows.push(SweepRow {
            protocol: report.label,
            n_qubits: report.n_qubits,
            p,
            result: report.sim,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(linspace(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
        let l = logspace(0.01, 100.0, 5);
        assert_eq!(l[0], 0.01);
        assert_eq!(l[4], 100.0);
        assert!((l[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn population_rows() {
        let rows = population_curves(&[0.25, 0.5], &[4, 1024], Execution::Sequential).unwrap();
        assert_eq!(rows.len(), 4);
        assert!((rows[0].p1_cooled - 0.15625).abs() < 1e-15);
        assert_eq!(rows[1].p1_cooled, 0.5);
        assert!(rows[2].p1_cooled < rows[0].p1_cooled);
    }

    #[test]
    fn temperature_rows_follow_asymptotes() {
        let rows = temperature_curves(&[0.01, 1000.0], &[5], Execution::Parallel).unwrap();
        assert!((rows[0].theta_final / rows[0].low_asymptote - 1.0).abs() < 0.05);
        let c = high_t_coefficient(5).unwrap().c_exact;
        assert!((rows[1].theta / rows[1].theta_final / c - 1.0).abs() < 0.01);
    }

    #[test]
    fn gate_counts_grow() {
        let rows = gatecount_scaling(3, 14, &CnotModel::default());
        for w in rows.windows(3) {
            assert!(w[2].mcx > 2 * w[0].mcx);
            assert!(w[1].cnot_linear > w[0].cnot_linear);
        }
        assert_eq!(rows[0].mcx, 5);
    }

    #[test]
    fn work_rows_vanish_at_endpoints() {
        let rows = work_curves(&[0.0, 0.5], &[16, 64], Execution::Sequential).unwrap();
        assert!(rows.iter().all(|r| r.work_per_qubit == 0.0 && r.limit == 0.0));
    }
}
