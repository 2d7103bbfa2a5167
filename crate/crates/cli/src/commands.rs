//! One function per subcommand. Each turns a resolved [`Config`] into a
//! [`Table`] or a text artifact.

use dyncool::analytics::{
    asymptotic_final_temperature, characteristic_temperature, excited_population_after_cooling,
    minimal_final_temperature, population_from_reduced_temperature, population_from_temperature,
    temperature_from_population, Regime,
};
use dyncool::circuit::{estimate_cnot_count, synthesize_permutation};
use dyncool::curves::{
    gatecount_scaling, linspace, logspace, optimal_vs_suboptimal, population_curves, suboptimal_work_curves,
    temperature_curves, work_curves, work_temperature_curve,
};
use dyncool::noise::{NoiseGranularity, NoiseLocus, NoiseSweep, SweepRow};
use dyncool::protocols::{protocol_permutation, verify_maximal, MAX_VERIFY_QUBITS};
use dyncool::suboptimal::suboptimal_temperature;
use dyncool::work::{minimal_work_bucketed, permutation_work_quanta, rescaled_work_limit};
use dyncool::{
    ClusterPlan, CnotModel, EffectiveTemperature, Execution, NoiseModel, Permutation, ProtocolKind,
};

use crate::config::Config;
use crate::error::CliError;
use crate::output::{Cell, Table};

pub const NOISE_COLUMNS: [&str; 9] = [
    "protocol",
    "N",
    "p",
    "shots",
    "seed",
    "p1_final",
    "std_error",
    "T_final_mK",
    "inverted",
];

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn grid(cfg: &Config, min_key: &str, max_key: &str, points_key: &str) -> Result<(f64, f64, usize), CliError> {
    let (a, b): (f64, f64) = (cfg.get(min_key)?, cfg.get(max_key)?);
    let count: usize = cfg.get(points_key)?;
    if count < 2 || !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(usage(format!(
            "grid {min_key}..{max_key} needs finite {min_key} < {max_key} and {points_key} >= 2"
        )));
    }
    Ok((a, b, count))
}

fn nonempty<T>(v: Vec<T>, key: &str) -> Result<Vec<T>, CliError> {
    if v.is_empty() {
        Err(usage(format!("{key} is empty")))
    } else {
        Ok(v)
    }
}

fn millikelvin(t: EffectiveTemperature) -> f64 {
    t.kelvin() * 1e3
}

/// Initial excited population from `reduced_temperature`, `temperature_mk`
/// or `p1`, in that order of precedence.
pub fn base_population(cfg: &Config) -> Result<f64, CliError> {
    let omega: f64 = cfg.get("omega")?;
    if let Some(theta) = cfg.get_opt::<f64>("reduced_temperature")? {
        return Ok(population_from_reduced_temperature(theta)?);
    }
    if let Some(mk) = cfg.get_opt::<f64>("temperature_mk")? {
        return Ok(population_from_temperature(mk * 1e-3, omega)?);
    }
    cfg.get("p1")
}

pub fn cnot_model(cfg: &Config) -> Result<CnotModel, CliError> {
    let q: Vec<f64> = cfg.get_list("cnot.quadratic")?;
    let quadratic: [f64; 3] = q
        .try_into()
        .map_err(|_| usage("cnot.quadratic needs three coefficients"))?;
    Ok(CnotModel {
        linear_slope: cfg.get("cnot.slope")?,
        linear_offset: cfg.get("cnot.offset")?,
        quadratic,
    })
}

fn noise_template(cfg: &Config) -> Result<NoiseModel, CliError> {
    let locus = match cfg.raw("noise.locus").unwrap_or("single") {
        "single" | "single-operand" => NoiseLocus::SingleOperand,
        "all" | "all-operands" => NoiseLocus::AllOperands,
        other => return Err(usage(format!("noise.locus {other:?}: expected single or all"))),
    };
    let granularity = match cfg.raw("noise.granularity").unwrap_or("mcx") {
        "mcx" => NoiseGranularity::Mcx,
        "elementary" | "cnot" => NoiseGranularity::Elementary,
        other => {
            return Err(usage(format!(
                "noise.granularity {other:?}: expected mcx or elementary"
            )))
        }
    };
    let mut model = NoiseModel::noiseless()
        .with_locus(locus)
        .with_granularity(granularity);
    model.cnot_model = cnot_model(cfg)?;
    Ok(model)
}

fn protocol(cfg: &Config) -> Result<ProtocolKind, CliError> {
    cfg.raw("protocol")
        .unwrap_or("mirror")
        .parse()
        .map_err(CliError::Usage)
}

/// Shots and seed must be given explicitly for anything stochastic.
pub fn stochastic_settings(cfg: &Config, command: &str) -> Result<(u64, u64), CliError> {
    let shots: u64 = cfg
        .get_opt("shots")?
        .ok_or_else(|| usage(format!("{command} needs --shots (or shots = ... in the config)")))?;
    let seed: u64 = cfg
        .get_opt("seed")?
        .ok_or_else(|| usage(format!("{command} needs --seed (or seed = ... in the config)")))?;
    if shots == 0 {
        return Err(usage("shots must be positive"));
    }
    Ok((shots, seed))
}

pub fn population_curves_table(cfg: &Config, exec: Execution) -> Result<Table, CliError> {
    let (a, b, count) = grid(cfg, "x_min", "x_max", "x_points")?;
    if a < 0.0 || b > 1.0 {
        return Err(usage("population grid must lie in [0, 1]"));
    }
    let n_values = nonempty(cfg.get_list("n_values")?, "n_values")?;
    let mut t = Table::new(&["x", "N", "p1_prime"]);
    for row in population_curves(&linspace(a, b, count), &n_values, exec)? {
        t.push(vec![row.x.into(), row.n_qubits.into(), row.p1_cooled.into()]);
    }
    Ok(t)
}

pub fn temperature_curves_table(cfg: &Config, exec: Execution) -> Result<Table, CliError> {
    let (a, b, count) = grid(cfg, "theta_min", "theta_max", "theta_points")?;
    if a <= 0.0 {
        return Err(usage("theta_min must be positive"));
    }
    let s_values = nonempty(cfg.get_list("s_values")?, "s_values")?;
    let t_star = characteristic_temperature(cfg.get("omega")?) * 1e3;
    let mut t = Table::new(&[
        "kT_over_hw",
        "s",
        "kT_final_over_hw",
        "low_T_asymptote_over_hw",
        "high_T_asymptote_over_hw",
        "T_mK",
        "T_final_mK",
    ]);
    for row in temperature_curves(&logspace(a, b, count), &s_values, exec)? {
        t.push(vec![
            row.theta.into(),
            row.s.into(),
            row.theta_final.into(),
            row.low_asymptote.into(),
            row.high_asymptote.into(),
            (row.theta * t_star).into(),
            (row.theta_final * t_star).into(),
        ]);
    }
    Ok(t)
}

pub fn work_curves_table(cfg: &Config, exec: Execution) -> Result<Table, CliError> {
    let count: usize = cfg.get("work.x_points")?;
    if count < 2 {
        return Err(usage("work.x_points must be >= 2"));
    }
    let n_values = nonempty(cfg.get_list("work.n_values")?, "work.n_values")?;
    let mut t = Table::new(&["x", "N", "work_per_qubit_hw", "limit_per_qubit_hw"]);
    for row in work_curves(&linspace(0.0, 0.5, count), &n_values, exec)? {
        t.push(vec![
            row.x.into(),
            row.n_qubits.into(),
            row.work_per_qubit.into(),
            row.limit.into(),
        ]);
    }
    Ok(t)
}

fn markers(cfg: &Config) -> Result<Vec<(String, f64)>, CliError> {
    let raw = cfg.raw("work.markers").unwrap_or("");
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| usage(format!("work.markers entry {item:?} is not name=kT_over_hw")))?;
            let theta = value
                .trim()
                .parse()
                .map_err(|_| usage(format!("work.markers entry {item:?} has a bad value")))?;
            Ok((name.trim().to_string(), theta))
        })
        .collect()
}

pub fn work_temperature_table(cfg: &Config) -> Result<Table, CliError> {
    let (a, b, count) = grid(cfg, "theta_min", "theta_max", "theta_points")?;
    if a <= 0.0 {
        return Err(usage("theta_min must be positive"));
    }
    let t_star = characteristic_temperature(cfg.get("omega")?) * 1e3;
    let mut t = Table::new(&["kT_over_hw", "T_mK", "limit_per_qubit_hw", "marker"]);
    for row in work_temperature_curve(&logspace(a, b, count), &markers(cfg)?)? {
        t.push(vec![
            row.theta.into(),
            (row.theta * t_star).into(),
            row.limit.into(),
            row.marker.unwrap_or_default().into(),
        ]);
    }
    Ok(t)
}

fn sweep_table(rows: Vec<SweepRow>) -> Table {
    let mut t = Table::new(&NOISE_COLUMNS);
    for row in rows {
        let r = row.result;
        t.push(vec![
            row.protocol.into(),
            row.n_qubits.into(),
            row.p.into(),
            r.shots.into(),
            r.seed.into(),
            r.p1_final_estimate.into(),
            r.std_error.into(),
            millikelvin(r.effective_temperature).into(),
            r.effective_temperature.is_inverted().into(),
        ]);
    }
    t
}

fn p_grid(cfg: &Config) -> Result<Vec<f64>, CliError> {
    nonempty(cfg.get_list("noise.p_grid")?, "noise.p_grid")
}

pub fn noise_sweep_table(cfg: &Config, exec: Execution) -> Result<Table, CliError> {
    let (shots, seed) = stochastic_settings(cfg, "noise-sweep")?;
    let sweep = NoiseSweep {
        protocol: protocol(cfg)?,
        n_values: nonempty(cfg.get_list("noise.n_values")?, "noise.n_values")?,
        p_grid: p_grid(cfg)?,
        shots,
        seed,
        template: noise_template(cfg)?,
    };
    let rows = sweep.run(base_population(cfg)?, cfg.get("omega")?, exec)?;
    Ok(sweep_table(rows))
}

pub fn suboptimal_table(cfg: &Config, exec: Execution) -> Result<Table, CliError> {
    let (shots, seed) = stochastic_settings(cfg, "suboptimal")?;
    let plan = ClusterPlan::new(cfg.get("cluster.n")?, cfg.get("cluster.r")?)?;
    let rows = optimal_vs_suboptimal(
        base_population(cfg)?,
        cfg.get("omega")?,
        protocol(cfg)?,
        &cfg.get_list::<usize>("cluster.optimal_n")?,
        &plan,
        &p_grid(cfg)?,
        shots,
        seed,
        &noise_template(cfg)?,
        exec,
    )?;
    Ok(sweep_table(rows))
}

pub fn suboptimal_work_table(cfg: &Config, exec: Execution) -> Result<Table, CliError> {
    let count: usize = cfg.get("cluster.x_points")?;
    if count < 2 {
        return Err(usage("cluster.x_points must be >= 2"));
    }
    let steps = nonempty(cfg.get_list::<u32>("cluster.steps")?, "cluster.steps")?;
    let rows = suboptimal_work_curves(
        &linspace(0.0, 0.5, count),
        cfg.get("cluster.n")?,
        &steps,
        cfg.get("omega")?,
        exec,
    )?;
    let mut t = Table::new(&["x", "r", "N", "work_per_qubit_hw", "optimal_work_per_qubit_hw"]);
    for row in rows {
        t.push(vec![
            row.x.into(),
            row.steps.into(),
            row.n_qubits.into(),
            row.work_per_qubit.into(),
            row.optimal_per_qubit.into(),
        ]);
    }
    Ok(t)
}

pub fn gatecount_table(cfg: &Config) -> Result<Table, CliError> {
    let (lo, hi): (usize, usize) = (cfg.get("gates.n_min")?, cfg.get("gates.n_max")?);
    if lo < 2 || hi < lo {
        return Err(usage("need 2 <= gates.n_min <= gates.n_max"));
    }
    let mut t = Table::new(&["N", "mcx", "cnot_linear", "cnot_phase_exact"]);
    for row in gatecount_scaling(lo, hi, &cnot_model(cfg)?) {
        t.push(vec![
            row.n_qubits.into(),
            row.mcx.into(),
            row.cnot_linear.into(),
            row.cnot_phase_exact.into(),
        ]);
    }
    Ok(t)
}

/// Gate list for a permutation with count summaries as leading comments.
pub fn synth_text(perm: &Permutation, model: &CnotModel) -> String {
    let gates = synthesize_permutation(perm);
    let mut out = format!(
        "# mcx: {}\n# cnot_linear: {}\n# cnot_phase_exact: {}\n",
        gates.len(),
        estimate_cnot_count(&gates, false, model),
        estimate_cnot_count(&gates, true, model),
    );
    out.push_str(&gates.to_text());
    out
}

/// Protocol permutation text with its work and cooled population.
pub fn protocol_text(cfg: &Config, n: usize) -> Result<String, CliError> {
    let kind = protocol(cfg)?;
    let x = base_population(cfg)?;
    let perm = protocol_permutation(kind, n, x)?;
    let mut out = format!(
        "# protocol: {kind}\n# p1: {x}\n# work_hw: {}\n# p1_prime: {}\n",
        permutation_work_quanta(&perm, x),
        excited_population_after_cooling(x, n)?,
    );
    if n <= MAX_VERIFY_QUBITS {
        out.push_str(&format!("# maximal: {}\n", verify_maximal(&perm, n)?.maximal));
    }
    out.push_str(&perm.to_text());
    Ok(out)
}

/// Single-point summary for `n` qubits at the configured temperature.
pub fn analyze_table(cfg: &Config, n: usize) -> Result<Table, CliError> {
    let omega: f64 = cfg.get("omega")?;
    let x = base_population(cfg)?;
    let t0 = temperature_from_population(x, omega)?;
    let mut t = Table::new(&["quantity", "value", "unit"]);
    let mut add = |name: &str, value: Cell, unit: &str| t.push(vec![name.into(), value, unit.into()]);
    add("N", n.into(), "qubits");
    add("p1", x.into(), "probability");
    add("T", millikelvin(t0).into(), "mK");
    add(
        "p1_prime",
        excited_population_after_cooling(x, n)?.into(),
        "probability",
    );
    if let Some(kelvin) = t0.finite() {
        add(
            "T_final",
            millikelvin(minimal_final_temperature(kelvin, omega, n)?).into(),
            "mK",
        );
        if n >= 3 {
            add(
                "T_final_low_T_estimate",
                (asymptotic_final_temperature(kelvin, n, Regime::Low)? * 1e3).into(),
                "mK",
            );
            add(
                "T_final_high_T_estimate",
                (asymptotic_final_temperature(kelvin, n, Regime::High)? * 1e3).into(),
                "mK",
            );
        }
        if let (Some(c), Some(r)) = (
            cfg.get_opt::<usize>("cluster.n")?,
            cfg.get_opt::<u32>("cluster.r")?,
        ) {
            if let Ok(sub) = suboptimal_temperature(kelvin, omega, c, r) {
                add("cluster_size", c.into(), "qubits");
                add("cluster_steps", r.into(), "steps");
                add("T_final_clustered", millikelvin(sub.exact).into(), "mK");
                add(
                    "T_final_clustered_low_T_estimate",
                    (sub.low_t_estimate * 1e3).into(),
                    "mK",
                );
            }
        }
    }
    if x < 0.5 {
        add("minimal_work", minimal_work_bucketed(x, n)?.into(), "hbar_omega");
        add(
            "work_limit_per_qubit",
            rescaled_work_limit(x)?.into(),
            "hbar_omega",
        );
    }
    Ok(t)
}
