//! Monte Carlo simulation of cooling circuits under random Pauli insertions.
//!
//! Circuits are permutations and the initial state is diagonal, so each shot
//! follows a single bitstring. A Pauli X or Y flips a bit, Z leaves the
//! populations alone. Every shot owns an RNG stream derived from the master
//! seed and the shot index, which keeps results independent of scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytics::{
    characteristic_temperature, excited_population_after_cooling, temperature_from_population,
    EffectiveTemperature, ThermalEnsembleSpec,
};
use crate::circuit::{estimate_cnot_count, synthesize_permutation, CnotModel, CompiledGate, GateList};
use crate::error::{CoolingError, Result};
use crate::exec::Execution;
use crate::protocols::{protocol_permutation, ProtocolKind};
use crate::state::{qubit_mask, ExplicitDistribution, StateIndex};
use crate::work::{work_of_permutation, WorkReport};

/// Largest register for exact channel propagation.
pub const MAX_PROPAGATION_QUBITS: usize = 10;

/// Which qubits receive the Pauli after a gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseLocus {
    /// One operand qubit chosen uniformly, Pauli uniform over X, Y, Z.
    #[default]
    SingleOperand,
    /// A uniformly random non-identity Pauli string over all operand qubits.
    AllOperands,
}

/// How often noise is inserted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseGranularity {
    /// Once per MCX gate.
    #[default]
    Mcx,
    /// Once per estimated elementary CNOT of each MCX gate.
    Elementary,
}

/// Pauli insertion noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    p: f64,
    pub locus: NoiseLocus,
    pub granularity: NoiseGranularity,
    pub cnot_model: CnotModel,
}

impl NoiseModel {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(CoolingError::domain("noise probability", p, "within [0, 1]"));
        }
        Ok(Self {
            p,
            locus: NoiseLocus::default(),
            granularity: NoiseGranularity::default(),
            cnot_model: CnotModel::default(),
        })
    }

    pub fn noiseless() -> Self {
        Self::new(0.0).expect("zero is valid")
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Same locus and granularity with a different insertion probability.
    pub fn with_p(&self, p: f64) -> Result<Self> {
        let checked = Self::new(p)?;
        Ok(Self {
            p: checked.p,
            ..*self
        })
    }

    pub fn with_locus(self, locus: NoiseLocus) -> Self {
        Self { locus, ..self }
    }

    pub fn with_granularity(self, granularity: NoiseGranularity) -> Self {
        Self { granularity, ..self }
    }

    /// Noise insertion opportunities after a gate with `controls` controls.
    pub fn insertions(&self, controls: usize) -> u32 {
        match self.granularity {
            NoiseGranularity::Mcx => 1,
            NoiseGranularity::Elementary => self.cnot_model.gate_cost(controls, false).max(1) as u32,
        }
    }
}

/// Shot statistics of a simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimResult {
    pub shots: u64,
    pub excited_hits: u64,
    pub p1_final_estimate: f64,
    /// Binomial standard error of the estimate.
    pub std_error: f64,
    pub effective_temperature: EffectiveTemperature,
    pub seed: u64,
}

impl SimResult {
    fn from_counts(shots: u64, hits: u64, seed: u64, omega: f64) -> Self {
        let p = hits as f64 / shots as f64;
        Self {
            shots,
            excited_hits: hits,
            p1_final_estimate: p,
            std_error: (p * (1.0 - p) / shots as f64).sqrt(),
            effective_temperature: temperature_from_population(p, omega).expect("valid frequency"),
            seed,
        }
    }

    /// Standard error of the effective temperature in kelvin, propagated
    /// to first order from the population error.
    pub fn temperature_std_error(&self, omega: f64) -> f64 {
        let p = self.p1_final_estimate;
        if self.std_error == 0.0 {
            return 0.0;
        }
        let l = ((1.0 - 2.0 * p) / p).ln_1p();
        characteristic_temperature(omega) * self.std_error / (l * l * p * (1.0 - p))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the RNG stream for one shot.
pub fn shot_seed(master: u64, shot: u64) -> u64 {
    splitmix64(splitmix64(master) ^ shot)
}

struct ShotKernel {
    gates: Vec<CompiledGate>,
    operand_masks: Vec<Vec<StateIndex>>,
    insertions: Vec<u32>,
    qubit_masks: Vec<StateIndex>,
    target_mask: StateIndex,
    x: f64,
    noise: NoiseModel,
}

impl ShotKernel {
    fn new(gates: &GateList, x: f64, noise: &NoiseModel) -> Self {
        let n = gates.n_qubits();
        Self {
            gates: gates.compile(),
            operand_masks: gates
                .gates()
                .iter()
                .map(|g| g.operands().map(|q| qubit_mask(q, n)).collect())
                .collect(),
            insertions: gates
                .gates()
                .iter()
                .map(|g| noise.insertions(g.controls().len()))
                .collect(),
            qubit_masks: (0..n).map(|q| qubit_mask(q, n)).collect(),
            target_mask: qubit_mask(0, n),
            x,
            noise: *noise,
        }
    }

    fn pauli_flip(&self, rng: &mut ChaCha8Rng, operands: &[StateIndex]) -> StateIndex {
        match self.noise.locus {
            NoiseLocus::SingleOperand => {
                let q = rng.random_range(0..operands.len());
                // X and Y flip, Z does not
                if rng.random_range(0..3u8) < 2 {
                    operands[q]
                } else {
                    0
                }
            }
            NoiseLocus::AllOperands => loop {
                let mut flip = 0;
                let mut identity = true;
                for &m in operands {
                    let pauli = rng.random_range(0..4u8);
                    identity &= pauli == 0;
                    if pauli == 1 || pauli == 2 {
                        flip |= m;
                    }
                }
                if !identity {
                    break flip;
                }
            },
        }
    }

    fn run(&self, seed: u64) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state: StateIndex = 0;
        for &m in &self.qubit_masks {
            if rng.random::<f64>() < self.x {
                state |= m;
            }
        }
        let noisy = self.noise.p > 0.0;
        for (i, g) in self.gates.iter().enumerate() {
            state = g.apply(state);
            if noisy {
                for _ in 0..self.insertions[i] {
                    if rng.random::<f64>() < self.noise.p {
                        state ^= self.pauli_flip(&mut rng, &self.operand_masks[i]);
                    }
                }
            }
        }
        state & self.target_mask != 0
    }
}

fn check_register(gates: &GateList, spec: &ThermalEnsembleSpec) -> Result<()> {
    if gates.n_qubits() != spec.n_qubits() {
        return Err(CoolingError::QubitMismatch {
            expected: spec.n_qubits(),
            found: gates.n_qubits(),
        });
    }
    Ok(())
}

/// Samples `shots` noisy runs of the circuit on the thermal state and counts
/// how often the target ends excited.
pub fn run_cooling_sim(
    gates: &GateList,
    spec: &ThermalEnsembleSpec,
    noise: &NoiseModel,
    shots: u64,
    seed: u64,
) -> Result<SimResult> {
    run_cooling_sim_with(gates, spec, noise, shots, seed, Execution::default())
}

/// [`run_cooling_sim`] with an explicit execution mode.
pub fn run_cooling_sim_with(
    gates: &GateList,
    spec: &ThermalEnsembleSpec,
    noise: &NoiseModel,
    shots: u64,
    seed: u64,
    exec: Execution,
) -> Result<SimResult> {
    check_register(gates, spec)?;
    if shots == 0 {
        return Err(CoolingError::domain("shots", 0.0, ">= 1"));
    }
    let kernel = ShotKernel::new(gates, spec.excited_population(), noise);
    let hits = exec.sum_range(shots, |i| kernel.run(shot_seed(seed, i)) as u64);
    Ok(SimResult::from_counts(shots, hits, seed, spec.omega()))
}

fn apply_flip_mixture(probs: &mut [f64], masks: &[StateIndex], q: f64, single: bool) {
    if q == 0.0 {
        return;
    }
    if single {
        let k = masks.len() as f64;
        let old = probs.to_vec();
        for (s, p) in probs.iter_mut().enumerate() {
            let flipped: f64 = masks.iter().map(|&m| old[s ^ m as usize]).sum();
            *p = (1.0 - q) * old[s] + q / k * flipped;
        }
    } else {
        let mut mixed = probs.to_vec();
        for &m in masks {
            let m = m as usize;
            for s in 0..mixed.len() {
                if s & m == 0 {
                    let avg = 0.5 * (mixed[s] + mixed[s | m]);
                    mixed[s] = avg;
                    mixed[s | m] = avg;
                }
            }
        }
        for (p, r) in probs.iter_mut().zip(mixed) {
            *p = (1.0 - q) * *p + q * r;
        }
    }
}

/// Exact diagonal state after the noisy circuit.
pub fn propagate_distribution_noisy(
    gates: &GateList,
    spec: &ThermalEnsembleSpec,
    noise: &NoiseModel,
) -> Result<ExplicitDistribution> {
    check_register(gates, spec)?;
    let n = spec.n_qubits();
    if n > MAX_PROPAGATION_QUBITS {
        return Err(CoolingError::capacity(
            "exact noisy propagation",
            n,
            MAX_PROPAGATION_QUBITS,
        ));
    }
    let mut dist = ExplicitDistribution::thermal(spec)?;
    let mut scratch = vec![0.0; 1 << n];
    for g in gates.gates() {
        let c = g.compile(n);
        let probs = dist.probabilities_mut();
        for (s, p) in probs.iter().enumerate() {
            scratch[c.apply(s as u64) as usize] = *p;
        }
        probs.copy_from_slice(&scratch);
        let masks: Vec<StateIndex> = g.operands().map(|q| qubit_mask(q, n)).collect();
        let (q, single) = match noise.locus {
            NoiseLocus::SingleOperand => (noise.p * 2.0 / 3.0, true),
            NoiseLocus::AllOperands => {
                let states = 4f64.powi(masks.len() as i32);
                (noise.p * states / (states - 1.0), false)
            }
        };
        for _ in 0..noise.insertions(g.controls().len()) {
            apply_flip_mixture(probs, &masks, q, single);
        }
    }
    Ok(dist)
}

/// Outcome of a simulated cooling run.
#[derive(Debug, Clone, PartialEq)]
pub struct CoolingReport {
    pub label: String,
    pub n_qubits: usize,
    pub p1_initial: f64,
    /// Target population of the noiseless circuit.
    pub p1_noiseless: f64,
    pub sim: SimResult,
    /// Noiseless work of the circuit's permutation(s).
    pub work: WorkReport,
    pub mcx_count: u64,
    pub cnot_estimate: u64,
    pub sub_circuits: u64,
    /// Largest Hilbert-space dimension acted on by one sub-circuit.
    pub max_unitary_dimension: u128,
}

impl CoolingReport {
    pub fn effective_temperature(&self) -> EffectiveTemperature {
        self.sim.effective_temperature
    }
}

/// Builds the protocol circuit on the full register and simulates it.
pub fn simulate_protocol(
    spec: &ThermalEnsembleSpec,
    kind: ProtocolKind,
    noise: &NoiseModel,
    shots: u64,
    seed: u64,
    exec: Execution,
) -> Result<CoolingReport> {
    let (n, x) = (spec.n_qubits(), spec.excited_population());
    let perm = protocol_permutation(kind, n, x)?;
    let gates = synthesize_permutation(&perm);
    let sim = run_cooling_sim_with(&gates, spec, noise, shots, seed, exec)?;
    Ok(CoolingReport {
        label: kind.name().to_string(),
        n_qubits: n,
        p1_initial: x,
        p1_noiseless: excited_population_after_cooling(x, n)?,
        sim,
        work: work_of_permutation(&perm, spec)?,
        mcx_count: gates.len() as u64,
        cnot_estimate: estimate_cnot_count(&gates, false, &noise.cnot_model),
        sub_circuits: 1,
        max_unitary_dimension: 1u128 << n,
    })
}

/// One cell of a noise sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub protocol: String,
    pub n_qubits: usize,
    pub p: f64,
    pub result: SimResult,
}

/// Grid of protocol sizes and noise strengths, all simulated with the same
/// master seed.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSweep {
    pub protocol: ProtocolKind,
    pub n_values: Vec<usize>,
    pub p_grid: Vec<f64>,
    pub shots: u64,
    pub seed: u64,
    /// Locus, granularity and cost model; its own `p` is ignored.
    pub template: NoiseModel,
}

impl NoiseSweep {
    /// Rows ordered by N, then p.
    pub fn run(&self, x: f64, omega: f64, exec: Execution) -> Result<Vec<SweepRow>> {
        let mut rows = Vec::with_capacity(self.n_values.len() * self.p_grid.len());
        for &n in &self.n_values {
            let spec = ThermalEnsembleSpec::new(n, omega, x)?;
            let gates = synthesize_permutation(&protocol_permutation(self.protocol, n, x)?);
            for &p in &self.p_grid {
                let noise = self.template.with_p(p)?;
                rows.push(SweepRow {
                    protocol: self.protocol.name().to_string(),
                    n_qubits: n,
                    p,
                    result: run_cooling_sim_with(&gates, &spec, &noise, self.shots, self.seed, exec)?,
                });
            }
        }
        Ok(rows)
    }
}

/// Free-function form of [`NoiseSweep::run`].
pub fn noise_sweep(spec: &ThermalEnsembleSpec, sweep: &NoiseSweep, exec: Execution) -> Result<Vec<SweepRow>> {
    sweep.run(spec.excited_population(), spec.omega(), exec)
}
