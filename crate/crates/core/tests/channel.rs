//! Population propagation against a literal density-matrix depolarizing
//! channel on small registers.

use dyncool::analytics::ThermalEnsembleSpec;
use dyncool::circuit::{synthesize_permutation, GateList};
use dyncool::noise::{propagate_distribution_noisy, NoiseGranularity, NoiseLocus, NoiseModel};
use dyncool::protocols::{protocol_permutation, ProtocolKind};
use nalgebra::DMatrix;
use num_complex::Complex64;

type Op = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pauli(k: u8) -> Op {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    match k {
        0 => DMatrix::from_row_slice(2, 2, &[one, z, z, one]),
        1 => DMatrix::from_row_slice(2, 2, &[z, one, one, z]),
        2 => DMatrix::from_row_slice(2, 2, &[z, c(0.0, -1.0), c(0.0, 1.0), z]),
        _ => DMatrix::from_row_slice(2, 2, &[one, z, z, -one]),
    }
}

/// Tensor product with qubit 0 as the leftmost factor.
fn pauli_string(n: usize, labels: &[(usize, u8)]) -> Op {
    let mut op = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for q in 0..n {
        let k = labels.iter().find(|(qq, _)| *qq == q).map_or(0, |(_, k)| *k);
        op = op.kronecker(&pauli(k));
    }
    op
}

fn gate_unitary(gates: &GateList, i: usize) -> Op {
    let n = gates.n_qubits();
    let g = gates.gates()[i].compile(n);
    let dim = 1 << n;
    let mut u = DMatrix::from_element(dim, dim, c(0.0, 0.0));
    for s in 0..dim {
        u[(g.apply(s as u64) as usize, s)] = c(1.0, 0.0);
    }
    u
}

fn channel(rho: &Op, n: usize, operands: &[usize], noise: &NoiseModel) -> Op {
    let p = noise.p();
    let mut terms: Vec<(f64, Op)> = Vec::new();
    match noise.locus {
        NoiseLocus::SingleOperand => {
            let w = p / (3.0 * operands.len() as f64);
            for &q in operands {
                for k in 1..=3 {
                    terms.push((w, pauli_string(n, &[(q, k)])));
                }
            }
        }
        NoiseLocus::AllOperands => {
            let total = 4usize.pow(operands.len() as u32);
            let w = p / (total - 1) as f64;
            for code in 1..total {
                let labels: Vec<(usize, u8)> = operands
                    .iter()
                    .enumerate()
                    .map(|(i, &q)| (q, ((code >> (2 * i)) & 3) as u8))
                    .collect();
                terms.push((w, pauli_string(n, &labels)));
            }
        }
    }
    let mut out = rho * c(1.0 - p, 0.0);
    for (w, op) in terms {
        out += (&op * rho * op.adjoint()) * c(w, 0.0);
    }
    out
}

fn density_matrix_run(gates: &GateList, spec: &ThermalEnsembleSpec, noise: &NoiseModel) -> Op {
    let n = spec.n_qubits();
    let x = spec.excited_population();
    let dim = 1 << n;
    let mut rho = DMatrix::from_element(dim, dim, c(0.0, 0.0));
    for s in 0..dim {
        let j = (s as u32).count_ones() as i32;
        rho[(s, s)] = c(x.powi(j) * (1.0 - x).powi(n as i32 - j), 0.0);
    }
    for (i, g) in gates.gates().iter().enumerate() {
        let u = gate_unitary(gates, i);
        rho = &u * &rho * u.adjoint();
        let operands: Vec<usize> = g.operands().collect();
        for _ in 0..noise.insertions(g.controls().len()) {
            rho = channel(&rho, n, &operands, noise);
        }
    }
    rho
}

#[test]
fn diagonal_frame_is_exact() {
    for n in 2..=4 {
        for kind in ProtocolKind::ALL {
            let x = 0.2;
            let spec = ThermalEnsembleSpec::new(n, 5e9, x).unwrap();
            let mut gates = synthesize_permutation(&protocol_permutation(kind, n, x).unwrap());
            if gates.is_empty() {
                gates = dyncool::circuit::synthesize_swap(0, (1 << n) - 1, n).unwrap();
            }
            for locus in [NoiseLocus::SingleOperand, NoiseLocus::AllOperands] {
                for gran in [NoiseGranularity::Mcx, NoiseGranularity::Elementary] {
                    for p in [0.07, 0.6] {
                        let noise = NoiseModel::new(p)
                            .unwrap()
                            .with_locus(locus)
                            .with_granularity(gran);
                        let rho = density_matrix_run(&gates, &spec, &noise);
                        let dist = propagate_distribution_noisy(&gates, &spec, &noise).unwrap();
                        for (s, pr) in dist.probabilities().iter().enumerate() {
                            assert!(
                                (rho[(s, s)].re - pr).abs() < 1e-13,
                                "n={n} {kind} {locus:?} {gran:?} p={p}"
                            );
                        }
                        let off = (0..1 << n)
                            .flat_map(|a| (0..1 << n).map(move |b| (a, b)))
                            .filter(|(a, b)| a != b)
                            .map(|(a, b)| rho[(a, b)].norm())
                            .fold(0.0, f64::max);
                        assert!(off < 1e-14);
                    }
                }
            }
        }
    }
}
