//! Computational-basis states, thermal distributions and permutations.
//!
//! Basis states are integers read MSB-first: qubit 0 is the target and is
//! the leftmost bit of the bitstring. Energies are kept as integers in units
//! of `ħω/2`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::analytics::{quantum_energy, ThermalEnsembleSpec};
use crate::error::{CoolingError, Result};
use crate::numerics::{binomial_u64, ln_binomial, log_sum_exp, mul_log};

/// Index of a computational basis state.
pub type StateIndex = u64;

/// Largest register for state-indexed permutations.
pub const MAX_INDEXED_QUBITS: usize = 63;
/// Largest register for dense distributions.
pub const MAX_EXPLICIT_QUBITS: usize = 20;

pub(crate) fn check_indexed(n: usize) -> Result<()> {
    if n == 0 {
        return Err(CoolingError::domain("n_qubits", 0.0, ">= 1"));
    }
    if n > MAX_INDEXED_QUBITS {
        return Err(CoolingError::capacity("state index", n, MAX_INDEXED_QUBITS));
    }
    Ok(())
}

/// Bit of `qubit` in `state` (qubit 0 is the most significant).
pub fn qubit_bit(state: StateIndex, qubit: usize, n: usize) -> bool {
    (state >> (n - 1 - qubit)) & 1 == 1
}

/// Single-bit mask for `qubit`.
pub fn qubit_mask(qubit: usize, n: usize) -> StateIndex {
    1 << (n - 1 - qubit)
}

pub fn target_bit(state: StateIndex, n: usize) -> bool {
    qubit_bit(state, 0, n)
}

pub fn excitations(state: StateIndex) -> u32 {
    state.count_ones()
}

/// Total energy in units of `ħω/2`: `2j - N`.
pub fn energy_half_units(state: StateIndex, n: usize) -> i64 {
    2 * excitations(state) as i64 - n as i64
}

/// Total energy in joules.
pub fn state_energy(state: StateIndex, n: usize, omega: f64) -> f64 {
    energy_half_units(state, n) as f64 * 0.5 * quantum_energy(omega)
}

/// Sign of the target qubit's energy.
pub fn target_energy_sign(state: StateIndex, n: usize) -> i8 {
    if target_bit(state, n) {
        1
    } else {
        -1
    }
}

/// Bitwise complement within an `n`-qubit register.
pub fn complement(state: StateIndex, n: usize) -> StateIndex {
    !state & full_mask(n)
}

pub(crate) fn full_mask(n: usize) -> StateIndex {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Parses a bitstring such as `0110` into `(state, width)`.
pub fn parse_bitstring(s: &str) -> Result<(StateIndex, usize)> {
    let s = s.trim();
    if s.is_empty() || s.len() > MAX_INDEXED_QUBITS || !s.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(CoolingError::InvalidBitstring(s.to_string()));
    }
    let v = u64::from_str_radix(s, 2).map_err(|_| CoolingError::InvalidBitstring(s.to_string()))?;
    Ok((v, s.len()))
}

pub fn format_bitstring(state: StateIndex, n: usize) -> String {
    format!("{state:0n$b}")
}

/// Dense diagonal distribution over all `2^N` basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitDistribution {
    n_qubits: usize,
    probabilities: Vec<f64>,
}

impl ExplicitDistribution {
    pub fn from_probabilities(n_qubits: usize, probabilities: Vec<f64>) -> Result<Self> {
        if n_qubits > MAX_EXPLICIT_QUBITS {
            return Err(CoolingError::capacity(
                "explicit distribution",
                n_qubits,
                MAX_EXPLICIT_QUBITS,
            ));
        }
        if probabilities.len() != 1usize << n_qubits {
            return Err(CoolingError::QubitMismatch {
                expected: 1 << n_qubits,
                found: probabilities.len(),
            });
        }
        if probabilities.iter().any(|p| !(*p >= 0.0)) {
            return Err(CoolingError::domain("probability", f64::NAN, ">= 0"));
        }
        Ok(Self {
            n_qubits,
            probabilities,
        })
    }

    /// Product of `N` identical single-qubit Gibbs states.
    pub fn thermal(spec: &ThermalEnsembleSpec) -> Result<Self> {
        Self::product(spec.n_qubits(), spec.excited_population())
    }

    /// Product distribution with excited population `x` on every qubit.
    pub fn product(n: usize, x: f64) -> Result<Self> {
        if n > MAX_EXPLICIT_QUBITS {
            return Err(CoolingError::capacity(
                "explicit distribution (use BucketedDistribution)",
                n,
                MAX_EXPLICIT_QUBITS,
            ));
        }
        let per_j: Vec<f64> = (0..=n)
            .map(|j| (1.0 - x).powi((n - j) as i32) * x.powi(j as i32))
            .collect();
        let probabilities = (0..1u64 << n).map(|s| per_j[excitations(s) as usize]).collect();
        Ok(Self {
            n_qubits: n,
            probabilities,
        })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::product(n, 0.5)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub(crate) fn probabilities_mut(&mut self) -> &mut [f64] {
        &mut self.probabilities
    }

    pub fn total_mass(&self) -> f64 {
        let mut acc = crate::numerics::NeumaierSum::new();
        acc.extend(self.probabilities.iter().copied());
        acc.value()
    }

    /// Moves each state's probability to its image under `perm`.
    pub fn apply_permutation(&self, perm: &Permutation) -> Result<Self> {
        if perm.n_qubits() != self.n_qubits {
            return Err(CoolingError::QubitMismatch {
                expected: self.n_qubits,
                found: perm.n_qubits(),
            });
        }
        let mut out = self.probabilities.clone();
        for cycle in perm.cycles() {
            for (i, &s) in cycle.iter().enumerate() {
                let image = cycle[(i + 1) % cycle.len()];
                out[image as usize] = self.probabilities[s as usize];
            }
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            probabilities: out,
        })
    }

    /// Total probability on states whose target bit is 1.
    pub fn target_excited_population(&self) -> f64 {
        self.qubit_excited_population(0)
    }

    /// Marginal excited population of any qubit.
    pub fn qubit_excited_population(&self, qubit: usize) -> f64 {
        let mut acc = crate::numerics::NeumaierSum::new();
        acc.extend(
            self.probabilities
                .iter()
                .enumerate()
                .filter(|(s, _)| qubit_bit(*s as u64, qubit, self.n_qubits))
                .map(|(_, p)| *p),
        );
        acc.value()
    }

    /// Joint distribution of a subset of qubits, in the given order.
    pub fn marginal(&self, qubits: &[usize]) -> Vec<f64> {
        let k = qubits.len();
        let mut out = vec![0.0; 1 << k];
        for (s, p) in self.probabilities.iter().enumerate() {
            let mut sub = 0usize;
            for &q in qubits {
                sub = (sub << 1) | qubit_bit(s as u64, q, self.n_qubits) as usize;
            }
            out[sub] += p;
        }
        out
    }

    /// Total probability per excitation count.
    pub fn collapse_by_excitation(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n_qubits + 1];
        for (s, p) in self.probabilities.iter().enumerate() {
            out[excitations(s as u64) as usize] += p;
        }
        out
    }
}

/// States sharing one excitation count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bucket {
    pub excitations: usize,
    pub ln_multiplicity: f64,
    /// Exact count when it fits in 64 bits.
    pub multiplicity: Option<u64>,
    pub ln_probability_per_state: f64,
    /// `2j - N` in units of `ħω/2`.
    pub energy_half_units: i64,
}

impl Bucket {
    pub fn ln_mass(&self) -> f64 {
        self.ln_multiplicity + self.ln_probability_per_state
    }

    pub fn energy(&self, omega: f64) -> f64 {
        self.energy_half_units as f64 * 0.5 * quantum_energy(omega)
    }
}

/// Sparse thermal distribution: one bucket per excitation count.
#[derive(Debug, Clone, PartialEq)]
pub struct BucketedDistribution {
    n_qubits: usize,
    excited_population: f64,
    buckets: Vec<Bucket>,
}

impl BucketedDistribution {
    pub fn thermal(spec: &ThermalEnsembleSpec) -> Self {
        Self::product(spec.n_qubits(), spec.excited_population())
    }

    pub fn product(n: usize, x: f64) -> Self {
        let ln_x = x.ln();
        let ln_y = (-x).ln_1p();
        let n64 = n as u64;
        let buckets = (0..=n64)
            .map(|j| Bucket {
                excitations: j as usize,
                ln_multiplicity: ln_binomial(n64, j),
                multiplicity: binomial_u64(n64, j),
                ln_probability_per_state: mul_log(n64 - j, ln_y) + mul_log(j, ln_x),
                energy_half_units: 2 * j as i64 - n as i64,
            })
            .collect();
        Self {
            n_qubits: n,
            excited_population: x,
            buckets,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn excited_population(&self) -> f64 {
        self.excited_population
    }

    pub fn buckets(&self) -> &[Bucket] {
        &self.buckets
    }

    pub fn total_mass(&self) -> f64 {
        let terms: Vec<f64> = self.buckets.iter().map(Bucket::ln_mass).collect();
        log_sum_exp(&terms).exp()
    }
}

/// Bijection on basis states stored as disjoint cycles; unlisted states are
/// fixed. A cycle `[a, b, c]` sends `a -> b -> c -> a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    n_qubits: usize,
    cycles: Vec<Vec<StateIndex>>,
}

impl Permutation {
    pub fn identity(n_qubits: usize) -> Result<Self> {
        check_indexed(n_qubits)?;
        Ok(Self {
            n_qubits,
            cycles: Vec::new(),
        })
    }

    /// Validates and canonicalizes a list of cycles. Length-1 cycles are dropped.
    pub fn from_cycles(n_qubits: usize, cycles: Vec<Vec<StateIndex>>) -> Result<Self> {
        check_indexed(n_qubits)?;
        let limit = full_mask(n_qubits);
        let mut seen = BTreeSet::new();
        for cycle in &cycles {
            if cycle.is_empty() {
                return Err(CoolingError::InvalidPermutation("empty cycle".into()));
            }
            for &s in cycle {
                if s > limit {
                    return Err(CoolingError::InvalidPermutation(format!(
                        "state {s} out of range for {n_qubits} qubits"
                    )));
                }
                if !seen.insert(s) {
                    return Err(CoolingError::InvalidPermutation(format!(
                        "state {} appears twice",
                        format_bitstring(s, n_qubits)
                    )));
                }
            }
        }
        let mut cycles: Vec<Vec<StateIndex>> = cycles
            .into_iter()
            .filter(|c| c.len() >= 2)
            .map(|mut c| {
                let min_pos = c.iter().enumerate().min_by_key(|(_, s)| **s).unwrap().0;
                c.rotate_left(min_pos);
                c
            })
            .collect();
        cycles.sort();
        Ok(Self { n_qubits, cycles })
    }

    /// Builds a permutation from `(source, image)` pairs; unpaired states are fixed.
    pub fn from_mapping(n_qubits: usize, pairs: &[(StateIndex, StateIndex)]) -> Result<Self> {
        check_indexed(n_qubits)?;
        let map: HashMap<StateIndex, StateIndex> = pairs.iter().copied().collect();
        if map.len() != pairs.len() {
            return Err(CoolingError::InvalidPermutation("repeated source".into()));
        }
        let images: BTreeSet<StateIndex> = map.values().copied().collect();
        if images.len() != map.len() || images.iter().any(|d| !map.contains_key(d)) {
            return Err(CoolingError::InvalidPermutation(
                "sources and images differ".into(),
            ));
        }
        let mut sources: Vec<StateIndex> = map.keys().copied().collect();
        sources.sort_unstable();
        let mut visited = BTreeSet::new();
        let mut cycles = Vec::new();
        for start in sources {
            if visited.contains(&start) {
                continue;
            }
            let mut cycle = vec![start];
            visited.insert(start);
            let mut cur = map[&start];
            while cur != start {
                visited.insert(cur);
                cycle.push(cur);
                cur = map[&cur];
            }
            cycles.push(cycle);
        }
        Self::from_cycles(n_qubits, cycles)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn cycles(&self) -> &[Vec<StateIndex>] {
        &self.cycles
    }

    pub fn is_identity(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Number of states that are not fixed.
    pub fn support_size(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }

    /// `(source, image)` for every moved state.
    pub fn moves(&self) -> impl Iterator<Item = (StateIndex, StateIndex)> + '_ {
        self.cycles
            .iter()
            .flat_map(|c| (0..c.len()).map(move |i| (c[i], c[(i + 1) % c.len()])))
    }

    pub fn image_map(&self) -> HashMap<StateIndex, StateIndex> {
        self.moves().collect()
    }

    /// Image of a single state.
    pub fn apply(&self, state: StateIndex) -> StateIndex {
        for c in &self.cycles {
            if let Some(i) = c.iter().position(|&s| s == state) {
                return c[(i + 1) % c.len()];
            }
        }
        state
    }

    pub fn inverse(&self) -> Self {
        let cycles = self
            .cycles
            .iter()
            .map(|c| c.iter().rev().copied().collect())
            .collect();
        Self::from_cycles(self.n_qubits, cycles).expect("inverse of a valid permutation")
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Result<Self> {
        if other.n_qubits != self.n_qubits {
            return Err(CoolingError::QubitMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        let a = self.image_map();
        let b = other.image_map();
        let support: BTreeSet<StateIndex> = a.keys().chain(b.keys()).copied().collect();
        let pairs: Vec<_> = support
            .into_iter()
            .map(|s| {
                let mid = a.get(&s).copied().unwrap_or(s);
                (s, b.get(&mid).copied().unwrap_or(mid))
            })
            .filter(|(s, d)| s != d)
            .collect();
        Self::from_mapping(self.n_qubits, &pairs)
    }

    /// Text form: one cycle per line as bitstrings joined by `->`.
    pub fn to_text(&self) -> String {
        let mut out = format!("# qubits: {}\n", self.n_qubits);
        for c in &self.cycles {
            let line: Vec<String> = c.iter().map(|s| format_bitstring(*s, self.n_qubits)).collect();
            out.push_str(&line.join(" -> "));
            out.push('\n');
        }
        out
    }

    /// Parses the text form. The register width comes from the bitstrings,
    /// or from a `# qubits: N` comment when there are no cycles.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut width: Option<usize> = None;
        let mut declared: Option<usize> = None;
        let mut cycles = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let (body, comment) = match raw.find('#') {
                Some(i) => (&raw[..i], Some(&raw[i + 1..])),
                None => (raw, None),
            };
            if let Some(c) = comment {
                if let Some(v) = c.trim().strip_prefix("qubits:") {
                    declared = Some(v.trim().parse().map_err(|_| CoolingError::Parse {
                        line: line_no,
                        message: format!("bad qubit count {:?}", v.trim()),
                    })?);
                }
            }
            if body.trim().is_empty() {
                continue;
            }
            let mut cycle = Vec::new();
            for tok in body.split("->") {
                let (s, w) = parse_bitstring(tok).map_err(|e| CoolingError::Parse {
                    line: line_no,
                    message: e.to_string(),
                })?;
                match width {
                    None => width = Some(w),
                    Some(prev) if prev != w => {
                        return Err(CoolingError::Parse {
                            line: line_no,
                            message: format!("bitstring width {w} differs from {prev}"),
                        })
                    }
                    _ => {}
                }
                cycle.push(s);
            }
            if cycle.len() < 2 {
                return Err(CoolingError::Parse {
                    line: line_no,
                    message: "a cycle needs at least two states".into(),
                });
            }
            cycles.push(cycle);
        }
        let n = match (width, declared) {
            (Some(w), Some(d)) if w != d => {
                return Err(CoolingError::QubitMismatch {
                    expected: d,
                    found: w,
                })
            }
            (Some(w), _) => w,
            (None, Some(d)) => d,
            (None, None) => {
                return Err(CoolingError::Parse {
                    line: 0,
                    message: "cannot infer the qubit count of an empty permutation".into(),
                })
            }
        };
        Self::from_cycles(n, cycles)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Permutation {
    type Err = CoolingError;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_text(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const OMEGA: f64 = 5e9;

    #[test]
    fn energies_in_half_quanta() {
        assert_eq!(energy_half_units(0b0000, 4), -4);
        assert_eq!(energy_half_units(0b1111, 4), 4);
        assert_eq!(energy_half_units(0b0101, 4), 0);
        let e = state_energy(0b0000, 4, OMEGA);
        assert!((e + 2.0 * quantum_energy(OMEGA)).abs() < 1e-40);
    }

    #[test]
    fn target_is_leftmost() {
        assert_eq!(target_energy_sign(0b011, 3), -1);
        assert_eq!(target_energy_sign(0b100, 3), 1);
        assert_eq!(target_energy_sign(0, 1), -1);
        assert_eq!(format_bitstring(4, 3), "100");
        assert_eq!(parse_bitstring("0110").unwrap(), (6, 4));
        assert!(parse_bitstring("01a").is_err());
    }

    #[test]
    fn thermal_entries() {
        let d = ExplicitDistribution::product(1, 0.3).unwrap();
        assert_eq!(d.probabilities(), &[0.7, 0.3]);
        let d = ExplicitDistribution::product(3, 0.25).unwrap();
        assert_eq!(d.probabilities()[0b000], 0.421875);
        assert_eq!(d.probabilities()[0b011], 0.046875);
        assert!((d.total_mass() - 1.0).abs() < 1e-15);
        assert!(ExplicitDistribution::product(21, 0.1).unwrap_err().is_capacity());
    }

    #[test]
    fn swap_cools_three_qubits() {
        let d = ExplicitDistribution::product(3, 0.25).unwrap();
        let p = Permutation::from_cycles(3, vec![vec![0b011, 0b100]]).unwrap();
        let out = d.apply_permutation(&p).unwrap();
        assert_eq!(out.target_excited_population(), 0.15625);
        assert_eq!(out.apply_permutation(&p.inverse()).unwrap(), d);
        let id = Permutation::identity(3).unwrap();
        assert_eq!(d.apply_permutation(&id).unwrap(), d);
    }

    #[test]
    fn uniform_is_half() {
        let d = ExplicitDistribution::uniform(5).unwrap();
        assert_eq!(d.target_excited_population(), 0.5);
    }

    #[test]
    fn bucket_values() {
        let b = BucketedDistribution::product(4, 0.25);
        assert_eq!(b.buckets()[0].multiplicity, Some(1));
        assert!((b.buckets()[0].ln_probability_per_state.exp() - 0.31640625).abs() < 1e-15);
        let big = BucketedDistribution::product(4096, 0.3);
        assert!((big.total_mass() - 1.0).abs() < 1e-9);
        let n = big.buckets().len();
        for j in 0..n {
            assert_eq!(
                big.buckets()[j].energy_half_units,
                -big.buckets()[n - 1 - j].energy_half_units
            );
        }
    }

    #[test]
    fn explicit_collapses_to_buckets() {
        for n in 1..=12 {
            let x = 0.17;
            let d = ExplicitDistribution::product(n, x).unwrap();
            let b = BucketedDistribution::product(n, x);
            for (mass, bucket) in d.collapse_by_excitation().iter().zip(b.buckets()) {
                assert!((mass - bucket.ln_mass().exp()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn canonical_cycles() {
        let p = Permutation::from_cycles(3, vec![vec![5, 1, 3], vec![7, 0], vec![2]]).unwrap();
        assert_eq!(p.cycles(), &[vec![0, 7], vec![1, 3, 5]]);
        assert_eq!(p.apply(5), 1);
        assert_eq!(p.apply(2), 2);
        assert!(Permutation::from_cycles(3, vec![vec![1, 1]]).is_err());
        assert!(Permutation::from_cycles(3, vec![vec![1, 8]]).is_err());
    }

    #[test]
    fn text_format() {
        let p: Permutation = "# swap\n011 -> 100\n".parse().unwrap();
        assert_eq!(p.n_qubits(), 3);
        assert_eq!(p.cycles(), &[vec![3, 4]]);
        assert_eq!(p.to_text().parse::<Permutation>().unwrap(), p);
        let id: Permutation = Permutation::identity(4).unwrap().to_text().parse().unwrap();
        assert_eq!(id.n_qubits(), 4);
        assert!("01 -> 100".parse::<Permutation>().is_err());
        assert!("011".parse::<Permutation>().is_err());
    }

    fn arb_permutation() -> impl Strategy<Value = Permutation> {
        (1usize..=6).prop_flat_map(|n| {
            Just((0..1u64 << n).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(move |shuffled| {
                    let pairs: Vec<_> = shuffled
                        .iter()
                        .enumerate()
                        .map(|(s, &d)| (s as u64, d))
                        .filter(|(s, d)| s != d)
                        .collect();
                    Permutation::from_mapping(n, &pairs).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn inverse_composes_to_identity(p in arb_permutation()) {
            prop_assert!(p.then(&p.inverse()).unwrap().is_identity());
        }

        #[test]
        fn permuting_preserves_spectrum(p in arb_permutation(), x in 0.01f64..0.49) {
            let d = ExplicitDistribution::product(p.n_qubits(), x).unwrap();
            let out = d.apply_permutation(&p).unwrap();
            let mut a = d.probabilities().to_vec();
            let mut b = out.probabilities().to_vec();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            prop_assert_eq!(a, b);
        }

        #[test]
        fn thermal_marginal_is_single_qubit(n in 1usize..=10, x in 0.0f64..1.0) {
            let d = ExplicitDistribution::product(n, x).unwrap();
            prop_assert!((d.target_excited_population() - x).abs() < 1e-12);
        }

        #[test]
        fn image_agrees_with_apply(p in arb_permutation()) {
            let map = p.image_map();
            for s in 0..1u64 << p.n_qubits() {
                prop_assert_eq!(p.apply(s), map.get(&s).copied().unwrap_or(s));
            }
        }
    }
}
