//! Lowering permutations to multi-controlled-X circuits.
//!
//! A transposition of two basis states is built from a Gray code between
//! them: each neighbouring pair of code words differs in one bit and is
//! swapped by a single MCX gate controlled on every other qubit. Walking the
//! code forward and back swaps the endpoints and fixes everything else.

use std::fmt;
use std::str::FromStr;

use crate::error::{CoolingError, Result};
use crate::state::{
    check_indexed, format_bitstring, full_mask, qubit_bit, qubit_mask, Permutation, StateIndex,
};

/// Control on `qubit`, active when the qubit equals `polarity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Control {
    pub qubit: usize,
    pub polarity: bool,
}

/// NOT on `target` conditioned on all controls.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct McxGate {
    target: usize,
    controls: Vec<Control>,
}

impl McxGate {
    pub fn new(target: usize, mut controls: Vec<Control>) -> Result<Self> {
        controls.sort();
        if controls.iter().any(|c| c.qubit == target) {
            return Err(CoolingError::InvalidPermutation(format!(
                "qubit {target} is both target and control"
            )));
        }
        if controls.windows(2).any(|w| w[0].qubit == w[1].qubit) {
            return Err(CoolingError::InvalidPermutation("repeated control qubit".into()));
        }
        Ok(Self { target, controls })
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn controls(&self) -> &[Control] {
        &self.controls
    }

    /// Target followed by the control qubits.
    pub fn operands(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.target).chain(self.controls.iter().map(|c| c.qubit))
    }

    pub fn operand_count(&self) -> usize {
        1 + self.controls.len()
    }

    fn max_qubit(&self) -> usize {
        self.operands().max().unwrap_or(0)
    }

    pub fn compile(&self, n: usize) -> CompiledGate {
        let mut mask = 0;
        let mut value = 0;
        for c in &self.controls {
            let m = qubit_mask(c.qubit, n);
            mask |= m;
            if c.polarity {
                value |= m;
            }
        }
        CompiledGate {
            flip: qubit_mask(self.target, n),
            mask,
            value,
        }
    }

    fn relabel(&self, map: &[usize]) -> Self {
        let controls = self
            .controls
            .iter()
            .map(|c| Control {
                qubit: map[c.qubit],
                polarity: c.polarity,
            })
            .collect();
        McxGate::new(map[self.target], controls).expect("injective relabelling")
    }
}

/// Bit-mask form of an MCX gate for fast classical execution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompiledGate {
    pub flip: StateIndex,
    pub mask: StateIndex,
    pub value: StateIndex,
}

impl CompiledGate {
    #[inline]
    pub fn apply(&self, state: StateIndex) -> StateIndex {
        if state & self.mask == self.value {
            state ^ self.flip
        } else {
            state
        }
    }
}

/// Ordered MCX gates on an `n`-qubit register.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GateList {
    n_qubits: usize,
    gates: Vec<McxGate>,
}

impl GateList {
    pub fn new(n_qubits: usize) -> Result<Self> {
        check_indexed(n_qubits)?;
        Ok(Self {
            n_qubits,
            gates: Vec::new(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[McxGate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: McxGate) -> Result<()> {
        if gate.max_qubit() >= self.n_qubits {
            return Err(CoolingError::QubitMismatch {
                expected: self.n_qubits,
                found: gate.max_qubit() + 1,
            });
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Appends another list on the same register.
    pub fn append(&mut self, other: &GateList) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(CoolingError::QubitMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    /// Re-expresses this circuit on a larger register, placing local qubit `i`
    /// on `qubits[i]`.
    pub fn embed(&self, qubits: &[usize], total: usize) -> Result<GateList> {
        if qubits.len() != self.n_qubits {
            return Err(CoolingError::QubitMismatch {
                expected: self.n_qubits,
                found: qubits.len(),
            });
        }
        let mut sorted = qubits.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != qubits.len() || sorted.last().is_some_and(|&q| q >= total) {
            return Err(CoolingError::InvalidPermutation(
                "embedding must use distinct in-range qubits".into(),
            ));
        }
        let mut out = GateList::new(total)?;
        out.gates = self.gates.iter().map(|g| g.relabel(qubits)).collect();
        Ok(out)
    }

    pub fn compile(&self) -> Vec<CompiledGate> {
        self.gates.iter().map(|g| g.compile(self.n_qubits)).collect()
    }

    /// One gate per line: `MCX t=<i> c=<j>:<pol>,...`.
    pub fn to_text(&self) -> String {
        let mut out = format!("# qubits: {}\n", self.n_qubits);
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut declared = None;
        let mut gates = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let (body, comment) = match raw.find('#') {
                Some(k) => (&raw[..k], Some(&raw[k + 1..])),
                None => (raw, None),
            };
            if let Some(v) = comment.and_then(|c| c.trim().strip_prefix("qubits:")) {
                declared = Some(v.trim().parse::<usize>().map_err(|_| CoolingError::Parse {
                    line,
                    message: format!("bad qubit count {:?}", v.trim()),
                })?);
            }
            if body.trim().is_empty() {
                continue;
            }
            gates.push(parse_gate(body).map_err(|message| CoolingError::Parse { line, message })?);
        }
        let needed = gates.iter().map(|g| g.max_qubit() + 1).max().unwrap_or(1);
        let n = declared.unwrap_or(needed);
        let mut list = GateList::new(n)?;
        for g in gates {
            list.push(g)?;
        }
        Ok(list)
    }
}

fn parse_gate(body: &str) -> std::result::Result<McxGate, String> {
    let mut tokens = body.split_whitespace();
    if tokens.next() != Some("MCX") {
        return Err("expected MCX".into());
    }
    let mut target = None;
    let mut controls = Vec::new();
    for tok in tokens {
        if let Some(t) = tok.strip_prefix("t=") {
            target = Some(t.parse::<usize>().map_err(|_| format!("bad target {t:?}"))?);
        } else if let Some(cs) = tok.strip_prefix("c=") {
            for c in cs.split(',').filter(|c| !c.is_empty()) {
                let (q, pol) = c.split_once(':').ok_or(format!("bad control {c:?}"))?;
                let qubit = q.parse().map_err(|_| format!("bad control qubit {q:?}"))?;
                let polarity = match pol {
                    "0" => false,
                    "1" => true,
                    _ => return Err(format!("bad polarity {pol:?}")),
                };
                controls.push(Control { qubit, polarity });
            }
        } else {
            return Err(format!("unexpected token {tok:?}"));
        }
    }
    let target = target.ok_or("missing target")?;
    McxGate::new(target, controls).map_err(|e| e.to_string())
}

impl fmt::Display for McxGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MCX t={} c=", self.target)?;
        for (i, c) in self.controls.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}:{}", c.qubit, c.polarity as u8)?;
        }
        Ok(())
    }
}

impl fmt::Display for GateList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for GateList {
    type Err = CoolingError;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_text(s)
    }
}

fn check_pair(b1: StateIndex, b2: StateIndex, n: usize) -> Result<()> {
    check_indexed(n)?;
    let limit = full_mask(n);
    if b1 > limit || b2 > limit {
        return Err(CoolingError::InvalidBitstring(format!(
            "{b1} or {b2} exceeds {n} qubits"
        )));
    }
    if b1 == b2 {
        return Err(CoolingError::InvalidPermutation(format!(
            "identical endpoints {}",
            format_bitstring(b1, n)
        )));
    }
    Ok(())
}

/// Gray code from `b1` to `b2`, flipping differing bits from the most
/// significant down.
pub fn gray_code(b1: StateIndex, b2: StateIndex, n: usize) -> Result<Vec<StateIndex>> {
    check_pair(b1, b2, n)?;
    let mut code = vec![b1];
    let mut cur = b1;
    for q in 0..n {
        let m = qubit_mask(q, n);
        if (b1 ^ b2) & m != 0 {
            cur ^= m;
            code.push(cur);
        }
    }
    Ok(code)
}

/// MCX swapping two code words that differ in exactly one bit.
fn neighbour_gate(from: StateIndex, to: StateIndex, n: usize) -> McxGate {
    let diff = from ^ to;
    let target = (0..n)
        .find(|&q| qubit_mask(q, n) == diff)
        .expect("single-bit step");
    let controls = (0..n)
        .filter(|&q| q != target)
        .map(|q| Control {
            qubit: q,
            polarity: qubit_bit(from, q, n),
        })
        .collect();
    McxGate::new(target, controls).expect("target excluded from controls")
}

/// Circuit exchanging `b1` and `b2`; `2m - 3` gates for a code of length `m`.
pub fn synthesize_swap(b1: StateIndex, b2: StateIndex, n: usize) -> Result<GateList> {
    let code = gray_code(b1, b2, n)?;
    let forward: Vec<McxGate> = code.windows(2).map(|w| neighbour_gate(w[0], w[1], n)).collect();
    let mut list = GateList::new(n)?;
    list.gates.extend(forward.iter().cloned());
    list.gates
        .extend(forward[..forward.len() - 1].iter().rev().cloned());
    Ok(list)
}

/// Circuit for the cycle `c[0] -> c[1] -> ... -> c[0]`, as swaps of the
/// first element with each later one.
pub fn synthesize_cycle(cycle: &[StateIndex], n: usize) -> Result<GateList> {
    if cycle.len() < 2 {
        return Err(CoolingError::InvalidPermutation("cycle shorter than 2".into()));
    }
    let mut sorted = cycle.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(CoolingError::InvalidPermutation("repeated state in cycle".into()));
    }
    let mut list = GateList::new(n)?;
    for &s in &cycle[1..] {
        list.append(&synthesize_swap(cycle[0], s, n)?)?;
    }
    Ok(list)
}

/// Concatenated cycle circuits in canonical cycle order.
pub fn synthesize_permutation(perm: &Permutation) -> GateList {
    let n = perm.n_qubits();
    let mut list = GateList::new(n).expect("valid permutation width");
    for c in perm.cycles() {
        list.append(&synthesize_cycle(c, n).expect("canonical cycles are valid"))
            .expect("same register");
    }
    list
}

/// MCX gates needed for a permutation without building the circuit.
pub fn permutation_mcx_count(perm: &Permutation) -> u64 {
    perm.cycles()
        .iter()
        .flat_map(|c| {
            c[1..]
                .iter()
                .map(move |&s| 2 * (c[0] ^ s).count_ones() as u64 - 1)
        })
        .sum()
}

/// MCX count of the mirror protocol circuit on `n` qubits.
pub fn mirror_mcx_count(n: usize) -> u128 {
    // every mirror swap spans all n bits
    crate::protocols::mirror_swap_count(n) * (2 * n as u128).saturating_sub(1)
}

/// Elementary-gate cost model for one MCX gate with `c` controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnotModel {
    /// Relative-phase decomposition: `slope·c + offset`.
    pub linear_slope: f64,
    pub linear_offset: f64,
    /// Phase-exact decomposition: `a·c² + b·c + d`.
    pub quadratic: [f64; 3],
}

impl Default for CnotModel {
    fn default() -> Self {
        Self {
            linear_slope: 6.0,
            linear_offset: -8.0,
            quadratic: [2.0, 2.0, -6.0],
        }
    }
}

impl CnotModel {
    /// CNOT estimate for one gate; one CNOT minimum for a single control.
    pub fn gate_cost(&self, controls: usize, phase_exact: bool) -> u64 {
        if controls == 0 {
            return 0;
        }
        let c = controls as f64;
        let raw = if phase_exact {
            let [a, b, d] = self.quadratic;
            a * c * c + b * c + d
        } else {
            self.linear_slope * c + self.linear_offset
        };
        raw.round().max(1.0) as u64
    }
}

/// Modelled CNOT count of a gate list.
pub fn estimate_cnot_count(gates: &GateList, phase_exact: bool, model: &CnotModel) -> u64 {
    gates
        .gates()
        .iter()
        .map(|g| model.gate_cost(g.controls().len(), phase_exact))
        .sum()
}

/// Runs the circuit on one classical bitstring.
pub fn execute_classically(gates: &GateList, input: StateIndex) -> Result<StateIndex> {
    if input > full_mask(gates.n_qubits()) {
        return Err(CoolingError::InvalidBitstring(format!(
            "{input} exceeds {} qubits",
            gates.n_qubits()
        )));
    }
    Ok(gates.compile().iter().fold(input, |s, g| g.apply(s)))
}
