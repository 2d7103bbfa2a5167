//! Maximal-cooling permutations: mirror, partner pairing and minimal work.
//!
//! For `0 < x < 1/2` a state's probability only depends on its excitation
//! count, so each protocol is described by the excitation count every
//! destination must receive. The realized permutation keeps as many fixed
//! points as possible and prefers two-cycles, which keeps circuits short.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::analytics::excited_population_after_cooling;
use crate::error::{CoolingError, Result};
use crate::numerics::binomial_u64;
use crate::state::{
    check_indexed, complement, excitations, target_bit, ExplicitDistribution, Permutation, StateIndex,
    MAX_EXPLICIT_QUBITS,
};

/// Largest register for the mirror protocol's explicit swap list.
pub const MAX_MIRROR_QUBITS: usize = 24;
/// Largest register for brute-force maximality checks.
pub const MAX_VERIFY_QUBITS: usize = 12;

/// Which maximal-cooling permutation to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProtocolKind {
    Mirror,
    Ppa,
    MinWork,
}

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 3] = [ProtocolKind::Mirror, ProtocolKind::Ppa, ProtocolKind::MinWork];

    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::Mirror => "mirror",
            ProtocolKind::Ppa => "ppa",
            ProtocolKind::MinWork => "min-work",
        }
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProtocolKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "mirror" => Ok(ProtocolKind::Mirror),
            "ppa" | "partner-pairing" => Ok(ProtocolKind::Ppa),
            "min-work" | "minwork" | "minimal-work" => Ok(ProtocolKind::MinWork),
            other => Err(format!("unknown protocol {other:?} (mirror, ppa, min-work)")),
        }
    }
}

/// Swaps every target-0 state having fewer than `N/2` zero bits with its
/// complement.
pub fn mirror_permutation(n: usize) -> Result<Permutation> {
    check_indexed(n)?;
    if n > MAX_MIRROR_QUBITS {
        return Err(CoolingError::capacity("mirror permutation", n, MAX_MIRROR_QUBITS));
    }
    let cycles = (0..1u64 << (n - 1))
        .filter(|&s| 2 * (n as u32 - excitations(s)) < n as u32)
        .map(|s| vec![s, complement(s, n)])
        .collect();
    Permutation::from_cycles(n, cycles)
}

/// Number of swaps in the mirror protocol.
pub fn mirror_swap_count(n: usize) -> u128 {
    if n == 0 {
        return 0;
    }
    let row = crate::numerics::binomial_row(n as u64 - 1);
    // z counts zero bits among the auxiliary qubits
    row.into_iter()
        .enumerate()
        .take_while(|(z, _)| 2 * (z + 1) < n)
        .map(|(_, c)| u128::try_from(c).unwrap_or(u128::MAX))
        .sum()
}

fn check_protocol_args(n: usize, x: f64) -> Result<()> {
    check_indexed(n)?;
    if n > MAX_EXPLICIT_QUBITS {
        return Err(CoolingError::capacity(
            "protocol construction",
            n,
            MAX_EXPLICIT_QUBITS,
        ));
    }
    if !(x > 0.0 && x < 0.5) {
        return Err(CoolingError::domain(
            "x",
            x,
            "strictly between 0 and 1/2 (degenerate ordering otherwise)",
        ));
    }
    Ok(())
}

/// Sorts populations non-increasingly over lexicographic state order.
pub fn ppa_permutation(n: usize, x: f64) -> Result<Permutation> {
    check_protocol_args(n, x)?;
    let mut required = Vec::with_capacity(1 << n);
    for j in 0..=n as u64 {
        let count = binomial_u64(n as u64, j).expect("n <= 20");
        required.extend(std::iter::repeat(j as u32).take(count as usize));
    }
    realize(n, &required)
}

/// Maximal cooling that, within each target half, gives the most probable
/// states the lowest total energy.
pub fn min_work_permutation(n: usize, x: f64) -> Result<Permutation> {
    check_protocol_args(n, x)?;
    let flows = min_work_flows(n);
    let mut groups: BTreeMap<(bool, u32), Vec<StateIndex>> = BTreeMap::new();
    for d in 0..1u64 << n {
        groups
            .entry((target_bit(d, n), excitations(d)))
            .or_default()
            .push(d);
    }
    let mut required = vec![0u32; 1 << n];
    for (key, dests) in &groups {
        let inflow = &flows[key];
        let own = key.1;
        let mut order: Vec<u32> = vec![own];
        order.extend(inflow.keys().copied().filter(|&j| j != own));
        let mut it = dests.iter();
        for class in order {
            let count = inflow.get(&class).copied().unwrap_or(0);
            for _ in 0..count {
                let d = it.next().expect("flows fill each group exactly");
                required[*d as usize] = class;
            }
        }
    }
    realize(n, &required)
}

/// Class-level flows `group -> (class -> count)` from matching classes in
/// probability order against cold-half then hot-half groups in energy order.
fn min_work_flows(n: usize) -> BTreeMap<(bool, u32), BTreeMap<u32, u64>> {
    let n64 = n as u64;
    let mut groups: Vec<((bool, u32), u64)> = Vec::with_capacity(2 * n);
    for j in 0..n64 {
        groups.push(((false, j as u32), binomial_u64(n64 - 1, j).unwrap()));
    }
    for j in 0..n64 {
        groups.push(((true, j as u32 + 1), binomial_u64(n64 - 1, j).unwrap()));
    }
    let mut flows: BTreeMap<(bool, u32), BTreeMap<u32, u64>> = BTreeMap::new();
    let mut g = 0;
    let mut room = groups[0].1;
    for class in 0..=n64 {
        let mut left = binomial_u64(n64, class).unwrap();
        while left > 0 {
            while room == 0 {
                g += 1;
                room = groups[g].1;
            }
            let take = left.min(room);
            *flows
                .entry(groups[g].0)
                .or_default()
                .entry(class as u32)
                .or_default() += take;
            left -= take;
            room -= take;
        }
    }
    flows
}

/// Builds a permutation sending states of each excitation count onto the
/// destinations that require it.
fn realize(n: usize, required: &[u32]) -> Result<Permutation> {
    let size = 1usize << n;
    let class = |s: usize| excitations(s as u64);
    let mut done = vec![false; size];
    let mut by_pair: BTreeMap<(u32, u32), VecDeque<usize>> = BTreeMap::new();
    for s in 0..size {
        if class(s) != required[s] {
            by_pair.entry((class(s), required[s])).or_default().push_back(s);
        }
    }
    let mut pairs: Vec<(StateIndex, StateIndex)> = Vec::new();
    // two-cycles first
    for s in 0..size {
        let (a, b) = (class(s), required[s]);
        if a == b || done[s] {
            continue;
        }
        let partner = by_pair.get_mut(&(b, a)).and_then(|q| {
            while let Some(&t) = q.front() {
                if done[t] {
                    q.pop_front();
                } else {
                    return q.pop_front();
                }
            }
            None
        });
        if let Some(t) = partner {
            done[s] = true;
            done[t] = true;
            pairs.push((s as u64, t as u64));
            pairs.push((t as u64, s as u64));
        }
    }
    let mut sources: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    let mut dests: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for s in 0..size {
        if class(s) != required[s] && !done[s] {
            sources.entry(class(s)).or_default().push(s);
            dests.entry(required[s]).or_default().push(s);
        }
    }
    for (c, srcs) in sources {
        let ds = dests.remove(&c).unwrap_or_default();
        if ds.len() != srcs.len() {
            return Err(CoolingError::InvalidPermutation(format!(
                "unbalanced class {c}: {} sources, {} destinations",
                srcs.len(),
                ds.len()
            )));
        }
        pairs.extend(srcs.into_iter().zip(ds).map(|(s, d)| (s as u64, d as u64)));
    }
    Permutation::from_mapping(n, &pairs)
}

/// Builds the permutation for any protocol kind. `x` is ignored by the mirror
/// protocol.
pub fn protocol_permutation(kind: ProtocolKind, n: usize, x: f64) -> Result<Permutation> {
    match kind {
        ProtocolKind::Mirror => mirror_permutation(n),
        ProtocolKind::Ppa => ppa_permutation(n, x),
        ProtocolKind::MinWork => min_work_permutation(n, x),
    }
}

/// One grid point of a maximality check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximalityPoint {
    pub x: f64,
    pub achieved: f64,
    pub optimal: f64,
}

impl MaximalityPoint {
    pub fn holds(&self) -> bool {
        (self.achieved - self.optimal).abs() <= MAXIMALITY_TOLERANCE
    }
}

const MAXIMALITY_TOLERANCE: f64 = 1e-12;

/// Outcome of [`verify_maximal`].
#[derive(Debug, Clone, PartialEq)]
pub struct MaximalityReport {
    pub maximal: bool,
    pub points: Vec<MaximalityPoint>,
}

impl MaximalityReport {
    pub fn first_failure(&self) -> Option<&MaximalityPoint> {
        self.points.iter().find(|p| !p.holds())
    }
}

/// Excited-population grid used by [`verify_maximal`].
pub fn maximality_grid() -> Vec<f64> {
    (1..=9).map(|i| i as f64 * 0.05).collect()
}

/// Checks that `perm` reaches the optimal target population at every grid x.
pub fn verify_maximal(perm: &Permutation, n: usize) -> Result<MaximalityReport> {
    if perm.n_qubits() != n {
        return Err(CoolingError::QubitMismatch {
            expected: n,
            found: perm.n_qubits(),
        });
    }
    if n > MAX_VERIFY_QUBITS {
        return Err(CoolingError::capacity("maximality check", n, MAX_VERIFY_QUBITS));
    }
    let mut points = Vec::new();
    for x in maximality_grid() {
        let d = ExplicitDistribution::product(n, x)?.apply_permutation(perm)?;
        points.push(MaximalityPoint {
            x,
            achieved: d.target_excited_population(),
            optimal: excited_population_after_cooling(x, n)?,
        });
    }
    Ok(MaximalityReport {
        maximal: points.iter().all(MaximalityPoint::holds),
        points,
    })
}
