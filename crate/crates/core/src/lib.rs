//! Dynamic cooling of qubit ensembles.
//!
//! A global unitary on `N` identical thermal qubits can lower the effective
//! temperature of one target qubit. This crate computes the optimal cooled
//! populations and temperatures, the work cost of cooling permutations,
//! builds maximal-cooling permutations, lowers them to multi-controlled-X
//! circuits through Gray codes, simulates those circuits under Pauli noise
//! and implements clustered multi-step cooling.
//!
//! Conventions: qubit 0 is the target and the most significant bit of a
//! basis-state index; frequencies are angular (rad/s) and enter energies as
//! `ħω`; work is reported in units of `ħω` unless a function says joules.

pub mod analytics;
pub mod circuit;
pub mod curves;
pub mod error;
pub mod exec;
pub mod noise;
pub mod numerics;
pub mod protocols;
pub mod state;
pub mod suboptimal;
pub mod work;

pub use analytics::{EffectiveTemperature, PhysicalConstants, ThermalEnsembleSpec};
pub use circuit::{CnotModel, GateList, McxGate};
pub use error::{CoolingError, Result};
pub use exec::Execution;
pub use noise::{CoolingReport, NoiseModel, SimResult};
pub use protocols::ProtocolKind;
pub use state::{BucketedDistribution, ExplicitDistribution, Permutation, StateIndex};
pub use suboptimal::ClusterPlan;
pub use work::WorkReport;
