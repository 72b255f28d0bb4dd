//! Opinion dynamics over signed graphs.
//!
//! Agents hold real beliefs and interact pairwise through randomly selected
//! edges: positive edges pull beliefs together, negative edges push them
//! apart. The crate covers simulation, mean and mean-square threshold
//! analysis, structural balance, finite-time consensus schedules and a
//! seeded Monte Carlo harness.

pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod hypercube;
pub mod numerics;
pub mod selection;
pub mod spectral;

pub use dynamics::{simulate, Asymmetry, Rule, SimulationOptions, StopReason, StopRule, TrajectoryStats, UpdateParams};
pub use error::{Error, Result};
pub use graph::{balance_verdict, BalanceVerdict, Sign, SignedGraph};
pub use selection::{make_selection, RngStream, SelectionKind, SelectionModel};
pub use spectral::{AnalysisReport, SpectralModel, Verdict};
