//! Entropic Bell inequalities for noisy two-qutrit states.
//!
//! The quadrangle inequality d(A,B′) ≤ d(A,B) + d(B,A′) + d(A′,B′) is
//! evaluated with Shannon- and Tsallis-entropy distances on the state
//! V|ψ⟩⟨ψ|_β + (1 − V)·I/9, where local measurements are parametrized by
//! Reck beam-splitter networks. The [`search`] module minimizes the
//! violation over measurement angles and locates critical visibilities.

pub mod cli;
pub mod entropy;
pub mod inequality;
pub mod linalg;
pub mod quantum;
pub mod search;

pub use entropy::{DistanceKind, EntropyKind};
pub use inequality::{evaluate_quadrangle, QuadrangleReport, QuadrangleSettings};
pub use linalg::{ComplexMatrix, PhaseSettings};
pub use quantum::{make_state, JointDistribution, NoisyStateParams};
pub use search::{critical_visibility, minimize_violation, OptimizationResult, OptimizerConfig};
