//! Ground-state solvers for the quantum Rabi model (the Jaynes-Cummings
//! Hamiltonian without the rotating-wave approximation) in the
//! ultrastrong-coupling regime.
//!
//! Three routes to the ground state are implemented and cross-validated:
//!
//! * [`exact`] — dense diagonalization of the truncated Hamiltonian
//!   ("numerical simulation", NS), the reference everything else is
//!   compared against;
//! * [`gvm`] — a generalized variational method: a displaced-oscillator
//!   trial state whose displacement is fixed by energy minimization,
//!   refined by second-order perturbation theory in the residual
//!   couplings;
//! * [`grwa`] — the generalized rotating-wave approximation closed forms,
//!   kept as the comparison baseline.
//!
//! [`harness`] runs parameter sweeps over the detuning and coupling axes
//! and emits CSV/JSON comparison tables; [`checks`] bundles the
//! self-consistency invariants behind a single entry point.

pub mod checks;
pub mod exact;
pub mod grwa;
pub mod gvm;
pub mod harness;
pub mod matrix;
pub mod model;
pub mod specfun;

pub use exact::SpectralResult;
pub use grwa::GrwaResult;
pub use gvm::GvmSolution;
pub use harness::{ComparisonRow, SweepSpec};
pub use matrix::SymMatrix;
pub use model::{BasisIndex, ModelParams, Spin, TruncationConfig};

use thiserror::Error;

/// Errors surfaced by solver and harness entry points.
#[derive(Debug, Error)]
pub enum RabiError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("eigensolver did not converge: off-diagonal norm {off_norm:e} after {sweeps} sweeps")]
    NoConvergence { off_norm: f64, sweeps: usize },
    #[error("unknown figure id: {0}")]
    UnknownFigure(String),
    #[error("nothing to emit: empty row set")]
    EmptyRows,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, RabiError>;
