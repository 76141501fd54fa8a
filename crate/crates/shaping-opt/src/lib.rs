//! Solvers for the power-minimizing stationary joint symbol distribution
//! under a rate constraint.
//!
//! The problem: over joint PMFs `P` on `L` consecutive `M`-ASK symbols,
//! minimize the mean squared precoder output (a linear functional of `P`)
//! subject to a conditional-entropy rate constraint `H(a_m | state) >= R`,
//! stationarity of the induced Markov chain, normalization and
//! non-negativity. The objective and all constraints except the entropy
//! bound are affine and conditional entropy is concave in `P`, so this is a
//! convex program; [`solve_markov_shaping`] follows the central path of a
//! primal log-barrier method with equality-constrained Newton steps.
//!
//! Two independent references validate the solver: with a single-tap filter
//! the optimum collapses to the Maxwell-Boltzmann marginal
//! ([`solve_maxwell_boltzmann`]), and for binary alphabets with two taps an
//! exhaustive scan of the stationary simplex ([`grid_oracle`]) provides
//! ground truth.

mod barrier;
mod divergence;
mod mb;
mod oracle;
mod problem;

pub use barrier::solve_markov_shaping;
pub use divergence::kl_divergence;
pub use mb::{solve_maxwell_boltzmann, MBDistribution};
pub use oracle::grid_oracle;
pub use problem::{ShapingProblem, ShapingSolution, Tolerances};

use shaping_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OptError {
    #[error("rate {rate} bits/symbol is infeasible: must lie in ({min}, {max}]")]
    InfeasibleRate { rate: f64, min: f64, max: f64 },
    #[error(
        "solver did not converge: kkt residual {:.3e} after {} Newton steps",
        best.kkt_residual,
        best.iterations
    )]
    NoConvergence {
        /// Best iterate found before the iteration budget ran out.
        best: Box<ShapingSolution>,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

pub type Result<T> = std::result::Result<T, OptError>;
