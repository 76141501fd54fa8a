//! Core domain types for joint symbol shaping over pre-equalized channels.
//!
//! An `M`-ASK transmit chain with an FIR pre-equalizer `g` sees the power of
//! the filtered symbol stream, not of the raw symbols. When consecutive
//! symbols are drawn from a stationary Markov source described by a joint
//! PMF over `L` consecutive symbols, both the transmit power and the
//! information rate (conditional entropy) are explicit functions of that
//! joint PMF. This crate holds the types and those evaluable quantities:
//!
//! - [`Constellation`]: the odd-integer ASK alphabet,
//! - [`PrecodingFilter`] / [`ChannelSpec`]: FIR taps and the monic IIR
//!   channel they invert,
//! - [`JointPmf`]: the L-dimensional probability tensor over symbol tuples,
//!   with transmit power, conditional entropy and stationarity residual,
//! - [`MarkovShapingModel`]: the stationary state distribution and
//!   per-state transition rows derived from a stationary joint PMF.
//!
//! All types are immutable after construction and all operations are pure.

pub mod constellation;
pub mod filter;
pub mod index;
pub mod markov;
pub mod pmf;

pub use constellation::Constellation;
pub use filter::{ChannelSpec, PrecodingFilter};
pub use markov::MarkovShapingModel;
pub use pmf::JointPmf;

use thiserror::Error;

/// Errors from constructing or combining core domain types.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("joint pmf is not stationary: residual {residual:.3e} exceeds {tol:.3e}")]
    NotStationary { residual: f64, tol: f64 },
}

pub type Result<T> = std::result::Result<T, CoreError>;
