//! Problem and solution containers for the Markov shaping program.

use serde::{Deserialize, Serialize};
use shaping_core::{Constellation, JointPmf, PrecodingFilter};

use crate::{OptError, Result};

/// Solver tolerances and iteration budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Feasibility tolerance for the returned solution (stationarity,
    /// normalization).
    pub feas_tol: f64,
    /// Target bound on the certified suboptimality (duality gap).
    pub gap_tol: f64,
    /// Total Newton-step budget across all barrier stages.
    pub max_iter: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            feas_tol: 1e-8,
            gap_tol: 1e-8,
            max_iter: 200,
        }
    }
}

/// One instance of the shaping program: alphabet, precoder and rate target.
#[derive(Debug, Clone)]
pub struct ShapingProblem {
    constellation: Constellation,
    filter: PrecodingFilter,
    rate: f64,
    tolerances: Tolerances,
}

impl ShapingProblem {
    /// Builds a problem, rejecting rates outside `(0, log2(m_b)]`.
    pub fn new(constellation: Constellation, filter: PrecodingFilter, rate: f64) -> Result<Self> {
        let max = constellation.max_entropy_bits();
        if !rate.is_finite() || rate <= 0.0 {
            return Err(OptError::InvalidArgument(format!(
                "rate must be a positive number of bits/symbol, got {rate}"
            )));
        }
        if rate > max + 1e-12 {
            return Err(OptError::InfeasibleRate {
                rate,
                min: 0.0,
                max,
            });
        }
        Ok(Self {
            constellation,
            filter,
            rate,
            tolerances: Tolerances::default(),
        })
    }

    pub fn with_tolerances(mut self, tolerances: Tolerances) -> Self {
        self.tolerances = tolerances;
        self
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    pub fn filter(&self) -> &PrecodingFilter {
        &self.filter
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tolerances
    }
}

/// A solved instance: the optimal joint PMF plus its certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapingSolution {
    pub pmf: JointPmf,
    /// Mean squared precoder output at the solution.
    pub power: f64,
    /// Conditional entropy of the solution in bits/symbol.
    pub entropy: f64,
    /// Certified suboptimality bound at termination.
    pub kkt_residual: f64,
    /// Newton steps spent (for the grid oracle: grid points evaluated).
    pub iterations: usize,
}
