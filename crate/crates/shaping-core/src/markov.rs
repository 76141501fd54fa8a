//! Stationary Markov shaping models: the state distribution over
//! `(L-1)`-tuples and per-state transition rows derived from a stationary
//! joint PMF.

use crate::index;
use crate::{Constellation, CoreError, JointPmf, Result};

/// States with less mass than this are marked unreachable; below solver
/// feasibility tolerance, and it avoids 0/0 when forming conditionals.
pub const STATE_EPS: f64 = 1e-12;

/// A joint PMF must be stationary to at least this residual before it can
/// be decomposed into a Markov model.
pub const STATIONARITY_TOL: f64 = 1e-8;

/// Tolerance on row sums of the state and transition distributions.
pub const ROW_SUM_TOL: f64 = 1e-12;

/// A Markov symbol source of order `L-1`: a stationary distribution over
/// `(L-1)`-symbol states plus one transition row per state. Rows of
/// unreachable states (mass below [`STATE_EPS`]) are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovShapingModel {
    constellation: Constellation,
    context_order: usize,
    state_dist: Vec<f64>,
    transitions: Vec<Option<Vec<f64>>>,
}

impl MarkovShapingModel {
    /// Validates a hand-built model. `state_dist` must sum to 1, every
    /// reachable state needs a row, and every row must sum to 1.
    pub fn new(
        constellation: Constellation,
        context_order: usize,
        state_dist: Vec<f64>,
        transitions: Vec<Option<Vec<f64>>>,
    ) -> Result<Self> {
        let n_states = index::tensor_len(constellation.m_b(), context_order)?;
        let m = constellation.m_b();
        if state_dist.len() != n_states || transitions.len() != n_states {
            return Err(CoreError::InvalidArgument(format!(
                "expected {n_states} states, got {} state probabilities and {} rows",
                state_dist.len(),
                transitions.len()
            )));
        }
        if state_dist.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(CoreError::InvalidArgument(
                "state distribution must be finite and non-negative".into(),
            ));
        }
        let total: f64 = crate::pmf::kahan_sum(state_dist.iter().copied());
        if (total - 1.0).abs() > ROW_SUM_TOL {
            return Err(CoreError::InvalidArgument(format!(
                "state distribution sums to {total}, expected 1"
            )));
        }
        for (s, row) in transitions.iter().enumerate() {
            match row {
                Some(r) => {
                    if r.len() != m {
                        return Err(CoreError::InvalidArgument(format!(
                            "transition row for state {s} has {} entries, expected {m}",
                            r.len()
                        )));
                    }
                    if r.iter().any(|p| !p.is_finite() || *p < 0.0) {
                        return Err(CoreError::InvalidArgument(format!(
                            "transition row for state {s} has invalid entries"
                        )));
                    }
                    let sum: f64 = r.iter().sum();
                    if (sum - 1.0).abs() > ROW_SUM_TOL {
                        return Err(CoreError::InvalidArgument(format!(
                            "transition row for state {s} sums to {sum}, expected 1"
                        )));
                    }
                }
                None => {
                    if state_dist[s] > STATE_EPS {
                        return Err(CoreError::InvalidArgument(format!(
                            "state {s} has mass {} but no transition row",
                            state_dist[s]
                        )));
                    }
                }
            }
        }
        Ok(Self {
            constellation,
            context_order,
            state_dist,
            transitions,
        })
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    /// Markov order `L-1` (the number of symbols in a state).
    pub fn context_order(&self) -> usize {
        self.context_order
    }

    /// Joint-PMF order `L` of the source this model describes.
    pub fn joint_order(&self) -> usize {
        self.context_order + 1
    }

    pub fn n_states(&self) -> usize {
        self.state_dist.len()
    }

    pub fn state_dist(&self) -> &[f64] {
        &self.state_dist
    }

    /// Transition row of a state, `None` if the state is unreachable.
    pub fn transition_row(&self, state: usize) -> Option<&[f64]> {
        self.transitions[state].as_deref()
    }

    /// State reached from `state` after emitting `symbol`: drop the oldest
    /// symbol, append the new one.
    pub fn next_state(&self, state: usize, symbol: usize) -> usize {
        if self.context_order == 0 {
            return 0;
        }
        let base = self.state_dist.len() / self.constellation.m_b();
        (state % base) * self.constellation.m_b() + symbol
    }

    /// Recomposes the joint PMF `P(s, a) = pi(s) * P(a | s)`; unreachable
    /// states contribute zero mass.
    pub fn to_joint(&self) -> Result<JointPmf> {
        let m = self.constellation.m_b();
        let mut probs = vec![0.0; self.state_dist.len() * m];
        for (s, row) in self.transitions.iter().enumerate() {
            if let Some(r) = row {
                for (a, p) in r.iter().enumerate() {
                    probs[s * m + a] = self.state_dist[s] * p;
                }
            }
        }
        JointPmf::new(
            self.constellation.clone(),
            self.context_order + 1,
            probs,
        )
    }
}

impl JointPmf {
    /// Decomposes a stationary joint PMF into state distribution and
    /// transition rows. Fails if the stationarity residual exceeds
    /// [`STATIONARITY_TOL`].
    pub fn to_markov(&self) -> Result<MarkovShapingModel> {
        let residual = self.stationarity_residual();
        if residual > STATIONARITY_TOL {
            return Err(CoreError::NotStationary {
                residual,
                tol: STATIONARITY_TOL,
            });
        }
        let m = self.constellation().m_b();
        let probs = self.probs();
        let n_states = probs.len() / m;
        let mut state_dist = Vec::with_capacity(n_states);
        let mut transitions = Vec::with_capacity(n_states);
        for block in probs.chunks_exact(m) {
            let mass: f64 = block.iter().sum();
            if mass > STATE_EPS {
                transitions.push(Some(block.iter().map(|p| p / mass).collect()));
            } else {
                transitions.push(None);
            }
            state_dist.push(mass);
        }
        // Trailing marginals of a stationary tensor sum to 1 up to fp error;
        // rescale so the constructor's exact checks hold.
        let total: f64 = crate::pmf::kahan_sum(state_dist.iter().copied());
        for p in &mut state_dist {
            *p /= total;
        }
        MarkovShapingModel::new(
            self.constellation().clone(),
            self.order() - 1,
            state_dist,
            transitions,
        )
    }
}
