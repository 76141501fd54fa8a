//! Joint PMFs over `L` consecutive symbols and the quantities the shaping
//! problem evaluates on them: transmit power, conditional entropy and the
//! stationarity residual.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::index;
use crate::{Constellation, CoreError, PrecodingFilter, Result};

/// Tolerance on `|sum - 1|` for a valid probability tensor.
pub const SUM_TOL: f64 = 1e-12;

/// An `L`-dimensional probability tensor `P(a_{m-L+1}, ..., a_m)` over
/// symbol tuples, stored flat in row-major order with the oldest symbol as
/// the slowest-varying axis.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    constellation: Constellation,
    order: usize,
    probs: Vec<f64>,
}

impl JointPmf {
    /// Validates and wraps a probability tensor of length `m_b^order`.
    pub fn new(constellation: Constellation, order: usize, probs: Vec<f64>) -> Result<Self> {
        if order == 0 {
            return Err(CoreError::InvalidArgument(
                "joint pmf order must be at least 1".into(),
            ));
        }
        let expect = index::tensor_len(constellation.m_b(), order)?;
        if probs.len() != expect {
            return Err(CoreError::InvalidArgument(format!(
                "probability tensor has {} entries, expected m_b^order = {}",
                probs.len(),
                expect
            )));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(CoreError::InvalidArgument(
                "probabilities must be finite and non-negative".into(),
            ));
        }
        let sum = kahan_sum(probs.iter().copied());
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(CoreError::InvalidArgument(format!(
                "probabilities sum to {sum}, expected 1 within {SUM_TOL:e}"
            )));
        }
        Ok(Self {
            constellation,
            order,
            probs,
        })
    }

    /// The uniform i.i.d. joint: every tuple has mass `m_b^-order`.
    pub fn uniform(constellation: Constellation, order: usize) -> Result<Self> {
        let len = index::tensor_len(constellation.m_b(), order)?;
        if order == 0 {
            return Err(CoreError::InvalidArgument(
                "joint pmf order must be at least 1".into(),
            ));
        }
        let p = 1.0 / len as f64;
        Ok(Self {
            constellation,
            order,
            probs: vec![p; len],
        })
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    /// Tuple length `L`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Mass of one tuple, digits ordered oldest symbol first.
    pub fn prob(&self, digits: &[usize]) -> f64 {
        self.probs[index::flat_index(self.constellation.m_b(), digits)]
    }

    /// Mean squared filter output `E |sum_k g_k a_{m-k}|^2` for symbols
    /// windowed by this joint PMF.
    pub fn transmit_power(&self, filter: &PrecodingFilter) -> Result<f64> {
        if filter.len() != self.order {
            return Err(CoreError::InvalidArgument(format!(
                "filter has {} taps but pmf order is {}",
                filter.len(),
                self.order
            )));
        }
        let energies = tuple_energies(&self.constellation, filter);
        Ok(kahan_sum(
            self.probs.iter().zip(&energies).map(|(p, e)| p * e),
        ))
    }

    /// Conditional entropy `H(a_m | a_{m-1}, ..., a_{m-L+1})` in bits/symbol,
    /// with the `0 log 0 = 0` convention. For `order == 1` this is the
    /// marginal entropy.
    pub fn conditional_entropy(&self) -> f64 {
        let m = self.constellation.m_b();
        // Blocks of the fastest axis share a prefix (a_{m-L+1}, ..., a_{m-1}).
        let h = kahan_sum(self.probs.chunks_exact(m).flat_map(|block| {
            let s: f64 = block.iter().sum();
            block.iter().filter_map(move |&p| {
                if p > 0.0 && s > 0.0 {
                    Some(-p * (p / s).log2())
                } else {
                    None
                }
            })
        }));
        h.max(0.0)
    }

    /// Max over `(L-1)`-tuples `s` of the difference between the leading
    /// marginal (sum over the oldest symbol) and the trailing marginal (sum
    /// over the newest). Zero for a stationary tensor.
    pub fn stationarity_residual(&self) -> f64 {
        let m = self.constellation.m_b();
        let n_states = self.probs.len() / m;
        let mut first = vec![0.0; n_states];
        let mut last = vec![0.0; n_states];
        for (flat, &p) in self.probs.iter().enumerate() {
            first[flat % n_states] += p;
            last[flat / m] += p;
        }
        first
            .iter()
            .zip(&last)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Compensated (Kahan) summation; keeps probability sums accurate enough
/// for the 1e-12 normalization tolerance even on 2^20-entry tensors.
pub fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// `|g^T A(t)|^2` for every tuple `t` in flat-index order: the linear
/// coefficients of the transmit-power objective.
pub fn tuple_energies(constellation: &Constellation, filter: &PrecodingFilter) -> Vec<f64> {
    let m = constellation.m_b();
    let order = filter.len();
    let pts = constellation.points();
    let len = {
        let mut l = 1usize;
        for _ in 0..order {
            l *= m;
        }
        l
    };
    let mut window = vec![0.0; order];
    let mut energies = Vec::with_capacity(len);
    index::for_each_tuple(m, order, |_, digits| {
        for (w, &d) in window.iter_mut().zip(digits) {
            *w = pts[d] as f64;
        }
        let y = filter.apply(&window);
        energies.push(y * y);
    });
    energies
}

#[derive(Serialize)]
#[serde(deny_unknown_fields)]
struct PmfReprRef<'a> {
    m_b: usize,
    order: usize,
    probs: &'a [f64],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PmfRepr {
    m_b: usize,
    order: usize,
    probs: Vec<f64>,
}

impl Serialize for JointPmf {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PmfReprRef {
            m_b: self.constellation.m_b(),
            order: self.order,
            probs: &self.probs,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for JointPmf {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PmfRepr::deserialize(deserializer)?;
        let constellation = Constellation::new(repr.m_b).map_err(D::Error::custom)?;
        JointPmf::new(constellation, repr.order, repr.probs).map_err(D::Error::custom)
    }
}
