//! The single-tap special case: with no memory in the precoder the optimal
//! marginal is the Maxwell-Boltzmann distribution `P(a) = K(lambda) e^{-lambda a^2}`,
//! found here by bisection on `lambda` against the target entropy.

use shaping_core::Constellation;

use crate::{OptError, Result};

/// A Maxwell-Boltzmann marginal over an ASK constellation.
#[derive(Debug, Clone, PartialEq)]
pub struct MBDistribution {
    lambda: f64,
    probs: Vec<f64>,
    normalizer: f64,
}

impl MBDistribution {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Point probabilities aligned with `Constellation::points()`.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// The normalization factor `K(lambda) = 1 / sum_a e^{-lambda a^2}`.
    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    /// Marginal entropy in bits/symbol.
    pub fn entropy_bits(&self) -> f64 {
        entropy_bits(&self.probs)
    }

    /// Mean symbol energy `E[a^2]`.
    pub fn power(&self, constellation: &Constellation) -> f64 {
        self.probs
            .iter()
            .zip(constellation.points())
            .map(|(p, a)| p * (*a as f64) * (*a as f64))
            .sum()
    }
}

fn entropy_bits(probs: &[f64]) -> f64 {
    -probs
        .iter()
        .filter(|p| **p > 0.0)
        .map(|p| p * p.log2())
        .sum::<f64>()
}

fn mb_at(constellation: &Constellation, lambda: f64) -> MBDistribution {
    let weights: Vec<f64> = constellation
        .points()
        .iter()
        .map(|a| (-lambda * (*a as f64) * (*a as f64)).exp())
        .collect();
    let sum: f64 = weights.iter().sum();
    let normalizer = 1.0 / sum;
    let probs = weights.iter().map(|w| w * normalizer).collect();
    MBDistribution {
        lambda,
        probs,
        normalizer,
    }
}

/// Finds the Maxwell-Boltzmann marginal whose entropy equals `rate`
/// bits/symbol, within 1e-9.
///
/// Feasible rates are `(1, log2(m_b)]`: as `lambda` grows the distribution
/// concentrates on the two innermost points, so the entropy cannot drop to
/// 1 bit for any finite `lambda`.
pub fn solve_maxwell_boltzmann(constellation: &Constellation, rate: f64) -> Result<MBDistribution> {
    let max = constellation.max_entropy_bits();
    if !rate.is_finite() || rate <= 1.0 || rate > max + 1e-12 {
        return Err(OptError::InfeasibleRate {
            rate,
            min: 1.0,
            max,
        });
    }
    if rate >= max - 1e-12 {
        return Ok(mb_at(constellation, 0.0));
    }

    // Entropy is strictly decreasing in lambda; bracket then bisect.
    let mut hi = 1.0;
    while mb_at(constellation, hi).entropy_bits() >= rate {
        hi *= 2.0;
        if hi > 1e9 {
            return Err(OptError::InvalidArgument(format!(
                "failed to bracket lambda for rate {rate}"
            )));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval exhausted in f64
        }
        let h = mb_at(constellation, mid).entropy_bits();
        if h >= rate {
            lo = mid;
        } else {
            hi = mid;
        }
        if (h - rate).abs() <= 1e-12 {
            break;
        }
    }
    let dist = mb_at(constellation, 0.5 * (lo + hi));
    debug_assert!((dist.entropy_bits() - rate).abs() <= 1e-9);
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(m: usize) -> Constellation {
        Constellation::new(m).unwrap()
    }

    #[test]
    fn max_rate_gives_uniform() {
        let d = solve_maxwell_boltzmann(&c(4), 2.0).unwrap();
        assert_eq!(d.lambda(), 0.0);
        for p in d.probs() {
            assert!((p - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn rate_below_one_bit_is_infeasible() {
        assert!(matches!(
            solve_maxwell_boltzmann(&c(4), 0.5),
            Err(OptError::InfeasibleRate { .. })
        ));
        assert!(matches!(
            solve_maxwell_boltzmann(&c(4), 1.0),
            Err(OptError::InfeasibleRate { .. })
        ));
        assert!(matches!(
            solve_maxwell_boltzmann(&c(4), 2.5),
            Err(OptError::InfeasibleRate { .. })
        ));
    }

    #[test]
    fn bisection_hits_target_entropy() {
        let d = solve_maxwell_boltzmann(&c(4), 1.5).unwrap();
        assert!((d.entropy_bits() - 1.5).abs() <= 1e-9);
        assert!(d.lambda() > 0.0);
        // exponential family form: p(a) = K e^{-lambda a^2}
        for (p, a) in d.probs().iter().zip(c(4).points()) {
            let expect = d.normalizer() * (-d.lambda() * (*a as f64).powi(2)).exp();
            assert!((p - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn probs_are_symmetric_and_normalized() {
        for rate in [1.2, 2.0, 2.9] {
            let d = solve_maxwell_boltzmann(&c(8), rate).unwrap();
            let probs = d.probs();
            let sum: f64 = probs.iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
            for i in 0..probs.len() {
                assert!((probs[i] - probs[probs.len() - 1 - i]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn shaping_reduces_power_below_uniform() {
        let d = solve_maxwell_boltzmann(&c(8), 2.0).unwrap();
        assert!(d.power(&c(8)) < 21.0);
    }
}
