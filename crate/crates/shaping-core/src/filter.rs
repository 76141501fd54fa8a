//! Transmit-side FIR pre-equalizers and the IIR channels they invert.

use crate::{CoreError, Result};

/// A monic IIR channel `H(z) = 1 / (denom[0] + denom[1] z^-1 + ...)`.
///
/// Only the denominator is stored; `denom[0]` must be exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSpec {
    denom: Vec<f64>,
}

impl ChannelSpec {
    pub fn new(denom: Vec<f64>) -> Result<Self> {
        if denom.is_empty() {
            return Err(CoreError::InvalidArgument(
                "channel denominator must have at least one coefficient".into(),
            ));
        }
        if denom[0] != 1.0 {
            return Err(CoreError::InvalidArgument(format!(
                "channel denominator must be monic, got leading coefficient {}",
                denom[0]
            )));
        }
        if denom.iter().any(|d| !d.is_finite()) {
            return Err(CoreError::InvalidArgument(
                "channel coefficients must be finite".into(),
            ));
        }
        Ok(Self { denom })
    }

    pub fn denom(&self) -> &[f64] {
        &self.denom
    }

    /// Number of denominator coefficients (the precoder length `L`).
    pub fn len(&self) -> usize {
        self.denom.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one coefficient
    }
}

/// An `L`-tap FIR precoding filter `[g0, g1, ..., g_{L-1}]`.
///
/// Taps are stored newest-first: for a symbol window
/// `(a_{m-L+1}, ..., a_m)` the filter output is
/// `sum_k g_k * a_{m-k}`, so `g0` multiplies the newest symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecodingFilter {
    taps: Vec<f64>,
}

impl PrecodingFilter {
    pub fn new(taps: Vec<f64>) -> Result<Self> {
        if taps.is_empty() {
            return Err(CoreError::InvalidArgument(
                "precoding filter needs at least one tap".into(),
            ));
        }
        if taps.iter().any(|t| !t.is_finite()) {
            return Err(CoreError::InvalidArgument(
                "filter taps must be finite".into(),
            ));
        }
        Ok(Self { taps })
    }

    /// The zero-forcing precoder `G(z) = 1/H(z)`: the channel denominator
    /// reinterpreted as FIR taps, `g_k = denom[k]`.
    pub fn from_channel(ch: &ChannelSpec) -> Self {
        Self {
            taps: ch.denom().to_vec(),
        }
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    /// Filter length `L`.
    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one tap
    }

    /// Filter output for one window of `L` symbols ordered oldest first,
    /// i.e. `window = [a_{m-L+1}, ..., a_m]` yields `sum_k g_k a_{m-k}`.
    pub fn apply(&self, window_oldest_first: &[f64]) -> f64 {
        debug_assert_eq!(window_oldest_first.len(), self.taps.len());
        let l = self.taps.len();
        let mut acc = 0.0;
        for (k, g) in self.taps.iter().enumerate() {
            acc += g * window_oldest_first[l - 1 - k];
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precoder_copies_denominator() {
        let ch = ChannelSpec::new(vec![1.0, 0.5]).unwrap();
        let g = PrecodingFilter::from_channel(&ch);
        assert_eq!(g.taps(), &[1.0, 0.5]);
    }

    #[test]
    fn identity_channel_keeps_length() {
        let ch = ChannelSpec::new(vec![1.0, 0.0, 0.0]).unwrap();
        let g = PrecodingFilter::from_channel(&ch);
        assert_eq!(g.taps(), &[1.0, 0.0, 0.0]);
        assert_eq!(g.len(), 3);
    }

    #[test]
    fn non_monic_rejected() {
        assert!(ChannelSpec::new(vec![2.0, 1.0]).is_err());
    }

    #[test]
    fn empty_and_nonfinite_rejected() {
        assert!(ChannelSpec::new(vec![]).is_err());
        assert!(PrecodingFilter::new(vec![]).is_err());
        assert!(PrecodingFilter::new(vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn apply_orders_taps_newest_first() {
        // window (a_{m-1}, a_m) = (2, 1) with g = [g0, g1] = [1, 0.5]
        // output = g0*a_m + g1*a_{m-1} = 1*1 + 0.5*2 = 2.
        let g = PrecodingFilter::new(vec![1.0, 0.5]).unwrap();
        assert_eq!(g.apply(&[2.0, 1.0]), 2.0);
    }
}
