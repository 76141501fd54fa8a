//! ASK alphabets of symmetric odd integers.

use crate::{CoreError, Result};

/// Largest supported alphabet; symbol indices must fit in a byte on the wire.
pub const MAX_ALPHABET: usize = 64;

/// An `M`-ASK constellation `{-(M-1), ..., -3, -1, +1, +3, ..., +(M-1)}`.
///
/// Points are strictly increasing odd integers, symmetric about zero, so the
/// minimum distance is 2 regardless of the alphabet size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constellation {
    m_b: usize,
    points: Vec<i32>,
}

impl Constellation {
    /// Builds the symmetric odd-integer alphabet of size `m_b`.
    ///
    /// `m_b` must be even and in `2..=64`.
    pub fn new(m_b: usize) -> Result<Self> {
        if m_b < 2 || m_b > MAX_ALPHABET || m_b % 2 != 0 {
            return Err(CoreError::InvalidArgument(format!(
                "alphabet size must be even and in 2..={MAX_ALPHABET}, got {m_b}"
            )));
        }
        let half = (m_b / 2) as i32;
        let points = (-half..half).map(|k| 2 * k + 1).collect();
        Ok(Self { m_b, points })
    }

    pub fn m_b(&self) -> usize {
        self.m_b
    }

    pub fn points(&self) -> &[i32] {
        &self.points
    }

    /// Point value for a symbol index in `0..m_b`.
    pub fn point(&self, index: usize) -> i32 {
        self.points[index]
    }

    /// `log2(m_b)`, the entropy of the uniform alphabet in bits/symbol.
    pub fn max_entropy_bits(&self) -> f64 {
        (self.m_b as f64).log2()
    }
}
