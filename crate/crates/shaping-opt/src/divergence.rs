//! Informational (Kullback-Leibler) divergence in bits.

use crate::{OptError, Result};

/// `D(p || q) = sum p log2(p/q)` with the `0 log 0 = 0` convention.
///
/// Fails unless `p` and `q` have the same length and `p` is absolutely
/// continuous with respect to `q` (`q[i] = 0` implies `p[i] = 0`).
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(OptError::InvalidArgument(format!(
            "distributions have different lengths: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    let mut div = 0.0;
    for (i, (&pi, &qi)) in p.iter().zip(q).enumerate() {
        if !(pi >= 0.0) || !(qi >= 0.0) || !pi.is_finite() || !qi.is_finite() {
            return Err(OptError::InvalidArgument(format!(
                "entries must be finite and non-negative, got p[{i}]={pi}, q[{i}]={qi}"
            )));
        }
        if pi > 0.0 {
            if qi == 0.0 {
                return Err(OptError::InvalidArgument(format!(
                    "absolute continuity violated at index {i}: p={pi} but q=0"
                )));
            }
            div += pi * (pi / qi).log2();
        }
    }
    Ok(div)
}
