//! Mixed-radix indexing for L-dimensional symbol tensors.
//!
//! Tensors over symbol tuples are stored flat in row-major order with the
//! oldest symbol as the slowest-varying axis: for digits
//! `(i_0, ..., i_{L-1})` (oldest first) the flat index is
//! `((i_0 * M + i_1) * M + ...) * M + i_{L-1}`.

use crate::{CoreError, Result};

/// `m_b^order`, rejecting sizes beyond the desk-scale cap of `2^20` entries.
pub fn tensor_len(m_b: usize, order: usize) -> Result<usize> {
    const CAP: usize = 1 << 20;
    let mut len: usize = 1;
    for _ in 0..order {
        len = len.checked_mul(m_b).unwrap_or(usize::MAX);
        if len > CAP {
            return Err(CoreError::InvalidArgument(format!(
                "tensor with m_b={m_b}, order={order} exceeds the 2^20-entry cap"
            )));
        }
    }
    Ok(len)
}

/// Flat index of a digit tuple (oldest symbol first).
pub fn flat_index(m_b: usize, digits: &[usize]) -> usize {
    let mut idx = 0;
    for &d in digits {
        debug_assert!(d < m_b);
        idx = idx * m_b + d;
    }
    idx
}

/// Decomposes a flat index into `order` digits, oldest symbol first.
pub fn digits_of(m_b: usize, order: usize, flat: usize) -> Vec<usize> {
    let mut digits = vec![0; order];
    let mut rest = flat;
    for slot in digits.iter_mut().rev() {
        *slot = rest % m_b;
        rest /= m_b;
    }
    digits
}

/// Iterates all digit tuples of the tensor in flat-index order without
/// re-deriving digits from scratch at every step.
pub fn for_each_tuple(m_b: usize, order: usize, mut f: impl FnMut(usize, &[usize])) {
    let len = {
        let mut l = 1usize;
        for _ in 0..order {
            l *= m_b;
        }
        l
    };
    let mut digits = vec![0usize; order];
    for flat in 0..len {
        f(flat, &digits);
        // odometer increment, fastest axis last
        for slot in (0..order).rev() {
            digits[slot] += 1;
            if digits[slot] < m_b {
                break;
            }
            digits[slot] = 0;
        }
    }
}
