//! Ryser and Glynn formulas with Gray-code subset enumeration.
//!
//! Consecutive Gray codes differ in one bit, so the row sums are updated
//! with a single column per term instead of being rebuilt.

use std::time::Instant;

use num_complex::Complex64;

use super::{chunk_ranges, Algorithm, ExactConfig, PermanentResult, GRAY_MAX_DIM};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::summation::{combine_pairwise, PairwiseSum};

#[inline]
fn gray(k: u64) -> u64 {
    k ^ (k >> 1)
}

fn guard(a: &ComplexMatrix, algorithm: Algorithm) -> Result<()> {
    if a.dim() > GRAY_MAX_DIM {
        return Err(Error::Guard {
            algorithm: algorithm.name(),
            detail: format!("dimension {} exceeds {GRAY_MAX_DIM}", a.dim()),
        });
    }
    Ok(())
}

#[inline]
fn row_product(sums: &[Complex64]) -> Complex64 {
    sums.iter().fold(Complex64::new(1.0, 0.0), |p, &s| p * s)
}

pub fn permanent_ryser(a: &ComplexMatrix) -> Result<PermanentResult> {
    permanent_ryser_with(a, &ExactConfig::default())
}

/// `Per(A) = (-1)^N sum_{S != {}} (-1)^{|S|} prod_i sum_{j in S} A_ij`.
pub fn permanent_ryser_with(a: &ComplexMatrix, cfg: &ExactConfig) -> Result<PermanentResult> {
    guard(a, Algorithm::RyserGray)?;
    let start = Instant::now();
    let dim = a.dim();
    let total = (1u64 << dim) - 1;
    let ranges = chunk_ranges(total, cfg.chunk_count());
    let parts = cfg.map_chunks(ranges.len(), |c| {
        let (offset, len) = ranges[c];
        ryser_range(a, offset + 1, len)
    });
    let sum = combine_pairwise(&parts);
    let value = if dim.is_multiple_of(2) { sum } else { -sum };
    Ok(PermanentResult {
        value,
        algorithm: Algorithm::RyserGray,
        terms_evaluated: total,
        wall_time: start.elapsed(),
    })
}

// Subsets gray(first) .. gray(first + len - 1), first >= 1.
fn ryser_range(a: &ComplexMatrix, first: u64, len: u64) -> Complex64 {
    let dim = a.dim();
    let mut acc = PairwiseSum::new();
    if len == 0 {
        return acc.total();
    }
    let mut subset = gray(first);
    let mut sums = vec![Complex64::new(0.0, 0.0); dim];
    for (i, s) in sums.iter_mut().enumerate() {
        for (j, &x) in a.row(i).iter().enumerate() {
            if subset >> j & 1 == 1 {
                *s += x;
            }
        }
    }
    let mut k = first;
    loop {
        let p = row_product(&sums);
        acc.push(if subset.count_ones().is_multiple_of(2) {
            p
        } else {
            -p
        });
        if k + 1 == first + len {
            break;
        }
        k += 1;
        let col = k.trailing_zeros() as usize;
        subset ^= 1 << col;
        if subset >> col & 1 == 1 {
            for (i, s) in sums.iter_mut().enumerate() {
                *s += a.get(i, col);
            }
        } else {
            for (i, s) in sums.iter_mut().enumerate() {
                *s -= a.get(i, col);
            }
        }
    }
    acc.total()
}

pub fn permanent_glynn(a: &ComplexMatrix) -> Result<PermanentResult> {
    permanent_glynn_with(a, &ExactConfig::default())
}

/// `Per(A) = 2^{1-N} sum_{x in {+-1}^N, x_1 = 1} (prod x) prod_j sum_k A_jk x_k`.
pub fn permanent_glynn_with(a: &ComplexMatrix, cfg: &ExactConfig) -> Result<PermanentResult> {
    guard(a, Algorithm::Glynn)?;
    let start = Instant::now();
    let dim = a.dim();
    let total = 1u64 << (dim - 1);
    let ranges = chunk_ranges(total, cfg.chunk_count());
    let parts = cfg.map_chunks(ranges.len(), |c| {
        let (offset, len) = ranges[c];
        glynn_range(a, offset, len)
    });
    let scale = 0.5f64.powi(dim as i32 - 1);
    Ok(PermanentResult {
        value: combine_pairwise(&parts) * scale,
        algorithm: Algorithm::Glynn,
        terms_evaluated: total,
        wall_time: start.elapsed(),
    })
}

// Bit b of the Gray code set means x_{b+1} = -1; x_0 stays +1.
fn glynn_range(a: &ComplexMatrix, first: u64, len: u64) -> Complex64 {
    let dim = a.dim();
    let mut acc = PairwiseSum::new();
    if len == 0 {
        return acc.total();
    }
    let mut code = gray(first);
    let mut sums = vec![Complex64::new(0.0, 0.0); dim];
    for (i, s) in sums.iter_mut().enumerate() {
        for (j, &x) in a.row(i).iter().enumerate() {
            if j > 0 && code >> (j - 1) & 1 == 1 {
                *s -= x;
            } else {
                *s += x;
            }
        }
    }
    let mut k = first;
    loop {
        let p = row_product(&sums);
        acc.push(if code.count_ones().is_multiple_of(2) {
            p
        } else {
            -p
        });
        if k + 1 == first + len {
            break;
        }
        k += 1;
        let bit = k.trailing_zeros() as usize;
        code ^= 1 << bit;
        let col = bit + 1;
        let twice = if code >> bit & 1 == 1 { -2.0 } else { 2.0 };
        for (i, s) in sums.iter_mut().enumerate() {
            *s += a.get(i, col) * twice;
        }
    }
    acc.total()
}
