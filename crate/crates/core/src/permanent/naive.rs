use std::time::Instant;

use num_complex::Complex64;

use super::{Algorithm, PermanentResult, NAIVE_MAX_DIM};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::summation::PairwiseSum;

/// Sum over all `N!` permutations. Ground truth for the other algorithms.
pub fn permanent_naive(a: &ComplexMatrix) -> Result<PermanentResult> {
    let dim = a.dim();
    if dim > NAIVE_MAX_DIM {
        return Err(Error::Guard {
            algorithm: Algorithm::Naive.name(),
            detail: format!("dimension {dim} exceeds {NAIVE_MAX_DIM}"),
        });
    }
    let start = Instant::now();
    let mut acc = PairwiseSum::new();
    expand(a, 0, 0, Complex64::new(1.0, 0.0), &mut acc);
    Ok(PermanentResult {
        value: acc.total(),
        algorithm: Algorithm::Naive,
        terms_evaluated: acc.len(),
        wall_time: start.elapsed(),
    })
}

// Depth-first over rows; `used` marks the columns already taken.
fn expand(a: &ComplexMatrix, row: usize, used: u32, prefix: Complex64, acc: &mut PairwiseSum) {
    let dim = a.dim();
    if row == dim {
        acc.push(prefix);
        return;
    }
    let entries = a.row(row);
    for (col, &entry) in entries.iter().enumerate() {
        if used & (1 << col) == 0 {
            expand(a, row + 1, used | (1 << col), prefix * entry, acc);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_ones() {
        let r = permanent_naive(&ComplexMatrix::identity(3).unwrap()).unwrap();
        assert_eq!(r.value, Complex64::new(1.0, 0.0));
        assert_eq!(r.terms_evaluated, 6);
        let r = permanent_naive(&ComplexMatrix::ones(5).unwrap()).unwrap();
        assert_eq!(r.value, Complex64::new(120.0, 0.0));
        assert_eq!(r.terms_evaluated, 120);
    }

    #[test]
    fn two_by_two_closed_form() {
        let z = |re, im| Complex64::new(re, im);
        let a =
            ComplexMatrix::from_row_major(2, vec![z(1., 2.), z(0., -1.), z(3., 0.), z(0.5, 0.5)])
                .unwrap();
        let expect = z(1., 2.) * z(0.5, 0.5) + z(0., -1.) * z(3., 0.);
        assert_eq!(permanent_naive(&a).unwrap().value, expect);
    }

    #[test]
    fn guard() {
        let a = ComplexMatrix::identity(12).unwrap();
        assert!(matches!(permanent_naive(&a), Err(Error::Guard { .. })));
    }
}
