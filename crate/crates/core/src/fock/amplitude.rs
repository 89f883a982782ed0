//! Transition amplitudes `<m| U |n>` of a linear optical network.

use num_complex::Complex64;

use crate::error::Result;
use crate::matrix::{ComplexMatrix, OccupationVector};
use crate::permanent::{permanent, Algorithm, ExactConfig};

/// Above this normalization the division is done in log-magnitude.
const LOG_NORM_THRESHOLD: f64 = 1e15;

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|i| f64::from(i).ln()).sum()
}

fn factorial(n: u32) -> f64 {
    (2..=n).map(f64::from).product()
}

/// `prod_k sqrt(n_k! m_k!)` as `(value, ln value)`.
fn normalization(n: &OccupationVector, m: &OccupationVector) -> (f64, f64) {
    let ln: f64 = 0.5
        * n.counts()
            .iter()
            .chain(m.counts())
            .map(|&c| ln_factorial(c))
            .sum::<f64>();
    let direct: f64 = n
        .counts()
        .iter()
        .chain(m.counts())
        .map(|&c| factorial(c))
        .product::<f64>()
        .sqrt();
    (direct, ln)
}

/// `Per([U]_{n,m}) / prod_k sqrt(n_k! m_k!)`.
pub fn transition_amplitude(
    u: &ComplexMatrix,
    n: &OccupationVector,
    m: &OccupationVector,
    algorithm: Algorithm,
    cfg: &ExactConfig,
) -> Result<Complex64> {
    let per = permanent(u, n, m, algorithm, cfg)?.value;
    Ok(normalize(per, n, m))
}

pub(crate) fn normalize(per: Complex64, n: &OccupationVector, m: &OccupationVector) -> Complex64 {
    let (direct, ln) = normalization(n, m);
    if direct.is_finite() && direct <= LOG_NORM_THRESHOLD {
        return per / direct;
    }
    if per == Complex64::new(0.0, 0.0) {
        return per;
    }
    Complex64::from_polar((per.norm().ln() - ln).exp(), per.arg())
}

/// `sum_m |<m|U|n>|^2` over every output vector with the input's total.
pub fn output_probability_total(
    u: &ComplexMatrix,
    n: &OccupationVector,
    algorithm: Algorithm,
) -> Result<f64> {
    let cfg = ExactConfig::default();
    let mut acc = 0.0;
    for m in OccupationVector::all_with_total(n.modes(), n.total() as u32) {
        acc += transition_amplitude(u, n, &m, algorithm, &cfg)?.norm_sqr();
    }
    Ok(acc)
}
