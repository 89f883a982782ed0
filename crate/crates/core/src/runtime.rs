//! Term-count runtime model for the expansion algorithms.
//!
//! Expanding over the input side costs `prod_i (n_i + 1)` outer terms, each
//! touching `alpha_n * alpha_m` matrix entries; expanding over the output side
//! costs `prod_j (m_j + 1)` terms. Since `prod (n_i + 1) = 2^N C_S(n)`, the
//! cheaper side is also the one with the smaller concurrence sum.

use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::concurrence_sum;
use crate::matrix::{ComplexMatrix, OccupationVector};
use crate::permanent::{
    kan_with_stats, permanent, Algorithm, ExactConfig, ExpansionStats, PermanentResult,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionSide {
    ExpandN,
    ExpandM,
}

impl fmt::Display for ExpansionSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExpansionSide::ExpandN => "expand_n",
            ExpansionSide::ExpandM => "expand_m",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuntimeEstimate {
    /// `prod (n_i + 1) * alpha_n * alpha_m`.
    pub t_forward: u128,
    /// `prod (m_j + 1) * alpha_n * alpha_m`.
    pub t_backward: u128,
    pub t_min: u128,
    /// `2^N * min(C_S(n), C_S(m)) * alpha_n * alpha_m`.
    pub concurrence_form: f64,
    pub side: ExpansionSide,
}

fn check_totals(n: &OccupationVector, m: &OccupationVector) -> Result<()> {
    if n.total() != m.total() {
        return Err(Error::TotalMismatch {
            input: n.total(),
            output: m.total(),
        });
    }
    Ok(())
}

/// The side with fewer outer terms; ties go to the input side.
pub fn choose_expansion_side(n: &OccupationVector, m: &OccupationVector) -> ExpansionSide {
    if m.product_plus_one() < n.product_plus_one() {
        ExpansionSide::ExpandM
    } else {
        ExpansionSide::ExpandN
    }
}

pub fn runtime_estimate(n: &OccupationVector, m: &OccupationVector) -> Result<RuntimeEstimate> {
    check_totals(n, m)?;
    let work = (n.coherence_rank() * m.coherence_rank()) as u128;
    let t_forward = n.product_plus_one().saturating_mul(work);
    let t_backward = m.product_plus_one().saturating_mul(work);
    let total = n.total() as i32;
    let cs = concurrence_sum(n).min(concurrence_sum(m));
    Ok(RuntimeEstimate {
        t_forward,
        t_backward,
        t_min: t_forward.min(t_backward),
        concurrence_form: 2f64.powi(total) * cs * work as f64,
        side: choose_expansion_side(n, m),
    })
}

/// Runs an expansion algorithm on the cheaper side: `(A, n, m)` or
/// `(A^T, m, n)`. Matrix algorithms run unchanged and report `ExpandN`.
pub fn permanent_on_chosen_side(
    a: &ComplexMatrix,
    n: &OccupationVector,
    m: &OccupationVector,
    algorithm: Algorithm,
    cfg: &ExactConfig,
) -> Result<(PermanentResult, ExpansionSide)> {
    check_totals(n, m)?;
    let side = choose_expansion_side(n, m);
    if algorithm.is_expansion() && side == ExpansionSide::ExpandM {
        Ok((permanent(&a.transpose(), m, n, algorithm, cfg)?, side))
    } else {
        Ok((permanent(a, n, m, algorithm, cfg)?, ExpansionSide::ExpandN))
    }
}

/// Kan expansion on the chosen side with its operation counts.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasuredWork {
    pub value: Complex64,
    pub side: ExpansionSide,
    pub stats: ExpansionStats,
    pub wall_ns: u64,
}

pub fn measure_kan(
    a: &ComplexMatrix,
    n: &OccupationVector,
    m: &OccupationVector,
    cfg: &ExactConfig,
) -> Result<MeasuredWork> {
    check_totals(n, m)?;
    let side = choose_expansion_side(n, m);
    let start = Instant::now();
    let (value, stats) = match side {
        ExpansionSide::ExpandN => kan_with_stats(a, n, m, cfg)?,
        ExpansionSide::ExpandM => kan_with_stats(&a.transpose(), m, n, cfg)?,
    };
    let wall_ns = u64::try_from(start.elapsed().as_nanos()).unwrap_or(u64::MAX);
    Ok(MeasuredWork {
        value,
        side,
        stats,
        wall_ns,
    })
}

/// Ranks starting at 1, ties sharing their average rank.
fn ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut r = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation: Pearson correlation of the average ranks.
pub fn spearman_rho(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Invalid(
            "rank correlation needs two equal-length samples of size >= 2".into(),
        ));
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let mean = (x.len() as f64 + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mean) * (b - mean);
        sxx += (a - mean) * (a - mean);
        syy += (b - mean) * (b - mean);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Invalid(
            "rank correlation of a constant sample".into(),
        ));
    }
    Ok(sxy / (sxx * syy).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::haar_random_unitary;
    use crate::permanent::agrees;

    fn occ(v: &[u32]) -> OccupationVector {
        OccupationVector::new(v.to_vec())
    }

    #[test]
    fn uniform_input_matches_ryser_count() {
        for n in 1..=10usize {
            let ones = OccupationVector::ones(n);
            let r = runtime_estimate(&ones, &ones).unwrap();
            assert_eq!(r.t_min, (1u128 << n) * (n * n) as u128);
            assert_eq!(r.side, ExpansionSide::ExpandN);
        }
    }

    #[test]
    fn bunched_input_is_polynomial() {
        let n = occ(&[5, 0, 0, 0, 0]);
        let m = occ(&[1, 2, 0, 1, 1]);
        let r = runtime_estimate(&n, &m).unwrap();
        assert_eq!(r.t_min, 6 * 4);
        assert!(r.t_min <= 6 * 5);
    }

    #[test]
    fn worked_example() {
        let (n, m) = (occ(&[2, 1, 0]), occ(&[1, 1, 1]));
        let r = runtime_estimate(&n, &m).unwrap();
        assert_eq!((r.t_forward, r.t_backward, r.t_min), (36, 48, 36));
        assert_eq!(r.concurrence_form, 36.0);
        let swapped = runtime_estimate(&m, &n).unwrap();
        assert_eq!(swapped.t_min, r.t_min);
        let u = haar_random_unitary(3, 1).unwrap();
        let w = measure_kan(&u, &n, &m, &ExactConfig::default()).unwrap();
        assert_eq!(u128::from(w.stats.terms) * 6, r.t_forward);
    }

    #[test]
    fn side_choice() {
        assert_eq!(
            choose_expansion_side(&occ(&[3, 0]), &occ(&[1, 2])),
            ExpansionSide::ExpandN
        );
        assert_eq!(
            choose_expansion_side(&occ(&[2, 1]), &occ(&[2, 1])),
            ExpansionSide::ExpandN
        );
        assert_eq!(
            choose_expansion_side(&occ(&[1, 1, 1, 1]), &occ(&[4, 0, 0, 0])),
            ExpansionSide::ExpandM
        );
        assert!(runtime_estimate(&occ(&[1, 1]), &occ(&[1, 0])).is_err());
    }

    #[test]
    fn chosen_side_value_and_terms() {
        let u = haar_random_unitary(4, 8).unwrap();
        let (n, m) = (occ(&[1, 1, 1, 1]), occ(&[4, 0, 0, 0]));
        let cfg = ExactConfig::default();
        let (direct, _) = permanent_on_chosen_side(&u, &n, &m, Algorithm::Naive, &cfg).unwrap();
        let (kan, side) =
            permanent_on_chosen_side(&u, &n, &m, Algorithm::KanGeneralized, &cfg).unwrap();
        assert_eq!(side, ExpansionSide::ExpandM);
        assert_eq!(kan.terms_evaluated, 5);
        assert!(agrees(kan.value, direct.value, 1e-12, 1e-14));
        let w = measure_kan(&u, &n, &m, &cfg).unwrap();
        assert_eq!(w.value, kan.value);
        assert_eq!(w.stats.terms, 5);
    }

    #[test]
    fn spearman_basics() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert!((spearman_rho(&x, &[10.0, 20.0, 30.0, 40.0, 50.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((spearman_rho(&x, &[5.0, 4.0, 3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-15);
        // ranks with ties: x -> (1.5, 1.5, 3), y -> (1, 2, 3); rho = 0.866...
        let rho = spearman_rho(&[1.0, 1.0, 2.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!((rho - 0.75f64.sqrt()).abs() < 1e-15);
        assert!(spearman_rho(&[1.0], &[1.0]).is_err());
        assert!(spearman_rho(&[1.0, 1.0], &[1.0, 2.0]).is_err());
    }
}
