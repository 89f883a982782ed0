//! Coherence rank, elementary symmetric polynomials and the concurrence
//! measures of a single occupation vector.

use serde::{Deserialize, Serialize};

use crate::binomial::binomial_u128;
use crate::error::{Error, Result};
use crate::matrix::OccupationVector;

/// Number of occupied modes.
pub fn coherence_rank(n: &OccupationVector) -> usize {
    n.coherence_rank()
}

/// `X_0, ..., X_M` of the counts, exact, by the triangular recurrence
/// `e_k <- e_k + n_i e_{k-1}` over the modes.
pub fn elementary_symmetric_all(n: &OccupationVector) -> Result<Vec<u128>> {
    let modes = n.modes();
    let mut e = vec![0u128; modes + 1];
    e[0] = 1;
    for (i, &c) in n.counts().iter().enumerate() {
        let c = u128::from(c);
        for k in (1..=i + 1).rev() {
            e[k] = c
                .checked_mul(e[k - 1])
                .and_then(|t| t.checked_add(e[k]))
                .ok_or_else(|| {
                    Error::Invalid("elementary symmetric polynomial overflows u128".into())
                })?;
        }
    }
    Ok(e)
}

/// `X_k(n)`, the sum of all `k`-fold products of distinct counts.
pub fn elementary_symmetric(n: &OccupationVector, k: usize) -> Result<u128> {
    if k > n.modes() {
        return Err(Error::Invalid(format!(
            "k = {k} exceeds the mode count {}",
            n.modes()
        )));
    }
    // Only e_0..e_k are needed.
    let mut e = vec![0u128; k + 1];
    e[0] = 1;
    for (i, &c) in n.counts().iter().enumerate() {
        let c = u128::from(c);
        for j in (1..=k.min(i + 1)).rev() {
            e[j] = c
                .checked_mul(e[j - 1])
                .and_then(|t| t.checked_add(e[j]))
                .ok_or_else(|| {
                    Error::Invalid("elementary symmetric polynomial overflows u128".into())
                })?;
        }
    }
    Ok(e[k])
}

fn kth_root_ratio(x: u128, total: u64, k: usize) -> f64 {
    let c = binomial_u128(total, k as u64);
    if x == c {
        return 1.0;
    }
    (x as f64 / c as f64).powf(1.0 / k as f64)
}

/// `C_k(n) = (X_k / C(N, k))^{1/k}`.
///
/// `k = 0` gives 1; any `k` above the coherence rank gives 0, which also
/// covers `k > N`.
pub fn k_concurrence(n: &OccupationVector, k: usize) -> Result<f64> {
    if k == 0 {
        return Ok(1.0);
    }
    if k > n.coherence_rank() {
        return Ok(0.0);
    }
    let x = elementary_symmetric(n, k)?;
    Ok(kth_root_ratio(x, n.total(), k))
}

/// `[C_1, ..., C_N]`.
pub fn k_concurrences(n: &OccupationVector) -> Result<Vec<f64>> {
    let e = elementary_symmetric_all(n)?;
    let total = n.total();
    Ok((1..=total as usize)
        .map(|k| {
            if k >= e.len() || e[k] == 0 {
                0.0
            } else {
                kth_root_ratio(e[k], total, k)
            }
        })
        .collect())
}

/// `C_S(n) = prod_i (n_i + 1) / 2^N`.
pub fn concurrence_sum(n: &OccupationVector) -> f64 {
    let total = n.total();
    let p = n.product_plus_one() as f64;
    if total <= 1000 {
        p * 0.5f64.powi(total as i32)
    } else {
        (p.ln() - total as f64 * std::f64::consts::LN_2).exp()
    }
}

/// `C_S(n)` summed term by term as `2^{-N} sum_k C(N, k) C_k(n)^k`.
pub fn concurrence_sum_by_definition(n: &OccupationVector) -> Result<f64> {
    let total = n.total();
    let mut acc = 0.0;
    for k in 0..=n.coherence_rank() {
        let ck = k_concurrence(n, k)?;
        acc += binomial_u128(total, k as u64) as f64 * ck.powi(k as i32);
    }
    Ok(acc * 0.5f64.powi(total as i32))
}

/// Rank, photon number, `[C_1, ..., C_N]` and `C_S` of one vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceSummary {
    pub rank: usize,
    pub n_photons: u64,
    pub c_k: Vec<f64>,
    pub c_s: f64,
}

pub fn concurrence_summary(n: &OccupationVector) -> Result<ConcurrenceSummary> {
    Ok(ConcurrenceSummary {
        rank: n.coherence_rank(),
        n_photons: n.total(),
        c_k: k_concurrences(n)?,
        c_s: concurrence_sum(n),
    })
}

/// Whether `x` majorizes `y`: every prefix sum of `x` sorted descending is at
/// least the matching prefix sum of `y`. Shorter vectors are zero-padded.
pub fn majorizes(x: &OccupationVector, y: &OccupationVector) -> Result<bool> {
    if x.total() != y.total() {
        return Err(Error::TotalMismatch {
            input: x.total(),
            output: y.total(),
        });
    }
    let sorted = |v: &OccupationVector| {
        let mut s: Vec<u64> = v.counts().iter().map(|&c| u64::from(c)).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    };
    let (xs, ys) = (sorted(x), sorted(y));
    let len = xs.len().max(ys.len());
    let (mut px, mut py) = (0u64, 0u64);
    for i in 0..len {
        px += xs.get(i).copied().unwrap_or(0);
        py += ys.get(i).copied().unwrap_or(0);
        if px < py {
            return Ok(false);
        }
    }
    Ok(true)
}
