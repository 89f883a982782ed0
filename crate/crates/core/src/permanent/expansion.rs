//! Permanents of matrices with repeated rows and columns by expansion over
//! the input occupations.
//!
//! Both formulas here share one shape. Each occupied input mode `i` gets a
//! digit `t_i` in `0..=n_i`; a term is
//!
//! ```text
//! weight(t) * prod_j [ sum_i coef_i(t_i) A_ij ]^{m_j}
//! ```
//!
//! * Kan expansion: `coef = n_i - 2 t_i`, `weight = (-1)^{t_i} C(n_i, t_i)`,
//!   overall scale `2^{-N}`.
//! * Generalized Glynn: `coef = w_i^{t_i}` with `w_i` a primitive
//!   `(n_i + 1)`-th root of unity, `weight = conj(coef)^{n_i}`, overall
//!   scale `prod n_i! / prod (n_i + 1)`.
//!
//! The digits run as a mixed-radix odometer. Moving one digit changes every
//! collective column sum by a single multiple of one matrix row, so each term
//! costs `O(alpha_m)` updates plus `N` multiplications for the powers.

use std::f64::consts::TAU;
use std::ops::Sub;
use std::time::Instant;

use num_complex::Complex64;

use super::{chunk_ranges, Algorithm, ExactConfig, PermanentResult, EXPANSION_MAX_TERMS};
use crate::binomial::{binomial, MAX_N};
use crate::error::{Error, Result};
use crate::matrix::{validate_occupations, ComplexMatrix, OccupationVector};
use crate::summation::{combine_pairwise, PairwiseSum};

/// Per-mode scalar of the odometer: real for Kan, complex for roots of unity.
trait Coefficient: Copy + Send + Sync + Sub<Output = Self> {
    fn scale(self, z: Complex64) -> Complex64;
}

impl Coefficient for f64 {
    #[inline]
    fn scale(self, z: Complex64) -> Complex64 {
        Complex64::new(z.re * self, z.im * self)
    }
}

impl Coefficient for Complex64 {
    #[inline]
    fn scale(self, z: Complex64) -> Complex64 {
        self * z
    }
}

/// Counters from one expansion run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExpansionStats {
    /// Outer terms evaluated.
    pub terms: u64,
    /// Odometer digit moves (each one updates every active column sum).
    pub digit_moves: u64,
    /// Complex multiply-adds spent updating column sums.
    pub column_updates: u64,
    /// Complex multiplications spent on the column powers.
    pub power_multiplies: u64,
}

impl ExpansionStats {
    fn merge(&mut self, other: &ExpansionStats) {
        self.terms += other.terms;
        self.digit_moves += other.digit_moves;
        self.column_updates += other.column_updates;
        self.power_multiplies += other.power_multiplies;
    }
}

/// Box of digit values `lo[r]..=hi[r]` per expanded row, summed and scaled by `factor`.
#[derive(Clone, Debug)]
struct Region {
    lo: Vec<u32>,
    hi: Vec<u32>,
    factor: f64,
}

impl Region {
    fn size(&self) -> u64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&l, &h)| u64::from(h - l) + 1)
            .product()
    }
}

struct Expansion<C> {
    /// Occupied input modes as matrix row indices.
    rows: Vec<usize>,
    /// `A[rows[r]][cols[c]]`.
    entries: Vec<Vec<Complex64>>,
    /// Exponent `m_j` of each active output column.
    powers: Vec<u32>,
    coef: Vec<Vec<C>>,
    /// `coef[r][t + 1] - coef[r][t]`.
    step: Vec<Vec<C>>,
    weight: Vec<Vec<C>>,
}

impl<C: Coefficient> Expansion<C> {
    fn new(
        a: &ComplexMatrix,
        n: &OccupationVector,
        m: &OccupationVector,
        coef_of: impl Fn(u32, u32) -> C,
        weight_of: impl Fn(u32, u32) -> C,
    ) -> Self {
        let rows: Vec<usize> = (0..a.dim()).filter(|&i| n.counts()[i] > 0).collect();
        let cols: Vec<usize> = (0..a.dim()).filter(|&j| m.counts()[j] > 0).collect();
        let powers = cols.iter().map(|&j| m.counts()[j]).collect();
        let entries = rows
            .iter()
            .map(|&i| cols.iter().map(|&j| a.get(i, j)).collect())
            .collect();
        let mut coef = Vec::with_capacity(rows.len());
        let mut step = Vec::with_capacity(rows.len());
        let mut weight = Vec::with_capacity(rows.len());
        for &i in &rows {
            let ni = n.counts()[i];
            let c: Vec<C> = (0..=ni).map(|t| coef_of(ni, t)).collect();
            step.push(c.windows(2).map(|w| w[1] - w[0]).collect());
            coef.push(c);
            weight.push((0..=ni).map(|t| weight_of(ni, t)).collect());
        }
        Self {
            rows,
            entries,
            powers,
            coef,
            step,
            weight,
        }
    }

    fn full_region(&self, n: &OccupationVector) -> Region {
        Region {
            lo: vec![0; self.rows.len()],
            hi: self.rows.iter().map(|&i| n.counts()[i]).collect(),
            factor: 1.0,
        }
    }

    #[inline]
    fn add_row(&self, cols: &mut [Complex64], r: usize, by: C) {
        for (s, &x) in cols.iter_mut().zip(&self.entries[r]) {
            *s += by.scale(x);
        }
    }

    /// Sums `count` terms of `region` starting at linear index `start`
    /// (first free digit varies fastest).
    fn sum_range(&self, region: &Region, start: u64, count: u64) -> (Complex64, ExpansionStats) {
        let mut stats = ExpansionStats::default();
        let mut acc = PairwiseSum::new();
        if count == 0 {
            return (acc.total(), stats);
        }
        let free: Vec<usize> = (0..self.rows.len())
            .filter(|&r| region.hi[r] > region.lo[r])
            .collect();
        let mut digits = region.lo.clone();
        let mut rest = start;
        for &r in &free {
            let radix = u64::from(region.hi[r] - region.lo[r]) + 1;
            digits[r] += (rest % radix) as u32;
            rest /= radix;
        }

        let ncols = self.powers.len();
        let mut sums = vec![Complex64::new(0.0, 0.0); ncols];
        for (r, &t) in digits.iter().enumerate() {
            self.add_row(&mut sums, r, self.coef[r][t as usize]);
        }
        let power_cost: u64 = self.powers.iter().map(|&p| u64::from(p)).sum();

        for k in 0..count {
            let mut term = Complex64::new(1.0, 0.0);
            for (r, &t) in digits.iter().enumerate() {
                term = self.weight[r][t as usize].scale(term);
            }
            for (s, &p) in sums.iter().zip(&self.powers) {
                for _ in 0..p {
                    term *= s;
                }
            }
            acc.push(term);
            stats.terms += 1;
            stats.power_multiplies += power_cost;
            if k + 1 == count {
                break;
            }
            for &r in &free {
                let t = digits[r];
                stats.digit_moves += 1;
                stats.column_updates += ncols as u64;
                if t < region.hi[r] {
                    self.add_row(&mut sums, r, self.step[r][t as usize]);
                    digits[r] = t + 1;
                    break;
                }
                let lo = region.lo[r];
                let back = self.coef[r][lo as usize] - self.coef[r][t as usize];
                self.add_row(&mut sums, r, back);
                digits[r] = lo;
            }
        }
        (acc.total(), stats)
    }

    /// Chunked sum over a list of regions; partials are combined in
    /// region-major, chunk-minor order.
    fn sum_regions(&self, regions: &[Region], cfg: &ExactConfig) -> (Complex64, ExpansionStats) {
        let mut jobs = Vec::new();
        for (idx, region) in regions.iter().enumerate() {
            for (start, len) in chunk_ranges(region.size(), cfg.chunk_count()) {
                jobs.push((idx, start, len));
            }
        }
        let parts = cfg.map_chunks(jobs.len(), |j| {
            let (idx, start, len) = jobs[j];
            let (s, st) = self.sum_range(&regions[idx], start, len);
            (s * regions[idx].factor, st)
        });
        let mut stats = ExpansionStats::default();
        for (_, st) in &parts {
            stats.merge(st);
        }
        let values: Vec<Complex64> = parts.iter().map(|(v, _)| *v).collect();
        (combine_pairwise(&values), stats)
    }
}

fn check_expansion(
    a: &ComplexMatrix,
    n: &OccupationVector,
    m: &OccupationVector,
    algorithm: Algorithm,
) -> Result<u64> {
    let total = validate_occupations(a, n, m)?;
    if total > MAX_N as u64 {
        return Err(Error::Guard {
            algorithm: algorithm.name(),
            detail: format!("photon number {total} exceeds {MAX_N}"),
        });
    }
    let terms = n.product_plus_one();
    if terms > EXPANSION_MAX_TERMS {
        return Err(Error::Guard {
            algorithm: algorithm.name(),
            detail: format!("prod(n_i + 1) = {terms} exceeds {EXPANSION_MAX_TERMS}"),
        });
    }
    Ok(total)
}

fn kan_expansion(a: &ComplexMatrix, n: &OccupationVector, m: &OccupationVector) -> Expansion<f64> {
    Expansion::new(
        a,
        n,
        m,
        |ni, t| f64::from(ni) - 2.0 * f64::from(t),
        |ni, t| {
            let c = binomial(ni as usize, t as usize) as f64;
            if t % 2 == 0 {
                c
            } else {
                -c
            }
        },
    )
}

pub fn permanent_kan(
    a: &ComplexMatrix,
    n: &OccupationVector,
    m: &OccupationVector,
) -> Result<PermanentResult> {
    permanent_kan_with(a, n, m, &ExactConfig::default())
}

/// `Per([A]_{n,m}) = 2^{-N} sum_{v=0}^{n} (-1)^{|v|} prod_i C(n_i, v_i)
///  prod_j [sum_i (n_i - 2 v_i) A_ij]^{m_j}`, over all `prod (n_i + 1)` digit vectors.
pub fn permanent_kan_with(
    a: &ComplexMatrix,
    n: &OccupationVector,
    m: &OccupationVector,
    cfg: &ExactConfig,
) -> Result<PermanentResult> {
    let start = Instant::now();
    let (value, stats) = kan_with_stats(a, n, m, cfg)?;
    Ok(PermanentResult {
        value,
        algorithm: Algorithm::KanGeneralized,
        terms_evaluated: stats.terms,
        wall_time: start.elapsed(),
    })
}

/// Full Kan expansion together with its work counters.
pub(crate) fn kan_with_stats(
    a: &ComplexMatrix,
    n: &OccupationVector,
    m: &OccupationVector,
    cfg: &ExactConfig,
) -> Result<(Complex64, ExpansionStats)> {
    let total = check_expansion(a, n, m, Algorithm::KanGeneralized)?;
    let exp = kan_expansion(a, n, m);
    let region = exp.full_region(n);
    let (sum, stats) = exp.sum_regions(std::slice::from_ref(&region), cfg);
    Ok((sum * 0.5f64.powi(total as i32), stats))
}

/// Analytic term count of the symmetry-reduced expansion: `prod (n_k + 1) / 2`
/// when some `n_k` is odd, otherwise `(prod (n_k + 1) - 1) / 2`.
pub fn reduced_term_count(n: &OccupationVector) -> u64 {
    let full = n.product_plus_one() as u64;
    if n.counts().iter().any(|&c| c % 2 == 1) {
        full / 2
    } else {
        (full - 1) / 2
    }
}

/// Term count when the all-even centre `v = n / 2` is counted as a term of its
/// own: `ceil(prod (n_k + 1) / 2)`. The centre vanishes identically, so
/// [`reduced_term_count`] is what the reduced expansion evaluates.
pub fn reduced_term_count_with_centre(n: &OccupationVector) -> u64 {
    (n.product_plus_one() as u64).div_ceil(2)
}

/// Regions covering one representative of every `v <-> n - v` pair.
///
/// Reflecting `v` negates every collective column sum and flips the sign
/// `(-1)^{|v|}` by `(-1)^N`; the two factors cancel, so paired terms are equal.
fn reduced_regions(counts: &[u32]) -> Vec<Region> {
    let rows = counts.len();
    if let Some(pivot) = counts.iter().position(|&c| c % 2 == 1) {
        let mut hi = counts.to_vec();
        hi[pivot] = (counts[pivot] - 1) / 2;
        return vec![Region {
            lo: vec![0; rows],
            hi,
            factor: 2.0,
        }];
    }
    // All even: take the digit vectors lexicographically below the centre
    // n/2. The centre pairs with itself and every column sum vanishes there,
    // so its term is zero and is skipped.
    let centre: Vec<u32> = counts.iter().map(|&c| c / 2).collect();
    let mut regions = Vec::with_capacity(rows);
    for k in 0..rows {
        let mut lo = vec![0; rows];
        let mut hi = counts.to_vec();
        lo[..k].copy_from_slice(&centre[..k]);
        hi[..k].copy_from_slice(&centre[..k]);
        hi[k] = centre[k] - 1;
        regions.push(Region {
            lo,
            hi,
            factor: 2.0,
        });
    }
    regions
}

pub fn permanent_kan_reduced(
    a: &ComplexMatrix,
    n: &OccupationVector,
    m: &OccupationVector,
) -> Result<PermanentResult> {
    permanent_kan_reduced_with(a, n, m, &ExactConfig::default())
}

/// Kan expansion over half of the digit space using the `v <-> n - v` symmetry.
pub fn permanent_kan_reduced_with(
    a: &ComplexMatrix,
    n: &OccupationVector,
    m: &OccupationVector,
    cfg: &ExactConfig,
) -> Result<PermanentResult> {
    let start = Instant::now();
    let total = check_expansion(a, n, m, Algorithm::KanReduced)?;
    let exp = kan_expansion(a, n, m);
    let counts: Vec<u32> = exp.rows.iter().map(|&i| n.counts()[i]).collect();
    let regions = reduced_regions(&counts);
    let (sum, stats) = exp.sum_regions(&regions, cfg);
    Ok(PermanentResult {
        value: sum * 0.5f64.powi(total as i32),
        algorithm: Algorithm::KanReduced,
        terms_evaluated: stats.terms,
        wall_time: start.elapsed(),
    })
}

/// `exp(2 pi i k / q)` with exact values on the axes.
fn unit_root(k: u32, q: u32) -> Complex64 {
    let k = k % q;
    if (4 * k).is_multiple_of(q) {
        return match 4 * k / q {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let (s, c) = (TAU * f64::from(k) / f64::from(q)).sin_cos();
    Complex64::new(c, s)
}

pub fn permanent_glynn_generalized(
    a: &ComplexMatrix,
    n: &OccupationVector,
    m: &OccupationVector,
) -> Result<PermanentResult> {
    permanent_glynn_generalized_with(a, n, m, &ExactConfig::default())
}

/// Roots-of-unity average for repeated rows and columns:
///
/// `Per([A]_{n,m}) = (prod n_i! / prod (n_i + 1)) sum_{z} prod_i conj(z_i)^{n_i}
///  prod_j (sum_i A_ij z_i)^{m_j}` with `z_i` over the `(n_i + 1)`-th roots of unity.
///
/// Averaging `conj(z_i)^{n_i}` over those roots keeps exactly the `z_i^{n_i}`
/// coefficient, which `prod n_i!` turns into the permanent.
pub fn permanent_glynn_generalized_with(
    a: &ComplexMatrix,
    n: &OccupationVector,
    m: &OccupationVector,
    cfg: &ExactConfig,
) -> Result<PermanentResult> {
    let start = Instant::now();
    check_expansion(a, n, m, Algorithm::GlynnGeneralized)?;
    let exp = Expansion::new(
        a,
        n,
        m,
        |ni, t| unit_root(t, ni + 1),
        // conj(w^t)^{n_i} = w^{-t n_i}
        |ni, t| {
            let q = ni + 1;
            unit_root((q - (t * ni) % q) % q, q)
        },
    );
    let region = exp.full_region(n);
    let (sum, stats) = exp.sum_regions(std::slice::from_ref(&region), cfg);
    let scale = n
        .counts()
        .iter()
        .filter(|&&c| c > 0)
        .fold(1.0f64, |acc, &c| {
            let fact: f64 = (1..=c).map(f64::from).product();
            acc * fact / f64::from(c + 1)
        });
    Ok(PermanentResult {
        value: sum * scale,
        algorithm: Algorithm::GlynnGeneralized,
        terms_evaluated: stats.terms,
        wall_time: start.elapsed(),
    })
}
