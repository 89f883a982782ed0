//! Monte-Carlo permanent estimators.
//!
//! The Kan estimator draws every digit `v_k` independently from
//! `Binomial(n_k, 1/2)` and averages
//! `G(v) = (-1)^{|v|} prod_j [sum_i (n_i - 2 v_i) A_ij]^{m_j}`; the binomial
//! weights of the exact expansion are then absorbed by the sampling law. The
//! Gurvits estimator averages the Glynn summand over uniform `x in {+-1}^N`.
//!
//! Samples are drawn in batches. Batch `b` uses a ChaCha8 stream seeded by
//! `seed` with stream id `b`, and batch statistics are merged in batch order,
//! so reports are identical for any thread count.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::binomial::binomial;
use crate::error::{Error, Result};
use crate::matrix::{validate_occupations, ComplexMatrix, OccupationVector};
use crate::summation::PairwiseSum;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EstimatorConfig {
    pub samples: u64,
    pub seed: u64,
    /// Samples per batch; each batch owns one random stream.
    pub batch: u64,
    pub threads: usize,
}

impl EstimatorConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self {
            samples,
            seed,
            batch: 10_000,
            threads: 1,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Invalid("sample count must be positive".into()));
        }
        if self.batch == 0 {
            return Err(Error::Invalid("batch size must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimatorReport {
    pub estimate: Complex64,
    /// `sqrt(se_re^2 + se_im^2)`.
    pub std_error: f64,
    pub std_error_re: f64,
    pub std_error_im: f64,
    pub samples: u64,
    pub seed: u64,
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    re: f64,
    im: f64,
}

/// Wire form of [`EstimatorReport`].
#[derive(Serialize, Deserialize)]
pub struct EstimatorJson {
    estimate: ComplexJson,
    std_error: f64,
    std_error_re: f64,
    std_error_im: f64,
    samples: u64,
    seed: u64,
}

impl From<&EstimatorReport> for EstimatorJson {
    fn from(r: &EstimatorReport) -> Self {
        EstimatorJson {
            estimate: ComplexJson {
                re: r.estimate.re,
                im: r.estimate.im,
            },
            std_error: r.std_error,
            std_error_re: r.std_error_re,
            std_error_im: r.std_error_im,
            samples: r.samples,
            seed: r.seed,
        }
    }
}

/// Running mean and squared deviations (Welford), mergeable.
#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    #[inline]
    fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(&mut self, o: &Moments) {
        if o.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *o;
            return;
        }
        let n = (self.count + o.count) as f64;
        let d = o.mean - self.mean;
        self.mean += d * o.count as f64 / n;
        self.m2 += o.m2 + d * d * self.count as f64 * o.count as f64 / n;
        self.count += o.count;
    }

    /// Standard error of the mean; zero for a single sample.
    fn std_error(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let n = self.count as f64;
        (self.m2.max(0.0) / (n - 1.0) / n).sqrt()
    }
}

/// Inverse-CDF sampler for the digit vector `v`, one table per mode.
#[derive(Clone, Debug)]
pub struct DigitSampler {
    cdfs: Vec<Vec<f64>>,
}

impl DigitSampler {
    pub fn new(n: &OccupationVector) -> Self {
        let cdfs = n
            .counts()
            .iter()
            .map(|&nk| {
                let scale = 0.5f64.powi(nk as i32);
                let mut acc = 0.0;
                let mut cdf: Vec<f64> = (0..=nk)
                    .map(|v| {
                        acc += binomial(nk as usize, v as usize) as f64 * scale;
                        acc
                    })
                    .collect();
                *cdf.last_mut().unwrap() = f64::INFINITY;
                cdf
            })
            .collect();
        Self { cdfs }
    }

    /// Fills `out` with one draw, `v_k ~ Binomial(n_k, 1/2)`.
    #[inline]
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [u32]) {
        for (slot, cdf) in out.iter_mut().zip(&self.cdfs) {
            if cdf.len() == 1 {
                *slot = 0;
                continue;
            }
            let u: f64 = rng.random();
            *slot = cdf.partition_point(|&c| c <= u) as u32;
        }
    }
}

/// One draw of `v` with independent `Binomial(n_k, 1/2)` components.
pub fn sample_v<R: Rng + ?Sized>(n: &OccupationVector, rng: &mut R) -> Vec<u32> {
    let sampler = DigitSampler::new(n);
    let mut v = vec![0; n.modes()];
    sampler.sample_into(rng, &mut v);
    v
}

/// Active rows/columns of `A` for evaluating `G(v)`.
struct KanSummand<'a> {
    a: &'a ComplexMatrix,
    n: &'a [u32],
    rows: Vec<usize>,
    cols: Vec<usize>,
    powers: Vec<u32>,
}

impl<'a> KanSummand<'a> {
    fn new(a: &'a ComplexMatrix, n: &'a OccupationVector, m: &OccupationVector) -> Self {
        let rows = (0..a.dim()).filter(|&i| n.counts()[i] > 0).collect();
        let cols: Vec<usize> = (0..a.dim()).filter(|&j| m.counts()[j] > 0).collect();
        let powers = cols.iter().map(|&j| m.counts()[j]).collect();
        Self {
            a,
            n: n.counts(),
            rows,
            cols,
            powers,
        }
    }

    /// `G(v)`, evaluated from scratch.
    fn eval(&self, v: &[u32]) -> Complex64 {
        let mut g = Complex64::new(1.0, 0.0);
        for (&j, &p) in self.cols.iter().zip(&self.powers) {
            let mut r = Complex64::new(0.0, 0.0);
            for &i in &self.rows {
                r += self.a.get(i, j) * (f64::from(self.n[i]) - 2.0 * f64::from(v[i]));
            }
            for _ in 0..p {
                g *= r;
            }
        }
        let parity: u32 = self.rows.iter().map(|&i| v[i]).sum();
        if parity % 2 == 1 {
            -g
        } else {
            g
        }
    }
}

fn run_batches<F>(cfg: &EstimatorConfig, draw: F) -> EstimatorReport
where
    F: Fn(&mut ChaCha8Rng) -> Complex64 + Sync,
{
    let batches = cfg.samples.div_ceil(cfg.batch);
    let one_batch = |b: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(b);
        let count = cfg.batch.min(cfg.samples - b * cfg.batch);
        let (mut re, mut im) = (Moments::default(), Moments::default());
        for _ in 0..count {
            let g = draw(&mut rng);
            re.push(g.re);
            im.push(g.im);
        }
        (re, im)
    };
    let parts: Vec<(Moments, Moments)> = if cfg.threads > 1 && batches > 1 {
        match rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
        {
            Ok(pool) => pool.install(|| (0..batches).into_par_iter().map(one_batch).collect()),
            Err(_) => (0..batches).map(one_batch).collect(),
        }
    } else {
        (0..batches).map(one_batch).collect()
    };
    let (mut re, mut im) = (Moments::default(), Moments::default());
    for (r, i) in &parts {
        re.merge(r);
        im.merge(i);
    }
    let (se_re, se_im) = (re.std_error(), im.std_error());
    EstimatorReport {
        estimate: Complex64::new(re.mean, im.mean),
        std_error: se_re.hypot(se_im),
        std_error_re: se_re,
        std_error_im: se_im,
        samples: cfg.samples,
        seed: cfg.seed,
    }
}

/// Mean of `G(v)` over `cfg.samples` binomial draws of `v`; unbiased for
/// `Per([A]_{n,m})`.
pub fn estimate_permanent_kan(
    a: &ComplexMatrix,
    n: &OccupationVector,
    m: &OccupationVector,
    cfg: &EstimatorConfig,
) -> Result<EstimatorReport> {
    validate_occupations(a, n, m)?;
    cfg.validate()?;
    let summand = KanSummand::new(a, n, m);
    let sampler = DigitSampler::new(n);
    let modes = n.modes();
    Ok(run_batches(cfg, |rng| {
        let mut v = vec![0u32; modes];
        sampler.sample_into(rng, &mut v);
        summand.eval(&v)
    }))
}

/// Mean of `(prod x_i) prod_j (sum_k A_jk x_k)` over uniform `x in {+-1}^N`.
pub fn estimate_permanent_gurvits(
    a: &ComplexMatrix,
    cfg: &EstimatorConfig,
) -> Result<EstimatorReport> {
    cfg.validate()?;
    let dim = a.dim();
    Ok(run_batches(cfg, |rng| {
        let mut x = Vec::with_capacity(dim);
        let mut bits = 0u64;
        for k in 0..dim {
            if k % 64 == 0 {
                bits = rng.random();
            }
            x.push(if bits >> (k % 64) & 1 == 1 { -1.0 } else { 1.0 });
        }
        let sign: f64 = x.iter().product();
        let mut g = Complex64::new(sign, 0.0);
        for j in 0..dim {
            let s: Complex64 = a.row(j).iter().zip(&x).map(|(&z, &xk)| z * xk).sum();
            g *= s;
        }
        g
    }))
}

/// Exhaustive `sum_v p(v) G(v)` with `p(v) = prod_k C(n_k, v_k) / 2^{n_k}`.
///
/// Walks every `v` and evaluates `G` from scratch, sharing nothing with the
/// odometer of the exact expansion.
pub fn exhaustive_expectation(
    a: &ComplexMatrix,
    n: &OccupationVector,
    m: &OccupationVector,
) -> Result<Complex64> {
    validate_occupations(a, n, m)?;
    let summand = KanSummand::new(a, n, m);
    let counts = n.counts();
    let total = n.total() as i32;
    let mut acc = PairwiseSum::new();
    for v in digit_vectors(counts) {
        let weight: u64 = counts
            .iter()
            .zip(&v)
            .map(|(&nk, &vk)| binomial(nk as usize, vk as usize))
            .product();
        acc.push(summand.eval(&v) * (weight as f64 * 0.5f64.powi(total)));
    }
    Ok(acc.total())
}

/// `(sum_v prod_k C(n_k, v_k), 2^N)`: the numerator and common denominator of
/// `sum_v p(v)`, in exact integers.
pub fn probability_mass_fraction(n: &OccupationVector) -> (u128, u128) {
    let counts = n.counts();
    let numerator = digit_vectors(counts)
        .map(|v| {
            counts
                .iter()
                .zip(&v)
                .map(|(&nk, &vk)| u128::from(binomial(nk as usize, vk as usize)))
                .product::<u128>()
        })
        .sum();
    (numerator, 1u128 << n.total())
}

/// All `v` with `0 <= v_k <= n_k`, last index fastest.
fn digit_vectors(counts: &[u32]) -> impl Iterator<Item = Vec<u32>> + '_ {
    let mut next = Some(vec![0u32; counts.len()]);
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut v = cur.clone();
        let mut k = counts.len();
        loop {
            if k == 0 {
                break;
            }
            k -= 1;
            if v[k] < counts[k] {
                v[k] += 1;
                next = Some(v);
                break;
            }
            v[k] = 0;
        }
        Some(cur)
    })
}
