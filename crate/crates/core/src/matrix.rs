//! Dense complex matrices, photon occupation vectors and the repeated
//! row/column submatrix `[A]_{n,m}` that links them.
//!
//! Matrices are square and stored row-major. The JSON form is
//! `{"dim": M, "data": [[re, im], ...]}` with `M*M` entries.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    data: Vec<[f64; 2]>,
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(raw: MatrixJson) -> Result<Self> {
        if raw.data.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Parse("matrix entries must be finite".into()));
        }
        let data = raw
            .data
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        ComplexMatrix::from_row_major(raw.dim, data)
    }
}

impl From<ComplexMatrix> for MatrixJson {
    fn from(m: ComplexMatrix) -> Self {
        MatrixJson {
            dim: m.dim,
            data: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl ComplexMatrix {
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension(
                "matrix dimension must be at least 1".into(),
            ));
        }
        if data.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self::from_row_major(dim, data)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_fn(dim, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// The all-ones matrix `J_dim`.
    pub fn ones(dim: usize) -> Result<Self> {
        Self::from_fn(dim, |_, _| Complex64::new(1.0, 0.0))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.data[row * self.dim..(row + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut data = Vec::with_capacity(d * d);
        for j in 0..d {
            for i in 0..d {
                data.push(self.data[i * d + j]);
            }
        }
        Self { dim: d, data }
    }

    /// Copy with row `row` multiplied by `c`.
    pub fn scale_row(&self, row: usize, c: Complex64) -> Self {
        let mut out = self.clone();
        for z in &mut out.data[row * self.dim..(row + 1) * self.dim] {
            *z *= c;
        }
        out
    }

    /// Largest entry modulus of `U U^† - I`.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    acc += self.get(i, k) * self.get(j, k).conj();
                }
                if i == j {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// True when every entry has integral real and imaginary parts.
    pub fn is_gaussian_integer(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.fract() == 0.0 && z.im.fract() == 0.0)
    }
}

/// Photon counts per optical mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OccupationVector(Vec<u32>);

impl OccupationVector {
    pub fn new(counts: Vec<u32>) -> Self {
        Self(counts)
    }

    /// `(1, ..., 1)` over `modes` modes.
    pub fn ones(modes: usize) -> Self {
        Self(vec![1; modes])
    }

    /// `(photons, 0, ..., 0)`.
    pub fn bunched(modes: usize, photons: u32) -> Self {
        let mut v = vec![0; modes];
        if modes > 0 {
            v[0] = photons;
        }
        Self(v)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&c| u64::from(c)).sum()
    }

    /// Number of occupied modes.
    pub fn coherence_rank(&self) -> usize {
        self.0.iter().filter(|&&c| c > 0).count()
    }

    /// `prod_i (n_i + 1)`, saturating at `u128::MAX`.
    pub fn product_plus_one(&self) -> u128 {
        self.0
            .iter()
            .fold(1u128, |acc, &c| acc.saturating_mul(u128::from(c) + 1))
    }

    /// Mode index of each photon, in mode order: `(2,0,1)` gives `[0,0,2]`.
    pub fn expanded_indices(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(i, c as usize))
            .collect()
    }

    /// Every occupation vector over `modes` modes holding `total` photons,
    /// in lexicographically decreasing order.
    pub fn all_with_total(modes: usize, total: u32) -> Compositions {
        Compositions::new(modes, total)
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for OccupationVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty occupation vector".into()));
        }
        s.split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("bad photon count {p:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

/// Iterator over weak compositions of a photon number into a fixed mode count.
pub struct Compositions {
    current: Option<Vec<u32>>,
}

impl Compositions {
    fn new(modes: usize, total: u32) -> Self {
        let current = if modes == 0 {
            (total == 0).then(Vec::new)
        } else {
            let mut v = vec![0; modes];
            v[0] = total;
            Some(v)
        };
        Self { current }
    }
}

impl Iterator for Compositions {
    type Item = OccupationVector;

    fn next(&mut self) -> Option<OccupationVector> {
        let out = self.current.clone()?;
        let v = self.current.as_mut().unwrap();
        let m = v.len();
        // Move one photon from the right-most occupied mode (excluding the
        // last) one step right, and gather everything behind it.
        match (0..m.saturating_sub(1)).rev().find(|&i| v[i] > 0) {
            None => self.current = None,
            Some(i) => {
                let tail: u32 = v[i + 1..].iter().sum();
                v[i] -= 1;
                for x in &mut v[i + 1..] {
                    *x = 0;
                }
                v[i + 1] = tail + 1;
            }
        }
        Some(OccupationVector(out))
    }
}

fn check_pair(a: &ComplexMatrix, n: &OccupationVector, m: &OccupationVector) -> Result<u64> {
    if n.modes() != a.dim() || m.modes() != a.dim() {
        return Err(Error::Dimension(format!(
            "occupation vectors have {} and {} modes, matrix has dimension {}",
            n.modes(),
            m.modes(),
            a.dim()
        )));
    }
    let (tn, tm) = (n.total(), m.total());
    if tn != tm {
        return Err(Error::TotalMismatch {
            input: tn,
            output: tm,
        });
    }
    Ok(tn)
}

/// Validates `(A, n, m)` and returns the photon number.
pub(crate) fn validate_occupations(
    a: &ComplexMatrix,
    n: &OccupationVector,
    m: &OccupationVector,
) -> Result<u64> {
    let total = check_pair(a, n, m)?;
    if total == 0 {
        return Err(Error::Invalid("occupation vectors hold no photons".into()));
    }
    Ok(total)
}

/// `[A]_{n,m}`: row `i` of `A` repeated `n_i` times, column `j` repeated
/// `m_j` times.
pub fn build_submatrix(
    a: &ComplexMatrix,
    n: &OccupationVector,
    m: &OccupationVector,
) -> Result<ComplexMatrix> {
    validate_occupations(a, n, m)?;
    let rows = n.expanded_indices();
    let cols = m.expanded_indices();
    ComplexMatrix::from_fn(rows.len(), |r, c| a.get(rows[r], cols[c]))
}

/// Haar-distributed unitary from the QR factorisation of a complex Ginibre
/// matrix. Gram-Schmidt yields a positive real diagonal in `R`, which is the
/// phase normalisation needed for the Haar measure.
pub fn haar_random_unitary(dim: usize, seed: u64) -> Result<ComplexMatrix> {
    if dim == 0 {
        return Err(Error::Dimension(
            "unitary dimension must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    // columns[j][i] = G_{ij}
    let mut columns: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Complex64::new(re * scale, im * scale)
                })
                .collect()
        })
        .collect();

    for j in 0..dim {
        // Two passes of modified Gram-Schmidt keep orthogonality at machine precision.
        for _ in 0..2 {
            for k in 0..j {
                let (done, rest) = columns.split_at_mut(j);
                let q = &done[k];
                let v = &mut rest[0];
                let proj: Complex64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = columns[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Invalid("degenerate Ginibre sample".into()));
        }
        for z in &mut columns[j] {
            *z /= norm;
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| columns[j][i])
}

/// Complex Ginibre matrix with unit-variance entries, used for non-unitary fixtures.
pub fn gaussian_random_matrix(dim: usize, seed: u64) -> Result<ComplexMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(dim, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re * scale, im * scale)
    })
}
