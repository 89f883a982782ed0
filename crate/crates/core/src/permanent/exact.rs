//! Tolerance-free permanents of Gaussian-integer matrices.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::{GRAY_MAX_DIM, NAIVE_MAX_DIM};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussianInteger {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInteger {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        Self {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Add for &GaussianInteger {
    type Output = GaussianInteger;
    fn add(self, o: &GaussianInteger) -> GaussianInteger {
        GaussianInteger {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl Sub for &GaussianInteger {
    type Output = GaussianInteger;
    fn sub(self, o: &GaussianInteger) -> GaussianInteger {
        GaussianInteger {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl Mul for &GaussianInteger {
    type Output = GaussianInteger;
    fn mul(self, o: &GaussianInteger) -> GaussianInteger {
        GaussianInteger {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Neg for GaussianInteger {
    type Output = GaussianInteger;
    fn neg(self) -> GaussianInteger {
        GaussianInteger {
            re: -self.re,
            im: -self.im,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussianIntegerMatrix {
    dim: usize,
    data: Vec<GaussianInteger>,
}

impl GaussianIntegerMatrix {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> GaussianInteger) -> Self {
        let data = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self { dim, data }
    }

    /// Exact copy of a float matrix whose entries are all Gaussian integers.
    pub fn from_complex(a: &ComplexMatrix) -> Result<Self> {
        if !a.is_gaussian_integer() {
            return Err(Error::Invalid("matrix has non-integral entries".into()));
        }
        let conv = |x: f64| BigInt::from(x as i64);
        Ok(Self::from_fn(a.dim(), |i, j| {
            let z = a.get(i, j);
            GaussianInteger {
                re: conv(z.re),
                im: conv(z.im),
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussianInteger {
        &self.data[i * self.dim + j]
    }

    pub fn to_complex(&self) -> Result<ComplexMatrix> {
        ComplexMatrix::from_fn(self.dim, |i, j| self.get(i, j).to_complex())
    }
}

fn naive_rec(
    a: &GaussianIntegerMatrix,
    row: usize,
    used: u32,
    prefix: &GaussianInteger,
) -> GaussianInteger {
    if row == a.dim() {
        return prefix.clone();
    }
    let mut acc = GaussianInteger::zero();
    for col in 0..a.dim() {
        if used & (1 << col) == 0 {
            let p = prefix * a.get(row, col);
            if p.re.is_zero() && p.im.is_zero() {
                continue;
            }
            acc = &acc + &naive_rec(a, row + 1, used | (1 << col), &p);
        }
    }
    acc
}

pub fn permanent_naive_exact(a: &GaussianIntegerMatrix) -> Result<GaussianInteger> {
    if a.dim() > NAIVE_MAX_DIM {
        return Err(Error::Guard {
            algorithm: "naive_exact",
            detail: format!("dimension {} exceeds {NAIVE_MAX_DIM}", a.dim()),
        });
    }
    Ok(naive_rec(a, 0, 0, &GaussianInteger::one()))
}

/// Ryser inclusion-exclusion with Gray-code updates in exact arithmetic.
pub fn permanent_ryser_exact(a: &GaussianIntegerMatrix) -> Result<GaussianInteger> {
    let dim = a.dim();
    if dim > GRAY_MAX_DIM {
        return Err(Error::Guard {
            algorithm: "ryser_exact",
            detail: format!("dimension {dim} exceeds {GRAY_MAX_DIM}"),
        });
    }
    let mut sums = vec![GaussianInteger::zero(); dim];
    let mut subset = 0u64;
    let mut acc = GaussianInteger::zero();
    for k in 1u64..(1 << dim) {
        let col = k.trailing_zeros() as usize;
        subset ^= 1 << col;
        let adding = subset >> col & 1 == 1;
        for (i, s) in sums.iter_mut().enumerate() {
            *s = if adding {
                &*s + a.get(i, col)
            } else {
                &*s - a.get(i, col)
            };
        }
        let prod = sums.iter().fold(GaussianInteger::one(), |p, s| &p * s);
        acc = if subset.count_ones().is_multiple_of(2) {
            &acc + &prod
        } else {
            &acc - &prod
        };
    }
    Ok(if dim.is_multiple_of(2) { acc } else { -acc })
}
