//! Exact permanent algorithms.
//!
//! All algorithms compute `Per([A]_{n,m})`, the permanent of the matrix that
//! repeats row `i` of `A` `n_i` times and column `j` `m_j` times. The
//! single-matrix algorithms (naive, Ryser, Glynn) act on the expanded
//! submatrix; the expansion algorithms (Kan, reduced Kan, generalized
//! Glynn) work on `A` and the occupation vectors directly and never build it.

mod exact;
mod expansion;
mod gray;
mod naive;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{build_submatrix, ComplexMatrix, OccupationVector};

pub use exact::{
    permanent_naive_exact, permanent_ryser_exact, GaussianInteger, GaussianIntegerMatrix,
};
pub(crate) use expansion::kan_with_stats;
pub use expansion::{
    permanent_glynn_generalized, permanent_glynn_generalized_with, permanent_kan,
    permanent_kan_reduced, permanent_kan_reduced_with, permanent_kan_with, reduced_term_count,
    reduced_term_count_with_centre, ExpansionStats,
};
pub use gray::{permanent_glynn, permanent_glynn_with, permanent_ryser, permanent_ryser_with};
pub use naive::permanent_naive;

/// Largest dimension accepted by the `N!` expansion.
pub const NAIVE_MAX_DIM: usize = 11;
/// Largest dimension accepted by the `2^N` Gray-code algorithms.
pub const GRAY_MAX_DIM: usize = 30;
/// Largest outer term count `prod(n_i + 1)` accepted by the expansion algorithms.
pub const EXPANSION_MAX_TERMS: u128 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Naive,
    RyserGray,
    Glynn,
    KanGeneralized,
    KanReduced,
    GlynnGeneralized,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Naive,
        Algorithm::RyserGray,
        Algorithm::Glynn,
        Algorithm::KanGeneralized,
        Algorithm::KanReduced,
        Algorithm::GlynnGeneralized,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Naive => "naive",
            Algorithm::RyserGray => "ryser_gray",
            Algorithm::Glynn => "glynn",
            Algorithm::KanGeneralized => "kan_generalized",
            Algorithm::KanReduced => "kan_reduced",
            Algorithm::GlynnGeneralized => "glynn_generalized",
        }
    }

    /// Whether the algorithm works on `(A, n, m)` without expanding the submatrix.
    pub fn is_expansion(self) -> bool {
        matches!(
            self,
            Algorithm::KanGeneralized | Algorithm::KanReduced | Algorithm::GlynnGeneralized
        )
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(
            match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
                "naive" => Algorithm::Naive,
                "ryser" | "ryser_gray" => Algorithm::RyserGray,
                "glynn" => Algorithm::Glynn,
                "kan" | "kan_generalized" => Algorithm::KanGeneralized,
                "kan_reduced" => Algorithm::KanReduced,
                "glynn_generalized" => Algorithm::GlynnGeneralized,
                other => return Err(Error::Parse(format!("unknown algorithm {other:?}"))),
            },
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PermanentResult {
    pub value: Complex64,
    pub algorithm: Algorithm,
    /// Exact number of outer-summation terms evaluated.
    pub terms_evaluated: u64,
    pub wall_time: Duration,
}

/// Wire form: `{"re", "im", "algorithm", "terms", "wall_time_ns"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PermanentJson {
    pub re: f64,
    pub im: f64,
    pub algorithm: Algorithm,
    pub terms: u64,
    pub wall_time_ns: u64,
}

impl From<&PermanentResult> for PermanentJson {
    fn from(r: &PermanentResult) -> Self {
        PermanentJson {
            re: r.value.re,
            im: r.value.im,
            algorithm: r.algorithm,
            terms: r.terms_evaluated,
            wall_time_ns: u64::try_from(r.wall_time.as_nanos()).unwrap_or(u64::MAX),
        }
    }
}

/// Work splitting for the outer sum.
///
/// The term range is cut into `chunks` contiguous pieces whose partial sums
/// are combined in chunk order, so the value is bit-stable for a fixed chunk
/// count whatever `threads` is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactConfig {
    pub chunks: usize,
    pub threads: usize,
}

impl Default for ExactConfig {
    fn default() -> Self {
        Self {
            chunks: 1,
            threads: 1,
        }
    }
}

impl ExactConfig {
    /// One chunk per thread.
    pub fn parallel(threads: usize) -> Self {
        let threads = threads.max(1);
        Self {
            chunks: threads,
            threads,
        }
    }

    /// Evaluates `f` on every chunk index and returns results in index order.
    pub(crate) fn map_chunks<T, F>(&self, jobs: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Send + Sync,
    {
        if self.threads <= 1 || jobs <= 1 {
            return (0..jobs).map(f).collect();
        }
        match rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
        {
            Ok(pool) => pool.install(|| (0..jobs).into_par_iter().map(&f).collect()),
            Err(_) => (0..jobs).map(f).collect(),
        }
    }

    pub(crate) fn chunk_count(&self) -> usize {
        self.chunks.max(1)
    }
}

/// Splits `[0, total)` into `chunks` contiguous ranges, returned as `(start, len)`.
pub(crate) fn chunk_ranges(total: u64, chunks: usize) -> Vec<(u64, u64)> {
    let k = chunks.max(1) as u128;
    let t = u128::from(total);
    (0..k)
        .map(|c| {
            let lo = (t * c / k) as u64;
            let hi = (t * (c + 1) / k) as u64;
            (lo, hi - lo)
        })
        .collect()
}

/// Runs `algorithm` on `Per([A]_{n,m})`.
pub fn permanent(
    a: &ComplexMatrix,
    n: &OccupationVector,
    m: &OccupationVector,
    algorithm: Algorithm,
    cfg: &ExactConfig,
) -> Result<PermanentResult> {
    match algorithm {
        Algorithm::KanGeneralized => permanent_kan_with(a, n, m, cfg),
        Algorithm::KanReduced => permanent_kan_reduced_with(a, n, m, cfg),
        Algorithm::GlynnGeneralized => permanent_glynn_generalized_with(a, n, m, cfg),
        Algorithm::Naive | Algorithm::RyserGray | Algorithm::Glynn => {
            // Check the guard before materialising a possibly huge submatrix.
            let size = crate::matrix::validate_occupations(a, n, m)?;
            let limit = if algorithm == Algorithm::Naive {
                NAIVE_MAX_DIM
            } else {
                GRAY_MAX_DIM
            };
            if size > limit as u64 {
                return Err(Error::Guard {
                    algorithm: algorithm.name(),
                    detail: format!("submatrix dimension {size} exceeds {limit}"),
                });
            }
            let sub = build_submatrix(a, n, m)?;
            match algorithm {
                Algorithm::Naive => permanent_naive(&sub),
                Algorithm::RyserGray => permanent_ryser_with(&sub, cfg),
                _ => permanent_glynn_with(&sub, cfg),
            }
        }
    }
}

/// Relative agreement with an absolute floor for near-zero references.
pub fn agrees(value: Complex64, reference: Complex64, rel: f64, abs_floor: f64) -> bool {
    let diff = (value - reference).norm();
    diff <= rel * reference.norm() || diff <= abs_floor
}
