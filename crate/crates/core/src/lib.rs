//! Matrix permanents for Fock-state boson sampling.
//!
//! * [`matrix`]: complex matrices, occupation vectors, `[A]_{n,m}` submatrices
//!   and Haar-random unitaries.
//! * [`permanent`]: exact algorithms (naive, Ryser, Glynn, Kan expansion and
//!   its reduced form, generalized Glynn).
//! * [`estimator`]: Monte-Carlo permanent estimators.
//! * [`fock`]: transition amplitudes and Fock-state concurrences.
//! * [`runtime`]: the term-count runtime model.
//! * [`sweep`]: benchmark sweeps producing CSV/JSON ledgers.

pub mod binomial;
pub mod error;
pub mod estimator;
pub mod fock;
pub mod matrix;
pub mod permanent;
pub mod runtime;
pub mod summation;
pub mod sweep;

pub use error::{Error, Result};
pub use matrix::{build_submatrix, haar_random_unitary, ComplexMatrix, OccupationVector};
pub use num_complex::Complex64;
pub use permanent::{Algorithm, ExactConfig, PermanentResult};
