//! Concurrence of multimode thermal states, truncated by total photon number.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::states::{Measure, MixedStateDecomposition, PureState};
use crate::error::{Error, Result};
use crate::matrix::OccupationVector;

/// Default bound on the probability mass beyond the cutoff.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-6;

/// Largest number of occupation vectors a truncated sum may visit.
pub const MAX_THERMAL_VECTORS: u128 = 50_000_000;

/// Mean occupations per mode and the total-photon cutoff.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermalSpec {
    pub nbar: Vec<f64>,
    pub cutoff: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermalReport {
    pub value: f64,
    /// Probability mass of all vectors with total at most the cutoff.
    pub captured_mass: f64,
    /// `1 - captured_mass`.
    pub residual: f64,
}

impl ThermalSpec {
    pub fn new(nbar: Vec<f64>, cutoff: u32) -> Result<Self> {
        let spec = Self { nbar, cutoff };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.nbar.is_empty() {
            return Err(Error::Invalid(
                "thermal spec needs at least one mode".into(),
            ));
        }
        if let Some(x) = self.nbar.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::Invalid(format!(
                "mean occupation {x} is not a non-negative number"
            )));
        }
        let count = vector_count(self.nbar.len(), self.cutoff);
        if count > MAX_THERMAL_VECTORS {
            return Err(Error::Guard {
                algorithm: "thermal",
                detail: format!("{count} occupation vectors exceed {MAX_THERMAL_VECTORS}"),
            });
        }
        Ok(())
    }

    pub fn modes(&self) -> usize {
        self.nbar.len()
    }

    /// `prod_i nbar_i^{n_i} / (nbar_i + 1)^{n_i + 1}`.
    pub fn probability(&self, n: &OccupationVector) -> f64 {
        self.nbar
            .iter()
            .zip(n.counts())
            .map(|(&nb, &c)| (nb / (nb + 1.0)).powi(c as i32) / (nb + 1.0))
            .product()
    }

    /// Probability of each total photon number `0..=cutoff`, by convolving the
    /// per-mode geometric laws.
    pub fn shell_masses(&self) -> Vec<f64> {
        let c = self.cutoff as usize;
        let mut dist = vec![0.0; c + 1];
        dist[0] = 1.0;
        for &nb in &self.nbar {
            let q = nb / (nb + 1.0);
            let p0 = 1.0 / (nb + 1.0);
            let mut next = vec![0.0; c + 1];
            for (t, slot) in next.iter_mut().enumerate() {
                let mut acc = 0.0;
                let mut w = p0;
                for s in (0..=t).rev() {
                    acc += dist[s] * w;
                    w *= q;
                }
                *slot = acc;
            }
            dist = next;
        }
        dist
    }

    /// Renormalized diagonal ensemble over all vectors up to the cutoff.
    pub fn diagonal_decomposition(&self) -> Result<MixedStateDecomposition> {
        self.validate()?;
        let mut comps = Vec::new();
        for t in 0..=self.cutoff {
            for n in OccupationVector::all_with_total(self.modes(), t) {
                let p = self.probability(&n);
                if p > 0.0 {
                    comps.push((p, PureState::basis(n)));
                }
            }
        }
        let mass: f64 = comps.iter().map(|(p, _)| p).sum();
        for (p, _) in &mut comps {
            *p /= mass;
        }
        MixedStateDecomposition::new(comps)
    }
}

/// `sum_{|n| <= cutoff} p(n) C(|n>)`; errors when the mass beyond the cutoff
/// exceeds `tol`.
pub fn thermal_concurrence(
    spec: &ThermalSpec,
    measure: Measure,
    tol: f64,
) -> Result<ThermalReport> {
    spec.validate()?;
    let shells: Vec<Result<(f64, f64)>> = (0..=spec.cutoff)
        .into_par_iter()
        .map(|t| {
            let (mut mass, mut value) = (0.0, 0.0);
            for n in OccupationVector::all_with_total(spec.modes(), t) {
                let p = spec.probability(&n);
                if p > 0.0 {
                    mass += p;
                    value += p * measure.of(&n)?;
                }
            }
            Ok((mass, value))
        })
        .collect();
    let (mut mass, mut value) = (0.0, 0.0);
    for s in shells {
        let (m, v) = s?;
        mass += m;
        value += v;
    }
    let residual = (1.0 - mass).max(0.0);
    if residual > tol {
        return Err(Error::InsufficientCutoff {
            cutoff: spec.cutoff,
            residual,
            tolerance: tol,
        });
    }
    Ok(ThermalReport {
        value,
        captured_mass: mass,
        residual,
    })
}

/// Smallest cutoff up to `max_cutoff` whose residual mass is at most `tol`.
pub fn minimal_cutoff(nbar: &[f64], tol: f64, max_cutoff: u32) -> Result<u32> {
    let spec = ThermalSpec {
        nbar: nbar.to_vec(),
        cutoff: max_cutoff,
    };
    let mut acc = 0.0;
    for (t, m) in spec.shell_masses().into_iter().enumerate() {
        acc += m;
        if 1.0 - acc <= tol {
            return Ok(t as u32);
        }
    }
    Err(Error::InsufficientCutoff {
        cutoff: max_cutoff,
        residual: (1.0 - acc).max(0.0),
        tolerance: tol,
    })
}

fn vector_count(modes: usize, cutoff: u32) -> u128 {
    // vectors with total <= c in M modes: C(c + M, M)
    crate::binomial::binomial_u128(u64::from(cutoff) + modes as u64, modes as u64)
}
