//! Superpositions and ensembles of Fock states.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::concurrence::{concurrence_sum, k_concurrence};
use crate::error::{Error, Result};
use crate::matrix::OccupationVector;

/// Tolerance on `sum |psi_n|^2 = 1` and `sum rho_a = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// Which concurrence to evaluate on a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    /// `C_k`.
    K(usize),
    /// `C_S`.
    Sum,
}

impl Measure {
    pub fn of(self, n: &OccupationVector) -> Result<f64> {
        match self {
            Measure::K(k) => k_concurrence(n, k),
            Measure::Sum => Ok(concurrence_sum(n)),
        }
    }
}

/// `|psi> = sum_n psi_n |n>`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    modes: usize,
    terms: BTreeMap<OccupationVector, Complex64>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    occ: Vec<u32>,
    re: f64,
    im: f64,
}

impl PureState {
    /// Validates mode counts, duplicates and normalization.
    pub fn new(terms: impl IntoIterator<Item = (OccupationVector, Complex64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut modes = None;
        for (occ, amp) in terms {
            if !amp.re.is_finite() || !amp.im.is_finite() {
                return Err(Error::Invalid(format!("non-finite amplitude for {occ}")));
            }
            match modes {
                None => modes = Some(occ.modes()),
                Some(m) if m != occ.modes() => {
                    return Err(Error::Dimension(format!(
                        "state mixes {m}-mode and {}-mode vectors",
                        occ.modes()
                    )))
                }
                _ => {}
            }
            let label = occ.to_string();
            if map.insert(occ, amp).is_some() {
                return Err(Error::Invalid(format!(
                    "duplicate occupation vector {label}"
                )));
            }
        }
        let modes = modes.ok_or_else(|| Error::Invalid("empty state".into()))?;
        let norm: f64 = map.values().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Invalid(format!("state norm {norm} is not 1")));
        }
        Ok(Self { modes, terms: map })
    }

    /// The basis state `|n>`.
    pub fn basis(n: OccupationVector) -> Self {
        let modes = n.modes();
        Self {
            modes,
            terms: BTreeMap::from([(n, Complex64::new(1.0, 0.0))]),
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OccupationVector, &Complex64)> {
        self.terms.iter()
    }

    /// `sum_n |psi_n|^2 C(|n>)`.
    pub fn concurrence(&self, measure: Measure) -> Result<f64> {
        let mut acc = 0.0;
        for (n, a) in &self.terms {
            acc += a.norm_sqr() * measure.of(n)?;
        }
        Ok(acc)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: Vec<TermJson> = serde_json::from_str(s)?;
        Self::from_terms_json(raw)
    }

    fn from_terms_json(raw: Vec<TermJson>) -> Result<Self> {
        Self::new(
            raw.into_iter()
                .map(|t| (OccupationVector::new(t.occ), Complex64::new(t.re, t.im))),
        )
    }

    fn to_terms_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(n, a)| TermJson {
                occ: n.counts().to_vec(),
                re: a.re,
                im: a.im,
            })
            .collect()
    }
}

impl Serialize for PureState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_terms_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PureState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<TermJson>::deserialize(d)?;
        Self::from_terms_json(raw).map_err(serde::de::Error::custom)
    }
}

/// `rho = sum_a rho_a |psi_a><psi_a|` for one given decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedStateDecomposition {
    components: Vec<(f64, PureState)>,
}

#[derive(Serialize, Deserialize)]
struct ComponentJson {
    weight: f64,
    state: PureState,
}

impl MixedStateDecomposition {
    pub fn new(components: Vec<(f64, PureState)>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::Invalid("empty decomposition".into()))?
            .1
            .modes();
        let mut total = 0.0;
        for (w, psi) in &components {
            if !w.is_finite() || *w < 0.0 {
                return Err(Error::Invalid(format!(
                    "weight {w} is not a non-negative number"
                )));
            }
            if psi.modes() != first {
                return Err(Error::Dimension(
                    "components have different mode counts".into(),
                ));
            }
            total += w;
        }
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Invalid(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[(f64, PureState)] {
        &self.components
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: Vec<ComponentJson> = serde_json::from_str(s)?;
        Self::new(raw.into_iter().map(|c| (c.weight, c.state)).collect())
    }
}

impl Serialize for MixedStateDecomposition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw: Vec<ComponentJson> = self
            .components
            .iter()
            .map(|(w, psi)| ComponentJson {
                weight: *w,
                state: psi.clone(),
            })
            .collect();
        raw.serialize(s)
    }
}

/// `sum_a rho_a C(|psi_a>)` for the given decomposition.
///
/// This is not minimized over decompositions, so it is an upper bound on the
/// convex-roof value rather than the value itself.
pub fn concurrence_mixed(rho: &MixedStateDecomposition, measure: Measure) -> Result<f64> {
    let mut acc = 0.0;
    for (w, psi) in &rho.components {
        acc += w * psi.concurrence(measure)?;
    }
    Ok(acc)
}
