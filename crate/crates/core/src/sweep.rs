//! Benchmark sweeps over photon patterns and algorithms.
//!
//! A sweep fixes one Haar unitary, one output pattern and a list of input
//! patterns, then records one row per (pattern, algorithm, repetition).
//! Expansion algorithms run on the cheaper side chosen by the runtime model.

use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fock::concurrence_sum;
use crate::matrix::{haar_random_unitary, OccupationVector};
use crate::permanent::{agrees, Algorithm, ExactConfig};
use crate::runtime::{permanent_on_chosen_side, runtime_estimate, ExpansionSide};

/// Frozen CSV header.
pub const CSV_COLUMNS: [&str; 13] = [
    "spec_hash",
    "N",
    "M",
    "n",
    "m",
    "algorithm",
    "value_re",
    "value_im",
    "terms",
    "t_min",
    "C_S_n",
    "C_S_m",
    "wall_ns",
];

/// Relative tolerance for the cross-algorithm agreement flag.
pub const AGREEMENT_REL_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pattern {
    /// Photons spread one per mode from the first mode, wrapping around.
    Uniform,
    /// All photons in the first mode.
    Bunched,
    /// Uniformly random composition drawn from `seed`.
    Random { seed: u64 },
    /// A fixed vector.
    Explicit(Vec<u32>),
}

impl Pattern {
    pub fn generate(&self, photons: u32, modes: usize) -> Result<OccupationVector> {
        if modes == 0 {
            return Err(Error::Invalid("pattern needs at least one mode".into()));
        }
        let v = match self {
            Pattern::Uniform => {
                let base = photons / modes as u32;
                let extra = (photons % modes as u32) as usize;
                (0..modes).map(|i| base + u32::from(i < extra)).collect()
            }
            Pattern::Bunched => {
                let mut v = vec![0; modes];
                v[0] = photons;
                v
            }
            Pattern::Random { seed } => random_composition(photons, modes, *seed),
            Pattern::Explicit(v) => {
                let sum: u64 = v.iter().map(|&c| u64::from(c)).sum();
                if v.len() != modes || sum != u64::from(photons) {
                    return Err(Error::Invalid(format!(
                        "explicit pattern {v:?} does not have {photons} photons in {modes} modes"
                    )));
                }
                v.clone()
            }
        };
        Ok(OccupationVector::new(v))
    }
}

/// Stars and bars: choose `modes - 1` bar positions among `photons + modes - 1`.
fn random_composition(photons: u32, modes: usize, seed: u64) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slots = photons as usize + modes - 1;
    let bars = rand::seq::index::sample(&mut rng, slots, modes - 1);
    let mut is_bar = vec![false; slots];
    for b in bars.iter() {
        is_bar[b] = true;
    }
    let mut v = vec![0u32; modes];
    let mut mode = 0;
    for bar in is_bar {
        if bar {
            mode += 1;
        } else {
            v[mode] += 1;
        }
    }
    v
}

fn default_output() -> Pattern {
    Pattern::Uniform
}

fn default_repetitions() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub photons: u32,
    pub modes: usize,
    pub patterns: Vec<Pattern>,
    #[serde(default = "default_output")]
    pub output: Pattern,
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "default_repetitions")]
    pub repetitions: u32,
    pub matrix_seed: u64,
}

impl SweepSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(s)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.photons == 0 {
            return Err(Error::Invalid("sweep needs at least one photon".into()));
        }
        if self.modes == 0 {
            return Err(Error::Invalid("sweep needs at least one mode".into()));
        }
        if self.patterns.is_empty() {
            return Err(Error::Invalid("pattern list is empty".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Invalid("algorithm list is empty".into()));
        }
        if self.repetitions == 0 {
            return Err(Error::Invalid("repetitions must be positive".into()));
        }
        for p in self.patterns.iter().chain([&self.output]) {
            p.generate(self.photons, self.modes)?;
        }
        Ok(())
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("spec serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub spec_hash: String,
    #[serde(rename = "N")]
    pub photons: u32,
    #[serde(rename = "M")]
    pub modes: usize,
    pub n: String,
    pub m: String,
    pub algorithm: Algorithm,
    pub value_re: f64,
    pub value_im: f64,
    pub terms: u64,
    pub t_min: u128,
    #[serde(rename = "C_S_n")]
    pub cs_n: f64,
    #[serde(rename = "C_S_m")]
    pub cs_m: f64,
    pub wall_ns: u64,
    pub side: ExpansionSide,
    pub repetition: u32,
    /// Whether every algorithm of this pattern agrees to `AGREEMENT_REL_TOL`.
    pub agree: bool,
    /// Seconds since the Unix epoch.
    pub timestamp: f64,
}

pub fn run_sweep(spec: &SweepSpec, cfg: &ExactConfig) -> Result<Vec<RunRecord>> {
    spec.validate()?;
    let hash = spec.hash();
    let u = haar_random_unitary(spec.modes, spec.matrix_seed)?;
    let m = spec.output.generate(spec.photons, spec.modes)?;
    let mut records = Vec::new();
    for pattern in &spec.patterns {
        let n = pattern.generate(spec.photons, spec.modes)?;
        let model = runtime_estimate(&n, &m)?;
        let (cs_n, cs_m) = (concurrence_sum(&n), concurrence_sum(&m));
        let first = records.len();
        for &algorithm in &spec.algorithms {
            for repetition in 0..spec.repetitions {
                let (result, side) = permanent_on_chosen_side(&u, &n, &m, algorithm, cfg)?;
                records.push(RunRecord {
                    spec_hash: hash.clone(),
                    photons: spec.photons,
                    modes: spec.modes,
                    n: n.to_string(),
                    m: m.to_string(),
                    algorithm,
                    value_re: result.value.re,
                    value_im: result.value.im,
                    terms: result.terms_evaluated,
                    t_min: model.t_min,
                    cs_n,
                    cs_m,
                    wall_ns: u64::try_from(result.wall_time.as_nanos()).unwrap_or(u64::MAX),
                    side,
                    repetition,
                    agree: true,
                    timestamp: now(),
                });
            }
        }
        let cell = &mut records[first..];
        let reference = num_complex::Complex64::new(cell[0].value_re, cell[0].value_im);
        let all = cell.iter().all(|r| {
            agrees(
                num_complex::Complex64::new(r.value_re, r.value_im),
                reference,
                AGREEMENT_REL_TOL,
                1e-12,
            )
        });
        for r in cell {
            r.agree = all;
        }
    }
    Ok(records)
}

fn now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

/// Writes the frozen CSV columns, one row per record.
pub fn write_csv<W: Write>(records: &[RunRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_COLUMNS).map_err(csv_err)?;
    for r in records {
        w.write_record([
            r.spec_hash.clone(),
            r.photons.to_string(),
            r.modes.to_string(),
            r.n.clone(),
            r.m.clone(),
            r.algorithm.to_string(),
            format!("{:e}", r.value_re),
            format!("{:e}", r.value_im),
            r.terms.to_string(),
            r.t_min.to_string(),
            format!("{:e}", r.cs_n),
            format!("{:e}", r.cs_m),
            r.wall_ns.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(records: &[RunRecord], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, records)?;
    writeln!(out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(patterns: Vec<Pattern>, algorithms: Vec<Algorithm>, repetitions: u32) -> SweepSpec {
        SweepSpec {
            photons: 8,
            modes: 8,
            patterns,
            output: Pattern::Uniform,
            algorithms,
            repetitions,
            matrix_seed: 42,
        }
    }

    #[test]
    fn patterns_have_right_shape() {
        for (photons, modes) in [(8, 8), (3, 5), (7, 3), (12, 1)] {
            for p in [
                Pattern::Uniform,
                Pattern::Bunched,
                Pattern::Random { seed: 9 },
            ] {
                let v = p.generate(photons, modes).unwrap();
                assert_eq!(v.modes(), modes);
                assert_eq!(v.total(), u64::from(photons));
            }
        }
        assert_eq!(
            Pattern::Uniform.generate(7, 3).unwrap().counts(),
            &[3, 2, 2]
        );
        assert_eq!(
            Pattern::Random { seed: 4 }.generate(10, 4).unwrap(),
            Pattern::Random { seed: 4 }.generate(10, 4).unwrap()
        );
        assert!(Pattern::Explicit(vec![1, 1]).generate(3, 2).is_err());
    }

    #[test]
    fn uniform_and_bunched_model_rows() {
        let s = spec(
            vec![Pattern::Uniform, Pattern::Bunched],
            vec![Algorithm::KanReduced],
            1,
        );
        let rows = run_sweep(&s, &ExactConfig::default()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].t_min, 256 * 64);
        assert_eq!(rows[1].t_min, 9 * 8);
    }

    #[test]
    fn repetitions_repeat_values() {
        let s = spec(
            vec![Pattern::Random { seed: 1 }],
            vec![Algorithm::KanGeneralized, Algorithm::RyserGray],
            3,
        );
        let rows = run_sweep(&s, &ExactConfig::default()).unwrap();
        assert_eq!(rows.len(), 6);
        for chunk in rows.chunks(3) {
            for r in chunk {
                assert_eq!(
                    (r.value_re, r.value_im, r.terms),
                    (chunk[0].value_re, chunk[0].value_im, chunk[0].terms)
                );
            }
        }
        assert!(rows.iter().all(|r| r.agree));
    }

    #[test]
    fn validation_and_hash() {
        assert!(spec(vec![], vec![Algorithm::Glynn], 1).validate().is_err());
        assert!(spec(vec![Pattern::Uniform], vec![], 1).validate().is_err());
        assert!(spec(vec![Pattern::Uniform], vec![Algorithm::Glynn], 0)
            .validate()
            .is_err());
        let a = spec(vec![Pattern::Uniform], vec![Algorithm::Glynn], 1);
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.matrix_seed += 1;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 16);
    }

    #[test]
    fn json_spec_parses() {
        let text = r#"{"photons":4,"modes":3,"patterns":["uniform","bunched",{"random":{"seed":5}},{"explicit":[2,2,0]}],
                      "algorithms":["glynn","kan_reduced"],"matrix_seed":1}"#;
        let s = SweepSpec::from_json(text).unwrap();
        assert_eq!(s.patterns.len(), 4);
        assert_eq!(s.repetitions, 1);
        assert!(SweepSpec::from_json(
            r#"{"photons":4,"modes":3,"patterns":[],"algorithms":["glynn"],"matrix_seed":1}"#
        )
        .is_err());
    }

    #[test]
    fn csv_header_and_rows() {
        let s = spec(vec![Pattern::Bunched], vec![Algorithm::KanGeneralized], 2);
        let rows = run_sweep(&s, &ExactConfig::default()).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        assert_eq!(lines.count(), 2);
    }
}
