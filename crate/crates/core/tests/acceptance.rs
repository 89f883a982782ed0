//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use fockperm::estimator::{
    estimate_permanent_kan, exhaustive_expectation, probability_mass_fraction, EstimatorConfig,
};
use fockperm::fock::{
    concurrence_sum, elementary_symmetric_all, k_concurrence, minimal_cutoff,
    output_probability_total, thermal_concurrence, Measure, ThermalSpec,
};
use fockperm::matrix::gaussian_random_matrix;
use fockperm::permanent::{
    permanent, permanent_glynn, permanent_kan, permanent_kan_reduced, permanent_naive, Algorithm,
    ExactConfig,
};
use fockperm::runtime::{measure_kan, runtime_estimate, spearman_rho};
use fockperm::sweep::{run_sweep, Pattern, SweepSpec};
use fockperm::{haar_random_unitary, Complex64, ComplexMatrix, OccupationVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn rel_err(value: Complex64, reference: Complex64) -> f64 {
    (value - reference).norm() / reference.norm()
}

/// Each photon lands in a uniformly random mode.
fn random_occupation(rng: &mut ChaCha8Rng, modes: usize, photons: u32) -> OccupationVector {
    let mut v = vec![0u32; modes];
    for _ in 0..photons {
        v[rng.random_range(0..modes)] += 1;
    }
    OccupationVector::new(v)
}

/// `[A]_{n,m}` assembled from the repeated index lists.
fn expanded(a: &ComplexMatrix, n: &OccupationVector, m: &OccupationVector) -> ComplexMatrix {
    let repeat = |v: &OccupationVector| -> Vec<usize> {
        v.counts()
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(i, c as usize))
            .collect()
    };
    let (rows, cols) = (repeat(n), repeat(m));
    ComplexMatrix::from_fn(rows.len(), |r, c| a.get(rows[r], cols[c])).unwrap()
}

fn all_vectors(modes: usize, photons: u32) -> Vec<OccupationVector> {
    OccupationVector::all_with_total(modes, photons).collect()
}

fn ac1_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0AC1);
    let cfg = ExactConfig::default();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for instance in 0..200u64 {
        let modes = rng.random_range(1..=6usize);
        let photons = rng.random_range(1..=8u32);
        let a = if instance % 2 == 0 {
            haar_random_unitary(modes, instance).unwrap()
        } else {
            gaussian_random_matrix(modes, instance).unwrap()
        };
        let n = random_occupation(&mut rng, modes, photons);
        let m = random_occupation(&mut rng, modes, photons);
        let reference = permanent_naive(&expanded(&a, &n, &m)).unwrap().value;
        for alg in [
            Algorithm::RyserGray,
            Algorithm::Glynn,
            Algorithm::KanGeneralized,
            Algorithm::KanReduced,
            Algorithm::GlynnGeneralized,
        ] {
            let v = permanent(&a, &n, &m, alg, &cfg).unwrap().value;
            let diff = (v - reference).norm();
            let ok = diff <= 1e-9 * reference.norm() || diff <= 1e-12;
            if reference.norm() > 1e-12 {
                worst = worst.max(diff / reference.norm());
            }
            if !ok {
                failures.push(format!("#{instance} {alg} n={n} m={m}"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "200 instances x 5 algorithms vs naive, max rel err {worst:.2e} (tol 1e-9){}",
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failed: {}", failures.join(", "))
            }
        ),
    )
}

fn ac2_glynn_reduction() -> Outcome {
    let mut worst = 0.0f64;
    for dim in 2..=12usize {
        let u = haar_random_unitary(dim, 100 + dim as u64).unwrap();
        let ones = OccupationVector::ones(dim);
        let k = permanent_kan(&u, &ones, &ones).unwrap().value;
        let g = permanent_glynn(&u).unwrap().value;
        worst = worst.max(rel_err(k, g));
    }
    outcome(
        worst <= 1e-11,
        format!("N = 2..12, max rel err {worst:.2e} (tol 1e-11)"),
    )
}

fn ac3_reduced_term_counts() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for modes in 1..=4usize {
        let u = haar_random_unitary(modes, modes as u64).unwrap();
        for photons in 1..=8u32 {
            for n in all_vectors(modes, photons) {
                let full: u64 = n.counts().iter().map(|&c| u64::from(c) + 1).product();
                let stated = if n.counts().iter().any(|c| c % 2 == 1) {
                    full / 2
                } else {
                    (full - 1) / 2
                };
                let r = permanent_kan_reduced(&u, &n, &n).unwrap();
                if r.terms_evaluated != stated {
                    failures.push(format!("n={n}: {} != {stated}", r.terms_evaluated));
                }
                checked += 1;
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{checked} vectors (N <= 8, M <= 4), {} mismatches {}",
            failures.len(),
            failures.join(", ")
        ),
    )
}

fn ac4_runtime_identity() -> Outcome {
    let mut vectors = 0u64;
    let mut pairs = 0u64;
    let mut failures = Vec::new();
    for modes in 1..=6usize {
        for photons in 1..=12u32 {
            let vs = all_vectors(modes, photons);
            for n in &vs {
                let x = elementary_symmetric_all(n).unwrap();
                let product: u128 = n.counts().iter().map(|&c| u128::from(c) + 1).product();
                if x.iter().sum::<u128>() != product {
                    failures.push(format!("product identity at {n}"));
                }
                vectors += 1;
            }
            for n in &vs {
                for m in &vs {
                    let r = runtime_estimate(n, m).unwrap();
                    let via_cs = 2f64.powi(photons as i32)
                        * concurrence_sum(n).min(concurrence_sum(m))
                        * (n.coherence_rank() * m.coherence_rank()) as f64;
                    if r.t_min != via_cs.round() as u128
                        || r.t_min != r.concurrence_form.round() as u128
                    {
                        failures.push(format!("t_min at {n} / {m}"));
                    }
                    pairs += 1;
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{vectors} vectors and {pairs} pairs (N <= 12, M <= 6), {} violations",
            failures.len()
        ),
    )
}

fn ac5_extremal_concurrence() -> Outcome {
    let mut failures = Vec::new();
    for photons in 1..=20u32 {
        if concurrence_sum(&OccupationVector::ones(photons as usize)) != 1.0 {
            failures.push(format!("ones({photons})"));
        }
        let bunched = OccupationVector::bunched(photons as usize, photons);
        let expect = f64::from(photons + 1) / 2f64.powi(photons as i32);
        if concurrence_sum(&bunched) != expect {
            failures.push(format!("bunched({photons})"));
        }
    }
    outcome(
        failures.is_empty(),
        format!("N = 1..20, exact equality; failures: {:?}", failures),
    )
}

/// Partitions of `n` into parts at most `max`, descending, padded to `len`.
fn partitions(
    n: u32,
    max: u32,
    len: usize,
    prefix: &mut Vec<u32>,
    out: &mut Vec<OccupationVector>,
) {
    if n == 0 {
        let mut v = prefix.clone();
        v.resize(len, 0);
        out.push(OccupationVector::new(v));
        return;
    }
    for part in (1..=n.min(max)).rev() {
        prefix.push(part);
        partitions(n - part, part, len, prefix, out);
        prefix.pop();
    }
}

/// Prefix-sum dominance of two descending vectors, evaluated independently of
/// the library's majorization routine.
fn dominates(x: &OccupationVector, y: &OccupationVector) -> bool {
    let (mut px, mut py) = (0u32, 0u32);
    x.counts().iter().zip(y.counts()).all(|(a, b)| {
        px += a;
        py += b;
        px >= py
    })
}

fn ac6_schur_concavity() -> Outcome {
    let mut comparable = 0u64;
    let mut violations = Vec::new();
    for photons in 1..=12u32 {
        let mut parts = Vec::new();
        partitions(
            photons,
            photons,
            photons as usize,
            &mut Vec::new(),
            &mut parts,
        );
        let data: Vec<(Vec<f64>, f64)> = parts
            .iter()
            .map(|p| {
                let ck = (1..=photons as usize)
                    .map(|k| k_concurrence(p, k).unwrap())
                    .collect();
                (ck, concurrence_sum(p))
            })
            .collect();
        for (i, x) in parts.iter().enumerate() {
            for (j, y) in parts.iter().enumerate() {
                if i == j || !dominates(x, y) {
                    continue;
                }
                comparable += 1;
                let (cx, sx) = &data[i];
                let (cy, sy) = &data[j];
                if cx.iter().zip(cy).any(|(a, b)| a > b) || sx > sy {
                    violations.push(format!("{x} > {y}"));
                }
            }
        }
    }
    outcome(
        violations.is_empty() && comparable > 0,
        format!(
            "{comparable} comparable pairs (N <= 12), {} violations",
            violations.len()
        ),
    )
}

fn ac7_unitarity() -> Outcome {
    let mut worst = 0.0f64;
    let mut inputs = 0;
    for seed in 0..20u64 {
        let modes = 1 + (seed % 4) as usize;
        let u = haar_random_unitary(modes, 700 + seed).unwrap();
        for photons in 1..=3u32 {
            for n in all_vectors(modes, photons) {
                let p = output_probability_total(&u, &n, Algorithm::KanGeneralized).unwrap();
                worst = worst.max((p - 1.0).abs());
                inputs += 1;
            }
        }
    }
    outcome(
        worst <= 1e-8,
        format!("20 unitaries, {inputs} inputs, max |sum p - 1| = {worst:.2e} (tol 1e-8)"),
    )
}

fn ac8_estimator() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0AC8);
    // Exhaustive expectation against the exact expansion.
    let mut exhaustive = 0;
    let mut worst = 0.0f64;
    let mut mass_ok = true;
    while exhaustive < 300 {
        let modes = rng.random_range(1..=6usize);
        let photons = rng.random_range(1..=13u32);
        let n = random_occupation(&mut rng, modes, photons);
        let m = random_occupation(&mut rng, modes, photons);
        if n.product_plus_one() > 10_000 {
            continue;
        }
        let seed = rng.random::<u64>();
        let a = if exhaustive % 2 == 0 {
            haar_random_unitary(modes, seed).unwrap()
        } else {
            gaussian_random_matrix(modes, seed).unwrap()
        };
        let ex = exhaustive_expectation(&a, &n, &m).unwrap();
        let kan = permanent_kan(&a, &n, &m).unwrap().value;
        worst = worst.max(rel_err(ex, kan));
        let (num, den) = probability_mass_fraction(&n);
        mass_ok &= num == den;
        exhaustive += 1;
    }
    // Monte-Carlo coverage.
    let mut misses = Vec::new();
    for instance in 0..50u64 {
        let modes = rng.random_range(2..=5usize);
        let photons = rng.random_range(2..=7u32);
        let n = random_occupation(&mut rng, modes, photons);
        let m = random_occupation(&mut rng, modes, photons);
        let u = haar_random_unitary(modes, 900 + instance).unwrap();
        let exact = permanent_kan(&u, &n, &m).unwrap().value;
        let r =
            estimate_permanent_kan(&u, &n, &m, &EstimatorConfig::new(100_000, instance)).unwrap();
        if (r.estimate - exact).norm() > 4.0 * r.std_error {
            misses.push(instance);
        }
    }
    // Standard-error scaling.
    let u = haar_random_unitary(4, 31).unwrap();
    let (n, m) = (
        OccupationVector::new(vec![2, 1, 1, 0]),
        OccupationVector::new(vec![1, 1, 1, 1]),
    );
    let pts: Vec<(f64, f64)> = [1_000u64, 10_000, 100_000, 1_000_000]
        .iter()
        .map(|&s| {
            let r = estimate_permanent_kan(&u, &n, &m, &EstimatorConfig::new(s, 17)).unwrap();
            ((s as f64).ln(), r.std_error.ln())
        })
        .collect();
    let k = pts.len() as f64;
    let (mx, my) = (
        pts.iter().map(|p| p.0).sum::<f64>() / k,
        pts.iter().map(|p| p.1).sum::<f64>() / k,
    );
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let pass = worst <= 1e-12 && mass_ok && misses.is_empty() && (-0.6..=-0.4).contains(&slope);
    outcome(
        pass,
        format!(
            "exhaustive: {exhaustive} instances, max rel err {worst:.2e} (tol 1e-12), mass exact: {mass_ok}; \
             MC: {}/50 within 4 se; slope {slope:.3} (want [-0.6, -0.4])",
            50 - misses.len()
        ),
    )
}

fn ac9_model_vs_measurement() -> Outcome {
    // Term counts on sweep rows.
    let mut rows = 0;
    let mut mismatches = 0;
    for (i, output) in [
        Pattern::Uniform,
        Pattern::Bunched,
        Pattern::Random { seed: 77 },
    ]
    .into_iter()
    .enumerate()
    {
        let spec = SweepSpec {
            photons: 8,
            modes: 6,
            patterns: (0..8)
                .map(|s| Pattern::Random { seed: s })
                .chain([Pattern::Uniform, Pattern::Bunched])
                .collect(),
            output,
            algorithms: vec![Algorithm::KanGeneralized],
            repetitions: 1,
            matrix_seed: i as u64,
        };
        let m = spec.output.generate(spec.photons, spec.modes).unwrap();
        for r in run_sweep(&spec, &ExactConfig::default()).unwrap() {
            let n: OccupationVector = r.n.parse().unwrap();
            let expect = n.product_plus_one().min(m.product_plus_one()) as u64;
            if r.terms != expect {
                mismatches += 1;
            }
            rows += 1;
        }
    }
    // Wall-clock rank correlation at N = 14.
    let mut rng = ChaCha8Rng::seed_from_u64(0x0AC9);
    let modes = 14usize;
    let u = haar_random_unitary(modes, 14).unwrap();
    let spread = |rng: &mut ChaCha8Rng, occupied: usize| {
        let mut v = vec![0u32; modes];
        for slot in v.iter_mut().take(occupied) {
            *slot = 1;
        }
        for _ in occupied..14 {
            v[rng.random_range(0..occupied)] += 1;
        }
        OccupationVector::new(v)
    };
    let (mut model, mut wall) = (Vec::new(), Vec::new());
    for i in 0..24usize {
        let n = spread(&mut rng, 1 + i % 14);
        let m = spread(&mut rng, 1 + (i * 5 + 3) % 14);
        let t_min = runtime_estimate(&n, &m).unwrap().t_min;
        let best = (0..5)
            .map(|_| {
                let start = Instant::now();
                measure_kan(&u, &n, &m, &ExactConfig::default()).unwrap();
                start.elapsed().as_nanos() as f64
            })
            .fold(f64::INFINITY, f64::min);
        model.push(t_min as f64);
        wall.push(best);
    }
    let rho = spearman_rho(&model, &wall).unwrap();
    outcome(
        mismatches == 0 && rho >= 0.8,
        format!("{rows} sweep rows, {mismatches} term mismatches; Spearman rho {rho:.3} over 24 patterns at N = 14 (want >= 0.8)"),
    )
}

fn ac10_thermal() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0AC10);
    let mut failures = Vec::new();
    let mut max_cs = 0.0f64;
    for i in 0..10 {
        let modes = rng.random_range(1..=4usize);
        let nbar: Vec<f64> = (0..modes).map(|_| rng.random_range(0.05..1.0)).collect();
        let cutoff = minimal_cutoff(&nbar, 1e-7, 400).unwrap();
        let spec = ThermalSpec::new(nbar, cutoff).unwrap();
        let r = thermal_concurrence(&spec, Measure::Sum, 1e-6).unwrap();
        max_cs = max_cs.max(r.value);
        if !(r.residual < 1e-6 && r.value < 1.0) {
            failures.push(i);
        }
    }
    let single = ThermalSpec::new(vec![0.5], 40).unwrap();
    let r = thermal_concurrence(&single, Measure::K(1), 1e-6).unwrap();
    let closed = 1.0 - 1.0 / 1.5;
    let err = (r.value - closed).abs();
    outcome(
        failures.is_empty() && err <= 1e-9,
        format!("10 specs, max C_S {max_cs:.6} (< 1), failures {failures:?}; single-mode |C_1 - 1/3| = {err:.2e} (tol 1e-9)"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1 oracle equivalence", ac1_oracle_equivalence),
        ("AC2 Glynn reduction", ac2_glynn_reduction),
        ("AC3 reduced term counts", ac3_reduced_term_counts),
        ("AC4 runtime identity", ac4_runtime_identity),
        ("AC5 extremal concurrence", ac5_extremal_concurrence),
        ("AC6 Schur concavity", ac6_schur_concavity),
        ("AC7 unitarity conservation", ac7_unitarity),
        ("AC8 estimator unbiasedness", ac8_estimator),
        ("AC9 model vs measurement", ac9_model_vs_measurement),
        ("AC10 thermal bound", ac10_thermal),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let o = check();
        let secs = start.elapsed().as_secs_f64();
        println!(
            "{} {name}: {} [{secs:.2}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
