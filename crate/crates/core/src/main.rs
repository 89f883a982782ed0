use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use fockperm::estimator::{
    estimate_permanent_gurvits, estimate_permanent_kan, EstimatorConfig, EstimatorJson,
};
use fockperm::fock::{
    concurrence_mixed, concurrence_summary, thermal_concurrence, transition_amplitude, Measure,
    MixedStateDecomposition, PureState, ThermalSpec, DEFAULT_RESIDUAL_TOL,
};
use fockperm::matrix::gaussian_random_matrix;
use fockperm::permanent::{permanent, PermanentJson};
use fockperm::runtime::{permanent_on_chosen_side, runtime_estimate, RuntimeEstimate};
use fockperm::sweep::{run_sweep, write_csv, write_json, SweepSpec};
use fockperm::{
    build_submatrix, haar_random_unitary, Algorithm, ComplexMatrix, Error, ExactConfig,
    OccupationVector, Result,
};

/// Matrix permanents, transition amplitudes and Fock-state concurrences
#[derive(Parser, Debug)]
#[command(name = "fockperm", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Permanent of the submatrix [A]_{n,m}
    Perm(PermArgs),
    /// Transition amplitude <m|U|n>
    Amplitude(AmplitudeArgs),
    /// Coherence rank, k-concurrences and concurrence sum
    Concurrence(ConcurrenceArgs),
    /// Monte-Carlo permanent estimate
    Estimate(EstimateArgs),
    /// Term-count runtime model for a pair of occupation vectors
    Runtime(RuntimeArgs),
    /// Run a benchmark sweep and write a ledger
    Sweep(SweepArgs),
    /// Write a random matrix fixture
    Haar(HaarArgs),
}

#[derive(Args, Debug)]
struct MatrixInput {
    /// Matrix JSON file ({"dim": M, "data": [[re, im], ...]}); "-" reads stdin
    #[arg(long, value_name = "FILE")]
    matrix: PathBuf,
}

#[derive(Args, Debug)]
struct Occupations {
    /// Input occupation vector, comma separated
    #[arg(
        long,
        value_name = "LIST",
        conflicts_with = "n_file",
        required_unless_present = "n_file"
    )]
    n: Option<OccupationVector>,
    /// Input occupation vector as a JSON integer array
    #[arg(long, value_name = "FILE")]
    n_file: Option<PathBuf>,
    /// Output occupation vector, comma separated
    #[arg(
        long,
        value_name = "LIST",
        conflicts_with = "m_file",
        required_unless_present = "m_file"
    )]
    m: Option<OccupationVector>,
    /// Output occupation vector as a JSON integer array
    #[arg(long, value_name = "FILE")]
    m_file: Option<PathBuf>,
}

impl Occupations {
    fn resolve(&self) -> Result<(OccupationVector, OccupationVector)> {
        Ok((
            pick(self.n.as_ref(), self.n_file.as_deref())?,
            pick(self.m.as_ref(), self.m_file.as_deref())?,
        ))
    }
}

fn pick(flag: Option<&OccupationVector>, file: Option<&Path>) -> Result<OccupationVector> {
    match (flag, file) {
        (Some(v), None) => Ok(v.clone()),
        (None, Some(p)) => Ok(serde_json::from_str(&read_input(p)?)?),
        _ => Err(Error::Parse(
            "give an occupation vector either inline or as a file".into(),
        )),
    }
}

#[derive(Args, Debug)]
struct Parallelism {
    /// Worker threads
    #[arg(long, env = "FOCKPERM_THREADS", default_value_t = 1)]
    threads: usize,
    /// Work chunks; the value is bit-stable for a fixed chunk count [default: threads]
    #[arg(long)]
    chunks: Option<usize>,
}

impl Parallelism {
    fn config(&self) -> ExactConfig {
        let threads = self.threads.max(1);
        ExactConfig {
            chunks: self.chunks.unwrap_or(threads).max(1),
            threads,
        }
    }
}

#[derive(Args, Debug)]
struct PermArgs {
    #[command(flatten)]
    matrix: MatrixInput,
    #[command(flatten)]
    occ: Occupations,
    /// naive, ryser_gray, glynn, kan_generalized, kan_reduced or glynn_generalized
    #[arg(long, default_value = "kan_reduced")]
    algorithm: Algorithm,
    /// Run expansion algorithms on the side with fewer terms
    #[arg(long)]
    chosen_side: bool,
    #[command(flatten)]
    par: Parallelism,
}

#[derive(Args, Debug)]
struct AmplitudeArgs {
    #[command(flatten)]
    matrix: MatrixInput,
    #[command(flatten)]
    occ: Occupations,
    #[arg(long, default_value = "kan_reduced")]
    algorithm: Algorithm,
    #[command(flatten)]
    par: Parallelism,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct StateSource {
    /// Occupation vector, comma separated
    #[arg(long, value_name = "LIST")]
    n: Option<OccupationVector>,
    /// Pure state JSON: [{"occ": [...], "re": x, "im": y}, ...]
    #[arg(long, value_name = "FILE")]
    state: Option<PathBuf>,
    /// Decomposition JSON: [{"weight": w, "state": [...]}, ...]
    #[arg(long, value_name = "FILE")]
    mixed: Option<PathBuf>,
    /// Thermal spec JSON: {"nbar": [...], "cutoff": c}
    #[arg(long, value_name = "FILE")]
    thermal: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConcurrenceArgs {
    #[command(flatten)]
    source: StateSource,
    /// Largest k for thermal C_k values
    #[arg(long, default_value_t = 2)]
    max_k: usize,
    /// Largest probability mass allowed beyond the thermal cutoff
    #[arg(long, default_value_t = DEFAULT_RESIDUAL_TOL)]
    residual_tol: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum EstimatorKind {
    Kan,
    Gurvits,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[command(flatten)]
    matrix: MatrixInput,
    #[command(flatten)]
    occ: Occupations,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Samples per random stream
    #[arg(long, default_value_t = 10_000)]
    batch: u64,
    /// Kan digit sampling or Gurvits sign vectors on [A]_{n,m}
    #[arg(long, value_enum, default_value = "kan")]
    method: EstimatorKind,
    #[arg(long, env = "FOCKPERM_THREADS", default_value_t = 1)]
    threads: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum TableFormat {
    Json,
    Csv,
    Table,
}

#[derive(Args, Debug)]
struct RuntimeArgs {
    #[arg(long, value_name = "LIST")]
    n: OccupationVector,
    #[arg(long, value_name = "LIST")]
    m: OccupationVector,
    #[arg(long, value_enum, default_value = "json")]
    format: TableFormat,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum LedgerFormat {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Sweep spec JSON
    #[arg(long, value_name = "FILE")]
    spec: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    out: LedgerFormat,
    /// Ledger path; stdout when absent
    #[arg(long, short, value_name = "FILE")]
    output: Option<PathBuf>,
    #[command(flatten)]
    par: Parallelism,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MatrixKind {
    Haar,
    Gaussian,
}

#[derive(Args, Debug)]
struct HaarArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Haar unitary or complex Gaussian entries
    #[arg(long, value_enum, default_value = "haar")]
    kind: MatrixKind,
    #[arg(long, short, value_name = "FILE")]
    output: Option<PathBuf>,
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

fn load_matrix(input: &MatrixInput) -> Result<ComplexMatrix> {
    Ok(serde_json::from_str(&read_input(&input.matrix)?)?)
}

fn emit<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_perm(args: &PermArgs) -> Result<()> {
    let a = load_matrix(&args.matrix)?;
    let (n, m) = args.occ.resolve()?;
    let cfg = args.par.config();
    let result = if args.chosen_side {
        permanent_on_chosen_side(&a, &n, &m, args.algorithm, &cfg)?.0
    } else {
        permanent(&a, &n, &m, args.algorithm, &cfg)?
    };
    emit(&PermanentJson::from(&result))
}

fn cmd_amplitude(args: &AmplitudeArgs) -> Result<()> {
    let u = load_matrix(&args.matrix)?;
    let (n, m) = args.occ.resolve()?;
    let z = transition_amplitude(&u, &n, &m, args.algorithm, &args.par.config())?;
    emit(&json!({
        "re": z.re,
        "im": z.im,
        "probability": z.norm_sqr(),
        "algorithm": args.algorithm,
    }))
}

fn state_measures(max_k: usize, eval: impl Fn(Measure) -> Result<f64>) -> Result<(Vec<f64>, f64)> {
    let c_k = (1..=max_k)
        .map(|k| eval(Measure::K(k)))
        .collect::<Result<_>>()?;
    Ok((c_k, eval(Measure::Sum)?))
}

fn max_photons<'a>(states: impl Iterator<Item = &'a PureState>) -> usize {
    states
        .flat_map(|s| s.terms().map(|(n, _)| n.total() as usize))
        .max()
        .unwrap_or(0)
}

fn cmd_concurrence(args: &ConcurrenceArgs) -> Result<()> {
    let src = &args.source;
    if let Some(n) = &src.n {
        return emit(&concurrence_summary(n)?);
    }
    if let Some(path) = &src.state {
        let psi = PureState::from_json(&read_input(path)?)?;
        let k = max_photons(std::iter::once(&psi));
        let (c_k, c_s) = state_measures(k, |ms| psi.concurrence(ms))?;
        return emit(&json!({ "kind": "pure", "c_k": c_k, "c_s": c_s }));
    }
    if let Some(path) = &src.mixed {
        let rho = MixedStateDecomposition::from_json(&read_input(path)?)?;
        let k = max_photons(rho.components().iter().map(|(_, s)| s));
        let (c_k, c_s) = state_measures(k, |ms| concurrence_mixed(&rho, ms))?;
        return emit(&json!({
            "kind": "mixed",
            "bound": "decomposition_relative",
            "c_k": c_k,
            "c_s": c_s,
        }));
    }
    if let Some(path) = &src.thermal {
        let spec: ThermalSpec = serde_json::from_str(&read_input(path)?)?;
        let c_s = thermal_concurrence(&spec, Measure::Sum, args.residual_tol)?;
        let c_k = (1..=args.max_k)
            .map(|k| thermal_concurrence(&spec, Measure::K(k), args.residual_tol).map(|r| r.value))
            .collect::<Result<Vec<_>>>()?;
        return emit(&json!({
            "kind": "thermal",
            "c_k": c_k,
            "c_s": c_s.value,
            "captured_mass": c_s.captured_mass,
            "residual": c_s.residual,
        }));
    }
    Err(Error::Parse("no state given".into()))
}

fn cmd_estimate(args: &EstimateArgs) -> Result<()> {
    let a = load_matrix(&args.matrix)?;
    let (n, m) = args.occ.resolve()?;
    let cfg = EstimatorConfig {
        samples: args.samples,
        seed: args.seed,
        batch: args.batch,
        threads: args.threads.max(1),
    };
    let report = match args.method {
        EstimatorKind::Kan => estimate_permanent_kan(&a, &n, &m, &cfg)?,
        EstimatorKind::Gurvits => estimate_permanent_gurvits(&build_submatrix(&a, &n, &m)?, &cfg)?,
    };
    emit(&EstimatorJson::from(&report))
}

#[derive(Serialize)]
struct RuntimeRow {
    n: String,
    m: String,
    #[serde(flatten)]
    estimate: RuntimeEstimate,
}

fn cmd_runtime(args: &RuntimeArgs) -> Result<()> {
    let row = RuntimeRow {
        n: args.n.to_string(),
        m: args.m.to_string(),
        estimate: runtime_estimate(&args.n, &args.m)?,
    };
    let e = &row.estimate;
    let cells = [
        row.n.clone(),
        row.m.clone(),
        e.t_forward.to_string(),
        e.t_backward.to_string(),
        e.t_min.to_string(),
        e.concurrence_form.to_string(),
        e.side.to_string(),
    ];
    const HEADER: [&str; 7] = [
        "n",
        "m",
        "t_forward",
        "t_backward",
        "t_min",
        "concurrence_form",
        "side",
    ];
    match args.format {
        TableFormat::Json => emit(&row),
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            let io_err = |e: csv::Error| Error::Io(io::Error::other(e));
            w.write_record(HEADER).map_err(io_err)?;
            w.write_record(&cells).map_err(io_err)?;
            w.flush()?;
            Ok(())
        }
        TableFormat::Table => {
            let widths: Vec<usize> = HEADER
                .iter()
                .zip(&cells)
                .map(|(h, c)| h.len().max(c.len()))
                .collect();
            let line = |items: &[String]| {
                items
                    .iter()
                    .zip(&widths)
                    .map(|(s, w)| format!("{s:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            let header: Vec<String> = HEADER.iter().map(|s| s.to_string()).collect();
            let mut out = io::stdout().lock();
            writeln!(out, "{}", line(&header))?;
            writeln!(out, "{}", line(&cells))?;
            Ok(())
        }
    }
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let spec = SweepSpec::from_json(&read_input(&args.spec)?)?;
    let records = run_sweep(&spec, &args.par.config())?;
    let sink: Box<dyn Write> = match &args.output {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    };
    match args.out {
        LedgerFormat::Csv => write_csv(&records, sink),
        LedgerFormat::Json => write_json(&records, sink),
    }
}

fn cmd_haar(args: &HaarArgs) -> Result<()> {
    let a = match args.kind {
        MatrixKind::Haar => haar_random_unitary(args.dim, args.seed)?,
        MatrixKind::Gaussian => gaussian_random_matrix(args.dim, args.seed)?,
    };
    let text = serde_json::to_string(&a)?;
    match &args.output {
        Some(p) => fs::write(p, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Perm(a) => cmd_perm(a),
        Command::Amplitude(a) => cmd_amplitude(a),
        Command::Concurrence(a) => cmd_concurrence(a),
        Command::Estimate(a) => cmd_estimate(a),
        Command::Runtime(a) => cmd_runtime(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Haar(a) => cmd_haar(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = e.exit_code();
            let body = json!({ "error": e.kind(), "message": e.to_string(), "exit_code": code });
            eprintln!("{body}");
            ExitCode::from(code as u8)
        }
    }
}
