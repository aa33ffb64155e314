//! `qgeom`: distances, fidelities, orbit extremes, discriminability and
//! verification ensembles for density matrices, with deterministic seeding
//! and machine-readable reports.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qgeom_core::json::{spectrum_to_value, to_string_sig17};
use qgeom_core::{
    bhattacharyya, can_discriminate, d_bures, d_hs, fidelity, fuchs_vdg_check, haar_unitary,
    orbit_extremes, orthogonal_supports, random_density, root_fidelity, run_verify, split_seed,
    tol, validate_state, ComplexMatrix, DensityMatrix, Error as CoreError, MetricKind, Spectrum,
    VerifyConfig, VerifySummary,
};

#[derive(Parser)]
#[command(
    name = "qgeom",
    version,
    about = "Distances, unitary-orbit extremes and deterministic discrimination on density matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for every stochastic operation; identical seeds give
    /// byte-identical output
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Sample budget for ensembles and oracle refinement
    #[arg(long, global = true, default_value_t = 1000)]
    samples: usize,

    /// Dimensions for `verify`, as a range "2-6" or a list "2,3,4"
    #[arg(long, global = true, default_value = "2-6")]
    dims: String,

    /// Output format; `csv` is only meaningful for `verify`
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Output file (stdout when absent); `sample` treats it as a directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Named tolerance override, `--tol overlap=1e-6` or `--tol.overlap 1e-6`
    #[arg(long = "tol", global = true, value_parser = parse_tolerance)]
    tolerances: Vec<(String, f64)>,
}

#[derive(Subcommand)]
enum Command {
    /// All distances, fidelities and their relations for two states
    Dist { state1: PathBuf, state2: PathBuf },
    /// Closed-form orbit bounds for two spectra, verified by brute force
    Orbit {
        spectrum1: PathBuf,
        spectrum2: PathBuf,
        #[arg(value_parser = parse_metric)]
        metric: MetricKind,
    },
    /// Deterministic discriminability of a set of states (exit 1 = no)
    Discriminate { states: PathBuf },
    /// Run every property ensemble and report per-property results
    Verify,
    /// Write reproducible random states, unitaries or spectra
    Sample {
        #[arg(long)]
        dim: usize,
        /// Rank of sampled states; defaults to full rank
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, value_enum, default_value_t = SampleKind::State)]
        kind: SampleKind,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SampleKind {
    State,
    Unitary,
    Spectrum,
}

impl SampleKind {
    fn stem(self) -> &'static str {
        match self {
            SampleKind::State => "state",
            SampleKind::Unitary => "unitary",
            SampleKind::Spectrum => "spectrum",
        }
    }
}

const KNOWN_TOLERANCES: [&str; 1] = ["overlap"];

fn parse_tolerance(raw: &str) -> Result<(String, f64), String> {
    let (name, value) = raw
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got '{}'", raw))?;
    if !KNOWN_TOLERANCES.contains(&name) {
        return Err(format!(
            "unknown tolerance '{}'; known: {}",
            name,
            KNOWN_TOLERANCES.join(", ")
        ));
    }
    let value: f64 = value
        .parse()
        .map_err(|e| format!("bad value for tolerance '{}': {}", name, e))?;
    if !value.is_finite() || value <= 0.0 {
        return Err(format!("tolerance '{}' must be positive", name));
    }
    Ok((name.to_string(), value))
}

fn parse_metric(raw: &str) -> Result<MetricKind, String> {
    MetricKind::from_str(raw)
}

/// Exit codes: 0 success/affirmative, 1 negative-but-valid, 2 parse or I/O,
/// 3 invalid state, 4 dimension mismatch, 5 dimension/set too large.
enum CliError {
    Parse(String),
    Core {
        context: Option<String>,
        source: CoreError,
    },
    Io(String),
}

impl CliError {
    fn with_context(self, context: String) -> CliError {
        match self {
            CliError::Core { source, .. } => CliError::Core {
                context: Some(context),
                source,
            },
            other => other,
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Core { source: err, .. } => match err {
                CoreError::DimensionMismatch { .. } => 4,
                CoreError::DimensionTooLarge { .. } | CoreError::SetTooLarge { .. } => 5,
                CoreError::NotHermitian { .. }
                | CoreError::NotPsd { .. }
                | CoreError::TraceNotOne { .. }
                | CoreError::NotUnitary { .. }
                | CoreError::NonFiniteEntry { .. }
                | CoreError::NotSquare { .. }
                | CoreError::InvalidSpectrum { .. }
                | CoreError::InvalidState { .. }
                | CoreError::InvalidPovm { .. }
                | CoreError::InvalidPermutation
                | CoreError::InvalidDimension { .. }
                | CoreError::EmptySet
                | CoreError::NotDiscriminable => 3,
                CoreError::NoConvergence
                | CoreError::InvalidExponent { .. }
                | CoreError::IndexOutOfRange { .. }
                | CoreError::UnsupportedMetric { .. }
                | CoreError::ReportInvariantViolated { .. } => 2,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Parse(m) | CliError::Io(m) => m.clone(),
            CliError::Core {
                context: Some(ctx),
                source,
            } => format!("{}: {}", ctx, source),
            CliError::Core {
                context: None,
                source,
            } => source.to_string(),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(source: CoreError) -> Self {
        CliError::Core {
            context: None,
            source,
        }
    }
}

fn main() -> ExitCode {
    let args = rewrite_tol_args(std::env::args_os());
    let cli = Cli::parse_from(args);
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

/// Accept the `--tol.<name> <value>` and `--tol.<name>=<value>` spellings by
/// rewriting them to `--tol <name>=<value>` before clap sees them.
fn rewrite_tol_args(args: impl IntoIterator<Item = OsString>) -> Vec<OsString> {
    let mut out = Vec::new();
    let mut pending: Option<String> = None;
    for arg in args {
        let text = arg.to_string_lossy().into_owned();
        if let Some(name) = pending.take() {
            out.push(OsString::from("--tol"));
            out.push(OsString::from(format!("{}={}", name, text)));
            continue;
        }
        if let Some(rest) = text.strip_prefix("--tol.") {
            if rest.contains('=') {
                out.push(OsString::from("--tol"));
                out.push(OsString::from(rest.to_string()));
            } else {
                pending = Some(rest.to_string());
            }
            continue;
        }
        out.push(arg);
    }
    if let Some(name) = pending {
        // no value followed; let clap produce the usage error
        out.push(OsString::from("--tol"));
        out.push(OsString::from(name));
    }
    out
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    if cli.samples == 0 {
        return Err(CliError::Parse("--samples must be at least 1".into()));
    }
    let tolerances: BTreeMap<String, f64> = cli.tolerances.iter().cloned().collect();
    let overlap_tol = tolerances.get("overlap").copied().unwrap_or(tol::OVERLAP);

    match &cli.command {
        Command::Dist { state1, state2 } => cmd_dist(cli, state1, state2, overlap_tol),
        Command::Orbit {
            spectrum1,
            spectrum2,
            metric,
        } => cmd_orbit(cli, spectrum1, spectrum2, *metric),
        Command::Discriminate { states } => cmd_discriminate(cli, states, overlap_tol),
        Command::Verify => cmd_verify(cli, tolerances),
        Command::Sample {
            dim,
            rank,
            count,
            kind,
        } => cmd_sample(cli, *dim, *rank, *count, *kind),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {}", path.display(), e)))
}

fn load_state(path: &Path) -> Result<DensityMatrix, CliError> {
    let text = read_file(path)?;
    let matrix: ComplexMatrix = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {}", path.display(), e)))?;
    Ok(validate_state(&matrix)?)
}

fn load_spectrum(path: &Path) -> Result<Spectrum, CliError> {
    #[derive(serde::Deserialize)]
    struct SpectrumFile {
        p: Vec<f64>,
    }
    let text = read_file(path)?;
    let raw: SpectrumFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {}", path.display(), e)))?;
    Ok(Spectrum::new(raw.p)?)
}

fn emit(cli: &Cli, content: String) -> Result<(), CliError> {
    let content = if content.ends_with('\n') {
        content
    } else {
        content + "\n"
    };
    match &cli.out {
        None => {
            print!("{}", content);
            Ok(())
        }
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::Io(format!("cannot write {}: {}", path.display(), e))),
    }
}

fn emit_json_or_pretty<T: Serialize>(
    cli: &Cli,
    value: &T,
    pretty: impl FnOnce(&T) -> String,
) -> Result<(), CliError> {
    match cli.format {
        Format::Json => emit(cli, to_string_sig17(value)?),
        Format::Pretty => emit(cli, pretty(value)),
        Format::Csv => Err(CliError::Parse(
            "csv output is only available for the verify command".into(),
        )),
    }
}

#[derive(Serialize)]
struct FvdgJson {
    lower: f64,
    d_trace: f64,
    upper: f64,
}

#[derive(Serialize)]
struct DistReport {
    dim: usize,
    d_hs: f64,
    d_trace: f64,
    d_bures: f64,
    fidelity: f64,
    root_fidelity: f64,
    /// Bhattacharyya coefficient of the two spectra, both taken ascending.
    bhattacharyya: f64,
    fuchs_vdg: FvdgJson,
    orthogonal_supports: bool,
}

fn cmd_dist(cli: &Cli, path1: &Path, path2: &Path, overlap_tol: f64) -> Result<u8, CliError> {
    let rho1 = load_state(path1)?;
    let rho2 = load_state(path2)?;
    let (lower, dtr, upper) = fuchs_vdg_check(&rho1, &rho2)?;
    let report = DistReport {
        dim: rho1.dim(),
        d_hs: d_hs(&rho1, &rho2)?,
        d_trace: dtr,
        d_bures: d_bures(&rho1, &rho2)?,
        fidelity: fidelity(&rho1, &rho2)?,
        root_fidelity: root_fidelity(&rho1, &rho2)?,
        bhattacharyya: bhattacharyya(rho1.spectrum(), rho2.spectrum())?,
        fuchs_vdg: FvdgJson {
            lower,
            d_trace: dtr,
            upper,
        },
        orthogonal_supports: orthogonal_supports(&rho1, &rho2, overlap_tol)?,
    };
    emit_json_or_pretty(cli, &report, |r| {
        let mut s = String::new();
        let _ = writeln!(s, "dim                  {}", r.dim);
        let _ = writeln!(s, "d_hs                 {:.12}", r.d_hs);
        let _ = writeln!(s, "d_trace              {:.12}", r.d_trace);
        let _ = writeln!(s, "d_bures              {:.12}", r.d_bures);
        let _ = writeln!(s, "fidelity             {:.12}", r.fidelity);
        let _ = writeln!(s, "root_fidelity        {:.12}", r.root_fidelity);
        let _ = writeln!(s, "bhattacharyya        {:.12}", r.bhattacharyya);
        let _ = writeln!(
            s,
            "fuchs_vdg            {:.12} <= {:.12} <= {:.12}",
            r.fuchs_vdg.lower, r.fuchs_vdg.d_trace, r.fuchs_vdg.upper
        );
        let _ = writeln!(s, "orthogonal_supports  {}", r.orthogonal_supports);
        s
    })?;
    Ok(0)
}

fn cmd_orbit(cli: &Cli, path1: &Path, path2: &Path, metric: MetricKind) -> Result<u8, CliError> {
    let p = load_spectrum(path1)?;
    let q = load_spectrum(path2)?;
    let report = orbit_extremes(&p, &q, metric, cli.samples, cli.seed)?;
    emit_json_or_pretty(cli, &report, |r| {
        let mut s = String::new();
        let _ = writeln!(s, "metric        {}", r.metric);
        let _ = writeln!(s, "lower         {:.12}", r.lower);
        let _ = writeln!(s, "oracle_min    {:.12}", r.oracle_min);
        let _ = writeln!(s, "oracle_max    {:.12}", r.oracle_max);
        let _ = writeln!(s, "upper         {:.12}", r.upper);
        let _ = writeln!(s, "argmin_perm   {:?}", r.argmin_permutation.mapping());
        let _ = writeln!(s, "argmax_perm   {:?}", r.argmax_permutation.mapping());
        let _ = writeln!(s, "samples       {}", r.samples);
        let _ = writeln!(s, "seed          {}", r.seed);
        s
    })?;
    Ok(0)
}

fn cmd_discriminate(cli: &Cli, path: &Path, overlap_tol: f64) -> Result<u8, CliError> {
    let text = read_file(path)?;
    let matrices: Vec<ComplexMatrix> = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {}", path.display(), e)))?;
    let mut states = Vec::with_capacity(matrices.len());
    for (k, m) in matrices.iter().enumerate() {
        states.push(validate_state(m).map_err(|e| {
            CliError::from(e).with_context(format!("state {} in {}", k, path.display()))
        })?);
    }
    let report = can_discriminate(&states, overlap_tol)?;
    let discriminable = report.discriminable;
    emit_json_or_pretty(cli, &report, |r| {
        let mut s = String::new();
        let _ = writeln!(s, "discriminable         {}", r.discriminable);
        let _ = writeln!(s, "dim                   {}", r.dim);
        let _ = writeln!(s, "rank_sum              {}", r.rank_sum);
        let _ = writeln!(s, "max_pairwise_overlap  {:.3e}", r.max_pairwise_overlap);
        let _ = writeln!(
            s,
            "povm                  {}",
            match &r.povm {
                Some(p) => format!("{} elements", p.len()),
                None => "none".to_string(),
            }
        );
        s
    })?;
    Ok(if discriminable { 0 } else { 1 })
}

fn parse_dims(raw: &str) -> Result<Vec<usize>, CliError> {
    let parse_one = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|e| CliError::Parse(format!("bad dimension '{}': {}", s, e)))
    };
    let dims: Vec<usize> = if let Some((lo, hi)) = raw.split_once('-') {
        let lo = parse_one(lo)?;
        let hi = parse_one(hi)?;
        if lo > hi {
            return Err(CliError::Parse(format!("empty dimension range '{}'", raw)));
        }
        (lo..=hi).collect()
    } else {
        raw.split(',').map(parse_one).collect::<Result<_, _>>()?
    };
    if dims.is_empty() || dims.iter().any(|&d| d < 1) {
        return Err(CliError::Parse(format!("bad dimension list '{}'", raw)));
    }
    Ok(dims)
}

fn cmd_verify(cli: &Cli, tolerances: BTreeMap<String, f64>) -> Result<u8, CliError> {
    let cfg = VerifyConfig {
        dims: parse_dims(&cli.dims)?,
        samples: cli.samples,
        seed: cli.seed,
        tolerances,
    };
    let summary = run_verify(&cfg)?;
    let all_passed = summary.all_passed();
    match cli.format {
        Format::Json => emit(cli, to_string_sig17(&summary)?)?,
        Format::Csv => emit(cli, summary.to_csv())?,
        Format::Pretty => emit(cli, pretty_summary(&summary))?,
    }
    Ok(if all_passed { 0 } else { 1 })
}

fn pretty_summary(summary: &VerifySummary) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<34} {:>3} {:>7} {:>7} {:>8} {:>12}",
        "property", "dim", "samples", "passes", "failures", "worst"
    );
    for o in &summary.outcomes {
        let _ = writeln!(
            s,
            "{:<34} {:>3} {:>7} {:>7} {:>8} {:>12.3e}",
            o.property, o.dim, o.samples, o.passes, o.failures, o.worst_residual
        );
        if let Some(f) = &o.failure {
            let _ = writeln!(s, "    first failure: seed {} - {}", f.replay_seed, f.detail);
        }
    }
    let _ = writeln!(
        s,
        "{}",
        if summary.all_passed() {
            "all properties passed"
        } else {
            "PROPERTY VIOLATIONS FOUND"
        }
    );
    s
}

fn cmd_sample(
    cli: &Cli,
    dim: usize,
    rank: Option<usize>,
    count: usize,
    kind: SampleKind,
) -> Result<u8, CliError> {
    if dim < 1 {
        return Err(CliError::Parse("--dim must be at least 1".into()));
    }
    let rank = rank.unwrap_or(dim);
    if rank < 1 || rank > dim {
        return Err(CliError::Parse(format!(
            "--rank must lie in 1..={}, got {}",
            dim, rank
        )));
    }
    if count < 1 {
        return Err(CliError::Parse("--count must be at least 1".into()));
    }
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {}", dir.display(), e)))?;

    for index in 0..count {
        let item_seed = split_seed(cli.seed, index as u64);
        let content = match kind {
            SampleKind::State => to_string_sig17(&random_density(dim, rank, item_seed))?,
            SampleKind::Unitary => to_string_sig17(haar_unitary(dim, item_seed).matrix())?,
            SampleKind::Spectrum => {
                let state = validate_state(&random_density(dim, rank, item_seed))?;
                to_string_sig17(&spectrum_to_value(state.spectrum()))?
            }
        };
        let path = dir.join(format!("{}_{:03}.json", kind.stem(), index));
        fs::write(&path, content + "\n")
            .map_err(|e| CliError::Io(format!("cannot write {}: {}", path.display(), e)))?;
        println!("{}", path.display());
    }
    Ok(0)
}
