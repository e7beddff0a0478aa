//! Command-line front end.
//!
//! Every subcommand writes its primary output (CSV or JSON) to `--output`
//! or standard output; secondary diagnostics go to `--summary` when given,
//! otherwise to standard error. All randomness derives from `--seed`, and
//! results do not depend on `--threads`.
//!
//! JSON objects keep a fixed key order; their shapes are documented by the
//! schema files under `schemas/` in the crate root. CSV files have a header
//! row and reals printed with 17 significant digits.
//!
//! Exit codes: `0` success, `2` bad arguments, `3` data errors (unreadable
//! or malformed design files, failed verification), `1` internal errors.

mod funcspec;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub use funcspec::{parse_function, read_values, DEFAULT_SOBOLEV_MAX_DEGREE};

use crate::approx::{hyperinterpolate, l2_error_coeffs, residual_at_nodes, DiscreteFrame, Solver};
use crate::designs::{resolve_design, strength_defects, verify_design, SphericalDesign, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::experiments::{
    format_real, regression_from_mean, replicate, sample_moments, to_regression_replication,
    to_white_noise_replication, white_noise_replication, write_replications_csv, Moments,
};
use crate::harmonics::dim_poly_space;
use crate::lecam::{besov_bound, besov_rate_study, besov_system, sobolev_bound, sobolev_rate_study, RateRow, RateStudy};
use crate::needlets::{
    build_filter, empirical_needlet_approx, needlet_coeffs_from_harmonics, needlet_reconstruct, NeedletSystem,
};
use crate::rng::substream;
use crate::spaces::SmoothnessSpec;
use crate::sphere::{sample_uniform, SpherePoint};

/// Exit code for rejected arguments.
pub const EXIT_USAGE: i32 = 2;
/// Exit code for malformed data or failed verification.
pub const EXIT_DATA: i32 = 3;
/// Exit code for internal failures.
pub const EXIT_INTERNAL: i32 = 1;

/// Label attached to every supremum computed over a finite family.
pub const SUPREMUM_NOTE: &str = "empirical supremum (lower approximation)";

#[derive(Debug, Parser)]
#[command(name = "sphere-lecam", version, about = "Regression on spherical designs and its white-noise equivalence")]
pub struct Cli {
    /// Master seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Primary output file (default: standard output).
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Secondary JSON output file (default: standard error).
    #[arg(long, global = true)]
    pub summary: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the design property of a point set up to a strength.
    VerifyDesign(VerifyArgs),
    /// Size and strength of a named or stored design.
    DesignInfo(InfoArgs),
    /// Hyperinterpolation of values or a function on a design.
    Fit(FitArgs),
    /// Needlet decomposition, reconstruction, or empirical approximation.
    Needlet(NeedletArgs),
    /// Draw samples from the regression or white-noise model.
    Simulate(SimulateArgs),
    /// Push samples through one of the transfer kernels and check moments.
    Transfer(TransferArgs),
    /// Δ₁/Δ₂ bounds on one design.
    Bound(BoundArgs),
    /// Bounds over several designs with a fitted log-log slope.
    RateStudy(RateStudyArgs),
    /// Residuals of the needlet filter identities.
    FilterCheck(FilterCheckArgs),
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    /// Built-in name, bundled file name (e.g. sf020.00222), or path.
    #[arg(long)]
    pub design: String,
    /// Sphere dimension d (points live in R^{d+1}).
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Strength, when it cannot be read from the name.
    #[arg(long)]
    pub strength: Option<usize>,
    /// Verification tolerance on the design defects.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

impl DesignArgs {
    fn load(&self) -> Result<SphericalDesign> {
        check_tol(self.tol)?;
        resolve_design(&self.design, self.dim, self.strength)?.require_verified(self.tol)
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Design file, bundled name, or built-in name.
    #[arg(long)]
    pub file: String,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long)]
    pub strength: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "source")]
pub struct InfoSource {
    /// Built-in or bundled design name.
    #[arg(long)]
    pub name: Option<String>,
    /// Design file.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InfoArgs {
    #[command(flatten)]
    pub source: InfoSource,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Claimed strength, when the name does not carry it.
    #[arg(long)]
    pub strength: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "data")]
pub struct DataSource {
    /// One value per design node.
    #[arg(long)]
    pub values: Option<PathBuf>,
    /// Function spec: harmonic:ℓ,m | coeffs:PATH | sobolev:s,R,seed[,Lmax] | extremal:L,s,R.
    #[arg(long)]
    pub function: Option<String>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub design: DesignArgs,
    /// Fit degree L.
    #[arg(long)]
    pub degree: usize,
    #[command(flatten)]
    pub data: DataSource,
    /// Use the least-squares solver instead of the discrete inner product.
    #[arg(long)]
    pub least_squares: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NeedletAction {
    Decompose,
    Reconstruct,
    Empirical,
}

#[derive(Debug, Args)]
pub struct NeedletArgs {
    /// Design for the empirical action.
    #[arg(long)]
    pub design: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long)]
    pub strength: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Finest level J.
    #[arg(long)]
    pub levels: usize,
    #[arg(long, value_enum)]
    pub action: NeedletAction,
    #[arg(long)]
    pub function: String,
    /// Number of random evaluation points for the value grid.
    #[arg(long, default_value_t = 50)]
    pub probe: usize,
    /// Observation noise for the empirical action.
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Regression,
    Whitenoise,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    #[command(flatten)]
    pub design: DesignArgs,
    #[arg(long)]
    pub function: String,
    #[arg(long)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1)]
    pub replications: usize,
    /// White-noise truncation T (default: dim P_t, at least the length of θ).
    #[arg(long)]
    pub truncation: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    ToWn,
    ToReg,
}

#[derive(Debug, Args)]
pub struct TransferArgs {
    #[arg(long, value_enum)]
    pub direction: Direction,
    #[command(flatten)]
    pub design: DesignArgs,
    /// Fit degree L (default ⌊t/2⌋).
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long)]
    pub function: String,
    #[arg(long)]
    pub sigma: f64,
    #[arg(long, default_value_t = 10_000)]
    pub replications: usize,
    /// Sequence truncation T (default dim P_t).
    #[arg(long)]
    pub truncation: Option<usize>,
    /// Coordinates used for the covariance check.
    #[arg(long, default_value_t = 4)]
    pub probe: usize,
    /// Also write every transformed replication to this CSV file.
    #[arg(long)]
    pub samples: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionClass {
    Sobolev,
    Besov,
}

#[derive(Debug, Args)]
pub struct ClassArgs {
    #[arg(long, value_enum)]
    pub class: FunctionClass,
    /// Smoothness s.
    #[arg(long)]
    pub s: f64,
    #[arg(long, default_value_t = 2.0)]
    pub r: f64,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Random family members besides the witnesses.
    #[arg(long, default_value_t = 20)]
    pub family_size: usize,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub class: ClassArgs,
    #[command(flatten)]
    pub design: DesignArgs,
    /// Needlet level J for the Besov class (default: largest with 3·2^J ≤ t).
    #[arg(long)]
    pub levels: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RateStudyArgs {
    #[command(flatten)]
    pub class: ClassArgs,
    /// JSON manifest listing the designs.
    #[arg(long)]
    pub designs: PathBuf,
    /// Also write the table as CSV.
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct FilterCheckArgs {
    /// Points of the log grid on [1/8, 1024].
    #[arg(long, default_value_t = 10_000)]
    pub grid: usize,
}

/// Design list for `rate-study`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default = "default_dim")]
    pub dim: usize,
    pub designs: Vec<ManifestEntry>,
}

fn default_dim() -> usize {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    /// Built-in name, bundled name, or a path relative to the manifest.
    pub design: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strength: Option<usize>,
    /// Needlet level for Besov studies (default: largest with 3·2^J ≤ t).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
}

impl Manifest {
    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    design: String,
    dim: usize,
    points: usize,
    strength: usize,
    tol: f64,
    verified: bool,
    max_defect: f64,
    /// Lowest degree whose defect exceeds the tolerance.
    offending_degree: Option<usize>,
    per_degree: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct InfoReport {
    design: String,
    dim: usize,
    points: usize,
    claimed_strength: usize,
    verified_strength: usize,
    tol: f64,
    max_defect: f64,
}

#[derive(Debug, Serialize)]
struct FitSummary {
    design: String,
    n: usize,
    degree: usize,
    m: usize,
    solver: &'static str,
    gram_deviation: f64,
    residual: f64,
    l2_error: Option<f64>,
}

#[derive(Debug, Serialize)]
struct TransferReport {
    direction: &'static str,
    design: String,
    n: usize,
    m: usize,
    truncation: usize,
    replications: usize,
    sigma: f64,
    noise: f64,
    probe: usize,
    max_mean_deviation: f64,
    mean_tolerance: f64,
    max_covariance_deviation: f64,
    covariance_tolerance: f64,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct BoundReport {
    class: FunctionClass,
    design: String,
    s: f64,
    r: f64,
    q: f64,
    radius: f64,
    sigma: f64,
    family_size: usize,
    supremum: &'static str,
    #[serde(flatten)]
    row: RateRow,
}

#[derive(Debug, Serialize)]
struct RateReport {
    class: FunctionClass,
    s: f64,
    r: f64,
    q: f64,
    radius: f64,
    sigma: f64,
    family_size: usize,
    supremum: &'static str,
    designs: Vec<String>,
    #[serde(flatten)]
    study: RateStudy,
}

#[derive(Debug, Serialize)]
struct FilterReport {
    grid: usize,
    support_residual: f64,
    quadratic_residual: f64,
    partition_residual: f64,
    max_residual: f64,
}

/// Parses `argv` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match catch_unwind(AssertUnwindSafe(|| execute(&cli))) {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
        Err(_) => {
            eprintln!("error: internal failure");
            EXIT_INTERNAL
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::NotUnitNorm { .. }
        | Error::UnknownDesign(_)
        | Error::NotADesign { .. }
        | Error::GramInvariant { .. }
        | Error::Fetch(_)
        | Error::Io(_)
        | Error::Csv(_)
        | Error::Json(_) => EXIT_DATA,
        _ => EXIT_USAGE,
    }
}

/// Runs a parsed command inside a pool of the requested size.
pub fn execute(cli: &Cli) -> Result<i32> {
    match cli.threads {
        Some(0) => Err(Error::InvalidArgument("--threads must be positive".into())),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot start {k} threads: {e}")))?
            .install(|| dispatch(cli)),
        None => dispatch(cli),
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let out = Output { primary: cli.output.as_deref(), summary: cli.summary.as_deref() };
    match &cli.command {
        Command::VerifyDesign(a) => verify_cmd(a, &out),
        Command::DesignInfo(a) => info_cmd(a, &out),
        Command::Fit(a) => fit_cmd(a, cli.seed, &out),
        Command::Needlet(a) => needlet_cmd(a, cli.seed, &out),
        Command::Simulate(a) => simulate_cmd(a, cli.seed, &out),
        Command::Transfer(a) => transfer_cmd(a, cli.seed, &out),
        Command::Bound(a) => bound_cmd(a, cli.seed, &out),
        Command::RateStudy(a) => rate_cmd(a, cli.seed, &out),
        Command::FilterCheck(a) => filter_cmd(a, &out),
    }
}

struct Output<'a> {
    primary: Option<&'a Path>,
    summary: Option<&'a Path>,
}

impl Output<'_> {
    fn write_primary(&self, bytes: &[u8]) -> Result<()> {
        match self.primary {
            Some(p) => std::fs::write(p, bytes)?,
            None => std::io::stdout().lock().write_all(bytes)?,
        }
        Ok(())
    }

    fn json<T: Serialize>(&self, value: &T) -> Result<()> {
        self.write_primary(&json_bytes(value)?)
    }

    fn summary<T: Serialize>(&self, value: &T) -> Result<()> {
        let bytes = json_bytes(value)?;
        match self.summary {
            Some(p) => std::fs::write(p, bytes)?,
            None => std::io::stderr().lock().write_all(&bytes)?,
        }
        Ok(())
    }
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidArgument(format!("--tol must be positive, got {tol}")));
    }
    Ok(())
}

fn verify_cmd(a: &VerifyArgs, out: &Output) -> Result<i32> {
    check_tol(a.tol)?;
    let design = resolve_design(&a.file, a.dim, Some(a.strength))?;
    let check = verify_design(design.points(), a.strength, a.tol);
    let offending_degree = check.per_degree.iter().position(|&v| v > a.tol).map(|i| i + 1);
    out.json(&VerifyReport {
        design: a.file.clone(),
        dim: a.dim,
        points: design.len(),
        strength: a.strength,
        tol: a.tol,
        verified: check.verified,
        max_defect: check.max_defect,
        offending_degree,
        per_degree: check.per_degree,
    })?;
    Ok(if check.verified { 0 } else { EXIT_DATA })
}

fn info_cmd(a: &InfoArgs, out: &Output) -> Result<i32> {
    check_tol(a.tol)?;
    let spec = match (&a.source.name, &a.source.file) {
        (Some(name), _) => name.clone(),
        (None, Some(path)) => path.display().to_string(),
        (None, None) => return Err(Error::InvalidArgument("give --name or --file".into())),
    };
    let design = resolve_design(&spec, a.dim, a.strength)?;
    let claimed = design.strength();
    // defects one degree past the claim show whether the claim is sharp
    let defects = strength_defects(design.points(), claimed + 1);
    let verified_strength = defects.iter().position(|&v| v > a.tol).unwrap_or(defects.len());
    let max_defect = defects[..claimed].iter().copied().fold(0.0, f64::max);
    out.json(&InfoReport {
        design: spec,
        dim: a.dim,
        points: design.len(),
        claimed_strength: claimed,
        verified_strength,
        tol: a.tol,
        max_defect,
    })?;
    Ok(if verified_strength >= claimed { 0 } else { EXIT_DATA })
}

fn fit_cmd(a: &FitArgs, seed: u64, out: &Output) -> Result<i32> {
    let design = a.design.load()?;
    let frame = if a.least_squares {
        DiscreteFrame::least_squares(design, a.degree)?
    } else {
        DiscreteFrame::new(design, a.degree)?
    };
    let d = frame.dim();
    let (values, truth) = match (&a.data.values, &a.data.function) {
        (Some(path), _) => (read_values(path)?, None),
        (None, Some(spec)) => {
            let f = parse_function(spec, d, seed)?;
            (frame.points().values(&f), Some(f))
        }
        (None, None) => return Err(Error::InvalidArgument("give --values or --function".into())),
    };
    if values.len() != frame.n() {
        return Err(Error::LengthMismatch { expected: frame.n(), found: values.len() });
    }
    let c = hyperinterpolate(&frame, &values)?;
    let residual = residual_at_nodes(&frame, &values)?;
    let l2_error = truth.as_ref().map(|f| l2_error_coeffs(&frame, f)).transpose()?;
    let rows = (1..=c.len()).map(|j| {
        let idx = crate::harmonics::enumerate(d, j).expect("flat index within P_L");
        vec![j.to_string(), idx.degree.to_string(), idx.order.to_string(), format_real(c.get(j))]
    });
    out.write_primary(&csv_bytes(&["j", "degree", "order", "coefficient"], rows)?)?;
    out.summary(&FitSummary {
        design: a.design.design.clone(),
        n: frame.n(),
        degree: a.degree,
        m: frame.m(),
        solver: match frame.solver() {
            Solver::DiscreteInner => "discrete-inner",
            Solver::LeastSquares => "least-squares",
        },
        gram_deviation: frame.gram_deviation(),
        residual,
        l2_error,
    })?;
    Ok(0)
}

fn probe_points(d: usize, count: usize, seed: u64) -> Result<Vec<SpherePoint>> {
    use rand::RngCore;
    let point_seed = substream(seed, "cli/probe", 0).next_u64();
    Ok(sample_uniform(d, count, point_seed)?.points().to_vec())
}

fn point_columns(d: usize) -> Vec<String> {
    (0..=d).map(|i| format!("x{i}")).collect()
}

fn needlet_cmd(a: &NeedletArgs, seed: u64, out: &Output) -> Result<i32> {
    let d = a.dim;
    let f = parse_function(&a.function, d, seed)?;
    let h = build_filter();
    match a.action {
        NeedletAction::Decompose => {
            let sys = NeedletSystem::standard(d, a.levels)?;
            let beta = needlet_coeffs_from_harmonics(&f, &sys, &h, a.levels)?;
            let rows = beta
                .levels()
                .iter()
                .enumerate()
                .flat_map(|(j, lvl)| {
                    lvl.iter()
                        .enumerate()
                        .map(move |(k, b)| vec![j.to_string(), k.to_string(), format_real(*b)])
                })
                .collect::<Vec<_>>();
            out.write_primary(&csv_bytes(&["level", "k", "beta"], rows)?)?;
        }
        NeedletAction::Reconstruct => {
            let sys = NeedletSystem::standard(d, a.levels)?;
            let beta = needlet_coeffs_from_harmonics(&f, &sys, &h, a.levels)?;
            let xs = probe_points(d, a.probe, seed)?;
            let values = xs
                .iter()
                .map(|x| Ok((f.evaluate(x)?, needlet_reconstruct(&beta, &sys, &h, a.levels, x)?)))
                .collect::<Result<Vec<_>>>()?;
            value_grid(out, d, &xs, &values, "f_J")?;
        }
        NeedletAction::Empirical => {
            let name = a
                .design
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("--action empirical needs --design".into()))?;
            check_tol(a.tol)?;
            let design = resolve_design(name, d, a.strength)?.require_verified(a.tol)?;
            let mean = design.points().values(&f);
            let z = regression_from_mean(&mean, a.sigma, seed, 0)?.z;
            let xs = probe_points(d, a.probe, seed)?;
            let approx = empirical_needlet_approx(&z, &design, &h, a.levels, &xs)?;
            let values = xs
                .iter()
                .zip(approx)
                .map(|(x, v)| Ok((f.evaluate(x)?, v)))
                .collect::<Result<Vec<_>>>()?;
            value_grid(out, d, &xs, &values, "f_tilde")?;
        }
    }
    Ok(0)
}

fn value_grid(out: &Output, d: usize, xs: &[SpherePoint], values: &[(f64, f64)], name: &str) -> Result<()> {
    let mut header = vec!["i".to_string()];
    header.extend(point_columns(d));
    header.push("f".into());
    header.push(name.into());
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = xs.iter().zip(values).enumerate().map(|(i, (x, (f, v)))| {
        let mut row = vec![i.to_string()];
        row.extend(x.coords().iter().map(|c| format_real(*c)));
        row.push(format_real(*f));
        row.push(format_real(*v));
        row
    });
    out.write_primary(&csv_bytes(&header, rows)?)
}

fn default_truncation(design: &SphericalDesign, theta_len: usize) -> usize {
    dim_poly_space(design.dim(), design.strength()).max(theta_len)
}

fn simulate_cmd(a: &SimulateArgs, seed: u64, out: &Output) -> Result<i32> {
    if a.replications == 0 {
        return Err(Error::InvalidArgument("--replications must be positive".into()));
    }
    let design = a.design.load()?;
    let f = parse_function(&a.function, design.dim(), seed)?;
    let mut bytes = Vec::new();
    match a.model {
        Model::Regression => {
            let mean = design.points().values(&f);
            let rows = replicate(a.replications, |r| Ok(regression_from_mean(&mean, a.sigma, seed, r)?.z))?;
            write_replications_csv(&mut bytes, "z", &rows)?;
        }
        Model::Whitenoise => {
            let t = a.truncation.unwrap_or_else(|| default_truncation(&design, f.len()));
            let rows = replicate(a.replications, |r| {
                Ok(white_noise_replication(&f, a.sigma, design.len(), t, seed, r)?.y)
            })?;
            write_replications_csv(&mut bytes, "y", &rows)?;
        }
    }
    out.write_primary(&bytes)?;
    Ok(0)
}

fn max_deviations(m: &Moments, target_mean: &[f64], variance: f64, probe: usize) -> (f64, f64) {
    let mean_dev = m.mean.iter().zip(target_mean).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let mut cov_dev = 0.0_f64;
    for a in 0..probe {
        for b in 0..probe {
            let target = if a == b { variance } else { 0.0 };
            cov_dev = cov_dev.max((m.covariance[a][b] - target).abs());
        }
    }
    (mean_dev, cov_dev)
}

fn transfer_cmd(a: &TransferArgs, seed: u64, out: &Output) -> Result<i32> {
    if a.replications < 2 {
        return Err(Error::InvalidArgument("--replications must be at least 2".into()));
    }
    if !(a.sigma > 0.0) {
        return Err(Error::InvalidArgument(format!("--sigma must be positive, got {}", a.sigma)));
    }
    let design = a.design.load()?;
    let degree = a.degree.unwrap_or(design.strength() / 2);
    let frame = DiscreteFrame::new(design.clone(), degree)?;
    let (n, m) = (frame.n(), frame.m());
    let f = parse_function(&a.function, design.dim(), seed)?;
    let noise = a.sigma / (n as f64).sqrt();
    let scale = (a.replications as f64).sqrt();
    let (rows, prefix, direction, target, variance) = match a.direction {
        Direction::ToWn => {
            let t = a.truncation.unwrap_or_else(|| default_truncation(&design, m));
            let mean = frame.points().values(&f);
            let rows = replicate(a.replications, |r| {
                let zs = regression_from_mean(&mean, a.sigma, seed, r)?;
                Ok(to_white_noise_replication(&zs, &frame, t, seed, r)?.y)
            })?;
            // E y_j = ⟨f, Y_j⟩_n for j ≤ m, zero beyond
            let mut target = hyperinterpolate(&frame, &mean)?.into_vec();
            target.resize(t, 0.0);
            (rows, "y", "to-wn", target, noise * noise)
        }
        Direction::ToReg => {
            let t = a.truncation.unwrap_or_else(|| default_truncation(&design, f.len()));
            let rows = replicate(a.replications, |r| {
                let obs = white_noise_replication(&f, a.sigma, n, t, seed, r)?;
                Ok(to_regression_replication(&obs, &frame, seed, r)?.z)
            })?;
            // E Z′ = X θ_{1..m}, the degree-L projection at the nodes
            let target = frame.fitted_values(&f.resized(degree))?;
            (rows, "z", "to-reg", target, a.sigma * a.sigma)
        }
    };
    let probe = a.probe.min(rows[0].len());
    let moments = sample_moments(&rows, probe)?;
    let (mean_dev, cov_dev) = max_deviations(&moments, &target, variance, probe);
    let sd = variance.sqrt();
    let mean_tolerance = 4.0 * sd / scale;
    let covariance_tolerance = 5.0 * variance / scale;
    let pass = mean_dev <= mean_tolerance && cov_dev <= covariance_tolerance;
    if let Some(path) = &a.samples {
        crate::experiments::write_replications_csv_file(path, prefix, &rows)?;
    }
    out.json(&TransferReport {
        direction,
        design: a.design.design.clone(),
        n,
        m,
        truncation: rows[0].len(),
        replications: a.replications,
        sigma: a.sigma,
        noise,
        probe,
        max_mean_deviation: mean_dev,
        mean_tolerance,
        max_covariance_deviation: cov_dev,
        covariance_tolerance,
        pass,
    })?;
    Ok(0)
}

fn default_level(design: &SphericalDesign) -> Result<usize> {
    (0..usize::BITS as usize)
        .take_while(|&j| 3usize.checked_shl(j as u32).is_some_and(|v| v <= design.strength()))
        .last()
        .ok_or(Error::InsufficientStrength { required: 3, available: design.strength() })
}

fn bound_cmd(a: &BoundArgs, seed: u64, out: &Output) -> Result<i32> {
    let c = &a.class;
    let design = a.design.load()?;
    let row = match c.class {
        FunctionClass::Sobolev => sobolev_bound(&design, c.s, c.radius, c.sigma, c.family_size, seed)?,
        FunctionClass::Besov => {
            let spec = SmoothnessSpec::new(c.s, c.r, c.q, c.radius, design.dim())?;
            let j = match a.levels {
                Some(j) => j,
                None => default_level(&design)?,
            };
            let system = besov_system(design.dim(), j)?;
            besov_bound(&design, j, &spec, &system, c.sigma, c.family_size, seed)?
        }
    };
    out.json(&BoundReport {
        class: c.class,
        design: a.design.design.clone(),
        s: c.s,
        r: c.r,
        q: c.q,
        radius: c.radius,
        sigma: c.sigma,
        family_size: c.family_size,
        supremum: SUPREMUM_NOTE,
        row,
    })?;
    Ok(0)
}

fn manifest_design(entry: &ManifestEntry, base: &Path, d: usize, tol: f64) -> Result<SphericalDesign> {
    let relative = base.join(&entry.design);
    let spec = if Path::new(&entry.design).is_relative() && relative.exists() {
        relative.display().to_string()
    } else {
        entry.design.clone()
    };
    resolve_design(&spec, d, entry.strength)?.require_verified(tol)
}

fn rate_cmd(a: &RateStudyArgs, seed: u64, out: &Output) -> Result<i32> {
    check_tol(a.tol)?;
    let c = &a.class;
    let manifest = Manifest::read(&a.designs)?;
    let base = a.designs.parent().unwrap_or(Path::new("."));
    let designs = manifest
        .designs
        .iter()
        .map(|e| manifest_design(e, base, manifest.dim, a.tol))
        .collect::<Result<Vec<_>>>()?;
    let study = match c.class {
        FunctionClass::Sobolev => sobolev_rate_study(&designs, c.s, c.radius, c.sigma, c.family_size, seed)?,
        FunctionClass::Besov => {
            let spec = SmoothnessSpec::new(c.s, c.r, c.q, c.radius, manifest.dim)?;
            let pairs = designs
                .into_iter()
                .zip(&manifest.designs)
                .map(|(design, e)| {
                    let j = match e.level {
                        Some(j) => j,
                        None => default_level(&design)?,
                    };
                    Ok((design, j))
                })
                .collect::<Result<Vec<_>>>()?;
            let top = pairs.iter().map(|p| p.1).max().unwrap_or(0);
            let system = besov_system(manifest.dim, top)?;
            besov_rate_study(&pairs, &spec, &system, c.sigma, c.family_size, seed)?
        }
    };
    if let Some(path) = &a.table {
        std::fs::write(path, rate_table(&study.rows)?)?;
    }
    out.json(&RateReport {
        class: c.class,
        s: c.s,
        r: c.r,
        q: c.q,
        radius: c.radius,
        sigma: c.sigma,
        family_size: c.family_size,
        supremum: SUPREMUM_NOTE,
        designs: manifest.designs.iter().map(|e| e.design.clone()).collect(),
        study,
    })?;
    Ok(0)
}

/// CSV rendering of rate-study rows.
pub fn rate_table(rows: &[RateRow]) -> Result<Vec<u8>> {
    let header = [
        "n", "t", "resolution", "sup_residual", "sup_l2", "delta1", "delta2", "total", "pre_phi", "envelope",
    ];
    csv_bytes(
        &header,
        rows.iter().map(|r| {
            vec![
                r.n.to_string(),
                r.t.to_string(),
                r.resolution.to_string(),
                format_real(r.sup_residual),
                format_real(r.sup_l2),
                format_real(r.delta1),
                format_real(r.delta2),
                format_real(r.total),
                format_real(r.pre_phi),
                format_real(r.envelope),
            ]
        }),
    )
}

/// Residuals of the three filter identities on a log grid of `[2⁻³, 2¹⁰]`:
/// the support condition `h = 0` off `(1/2, 2)`, the quadratic identity
/// `h²(t) + h²(2t) = 1` on `[1/2, 1]`, and the partition of unity
/// `Σ_{j≥0} h²(t/2^j) = 1` for `t ≥ 1`.
pub fn filter_residuals(grid: usize) -> Result<(f64, f64, f64)> {
    if grid < 2 {
        return Err(Error::InvalidArgument("--grid must be at least 2".into()));
    }
    let h = build_filter();
    let (lo, hi) = (-3.0_f64, 10.0_f64);
    let (mut support, mut quadratic, mut partition) = (0.0_f64, 0.0_f64, 0.0_f64);
    for i in 0..grid {
        let t = (lo + (hi - lo) * i as f64 / (grid - 1) as f64).exp2();
        if !(t > 0.5 && t < 2.0) {
            support = support.max(h.h(t).abs());
        }
        if (0.5..=1.0).contains(&t) {
            quadratic = quadratic.max((h.h(t).powi(2) + h.h(2.0 * t).powi(2) - 1.0).abs());
        }
        if t >= 1.0 {
            // terms with t/2^j ≤ 1/2 vanish
            let top = t.log2().ceil() as i32 + 1;
            let sum: f64 = (0..=top).map(|j| h.h(t / 2f64.powi(j)).powi(2)).sum();
            partition = partition.max((sum - 1.0).abs());
        }
    }
    Ok((support, quadratic, partition))
}

fn filter_cmd(a: &FilterCheckArgs, out: &Output) -> Result<i32> {
    let (support, quadratic, partition) = filter_residuals(a.grid)?;
    out.json(&FilterReport {
        grid: a.grid,
        support_residual: support,
        quadratic_residual: quadratic,
        partition_residual: partition,
        max_residual: support.max(quadratic).max(partition),
    })?;
    Ok(0)
}
