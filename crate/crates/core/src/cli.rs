//! Command-line front end. Every run reads a manifest (or the equivalent
//! flags), validates it completely, computes, writes its outputs atomically
//! and always leaves a `summary.json` in the output directory.
//!
//! Exit codes: 0 when everything passed, 1 when a check or verification
//! failed (or the computation itself errored), 2 when the input was invalid.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::extremal::{verify_candidate, ExtremalProblem, Profile, ProblemSpec, Side, VerifyOptions};
use crate::grid::Grid;
use crate::identities::{
    check_partial_fraction, hilbert_form, homogeneous_measure_identity, parseval_node_sum, Attested,
    HilbertFormInput, IdentityReport, PartialFraction, MEASURE_TOL, QUADRATIC_TOL,
};
use crate::interp::interpolate_many;
use crate::nodes::{find_nodes, NodeSet};
use crate::sampling::{frame_ratio, reconstruct, FrameReport};
use crate::space::SpaceDescriptor;
use crate::testgen::{make_function, random_recipe, sample_on, BasisFamily, FunctionHandle, GeneratedFunction, RecipeTerm};
use crate::{Complex, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

/// Default parseval tolerance when a check does not set one.
pub const PARSEVAL_TOL: f64 = QUADRATIC_TOL;

#[derive(Parser, Debug)]
#[command(name = "hbspace", version, about = "Interpolation with derivatives in de Branges spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Seed for random recipes and data; overrides the manifest.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true, env = "HBSPACE_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Find interpolation nodes in a window.
    Nodes(ManifestArg),
    /// Evaluate the interpolation series of a generated function on a grid.
    Interp(ManifestArg),
    /// Run a batch of identity checks.
    Identities(ManifestArg),
    /// Frame ratios for sampling with derivatives.
    Frame(ManifestArg),
    /// Reconstruct from node values and derivatives.
    Reconstruct(ManifestArg),
    /// Verify a one-sided extremal candidate.
    Extremal(ExtremalArgs),
    /// Sampling tools.
    Sample {
        #[command(subcommand)]
        action: SampleAction,
    },
}

#[derive(Args, Debug)]
pub struct ManifestArg {
    #[arg(long)]
    pub manifest: PathBuf,
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
pub struct ExtremalArgs {
    #[command(subcommand)]
    pub action: Option<ExtremalAction>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum ExtremalAction {
    Verify {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        candidate: PathBuf,
        #[arg(long, default_value_t = 200.0)]
        window: f64,
        #[arg(long, default_value = "0:50:20001", allow_hyphen_values = true)]
        grid: Grid,
        #[arg(long, default_value = "verification.json")]
        output: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum SampleAction {
    Reconstruct {
        /// Space descriptor as inline JSON or a path to a JSON file.
        #[arg(long)]
        space: String,
        /// Node set JSON as written by `nodes`.
        #[arg(long)]
        nodes: PathBuf,
        /// `{"p": [...], "q": [...]}` with `[re, im]` entries.
        #[arg(long)]
        data: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        grid: Grid,
        #[arg(long, default_value = "reconstruction.csv")]
        output: String,
    },
}

// ------------------------------------------------------------------ manifests

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Nodes,
    Interp,
    Identities,
    Frame,
    Reconstruct,
    Extremal,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub command: CommandKind,
    pub space: SpaceDescriptor,
    #[serde(default)]
    pub parameters: serde_json::Value,
    pub output_path: String,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodesParams {
    pub t_min: f64,
    pub t_max: f64,
}

/// A function from the basis generators, given explicitly or drawn at
/// random from the run seed.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    Recipe {
        recipe: Vec<RecipeTerm>,
        #[serde(default)]
        window: Option<f64>,
    },
    Random {
        families: Vec<BasisFamily>,
        n_terms: usize,
        max_index: i64,
    },
}

impl FunctionSpec {
    fn generated(&self, space: SpaceDescriptor, seed: u64) -> GeneratedFunction {
        match self {
            FunctionSpec::Recipe { recipe, window } => GeneratedFunction {
                space,
                recipe: recipe.clone(),
                window: window.unwrap_or(40.0),
                seed: None,
            },
            FunctionSpec::Random {
                families,
                n_terms,
                max_index,
            } => random_recipe(space, families, *n_terms, *max_index, seed),
        }
    }

    fn validate(&self) -> Result<(), Error> {
        match self {
            FunctionSpec::Recipe { recipe, .. } if recipe.is_empty() => Err(Error::EmptyRecipe),
            FunctionSpec::Random { families, n_terms, .. } if families.is_empty() || *n_terms == 0 => {
                Err(Error::EmptyRecipe)
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterpParams {
    pub function: FunctionSpec,
    /// Node window `[−window, window]`.
    pub window: f64,
    pub grid: Grid,
    /// Imaginary part added to every grid point.
    #[serde(default)]
    pub imag: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentitiesParams {
    pub checks: Vec<IdentityCheck>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityCheck {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(flatten)]
    pub kind: CheckKind,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum CheckKind {
    PartialFraction {
        identity: PartialFraction,
        window: f64,
    },
    Parseval {
        function: FunctionSpec,
        #[serde(default)]
        angle: f64,
        window: f64,
    },
    Measure {
        nu: f64,
        function: FunctionSpec,
        window: f64,
    },
    Hilbert {
        xi: Vec<f64>,
        a: Vec<Complex>,
        sigma: f64,
    },
    HilbertRandom {
        points: usize,
        sigma: f64,
        trials: usize,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameParams {
    pub functions: Vec<FunctionSpec>,
    pub window: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NodeData {
    Explicit { p: Vec<Complex>, q: Vec<Complex> },
    /// Uniform random data in the unit square on `support` nodes nearest
    /// the origin.
    Random { support: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconstructParams {
    pub t_min: f64,
    pub t_max: f64,
    pub data: NodeData,
    pub grid: Grid,
    #[serde(default)]
    pub imag: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtremalParams {
    pub dimension: u32,
    pub g: Profile,
    pub side: Side,
    pub candidate: Profile,
    pub options: VerifyOptions,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PqData {
    pub p: Vec<Complex>,
    pub q: Vec<Complex>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameSummary {
    pub reports: Vec<FrameReport>,
    pub r_min: f64,
    pub r_max: f64,
    pub seeds: Vec<Option<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Failed,
    Invalid,
}

/// Always written to `<out>/summary.json`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub command: String,
    pub status: Status,
    pub exit_code: i32,
    pub seed: Option<u64>,
    pub outputs: Vec<String>,
    pub failures: Vec<String>,
    pub message: String,
}

// ----------------------------------------------------------------- plumbing

/// An input problem (exit 2) or a failed computation (exit 1).
#[derive(Debug)]
enum Fault {
    Invalid(String),
    Failed(String),
}

impl From<Error> for Fault {
    fn from(e: Error) -> Self {
        Fault::Failed(e.to_string())
    }
}

fn invalid(e: impl std::fmt::Display) -> Fault {
    Fault::Invalid(e.to_string())
}

fn read(path: &Path) -> Result<String, Fault> {
    fs::read_to_string(path).map_err(|e| Fault::Invalid(format!("{}: {e}", path.display())))
}

fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, Fault> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Fault::Invalid(format!("{what}: field `{path}`: {}", e.inner()))
    })
}

fn parse_params<T: DeserializeOwned>(v: &serde_json::Value) -> Result<T, Fault> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        Fault::Invalid(format!("manifest: field `parameters.{path}`: {}", e.inner()))
    })
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(v).expect("serializable output");
    s.push(b'\n');
    s
}

/// Lossless number format for CSV (17 significant digits).
pub fn csv_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn positive(x: f64, what: &str) -> Result<(), Fault> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Fault::Invalid(format!("{what} must be positive and finite, got {x}")))
    }
}

/// Output of a computed command.
struct Outcome {
    files: Vec<(String, Vec<u8>)>,
    failures: Vec<String>,
}

/// Runs a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let pool = match cli.threads {
        Some(0) => {
            eprintln!("error: --threads must be at least 1");
            return EXIT_INVALID;
        }
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAILED;
        }
    };
    let (name, seed, result) = pool.install(|| dispatch(&cli));
    let out = &cli.out;
    let mut summary = Summary {
        command: name.to_string(),
        status: Status::Ok,
        exit_code: EXIT_OK,
        seed,
        outputs: Vec::new(),
        failures: Vec::new(),
        message: String::new(),
    };
    match result {
        Ok(outcome) => {
            for (rel, bytes) in &outcome.files {
                if let Err(e) = write_atomic(&out.join(rel), bytes) {
                    summary.status = Status::Failed;
                    summary.exit_code = EXIT_FAILED;
                    summary.message = format!("writing {rel}: {e}");
                    break;
                }
                summary.outputs.push(rel.clone());
            }
            if summary.status == Status::Ok && !outcome.failures.is_empty() {
                summary.status = Status::Failed;
                summary.exit_code = EXIT_FAILED;
                summary.message = format!("{} check(s) failed", outcome.failures.len());
                for f in &outcome.failures {
                    eprintln!("FAILED: {f}");
                }
            }
            summary.failures = outcome.failures;
        }
        Err(Fault::Invalid(m)) => {
            eprintln!("error: {m}");
            summary.status = Status::Invalid;
            summary.exit_code = EXIT_INVALID;
            summary.message = m;
        }
        Err(Fault::Failed(m)) => {
            eprintln!("error: {m}");
            summary.status = Status::Failed;
            summary.exit_code = EXIT_FAILED;
            summary.message = m;
        }
    }
    if let Err(e) = write_atomic(&out.join("summary.json"), &to_json(&summary)) {
        eprintln!("error: writing summary: {e}");
        return summary.exit_code.max(EXIT_FAILED);
    }
    summary.exit_code
}

fn dispatch(cli: &Cli) -> (&'static str, Option<u64>, Result<Outcome, Fault>) {
    match &cli.command {
        Command::Nodes(m) => manifest_run("nodes", CommandKind::Nodes, m, cli.seed),
        Command::Interp(m) => manifest_run("interp", CommandKind::Interp, m, cli.seed),
        Command::Identities(m) => manifest_run("identities", CommandKind::Identities, m, cli.seed),
        Command::Frame(m) => manifest_run("frame", CommandKind::Frame, m, cli.seed),
        Command::Reconstruct(m) => manifest_run("reconstruct", CommandKind::Reconstruct, m, cli.seed),
        Command::Extremal(ExtremalArgs {
            action: None,
            manifest: Some(path),
        }) => manifest_run(
            "extremal",
            CommandKind::Extremal,
            &ManifestArg { manifest: path.clone() },
            cli.seed,
        ),
        Command::Extremal(ExtremalArgs { action: None, manifest: None }) => (
            "extremal",
            cli.seed,
            Err(invalid("extremal needs --manifest or the verify subcommand")),
        ),
        Command::Extremal(ExtremalArgs {
            action: Some(ExtremalAction::Verify {
                problem,
                candidate,
                window,
                grid,
                output,
            }),
            ..
        }) => ("extremal verify", cli.seed, extremal_direct(problem, candidate, *window, *grid, output)),
        Command::Sample {
            action:
                SampleAction::Reconstruct {
                    space,
                    nodes,
                    data,
                    grid,
                    output,
                },
        } => ("sample reconstruct", cli.seed, sample_reconstruct(space, nodes, data, *grid, output)),
    }
}

fn manifest_run(
    name: &'static str,
    kind: CommandKind,
    arg: &ManifestArg,
    cli_seed: Option<u64>,
) -> (&'static str, Option<u64>, Result<Outcome, Fault>) {
    let manifest = read(&arg.manifest).and_then(|t| parse_json::<RunManifest>(&t, "manifest"));
    let m = match manifest {
        Ok(m) => m,
        Err(e) => return (name, cli_seed, Err(e)),
    };
    let seed = cli_seed.or(m.seed).unwrap_or(0);
    if m.command != kind {
        return (
            name,
            Some(seed),
            Err(Fault::Invalid(format!("manifest is for `{:?}`, not `{name}`", m.command).to_lowercase())),
        );
    }
    let out = m.output_path.clone();
    let result = match kind {
        CommandKind::Nodes => run_nodes(&m, &out),
        CommandKind::Interp => run_interp(&m, seed, &out),
        CommandKind::Identities => run_identities(&m, seed, &out),
        CommandKind::Frame => run_frame(&m, seed, &out),
        CommandKind::Reconstruct => run_reconstruct(&m, seed, &out),
        CommandKind::Extremal => run_extremal(&m, &out),
    };
    (name, Some(seed), result)
}

fn is_csv(path: &str) -> bool {
    path.to_ascii_lowercase().ends_with(".csv")
}

// ------------------------------------------------------------------ commands

fn run_nodes(m: &RunManifest, out: &str) -> Result<Outcome, Fault> {
    let p: NodesParams = parse_params(&m.parameters)?;
    if !(p.t_min.is_finite() && p.t_max.is_finite() && p.t_min <= p.t_max) {
        return Err(invalid("parameters: need finite t_min ≤ t_max"));
    }
    let ns = find_nodes(&m.space, p.t_min, p.t_max)?;
    let bytes = if is_csv(out) {
        let mut s = String::from("t,a,b1,k_diag,k2_diag\n");
        for n in ns.iter() {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                csv_num(n.t),
                csv_num(n.a),
                csv_num(n.b1),
                csv_num(n.k_diag()),
                csv_num(n.k2_diag)
            );
        }
        s.into_bytes()
    } else {
        to_json(&ns)
    };
    Ok(Outcome {
        files: vec![(out.to_string(), bytes)],
        failures: vec![],
    })
}

fn grid_points(grid: &Grid, imag: f64) -> Vec<Complex> {
    grid.points().into_iter().map(|x| Complex::new(x, imag)).collect()
}

fn run_interp(m: &RunManifest, seed: u64, out: &str) -> Result<Outcome, Fault> {
    let p: InterpParams = parse_params(&m.parameters)?;
    p.function.validate().map_err(invalid)?;
    positive(p.window, "parameters.window")?;
    let gf = p.function.generated(m.space, seed);
    let f = make_function(&gf).map_err(invalid)?;
    let nodes = Arc::new(find_nodes(&m.space, -p.window, p.window)?);
    let samples = sample_on(&f, &nodes)?;
    let zs = grid_points(&p.grid, p.imag);
    let vals = interpolate_many(&m.space, &samples, &zs)?;
    let mut s = String::from("re_z,im_z,re_f,im_f,re_exact,im_exact,abs_err,tail_estimate\n");
    for (z, v) in zs.iter().zip(&vals) {
        let exact = f.value(*z)?;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            csv_num(z.re),
            csv_num(z.im),
            csv_num(v.value.re),
            csv_num(v.value.im),
            csv_num(exact.re),
            csv_num(exact.im),
            csv_num((v.value - exact).norm()),
            csv_num(v.tail_estimate)
        );
    }
    let mut files = vec![(out.to_string(), s.into_bytes())];
    files.push((format!("{out}.recipe.json"), to_json(&gf)));
    Ok(Outcome { files, failures: vec![] })
}

fn build(spec: &FunctionSpec, space: SpaceDescriptor, seed: u64) -> Result<FunctionHandle, Fault> {
    make_function(&spec.generated(space, seed)).map_err(invalid)
}

fn random_hilbert(points: usize, sigma: f64, trials: usize, seed: u64) -> Result<IdentityReport, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outside = 0usize;
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let mut x = 0.0;
        let xi: Vec<f64> = (0..points)
            .map(|_| {
                x += sigma * (1.0 + rng.gen_range(0.0..2.0));
                x
            })
            .collect();
        let a: Vec<Complex> = (0..points)
            .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let r = hilbert_form(&HilbertFormInput { xi, a, sigma })?;
        if !r.within {
            outside += 1;
        }
        worst = worst.max(r.form.abs() / r.upper);
    }
    let mut rep = IdentityReport::new("hilbert_random", Complex::new(outside as f64, 0.0), Complex::new(0.0, 0.0), 0.0);
    // largest |form| / upper seen
    rep.error_estimate = worst;
    Ok(rep)
}

fn validate_check(c: &IdentityCheck) -> Result<(), Fault> {
    if let Some(t) = c.tolerance {
        if !(t >= 0.0) {
            return Err(invalid(format!("tolerance must be nonnegative, got {t}")));
        }
    }
    match &c.kind {
        CheckKind::PartialFraction { window, .. } => positive(*window, "window"),
        CheckKind::Parseval { function, window, .. } | CheckKind::Measure { function, window, .. } => {
            function.validate().map_err(invalid)?;
            positive(*window, "window")
        }
        CheckKind::Hilbert { xi, a, sigma } => {
            if xi.len() != a.len() {
                return Err(invalid(Error::LengthMismatch {
                    expected: xi.len(),
                    got: a.len(),
                }));
            }
            positive(*sigma, "sigma")
        }
        CheckKind::HilbertRandom { sigma, .. } => positive(*sigma, "sigma"),
    }
}

fn run_check(space: &SpaceDescriptor, c: &IdentityCheck, seed: u64) -> Result<IdentityReport, Fault> {
    let rep = match &c.kind {
        CheckKind::PartialFraction { identity, window } => check_partial_fraction(space, identity, *window)?,
        CheckKind::Parseval { function, angle, window } => {
            let f = build(function, *space, seed)?;
            parseval_node_sum(space, &Attested::generated(&f), *angle, *window, PARSEVAL_TOL)?
        }
        CheckKind::Measure { nu, function, window } => {
            let sp = SpaceDescriptor::bessel(*nu).map_err(invalid)?;
            let f = build(function, sp, seed)?;
            homogeneous_measure_identity(*nu, &Attested::generated(&f), *window, MEASURE_TOL)?
        }
        CheckKind::Hilbert { xi, a, sigma } => {
            let r = hilbert_form(&HilbertFormInput {
                xi: xi.clone(),
                a: a.clone(),
                sigma: *sigma,
            })?;
            // distance outside the bounds, zero when within
            let clamped = r.form.clamp(r.lower, r.upper);
            IdentityReport::new("hilbert", Complex::new(r.form, 0.0), Complex::new(clamped, 0.0), 0.0)
        }
        CheckKind::HilbertRandom { points, sigma, trials } => random_hilbert(*points, *sigma, *trials, seed)?,
    };
    let mut rep = match c.tolerance {
        Some(t) => rep.with_tolerance(t),
        None => rep,
    };
    if let Some(n) = &c.name {
        rep.name = n.clone();
    }
    Ok(rep)
}

fn run_identities(m: &RunManifest, seed: u64, out: &str) -> Result<Outcome, Fault> {
    let p: IdentitiesParams = parse_params(&m.parameters)?;
    if p.checks.is_empty() {
        return Err(invalid("parameters.checks is empty"));
    }
    for (i, c) in p.checks.iter().enumerate() {
        validate_check(c).map_err(|e| match e {
            Fault::Invalid(s) => Fault::Invalid(format!("parameters.checks[{i}]: {s}")),
            f => f,
        })?;
    }
    let mut reports = Vec::with_capacity(p.checks.len());
    for (i, c) in p.checks.iter().enumerate() {
        // each check gets its own stream derived from the run seed
        let mut rep = run_check(&m.space, c, seed.wrapping_add(i as u64))?;
        if c.name.is_none() {
            rep.name = format!("{}#{i}", rep.name);
        }
        reports.push(rep);
    }
    let failures = reports.iter().filter(|r| !r.passed).map(|r| r.name.clone()).collect();
    Ok(Outcome {
        files: vec![(out.to_string(), to_json(&reports))],
        failures,
    })
}

fn run_frame(m: &RunManifest, seed: u64, out: &str) -> Result<Outcome, Fault> {
    let p: FrameParams = parse_params(&m.parameters)?;
    positive(p.window, "parameters.window")?;
    if p.functions.is_empty() {
        return Err(invalid("parameters.functions is empty"));
    }
    for f in &p.functions {
        f.validate().map_err(invalid)?;
    }
    let mut reports = Vec::new();
    let mut seeds = Vec::new();
    for (i, spec) in p.functions.iter().enumerate() {
        let gf = spec.generated(m.space, seed.wrapping_add(i as u64));
        let f = make_function(&gf).map_err(invalid)?;
        reports.push(frame_ratio(&m.space, &f, p.window)?);
        seeds.push(gf.seed);
    }
    let r_min = reports.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let r_max = reports.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let summary = FrameSummary {
        reports,
        r_min,
        r_max,
        seeds,
    };
    Ok(Outcome {
        files: vec![(out.to_string(), to_json(&summary))],
        failures: vec![],
    })
}

fn reconstruction_csv(space: &SpaceDescriptor, nodes: Arc<NodeSet>, pq: &PqData, grid: &Grid, imag: f64) -> Result<Vec<u8>, Fault> {
    let r = reconstruct(space, nodes, &pq.p, &pq.q).map_err(|e| match e {
        Error::LengthMismatch { .. } | Error::InvalidInput(_) => invalid(e),
        e => e.into(),
    })?;
    let mut s = String::from("x,re_f,im_f\n");
    for z in grid_points(grid, imag) {
        let v = r.value(z)?;
        let _ = writeln!(s, "{},{},{}", csv_num(z.re), csv_num(v.re), csv_num(v.im));
    }
    Ok(s.into_bytes())
}

fn run_reconstruct(m: &RunManifest, seed: u64, out: &str) -> Result<Outcome, Fault> {
    let p: ReconstructParams = parse_params(&m.parameters)?;
    if !(p.t_min.is_finite() && p.t_max.is_finite() && p.t_min <= p.t_max) {
        return Err(invalid("parameters: need finite t_min ≤ t_max"));
    }
    let nodes = Arc::new(find_nodes(&m.space, p.t_min, p.t_max)?);
    let pq = match p.data {
        NodeData::Explicit { p, q } => PqData { p, q },
        NodeData::Random { support } => {
            let c = nodes.central_index().ok_or(Error::NodeWindowEmpty)?;
            let lo = c.saturating_sub(support / 2);
            let hi = (lo + support).min(nodes.len());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut draw = |i: usize| {
                if (lo..hi).contains(&i) {
                    Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                } else {
                    Complex::new(0.0, 0.0)
                }
            };
            let p: Vec<Complex> = (0..nodes.len()).map(&mut draw).collect();
            let q: Vec<Complex> = (0..nodes.len()).map(&mut draw).collect();
            PqData { p, q }
        }
    };
    let csv = reconstruction_csv(&m.space, nodes, &pq, &p.grid, p.imag)?;
    Ok(Outcome {
        files: vec![(out.to_string(), csv), (format!("{out}.data.json"), to_json(&pq))],
        failures: vec![],
    })
}

fn verification(problem: &ExtremalProblem<'_>, candidate: &Profile, opts: &VerifyOptions, out: &str) -> Result<Outcome, Fault> {
    positive(opts.window, "window")?;
    let r = verify_candidate(problem, candidate, opts).map_err(|e| match e {
        Error::InvalidInput(_) | Error::GridTooCoarse { .. } => invalid(e),
        e => e.into(),
    })?;
    let mut failures = Vec::new();
    for (ok, what) in [
        (r.sign_ok, "sign"),
        (r.interp_ok, "interpolation"),
        (r.derivative_interp_ok, "derivative interpolation"),
    ] {
        if !ok {
            failures.push(format!("{out}: {what} condition"));
        }
    }
    Ok(Outcome {
        files: vec![(out.to_string(), to_json(&r))],
        failures,
    })
}

fn run_extremal(m: &RunManifest, out: &str) -> Result<Outcome, Fault> {
    let p: ExtremalParams = parse_params(&m.parameters)?;
    let problem = ExtremalProblem {
        dimension: p.dimension,
        g: &p.g,
        side: p.side,
        space: m.space,
    };
    verification(&problem, &p.candidate, &p.options, out)
}

fn extremal_direct(problem: &Path, candidate: &Path, window: f64, grid: Grid, out: &str) -> Result<Outcome, Fault> {
    let spec: ProblemSpec = parse_json(&read(problem)?, "problem")?;
    let cand: Profile = parse_json(&read(candidate)?, "candidate")?;
    verification(&spec.problem(), &cand, &VerifyOptions::new(grid, window), out)
}

fn sample_reconstruct(space: &str, nodes: &Path, data: &Path, grid: Grid, out: &str) -> Result<Outcome, Fault> {
    let space_text = if space.trim_start().starts_with('{') {
        space.to_string()
    } else {
        read(Path::new(space))?
    };
    let space: SpaceDescriptor = parse_json(&space_text, "space")?;
    let ns: NodeSet = parse_json(&read(nodes)?, "nodes")?;
    let pq: PqData = parse_json(&read(data)?, "data")?;
    if ns.space != space {
        return Err(invalid("node set was computed for a different space"));
    }
    let csv = reconstruction_csv(&space, Arc::new(ns), &pq, &grid, 0.0)?;
    Ok(Outcome {
        files: vec![(out.to_string(), csv)],
        failures: vec![],
    })
}
