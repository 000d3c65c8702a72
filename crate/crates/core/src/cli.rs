//! Command-line driver: `verify`, `bound`, `flow`, `curvature`, `planes` and
//! `measure`.
//!
//! Every option may also come from a JSON object given with `--config`;
//! flags on the command line win. Exit codes: 0 all checks pass, 1 a check
//! failed, 2 runtime or step failure, 64 usage error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Uniform};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::calibration::{closedness_residual, comass_check};
use crate::catalog::{
    discrepancies, full_catalog, make_cylinder_surface, make_plane_surface, make_x_theta,
    printed_log_quadratic_root, verify_catalog,
};
use crate::density::{Density, Profile};
use crate::error::Error;
use crate::flow::{flow_run, FlowState, GridField, StopCriteria, Verdict};
use crate::graph::{horizontal_plane_roots, GraphFunction, RootSet};
use crate::measure::{
    exact_tail, gaussian_ball_volume, gaussian_ball_volume_mc, paper_tail, sweep_radii,
    volume_bound_sweep, weighted_sphere_area, VolumeBoundReport,
};
use crate::quadrature::{QuadratureSpec, DEFAULT_SEED};
use crate::surface::ParametricSurface;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Chart half-width used when a graph preset is evaluated as a surface.
const GRAPH_CHART: f64 = 1e6;

#[derive(Debug, Parser)]
#[command(
    name = "gauss-bernstein",
    version,
    about = "Weighted minimal graphs in Gauss space x R"
)]
pub struct Cli {
    /// JSON object with option values; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the example catalog, the calibration identities and the
    /// tangent-plane distance identity.
    Verify(VerifyArgs),
    /// Volume-growth sweep over radii.
    Bound(BoundArgs),
    /// Weighted mean-curvature flow of a graph.
    Flow(FlowArgs),
    /// Curvature report at one chart point.
    Curvature(CurvatureArgs),
    /// Heights of weighted minimal horizontal planes.
    Planes(PlanesArgs),
    /// Gaussian ball mass, its Monte Carlo estimate and the tails.
    Measure(MeasureArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Comma-separated subset of `catalog,calibration,distance`.
    #[arg(long)]
    pub only: Option<String>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub rmin: Option<f64>,
    #[arg(long)]
    pub rmax: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Half-width of the box `[-L, L]^n`.
    #[arg(long = "L", alias = "half-width")]
    pub half_width: Option<f64>,
    /// Nodes per axis.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Graph preset for the initial data.
    #[arg(long)]
    pub init: Option<String>,
    #[arg(long)]
    pub tmax: Option<f64>,
    #[arg(long)]
    pub density: Option<String>,
    /// Final field as CSV.
    #[arg(long)]
    pub field_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CurvatureArgs {
    /// `cylinder`, `x_theta`, `helicoid`, `catenoid`, `plane` or
    /// `graph:<preset>`.
    #[arg(long)]
    pub surface: Option<String>,
    /// `key=value` pairs, comma separated.
    #[arg(long)]
    pub params: Option<String>,
    /// Chart point, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub at: Option<String>,
    #[arg(long)]
    pub density: Option<String>,
}

#[derive(Debug, Args)]
pub struct PlanesArgs {
    #[arg(long)]
    pub profile: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "R", alias = "radius")]
    pub radius: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
}

/// A failed command: the exit code and a message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn runtime(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_RUNTIME,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnknownPreset(_)
            | Error::InvalidArgument(_)
            | Error::UnsupportedDimension(_)
            | Error::DimensionMismatch { .. }
            | Error::OutsideChart(_) => EXIT_USAGE,
            _ => EXIT_RUNTIME,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Option values from the config file.
struct Config(Map<String, Value>);

impl Config {
    fn load(path: Option<&Path>) -> std::result::Result<Self, Failure> {
        let Some(path) = path else {
            return Ok(Config(Map::new()));
        };
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::runtime(format!("cannot read {}: {e}", path.display())))?;
        match serde_json::from_str(&text) {
            Ok(Value::Object(map)) => Ok(Config(map)),
            Ok(_) => Err(Failure::usage("config must be a JSON object")),
            Err(e) => Err(Failure::usage(format!(
                "invalid config {}: {e}",
                path.display()
            ))),
        }
    }

    /// Flag value, else config value, else the default.
    fn pick<T: DeserializeOwned>(
        &self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> std::result::Result<T, Failure> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.0.get(key) {
            Some(v) => serde_json::from_value(v.clone())
                .map_err(|e| Failure::usage(format!("config key `{key}`: {e}"))),
            None => Ok(default),
        }
    }

    fn pick_opt<T: DeserializeOwned>(
        &self,
        flag: Option<T>,
        key: &str,
    ) -> std::result::Result<Option<T>, Failure> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.0
            .get(key)
            .map(|v| {
                serde_json::from_value(v.clone())
                    .map_err(|e| Failure::usage(format!("config key `{key}`: {e}")))
            })
            .transpose()
    }
}

struct Ctx<'a> {
    config: Config,
    format: Option<Format>,
    seed: u64,
    out: Option<PathBuf>,
    stdout: &'a mut dyn Write,
}

impl Ctx<'_> {
    /// Main output goes to `--out` if given, otherwise to stdout.
    fn emit(&mut self, text: &str) -> std::result::Result<(), Failure> {
        match &self.out {
            Some(path) => write_file(path, text),
            None => self
                .stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::runtime(format!("write failed: {e}"))),
        }
    }

    fn say(&mut self, line: &str) -> std::result::Result<(), Failure> {
        writeln!(self.stdout, "{line}").map_err(|e| Failure::runtime(format!("write failed: {e}")))
    }
}

fn write_file(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    fs::write(path, text)
        .map_err(|e| Failure::runtime(format!("cannot write {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match dispatch(cli, stdout) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> CmdResult {
    let config = Config::load(cli.config.as_deref())?;
    let format = config.pick_opt(cli.format, "format")?;
    let seed = config.pick(cli.seed, "seed", DEFAULT_SEED)?;
    let out = config.pick_opt(cli.out, "out")?;
    let mut ctx = Ctx {
        config,
        format,
        seed,
        out,
        stdout,
    };
    match cli.command {
        Command::Verify(a) => cmd_verify(&mut ctx, a),
        Command::Bound(a) => cmd_bound(&mut ctx, a),
        Command::Flow(a) => cmd_flow(&mut ctx, a),
        Command::Curvature(a) => cmd_curvature(&mut ctx, a),
        Command::Planes(a) => cmd_planes(&mut ctx, a),
        Command::Measure(a) => cmd_measure(&mut ctx, a),
    }
}

const VERIFY_SECTIONS: [&str; 3] = ["catalog", "calibration", "distance"];

/// Points sampled per graph preset in the calibration and distance checks.
const VERIFY_POINTS: usize = 100;
const VERIFY_COMASS_TRIALS: usize = 100_000;

fn verify_presets() -> Vec<(&'static str, GraphFunction, Density, bool)> {
    let profile_density = Density::product(Density::gaussian(2), Profile::LogCorrectedQuadratic);
    vec![
        (
            "constant",
            GraphFunction::constant(2, 0.4),
            Density::gaussian_cylinder(2),
            true,
        ),
        (
            "parabola_with_profile",
            GraphFunction::parabola(2),
            profile_density,
            true,
        ),
        (
            "linear",
            GraphFunction::linear(vec![0.6, -0.3], 0.2),
            Density::gaussian_cylinder(2),
            false,
        ),
        (
            "sinusoid",
            GraphFunction::sinusoid(2, 0.5, std::f64::consts::PI / 4.0),
            Density::gaussian_cylinder(2),
            false,
        ),
        (
            "random_bump",
            GraphFunction::random_bump(2, 0.3, DEFAULT_SEED),
            Density::gaussian_cylinder(2),
            false,
        ),
    ]
}

/// Random points on the graph over `[-2.5, 2.5]^n` (inside the log-profile
/// domain for the parabola).
fn graph_points(u: &GraphFunction, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let box_dist = Uniform::new(-2.5, 2.5).expect("valid range");
    (0..count)
        .map(|_| {
            let x: Vec<f64> = (0..u.dim()).map(|_| box_dist.sample(&mut rng)).collect();
            let mut p = x.clone();
            p.push(u.value(&x));
            p
        })
        .collect()
}

fn verify_calibration(tolerance: f64, seed: u64) -> std::result::Result<Value, Failure> {
    let mut pass = true;
    let mut presets = Vec::new();
    for (name, u, density, minimal) in verify_presets() {
        let mut identity: f64 = 0.0;
        let mut divergence: f64 = 0.0;
        for p in graph_points(&u, VERIFY_POINTS, seed) {
            let r = closedness_residual(&u, &density, &p)?;
            identity = identity.max(r.residual.abs());
            divergence = divergence.max(r.divergence.abs());
        }
        let ok = identity <= tolerance && (!minimal || divergence <= tolerance);
        pass &= ok;
        presets.push(json!({
            "name": name,
            "weighted_minimal": minimal,
            "max_identity_residual": identity,
            "max_abs_divergence": divergence,
            "pass": ok,
        }));
    }
    let comass = comass_check(&GraphFunction::parabola(2), VERIFY_COMASS_TRIALS, seed)?;
    let comass_ok = comass.max_abs <= 1.0 + 1e-12;
    pass &= comass_ok;
    Ok(json!({
        "presets": presets,
        "comass": { "trials": comass.trials, "max_abs": comass.max_abs, "pass": comass_ok },
        "pass": pass,
    }))
}

fn verify_distance(tolerance: f64, seed: u64) -> std::result::Result<Value, Failure> {
    let mut worst: f64 = 0.0;
    for (_, u, _, _) in verify_presets() {
        let surface = u.as_parametric(GRAPH_CHART);
        for p in graph_points(&u, VERIFY_POINTS, seed ^ 0x5EED) {
            let (lhs, rhs) = surface.tangent_plane_distance(&p[..u.dim()])?;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok(json!({ "max_residual": worst, "pass": worst <= tolerance }))
}

fn cmd_verify(ctx: &mut Ctx, a: VerifyArgs) -> CmdResult {
    let tolerance: f64 = ctx.config.pick(a.tolerance, "tolerance", 1e-5)?;
    if !(tolerance > 0.0) {
        return Err(Failure::usage("tolerance must be positive"));
    }
    let only: Option<String> = ctx.config.pick_opt(a.only, "only")?;
    let sections: Vec<&str> = match &only {
        None => VERIFY_SECTIONS.to_vec(),
        Some(list) => {
            let chosen: Vec<&str> = list.split(',').map(str::trim).collect();
            if let Some(bad) = chosen.iter().find(|s| !VERIFY_SECTIONS.contains(s)) {
                return Err(Failure::usage(format!(
                    "unknown section `{bad}`; expected one of {VERIFY_SECTIONS:?}"
                )));
            }
            VERIFY_SECTIONS
                .iter()
                .copied()
                .filter(|s| chosen.contains(s))
                .collect()
        }
    };

    let mut report = Map::new();
    let mut pass = true;
    let mut failures = Vec::new();
    for section in sections {
        let value = match section {
            "catalog" => {
                let r = verify_catalog(&full_catalog()?, tolerance);
                failures.extend(
                    r.entries
                        .iter()
                        .filter(|e| !e.pass)
                        .map(|e| format!("catalog/{}: residual {:e}", e.name, e.residual)),
                );
                serde_json::to_value(&r).expect("serializable")
            }
            "calibration" => verify_calibration(tolerance, ctx.seed)?,
            _ => verify_distance(tolerance, ctx.seed)?,
        };
        let ok = value["pass"].as_bool().unwrap_or(false);
        if !ok && section != "catalog" {
            failures.push(format!("{section}: failed"));
        }
        pass &= ok;
        report.insert(section.to_string(), value);
    }
    report.insert("tolerance".into(), json!(tolerance));
    report.insert(
        "discrepancies".into(),
        serde_json::to_value(discrepancies()?).expect("serializable"),
    );
    report.insert("pass".into(), json!(pass));
    ctx.emit(&to_json(&report))?;
    if ctx.out.is_some() {
        ctx.say(if pass { "verify: pass" } else { "verify: FAIL" })?;
    }
    for f in &failures {
        ctx.say(&format!("failure: {f}"))?;
    }
    Ok(if pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_bound(ctx: &mut Ctx, a: BoundArgs) -> CmdResult {
    let n: usize = ctx.config.pick(a.n, "n", 2)?;
    if !(1..=3).contains(&n) {
        return Err(Failure::usage(format!(
            "--n {n}: supported dimensions are 1, 2, 3"
        )));
    }
    let rmin = ctx.config.pick(a.rmin, "rmin", 0.5)?;
    let rmax = ctx.config.pick(a.rmax, "rmax", 6.0)?;
    let steps = ctx.config.pick(a.steps, "steps", 12)?;
    let radii = sweep_radii(rmin, rmax, steps)?;
    let rows = volume_bound_sweep(n, &radii, &QuadratureSpec::default())?;
    let text = match ctx.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = format!("{}\n", VolumeBoundReport::CSV_HEADER);
            for r in &rows {
                s.push_str(&r.csv_row());
                s.push('\n');
            }
            s
        }
        Format::Json => to_json(&rows),
    };
    ctx.emit(&text)?;
    Ok(if rows.iter().all(|r| r.chain_ok) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

fn cmd_flow(ctx: &mut Ctx, a: FlowArgs) -> CmdResult {
    let n: usize = ctx.config.pick(a.n, "n", 1)?;
    if !(1..=2).contains(&n) {
        return Err(Failure::usage(format!(
            "--n {n}: the flow supports n = 1 or 2"
        )));
    }
    let half_width = ctx.config.pick(a.half_width, "L", 4.0)?;
    let grid = ctx
        .config
        .pick(a.grid, "grid", if n == 1 { 257 } else { 65 })?;
    let init: String = ctx.config.pick(a.init, "init", "sinusoid".to_string())?;
    let tmax = ctx.config.pick(a.tmax, "tmax", 50.0)?;
    let density_name: String = ctx.config.pick(
        a.density,
        "density",
        "product:gaussian+constant".to_string(),
    )?;
    let field_out: Option<PathBuf> = ctx.config.pick_opt(a.field_out, "field_out")?;
    if !(tmax > 0.0) {
        return Err(Failure::usage("--tmax must be positive"));
    }

    let u0 = GraphFunction::from_preset(&init, n, ctx.seed)?;
    let density = Density::from_preset(&density_name, n)?;
    let state = FlowState::new(GridField::sample(&u0, half_width, grid)?);
    let outcome = flow_run(state, &density, tmax, Some(StopCriteria::default()))?;

    match ctx.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let series = outcome.state.history_csv();
            ctx.emit(&series)?;
        }
        Format::Json => {
            let summary = json!({
                "verdict": outcome.verdict,
                "time": outcome.state.time,
                "history": outcome.state.history,
            });
            ctx.emit(&to_json(&summary))?;
        }
    }
    if let Some(path) = &field_out {
        write_file(path, &outcome.state.field.to_csv())?;
    }
    let last = outcome.state.history.last().expect("recorded");
    let line = match &outcome.verdict {
        Verdict::ConvergedToConstant { limit } => format!(
            "verdict: converged_to_constant a={limit:.12} t={:.6} oscillation={:.3e}",
            outcome.state.time, last.oscillation
        ),
        Verdict::MaxTimeReached => format!(
            "verdict: max_time_reached t={:.6} oscillation={:.3e}",
            outcome.state.time, last.oscillation
        ),
        Verdict::StepFailure { reason } => format!(
            "verdict: step_failure t={:.6} reason={reason}",
            outcome.state.time
        ),
    };
    // a JSON document on stdout already carries the verdict
    if ctx.out.is_some() {
        ctx.say(&line)?;
    } else if ctx.format != Some(Format::Json) {
        ctx.say("")?;
        ctx.say(&line)?;
    }
    Ok(match outcome.verdict {
        Verdict::ConvergedToConstant { .. } => EXIT_OK,
        Verdict::MaxTimeReached => EXIT_CHECK_FAILED,
        Verdict::StepFailure { .. } => EXIT_RUNTIME,
    })
}

fn parse_params(text: &str) -> std::result::Result<BTreeMap<String, f64>, Failure> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Failure::usage(format!("parameter `{kv}` is not key=value")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Failure::usage(format!("parameter `{kv}`: not a number")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn parse_point(text: &str) -> std::result::Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Failure::usage(format!("--at: `{s}` is not a number")))
        })
        .collect()
}

fn build_surface(
    name: &str,
    params: &BTreeMap<String, f64>,
) -> std::result::Result<ParametricSurface, Failure> {
    let get = |k: &str, default: Option<f64>| {
        params
            .get(k)
            .copied()
            .or(default)
            .ok_or_else(|| Failure::usage(format!("surface `{name}` needs parameter `{k}`")))
    };
    Ok(match name {
        "cylinder" => make_cylinder_surface(get("r", Some(1.0))?)?,
        "x_theta" => make_x_theta(get("theta", None)?)?,
        "helicoid" => make_x_theta(0.0)?,
        "catenoid" => make_x_theta(std::f64::consts::FRAC_PI_2)?,
        "plane" => make_plane_surface(
            [get("a", None)?, get("b", None)?, get("c", Some(0.0))?],
            get("d", Some(0.0))?,
        )?,
        _ => match name.strip_prefix("graph:") {
            Some(preset) => {
                let n = get("n", Some(2.0))?;
                if n < 1.0 || n.fract() != 0.0 {
                    return Err(Failure::usage(
                        "graph dimension n must be a positive integer",
                    ));
                }
                GraphFunction::from_preset(preset, n as usize, DEFAULT_SEED)?
                    .as_parametric(GRAPH_CHART)
            }
            None => return Err(Failure::usage(format!("unknown surface `{name}`"))),
        },
    })
}

fn cmd_curvature(ctx: &mut Ctx, a: CurvatureArgs) -> CmdResult {
    let surface_name: String = ctx
        .config
        .pick(a.surface, "surface", "cylinder".to_string())?;
    let params = parse_params(&ctx.config.pick(a.params, "params", String::new())?)?;
    let surface = build_surface(&surface_name, &params)?;
    let at = match ctx.config.pick_opt(a.at, "at")? {
        Some(text) => parse_point(&text)?,
        None => vec![0.0; surface.chart_dim()],
    };
    let n = surface.ambient_dim() - 1;
    let density_name: String = ctx.config.pick(
        a.density,
        "density",
        "product:gaussian+constant".to_string(),
    )?;
    let density = Density::from_preset(&density_name, n)?;
    let report = surface.weighted_mean_curvature(&density, &at)?;
    ctx.emit(&to_json(&json!({
        "surface": surface.name(),
        "density": density_name,
        "report": report,
    })))?;
    Ok(EXIT_OK)
}

fn cmd_planes(ctx: &mut Ctx, a: PlanesArgs) -> CmdResult {
    let profile_name: String =
        ctx.config
            .pick(a.profile, "profile", "paper_example".to_string())?;
    let lo = ctx.config.pick(a.lo, "lo", 0.0)?;
    let hi = ctx.config.pick(a.hi, "hi", 2.0)?;
    let profile = Profile::from_preset(&profile_name)?;
    let roots = horizontal_plane_roots(&profile, lo, hi)?;
    let mut out = Map::new();
    out.insert("profile".into(), json!(profile.name()));
    out.insert("interval".into(), json!([lo, hi]));
    match &roots {
        RootSet::Roots(r) => out.insert("roots".into(), json!(r)),
        RootSet::IdenticallyZero => out.insert("roots".into(), json!("identically_zero")),
    };
    if matches!(profile, Profile::LogCorrectedQuadratic) {
        let printed = printed_log_quadratic_root();
        let computed = match &roots {
            RootSet::Roots(r) => r.first().copied(),
            RootSet::IdenticallyZero => None,
        };
        out.insert(
            "printed_root_check".into(),
            json!({
                "printed": printed,
                "h_prime_at_printed": profile.derivative(printed)?,
                "computed": computed,
                "mismatch": computed.is_none_or(|c| (c - printed).abs() > 1e-8),
            }),
        );
    }
    ctx.emit(&to_json(&out))?;
    Ok(EXIT_OK)
}

fn cmd_measure(ctx: &mut Ctx, a: MeasureArgs) -> CmdResult {
    let n: usize = ctx.config.pick(a.n, "n", 2)?;
    if !(1..=3).contains(&n) {
        return Err(Failure::usage(format!(
            "--n {n}: supported dimensions are 1, 2, 3"
        )));
    }
    let radius: f64 = ctx.config.pick(a.radius, "R", 1.0)?;
    if !(radius > 0.0) {
        return Err(Failure::usage("--R must be positive"));
    }
    let samples = ctx.config.pick(a.samples, "samples", 1_000_000)?;
    let exact = gaussian_ball_volume(n, radius);
    let mc = gaussian_ball_volume_mc(n, radius, samples, ctx.seed);
    let hemisphere = weighted_sphere_area(
        &Density::gaussian_cylinder(n),
        radius,
        true,
        &QuadratureSpec::default(),
    )?;
    let agrees = mc.agrees_with(exact, 3.0);
    ctx.emit(&to_json(&json!({
        "n": n,
        "R": radius,
        "gaussian_ball_volume": exact,
        "monte_carlo": { "samples": samples, "seed": ctx.seed, "value": mc.value, "std_error": mc.std_error },
        "agrees_within_3_sigma": agrees,
        "exact_tail": exact_tail(n, radius),
        "paper_tail": paper_tail(n, radius),
        "weighted_upper_hemisphere_area": hemisphere.value,
    })))?;
    Ok(if agrees { EXIT_OK } else { EXIT_CHECK_FAILED })
}
