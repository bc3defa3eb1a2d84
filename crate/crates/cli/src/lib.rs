//! `sflab` command-line front end.
//!
//! Every subcommand can print a JSON report (`--json`) or write it to a file
//! (`--report FILE`); reports carry a [`manifest::RunManifest`]. Exit codes:
//! 0 on success, 2 on usage errors, 1 on numerical failures.

pub mod config;
pub mod manifest;
pub mod parse;
pub mod render;

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use sflab::brjuno::{brjuno_partial_sums, rotation_to_lambda, AlphaSpec, BrjunoConfig, CfSource};
use sflab::dynamics::{
    classify_cycle, expansion_metric, find_periodic_points, iterate, mane_probe, subhyperbolicity_report, Rect,
};
use sflab::linearize::{boundary_samples, recenter, schroeder, verify_conjugacy};
use sflab::perturb::{family_member, hartogs_grid, remainder_h, rescaled_member, FamilyKind, PerturbationFamily};
use sflab::singular::{singular_data, SingularConfig};
use sflab::{Polynomial64, SfFunction64};

use manifest::RunManifest;
use render::{render_escape, write_pgm, Palette, RenderConfig};

#[derive(Parser, Debug)]
#[command(name = "sflab", version, about = "Dynamics of structurally finite entire functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Continued fraction and Brjuno partial sums of a rotation number
    #[command(args_override_self = true)]
    Brjuno(BrjunoArgs),
    /// Critical points, critical values and asymptotic values
    #[command(args_override_self = true)]
    Inspect(InspectArgs),
    /// Forward orbit of a point
    #[command(args_override_self = true)]
    Orbit(OrbitArgs),
    /// Periodic points by Newton's method on a seed grid
    #[command(args_override_self = true)]
    Cycles(CyclesArgs),
    /// Schröder linearization series at a fixed point
    #[command(args_override_self = true)]
    Linearize(LinearizeArgs),
    /// Samples of an invariant curve inside the Siegel disk
    #[command(args_override_self = true)]
    Siegel(SiegelArgs),
    /// Rescaled perturbation family members and remainders
    #[command(args_override_self = true)]
    Perturb(PerturbArgs),
    /// z / (F_b^n(z) - z) on a grid
    #[command(args_override_self = true)]
    Hartogs(HartogsArgs),
    /// Accumulation of singular orbits on the invariant curve
    #[command(name = "probe-mane", args_override_self = true)]
    ProbeMane(ProbeManeArgs),
    /// Fate of every singular value within an iteration budget
    #[command(args_override_self = true)]
    Subhyp(SubhypArgs),
    /// Escape-time image as binary PGM
    #[command(args_override_self = true)]
    Render(RenderArgs),
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Print the JSON report on stdout
    #[arg(long)]
    pub json: bool,
    /// Write the JSON report to this file
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
#[group(skip)]
pub struct FunctionArgs {
    /// Rotation number of lambda = e^{2 pi i alpha}: golden, silver, p/q, decimal, cf:a0;a1,...
    #[arg(long, alias = "alpha", value_name = "ALPHA", value_parser = parse_alpha, required_unless_present = "multiplier", conflicts_with = "multiplier")]
    pub lambda: Option<AlphaSpec>,
    /// Multiplier lambda as a complex literal (a+bi)
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    pub multiplier: Option<Complex64>,
    /// Named (P, Q): quadratic = lambda z + z^2/2, exp = lambda(e^z - 1), geyer = lambda z e^z
    #[arg(long, value_enum)]
    pub base: Option<BaseArg>,
    /// Coefficients of P, constant term first
    #[arg(long = "P", required_unless_present = "base", value_name = "COEFFS", value_parser = parse_complex_list, allow_hyphen_values = true)]
    pub p: Option<ComplexList>,
    /// Coefficients of Q, constant term first
    #[arg(long = "Q", value_name = "COEFFS", value_parser = parse_complex_list, allow_hyphen_values = true)]
    pub q: Option<ComplexList>,
    /// Continued-fraction depth used to turn ALPHA into lambda
    #[arg(long, default_value_t = 64)]
    pub cf_depth: usize,
}

/// Comma-separated complex literals taken as one value.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexList(pub Vec<Complex64>);

fn parse_complex_list(s: &str) -> Result<ComplexList, String> {
    parse::complex_list(s).map(ComplexList)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BaseArg {
    Quadratic,
    Exp,
    Geyer,
}

impl BaseArg {
    fn pq(self, lambda: Complex64) -> (Vec<Complex64>, Vec<Complex64>) {
        let c = |x: f64| Complex64::new(x, 0.0);
        match self {
            BaseArg::Quadratic => (vec![c(1.0), lambda.inv()], vec![c(0.0)]),
            BaseArg::Exp => (vec![c(1.0)], vec![c(0.0), c(1.0)]),
            BaseArg::Geyer => (vec![c(1.0), c(1.0)], vec![c(0.0), c(1.0)]),
        }
    }
}

fn parse_alpha(s: &str) -> Result<AlphaSpec, String> {
    AlphaSpec::parse(s).map_err(|e| e.to_string())
}

#[derive(Args, Debug, Clone)]
pub struct BrjunoArgs {
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: AlphaSpec,
    #[arg(long, default_value_t = 40)]
    pub depth: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tail_tol: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct InspectArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    pub z0: Complex64,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 1e3)]
    pub escape_radius: f64,
    /// Write the orbit as CSV (index,re,im,abs)
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct CyclesArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, default_value_t = 1)]
    pub period: usize,
    /// Search rectangle x0,x1,y0,y1
    #[arg(long = "box", default_value = "-4,4,-4,4", value_parser = parse::window, allow_hyphen_values = true)]
    pub search_box: [f64; 4],
    #[arg(long, default_value_t = 16)]
    pub grid: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub indifference_tol: f64,
    /// Also report min |(f^n)'| over each cycle for this n
    #[arg(long)]
    pub expansion_n: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct LinearizeArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, default_value = "0", value_parser = parse::complex, allow_hyphen_values = true)]
    pub fixed_point: Complex64,
    #[arg(long, default_value_t = 100)]
    pub order: usize,
    /// Order up to which the functional equation is checked (default min(order, 40))
    #[arg(long)]
    pub verify_order: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct GammaArgs {
    #[arg(long, default_value = "0", value_parser = parse::complex, allow_hyphen_values = true)]
    pub fixed_point: Complex64,
    /// Order of the linearization series used for the curve
    #[arg(long, default_value_t = 400)]
    pub order: usize,
    #[arg(long, default_value_t = 0.95)]
    pub fraction: f64,
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
}

#[derive(Args, Debug, Clone)]
pub struct SiegelArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[command(flatten)]
    pub gamma: GammaArgs,
    /// Write the samples as CSV (index,re,im,abs)
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Critical,
    Singularity,
}

impl From<KindArg> for FamilyKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Critical => FamilyKind::Critical,
            KindArg::Singularity => FamilyKind::Singularity,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct PerturbArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, default_value = "0,0.05,0.1", value_parser = parse_complex_list, allow_hyphen_values = true)]
    pub b_list: ComplexList,
    #[arg(long, default_value_t = 10)]
    pub order: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct HartogsArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, default_value = "0", value_parser = parse::complex, allow_hyphen_values = true)]
    pub b: Complex64,
    #[arg(long, default_value_t = 1)]
    pub period: usize,
    /// Grid rectangle x0,x1,y0,y1
    #[arg(long, value_parser = parse::window, allow_hyphen_values = true)]
    pub window: [f64; 4],
    /// Grid resolution W H
    #[arg(long, num_args = 2, value_names = ["W", "H"], default_values_t = [65usize, 65])]
    pub res: Vec<usize>,
    /// Write the grid as CSV
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct ProbeManeArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[command(flatten)]
    pub gamma: GammaArgs,
    #[arg(long, default_value_t = 100_000)]
    pub iters: usize,
    #[arg(long, default_value_t = 1e-2)]
    pub eps: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct SubhypArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, default_value_t = 10_000)]
    pub budget: usize,
    /// Compare recurrent orbits with an invariant curve from the linearization at the fixed point
    #[arg(long)]
    pub with_gamma: bool,
    #[command(flatten)]
    pub gamma: GammaArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct RenderArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Image rectangle x0,x1,y0,y1
    #[arg(long, value_parser = parse::window, allow_hyphen_values = true)]
    pub window: [f64; 4],
    /// Image size W H
    #[arg(long, num_args = 2, value_names = ["W", "H"], default_values_t = [256usize, 256])]
    pub res: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e3)]
    pub escape_radius: f64,
    #[arg(long, value_enum, default_value_t = Palette::Grayscale)]
    pub palette: Palette,
    #[arg(long, value_name = "FILE", default_value = "escape.pgm")]
    pub out_image: PathBuf,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(sflab::Error),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<sflab::Error> for CliError {
    fn from(e: sflab::Error) -> Self {
        use sflab::Error as E;
        match e {
            E::Parse(_) | E::Precondition(_) | E::ZeroPolynomial | E::LeadingZero { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Numerical(e),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = Result<T, CliError>;

/// Runs the tool on `argv` (including the program name) and returns the exit code.
pub fn dispatch<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString>,
{
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(argv, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("sflab: {e}");
            e.exit_code()
        }
    }
}

/// Like [`dispatch`] but writes reports to `stdout` and returns the error.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write) -> CliResult<()>
where
    I: IntoIterator<Item = S>,
    S: Into<OsString>,
{
    let original: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let mut args = original.clone();
    let config_path = config::take_config_flag(&mut args).map_err(CliError::Usage)?;
    if let Some(path) = config_path {
        let text = fs::read_to_string(&path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.to_string_lossy())))?;
        let extra = config::config_args(&text).map_err(CliError::Usage)?;
        // splice right after the subcommand name so that command-line flags override
        let at = args.iter().skip(1).position(|a| !a.to_string_lossy().starts_with('-')).map(|p| p + 2);
        match at {
            Some(at) => {
                args.splice(at..at, extra);
            }
            None => return Err(CliError::Usage("--config needs a subcommand".into())),
        }
    }
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                write!(stdout, "{e}")?;
                return Ok(());
            }
            return Err(CliError::Usage(e.to_string()));
        }
    };
    let ctx = Context {
        command_line: original.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
        effective: args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect(),
    };
    match &cli.command {
        Command::Brjuno(a) => cmd_brjuno(&ctx, a, stdout),
        Command::Inspect(a) => cmd_inspect(&ctx, a, stdout),
        Command::Orbit(a) => cmd_orbit(&ctx, a, stdout),
        Command::Cycles(a) => cmd_cycles(&ctx, a, stdout),
        Command::Linearize(a) => cmd_linearize(&ctx, a, stdout),
        Command::Siegel(a) => cmd_siegel(&ctx, a, stdout),
        Command::Perturb(a) => cmd_perturb(&ctx, a, stdout),
        Command::Hartogs(a) => cmd_hartogs(&ctx, a, stdout),
        Command::ProbeMane(a) => cmd_probe_mane(&ctx, a, stdout),
        Command::Subhyp(a) => cmd_subhyp(&ctx, a, stdout),
        Command::Render(a) => cmd_render(&ctx, a, stdout),
    }
}

struct Context {
    command_line: Vec<String>,
    effective: Vec<String>,
}

pub const SCHEMA_VERSION: u32 = 1;

impl Context {
    /// Emits the report according to the output flags; otherwise prints `text`.
    fn emit(
        &self,
        out: &OutputArgs,
        stdout: &mut dyn Write,
        command: &str,
        input: Value,
        result: Value,
        text: &str,
    ) -> CliResult<()> {
        if !out.json && out.report.is_none() {
            stdout.write_all(text.as_bytes())?;
            return Ok(());
        }
        let manifest = RunManifest::new(self.command_line.clone(), &self.effective, input);
        let report = json!({
            "schema": format!("sflab.{command}.v{SCHEMA_VERSION}"),
            "manifest": manifest,
            "result": result,
        });
        let mut body = serde_json::to_string_pretty(&report).map_err(|e| CliError::Io(e.into()))?;
        body.push('\n');
        if let Some(path) = &out.report {
            fs::write(path, &body)?;
        }
        if out.json {
            stdout.write_all(body.as_bytes())?;
        }
        Ok(())
    }
}

fn cj(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn cjs(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().map(|&z| cj(z)).collect())
}

fn lambda_of(f: &FunctionArgs) -> CliResult<Complex64> {
    match (&f.lambda, f.multiplier) {
        (_, Some(m)) => Ok(m),
        (Some(spec), None) => {
            let cf = spec.expand(f.cf_depth)?;
            Ok(rotation_to_lambda(&cf, 17)?)
        }
        (None, None) => Err(CliError::Usage("one of --lambda or --multiplier is required".into())),
    }
}

fn build_function(f: &FunctionArgs) -> CliResult<SfFunction64> {
    let lambda = lambda_of(f)?;
    let (base_p, base_q) = f.base.map(|b| b.pq(lambda)).unwrap_or_else(|| (Vec::new(), vec![Complex64::new(0.0, 0.0)]));
    let p = Polynomial64::new(f.p.as_ref().map(|l| l.0.clone()).unwrap_or(base_p))?;
    let q = Polynomial64::new(f.q.as_ref().map(|l| l.0.clone()).unwrap_or(base_q))?;
    Ok(SfFunction64::make_normalized(lambda, p, q)?)
}

fn function_echo(f: &FunctionArgs, func: &SfFunction64) -> Value {
    json!({
        "alpha": f.lambda.as_ref().map(|a| format!("{a:?}")),
        "lambda": cj(func.lambda()),
        "P": cjs(func.p().coeffs()),
        "Q": cjs(func.q().coeffs()),
        "conjugation_factor": cj(func.conjugation_factor()),
    })
}

fn write_points_csv(path: &PathBuf, points: &[Complex64]) -> CliResult<()> {
    let mut s = String::from("index,re,im,abs\n");
    for (k, z) in points.iter().enumerate() {
        s.push_str(&format!("{k},{},{},{}\n", z.re, z.im, z.norm()));
    }
    fs::write(path, s)?;
    Ok(())
}

fn cmd_brjuno(ctx: &Context, a: &BrjunoArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let cf = a.alpha.expand(a.depth)?;
    let config = BrjunoConfig { tail_tol: a.tail_tol, ..BrjunoConfig::default() };
    let report = brjuno_partial_sums(&cf, a.depth, &config)?;
    let source = match cf.source() {
        CfSource::ExactRational => "exact-rational",
        CfSource::DecimalApprox => "decimal-approx",
        CfSource::Preset => "preset",
    };
    let result = json!({
        "continued_fraction": {
            "integer_part": cf.integer_part().to_string(),
            "quotients": cf.partial_quotients().iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            "convergents": cf.convergents().iter().map(|(p, q)| json!({ "p": p.to_string(), "q": q.to_string() })).collect::<Vec<_>>(),
            "display": cf.to_string(),
            "source": source,
            "terminated": cf.terminated(),
            "truncated_by_precision": cf.truncated_by_precision(),
            "bound_tail": cf.bound_tail().map(|b| json!({ "growth": b.growth, "missing": b.missing })),
        },
        "depth": report.depth,
        "terms": report.terms,
        "partial_sums": report.partial_sums,
        "last_gap": report.terms.last(),
        "verdict": report.verdict.as_str(),
        "bound_terms_from": report.bound_terms_from,
        "tail_bound": report.tail_bound,
    });
    let text = format!(
        "alpha = {}\ndepth = {}\nsum = {}\nverdict = {}\n",
        cf,
        report.depth,
        report.partial_sums.last().copied().unwrap_or(0.0),
        report.verdict.as_str()
    );
    let input = json!({ "alpha": format!("{:?}", a.alpha), "depth": a.depth, "tail_tol": a.tail_tol });
    ctx.emit(&a.out, stdout, "brjuno", input, result, &text)
}

fn cmd_inspect(ctx: &Context, a: &InspectArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let f = build_function(&a.function)?;
    let data = singular_data(&f, &SingularConfig::default())?;
    let (p, q) = f.type_pq();
    let result = json!({
        "type": [p, q],
        "critical_points": data.critical_points.iter().zip(&data.critical_values).map(|(c, v)| json!({
            "location": cj(c.location),
            "multiplicity": c.multiplicity,
            "critical_value": cj(*v),
        })).collect::<Vec<_>>(),
        "asymptotic_values": data.asymptotic_values.iter().map(|av| json!({
            "value": cj(av.value),
            "tract_direction": av.tract_direction,
            "cutoff_radius": av.cutoff_radius,
            "error": av.error,
            "converged": av.converged,
        })).collect::<Vec<_>>(),
        "counts": { "critical": data.counts.0, "tracts": data.counts.1 },
    });
    let mut text = format!("type = ({p}, {q})\n");
    for (c, v) in data.critical_points.iter().zip(&data.critical_values) {
        text.push_str(&format!("critical point {} (multiplicity {}) -> {}\n", c.location, c.multiplicity, v));
    }
    for av in &data.asymptotic_values {
        text.push_str(&format!("asymptotic value {} along {:.6}\n", av.value, av.tract_direction));
    }
    ctx.emit(&a.out, stdout, "inspect", function_echo(&a.function, &f), result, &text)
}

fn cmd_orbit(ctx: &Context, a: &OrbitArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let f = build_function(&a.function)?;
    let orbit = iterate(&f, a.z0, a.n, a.escape_radius)?;
    if let Some(path) = &a.csv {
        write_points_csv(path, &orbit.samples)?;
    }
    let last = *orbit.samples.last().expect("orbit is never empty");
    let period = match orbit.final_status {
        sflab::dynamics::OrbitStatus::ConvergedToCycle { period } => Some(period),
        _ => None,
    };
    let result = json!({
        "status": orbit.final_status.as_str(),
        "period": period,
        "escaped": orbit.escaped,
        "escape_index": orbit.escape_index,
        "length": orbit.samples.len(),
        "last": cj(last),
    });
    let text =
        format!("status = {}\nsamples = {}\nlast = {}\n", orbit.final_status.as_str(), orbit.samples.len(), last);
    let mut input = function_echo(&a.function, &f);
    input["z0"] = cj(a.z0);
    input["n"] = json!(a.n);
    input["escape_radius"] = json!(a.escape_radius);
    ctx.emit(&a.out, stdout, "orbit", input, result, &text)
}

fn cmd_cycles(ctx: &Context, a: &CyclesArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let f = build_function(&a.function)?;
    let [x0, x1, y0, y1] = a.search_box;
    let rect = Rect::new(x0, x1, y0, y1)?;
    let cycles = find_periodic_points(&f, a.period, rect, a.grid, a.tol)?;
    let mut records = Vec::with_capacity(cycles.len());
    let mut text = String::new();
    for c in cycles {
        let c = classify_cycle(c, a.indifference_tol);
        let expansion = match a.expansion_n {
            Some(n) => Some(expansion_metric(&f, &c.points, n)?.value),
            None => None,
        };
        text.push_str(&format!(
            "period {} at {} multiplier {} ({})\n",
            c.period,
            c.points[0],
            c.multiplier,
            c.classification.as_str()
        ));
        records.push(json!({
            "period": c.period,
            "points": cjs(&c.points),
            "multiplier": cj(c.multiplier),
            "multiplier_abs": c.multiplier.norm(),
            "classification": c.classification.as_str(),
            "rotation_number": c.rotation_number,
            "residual": c.residual,
            "expansion": expansion,
        }));
    }
    let mut input = function_echo(&a.function, &f);
    input["period"] = json!(a.period);
    input["box"] = json!(a.search_box);
    input["grid"] = json!(a.grid);
    input["tol"] = json!(a.tol);
    ctx.emit(&a.out, stdout, "cycles", input, json!({ "cycles": records }), &text)
}

fn cmd_linearize(ctx: &Context, a: &LinearizeArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let f = build_function(&a.function)?;
    let local = recenter(&f, a.fixed_point, a.order)?;
    let lin = schroeder(&local, a.order)?;
    let verify_order = a.verify_order.unwrap_or(a.order.min(40)).min(a.order);
    let residual = verify_conjugacy(&local, &lin, verify_order)?;
    let coefficients: Vec<Value> = lin
        .coefficients
        .iter()
        .enumerate()
        .map(|(k, c)| json!({ "n": k + 1, "log_abs": c.ln_abs(), "phase": c.mant.arg() }))
        .collect();
    let result = json!({
        "order": lin.order(),
        "lambda": cj(lin.lambda),
        "fixed_point": cj(lin.center),
        "coefficients": coefficients,
        "divisor_log": lin.divisor_log,
        "radius_estimate": lin.radius_estimate,
        "near_resonance_flags": lin.near_resonance_flags,
        "verify_order": verify_order,
        "conjugacy_residual": residual,
    });
    let text = format!(
        "order = {}\nradius estimate = {}\nconjugacy residual (N = {verify_order}) = {residual:e}\n",
        lin.order(),
        lin.radius_estimate.map(|r| r.to_string()).unwrap_or_else(|| "unbounded".into())
    );
    let mut input = function_echo(&a.function, &f);
    input["fixed_point"] = cj(a.fixed_point);
    input["order"] = json!(a.order);
    ctx.emit(&a.out, stdout, "linearize", input, result, &text)
}

/// Invariant-curve samples and the radius estimate they came from.
fn gamma_samples(f: &SfFunction64, g: &GammaArgs) -> CliResult<(Vec<Complex64>, f64)> {
    let local = recenter(f, g.fixed_point, g.order)?;
    let lin = schroeder(&local, g.order)?;
    let radius = lin
        .radius_estimate
        .ok_or_else(|| CliError::Numerical(sflab::Error::SeriesDivergent { radius: f64::INFINITY }))?;
    Ok((boundary_samples(&lin, g.fraction, g.samples)?, radius))
}

fn gamma_echo(g: &GammaArgs) -> Value {
    json!({ "fixed_point": cj(g.fixed_point), "order": g.order, "fraction": g.fraction, "samples": g.samples })
}

fn cmd_siegel(ctx: &Context, a: &SiegelArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let f = build_function(&a.function)?;
    let (points, radius) = gamma_samples(&f, &a.gamma)?;
    if let Some(path) = &a.csv {
        write_points_csv(path, &points)?;
    }
    let result = json!({
        "radius_estimate": radius,
        "radius": a.gamma.fraction * radius,
        "samples": cjs(&points),
    });
    let text = format!("radius estimate = {radius}\nsamples = {}\n", points.len());
    let mut input = function_echo(&a.function, &f);
    input["gamma"] = gamma_echo(&a.gamma);
    ctx.emit(&a.out, stdout, "siegel", input, result, &text)
}

fn cmd_perturb(ctx: &Context, a: &PerturbArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let f = build_function(&a.function)?;
    let fam = PerturbationFamily::new(f.clone(), a.kind.into())?;
    let mut members = Vec::with_capacity(a.b_list.0.len());
    let mut text = String::new();
    for &b in &a.b_list.0 {
        let m = rescaled_member(&fam, b, a.order)?;
        let h = remainder_h(&fam, b, a.order)?;
        let h_max = h.coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let unscaled = if b == Complex64::new(0.0, 0.0) {
            Value::Null
        } else {
            let fb = family_member(&fam, b)?;
            json!({ "P": cjs(fb.p().coeffs()), "Q": cjs(fb.q().coeffs()) })
        };
        text.push_str(&format!("b = {b}: max |F_b - F_0| coefficient = {h_max:e}\n"));
        members.push(json!({
            "b": cj(b),
            "family_member": unscaled,
            "rescaled": { "P": cjs(m.closed_form.p().coeffs()), "Q": cjs(m.closed_form.q().coeffs()) },
            "series": cjs(&m.series.coefficients),
            "remainder": cjs(&h.coefficients),
            "remainder_max": h_max,
        }));
    }
    let mut input = function_echo(&a.function, &f);
    input["kind"] = json!(fam.kind().as_str());
    input["b_list"] = cjs(&a.b_list.0);
    input["order"] = json!(a.order);
    ctx.emit(&a.out, stdout, "perturb", input, json!({ "kind": fam.kind().as_str(), "members": members }), &text)
}

fn resolution(res: &[usize]) -> CliResult<(usize, usize)> {
    match res {
        [w, h] if *w >= 1 && *h >= 1 => Ok((*w, *h)),
        _ => Err(CliError::Usage("resolution needs two positive integers W H".into())),
    }
}

fn cmd_hartogs(ctx: &Context, a: &HartogsArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let f = build_function(&a.function)?;
    let fam = PerturbationFamily::new(f.clone(), a.kind.into())?;
    let [x0, x1, y0, y1] = a.window;
    let (w, h) = resolution(&a.res)?;
    let grid = hartogs_grid(&fam, a.b, a.period, Rect::new(x0, x1, y0, y1)?, w, h)?;
    if let Some(path) = &a.csv {
        let mut s = String::from("row,col,re_z,im_z,re_h,im_h,pole,overflow\n");
        for (k, c) in grid.cells.iter().enumerate() {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                k / w,
                k % w,
                c.z.re,
                c.z.im,
                c.value.re,
                c.value.im,
                c.pole as u8,
                c.overflow as u8
            ));
        }
        fs::write(path, s)?;
    }
    let poles: Vec<Value> = grid.cells.iter().filter(|c| c.pole).map(|c| cj(c.z)).collect();
    let overflow = grid.cells.iter().filter(|c| c.overflow).count();
    let origin = grid.cells.iter().find(|c| c.z == Complex64::new(0.0, 0.0)).map(|c| cj(c.value));
    let lambda_n = (0..a.period).fold(Complex64::new(1.0, 0.0), |acc, _| acc * f.lambda());
    let result = json!({
        "b": cj(a.b),
        "period": a.period,
        "width": w,
        "height": h,
        "poles": poles,
        "overflow_cells": overflow,
        "value_at_origin": origin,
        "origin_limit": cj((lambda_n - 1.0).inv()),
    });
    let text = format!("cells = {}\npoles = {}\noverflow = {overflow}\n", grid.cells.len(), poles.len());
    let mut input = function_echo(&a.function, &f);
    input["kind"] = json!(fam.kind().as_str());
    input["b"] = cj(a.b);
    input["period"] = json!(a.period);
    input["window"] = json!(a.window);
    input["res"] = json!([w, h]);
    ctx.emit(&a.out, stdout, "hartogs", input, result, &text)
}

fn correspondence_json(c: &sflab::dynamics::Correspondence<f64>) -> Value {
    json!({
        "kind": c.kind.as_str(),
        "start": cj(c.start),
        "min_distance": c.min_distance,
        "accumulation_score": c.accumulation_score,
        "status": c.status.as_str(),
        "orbit_status": c.orbit_status.as_str(),
        "iterations": c.iterations,
    })
}

fn cmd_probe_mane(ctx: &Context, a: &ProbeManeArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let f = build_function(&a.function)?;
    let (gamma, radius) = gamma_samples(&f, &a.gamma)?;
    let report = mane_probe(&f, &gamma, a.iters, a.eps)?;
    let mut text = String::new();
    for c in &report.records {
        text.push_str(&format!(
            "{} {}: score {:.4}, min distance {:e}, {}\n",
            c.kind.as_str(),
            c.start,
            c.accumulation_score,
            c.min_distance,
            c.status.as_str()
        ));
    }
    let result = json!({
        "radius_estimate": radius,
        "eps": report.eps,
        "gamma_samples": report.gamma_len,
        "records": report.records.iter().map(correspondence_json).collect::<Vec<_>>(),
    });
    let mut input = function_echo(&a.function, &f);
    input["gamma"] = gamma_echo(&a.gamma);
    input["iters"] = json!(a.iters);
    input["eps"] = json!(a.eps);
    ctx.emit(&a.out, stdout, "probe-mane", input, result, &text)
}

fn cmd_subhyp(ctx: &Context, a: &SubhypArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let f = build_function(&a.function)?;
    let gamma = if a.with_gamma { Some(gamma_samples(&f, &a.gamma)?.0) } else { None };
    let report = subhyperbolicity_report(&f, a.budget, gamma.as_deref())?;
    let mut text = String::new();
    for e in &report.entries {
        text.push_str(&format!("{} {}: {}\n", e.kind.as_str(), e.value, e.fate.as_str()));
    }
    text.push_str(&format!("recurrent near gamma: {}\n", report.recurrent_count));
    let result = json!({
        "budget": report.budget,
        "entries": report.entries.iter().map(|e| json!({
            "kind": e.kind.as_str(),
            "value": cj(e.value),
            "fate": e.fate.as_str(),
            "period": e.period,
            "accumulation_score": e.accumulation_score,
        })).collect::<Vec<_>>(),
        "recurrent_count": report.recurrent_count,
        "preperiodic_test": "orbit self-distance below 1e-9 (heuristic)",
    });
    let mut input = function_echo(&a.function, &f);
    input["budget"] = json!(a.budget);
    input["gamma"] = if a.with_gamma { gamma_echo(&a.gamma) } else { Value::Null };
    ctx.emit(&a.out, stdout, "subhyp", input, result, &text)
}

fn cmd_render(ctx: &Context, a: &RenderArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let f = build_function(&a.function)?;
    let [x0, x1, y0, y1] = a.window;
    let (width, height) = resolution(&a.res)?;
    let cfg = RenderConfig {
        window: Rect { x0, x1, y0, y1 },
        width,
        height,
        max_iter: a.max_iter,
        escape_radius: a.escape_radius,
        palette: a.palette,
    };
    cfg.validate().map_err(CliError::Usage)?;
    let pixels = render_escape(&f, &cfg);
    let mut bytes = Vec::with_capacity(pixels.len() + 32);
    write_pgm(&mut bytes, width, height, &pixels)?;
    fs::write(&a.out_image, &bytes)?;
    let black = pixels.iter().filter(|&&p| p == 0).count();
    let result = json!({
        "image": a.out_image.to_string_lossy(),
        "width": width,
        "height": height,
        "bounded_pixels": black,
        "sha256": manifest::sha256_hex(&bytes),
    });
    let text = format!("wrote {} ({width}x{height}, {black} bounded pixels)\n", a.out_image.display());
    let mut input = function_echo(&a.function, &f);
    input["window"] = json!(a.window);
    input["res"] = json!([width, height]);
    input["max_iter"] = json!(a.max_iter);
    input["escape_radius"] = json!(a.escape_radius);
    input["palette"] = json!(match a.palette {
        Palette::Grayscale => "grayscale",
        Palette::LogIteration => "log-iteration",
    });
    ctx.emit(&a.out, stdout, "render", input, result, &text)
}
