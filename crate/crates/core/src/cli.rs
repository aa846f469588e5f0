//! The `torsionlab` command line: Alexander polynomials, torsion tables,
//! symmetry reports and the invariant suites, as JSON or CSV.

use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::alexl2::{
    backend_offset, real_scale, symmetry_report, AdmissibleTripleAbelian, Backend, SymmetryReport, TorsionFunction,
};
use crate::chain::{torsion_with, torus_complex, TorsionMethod};
use crate::error::{Error, Result};
use crate::fkdet::QuadratureSettings;
use crate::groupring::LaurentPoly;
use crate::knot::{bundled, bundled_names, parse_braid, parse_pd, KnotRecord};
use crate::verify::{run_suite, Suite, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_NONCONVERGENCE: i32 = 4;
pub const EXIT_INVARIANT: i32 = 5;

const TORUS_NORMALIZATION: &str = "torus complex, given Euler lift";

#[derive(Debug, Parser)]
#[command(name = "torsionlab", version, about = "L2-Alexander torsion of knots in the abelian case")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalized Alexander polynomial of a knot.
    Alex {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Torsion function values on a grid of t.
    Torsion {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        eval: EvalArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fit n in tau(1/t) = t^n tau(t) and check its parity against 2g - 1.
    Symmetry {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        eval: EvalArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the randomized invariant suites.
    Verify {
        /// fkdet, duality, euler, torus, alexander or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Cases per check, overriding each suite's default.
        #[arg(long)]
        cases: Option<usize>,
        #[arg(long, env = "TORSIONLAB_SEED", default_value_t = VerifyConfig::default().seed)]
        seed: u64,
        #[command(flatten)]
        quad: QuadArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Bundled knot name (unknot, trefoil, figure-eight).
    #[arg(long)]
    pub knot: Option<String>,
    /// Braid word, e.g. "strands=3; s1 s2^-1 s1 s2^-1".
    #[arg(long)]
    pub braid: Option<String>,
    /// PD code, e.g. "PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]".
    #[arg(long)]
    pub pd: Option<String>,
    /// File holding a braid word or a PD code.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Torus complex with phi-values a,b.
    #[arg(long, allow_hyphen_values = true)]
    pub torus: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendChoice {
    Roots,
    Quadrature,
    Both,
}

impl BackendChoice {
    fn backends(self) -> Vec<Backend> {
        match self {
            BackendChoice::Roots => vec![Backend::Roots],
            BackendChoice::Quadrature => vec![Backend::Quadrature],
            BackendChoice::Both => vec![Backend::Roots, Backend::Quadrature],
        }
    }
}

#[derive(Debug, Args)]
pub struct QuadArgs {
    /// Initial number of quadrature nodes (power of two, at least 16).
    #[arg(long, default_value_t = 64)]
    pub quad_nodes: usize,
    /// Target difference between successive quadrature estimates.
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
}

impl QuadArgs {
    fn settings(&self) -> Result<QuadratureSettings> {
        QuadratureSettings::new(self.quad_nodes, QuadratureSettings::default().refinement_limit(), self.tol)
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Comma-separated values of t.
    #[arg(long = "t", value_delimiter = ',', allow_hyphen_values = true)]
    pub t: Vec<f64>,
    #[arg(long, value_enum, default_value_t = BackendChoice::Roots)]
    pub backend: BackendChoice,
    #[command(flatten)]
    pub quad: QuadArgs,
    /// Replace phi by r * phi.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub real_scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Omit the timestamp so output is byte-identical across runs.
    #[arg(long)]
    pub reproducible: bool,
}

/// Rendered output and process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub exit: i32,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Diagram(_) | Error::LinkClosure(_) | Error::Degenerate(_) => EXIT_PARSE,
        Error::NonConvergence { .. } | Error::RankDisagreement(_) => EXIT_NONCONVERGENCE,
        Error::InvalidArgument(_) | Error::NotAdmissible(_) | Error::TorusUndefined => EXIT_USAGE,
        Error::Vacuous(_) => EXIT_OK,
        Error::NotInDomain(_) | Error::Shape(_) | Error::DegreeBoundOverflow { .. } | Error::BoundaryResidual(_) => {
            EXIT_INVARIANT
        }
    }
}

/// `%.12g`-style formatting.
pub fn fmt_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    const DIGITS: i32 = 12;
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if !(-4..DIGITS).contains(&exp) {
        format!("{}e{}{:02}", trim(mantissa.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        trim(format!("{:.*}", (DIGITS - 1 - exp).max(0) as usize, x))
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

enum Input {
    Knot(KnotRecord),
    Torus(i64, i64),
}

fn read_input(args: &InputArgs) -> Result<Input> {
    if let Some(name) = &args.knot {
        return bundled(name).map(Input::Knot).ok_or_else(|| {
            Error::InvalidArgument(format!("unknown knot {name:?}; bundled: {}", bundled_names().join(", ")))
        });
    }
    if let Some(b) = &args.braid {
        return Ok(Input::Knot(KnotRecord::from_braid(b.trim(), parse_braid(b)?)));
    }
    if let Some(p) = &args.pd {
        return Ok(Input::Knot(KnotRecord::from_pd(p.trim(), parse_pd(p)?)));
    }
    if let Some(path) = &args.file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        let name = path.display().to_string();
        return if text.trim_start().starts_with("PD") {
            Ok(Input::Knot(KnotRecord::from_pd(&name, parse_pd(text.trim())?)))
        } else {
            Ok(Input::Knot(KnotRecord::from_braid(&name, parse_braid(&text)?)))
        };
    }
    if let Some(pair) = &args.torus {
        let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
        let parsed: Vec<i64> = parts.iter().filter_map(|p| p.parse().ok()).collect();
        if parts.len() != 2 || parsed.len() != 2 {
            return Err(Error::InvalidArgument(format!("--torus expects two integers a,b, got {pair:?}")));
        }
        if parsed == [0, 0] {
            return Err(Error::TorusUndefined);
        }
        return Ok(Input::Torus(parsed[0], parsed[1]));
    }
    Err(Error::InvalidArgument("no input given".into()))
}

fn knot_input(args: &InputArgs) -> Result<KnotRecord> {
    match read_input(args)? {
        Input::Knot(k) => Ok(k),
        Input::Torus(..) => Err(Error::InvalidArgument("--torus is only supported by the torsion command".into())),
    }
}

fn envelope(command: &str, output: &OutputArgs, mut body: Map<String, Value>) -> String {
    let mut obj = Map::new();
    obj.insert("command".into(), json!(command));
    obj.append(&mut body);
    if !output.reproducible {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        obj.insert("timestamp".into(), json!(secs));
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("json serializes");
    s.push('\n');
    s
}

fn coefficient_values(p: &LaurentPoly) -> Vec<Value> {
    match p.integer_coeffs(1e-9) {
        Some(ints) => ints.into_iter().map(Value::from).collect(),
        None => p.coeffs().iter().map(|c| json!([c.re, c.im])).collect(),
    }
}

fn cmd_alex(input: &InputArgs, output: &OutputArgs) -> Result<Outcome> {
    let rec = knot_input(input)?;
    let delta = rec.alexander()?;
    let mirrored = crate::knot::normalize_alexander(&delta.involute());
    let symmetric = mirrored.distance(&delta) <= 1e-9;
    let det = delta.eval(Complex64::new(1.0, 0.0)).norm();
    let text = match output.format {
        Format::Json => {
            let mut body = Map::new();
            body.insert("knot".into(), json!(rec.name));
            body.insert("coefficients".into(), Value::Array(coefficient_values(&delta)));
            body.insert("polynomial".into(), json!(delta.to_string()));
            body.insert("span".into(), json!(delta.span()));
            body.insert("symmetric".into(), json!(symmetric));
            body.insert("abs_delta_at_1".into(), json!(det));
            envelope("alex", output, body)
        }
        Format::Csv => {
            let mut s = String::from("exponent,coefficient\n");
            for (k, c) in delta.terms() {
                s.push_str(&format!("{k},{}\n", fmt_g(c.re)));
            }
            s
        }
    };
    Ok(Outcome { text, exit: if symmetric { EXIT_OK } else { EXIT_INVARIANT } })
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("--t needs at least one value".into()));
    }
    if let Some(t) = grid.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        return Err(Error::InvalidArgument(format!("grid values must be positive, got {t}")));
    }
    Ok(())
}

struct Row {
    t: f64,
    value: Option<f64>,
    backend: &'static str,
    normalization: &'static str,
    error: Option<String>,
}

fn cmd_torsion(input: &InputArgs, eval: &EvalArgs, output: &OutputArgs) -> Result<Outcome> {
    check_grid(&eval.t)?;
    let settings = eval.quad.settings()?;
    if eval.real_scale == 0.0 || !eval.real_scale.is_finite() {
        return Err(Error::InvalidArgument("--real-scale must be finite and nonzero".into()));
    }
    let mut rows = Vec::new();
    let mut extra = Map::new();
    match read_input(input)? {
        Input::Torus(a, b) => {
            for backend in eval.backend.backends() {
                let method = match backend {
                    Backend::Roots => TorsionMethod::Exact,
                    Backend::Quadrature => TorsionMethod::Quadrature(settings),
                };
                for &t in &eval.t {
                    let v = torus_complex(a, b, t.powf(eval.real_scale)).and_then(|c| torsion_with(&c, &method));
                    rows.push(Row {
                        t,
                        value: v.as_ref().ok().map(|v| v.value),
                        backend: backend.name(),
                        normalization: TORUS_NORMALIZATION,
                        error: v.err().map(|e| e.to_string()),
                    });
                }
            }
            extra.insert("input".into(), json!(format!("torus {a},{b}")));
        }
        Input::Knot(rec) => {
            let triple = real_scale(&AdmissibleTripleAbelian::from_record(&rec)?, eval.real_scale)?;
            for backend in eval.backend.backends() {
                let f = TorsionFunction::new(triple.clone(), backend).with_settings(settings);
                for &t in &eval.t {
                    let v = f.eval(t);
                    if let Err(e) = &v {
                        if !matches!(e, Error::NonConvergence { .. } | Error::RankDisagreement(_)) {
                            return Err(e.clone());
                        }
                    }
                    rows.push(Row {
                        t,
                        value: v.as_ref().ok().copied(),
                        backend: backend.name(),
                        normalization: backend.normalization(),
                        error: v.err().map(|e| e.to_string()),
                    });
                }
            }
            extra.insert("input".into(), json!(rec.name));
            extra.insert("alexander".into(), json!(triple.alexander().to_string()));
            if eval.backend == BackendChoice::Both && rows.iter().all(|r| r.error.is_none()) {
                if let Ok((m, residual)) = backend_offset(&triple, &eval.t, &settings) {
                    extra.insert("offset_m".into(), json!(m));
                    extra.insert("offset_residual".into(), json!(residual));
                }
            }
        }
    }
    let failed = rows.iter().any(|r| r.error.is_some());
    let text = match output.format {
        Format::Csv => {
            let mut s = String::from("t,value,backend,normalization\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt_g(r.t),
                    r.value.map_or("NaN".to_string(), fmt_g),
                    r.backend,
                    csv_field(r.normalization)
                ));
            }
            s
        }
        Format::Json => {
            let mut body = extra;
            body.insert("real_scale".into(), json!(eval.real_scale));
            let json_rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut o = Map::new();
                    o.insert("t".into(), json!(r.t));
                    o.insert("value".into(), r.value.map_or(Value::Null, Value::from));
                    o.insert("backend".into(), json!(r.backend));
                    o.insert("normalization".into(), json!(r.normalization));
                    if let Some(e) = &r.error {
                        o.insert("error".into(), json!(e));
                    }
                    Value::Object(o)
                })
                .collect();
            body.insert("rows".into(), Value::Array(json_rows));
            envelope("torsion", output, body)
        }
    };
    Ok(Outcome { text, exit: if failed { EXIT_NONCONVERGENCE } else { EXIT_OK } })
}

fn report_json(backend: Backend, r: &SymmetryReport) -> Value {
    json!({
        "backend": backend.name(),
        "normalization": backend.normalization(),
        "grid": r.grid,
        "exponents": r.exponents,
        "fitted_n": r.fitted,
        "spread": r.spread,
        "integrality_residual": r.integrality_residual,
        "parity": r.parity,
        "expected_parity": r.expected_parity,
        "result": if r.pass { "PASS" } else { "FAIL" },
    })
}

fn cmd_symmetry(input: &InputArgs, eval: &EvalArgs, output: &OutputArgs) -> Result<Outcome> {
    let grid = if eval.t.is_empty() { vec![2.0, 3.0, 5.0] } else { eval.t.clone() };
    check_grid(&grid)?;
    let settings = eval.quad.settings()?;
    let rec = knot_input(input)?;
    let triple = real_scale(&AdmissibleTripleAbelian::from_record(&rec)?, eval.real_scale)?;
    let mut reports = Vec::new();
    let mut vacuous = None;
    for backend in eval.backend.backends() {
        let f = TorsionFunction::new(triple.clone(), backend).with_settings(settings);
        match symmetry_report(&f, &grid) {
            Ok(r) => reports.push((backend, r)),
            Err(Error::Vacuous(t)) => {
                vacuous = Some(t);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let pass = reports.iter().all(|(_, r)| r.pass);
    let text = match output.format {
        Format::Json => {
            let mut body = Map::new();
            body.insert("input".into(), json!(rec.name));
            body.insert("real_scale".into(), json!(eval.real_scale));
            body.insert("genus".into(), json!(triple.genus()));
            body.insert("vacuous".into(), json!(vacuous.is_some()));
            if let Some(t) = vacuous {
                body.insert("note".into(), json!(Error::Vacuous(t).to_string()));
            }
            body.insert("reports".into(), Value::Array(reports.iter().map(|(b, r)| report_json(*b, r)).collect()));
            envelope("symmetry", output, body)
        }
        Format::Csv => {
            let mut s = String::from("backend,t,exponent\n");
            for (b, r) in &reports {
                for (t, n) in r.grid.iter().zip(&r.exponents) {
                    s.push_str(&format!("{},{},{}\n", b.name(), fmt_g(*t), fmt_g(*n)));
                }
            }
            s
        }
    };
    Ok(Outcome { text, exit: if pass { EXIT_OK } else { EXIT_INVARIANT } })
}

fn cmd_verify(suite: &str, cases: Option<usize>, seed: u64, quad: &QuadArgs, output: &OutputArgs) -> Result<Outcome> {
    let suites = Suite::parse(suite).ok_or_else(|| {
        Error::InvalidArgument(format!("unknown suite {suite:?}; use fkdet, duality, euler, torus, alexander or all"))
    })?;
    if cases == Some(0) {
        return Err(Error::InvalidArgument("--cases must be positive".into()));
    }
    let cfg = VerifyConfig { seed, cases, settings: quad.settings()? };
    let reports: Vec<_> = suites.iter().map(|&s| run_suite(s, &cfg)).collect();
    let pass = reports.iter().all(|r| r.pass());
    let text = match output.format {
        Format::Json => {
            let mut body = Map::new();
            body.insert("seed".into(), json!(seed));
            body.insert("result".into(), json!(if pass { "PASS" } else { "FAIL" }));
            body.insert("suites".into(), serde_json::to_value(&reports).expect("reports serialize"));
            envelope("verify", output, body)
        }
        Format::Csv => {
            let mut s = String::from("suite,check,passed,total,max_residual,result\n");
            for r in &reports {
                for c in &r.checks {
                    s.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        r.suite.name(),
                        csv_field(&c.name),
                        c.passed,
                        c.total,
                        fmt_g(c.max_residual),
                        if c.pass() { "PASS" } else { "FAIL" }
                    ));
                }
            }
            s
        }
    };
    Ok(Outcome { text, exit: if pass { EXIT_OK } else { EXIT_INVARIANT } })
}

fn output_args(cmd: &Command) -> &OutputArgs {
    match cmd {
        Command::Alex { output, .. }
        | Command::Torsion { output, .. }
        | Command::Symmetry { output, .. }
        | Command::Verify { output, .. } => output,
    }
}

/// Runs a parsed command. Errors are rendered as a message with the matching exit code.
pub fn run(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Alex { input, output } => cmd_alex(input, output),
        Command::Torsion { input, eval, output } => cmd_torsion(input, eval, output),
        Command::Symmetry { input, eval, output } => cmd_symmetry(input, eval, output),
        Command::Verify { suite, cases, seed, quad, output } => cmd_verify(suite, *cases, *seed, quad, output),
    };
    match result {
        Ok(o) => o,
        Err(e) => Outcome { text: format!("error: {e}\n"), exit: exit_code(&e) },
    }
}

/// Parses `args` (including the program name) and runs; usage errors exit with 2.
pub fn run_from_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let exit = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            Outcome { text: e.render().to_string(), exit }
        }
    }
}

/// Where the rendered text of `cli` should go.
pub fn output_path(cli: &Cli) -> Option<&PathBuf> {
    output_args(&cli.command).output.as_ref()
}
