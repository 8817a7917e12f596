//! Command-line front end.
//!
//! ```text
//! maxbv m1d eval --fn triangle.txt --x 0.5
//! maxbv m2d field --shape "disk 0 0 1" --grid -3 -3 0.05 121 121
//! maxbv verify all --parallel
//! maxbv repro annulus --out plots/
//! ```
//!
//! Exit status is 0 on success, 1 when a verification check fails and 2 for
//! bad flags or invalid input.

use crate::bvfunc1d::{Domain1D, FunctionDoc, PiecewiseFunction1D};
use crate::corpus::{corpus, corpus_function};
use crate::error::{Error, Result};
use crate::geometry2d::{make_shape, ArcRegion2D, Point, ShapeSpec};
use crate::maximal1d::{variation_of_maximal, MaximalOperator1D};
use crate::maximal2d::{sobolev_ratio_with, Domain2D, Field2D, GridSpec, MaximalOperator2D};
use crate::tolerances::Tolerances;
use crate::verify::{reproduce, run_all, run_suite, Context, Report};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::path::{Path, PathBuf};

pub const THREADS_ENV: &str = "MAXBV_THREADS";

#[derive(Debug, Parser)]
#[command(name = "maxbv", version, about = "Non-centered maximal operator on BV data")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// key=value file of tolerance overrides.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Tolerance override, e.g. `--tol contact=1e-9`. Wins over --config.
    #[arg(long = "tol", global = true, value_name = "KEY=VALUE")]
    pub tol: Vec<String>,
    /// Worker threads. Falls back to MAXBV_THREADS, then to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output file, or directory for `repro`. Defaults to stdout (`.` for `repro`).
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Report zero runtimes so that reports are byte-identical across runs.
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One-dimensional operator.
    M1d {
        #[command(subcommand)]
        op: M1dOp,
    },
    /// Planar operator.
    M2d {
        #[command(subcommand)]
        op: M2dOp,
    },
    /// Run a verification suite, or `all`.
    Verify {
        suite: String,
        /// Run suites concurrently.
        #[arg(long)]
        parallel: bool,
    },
    /// Reproduce a worked example and write its CSV files.
    Repro { id: String },
    /// List or export the shipped function corpus.
    Corpus {
        #[command(subcommand)]
        op: CorpusOp,
    },
}

#[derive(Debug, Args)]
pub struct FnArgs {
    /// Function file (text format, or JSON when the name ends in .json).
    #[arg(long = "fn", value_name = "FILE", conflicts_with = "corpus")]
    pub file: Option<PathBuf>,
    /// Shipped corpus function by name.
    #[arg(long)]
    pub corpus: Option<String>,
    /// Component `A B` of Ω; repeat for several. Defaults to the domain of the function.
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true, action = clap::ArgAction::Append)]
    pub omega: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum M1dOp {
    /// `M u(x)` with a maximizing interval.
    Eval {
        #[command(flatten)]
        f: FnArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
    },
    /// Contact intervals and their minimum points.
    Structure {
        #[command(flatten)]
        f: FnArgs,
    },
    /// Total variation of `M u` from the contact structure.
    Variation {
        #[command(flatten)]
        f: FnArgs,
    },
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    /// Shape for an indicator field, e.g. "disk 0 0 1" or "polygon 0 0 1 0 0 1".
    #[arg(long, conflicts_with = "affine")]
    pub shape: Option<String>,
    /// Affine field `GX GY C`, i.e. `u(x) = g·x + c` on --box.
    #[arg(long, num_args = 3, value_names = ["GX", "GY", "C"], allow_hyphen_values = true, requires = "bbox")]
    pub affine: Option<Vec<f64>>,
    /// Box `X0 Y0 X1 Y1` of the affine field; also the default domain.
    #[arg(long = "box", id = "bbox", num_args = 4, value_names = ["X0", "Y0", "X1", "Y1"], allow_hyphen_values = true)]
    pub bbox: Option<Vec<f64>>,
    /// `plane` or `rect X0 Y0 X1 Y1`.
    #[arg(long)]
    pub domain: Option<String>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Lattice `X0 Y0 H NX NY`.
    #[arg(long, num_args = 5, value_names = ["X0", "Y0", "H", "NX", "NY"], allow_hyphen_values = true)]
    pub grid: Option<Vec<String>>,
}

#[derive(Debug, Subcommand)]
pub enum M2dOp {
    /// Optimal ball at a point.
    Ball {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_hyphen_values = true, required = true)]
        point: Vec<f64>,
    },
    /// CSV of `M` and optimal balls on a lattice.
    Field {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Finite-difference gradient against the derivative formula.
    Grad {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_hyphen_values = true, required = true)]
        point: Vec<f64>,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
    },
    /// `‖∇M 1_E‖₁ / Per(E)` on a lattice.
    Ratio {
        #[command(flatten)]
        field: FieldArgs,
        /// Lattice; defaults to the bounding box padded by 5 with spacing --h.
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 0.1)]
        h: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum CorpusOp {
    List,
    /// Write every corpus function as a text file into --out.
    Export,
}

/// Parses `key=value` lines; `#` starts a comment.
pub fn parse_config(text: &str, tol: &mut Tolerances) -> Result<()> {
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line: idx + 1, message };
        let (key, value) = line.split_once('=').ok_or_else(|| err(format!("expected key=value, got `{line}`")))?;
        let value: f64 = value.trim().parse().map_err(|_| err(format!("not a number: `{}`", value.trim())))?;
        tol.set(key.trim(), value)?;
    }
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Argument(format!("cannot read {}: {e}", path.display())))
}

fn tolerances(g: &GlobalArgs) -> Result<Tolerances> {
    let mut tol = Tolerances::default();
    if let Some(path) = &g.config {
        parse_config(&read(path)?, &mut tol)?;
    }
    for item in &g.tol {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| Error::Argument(format!("--tol expects KEY=VALUE, got `{item}`")))?;
        let value: f64 = value.parse().map_err(|_| Error::Argument(format!("not a number: `{value}`")))?;
        tol.set(key, value)?;
    }
    Ok(tol)
}

fn threads(g: &GlobalArgs) -> Result<Option<usize>> {
    let n = match g.threads {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.trim().parse().map_err(|_| Error::Argument(format!("{THREADS_ENV}=`{v}` is not a count")))?),
            Err(_) => None,
        },
    };
    if n == Some(0) {
        return Err(Error::Argument("thread count must be at least 1".into()));
    }
    Ok(n)
}

fn load_function(f: &FnArgs) -> Result<(PiecewiseFunction1D, Domain1D)> {
    let u = match (&f.file, &f.corpus) {
        (Some(path), _) => {
            let text = read(path)?;
            if path.extension().is_some_and(|e| e == "json") {
                let doc: FunctionDoc = serde_json::from_str(&text)?;
                PiecewiseFunction1D::from_doc(&doc)?
            } else {
                PiecewiseFunction1D::parse(&text)?
            }
        }
        (None, Some(name)) => {
            corpus_function(name).ok_or_else(|| Error::Argument(format!("no corpus function named `{name}`")))?
        }
        (None, None) => return Err(Error::Argument("one of --fn or --corpus is required".into())),
    };
    let omega = if f.omega.is_empty() {
        u.domain()
    } else {
        let ends = f
            .omega
            .iter()
            .map(|t| crate::json::parse_extended(t).ok_or_else(|| Error::Argument(format!("not a number: `{t}`"))))
            .collect::<Result<Vec<f64>>>()?;
        Domain1D::new(ends.chunks(2).map(|c| (c[0], c[1])).collect())?
    };
    Ok((u, omega))
}

fn nums(v: &[f64], n: usize, what: &str) -> Result<()> {
    if v.len() != n || v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Argument(format!("{what} needs {n} finite numbers")));
    }
    Ok(())
}

fn parse_domain(text: &str) -> Result<Domain2D> {
    let t: Vec<&str> = text.split_whitespace().collect();
    match t.as_slice() {
        ["plane"] => Ok(Domain2D::Plane),
        ["rect", rest @ ..] if rest.len() == 4 => {
            let v = rest
                .iter()
                .map(|s| s.parse::<f64>().map_err(|_| Error::Argument(format!("not a number: `{s}`"))))
                .collect::<Result<Vec<f64>>>()?;
            Domain2D::rect(Point::new(v[0], v[1]), Point::new(v[2], v[3]))
        }
        _ => Err(Error::Argument(format!("domain must be `plane` or `rect X0 Y0 X1 Y1`, got `{text}`"))),
    }
}

fn operator(a: &FieldArgs, tol: Tolerances) -> Result<(MaximalOperator2D, Option<ArcRegion2D>)> {
    let bbox = match &a.bbox {
        Some(b) => {
            nums(b, 4, "--box")?;
            Some((Point::new(b[0], b[1]), Point::new(b[2], b[3])))
        }
        None => None,
    };
    let (field, region, default_domain) = match (&a.shape, &a.affine) {
        (Some(s), _) => {
            let e = make_shape(&s.parse::<ShapeSpec>()?)?;
            let d = match bbox {
                Some((lo, hi)) => Domain2D::rect(lo, hi)?,
                None => Domain2D::Plane,
            };
            (Field2D::indicator(e.clone()), Some(e), d)
        }
        (None, Some(g)) => {
            nums(g, 3, "--affine")?;
            let (lo, hi) = bbox.ok_or_else(|| Error::Argument("--affine needs --box".into()))?;
            (Field2D::affine(Point::new(g[0], g[1]), g[2], lo, hi)?, None, Domain2D::rect(lo, hi)?)
        }
        (None, None) => return Err(Error::Argument("one of --shape or --affine is required".into())),
    };
    let domain = match &a.domain {
        Some(d) => parse_domain(d)?,
        None => default_domain,
    };
    Ok((MaximalOperator2D::new(field, domain)?.with_tolerances(tol), region))
}

fn grid(g: &GridArgs) -> Result<Option<GridSpec>> {
    let Some(v) = &g.grid else { return Ok(None) };
    let f = |s: &str| s.parse::<f64>().map_err(|_| Error::Argument(format!("not a number: `{s}`")));
    let n = |s: &str| s.parse::<usize>().map_err(|_| Error::Argument(format!("not a point count: `{s}`")));
    let (nx, ny) = (n(&v[3])?, n(&v[4])?);
    if nx < 2 || ny < 2 {
        return Err(Error::Argument("grid needs at least 2 points per axis".into()));
    }
    Ok(Some(GridSpec::new(Point::new(f(&v[0])?, f(&v[1])?), f(&v[2])?, nx, ny)?))
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct Eval {
    value: f64,
    witness: Option<Endpoints>,
}

#[derive(Serialize)]
struct Endpoints {
    a: f64,
    b: f64,
}

#[derive(Serialize)]
struct Aggregate<'a> {
    passed: bool,
    suites: &'a [Report],
}

/// Runs a parsed command. `Ok(false)` means a verification check failed.
pub fn execute(cli: &Cli) -> Result<bool> {
    let g = &cli.global;
    let tol = tolerances(g)?;
    let ctx = Context { tol, timing: !g.no_timing };
    let out = g.out.as_deref();
    match &cli.command {
        Command::M1d { op } => {
            let text = match op {
                M1dOp::Eval { f, x } => {
                    let (u, omega) = load_function(f)?;
                    let m = MaximalOperator1D::new(&u, &omega)?.with_tolerances(tol).value(*x)?;
                    serde_json::to_string(&Eval { value: m.value, witness: m.witness.map(|w| Endpoints { a: w.a, b: w.b }) })?
                        + "\n"
                }
                M1dOp::Structure { f } => {
                    let (u, omega) = load_function(f)?;
                    json(&MaximalOperator1D::new(&u, &omega)?.with_tolerances(tol).contact_structure())?
                }
                M1dOp::Variation { f } => {
                    let (u, omega) = load_function(f)?;
                    let s = MaximalOperator1D::new(&u, &omega)?.with_tolerances(tol).contact_structure();
                    json(&variation_of_maximal(&s))?
                }
            };
            emit(out, &text)?;
            Ok(true)
        }
        Command::M2d { op } => {
            let text = match op {
                M2dOp::Ball { field, point } => {
                    let (op, _) = operator(field, tol)?;
                    json(&op.optimal_ball(Point::new(point[0], point[1]))?)?
                }
                M2dOp::Field { field, grid: ga } => {
                    let (op, _) = operator(field, tol)?;
                    let spec = grid(ga)?.ok_or_else(|| Error::Argument("--grid is required".into()))?;
                    op.field_on(&spec)?.to_csv()
                }
                M2dOp::Grad { field, point, h } => {
                    let (op, _) = operator(field, tol)?;
                    json(&op.gradient_check(Point::new(point[0], point[1]), *h)?)?
                }
                M2dOp::Ratio { field, grid: ga, h } => {
                    let (op, region) = operator(field, tol)?;
                    let spec = match (grid(ga)?, region) {
                        (Some(s), _) => s,
                        (None, Some(e)) => {
                            let (lo, hi) = e.bbox();
                            let pad = Point::new(5.0, 5.0);
                            GridSpec::covering(lo - pad, hi + pad, *h)?
                        }
                        (None, None) => return Err(Error::Unsupported("the ratio is defined for indicator fields".into())),
                    };
                    json(&sobolev_ratio_with(&op, &spec)?)?
                }
            };
            emit(out, &text)?;
            Ok(true)
        }
        Command::Verify { suite, parallel } => {
            if suite == "all" {
                let reports = run_all(&ctx, *parallel)?;
                let passed = reports.iter().all(Report::passed);
                emit(out, &json(&Aggregate { passed, suites: &reports })?)?;
                Ok(passed)
            } else {
                let report = run_suite(suite, &ctx)?;
                emit(out, &json(&report)?)?;
                Ok(report.passed())
            }
        }
        Command::Repro { id } => {
            let (report, artifacts) = reproduce(id, &ctx)?;
            let dir = out.unwrap_or(Path::new("."));
            std::fs::create_dir_all(dir)?;
            for a in &artifacts {
                std::fs::write(dir.join(&a.file_name), &a.contents)?;
            }
            print!("{}", json(&report)?);
            Ok(report.passed())
        }
        Command::Corpus { op } => {
            match op {
                CorpusOp::List => {
                    let names: String = corpus()?.iter().map(|(n, _)| format!("{n}\n")).collect();
                    emit(out, &names)?;
                }
                CorpusOp::Export => {
                    let dir = out.ok_or_else(|| Error::Argument("corpus export needs --out DIR".into()))?;
                    std::fs::create_dir_all(dir)?;
                    for (name, u) in corpus()? {
                        std::fs::write(dir.join(format!("{name}.txt")), u.to_text())?;
                    }
                }
            }
            Ok(true)
        }
    }
}

/// Parses `argv`, runs it on a local thread pool and returns the exit status.
pub fn main(argv: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let run = || -> Result<bool> {
        match threads(&cli.global)? {
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::Argument(format!("cannot start {n} threads: {e}")))?;
                pool.install(|| execute(&cli))
            }
            None => execute(&cli),
        }
    };
    match run() {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
