//! Command-line front end: building dimers and quivers, checking boundary
//! presentations against Γ(m, n), grid sweeps and flip checks.

pub mod pipeline;
pub mod spec;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dimerlab::boundary::relation_words;
use dimerlab::rewrite::{BUDGET_ENV, DEFAULT_MAX_VISITED};
use dimerlab::{
    build_dimer, build_gamma, enumerate_triangulations, reduce_dimer, verify_flip_transport, BoundaryError,
    Diagonal, Outcome, SearchBudget, Tag, Triangulation,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

pub use pipeline::{verify_triangulation, Status, Tally, Verification};
pub use spec::{parse_triangulation, SpecError};

pub const TOOL: &str = "dimerlab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "dimerlab", version, about = "GL_m-dimers of polygon triangulations and their boundary algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the dimer and its quiver with faces.
    Build {
        #[command(flatten)]
        target: TriangulationArgs,
        /// What to emit; JSON defaults to everything, DOT to the quiver.
        #[arg(long, value_enum)]
        object: Option<Object>,
        /// Emit the dimer before degree-2 reduction (no quiver).
        #[arg(long)]
        unreduced: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Extract the boundary presentation and check it against Γ(m, n).
    Verify {
        #[command(flatten)]
        target: TriangulationArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Also try orientation-reversing relabelings.
        #[arg(long)]
        reflect: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verify every triangulation over a grid of (m, n).
    Sweep {
        #[arg(long)]
        max_n: u32,
        #[arg(long, default_value_t = 3)]
        min_n: u32,
        /// Comma-separated orders.
        #[arg(long, value_delimiter = ',', default_value = "2")]
        m: Vec<u32>,
        /// Worker threads; defaults to the number of cores.
        #[arg(long)]
        workers: Option<usize>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        reflect: bool,
        /// Include wall-clock times (makes the report non-deterministic).
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the quiver Γ(m, n) and its relations.
    Gamma {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Flip one diagonal and check how the generators transport.
    FlipCheck {
        #[command(flatten)]
        target: TriangulationArgs,
        /// Diagonal to flip, as `a-b`.
        #[arg(long)]
        flip: String,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct TriangulationArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub m: u32,
    /// Shorthand for `--diagonals fan`.
    #[arg(long, conflicts_with = "diagonals")]
    pub fan: bool,
    /// `a-b,c-d,...`, `fan` or `fan:K`.
    #[arg(long, allow_hyphen_values = true)]
    pub diagonals: Option<String>,
}

impl TriangulationArgs {
    pub fn triangulation(&self) -> Result<Triangulation, CliError> {
        let spec = match (&self.diagonals, self.fan) {
            (Some(s), _) => s.as_str(),
            (None, true) => "fan",
            (None, false) => return Err(CliError::Usage("give --fan or --diagonals".into())),
        };
        Ok(parse_triangulation(self.n, spec)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct BudgetArgs {
    /// Cap on paths visited per equality search.
    #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_MAX_VISITED)]
    pub budget_visited: usize,
    /// Cap on path length during search; derived from the relations if absent.
    #[arg(long)]
    pub budget_length: Option<usize>,
}

impl BudgetArgs {
    pub fn budget(&self) -> SearchBudget {
        SearchBudget {
            max_length: self.budget_length,
            max_visited: self.budget_visited,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to a file instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Object {
    Dimer,
    Quiver,
    All,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid triangulation: {0}")]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        1
    }
}

/// A rendered report and the status it carries.
#[derive(Debug, Clone)]
pub struct Report {
    pub status: Status,
    pub body: String,
}

fn sort_keys(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, sort_keys(v))).collect::<Map<_, _>>())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

/// Pretty JSON with keys sorted at every level.
pub fn canonical_json(v: &impl Serialize) -> String {
    let value = sort_keys(serde_json::to_value(v).expect("report serializes"));
    let mut s = serde_json::to_string_pretty(&value).expect("value prints");
    s.push('\n');
    s
}

fn header(kind: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("tool".into(), json!(TOOL));
    m.insert("version".into(), json!(VERSION));
    m.insert("report".into(), json!(kind));
    m
}

fn json_only(out: &OutputArgs, cmd: &str) -> Result<(), CliError> {
    if out.format == Format::Dot {
        return Err(CliError::Usage(format!("{} has no DOT output", cmd)));
    }
    Ok(())
}

fn check_order(m: u32) -> Result<(), CliError> {
    if m < 2 {
        return Err(CliError::Usage(format!("m must be at least 2, got {}", m)));
    }
    Ok(())
}

fn tag_letter(t: Tag) -> &'static str {
    match t {
        Tag::X => "x",
        Tag::Y => "y",
        Tag::Z => "z",
    }
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Build {
            target,
            object,
            unreduced,
            output,
        } => build(target, *object, *unreduced, output.format),
        Command::Verify {
            target,
            budget,
            reflect,
            output,
        } => {
            json_only(output, "verify")?;
            check_order(target.m)?;
            let t = target.triangulation()?;
            let v = verify_triangulation(&t, target.m, budget.budget(), *reflect);
            let mut body = header("verify");
            body.insert("result".into(), serde_json::to_value(&v).expect("serializes"));
            body.insert("status".into(), json!(v.status));
            Ok(Report {
                status: v.status,
                body: canonical_json(&body),
            })
        }
        Command::Sweep {
            max_n,
            min_n,
            m,
            workers,
            budget,
            reflect,
            timings,
            output,
        } => {
            json_only(output, "sweep")?;
            sweep(*min_n, *max_n, m, *workers, budget.budget(), *reflect, *timings)
        }
        Command::Gamma { n, m, output } => {
            check_order(*m)?;
            if *n < 3 {
                return Err(CliError::Usage(format!("n must be at least 3, got {}", n)));
            }
            let g = build_gamma(*m, *n);
            let body = match output.format {
                Format::Dot => g.to_dot(),
                Format::Json => {
                    let name = |(t, k): &(Tag, i64)| format!("{}{}", tag_letter(*t), g.norm(*k));
                    let relations: Vec<Value> = relation_words(*m, *n)
                        .iter()
                        .map(|(family, index, lhs, rhs)| {
                            json!({
                                "family": family,
                                "index": index,
                                "lhs": lhs.iter().map(name).collect::<Vec<_>>(),
                                "rhs": rhs.iter().map(name).collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    let mut body = header("gamma");
                    body.insert("gamma".into(), g.to_json());
                    body.insert("relations".into(), Value::Array(relations));
                    canonical_json(&body)
                }
            };
            Ok(Report {
                status: Status::Verified,
                body,
            })
        }
        Command::FlipCheck {
            target,
            flip,
            budget,
            output,
        } => {
            json_only(output, "flip-check")?;
            check_order(target.m)?;
            let t = target.triangulation()?;
            let d = parse_diagonal(flip)?;
            flip_check(&t, d, target.m, budget.budget())
        }
    }
}

fn parse_diagonal(s: &str) -> Result<Diagonal, CliError> {
    let bad = || CliError::Usage(format!("--flip expects a-b, got {:?}", s));
    let (a, b) = s.trim().split_once('-').ok_or_else(bad)?;
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().parse().map_err(|_| bad())?;
    Diagonal::new(a, b).ok_or_else(bad)
}

fn build(target: &TriangulationArgs, object: Option<Object>, unreduced: bool, format: Format) -> Result<Report, CliError> {
    check_order(target.m)?;
    let t = target.triangulation()?;
    let raw = build_dimer(&t, target.m).map_err(BoundaryError::from)?;
    let object = object.unwrap_or(match format {
        Format::Json => Object::All,
        Format::Dot => Object::Quiver,
    });
    if unreduced && object != Object::Dimer {
        return Err(CliError::Usage("--unreduced only applies to --object dimer".into()));
    }
    let dimer = if unreduced { raw } else { reduce_dimer(&raw) };
    let quiver = if unreduced {
        None
    } else {
        Some(dimerlab::dual_quiver(&dimer).map_err(BoundaryError::from)?)
    };
    let body = match format {
        Format::Dot => {
            let mut s = String::new();
            if matches!(object, Object::Quiver | Object::All) {
                s.push_str(&quiver.as_ref().expect("reduced").to_dot());
            }
            if matches!(object, Object::Dimer | Object::All) {
                s.push_str(&dimer.to_dot());
            }
            s
        }
        Format::Json => {
            let mut body = header("build");
            body.insert("n".into(), json!(t.n()));
            body.insert("m".into(), json!(target.m));
            body.insert("triangulation".into(), serde_json::to_value(&t).expect("serializes"));
            if matches!(object, Object::Dimer | Object::All) {
                body.insert("dimer".into(), dimer.to_json());
            }
            if let (Some(q), Object::Quiver | Object::All) = (&quiver, object) {
                body.insert("quiver".into(), q.to_json());
            }
            canonical_json(&body)
        }
    };
    Ok(Report {
        status: Status::Verified,
        body,
    })
}

#[derive(Debug, Clone, Serialize)]
struct SweepRow {
    m: u32,
    n: u32,
    index: usize,
    diagonals: Vec<Diagonal>,
    #[serde(flatten)]
    result: Verification,
    #[serde(skip_serializing_if = "Option::is_none")]
    runtime_ms: Option<f64>,
}

fn sweep(
    min_n: u32,
    max_n: u32,
    orders: &[u32],
    workers: Option<usize>,
    budget: SearchBudget,
    reflect: bool,
    timings: bool,
) -> Result<Report, CliError> {
    for &m in orders {
        check_order(m)?;
    }
    let min_n = min_n.max(3);
    let mut jobs = Vec::new();
    for &m in orders {
        for n in min_n..=max_n {
            for (index, t) in enumerate_triangulations(n).map_err(BoundaryError::from)?.into_iter().enumerate() {
                jobs.push((m, n, index, t));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start workers: {}", e)))?;
    let started = Instant::now();
    let mut rows: Vec<SweepRow> = pool.install(|| {
        jobs.par_iter()
            .map(|(m, n, index, t)| {
                let clock = Instant::now();
                let result = verify_triangulation(t, *m, budget, reflect);
                SweepRow {
                    m: *m,
                    n: *n,
                    index: *index,
                    diagonals: t.diagonals().collect(),
                    result,
                    runtime_ms: timings.then(|| clock.elapsed().as_secs_f64() * 1e3),
                }
            })
            .collect()
    });
    rows.sort_by_key(|r| (r.m, r.n, r.index));
    let status = rows.iter().map(|r| r.result.status).max().unwrap_or(Status::Verified);
    let count = |s: Status| rows.iter().filter(|r| r.result.status == s).count();

    let mut sorted_orders = orders.to_vec();
    sorted_orders.sort_unstable();
    sorted_orders.dedup();
    let mut body = header("sweep");
    body.insert("grid".into(), json!({ "m": sorted_orders, "min_n": min_n, "max_n": max_n }));
    body.insert("budget".into(), serde_json::to_value(budget).expect("serializes"));
    body.insert(
        "summary".into(),
        json!({
            "rows": rows.len(),
            "verified": count(Status::Verified),
            "inconclusive": count(Status::Inconclusive),
            "failed": count(Status::Failed),
        }),
    );
    body.insert("status".into(), json!(status));
    if timings {
        body.insert("runtime_ms".into(), json!(started.elapsed().as_secs_f64() * 1e3));
    }
    body.insert("rows".into(), serde_json::to_value(&rows).expect("serializes"));
    Ok(Report {
        status,
        body: canonical_json(&body),
    })
}

fn flip_check(t: &Triangulation, d: Diagonal, m: u32, budget: SearchBudget) -> Result<Report, CliError> {
    let mut body = header("flip-check");
    body.insert("budget".into(), serde_json::to_value(budget).expect("serializes"));
    let status = match verify_flip_transport(t, d, m, budget) {
        Ok(cert) => {
            let status = if cert.relations.iter().any(|r| r.outcome == Outcome::Distinct) {
                Status::Failed
            } else if cert.inconclusive() || !cert.passes() {
                Status::Inconclusive
            } else {
                Status::Verified
            };
            body.insert("certificate".into(), serde_json::to_value(&cert).expect("serializes"));
            status
        }
        Err(BoundaryError::Polygon(e)) => return Err(CliError::Usage(e.to_string())),
        Err(e @ BoundaryError::InconclusivePresentation { .. }) => {
            body.insert("error".into(), json!(e.to_string()));
            Status::Inconclusive
        }
        Err(e) => {
            body.insert("error".into(), json!(e.to_string()));
            Status::Failed
        }
    };
    body.insert("status".into(), json!(status));
    Ok(Report {
        status,
        body: canonical_json(&body),
    })
}

/// Parses `args`, runs the command and writes its report. Returns the exit code:
/// 0 verified, 1 invalid input, 2 inconclusive, 3 failed.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let target = match &cli.command {
        Command::Build { output, .. }
        | Command::Verify { output, .. }
        | Command::Sweep { output, .. }
        | Command::Gamma { output, .. }
        | Command::FlipCheck { output, .. } => output.output.clone(),
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}", e);
            return e.exit_code();
        }
    };
    let written = match target {
        Some(path) => std::fs::write(&path, &report.body),
        None => std::io::stdout().lock().write_all(report.body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {}", e);
        return 1;
    }
    report.status.exit_code()
}
