//! Command-line front end: argument grammar, report formatting and exit codes.
//!
//! Exit codes: 0 when every check passes, 1 when any check fails, 2 on usage
//! or domain errors.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::applications::{proposition_check, special_means, PropParams, PropositionId};
use crate::corpus::lookup;
use crate::error::Error;
use crate::fracint::{conformable_integral, rl_integral, FracOrder, Side};
use crate::quadrature::QuadConfig;
use crate::simpson::{
    constants, evaluate_bound, identity_lhs, identity_rhs, BoundParams, BoundReport, Interval, TheoremId,
    DEFAULT_PASS_TOL,
};
use crate::specfun::{bessel_p, beta_fn, gamma_fn, incomplete_beta, q_digamma, SeriesControl};

/// Environment variable overriding the default pass tolerance.
pub const TOL_ENV: &str = "FRAC_SIMPSON_TOL";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Parser)]
#[command(
    name = "conformable-simpson",
    version,
    about = "Simpson-type inequalities for conformable fractional integrals"
)]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Pass tolerance on slack (overrides FRAC_SIMPSON_TOL).
    #[arg(long, global = true, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// Absolute quadrature tolerance.
    #[arg(long, global = true, allow_negative_numbers = true)]
    abs_tol: Option<f64>,
    /// Relative quadrature tolerance.
    #[arg(long, global = true, allow_negative_numbers = true)]
    rel_tol: Option<f64>,
    /// Maximum number of adaptive bisections.
    #[arg(long, global = true)]
    max_depth: Option<u32>,
    /// Write reports to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for grid scans.
    #[arg(long, default_value_t = 1, global = true)]
    parallelism: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Kernel constants Z₁…Z₅ for one order.
    Constants {
        #[arg(long, allow_negative_numbers = true)]
        tau: f64,
        /// Must equal ⌈τ⌉ − 1 when given.
        #[arg(long)]
        m: Option<u32>,
        /// Hölder exponent for Z₂.
        #[arg(long, allow_negative_numbers = true)]
        p: Option<f64>,
    },
    /// Check the identity or one bound.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Cartesian grid of bounds over functions, theorems, orders and exponents.
    Scan {
        #[arg(long, value_delimiter = ',', required = true)]
        func_list: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        tau_list: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "2", allow_negative_numbers = true)]
        q_list: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        theorem_list: Vec<String>,
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
    },
    /// Arithmetic, geometric, logarithmic and generalized logarithmic means.
    Means {
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
        s: i32,
    },
    /// Check one of the applied propositions.
    Prop {
        /// Proposition id, e.g. 5.1.
        #[arg(long)]
        id: String,
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long)]
        s: Option<u32>,
        #[arg(long, allow_negative_numbers = true)]
        q: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        rho: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        base: Option<f64>,
    },
    /// Evaluate a special function.
    Specfun {
        #[command(subcommand)]
        which: Specfun,
    },
    /// Evaluate a Riemann–Liouville or conformable fractional integral.
    Fracint {
        #[arg(long, value_enum)]
        kind: FracKind,
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long)]
        func: String,
        #[arg(long, allow_negative_numbers = true)]
        anchor: f64,
        #[arg(long, allow_negative_numbers = true)]
        at: f64,
        #[arg(long, allow_negative_numbers = true)]
        tau: f64,
    },
}

#[derive(Debug, Subcommand)]
enum Verify {
    /// Compare both sides of the Simpson-type identity.
    Identity {
        #[arg(long)]
        func: String,
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long, allow_negative_numbers = true)]
        tau: f64,
    },
    /// Evaluate one bound, e.g. --theorem 3.3.
    Bound {
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        func: String,
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        tau: f64,
        #[arg(long, allow_negative_numbers = true)]
        q: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        k_lo: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        k_hi: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        lipschitz: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
enum Specfun {
    Gamma {
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
    },
    Beta {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
    },
    Incbeta {
        #[arg(long, allow_negative_numbers = true)]
        w: f64,
        #[arg(long)]
        a: u32,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
    },
    BesselP {
        #[arg(long, allow_negative_numbers = true)]
        rho: f64,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long)]
        derivative: bool,
    },
    Qdigamma {
        #[arg(long, allow_negative_numbers = true)]
        q: f64,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long)]
        derivative: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FracKind {
    Rl,
    Conformable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

/// Resolved run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub tolerance: f64,
    pub quad: QuadConfig,
    pub format: Format,
    pub parallelism: usize,
}

impl RunConfig {
    fn resolve(args: &RunArgs, env_tol: Option<&str>) -> Result<Self, String> {
        let tolerance = match (args.tol, env_tol) {
            (Some(t), _) => t,
            (None, Some(raw)) => raw
                .trim()
                .parse::<f64>()
                .map_err(|_| format!("{TOL_ENV}: cannot parse `{raw}` as a number"))?,
            (None, None) => DEFAULT_PASS_TOL,
        };
        if !(tolerance > 0.0) || !tolerance.is_finite() {
            return Err(format!("tolerance must be positive, got {tolerance}"));
        }
        if args.parallelism == 0 {
            return Err("--parallelism must be at least 1".into());
        }
        let base = QuadConfig::default();
        let quad = QuadConfig {
            abs_tol: args.abs_tol.unwrap_or(base.abs_tol),
            rel_tol: args.rel_tol.unwrap_or(base.rel_tol),
            max_depth: args.max_depth.unwrap_or(base.max_depth),
        };
        quad.validate().map_err(|e| e.to_string())?;
        Ok(RunConfig {
            tolerance,
            quad,
            format: args.format,
            parallelism: args.parallelism,
        })
    }
}

/// One output value.
#[derive(Debug, Clone, PartialEq)]
enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Null,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Null => String::new(),
        }
    }

    fn pretty(&self) -> String {
        match self {
            Cell::Float(x) if *x != 0.0 && !(1e-4..1e15).contains(&x.abs()) => format!("{x:e}"),
            Cell::Float(x) => x.to_string(),
            Cell::Null => "-".into(),
            other => other.csv(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Null, Cell::Float)
    }
}

impl From<Option<u32>> for Cell {
    fn from(x: Option<u32>) -> Self {
        x.map_or(Cell::Null, |v| Cell::Int(i64::from(v)))
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(i64::from(x))
    }
}

impl From<i32> for Cell {
    fn from(x: i32) -> Self {
        Cell::Int(i64::from(x))
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Float(x) if x.is_finite() => s.serialize_f64(*x),
            Cell::Float(_) | Cell::Null => s.serialize_none(),
            Cell::Int(i) => s.serialize_i64(*i),
            Cell::Bool(b) => s.serialize_bool(*b),
            Cell::Text(t) => s.serialize_str(t),
        }
    }
}

/// An ordered record; JSON object, CSV row or pretty block.
#[derive(Debug, Clone, PartialEq, Default)]
struct Row {
    cells: Vec<(&'static str, Cell)>,
    /// Trailing fields emitted in JSON and pretty output but not in CSV.
    extra: Vec<(&'static str, Cell)>,
    pass: Option<bool>,
}

impl Row {
    fn push(mut self, key: &'static str, value: impl Into<Cell>) -> Self {
        self.cells.push((key, value.into()));
        self
    }

    fn passed(mut self, pass: bool) -> Self {
        self.pass = Some(pass);
        self
    }
}

impl Serialize for Row {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.cells.len() + self.extra.len()))?;
        for (k, v) in self.cells.iter().chain(&self.extra) {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

fn report_row(r: &BoundReport) -> Row {
    let mut row = Row::default()
        .push("theorem", r.theorem.label())
        .push("tau", r.tau)
        .push("m", r.m)
        .push("gamma", r.gamma)
        .push("delta", r.delta)
        .push("p", r.p)
        .push("q", r.q)
        .push("k_lo", r.k_lo)
        .push("k_hi", r.k_hi)
        .push("lipschitz", r.lipschitz)
        .push("lhs", r.lhs)
        .push("rhs", r.rhs)
        .push("slack", r.slack)
        .push("pass", r.pass)
        .push("quad_error", r.quad_error)
        .passed(r.pass);
    if let Some(pf) = r.paper_form {
        row.extra.push(("paper_form", Cell::Float(pf)));
    }
    row
}

fn render(rows: &[Row], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Json => {
            for row in rows {
                out.push_str(&serde_json::to_string(row).expect("rows serialize"));
                out.push('\n');
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header: Option<Vec<&str>> = None;
            for row in rows {
                let keys: Vec<&str> = row.cells.iter().map(|(k, _)| *k).collect();
                if header.as_ref() != Some(&keys) {
                    w.write_record(&keys).expect("in-memory write");
                    header = Some(keys);
                }
                w.write_record(row.cells.iter().map(|(_, v)| v.csv()))
                    .expect("in-memory write");
            }
            out = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv");
        }
        Format::Pretty => {
            for (i, row) in rows.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                let width = row
                    .cells
                    .iter()
                    .chain(&row.extra)
                    .map(|(k, _)| k.len())
                    .max()
                    .unwrap_or(0);
                for (k, v) in row.cells.iter().chain(&row.extra) {
                    out.push_str(&format!("{k:<width$}  {}\n", v.pretty()));
                }
            }
        }
    }
    out
}

/// Failure modes of one command.
enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn interval(gamma: f64, delta: f64) -> Result<Interval, Failure> {
    Ok(Interval::new(gamma, delta)?)
}

struct Outcome {
    rows: Vec<Row>,
    notes: Vec<String>,
}

fn run(command: &Command, rc: &RunConfig) -> Result<Outcome, Failure> {
    let cfg = &rc.quad;
    let tol = rc.tolerance;
    let ctrl = SeriesControl::default();
    let single = |row: Row| Outcome {
        rows: vec![row],
        notes: Vec::new(),
    };
    match command {
        Command::Constants { tau, m, p } => {
            let order = FracOrder::new(*tau)?;
            if let Some(m) = m {
                if *m != order.m() {
                    return Err(Failure::Usage(format!(
                        "--m {m} is inconsistent with --tau {tau}; expected m = {}",
                        order.m()
                    )));
                }
            }
            let c = constants(&order, *p, cfg)?;
            Ok(single(
                Row::default()
                    .push("tau", c.tau)
                    .push("m", c.m)
                    .push("p", c.p)
                    .push("z1", c.z1)
                    .push("z2", c.z2)
                    .push("z3", c.z3)
                    .push("z4", c.z4)
                    .push("z5", c.z5)
                    .push("b_complete", c.b_complete)
                    .push("w_star", c.w_star)
                    .push("h_integral", c.h_integral)
                    .push("quad_error", c.quad_error),
            ))
        }
        Command::Verify {
            what:
                Verify::Identity {
                    func,
                    gamma,
                    delta,
                    tau,
                },
        } => {
            let f = lookup(func)?;
            let iv = interval(*gamma, *delta)?;
            let order = FracOrder::new(*tau)?;
            let lhs = identity_lhs(&f, &iv, &order, cfg)?;
            let rhs = identity_rhs(&f, &iv, &order, cfg)?;
            let residual = (lhs.value - rhs.value).abs();
            let pass = residual <= tol;
            Ok(single(
                Row::default()
                    .push("func", func.as_str())
                    .push("tau", order.tau())
                    .push("m", order.m())
                    .push("gamma", *gamma)
                    .push("delta", *delta)
                    .push("lhs", lhs.value)
                    .push("rhs", rhs.value)
                    .push("residual", residual)
                    .push("pass", pass)
                    .push("quad_error", lhs.error_estimate + rhs.error_estimate)
                    .passed(pass),
            ))
        }
        Command::Verify {
            what:
                Verify::Bound {
                    theorem,
                    func,
                    gamma,
                    delta,
                    tau,
                    q,
                    k_lo,
                    k_hi,
                    lipschitz,
                },
        } => {
            let id: TheoremId = theorem.parse()?;
            let f = lookup(func)?;
            let iv = interval(*gamma, *delta)?;
            let order = FracOrder::new(*tau)?;
            let params = BoundParams {
                q: *q,
                k_lo: *k_lo,
                k_hi: *k_hi,
                lipschitz: *lipschitz,
            };
            let r = evaluate_bound(id, &f, &iv, &order, &params, cfg, tol)?;
            Ok(single(report_row(&r)))
        }
        Command::Scan {
            func_list,
            tau_list,
            q_list,
            theorem_list,
            gamma,
            delta,
        } => scan(func_list, tau_list, q_list, theorem_list, *gamma, *delta, rc),
        Command::Means { gamma, delta, s } => {
            let m = special_means(*gamma, *delta, *s)?;
            Ok(single(
                Row::default()
                    .push("gamma", *gamma)
                    .push("delta", *delta)
                    .push("s", *s)
                    .push("a", m.a)
                    .push("g", m.g)
                    .push("l", m.l)
                    .push("ls", m.ls),
            ))
        }
        Command::Prop {
            id,
            gamma,
            delta,
            s,
            q,
            rho,
            base,
        } => {
            let id: PropositionId = id.parse()?;
            let params = PropParams {
                gamma: *gamma,
                delta: *delta,
                s: *s,
                q: *q,
                rho: *rho,
                base: *base,
            };
            let outcome = proposition_check(id, &params, cfg, tol)?;
            Ok(Outcome {
                rows: outcome.reports().map(report_row).collect(),
                notes: Vec::new(),
            })
        }
        Command::Specfun { which } => {
            let row = match which {
                Specfun::Gamma { x } => Row::default()
                    .push("function", "gamma")
                    .push("x", *x)
                    .push("value", gamma_fn(*x)?),
                Specfun::Beta { a, b } => Row::default()
                    .push("function", "beta")
                    .push("a", *a)
                    .push("b", *b)
                    .push("value", beta_fn(*a, *b)?),
                Specfun::Incbeta { w, a, b } => Row::default()
                    .push("function", "incbeta")
                    .push("w", *w)
                    .push("a", *a)
                    .push("b", *b)
                    .push("value", incomplete_beta(*w, *a, *b)?),
                Specfun::BesselP { rho, x, derivative } => Row::default()
                    .push("function", "bessel_p")
                    .push("rho", *rho)
                    .push("x", *x)
                    .push("derivative", *derivative)
                    .push("value", bessel_p(*rho, *x, *derivative, &ctrl)?),
                Specfun::Qdigamma { q, x, derivative } => Row::default()
                    .push("function", "qdigamma")
                    .push("q", *q)
                    .push("x", *x)
                    .push("derivative", *derivative)
                    .push("value", q_digamma(*q, *x, *derivative, &ctrl)?),
            };
            Ok(single(row))
        }
        Command::Fracint {
            kind,
            side,
            func,
            anchor,
            at,
            tau,
        } => {
            let f = lookup(func)?;
            let s = match side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            let (lo, hi) = if *anchor < *at { (*anchor, *at) } else { (*at, *anchor) };
            if hi > lo {
                f.validate_interval(&interval(lo, hi)?)?;
            }
            let r = match kind {
                FracKind::Rl => rl_integral(|w| f.eval(w), s, *anchor, *at, *tau, cfg)?,
                FracKind::Conformable => {
                    conformable_integral(|w| f.eval(w), s, *anchor, *at, &FracOrder::new(*tau)?, cfg)?
                }
            };
            let kind_label = match kind {
                FracKind::Rl => "rl",
                FracKind::Conformable => "conformable",
            };
            let side_label = match side {
                SideArg::Left => "left",
                SideArg::Right => "right",
            };
            Ok(single(
                Row::default()
                    .push("kind", kind_label)
                    .push("side", side_label)
                    .push("func", func.as_str())
                    .push("anchor", *anchor)
                    .push("at", *at)
                    .push("tau", *tau)
                    .push("value", r.value)
                    .push("error_estimate", r.error_estimate)
                    .push("evaluations", r.evaluations as u32),
            ))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn scan(
    funcs: &[String],
    taus: &[f64],
    qs: &[f64],
    theorems: &[String],
    gamma: f64,
    delta: f64,
    rc: &RunConfig,
) -> Result<Outcome, Failure> {
    let iv = interval(gamma, delta)?;
    let ids = theorems
        .iter()
        .map(|t| t.parse::<TheoremId>())
        .collect::<Result<Vec<_>, _>>()?;
    for name in funcs {
        lookup(name)?;
    }
    let orders = taus.iter().map(|&t| FracOrder::new(t)).collect::<Result<Vec<_>, _>>()?;
    let mut cases = Vec::new();
    for name in funcs {
        for &id in &ids {
            for order in &orders {
                if id.uses_q() {
                    for &q in qs {
                        cases.push((name.as_str(), id, *order, Some(q)));
                    }
                } else {
                    cases.push((name.as_str(), id, *order, None));
                }
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(rc.parallelism)
        .build()
        .map_err(|e| Failure::Usage(format!("cannot start worker pool: {e}")))?;
    let results: Vec<_> = pool.install(|| {
        cases
            .par_iter()
            .map(|&(name, id, order, q)| {
                let f = lookup(name)?;
                let params = BoundParams {
                    q,
                    ..Default::default()
                };
                evaluate_bound(id, &f, &iv, &order, &params, &rc.quad, rc.tolerance)
            })
            .collect()
    });
    let mut outcome = Outcome {
        rows: Vec::new(),
        notes: Vec::new(),
    };
    for ((name, id, order, q), result) in cases.iter().zip(results) {
        match result {
            Ok(r) => outcome.rows.push(report_row(&r)),
            Err(Error::Precondition { hypothesis, detail }) => {
                let q = q.map(|q| format!(" q={q}")).unwrap_or_default();
                outcome.notes.push(format!(
                    "skipped {id} {name} tau={}{q}: hypothesis `{hypothesis}` failed: {detail}",
                    order.tau()
                ));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(outcome)
}

/// Parses `argv` (including the program name), runs the command and writes
/// reports to `out` (or the `--out` file) and diagnostics to `err`.
pub fn dispatch<I, T>(argv: I, env_tol: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let rc = match RunConfig::resolve(&cli.run, env_tol) {
        Ok(rc) => rc,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let outcome = match run(&cli.command, &rc) {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    for note in &outcome.notes {
        let _ = writeln!(err, "{note}");
    }
    let text = render(&outcome.rows, rc.format);
    let written = match &cli.run.out {
        Some(path) => File::create(path).and_then(|mut f| f.write_all(text.as_bytes())),
        None => out.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write report: {e}");
        return EXIT_USAGE;
    }
    if outcome.rows.iter().all(|r| r.pass != Some(false)) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

/// Entry point used by the binary.
pub fn main_with_env() -> i32 {
    let env_tol = std::env::var(TOL_ENV).ok();
    let stdout = io::stdout();
    let stderr = io::stderr();
    dispatch(
        std::env::args_os(),
        env_tol.as_deref(),
        &mut stdout.lock(),
        &mut stderr.lock(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], env: Option<&str>) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("conformable-simpson").chain(args.iter().copied());
        let code = dispatch(argv, env, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn constants_command() {
        let (code, out, _) = call(&["constants", "--tau", "1", "--m", "0"], None);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert!((v["z1"].as_f64().unwrap() - 5.0 / 36.0).abs() < 1e-12);
        let (code, _, err) = call(&["constants", "--tau", "1.5", "--m", "0"], None);
        assert_eq!(code, 2);
        assert!(err.contains("inconsistent"));
    }

    #[test]
    fn verify_commands() {
        let (code, out, _) = call(
            &[
                "verify", "identity", "--func", "exp", "--gamma", "0", "--delta", "1", "--tau", "0.5",
            ],
            None,
        );
        assert_eq!(code, 0, "{out}");
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert!(v["residual"].as_f64().unwrap() < 1e-7);

        let (code, out, _) = call(
            &[
                "verify",
                "bound",
                "--theorem",
                "3.3",
                "--func",
                "power:4",
                "--gamma",
                "0",
                "--delta",
                "1",
                "--tau",
                "1",
            ],
            None,
        );
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert!((v["lhs"].as_f64().unwrap() - 0.008333).abs() < 1e-6);
        assert!((v["rhs"].as_f64().unwrap() - 0.277778).abs() < 1e-6);
        assert_eq!(v["pass"], serde_json::Value::Bool(true));
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        let mut expected: Vec<_> = BoundReport::FIELDS.iter().map(|s| s.to_string()).collect();
        expected.sort();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(sorted, expected);
        assert!(out.find("\"theorem\"").unwrap() < out.find("\"quad_error\"").unwrap());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["--help"], None).0, 0);
        assert_eq!(call(&["--version"], None).0, 0);
        assert_eq!(call(&["frobnicate"], None).0, 2);
        assert_eq!(call(&["constants", "--tau", "abc"], None).0, 2);
        assert_eq!(
            call(
                &[
                    "verify",
                    "bound",
                    "--theorem",
                    "3.3",
                    "--func",
                    "nope",
                    "--gamma",
                    "0",
                    "--delta",
                    "1"
                ],
                None
            )
            .0,
            2
        );
        let (code, _, err) = call(
            &[
                "verify",
                "bound",
                "--theorem",
                "4.1-D",
                "--func",
                "power:2",
                "--gamma",
                "1",
                "--delta",
                "2",
            ],
            None,
        );
        assert_eq!(code, 1, "{err}");
        let (code, _, err) = call(
            &[
                "verify",
                "bound",
                "--theorem",
                "4.1",
                "--func",
                "power:2",
                "--gamma",
                "0",
                "--delta",
                "1",
                "--k-lo",
                "0",
                "--k-hi",
                "1",
            ],
            None,
        );
        assert_eq!(code, 2);
        assert!(err.contains("hypothesis"));
    }

    #[test]
    fn tolerance_precedence() {
        let args = [
            "verify",
            "bound",
            "--theorem",
            "4.1-D",
            "--func",
            "power:2",
            "--gamma",
            "1",
            "--delta",
            "2",
        ];
        // lhs 0.25 against rhs 5/36: slack ≈ −0.111
        assert_eq!(call(&args, Some("0.2")).0, 0);
        assert_eq!(call(&args, None).0, 1);
        let mut with_flag = args.to_vec();
        with_flag.extend(["--tol", "1e-8"]);
        assert_eq!(call(&with_flag, Some("0.2")).0, 1);
        assert_eq!(call(&args, Some("bogus")).0, 2);
    }

    #[test]
    fn csv_and_scan() {
        let args = [
            "scan",
            "--func-list",
            "power:2,exp",
            "--tau-list",
            "0.5,1",
            "--theorem-list",
            "3.3,3.6",
            "--q-list",
            "2,4",
            "--gamma",
            "0.5",
            "--delta",
            "2",
            "--format",
            "csv",
        ];
        let (code, out, _) = call(&args, None);
        assert_eq!(code, 0, "{out}");
        let mut lines = out.lines();
        assert_eq!(lines.next().unwrap(), BoundReport::FIELDS.join(","));
        assert_eq!(lines.count(), 2 * 2 * (1 + 2));
        let mut eight = args.to_vec();
        eight.extend(["--parallelism", "8"]);
        assert_eq!(call(&eight, None).1, out);
    }

    #[test]
    fn scan_skips_failed_hypotheses() {
        let (code, out, err) = call(
            &[
                "scan",
                "--func-list",
                "qdigamma:0.5",
                "--tau-list",
                "1",
                "--theorem-list",
                "4.3",
                "--gamma",
                "1",
                "--delta",
                "2",
            ],
            None,
        );
        assert_eq!(code, 0);
        assert!(out.is_empty() || out.lines().count() == 1);
        if out.is_empty() {
            assert!(err.contains("skipped"));
        }
    }

    #[test]
    fn other_commands() {
        let (code, out, _) = call(&["means", "--gamma", "1", "--delta", "2", "--s", "2"], None);
        assert_eq!(code, 0);
        assert!(out.contains("\"a\":1.5"));
        let (code, out, _) = call(
            &[
                "prop", "--id", "5.9", "--gamma", "0.5", "--delta", "2", "--rho", "-0.5", "--q", "2",
            ],
            None,
        );
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 2);
        assert!(out.contains("paper_form"));
        let (code, out, _) = call(&["specfun", "gamma", "--x", "5"], None);
        assert_eq!(code, 0);
        assert!(out.contains("\"value\":24"));
        let (code, out, _) = call(
            &[
                "fracint", "--kind", "rl", "--side", "left", "--func", "power:1", "--anchor", "0", "--at", "1",
                "--tau", "1",
            ],
            None,
        );
        assert_eq!(code, 0);
        assert!(out.contains("\"value\":0.5"));
        let (code, out, _) = call(&["--format", "pretty", "means", "--gamma", "1", "--delta", "4"], None);
        assert_eq!(code, 0);
        assert!(out.contains("g "));
    }
}
