use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pswf::approx::{ConstantSource, EvalOptions, EvalResult, Evaluator, RegimePartition};
use pswf::eigensystem::{
    coefficient_table, eigenvalue_oracle, lambda_asymptotic, ModeIndex, Normalization, SpectralState, Truncation,
};
use pswf::oracle::Oracle;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "pswf", version, about = "Prolate spheroidal wave functions: uniform large-γ forms and series oracle")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Radial split: the Liouville-Green form applies for x ≥ 1 + δ.
    #[arg(long, global = true, default_value_t = 0.05)]
    delta: f64,
    /// Angular split at 1 − δ₀ [default: 0.25·(1 − σ₀)].
    #[arg(long, global = true)]
    delta0: Option<f64>,
    /// Largest turning point handled by the turning-point forms.
    #[arg(long, global = true, default_value_t = 0.9)]
    sigma0: f64,
    /// Quadrature tolerance for the connection constant p.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    /// Ladder truncation: `auto` or a fixed k_max.
    #[arg(long, global = true, default_value = "auto", value_parser = parse_trunc)]
    trunc: Truncation,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

#[derive(Args, Clone, Copy)]
struct ModeArgs {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    gamma: f64,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Method {
    Oracle,
    Asymptotic,
    Both,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Kind {
    Angular,
    Radial,
}

#[derive(Clone, Copy, ValueEnum)]
enum Constants {
    Oracle,
    Asymptotic,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    mode: ModeArgs,
    #[arg(long, value_enum)]
    kind: Kind,
    /// Evaluation points.
    #[arg(long, num_args = 1.., allow_hyphen_values = true, conflicts_with = "grid", required_unless_present = "grid")]
    x: Vec<f64>,
    /// Uniform grid a:b:count, endpoints included.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Where the proportionality constants come from.
    #[arg(long, value_enum, default_value_t = Constants::Oracle)]
    constants: Constants,
    /// Fixed-n turning-point form on the angular side.
    #[arg(long)]
    fixed_n: bool,
    /// Liouville-Green form on the radial side beyond 1 + δ.
    #[arg(long)]
    lg: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalue λ with σ, α and the diagnostic λ + γ² − (2(n−m)+1)γ.
    Eigen {
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long, value_enum, default_value_t = Method::Oracle)]
        method: Method,
    },
    /// Uniform approximations on a set of points.
    Eval(EvalArgs),
    /// Uniform approximations against the series oracle.
    Compare(EvalArgs),
    /// Expansion coefficients a_{n,k} with the sums A and K.
    Coeffs {
        #[command(flatten)]
        mode: ModeArgs,
    },
}

fn parse_trunc(s: &str) -> Result<Truncation, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(Truncation::Auto);
    }
    match s.parse::<usize>() {
        Ok(k) if k > 0 => Ok(Truncation::Fixed(k)),
        _ => Err(format!("expected `auto` or a positive integer, got `{s}`")),
    }
}

enum Failure {
    /// stdout closed by the reader; not an error
    Closed,
    Usage(String),
    Admissibility(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Closed => 0,
            Failure::Usage(_) => 2,
            Failure::Admissibility(_) => 3,
            Failure::Numerical(_) => 4,
        }
    }

    fn message(&self) -> Option<&str> {
        match self {
            Failure::Closed => None,
            Failure::Usage(m) | Failure::Admissibility(m) | Failure::Numerical(m) => Some(m),
        }
    }
}

impl From<pswf::Error> for Failure {
    fn from(e: pswf::Error) -> Self {
        if e.is_domain() {
            Failure::Admissibility(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Failure::Closed;
        }
        Failure::Numerical(format!("write failed: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => io.into(),
            other => Failure::Numerical(format!("write failed: {other:?}")),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        if e.io_error_kind() == Some(io::ErrorKind::BrokenPipe) {
            return Failure::Closed;
        }
        Failure::Numerical(format!("write failed: {e}"))
    }
}

type Outcome<T> = Result<T, Failure>;

/// Row sink: CSV with a header, or one JSON object per line.
struct Sink {
    format: Format,
    csv: Option<csv::Writer<io::Stdout>>,
}

impl Sink {
    fn new(format: Format) -> Self {
        let csv = matches!(format, Format::Csv).then(|| csv::Writer::from_writer(io::stdout()));
        Sink { format, csv }
    }

    fn row<T: Serialize>(&mut self, r: &T) -> Outcome<()> {
        match self.csv.as_mut() {
            Some(w) => w.serialize(r)?,
            None => {
                let mut out = io::stdout().lock();
                serde_json::to_writer(&mut out, r)?;
                out.write_all(b"\n")?;
            }
        }
        Ok(())
    }

    /// Trailing summary: a `#` comment line in CSV, a `summary` object in JSON lines.
    fn footer(&mut self, fields: &[(&str, Option<f64>)]) -> Outcome<()> {
        if let Some(w) = self.csv.as_mut() {
            w.flush()?;
        }
        let mut out = io::stdout().lock();
        match self.format {
            Format::Csv => {
                let parts: Vec<String> = fields.iter().map(|(k, v)| format!("{k}={}", fmt_opt(*v))).collect();
                writeln!(out, "# {}", parts.join(" "))?;
            }
            Format::Jsonl => {
                let map: serde_json::Map<String, serde_json::Value> =
                    fields.iter().map(|(k, v)| (k.to_string(), serde_json::json!(v))).collect();
                serde_json::to_writer(&mut out, &serde_json::json!({ "summary": map }))?;
                out.write_all(b"\n")?;
            }
        }
        Ok(())
    }

    fn finish(mut self) -> Outcome<()> {
        if let Some(w) = self.csv.as_mut() {
            w.flush()?;
        }
        io::stdout().flush()?;
        Ok(())
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

#[derive(Serialize)]
struct EigenRow {
    method: &'static str,
    lambda: f64,
    sigma: Option<f64>,
    alpha: Option<f64>,
    diagnostic: f64,
}

#[derive(Serialize)]
struct EvalRow {
    x: f64,
    value: Option<f64>,
    log_magnitude: Option<f64>,
    sign: i32,
    regime: &'static str,
    err_estimate: Option<f64>,
}

#[derive(Serialize)]
struct CompareRow {
    x: f64,
    value: Option<f64>,
    log_magnitude: Option<f64>,
    sign: i32,
    regime: &'static str,
    err_estimate: Option<f64>,
    oracle: f64,
    abs_err: Option<f64>,
    rel_err: Option<f64>,
}

#[derive(Serialize)]
struct CoeffRow {
    k: i64,
    degree: i64,
    a: f64,
}

impl EvalRow {
    fn new(r: &EvalResult) -> Self {
        EvalRow {
            x: r.x,
            // overflowed rows keep only the log form
            value: finite(r.value).filter(|&v| v != 0.0 || r.sign == 0.0),
            log_magnitude: finite(r.ln_abs),
            sign: r.sign as i32,
            regime: r.regime.as_str(),
            err_estimate: finite(r.err_estimate),
        }
    }
}

fn mode_of(a: &ModeArgs) -> Outcome<ModeIndex> {
    if !a.gamma.is_finite() || a.gamma < 0.0 {
        return Err(Failure::Usage(format!("--gamma must be finite and ≥ 0, got {}", a.gamma)));
    }
    Ok(ModeIndex::new(a.m, a.n)?)
}

fn partition(g: &Global) -> Outcome<RegimePartition> {
    let delta0 = g.delta0.unwrap_or(0.25 * (1.0 - g.sigma0));
    RegimePartition::new(g.delta, delta0, g.sigma0).map_err(|e| Failure::Usage(e.to_string()))
}

fn parse_grid(text: &str) -> Outcome<Vec<f64>> {
    let bad = || Failure::Usage(format!("malformed grid `{text}`; expected a:b:count with count ≥ 1"));
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, count] = parts.as_slice() else { return Err(bad()) };
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    if count == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![a]);
    }
    let step = (b - a) / (count - 1) as f64;
    Ok((0..count).map(|i| if i == count - 1 { b } else { a + step * i as f64 }).collect())
}

fn points(args: &EvalArgs) -> Outcome<Vec<f64>> {
    let xs = match &args.grid {
        Some(g) => parse_grid(g)?,
        None => args.x.clone(),
    };
    for &x in &xs {
        let ok = match args.kind {
            Kind::Angular => x.abs() < 1.0,
            Kind::Radial => x > 1.0 && x.is_finite(),
        };
        if !ok {
            let dom = if args.kind == Kind::Angular { "−1 < x < 1" } else { "x > 1" };
            return Err(Failure::Usage(format!("x = {x} is outside the {} domain {dom}", kind_name(args.kind))));
        }
    }
    Ok(xs)
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Angular => "angular",
        Kind::Radial => "radial",
    }
}

fn options(args: &EvalArgs, g: &Global) -> EvalOptions {
    EvalOptions {
        source: match args.constants {
            Constants::Oracle => ConstantSource::Oracle,
            Constants::Asymptotic => ConstantSource::Asymptotic,
        },
        fixed_n: args.fixed_n,
        radial_lg: args.lg,
        p_tol: g.tol,
    }
}

fn evaluate(ev: &Evaluator, kind: Kind, x: f64) -> pswf::Result<EvalResult> {
    match kind {
        Kind::Angular => ev.evaluate_angular(x),
        Kind::Radial => ev.evaluate_radial(x),
    }
}

fn cmd_eigen(g: &Global, a: &ModeArgs, method: Method) -> Outcome<()> {
    let mode = mode_of(a)?;
    let gamma = a.gamma;
    let shift = |lambda: f64| lambda + gamma * gamma - (2.0 * (mode.n - mode.m) as f64 + 1.0) * gamma;
    let mut rows = Vec::new();
    if method != Method::Asymptotic {
        let lambda = eigenvalue_oracle(mode, gamma, g.trunc)?;
        let s = SpectralState::from_lambda(gamma, lambda).ok();
        rows.push(EigenRow {
            method: "oracle",
            lambda,
            sigma: s.map(|s| s.sigma),
            alpha: s.map(|s| s.alpha),
            diagnostic: shift(lambda),
        });
    }
    if method != Method::Oracle {
        mode.check_admissible(gamma, g.delta)?;
        let lambda = lambda_asymptotic(mode, gamma)?;
        let s = SpectralState::asymptotic(mode, gamma)?;
        rows.push(EigenRow {
            method: "asymptotic",
            lambda,
            sigma: Some(s.sigma),
            alpha: Some(s.alpha),
            diagnostic: shift(lambda),
        });
    }
    let mut sink = Sink::new(g.format);
    for r in &rows {
        sink.row(r)?;
    }
    sink.finish()
}

fn cmd_eval(g: &Global, args: &EvalArgs) -> Outcome<()> {
    let mode = mode_of(&args.mode)?;
    let xs = points(args)?;
    let ev = Evaluator::new(mode, args.mode.gamma, partition(g)?, options(args, g))?;
    let rows: Vec<pswf::Result<EvalResult>> = xs.par_iter().map(|&x| evaluate(&ev, args.kind, x)).collect();
    let mut sink = Sink::new(g.format);
    for r in rows {
        sink.row(&EvalRow::new(&r?))?;
    }
    sink.finish()
}

fn cmd_compare(g: &Global, args: &EvalArgs) -> Outcome<()> {
    let mode = mode_of(&args.mode)?;
    let xs = points(args)?;
    let part = partition(g)?;
    let opts = options(args, g);
    let gamma = args.mode.gamma;
    mode.check_admissible(gamma, part.delta)?;
    let x_max = xs.iter().fold(1.0f64, |m, &x| m.max(x.abs()));
    let oracle = Oracle::new(mode, gamma, x_max)?;
    let ev = match opts.source {
        ConstantSource::Oracle => Evaluator::with_oracle(&oracle, part, opts)?,
        ConstantSource::Asymptotic => Evaluator::new(mode, gamma, part, opts)?,
    };
    let rows: Vec<pswf::Result<(EvalResult, f64)>> = xs
        .par_iter()
        .map(|&x| {
            let r = evaluate(&ev, args.kind, x)?;
            let truth = match args.kind {
                Kind::Angular => oracle.angular(x)?,
                Kind::Radial => oracle.radial(x)?,
            };
            Ok((r, truth.value))
        })
        .collect();
    let mut sink = Sink::new(g.format);
    let (mut worst_rel, mut worst_ratio) = (None::<f64>, None::<f64>);
    let bump = |slot: &mut Option<f64>, v: Option<f64>| {
        if let Some(v) = v {
            *slot = Some(slot.map_or(v, |s| s.max(v)));
        }
    };
    for r in rows {
        let (r, truth) = r?;
        let base = EvalRow::new(&r);
        let abs_err = base.value.map(|v| (v - truth).abs());
        let rel_err = base.value.and_then(|_| finite(r.relative_error(truth)));
        bump(&mut worst_rel, rel_err);
        bump(&mut worst_ratio, abs_err.zip(base.err_estimate).and_then(|(e, est)| finite(e / est)));
        sink.row(&CompareRow {
            x: base.x,
            value: base.value,
            log_magnitude: base.log_magnitude,
            sign: base.sign,
            regime: base.regime,
            err_estimate: base.err_estimate,
            oracle: truth,
            abs_err,
            rel_err,
        })?;
    }
    sink.footer(&[("max_rel_err", worst_rel), ("max_err_over_estimate", worst_ratio)])?;
    sink.finish()
}

fn cmd_coeffs(g: &Global, a: &ModeArgs) -> Outcome<()> {
    let mode = mode_of(a)?;
    let t = coefficient_table(mode, a.gamma, g.trunc, Normalization::Legendre)?;
    let lo = t.k_min - t.band.len() as i64;
    let mut sink = Sink::new(g.format);
    for k in lo..=t.k_max {
        sink.row(&CoeffRow { k, degree: mode.n as i64 + 2 * k, a: t.a(k) })?;
    }
    sink.footer(&[("A", Some(t.norm_a().value)), ("K", Some(t.k_const().value))])?;
    sink.finish()
}

fn run(cli: &Cli) -> Outcome<()> {
    let g = &cli.global;
    if !(g.tol > 0.0 && g.tol < 1.0) {
        return Err(Failure::Usage(format!("--tol must lie in (0, 1), got {}", g.tol)));
    }
    match &cli.command {
        Command::Eigen { mode, method } => cmd_eigen(g, mode, *method),
        Command::Eval(args) => cmd_eval(g, args),
        Command::Compare(args) => cmd_compare(g, args),
        Command::Coeffs { mode } => cmd_coeffs(g, mode),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Some(m) = f.message() {
                eprintln!("pswf: {m}");
            }
            ExitCode::from(f.code())
        }
    }
}
