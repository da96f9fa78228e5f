//! Sweep driver behind the `kc` binary.
//!
//! Each subcommand evaluates a library function over a parameter sweep and
//! produces a [`Table`]. Points are computed in parallel and collected in
//! sweep order; nothing is written until every point has succeeded.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::complexity::{total_complexity, StatePair};
use crate::derivatives::{
    phase_map, susceptibility_delta, susceptibility_fd, susceptibility_mu, Param, Scale,
};
use crate::error::Error;
use crate::model::{Chain, ModelParams};
use crate::optimal_circuit::{sine_coefficients, sup_errors, tail_law, truncation_order};
use crate::pip2d::{complexity2d, susceptibility2d, Pip2dParams};
use crate::quench::{complexity_timeseries, default_times, steady_state, QuenchSetup};

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "KC_THREADS";

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl SweepRange {
    /// Evenly spaced points including both endpoints.
    pub fn points(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

impl FromStr for SweepRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected lo:hi:steps, got '{s}'"));
        }
        let num = |x: &str| {
            x.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("bad number '{x}' in '{s}'"))
        };
        let (lo, hi) = (num(parts[0])?, num(parts[1])?);
        let steps: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| format!("bad step count '{}' in '{s}'", parts[2]))?;
        if steps < 2 {
            return Err(format!("need at least 2 steps, got {steps}"));
        }
        if lo >= hi {
            return Err(format!("need lo < hi, got {lo} and {hi}"));
        }
        Ok(Self { lo, hi, steps })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "kc", version, about = "Circuit complexity sweeps for Kitaev chains and p+ip superconductors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Output file.
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct ChainArgs {
    /// Number of sites (even, at least 4).
    #[arg(long = "L", default_value_t = 1000)]
    pub l: usize,
    /// Long-range pairing exponent; short-range chain when absent.
    #[arg(long)]
    pub alpha: Option<f64>,
}

impl ChainArgs {
    fn chain(&self) -> Chain {
        match self.alpha {
            Some(alpha) => Chain::LongRange { alpha },
            None => Chain::ShortRange,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu_r: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub delta_r: Option<f64>,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub mu_t: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub delta_t: Option<f64>,
    /// Pairing used for whichever of reference/target is not given explicitly.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub delta: f64,
    #[command(flatten)]
    pub chain: ChainArgs,
}

#[derive(Args, Debug, Clone)]
pub struct QuenchArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu_i: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub delta_i: Option<f64>,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub mu_f: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub delta_f: Option<f64>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub delta: f64,
    #[command(flatten)]
    pub chain: ChainArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Centered difference of the finite-size density.
    Fd,
    /// Quadrature of the thermodynamic-limit derivative integral.
    Analytic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DerivParam {
    Mu,
    Delta,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Ground-state complexity between two chains.
    Gs {
        #[command(flatten)]
        pair: PairArgs,
        /// Swept variable (mu-r, delta-r, mu-t, delta-t) and lo:hi:steps.
        #[arg(long, num_args = 2, value_names = ["VAR", "LO:HI:STEPS"], allow_hyphen_values = true, required = true)]
        sweep: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Derivative of the complexity density with respect to a target parameter.
    Susceptibility {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, num_args = 2, value_names = ["VAR", "LO:HI:STEPS"], allow_hyphen_values = true, required = true)]
        sweep: Vec<String>,
        #[arg(long, value_enum, default_value_t = DerivParam::Mu)]
        param: DerivParam,
        #[arg(long, value_enum, default_value_t = Method::Fd)]
        method: Method,
        /// Finite-difference step.
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
        /// Relative quadrature tolerance for the analytic method.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Winding number and branch-point classification on a (μ, Δ) grid.
    PhaseMap {
        #[arg(long, allow_hyphen_values = true)]
        mu: SweepRange,
        #[arg(long, allow_hyphen_values = true)]
        delta: SweepRange,
        #[arg(long = "L", default_value_t = 200)]
        l: usize,
        #[arg(long)]
        alpha: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// Complexity after a sudden quench as a function of time.
    QuenchSeries {
        #[command(flatten)]
        quench: QuenchArgs,
        /// Sample times lo:hi:steps; defaults to 2000 points over 40/min-gap.
        #[arg(long, allow_hyphen_values = true)]
        times: Option<SweepRange>,
        #[command(flatten)]
        out: Output,
    },
    /// Phase-averaged steady-state complexity after a quench.
    QuenchSteady {
        #[command(flatten)]
        quench: QuenchArgs,
        /// Swept variable (mu-i, delta-i, mu-f, delta-f) and lo:hi:steps.
        #[arg(long, num_args = 2, value_names = ["VAR", "LO:HI:STEPS"], allow_hyphen_values = true, required = true)]
        sweep: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Sine coefficients of the angle difference and truncation errors.
    Fourier {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = crate::optimal_circuit::DEFAULT_N_MAX)]
        n_max: usize,
        #[arg(long, default_value_t = 1e-3)]
        epsilon: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Continuum p+ip superconductor against the empty reference.
    Pip2d {
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long, default_value_t = 0.5)]
        mass: f64,
        /// Radial cutoff; defaults to 20·√(2m·max(|μ|, Δ²m, 1)) at the largest |μ| swept.
        #[arg(long)]
        cutoff: Option<f64>,
        #[arg(long, default_value_t = crate::pip2d::DEFAULT_RESOLUTION)]
        resolution: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Swept target chemical potential (mu-t) and lo:hi:steps.
        #[arg(long, num_args = 2, value_names = ["VAR", "LO:HI:STEPS"], allow_hyphen_values = true, required = true)]
        sweep: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "invalid arguments: {m}"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSize(_) | Error::InvalidParameter(_) => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Float(f64),
    Int(i64),
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::Float(x) => format!("{x:.11e}"),
            Value::Int(i) => i.to_string(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Value::Float(x) => format!("{x:.11e}")
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map_or(serde_json::Value::Null, serde_json::Value::Number),
            Value::Int(i) => serde_json::Value::from(*i),
        }
    }
}

/// Named columns of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<(String, Vec<Value>)>,
}

impl Table {
    fn from_rows(names: &[&str], rows: Vec<Vec<Value>>) -> Self {
        let mut columns: Vec<(String, Vec<Value>)> = names
            .iter()
            .map(|n| (n.to_string(), Vec::with_capacity(rows.len())))
            .collect();
        for row in rows {
            for (col, v) in columns.iter_mut().zip(row) {
                col.1.push(v);
            }
        }
        Self { columns }
    }

    pub fn column(&self, name: &str) -> Option<&[Value]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.1.len())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self
            .columns
            .iter()
            .map(|(n, _)| n.as_str())
            .collect::<Vec<_>>()
            .join(",");
        out.push('\n');
        for i in 0..self.rows() {
            let line: Vec<String> = self.columns.iter().map(|(_, c)| c[i].csv()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut map = serde_json::Map::new();
        for (name, values) in &self.columns {
            map.insert(
                name.clone(),
                serde_json::Value::Array(values.iter().map(Value::json).collect()),
            );
        }
        let mut s = serde_json::Value::Object(map).to_string();
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

fn parse_sweep(sweep: &[String], allowed: &[&str]) -> CliResult<(String, Vec<f64>)> {
    let [var, range] = sweep else {
        return Err(CliError::Usage("--sweep takes VAR LO:HI:STEPS".into()));
    };
    if !allowed.contains(&var.as_str()) {
        return Err(CliError::Usage(format!(
            "cannot sweep '{var}'; expected one of {}",
            allowed.join(", ")
        )));
    }
    let range: SweepRange = range.parse().map_err(CliError::Usage)?;
    Ok((var.clone(), range.points()))
}

fn column_name(var: &str) -> String {
    var.replace('-', "_")
}

/// Reference and target with the swept variable set to `v`.
fn pair_at(args: &PairArgs, var: &str, v: f64) -> CliResult<StatePair> {
    let (mut mr, mut dr) = (args.mu_r, args.delta_r.unwrap_or(args.delta));
    let (mut mt, mut dt) = (args.mu_t, args.delta_t.unwrap_or(args.delta));
    match var {
        "mu-r" => mr = v,
        "delta-r" => dr = v,
        "mu-t" => mt = v,
        "delta-t" => dt = v,
        _ => {}
    }
    let chain = args.chain.chain();
    let l = args.chain.l;
    Ok(StatePair::new(
        ModelParams::new(chain, mr, dr, l)?,
        ModelParams::new(chain, mt, dt, l)?,
    )?)
}

fn quench_at(args: &QuenchArgs, var: &str, v: f64) -> CliResult<QuenchSetup> {
    let (mut mi, mut di) = (args.mu_i, args.delta_i.unwrap_or(args.delta));
    let (mut mf, mut df) = (args.mu_f, args.delta_f.unwrap_or(args.delta));
    match var {
        "mu-i" => mi = v,
        "delta-i" => di = v,
        "mu-f" => mf = v,
        "delta-f" => df = v,
        _ => {}
    }
    let chain = args.chain.chain();
    let l = args.chain.l;
    Ok(QuenchSetup::new(
        ModelParams::new(chain, mi, di, l)?,
        ModelParams::new(chain, mf, df, l)?,
    )?)
}

fn sweep_rows<F>(points: &[f64], f: F) -> CliResult<Vec<Vec<Value>>>
where
    F: Fn(f64) -> CliResult<Vec<Value>> + Sync,
{
    points
        .par_iter()
        .map(|&v| {
            let mut row = vec![Value::Float(v)];
            row.extend(f(v)?);
            Ok(row)
        })
        .collect()
}

/// Evaluates a subcommand into a table without touching the filesystem.
pub fn compute(command: &Command) -> CliResult<Table> {
    match command {
        Command::Gs { pair, sweep, .. } => {
            let (var, points) = parse_sweep(sweep, &["mu-r", "delta-r", "mu-t", "delta-t"])?;
            let rows = sweep_rows(&points, |v| {
                let r = total_complexity(&pair_at(pair, &var, v)?)?;
                Ok(vec![Value::Float(r.total), Value::Float(r.density)])
            })?;
            Ok(Table::from_rows(&[&column_name(&var), "complexity", "density"], rows))
        }
        Command::Susceptibility {
            pair,
            sweep,
            param,
            method,
            step,
            tol,
            ..
        } => {
            let (var, points) = parse_sweep(sweep, &["mu-r", "delta-r", "mu-t", "delta-t"])?;
            let rows = sweep_rows(&points, |v| {
                let p = pair_at(pair, &var, v)?;
                let s = match (method, param) {
                    (Method::Fd, DerivParam::Mu) => susceptibility_fd(&p, Param::Mu, *step, Scale::FiniteSize)?,
                    (Method::Fd, DerivParam::Delta) => {
                        susceptibility_fd(&p, Param::Delta, *step, Scale::FiniteSize)?
                    }
                    (Method::Analytic, DerivParam::Mu) => susceptibility_mu(&p, *tol)?,
                    (Method::Analytic, DerivParam::Delta) => susceptibility_delta(&p, *tol)?,
                };
                Ok(vec![Value::Float(s)])
            })?;
            Ok(Table::from_rows(&[&column_name(&var), "susceptibility"], rows))
        }
        Command::PhaseMap {
            mu,
            delta,
            l,
            alpha,
            ..
        } => {
            let chain = match alpha {
                Some(alpha) => Chain::LongRange { alpha: *alpha },
                None => Chain::ShortRange,
            };
            let cells = phase_map(chain, &mu.points(), &delta.points(), *l)?;
            let w = |x: Option<crate::derivatives::Winding>| Value::Float(x.map_or(f64::NAN, |w| w.value()));
            let rows = cells
                .into_iter()
                .map(|c| {
                    vec![
                        Value::Float(c.mu),
                        Value::Float(c.delta),
                        w(c.winding),
                        w(c.branch),
                        Value::Int(c.boundary as i64),
                    ]
                })
                .collect();
            Ok(Table::from_rows(
                &["mu", "delta", "winding", "branch_winding", "boundary"],
                rows,
            ))
        }
        Command::QuenchSeries { quench, times, .. } => {
            let q = quench_at(quench, "", 0.0)?;
            let times = times.map_or_else(|| default_times(&q), |r| r.points());
            if times[0] < 0.0 {
                return Err(CliError::Usage("times must be non-negative".into()));
            }
            let s = complexity_timeseries(&q, &times)?;
            let rows = s
                .times
                .iter()
                .zip(&s.values)
                .map(|(&t, &c)| vec![Value::Float(t), Value::Float(c), Value::Float(s.steady_state)])
                .collect();
            Ok(Table::from_rows(&["t", "complexity", "steady_state"], rows))
        }
        Command::QuenchSteady { quench, sweep, .. } => {
            let (var, points) = parse_sweep(sweep, &["mu-i", "delta-i", "mu-f", "delta-f"])?;
            let rows = sweep_rows(&points, |v| {
                Ok(vec![Value::Float(steady_state(&quench_at(quench, &var, v)?)?)])
            })?;
            Ok(Table::from_rows(&[&column_name(&var), "steady_state"], rows))
        }
        Command::Fourier {
            pair, n_max, epsilon, ..
        } => {
            if *n_max == 0 {
                return Err(CliError::Usage("--n-max must be positive".into()));
            }
            if epsilon.is_nan() || *epsilon <= 0.0 {
                return Err(CliError::Usage("--epsilon must be positive".into()));
            }
            let spectrum = sine_coefficients(&pair_at(pair, "", 0.0)?, *n_max)?;
            let errors = sup_errors(&spectrum);
            let rows = (1..=*n_max)
                .map(|n| {
                    let w = spectrum.omega(n);
                    vec![
                        Value::Int(n as i64),
                        Value::Float(w),
                        Value::Float(n as f64 * w.abs()),
                        Value::Float(errors[n]),
                    ]
                })
                .collect();
            eprintln!(
                "truncation order at {epsilon}: {:?}; tail: {:?}",
                truncation_order(&spectrum, *epsilon),
                tail_law(&spectrum)
            );
            Ok(Table::from_rows(&["n", "omega", "n_abs_omega", "sup_error"], rows))
        }
        Command::Pip2d {
            delta,
            mass,
            cutoff,
            resolution,
            tol,
            sweep,
            ..
        } => {
            let (var, points) = parse_sweep(sweep, &["mu-t"])?;
            let widest = points.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let base = Pip2dParams::new(widest, *delta, *mass)?.with_resolution(*resolution)?;
            let base = match cutoff {
                Some(c) => base.with_cutoff(*c)?,
                None => base,
            };
            let rows = sweep_rows(&points, |v| {
                let t = base.with_mu(v)?;
                Ok(vec![
                    Value::Float(complexity2d(&t.vacuum(), &t)?),
                    Value::Float(susceptibility2d(&t, *tol)?),
                ])
            })?;
            Ok(Table::from_rows(&[&column_name(&var), "density", "susceptibility"], rows))
        }
    }
}

fn output_of(command: &Command) -> &Output {
    match command {
        Command::Gs { out, .. }
        | Command::Susceptibility { out, .. }
        | Command::PhaseMap { out, .. }
        | Command::QuenchSeries { out, .. }
        | Command::QuenchSteady { out, .. }
        | Command::Fourier { out, .. }
        | Command::Pip2d { out, .. } => out,
    }
}

fn write_atomically(path: &Path, contents: &str) -> CliResult<()> {
    let result = fs::write(path, contents);
    if let Err(e) = result {
        let _ = fs::remove_file(path);
        return Err(CliError::Io(e));
    }
    Ok(())
}

/// Computes the table and writes it to the requested file.
pub fn run(cli: &Cli) -> CliResult<Table> {
    let table = compute(&cli.command)?;
    let out = output_of(&cli.command);
    write_atomically(&out.output, &table.render(out.format))?;
    Ok(table)
}

fn thread_count() -> CliResult<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got '{s}'"))),
    }
}

/// Parses arguments, runs the subcommand in a pool sized by `KC_THREADS`,
/// and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = thread_count().and_then(|threads| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = threads {
            builder = builder.num_threads(n);
        }
        let pool = builder
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
        pool.install(|| run(&cli))
    });
    match outcome {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("kc: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_range_parsing() {
        let r: SweepRange = "0:2:201".parse().unwrap();
        let p = r.points();
        assert_eq!(p.len(), 201);
        assert_eq!(p[0], 0.0);
        assert_eq!(p[200], 2.0);
        assert_eq!(p[100], 1.0);
        let r: SweepRange = "-2:2:41".parse().unwrap();
        assert_eq!(r.points()[10], -1.0);
        for bad in ["0:2", "2:0:10", "0:1:1", "a:1:3", "0:inf:3"] {
            assert!(bad.parse::<SweepRange>().is_err(), "{bad}");
        }
    }

    #[test]
    fn csv_layout() {
        let t = Table::from_rows(
            &["x", "y", "n"],
            vec![
                vec![Value::Float(1.0), Value::Float(-0.125), Value::Int(3)],
                vec![Value::Float(2.5e-7), Value::Float(f64::NAN), Value::Int(-1)],
            ],
        );
        assert_eq!(
            t.to_csv(),
            "x,y,n\n1.00000000000e0,-1.25000000000e-1,3\n2.50000000000e-7,NaN,-1\n"
        );
        assert_eq!(t.to_json(), "{\"x\":[1.0,2.5e-7],\"y\":[-0.125,null],\"n\":[3,-1]}\n");
    }

    #[test]
    fn library_errors_map_to_exit_codes() {
        assert_eq!(CliError::from(Error::InvalidSize(3)).exit_code(), EXIT_USAGE);
        assert_eq!(CliError::from(Error::GapClosed { k: 1.0 }).exit_code(), EXIT_NUMERICAL);
    }

    #[test]
    fn unknown_sweep_variable_is_a_usage_error() {
        let err = parse_sweep(&["mu-x".into(), "0:1:3".into()], &["mu-t"]).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_USAGE);
    }
}
