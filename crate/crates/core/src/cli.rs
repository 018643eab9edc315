//! Command-line front end.
//!
//! Exit codes: 0 success, 1 runtime failure (I/O, non-monotone scan),
//! 2 argument error, 3 numerical corruption.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::entropy::{DistanceKind, EntropyError, EntropyKind};
use crate::quantum::{NoisyStateParams, QuantumError};
use crate::search::{
    self, critical_visibility, grid, metric_audit, minimize_violation, sweep_beta, sweep_q, triangle_counterexample,
    OptimizerConfig, SearchError, SweepMode, SweepRow,
};

/// Overrides the default output directory.
pub const OUT_DIR_ENV: &str = "ENTBELL_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "results";

pub const CSV_HEADER: &str = "q,beta,visibility,metric,entropy,min_violation,v_c,restarts,seed,evals";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl From<QuantumError> for CliError {
    fn from(e: QuantumError) -> Self {
        match e {
            QuantumError::InvalidParams(m) => CliError::Usage(m),
            other => CliError::Search(other.into()),
        }
    }
}

impl From<EntropyError> for CliError {
    fn from(e: EntropyError) -> Self {
        match e {
            EntropyError::InvalidParameter(m) => CliError::Usage(m),
            other => CliError::Search(other.into()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Search(SearchError::InvalidConfig(_)) => 2,
            CliError::Search(SearchError::Quantum(QuantumError::InvalidParams(_))) => 2,
            CliError::Search(SearchError::Entropy(EntropyError::InvalidParameter(_))) => 2,
            CliError::Search(e) if e.is_numerical() => 3,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "entbell", version, about = "Entropic Bell inequalities for noisy qutrit pairs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimize the quadrangle violation at one visibility.
    Violate(ViolateArgs),
    /// Critical visibility by scan and bisection.
    Vc(VcArgs),
    /// Sweep the Tsallis parameter q.
    SweepQ(SweepQArgs),
    /// Sweep the state parameter beta.
    SweepBeta(SweepBetaArgs),
    /// Qubit CHSH check with the covariance distance.
    ChshSanity(ChshArgs),
    /// Random search for a triangle-inequality failure.
    RenyiCheck(RenyiArgs),
    /// Metric-axiom audit on random tripartite distributions.
    MetricAudit(AuditArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricArg {
    D1,
    D1n,
    D2,
    D2n,
}

impl From<MetricArg> for DistanceKind {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::D1 => DistanceKind::D1,
            MetricArg::D1n => DistanceKind::D1Norm,
            MetricArg::D2 => DistanceKind::D2,
            MetricArg::D2n => DistanceKind::D2Norm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricChoice {
    D1,
    D1n,
    D2,
    D2n,
    /// All four entropic distances.
    All,
}

impl MetricChoice {
    fn kinds(self) -> Vec<DistanceKind> {
        match self {
            MetricChoice::D1 => vec![DistanceKind::D1],
            MetricChoice::D1n => vec![DistanceKind::D1Norm],
            MetricChoice::D2 => vec![DistanceKind::D2],
            MetricChoice::D2n => vec![DistanceKind::D2Norm],
            MetricChoice::All => DistanceKind::ENTROPIC.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntropyArg {
    Shannon,
    Tsallis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    FixedV,
    Vc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TriangleEntropy {
    Renyi,
    Tsallis,
}

fn entropy_kind(e: EntropyArg, q: f64) -> Result<EntropyKind, CliError> {
    Ok(match e {
        EntropyArg::Shannon => EntropyKind::Shannon,
        EntropyArg::Tsallis => EntropyKind::tsallis(q)?,
    })
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OptArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub restarts: usize,
    #[arg(long, default_value_t = 5000)]
    pub max_evals: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Worker threads; never changes results.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Output file (default: $ENTBELL_OUT_DIR or ./results, per command).
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl OptArgs {
    fn config(&self) -> OptimizerConfig {
        OptimizerConfig {
            restarts: self.restarts,
            max_evals_per_restart: self.max_evals,
            objective_tolerance: self.tol,
            seed: self.seed,
            parallel_workers: self.workers.max(1),
            ..OptimizerConfig::default()
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ViolateArgs {
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub visibility: f64,
    #[arg(long, value_enum, default_value_t = MetricArg::D1)]
    pub metric: MetricArg,
    #[arg(long, value_enum, default_value_t = EntropyArg::Shannon)]
    pub entropy: EntropyArg,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub opt: OptArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VcArgs {
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, value_enum, default_value_t = MetricChoice::D1)]
    pub metric: MetricChoice,
    #[arg(long, value_enum, default_value_t = EntropyArg::Shannon)]
    pub entropy: EntropyArg,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub v_precision: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub opt: OptArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepQArgs {
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, value_enum, default_value_t = MetricArg::D1)]
    pub metric: MetricArg,
    #[arg(long, default_value_t = 1.0)]
    pub q_min: f64,
    #[arg(long, default_value_t = 5.0)]
    pub q_max: f64,
    #[arg(long, default_value_t = 0.1)]
    pub q_step: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::FixedV)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 1.0)]
    pub visibility: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub v_precision: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub opt: OptArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepBetaArgs {
    #[arg(long, default_value_t = 0.0)]
    pub beta_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta_max: f64,
    #[arg(long, default_value_t = 0.25)]
    pub beta_step: f64,
    #[arg(long, value_enum, default_value_t = MetricArg::D1)]
    pub metric: MetricArg,
    #[arg(long, value_enum, default_value_t = EntropyArg::Shannon)]
    pub entropy: EntropyArg,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::FixedV)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 1.0)]
    pub visibility: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub v_precision: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub opt: OptArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ChshArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub restarts: usize,
    #[arg(long, default_value_t = 5000)]
    pub max_evals: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RenyiArgs {
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Entropy used in the distance; tsallis serves as the control.
    #[arg(long, value_enum, default_value_t = TriangleEntropy::Renyi)]
    pub entropy: TriangleEntropy,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AuditArgs {
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Tsallis parameters audited alongside Shannon.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 1.5, 2.0, 3.0, 5.0])]
    pub qs: Vec<f64>,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

/// Flat key-value record of a run, written at the top of every output file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig(pub BTreeMap<String, String>);

impl RunConfig {
    pub fn new<T: Serialize>(command: &str, args: &T) -> Self {
        let mut map = BTreeMap::new();
        map.insert("command".to_string(), command.to_string());
        map.insert("version".to_string(), env!("CARGO_PKG_VERSION").to_string());
        if let Ok(serde_json::Value::Object(obj)) = serde_json::to_value(args) {
            for (k, v) in obj {
                let s = match v {
                    serde_json::Value::String(s) => s,
                    serde_json::Value::Array(a) => a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";"),
                    other => other.to_string(),
                };
                map.insert(k, s);
            }
        }
        Self(map)
    }

    pub fn csv_preamble(&self) -> String {
        self.0.iter().map(|(k, v)| format!("# {k}={v}\n")).collect()
    }
}

/// C `%.12g`.
pub fn fmt_g12(x: f64) -> String {
    fmt_g(x, 12)
}

pub fn fmt_g(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let p = precision.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt_field(x: Option<f64>) -> String {
    x.map(fmt_g12).unwrap_or_default()
}

pub fn csv_row(r: &SweepRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        fmt_g12(r.q),
        fmt_g12(r.beta),
        opt_field(r.visibility),
        r.metric.label(),
        r.entropy.name(),
        opt_field(r.min_violation),
        opt_field(r.v_c),
        r.restarts,
        r.seed,
        r.evals
    )
}

/// Metadata preamble, header, and one line per row.
pub fn render_csv(config: &RunConfig, rows: &[SweepRow]) -> String {
    let mut s = config.csv_preamble();
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&csv_row(r));
        s.push('\n');
    }
    s
}

pub fn render_json<T: Serialize>(config: &RunConfig, result: &T) -> String {
    #[derive(Serialize)]
    struct Doc<'a, T> {
        metadata: &'a RunConfig,
        result: &'a T,
    }
    let mut s = serde_json::to_string_pretty(&Doc {
        metadata: config,
        result,
    })
    .expect("serializable result");
    s.push('\n');
    s
}

fn output_path(explicit: &Option<PathBuf>, default_name: &str) -> PathBuf {
    if let Some(p) = explicit {
        return p.clone();
    }
    let dir = std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    dir.join(default_name)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|source| CliError::Io {
            path: parent.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn main() -> i32 {
    run(std::env::args_os())
}

/// Runs one command and returns the text for stdout.
pub fn dispatch(command: Command) -> Result<String, CliError> {
    match command {
        Command::Violate(a) => violate(a),
        Command::Vc(a) => vc(a),
        Command::SweepQ(a) => sweep_q_cmd(a),
        Command::SweepBeta(a) => sweep_beta_cmd(a),
        Command::ChshSanity(a) => chsh(a),
        Command::RenyiCheck(a) => renyi(a),
        Command::MetricAudit(a) => audit(a),
    }
}

fn violate(a: ViolateArgs) -> Result<String, CliError> {
    let rc = RunConfig::new("violate", &a);
    let params = NoisyStateParams::qutrits(a.beta, a.visibility)?;
    let ekind = entropy_kind(a.entropy, a.q)?;
    let dkind = a.metric.into();
    let res = minimize_violation(&params, dkind, ekind, &a.opt.config())?;
    let path = output_path(&a.opt.out, "violate.json");
    write_file(&path, &render_json(&rc, &res))?;

    let r = &res.report;
    let mut out = String::new();
    let _ = writeln!(out, "metric={} entropy={} q={}", dkind.label(), ekind.name(), fmt_g12(ekind.q()));
    let _ = writeln!(out, "beta={} visibility={}", fmt_g12(a.beta), fmt_g12(a.visibility));
    let _ = writeln!(out, "d(A,B)={}", fmt_g12(r.d_a_b));
    let _ = writeln!(out, "d(B,A')={}", fmt_g12(r.d_b_aprime));
    let _ = writeln!(out, "d(A',B')={}", fmt_g12(r.d_aprime_bprime));
    let _ = writeln!(out, "d(A,B')={}", fmt_g12(r.d_a_bprime));
    let _ = writeln!(out, "L={} R={}", fmt_g12(r.lhs), fmt_g12(r.rhs));
    let _ = writeln!(out, "violation={} violated={}", fmt_g12(r.violation), r.is_violated());
    let _ = writeln!(out, "evals={} best_restart={}", res.evals_used, res.restart_index_of_best);
    let _ = writeln!(out, "wrote {}", path.display());
    Ok(out)
}

fn vc(a: VcArgs) -> Result<String, CliError> {
    let rc = RunConfig::new("vc", &a);
    NoisyStateParams::qutrits(a.beta, 1.0)?;
    let ekind = entropy_kind(a.entropy, a.q)?;
    let config = a.opt.config();
    let mut results = Vec::new();
    let mut rows = Vec::new();
    for dkind in a.metric.kinds() {
        let r = critical_visibility(a.beta, dkind, ekind, &config, a.v_precision)?;
        rows.push(SweepRow {
            q: ekind.q(),
            beta: a.beta,
            visibility: None,
            metric: dkind,
            entropy: ekind,
            min_violation: Some(r.violation_at_v1()),
            v_c: r.v_c,
            restarts: config.restarts,
            seed: config.seed,
            evals: r.evals_used,
        });
        results.push(r);
    }
    let json_path = output_path(&a.opt.out, "vc.json");
    let csv_path = json_path.with_extension("csv");
    write_file(&json_path, &render_json(&rc, &results))?;
    let csv = render_csv(&rc, &rows);
    write_file(&csv_path, &csv)?;

    let mut out = String::new();
    for r in &results {
        let _ = writeln!(
            out,
            "{} v_c={} bracket={} violated_at_v1={}",
            r.dkind.label(),
            opt_field(r.v_c),
            fmt_g12(r.bracket_width),
            r.violated_at_v1
        );
    }
    if let Some(best) = results.iter().filter_map(|r| r.v_c).min_by(f64::total_cmp) {
        let _ = writeln!(out, "min v_c={}", fmt_g12(best));
    }
    let _ = writeln!(out, "wrote {} and {}", json_path.display(), csv_path.display());
    Ok(out)
}

fn mode(m: ModeArg, visibility: f64, precision: f64) -> Result<SweepMode, CliError> {
    Ok(match m {
        ModeArg::FixedV => {
            if !(0.0..=1.0).contains(&visibility) {
                return Err(CliError::Usage(format!("visibility {visibility} not in [0,1]")));
            }
            SweepMode::FixedVisibility(visibility)
        }
        ModeArg::Vc => SweepMode::CriticalVisibility(precision),
    })
}

fn checked_grid(lo: f64, hi: f64, step: f64, what: &str) -> Result<Vec<f64>, CliError> {
    if !(step > 0.0) || !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(CliError::Usage(format!("bad {what} grid: min {lo}, max {hi}, step {step}")));
    }
    Ok(grid(lo, hi, step))
}

fn sweep_q_cmd(a: SweepQArgs) -> Result<String, CliError> {
    let rc = RunConfig::new("sweep-q", &a);
    NoisyStateParams::qutrits(a.beta, 1.0)?;
    let qs = checked_grid(a.q_min, a.q_max, a.q_step, "q")?;
    if qs[0] < 1.0 {
        return Err(CliError::Usage("q must be >= 1".into()));
    }
    let rows = sweep_q(
        a.beta,
        a.metric.into(),
        &qs,
        mode(a.mode, a.visibility, a.v_precision)?,
        &a.opt.config(),
    )?;
    let csv = render_csv(&rc, &rows);
    let path = output_path(&a.opt.out, "sweep_q.csv");
    write_file(&path, &csv)?;
    Ok(format!("{csv}wrote {}\n", path.display()))
}

fn sweep_beta_cmd(a: SweepBetaArgs) -> Result<String, CliError> {
    let rc = RunConfig::new("sweep-beta", &a);
    let betas = checked_grid(a.beta_min, a.beta_max, a.beta_step, "beta")?;
    if betas[0] < 0.0 || *betas.last().expect("nonempty") > 1.0 + 1e-12 {
        return Err(CliError::Usage("beta must lie in [0,1]".into()));
    }
    let betas: Vec<f64> = betas.into_iter().map(|b| b.min(1.0)).collect();
    let rows = sweep_beta(
        &betas,
        a.metric.into(),
        entropy_kind(a.entropy, a.q)?,
        mode(a.mode, a.visibility, a.v_precision)?,
        &a.opt.config(),
    )?;
    let csv = render_csv(&rc, &rows);
    let path = output_path(&a.opt.out, "sweep_beta.csv");
    write_file(&path, &csv)?;
    Ok(format!("{csv}wrote {}\n", path.display()))
}

/// 2 − 2√2.
pub const TSIRELSON_VIOLATION: f64 = 2.0 - 2.0 * std::f64::consts::SQRT_2;

fn chsh(a: ChshArgs) -> Result<String, CliError> {
    let rc = RunConfig::new("chsh-sanity", &a);
    let config = OptimizerConfig {
        restarts: a.restarts,
        max_evals_per_restart: a.max_evals,
        objective_tolerance: a.tol,
        seed: a.seed,
        parallel_workers: a.workers.max(1),
        ..OptimizerConfig::default()
    };
    let res = search::chsh_sanity(&config)?;
    let path = output_path(&a.out, "chsh_sanity.json");
    write_file(&path, &render_json(&rc, &res))?;
    let gap = (res.best_violation - TSIRELSON_VIOLATION).abs();
    Ok(format!(
        "min violation={}\ntsirelson={}\nabs error={}\nwrote {}\n",
        fmt_g12(res.best_violation),
        fmt_g12(TSIRELSON_VIOLATION),
        fmt_g(gap, 3),
        path.display()
    ))
}

fn renyi(a: RenyiArgs) -> Result<String, CliError> {
    let rc = RunConfig::new("renyi-check", &a);
    let ekind = match a.entropy {
        TriangleEntropy::Renyi => EntropyKind::renyi(a.q)?,
        TriangleEntropy::Tsallis => EntropyKind::tsallis(a.q)?,
    };
    let found = triangle_counterexample(DistanceKind::D1, ekind, a.trials, a.seed)?;
    let path = output_path(&a.out, "renyi_check.json");
    write_file(&path, &render_json(&rc, &found))?;
    let mut out = match &found {
        Some(c) => format!(
            "counterexample at trial {}: d(X,Z)={} > d(X,Y)+d(Y,Z)={}+{} (slack {})\n",
            c.trial,
            fmt_g12(c.d_xz),
            fmt_g12(c.d_xy),
            fmt_g12(c.d_yz),
            fmt_g12(c.slack)
        ),
        None => "none found\n".to_string(),
    };
    let _ = writeln!(out, "wrote {}", path.display());
    Ok(out)
}

fn audit(a: AuditArgs) -> Result<String, CliError> {
    let rc = RunConfig::new("metric-audit", &a);
    let rows = metric_audit(a.samples, a.seed, &a.qs)?;
    let path = output_path(&a.out, "metric_audit.json");
    write_file(&path, &render_json(&rc, &rows))?;
    let mut out = String::from("metric,entropy,q,worst_triangle_slack,min_distance,max_asymmetry,max_self_distance\n");
    for r in &rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.dkind.label(),
            r.ekind.name(),
            fmt_g12(r.ekind.q()),
            fmt_g12(r.worst_triangle_slack),
            fmt_g12(r.min_distance),
            fmt_g12(r.max_asymmetry),
            fmt_g12(r.max_self_distance)
        );
    }
    let _ = writeln!(out, "wrote {}", path.display());
    Ok(out)
}
