//! Command-line front end: argument parsing, dispatch, output formatting and
//! atomic file output. Exit codes: 0 success, 1 usage or domain error,
//! 2 numerical failure or a failed check.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::boundary::theta_extract_with;
use crate::classify::classify_alpha;
use crate::envelopes::{
    check_envelope, envelope_constants, envelope_grid, ks_statistic, sample_inverse_beta_power,
    sharp_envelope_check, KS_CRITICAL_1PCT,
};
use crate::error::Error;
use crate::params::{QuadratureConfig, StableParams};
use crate::boundary::cross_check_identity;
use crate::hcm::{hcm_probe_g, reconstruct_g_raw};
use crate::stable_core::{
    cdf_inverse_power, eval_density, eval_g_real, eval_tail, g_total_mass, mixture_identity_residual,
};

/// Version of every JSON document the CLI writes.
pub const SCHEMA_VERSION: u32 = 1;
/// Directory for relative `--out` paths when set.
pub const OUT_DIR_ENV: &str = "STABLEHCM_OUT_DIR";

#[derive(Parser, Debug, Clone)]
#[command(name = "stablehcm", version, about = "Stable densities, boundary arguments and HCM diagnostics")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Evaluate G_alpha, the stable density, its tail or the distribution of S^(-beta).
    Eval(EvalArgs),
    /// Extract the boundary argument theta(r).
    Theta(ThetaArgs),
    /// Classify G_alpha as HCM, AntiHCM or Neither.
    Classify(ClassifyArgs),
    /// Compute and check the gamma-mixture envelopes.
    Envelope(EnvelopeArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Draw S_alpha^(-beta) by rejection sampling.
    Sample(SampleArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 1e-14)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = 2000)]
    pub max_subdivisions: usize,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; relative paths resolve against $STABLEHCM_OUT_DIR when set.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// Density of S_alpha^(-beta).
    #[value(name = "G")]
    G,
    /// Density of S_{alpha,gamma}.
    Density,
    /// Tail P(S_{alpha,gamma} > x).
    Tail,
    /// Distribution function of S_alpha^(-beta).
    Cdf,
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let a: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if a > 0.0 && a < 1.0 {
        Ok(a)
    } else {
        Err(format!("alpha = {s} must lie in the open interval (0,1)"))
    }
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    #[arg(long)]
    pub xmin: Option<f64>,
    #[arg(long)]
    pub xmax: Option<f64>,
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Spacing::Log)]
    pub spacing: Spacing,
}

#[derive(Args, Debug, Clone)]
pub struct EvalArgs {
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: f64,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Single evaluation point; otherwise the grid is used.
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long, value_enum, default_value_t = Quantity::G)]
    pub quantity: Quantity,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct ThetaArgs {
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub rmin: f64,
    #[arg(long, default_value_t = 1e4)]
    pub rmax: f64,
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct ClassifyArgs {
    /// One or more comma-separated values.
    #[arg(long, value_parser = parse_alpha, value_delimiter = ',', required = true)]
    pub alpha: Vec<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct EnvelopeArgs {
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: f64,
    #[arg(long, default_value_t = 100)]
    pub grid_density: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub xmin: f64,
    #[arg(long, default_value_t = 1e3)]
    pub xmax: f64,
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Roundtrip,
    Normalization,
    Envelope,
    Identities,
    Hcm,
    All,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct SampleArgs {
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: f64,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also compute the Kolmogorov-Smirnov distance to the exact distribution.
    #[arg(long)]
    pub ks: bool,
    #[command(flatten)]
    pub common: Common,
}

/// What a command produced: a CSV rendering, a JSON document and the format
/// used when `--format` is absent.
struct Output {
    csv: String,
    json: Value,
    default: Format,
    /// Set when a check inside the command failed; the output is still written.
    failure: Option<String>,
}

impl Output {
    fn new(csv: String, json: Value, default: Format) -> Self {
        Self { csv, json, default, failure: None }
    }
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_domain() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Numeric(e.to_string())
        }
    }
}

/// Parses `argv` (program name first).
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    RunConfig::try_parse_from(argv)
}

/// Parses, runs and reports; returns the process exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    if argv.len() <= 1 {
        let mut cmd = <RunConfig as clap::CommandFactory>::command();
        eprintln!("{}", cmd.render_usage());
        eprintln!("error kind=usage message=\"no command given\"");
        return 1;
    }
    let config = match parse_args(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let first = e.to_string().lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            eprint!("{}", e.render());
            eprintln!("error kind=usage message={first:?}");
            return 1;
        }
    };
    run(&config)
}

/// Executes a parsed configuration; returns the exit code.
pub fn run(config: &RunConfig) -> i32 {
    match execute(config) {
        Ok(0) => 0,
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            eprintln!("error kind=domain message={m:?}");
            1
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("error kind=numeric message={m:?}");
            2
        }
    }
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Eval(a) => &a.common,
        Command::Theta(a) => &a.common,
        Command::Classify(a) => &a.common,
        Command::Envelope(a) => &a.common,
        Command::Verify(a) => &a.common,
        Command::Sample(a) => &a.common,
    }
}

fn alphas(cmd: &Command) -> Vec<f64> {
    match cmd {
        Command::Eval(a) => vec![a.alpha],
        Command::Theta(a) => vec![a.alpha],
        Command::Classify(a) => a.alpha.clone(),
        Command::Envelope(a) => vec![a.alpha],
        Command::Verify(a) => vec![a.alpha],
        Command::Sample(a) => vec![a.alpha],
    }
}

fn execute(config: &RunConfig) -> Result<i32, Failure> {
    let c = common(&config.command);
    let cfg = QuadratureConfig::new(c.rel_tol, c.abs_tol, c.max_subdivisions)?;
    for a in alphas(&config.command) {
        if !StableParams::one_sided(a)?.in_guaranteed_range() {
            eprintln!("warning: alpha = {a} lies outside [0.05, 0.95]; accuracy is not guaranteed");
        }
    }
    let out = match &config.command {
        Command::Eval(a) => cmd_eval(a, &cfg)?,
        Command::Theta(a) => cmd_theta(a, &cfg)?,
        Command::Classify(a) => cmd_classify(a, &cfg)?,
        Command::Envelope(a) => cmd_envelope(a, &cfg)?,
        Command::Verify(a) => cmd_verify(a, &cfg)?,
        Command::Sample(a) => cmd_sample(a, &cfg)?,
    };
    let format = c.format.unwrap_or(out.default);
    let text = match format {
        Format::Csv => out.csv,
        Format::Json => {
            let mut doc = out.json;
            if let Value::Object(m) = &mut doc {
                m.insert("schema_version".into(), json!(SCHEMA_VERSION));
            }
            serde_json::to_string_pretty(&doc).expect("json renders") + "\n"
        }
    };
    emit(&text, c.out.as_deref())?;
    match out.failure {
        None => Ok(0),
        Some(m) => {
            eprintln!("error kind=violation message={m:?}");
            Ok(2)
        }
    }
}

/// Resolves `--out` against `$STABLEHCM_OUT_DIR` for relative paths.
pub fn resolve_out(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    let Some(path) = out else {
        print!("{text}");
        return Ok(());
    };
    let path = resolve_out(path);
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let io = |e: std::io::Error| Failure::Usage(format!("cannot write {}: {e}", path.display()));
    std::fs::create_dir_all(&dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.persist(&path).map_err(|e| io(e.error))?;
    Ok(())
}

fn grid(g: &GridArgs, lo: f64, hi: f64) -> Result<Vec<f64>, Failure> {
    let (lo, hi) = (g.xmin.unwrap_or(lo), g.xmax.unwrap_or(hi));
    if !(lo < hi) || g.n < 2 {
        return Err(Failure::Usage(format!(
            "grid needs xmin < xmax and n >= 2, got [{lo}, {hi}] with n = {}",
            g.n
        )));
    }
    if g.spacing == Spacing::Log && lo <= 0.0 {
        return Err(Failure::Usage(format!("log spacing needs xmin > 0, got {lo}")));
    }
    let n = g.n;
    Ok((0..n)
        .map(|k| {
            let s = k as f64 / (n - 1) as f64;
            match g.spacing {
                Spacing::Log => lo * (hi / lo).powf(s),
                Spacing::Linear => lo + (hi - lo) * s,
            }
        })
        .collect())
}

fn column_name(q: Quantity) -> &'static str {
    match q {
        Quantity::G => "G",
        Quantity::Density => "density",
        Quantity::Tail => "tail",
        Quantity::Cdf => "cdf",
    }
}

fn cmd_eval(a: &EvalArgs, cfg: &QuadratureConfig) -> Result<Output, Failure> {
    let p = StableParams::new(a.alpha, a.gamma.unwrap_or(a.alpha))?;
    let xs = match a.x {
        Some(x) => vec![x],
        None => grid(&a.grid, 0.01, 100.0)?,
    };
    let f = |x: f64| match a.quantity {
        Quantity::G => eval_g_real(&p, x, cfg),
        Quantity::Density => eval_density(&p, x, cfg),
        Quantity::Tail => eval_tail(&p, x, cfg),
        Quantity::Cdf => cdf_inverse_power(&p, x, cfg),
    };
    let ys = xs.iter().map(|&x| f(x)).collect::<crate::error::Result<Vec<f64>>>()?;
    let name = column_name(a.quantity);
    let mut csv = format!("x,{name}\n");
    for (x, y) in xs.iter().zip(&ys) {
        csv.push_str(&format!("{x},{y:.15e}\n"));
    }
    let json = json!({
        "alpha": p.alpha(),
        "gamma": p.gamma(),
        "quantity": name,
        "x": xs,
        "values": ys,
    });
    Ok(Output::new(csv, json, Format::Csv))
}

fn cmd_theta(a: &ThetaArgs, cfg: &QuadratureConfig) -> Result<Output, Failure> {
    let p = StableParams::one_sided(a.alpha)?;
    if !(a.rmin > 0.0 && a.rmin < a.rmax) || a.n < 2 {
        return Err(Failure::Usage(format!(
            "need 0 < rmin < rmax and n >= 2, got [{}, {}] with n = {}",
            a.rmin, a.rmax, a.n
        )));
    }
    let th = theta_extract_with(&p, a.rmin, a.rmax, a.n, cfg)?;
    let json = json!({
        "alpha": th.alpha,
        "nodes": th.nodes,
        "theta": th.theta_values,
        "modulus": th.modulus(),
        "log_modulus": th.log_modulus,
    });
    Ok(Output::new(th.to_csv(), json, Format::Csv))
}

fn cmd_classify(a: &ClassifyArgs, cfg: &QuadratureConfig) -> Result<Output, Failure> {
    let reports = a
        .alpha
        .iter()
        .map(|&al| classify_alpha(al, cfg))
        .collect::<crate::error::Result<Vec<_>>>()?;
    let mut csv = String::from("alpha,verdict,margin,extrema\n");
    let mut rows = Vec::new();
    for r in &reports {
        csv.push_str(&r.table_row());
        csv.push('\n');
        rows.push(json!({
            "alpha": r.alpha,
            "verdict": r.verdict.to_string(),
            "margin": r.monotonicity_margin,
            "noise_floor": r.noise_floor,
            "rise": r.rise,
            "drop": r.drop,
            "extrema": r.theta_extrema,
        }));
    }
    let json = if rows.len() == 1 {
        rows.pop().expect("one row")
    } else {
        json!({ "reports": rows })
    };
    Ok(Output::new(csv, json, Format::Json))
}

fn cmd_envelope(a: &EnvelopeArgs, cfg: &QuadratureConfig) -> Result<Output, Failure> {
    let p = StableParams::one_sided(a.alpha)?;
    if !(a.xmin > 0.0 && a.xmin < a.xmax) || a.n < 2 {
        return Err(Failure::Usage("need 0 < xmin < xmax and n >= 2".into()));
    }
    let consts = envelope_constants(&p, a.grid_density, cfg)?;
    let xs = envelope_grid(a.xmin, a.xmax, a.n);
    let report = check_envelope(&p, &consts, &xs, cfg)?;
    let sharp = if a.alpha >= 1.0 / 3.0 {
        let (r, sign) = sharp_envelope_check(&p, &xs, cfg)?;
        Some(json!({ "report": r, "orientation": sign }))
    } else {
        None
    };
    let mut csv = String::from("name,value\n");
    for (k, v) in [
        ("c0", consts.c0),
        ("c_inf", consts.c_inf),
        ("G_at_1", consts.g_at_1),
        ("A_plus", consts.a_plus),
        ("A_minus", consts.a_minus),
        ("B_plus", consts.b_plus),
        ("B_minus", consts.b_minus),
        ("lower_slack", report.lower_slack),
        ("upper_slack", report.upper_slack),
    ] {
        csv.push_str(&format!("{k},{v:.15e}\n"));
    }
    let json = json!({ "constants": consts, "report": report, "sharp": sharp });
    Ok(Output::new(csv, json, Format::Json))
}

fn cmd_sample(a: &SampleArgs, cfg: &QuadratureConfig) -> Result<Output, Failure> {
    let p = StableParams::one_sided(a.alpha)?;
    if a.n == 0 {
        return Err(Failure::Usage("n must be at least 1".into()));
    }
    let consts = envelope_constants(&p, 100, cfg)?;
    let set = sample_inverse_beta_power(&p, a.n, a.seed, &consts, cfg)?;
    let mut out_json = json!({
        "alpha": a.alpha,
        "seed": set.seed,
        "n": set.samples.len(),
        "proposals": set.proposals,
        "acceptance_rate": set.acceptance_rate,
        "expected_rate": set.expected_rate,
        "samples": set.samples,
    });
    let mut failure = None;
    if a.ks {
        let d = ks_statistic(&p, &set.samples, cfg)?;
        let scaled = d * (set.samples.len() as f64).sqrt();
        out_json["ks_statistic"] = json!(d);
        out_json["ks_scaled"] = json!(scaled);
        out_json["ks_critical_1pct"] = json!(KS_CRITICAL_1PCT);
        if scaled > KS_CRITICAL_1PCT {
            failure = Some(format!("KS sqrt(n) D = {scaled:.4} exceeds {KS_CRITICAL_1PCT}"));
        }
    }
    let mut out = Output::new(set.to_csv(), out_json, Format::Csv);
    out.failure = failure;
    Ok(out)
}

#[derive(serde::Serialize)]
struct Check {
    suite: &'static str,
    name: String,
    value: f64,
    tolerance: f64,
    pass: bool,
}

impl Check {
    /// Passes when `value <= tolerance`.
    fn at_most(suite: &'static str, name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            suite,
            name: name.into(),
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }
}

fn log_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64))
        .collect()
}

fn suite_roundtrip(p: &StableParams, cfg: &QuadratureConfig) -> crate::error::Result<Vec<Check>> {
    let th = crate::boundary::theta_extract(p, 1e-6, 1e4, cfg)?;
    let mut worst: f64 = 0.0;
    for x in log_points(0.01, 100.0, 30) {
        let direct = eval_g_real(p, x, cfg)?;
        let rec = reconstruct_g_raw(p, &th, Complex64::new(x, 0.0), cfg)?;
        worst = worst.max(((rec.re - direct) / direct).abs());
    }
    Ok(vec![Check::at_most(
        "roundtrip",
        "max relative error of the reconstruction on [0.01, 100]",
        worst,
        crate::hcm::ROUND_TRIP_TOL,
    )])
}

fn suite_normalization(p: &StableParams, cfg: &QuadratureConfig) -> crate::error::Result<Vec<Check>> {
    let m = g_total_mass(p, cfg)?;
    Ok(vec![Check::at_most("normalization", "|int G - 1|", (m - 1.0).abs(), 1e-6)])
}

fn suite_envelope(p: &StableParams, cfg: &QuadratureConfig) -> crate::error::Result<Vec<Check>> {
    let consts = envelope_constants(p, 100, cfg)?;
    let xs = envelope_grid(1e-3, 1e3, 200);
    let mut checks = Vec::new();
    let mut push = |name: &str, r: crate::error::Result<f64>| -> crate::error::Result<()> {
        let slack = match r {
            Ok(s) => s,
            Err(Error::EnvelopeViolation { slack, .. }) => slack,
            Err(e) => return Err(e),
        };
        checks.push(Check {
            suite: "envelope",
            name: name.into(),
            value: slack,
            tolerance: -crate::envelopes::ENVELOPE_NOISE,
            pass: slack >= -crate::envelopes::ENVELOPE_NOISE,
        });
        Ok(())
    };
    let rep = check_envelope(p, &consts, &xs, cfg);
    push("gamma-mixture envelope, min relative slack", rep.map(|r| r.lower_slack.min(r.upper_slack)))?;
    if p.alpha() >= 1.0 / 3.0 {
        let rep = sharp_envelope_check(p, &xs, cfg);
        push("sharp envelope, min relative slack", rep.map(|(r, _)| r.lower_slack.min(r.upper_slack)))?;
    }
    Ok(checks)
}

fn suite_identities(p: &StableParams, cfg: &QuadratureConfig) -> crate::error::Result<Vec<Check>> {
    let mut checks = Vec::new();
    for r in [0.1, 1.0, 10.0] {
        let res = cross_check_identity(p, r, cfg)?;
        checks.push(Check::at_most("identities", format!("cross identity at r = {r}"), res.abs(), 1e-6));
    }
    let dp = 0.5 * (1.0 + p.alpha());
    for x in [0.5, 2.0] {
        let res = mixture_identity_residual(p.alpha(), p.alpha(), dp, x, cfg)?;
        checks.push(Check::at_most(
            "identities",
            format!("scaling identity at delta' = {dp}, x = {x}"),
            res.abs(),
            1e-5,
        ));
    }
    Ok(checks)
}

/// A probe violation for `G` must come with a non-monotone or decreasing `theta`.
fn suite_hcm(p: &StableParams, cfg: &QuadratureConfig) -> crate::error::Result<Vec<Check>> {
    use crate::classify::Verdict;
    let probe = hcm_probe_g(p, cfg)?;
    let report = classify_alpha(p.alpha(), cfg)?;
    let consistent = probe.pass || probe.inconclusive || report.verdict != Verdict::Hcm;
    Ok(vec![Check {
        suite: "hcm",
        name: format!(
            "probe of G ({}, margin {:.3e}) agrees with theta verdict {}",
            if probe.pass { "pass" } else { "violation" },
            probe.margin,
            report.verdict
        ),
        value: if consistent { 0.0 } else { 1.0 },
        tolerance: 0.0,
        pass: consistent,
    }])
}

fn cmd_verify(a: &VerifyArgs, cfg: &QuadratureConfig) -> Result<Output, Failure> {
    let p = StableParams::one_sided(a.alpha)?;
    type SuiteFn = fn(&StableParams, &QuadratureConfig) -> crate::error::Result<Vec<Check>>;
    let all: [(Suite, SuiteFn); 5] = [
        (Suite::Roundtrip, suite_roundtrip),
        (Suite::Normalization, suite_normalization),
        (Suite::Envelope, suite_envelope),
        (Suite::Identities, suite_identities),
        (Suite::Hcm, suite_hcm),
    ];
    let mut checks = Vec::new();
    for (s, f) in all {
        if a.suite == Suite::All || a.suite == s {
            checks.extend(f(&p, cfg)?);
        }
    }
    let mut csv = String::from("suite,check,value,tolerance,pass\n");
    for c in &checks {
        csv.push_str(&format!("{},\"{}\",{:.6e},{:.3e},{}\n", c.suite, c.name, c.value, c.tolerance, c.pass));
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.suite).collect();
    let passed = failed.is_empty();
    let mut out = Output::new(csv, json!({ "alpha": a.alpha, "pass": passed, "checks": checks }), Format::Csv);
    if !passed {
        out.failure = Some(format!("verification failed in suites {}", failed.join(",")));
    }
    Ok(out)
}
