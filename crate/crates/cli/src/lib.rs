//! `maxsev` command-line driver.
//!
//! Exit codes: `0` success, `1` a check or command failed, `2` the
//! command line or configuration could not be parsed.

pub mod config;
mod csv;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use maxsev_core::maxar::check_max_semi_sd_equivalence;
use maxsev_core::{
    CofactorCheck, EmpiricalCheck, Error as CoreError, ExtremalProcess, IdentityReport, Level, MaxArModel,
    SemiSsReport, SemiStableLaw, SsReport, ValidationReport,
};
use serde::Serialize;

use crate::config::RunConfig;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "maxsev", version, about = "Max-semi-stable laws, extremal processes and max-AR(1) simulation")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Write the primary output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Write the KS report of `simulate-ar` here instead of stderr.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    #[arg(long, global = true)]
    n: Option<usize>,

    #[arg(long, global = true)]
    t: Option<f64>,

    #[arg(long, global = true, value_enum)]
    what: Option<What>,

    #[arg(long, global = true, value_enum)]
    suite: Option<Suite>,

    /// Override the time scale of the semi-selfsimilarity check.
    #[arg(long = "scale-b", global = true)]
    scale_b: Option<f64>,

    /// Override the selfsimilarity exponent.
    #[arg(long = "exponent-h", global = true, allow_hyphen_values = true)]
    exponent_h: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that the configured law is a valid max-semi-stable law.
    Validate,
    /// Draw from the law, an extremal-process marginal, or the innovation law.
    Sample,
    /// Simulate the stationary max-AR(1) series and test its marginal.
    SimulateAr,
    /// Simulate one extremal-process path.
    SimulateEp,
    /// Run identity and distributional checks.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum What {
    Law,
    Marginal,
    Innovation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Semiss,
    Ss,
    Semisd,
    All,
}

/// Failure of a command, with the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn fail(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_FAIL,
            message: message.into(),
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure::fail(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::fail(format!("i/o error: {e}"))
    }
}

type CmdResult = Result<u8, Failure>;

/// Parse `args` and run the selected command. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let config = RunConfig::load(cli.config.as_deref()).map_err(|e| Failure::usage(e.to_string()))?;
    match cli.command {
        Command::Validate => cmd_validate(cli, &config, stdout),
        Command::Sample => cmd_sample(cli, &config, stdout),
        Command::SimulateAr => cmd_simulate_ar(cli, &config, stdout, stderr),
        Command::SimulateEp => cmd_simulate_ep(cli, &config, stdout),
        Command::Verify => cmd_verify(cli, &config, stdout),
    }
}

fn with_output(path: Option<&PathBuf>, fallback: &mut dyn Write, body: &[u8]) -> io::Result<()> {
    match path {
        Some(p) => File::create(p)?.write_all(body),
        None => fallback.write_all(body),
    }
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut body = serde_json::to_vec_pretty(value).expect("report serialization");
    body.push(b'\n');
    body
}

fn build_law(config: &RunConfig) -> Result<SemiStableLaw, Failure> {
    SemiStableLaw::try_from(config.law.clone()).map_err(|e| Failure::fail(format!("invalid law: {e}")))
}

fn seed(cli: &Cli, config: &RunConfig) -> u64 {
    cli.seed.unwrap_or(config.seed)
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ValidateOutput {
    branch: &'static str,
    alpha: f64,
    a: f64,
    b: f64,
    periodic: Option<ValidationReport>,
    identity: Option<IdentityReport>,
    violations: Vec<String>,
    valid: bool,
}

fn cmd_validate(cli: &Cli, config: &RunConfig, stdout: &mut dyn Write) -> CmdResult {
    let spec = &config.law;
    let mut violations = Vec::new();

    let law = match SemiStableLaw::try_from(spec.clone()) {
        Ok(law) => Some(law),
        Err(e) => {
            violations.push(e.to_string());
            None
        }
    };

    let periodic = match spec.h.report(spec.alpha, spec.branch, maxsev_core::periodic::DEFAULT_GRID) {
        Ok(report) => {
            if let Some(v) = report.violation() {
                let msg = v.to_string();
                if !violations.contains(&msg) {
                    violations.push(msg);
                }
            }
            Some(report)
        }
        Err(e) => {
            let msg = e.to_string();
            if !violations.contains(&msg) {
                violations.push(msg);
            }
            None
        }
    };

    let unchecked = SemiStableLaw::new_unchecked(spec.branch, spec.alpha, spec.b, spec.h.clone());
    let scale_ok = spec.alpha > 0.0 && spec.b > 0.0 && spec.b != 1.0 && spec.alpha.is_finite() && spec.b.is_finite();
    let identity = if scale_ok {
        let grid = match &law {
            Some(l) => l.quantile_grid()?,
            None => unchecked.log_grid(99),
        };
        let report = unchecked.check_semistable_identity(&grid)?;
        if !report.pass {
            violations.push(format!(
                "semi-stability identity psi(x) = a psi(bx) fails: max relative error {:e}",
                report.max_error
            ));
        }
        Some(report)
    } else {
        None
    };

    let valid = law.is_some() && identity.as_ref().is_some_and(|r| r.pass);
    let output = ValidateOutput {
        branch: spec.branch.name(),
        alpha: spec.alpha,
        a: unchecked.a(),
        b: spec.b,
        periodic,
        identity,
        violations,
        valid,
    };
    with_output(cli.out.as_ref(), stdout, &to_json(&output))?;
    Ok(if valid { EXIT_OK } else { EXIT_FAIL })
}

// ---------------------------------------------------------------------------
// sample
// ---------------------------------------------------------------------------

fn model_for(config: &RunConfig) -> Result<MaxArModel, Failure> {
    let marginal = match &config.model.marginal {
        Some(spec) => {
            SemiStableLaw::try_from(spec.clone()).map_err(|e| Failure::fail(format!("invalid marginal: {e}")))?
        }
        None => build_law(config)?,
    };
    let rho = config.model.rho.unwrap_or(1.0 / marginal.b());
    Ok(MaxArModel::new(marginal, rho)?)
}

fn cmd_sample(cli: &Cli, config: &RunConfig, stdout: &mut dyn Write) -> CmdResult {
    let law = build_law(config)?;
    let what = match (cli.what, config.sample.what.as_deref()) {
        (Some(w), _) => w,
        (None, None) | (None, Some("law")) => What::Law,
        (None, Some("marginal")) => What::Marginal,
        (None, Some("innovation")) => What::Innovation,
        (None, Some(other)) => return Err(Failure::usage(format!("unknown sample target `{other}`"))),
    };
    let n = cli.n.or(config.sample.n).unwrap_or(1000);
    let t = cli.t.or(config.sample.t).unwrap_or(1.0);
    let seed = seed(cli, config);
    let values = match what {
        What::Law => law.sample(n, seed)?,
        What::Marginal => ExtremalProcess::new(law).sample_marginal(t, n, seed)?,
        What::Innovation => model_for(config)?.innovation().sample(n, seed)?,
    };
    let body = csv::render("index", "value", values.iter().enumerate().map(|(i, &v)| (csv::Cell::Int(i), v)));
    with_output(cli.out.as_ref(), stdout, body.as_bytes())?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// simulate-ar
// ---------------------------------------------------------------------------

fn level(value: f64) -> Result<Level, Failure> {
    Level::from_f64(value).map_err(|e| Failure::usage(e.to_string()))
}

fn cmd_simulate_ar(cli: &Cli, config: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let model = model_for(config)?;
    let n = cli.n.unwrap_or(config.model.n);
    let burn_in = config.model.burn_in;
    let seed = seed(cli, config);
    let series = model.simulate(n, burn_in, seed)?;
    let report =
        model.check_marginal_stationarity_empirical(n, burn_in, config.model.thin, level(config.model.level)?, seed)?;

    let body = csv::render(
        "n",
        "x",
        series.iter().enumerate().map(|(i, &x)| (csv::Cell::Int(burn_in + i + 1), x)),
    );
    with_output(cli.out.as_ref(), stdout, body.as_bytes())?;
    with_output(cli.report.as_ref(), stderr, &to_json(&report))?;
    Ok(if report.pass { EXIT_OK } else { EXIT_FAIL })
}

// ---------------------------------------------------------------------------
// simulate-ep
// ---------------------------------------------------------------------------

fn cmd_simulate_ep(cli: &Cli, config: &RunConfig, stdout: &mut dyn Write) -> CmdResult {
    let process = ExtremalProcess::new(build_law(config)?);
    let times = match (&config.process.times, cli.n, cli.t) {
        (Some(times), None, None) => times.clone(),
        (times, n, t) => {
            let n = n.unwrap_or_else(|| times.as_ref().map_or(100, Vec::len));
            let horizon = t.unwrap_or(1.0);
            if n == 0 || horizon.is_nan() || horizon <= 0.0 {
                return Err(Failure::usage("simulate-ep needs --n >= 1 and --t > 0"));
            }
            (1..=n).map(|i| horizon * i as f64 / n as f64).collect()
        }
    };
    let path = process.sample_path(&times, seed(cli, config))?;
    let body = csv::render("t", "value", path.into_iter().map(|(t, y)| (csv::Cell::Real(t), y)));
    with_output(cli.out.as_ref(), stdout, body.as_bytes())?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct IdentitySuite {
    semi_stable: IdentityReport,
    stationarity: IdentityReport,
    innovation_consistency: IdentityReport,
    pass: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CofactorSummary {
    c: f64,
    grid_points: usize,
    monotone: bool,
    in_unit_interval: bool,
    lower_limit: bool,
    upper_limit: bool,
    non_degenerate: bool,
    worst_violation: f64,
    verdict: bool,
}

impl From<&CofactorCheck> for CofactorSummary {
    fn from(c: &CofactorCheck) -> Self {
        CofactorSummary {
            c: c.c,
            grid_points: c.grid.len(),
            monotone: c.monotone,
            in_unit_interval: c.in_unit_interval,
            lower_limit: c.lower_limit,
            upper_limit: c.upper_limit,
            non_degenerate: c.non_degenerate,
            worst_violation: c.worst_violation,
            verdict: c.verdict,
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct VerifyOutput {
    suite: Suite,
    #[serde(skip_serializing_if = "Option::is_none")]
    identities: Option<IdentitySuite>,
    #[serde(skip_serializing_if = "Option::is_none")]
    semiss: Option<SemiSsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ss: Option<SsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    semisd: Option<Vec<CofactorSummary>>,
    pass: bool,
}

/// Grid size of the cofactor checks.
const COFACTOR_GRID: usize = 1024;

fn cmd_verify(cli: &Cli, config: &RunConfig, stdout: &mut dyn Write) -> CmdResult {
    let law = build_law(config)?;
    let suite = cli.suite.unwrap_or(Suite::All);
    let grid = law.quantile_grid()?;
    let seed = seed(cli, config);
    let process = ExtremalProcess::new(law.clone());
    let exponent_h = cli
        .exponent_h
        .or(config.process.exponent_h)
        .unwrap_or_else(|| process.natural_exponent());

    let run_identities = matches!(suite, Suite::Identities | Suite::All);
    let run_semiss = matches!(suite, Suite::Semiss | Suite::All);
    let run_ss = suite == Suite::Ss || (suite == Suite::All && law.is_max_stable());
    let run_semisd = matches!(suite, Suite::Semisd | Suite::All);

    let identities = if run_identities {
        let model = model_for(config)?;
        let semi_stable = law.check_semistable_identity(&grid)?;
        let stationarity = model.check_stationarity_identity(&grid)?;
        let innovation_consistency = model.check_innovation_consistency(&grid);
        let pass = semi_stable.pass && stationarity.pass && innovation_consistency.pass;
        Some(IdentitySuite {
            semi_stable,
            stationarity,
            innovation_consistency,
            pass,
        })
    } else {
        None
    };

    let empirical = EmpiricalCheck {
        n: cli.n.unwrap_or(config.process.n),
        seed,
        level: level(config.process.level)?,
    };

    let semiss = if run_semiss {
        let scale_b = cli.scale_b.or(config.process.scale_b).unwrap_or(law.a());
        Some(process.check_semi_ss(scale_b, exponent_h, &grid, Some(empirical))?)
    } else {
        None
    };

    let ss = if run_ss {
        Some(process.check_ss(exponent_h, &config.process.b_samples, &grid, None)?)
    } else {
        None
    };

    let semisd = if run_semisd {
        let support = law.support_grid(COFACTOR_GRID)?;
        let checks = [law.b(), law.b() * law.b()]
            .into_iter()
            .map(|c| CofactorSummary::from(&check_max_semi_sd_equivalence(&law, 1.0 / c, &support)))
            .collect::<Vec<_>>();
        Some(checks)
    } else {
        None
    };

    let pass = identities.as_ref().is_none_or(|s| s.pass)
        && semiss.as_ref().is_none_or(SemiSsReport::pass)
        && ss.as_ref().is_none_or(|s| s.pass)
        && semisd.as_ref().is_none_or(|v| v.iter().all(|c| c.verdict));

    let output = VerifyOutput {
        suite,
        identities,
        semiss,
        ss,
        semisd,
        pass,
    };
    with_output(cli.out.as_ref(), stdout, &to_json(&output))?;
    Ok(if pass { EXIT_OK } else { EXIT_FAIL })
}
