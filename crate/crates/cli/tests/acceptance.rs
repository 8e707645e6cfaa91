//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p maxsev-cli --test acceptance`.

use std::f64::consts::{LN_2, PI};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use maxsev_core::law::quantile_levels;
use maxsev_core::process::EmpiricalCheck;
use maxsev_core::{Branch, ExtremalProcess, Level, MaxArModel, PeriodicFn, SemiStableLaw};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<(bool, String), String>;

struct Line {
    id: &'static str,
    title: &'static str,
    budget: Duration,
    elapsed: Duration,
    pass: bool,
    detail: String,
}

fn criterion(id: &'static str, title: &'static str, budget_secs: u64, body: impl FnOnce() -> Verdict) -> Line {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget_secs);
    let (pass, detail) = match outcome {
        Ok((pass, detail)) => (pass, detail),
        Err(e) => (false, format!("error: {e}")),
    };
    let pass = pass && elapsed < budget;
    let line = Line {
        id,
        title,
        budget,
        elapsed,
        pass,
        detail,
    };
    println!(
        "[{}] {:<4} {:<34} {:>8.3}s / {:>3}s  {}",
        if line.pass { "PASS" } else { "FAIL" },
        line.id,
        line.title,
        line.elapsed.as_secs_f64(),
        line.budget.as_secs(),
        line.detail
    );
    line
}

fn canonical(branch: Branch) -> SemiStableLaw {
    let b = match branch {
        Branch::Frechet => 2.0,
        Branch::Weibull => 0.5,
    };
    SemiStableLaw::new(branch, 1.0, b, PeriodicFn::cosine(LN_2, 1.0, 0.1)).unwrap()
}

/// `ψ` written out by hand for the canonical laws (α = 1, 0.1 cosine of period ln 2).
fn canonical_psi(branch: Branch, x: f64) -> f64 {
    let r = x.abs();
    let h = 1.0 + 0.1 * (2.0 * PI * r.ln() / LN_2).cos();
    match branch {
        Branch::Frechet => h / r,
        Branch::Weibull => h * r,
    }
}

/// Quantiles of the canonical law, found by plain bisection on the hand-written `ψ`.
fn oracle_quantile_grid(branch: Branch) -> Vec<f64> {
    quantile_levels()
        .map(|u| {
            let target = -u.ln();
            let (mut lo, mut hi) = (-40.0f64, 40.0f64);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let x = match branch {
                    Branch::Frechet => mid.exp(),
                    Branch::Weibull => -mid.exp(),
                };
                let decreasing_in_mid = branch == Branch::Frechet;
                if (canonical_psi(branch, x) > target) == decreasing_in_mid {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let r = (0.5 * (lo + hi)).exp();
            match branch {
                Branch::Frechet => r,
                Branch::Weibull => -r,
            }
        })
        .collect()
}

fn max_rel_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| ((x - y) / y).abs()).fold(0.0, f64::max)
}

fn rate<F: FnMut(u64) -> Result<bool, String>>(seeds: u64, mut trial: F) -> Result<usize, String> {
    let mut passes = 0;
    for seed in 0..seeds {
        passes += trial(seed)? as usize;
    }
    Ok(passes)
}

fn config_path(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../../configs");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn e(err: impl std::fmt::Display) -> String {
    err.to_string()
}

fn main() {
    let mut lines = Vec::new();

    lines.push(criterion("1", "semi-stability identity", 1, || {
        let law = canonical(Branch::Frechet);
        let grid = law.quantile_grid().map_err(e)?;
        let oracle = oracle_quantile_grid(Branch::Frechet);
        let grid_gap = max_rel_diff(&grid, &oracle);
        let psi_gap = grid
            .iter()
            .map(|&x| Ok(((law.tail(x)? - canonical_psi(Branch::Frechet, x)) / canonical_psi(Branch::Frechet, x)).abs()))
            .collect::<Result<Vec<f64>, maxsev_core::Error>>()
            .map_err(e)?
            .into_iter()
            .fold(0.0, f64::max);
        let report = law.check_semistable_identity(&grid).map_err(e)?;
        let pass = report.pass && report.max_error <= 1e-10 && grid.len() == 99 && grid_gap < 1e-9 && psi_gap < 1e-13;
        Ok((
            pass,
            format!(
                "max rel err {:.2e} <= 1e-10 on {} quantiles (grid vs oracle {grid_gap:.1e}, psi vs closed form {psi_gap:.1e})",
                report.max_error, report.points
            ),
        ))
    }));

    lines.push(criterion("2", "stationarity identity", 1, || {
        let mut details = Vec::new();
        let mut pass = true;
        for (branch, rho) in [(Branch::Frechet, 0.5), (Branch::Weibull, 2.0)] {
            let law = canonical(branch);
            let grid = law.quantile_grid().map_err(e)?;
            let model = MaxArModel::new(law.clone(), rho).map_err(e)?;
            let report = model.check_stationarity_identity(&grid).map_err(e)?;
            // log-space: ln{G(bu)}^{b^α} - ln G(u), with b^α = 1 + innovation exponent
            let power = 1.0 + model.innovation().exponent();
            let log_err = grid
                .iter()
                .map(|&u| (power * law.cdf(model.b() * u).ln() - law.cdf(u).ln()).abs())
                .fold(0.0, f64::max);
            // b^α = 2 for Fréchet b = 2, b^{-α} = 2 for Weibull b = 1/2
            let ok = report.pass && log_err <= 1e-10 && (power - 2.0).abs() < 1e-15;
            pass &= ok;
            details.push(format!("{}: rel {:.2e}, log {:.2e}", branch.name(), report.max_error, log_err));
        }
        Ok((pass, format!("{} (<= 1e-10)", details.join("; "))))
    }));

    lines.push(criterion("3", "innovation-law consistency", 1, || {
        let mut details = Vec::new();
        let mut pass = true;
        for (branch, rho) in [(Branch::Frechet, 0.5), (Branch::Weibull, 2.0)] {
            let law = canonical(branch);
            let grid = law.quantile_grid().map_err(e)?;
            let model = MaxArModel::new(law.clone(), rho).map_err(e)?;
            let report = model.check_innovation_consistency(&grid);
            let direct = grid
                .iter()
                .map(|&u| (model.innovation_cdf(u) - law.cdf(u) / law.cdf(u / rho)).abs())
                .fold(0.0, f64::max);
            let ok = report.pass && report.max_error <= 1e-12 && direct <= 1e-12;
            pass &= ok;
            details.push(format!("{} rho={rho}: {:.2e}", branch.name(), report.max_error.max(direct)));
        }
        Ok((pass, format!("{} (<= 1e-12)", details.join("; "))))
    }));

    lines.push(criterion("4", "empirical marginal stationarity", 30, || {
        let model = MaxArModel::new(canonical(Branch::Frechet), 0.5).map_err(e)?;
        let passes = rate(100, |seed| {
            model
                .check_marginal_stationarity_empirical(10_000, 0, 10, Level::OnePercent, seed)
                .map(|r| r.pass)
                .map_err(e)
        })?;
        Ok((passes >= 95, format!("{passes}/100 KS passes at 1% (need >= 95), n=1e4, thin 10")))
    }));

    lines.push(criterion("5", "semi-selfsimilarity", 30, || {
        let law = canonical(Branch::Frechet);
        let grid = law.quantile_grid().map_err(e)?;
        let process = ExtremalProcess::new(law.clone());
        let h = 1.0 / law.alpha();
        let exact = process.check_semi_ss(law.a(), h, &grid, None).map_err(e)?;
        let passes = rate(100, |seed| {
            process
                .check_semi_ss(law.a(), h, &grid, Some(EmpiricalCheck::new(5000, seed)))
                .map(|r| r.ks_pass() == Some(true))
                .map_err(e)
        })?;
        let off_scale = law.b().powf(law.alpha() / 2.0);
        let control = process.check_semi_ss(off_scale, h, &grid, None).map_err(e)?;
        let pass = exact.identity_pass() && exact.identity.max_error <= 1e-10 && passes >= 90 && !control.identity_pass();
        Ok((
            pass,
            format!(
                "identity {:.2e}; {passes}/100 two-sample KS at 5% (need >= 90); off-period scale {off_scale:.4} error {:.2e} rejected",
                exact.identity.max_error, control.identity.max_error
            ),
        ))
    }));

    lines.push(criterion("6i", "max-stable cdf closed form", 30, || {
        let law = SemiStableLaw::max_stable(Branch::Frechet, 1.7, 1.0).map_err(e)?;
        let mismatches = law
            .log_grid(1001)
            .iter()
            .filter(|&&x| law.cdf(x) != (-x.powf(-1.7)).exp())
            .count();
        Ok((mismatches == 0, format!("cdf == exp(-x^-1.7) bit for bit at 1001 points ({mismatches} mismatches)")))
    }));

    lines.push(criterion("6ii", "max-stable self-similarity", 30, || {
        let law = SemiStableLaw::max_stable(Branch::Frechet, 1.0, 1.0).map_err(e)?;
        let grid = law.quantile_grid().map_err(e)?;
        let report = ExtremalProcess::new(law)
            .check_ss(1.0, &[0.5, 1.3, 2.0, 7.0], &grid, None)
            .map_err(e)?;
        let worst = report.reports.iter().map(|r| r.identity.max_error).fold(0.0, f64::max);
        Ok((report.pass, format!("scales {{0.5, 1.3, 2, 7}}, worst identity error {worst:.2e}")))
    }));

    lines.push(criterion("6iii", "explosive max-AR, rho = 1.5", 30, || {
        let law = SemiStableLaw::max_stable(Branch::Weibull, 1.0, 1.0).map_err(e)?;
        let model = MaxArModel::new(law, 1.5).map_err(e)?;
        let passes = rate(100, |seed| {
            model
                .check_marginal_stationarity_empirical(10_000, 0, 10, Level::OnePercent, seed)
                .map(|r| r.pass)
                .map_err(e)
        })?;
        let frechet = SemiStableLaw::max_stable(Branch::Frechet, 1.0, 1.0).map_err(e)?;
        let refused = matches!(
            MaxArModel::new(frechet, 1.5),
            Err(maxsev_core::Error::InvalidInnovation(_))
        );
        Ok((
            passes >= 95 && refused,
            format!(
                "weibull h=1: {passes}/100 KS passes at 1% (need >= 95); frechet h=1 refused (no stationary solution): {refused}"
            ),
        ))
    }));

    lines.push(criterion("7", "quantile round trip", 1, || {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut worst: f64 = 0.0;
        for branch in [Branch::Frechet, Branch::Weibull] {
            let law = canonical(branch);
            for _ in 0..1000 {
                let u: f64 = rng.gen_range(1e-12..1.0 - 1e-12);
                let x = law.quantile(u).map_err(e)?;
                worst = worst.max((law.cdf(x) - u).abs());
            }
        }
        Ok((worst <= 1e-9, format!("max |F(Q(u)) - u| = {worst:.2e} over 2x1000 draws (<= 1e-9)")))
    }));

    lines.push(criterion("8", "max-semi-SD membership", 1, || {
        let mut details = Vec::new();
        let mut pass = true;
        for branch in [Branch::Frechet, Branch::Weibull] {
            let law = canonical(branch);
            let grid = law.support_grid(1024).map_err(e)?;
            for c in [law.b(), law.b() * law.b()] {
                let check = law.check_max_semi_sd(c, &grid);
                let (lo, hi) = (grid[0], grid[grid.len() - 1]);
                let h_lo = law.cdf(lo) / law.cdf(c * lo);
                let h_hi = law.cdf(hi) / law.cdf(c * hi);
                let agrees = (check.values[0] - h_lo).abs() < 1e-15 && (check.values[grid.len() - 1] - h_hi).abs() < 1e-15;
                pass &= check.verdict && check.monotone && check.lower_limit && check.upper_limit && agrees;
                details.push(format!("{} c={c}: H from {h_lo:.1e} to 1-{:.1e}", branch.name(), 1.0 - h_hi));
            }
        }
        Ok((pass, format!("monotone, limits within 1e-6 ({})", details.join("; "))))
    }));

    lines.push(criterion("9", "CLI determinism", 30, || {
        let dir = tempfile::tempdir().map_err(e)?;
        let exe = env!("CARGO_BIN_EXE_maxsev");
        let frechet = config_path("canonical_frechet.json");
        let runs: [&[&str]; 7] = [
            &["validate", "--config", &frechet],
            &["sample", "--config", &frechet, "--what", "law"],
            &["sample", "--config", &frechet, "--what", "marginal", "--t", "3"],
            &["sample", "--config", &frechet, "--what", "innovation"],
            &["simulate-ar", "--config", &frechet],
            &["simulate-ep", "--config", &frechet],
            &["verify", "--config", &frechet, "--suite", "all"],
        ];
        let mut compared = 0;
        for args in runs {
            let mut outputs = Vec::new();
            for rep in 0..2 {
                let out = dir.path().join(format!("out{rep}"));
                let report = dir.path().join(format!("report{rep}"));
                let status = Command::new(exe)
                    .args(args)
                    .arg("--out")
                    .arg(&out)
                    .arg("--report")
                    .arg(&report)
                    .output()
                    .map_err(e)?;
                if status.status.code() != Some(0) {
                    return Ok((false, format!("`{}` exited {:?}", args.join(" "), status.status.code())));
                }
                outputs.push((std::fs::read(&out).map_err(e)?, std::fs::read(&report).ok(), status.stdout));
            }
            if outputs[0] != outputs[1] {
                return Ok((false, format!("`{}` differs between runs", args[0])));
            }
            compared += 1;
        }
        Ok((true, format!("{compared} invocations byte-identical across repeated runs")))
    }));

    let failed: Vec<&str> = lines.iter().filter(|l| !l.pass).map(|l| l.id).collect();
    println!(
        "acceptance: {} of {} criteria passed{}",
        lines.len() - failed.len(),
        lines.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!(" (failed: {})", failed.join(", "))
        }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
