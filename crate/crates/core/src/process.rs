//! Extremal processes with stationary independent max-increments.
//!
//! With `G` the d.f. of `Y(1)`, the marginal at time `t` is `G^t` and the
//! max-increment over `(s, t]` has d.f. `G^{t-s}`. The process is
//! `(b, H)`-semi-selfsimilar when `{G(b^H u)}^{bt} = {G(u)}^t`, which in
//! terms of the tail function reads `b ψ(b^H u) = ψ(u)`.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::law::{IdentityReport, SemiStableLaw, IDENTITY_TOL};
use crate::periodic::Branch;
use crate::rng;
use crate::stats::{ks_two_sample, KsReport, Level};

/// Time points used by the exact semi-selfsimilarity check.
pub const IDENTITY_TIMES: [f64; 3] = [0.5, 1.0, 2.0];

/// Default per-side sample size of the empirical semi-selfsimilarity check.
pub const DEFAULT_KS_SAMPLES: usize = 5000;

/// Extremal process whose `Y(1)` follows a max-semi-stable law.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalProcess {
    base: SemiStableLaw,
}

/// Parameters of the two-sample comparison `Y(b t)` vs `b^H Y(t)` at `t = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmpiricalCheck {
    pub n: usize,
    pub seed: u64,
    pub level: Level,
}

impl EmpiricalCheck {
    pub fn new(n: usize, seed: u64) -> Self {
        EmpiricalCheck {
            n,
            seed,
            level: Level::FivePercent,
        }
    }
}

/// Outcome of a `(b, H)`-semi-selfsimilarity check.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiSsReport {
    pub scale_b: f64,
    pub exponent_h: f64,
    pub identity: IdentityReport,
    pub ks: Option<KsReport>,
}

impl SemiSsReport {
    pub fn identity_pass(&self) -> bool {
        self.identity.pass
    }

    /// `None` when no empirical check was requested.
    pub fn ks_pass(&self) -> Option<bool> {
        self.ks.as_ref().map(|k| k.pass)
    }

    pub fn pass(&self) -> bool {
        self.identity_pass() && self.ks_pass().unwrap_or(true)
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SemiSsJson {
    scale_b: f64,
    exponent_h: f64,
    identity_error: f64,
    ks_statistic: Option<f64>,
    ks_critical: Option<f64>,
    identity_pass: bool,
    ks_pass: Option<bool>,
}

impl Serialize for SemiSsReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SemiSsJson {
            scale_b: self.scale_b,
            exponent_h: self.exponent_h,
            identity_error: self.identity.max_error,
            ks_statistic: self.ks.as_ref().map(|k| k.statistic),
            ks_critical: self.ks.as_ref().map(|k| k.critical_value),
            identity_pass: self.identity.pass,
            ks_pass: self.ks_pass(),
        }
        .serialize(serializer)
    }
}

/// Selfsimilarity check across several scales.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SsReport {
    pub exponent_h: f64,
    pub reports: Vec<SemiSsReport>,
    pub pass: bool,
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("time must be positive and finite, got {t}")))
    }
}

impl ExtremalProcess {
    pub fn new(base: SemiStableLaw) -> Self {
        ExtremalProcess { base }
    }

    pub fn base(&self) -> &SemiStableLaw {
        &self.base
    }

    /// Exponent `H` paired with the scale `a` for this base law:
    /// `1/α` (Fréchet) or `-1/α` (Weibull).
    pub fn natural_exponent(&self) -> f64 {
        match self.base.branch() {
            Branch::Frechet => 1.0 / self.base.alpha(),
            Branch::Weibull => -1.0 / self.base.alpha(),
        }
    }

    /// `{G(u)}^t`, evaluated as `exp{-t ψ(u)}` on the support.
    pub fn marginal_cdf(&self, t: f64, u: f64) -> Result<f64> {
        check_time(t)?;
        Ok(match self.base.tail(u) {
            Ok(psi) => (-t * psi).exp(),
            Err(_) => self.base.cdf(u),
        })
    }

    /// `n` draws of `Y(t)`; with `t = 1` this reproduces
    /// [`SemiStableLaw::sample`] bit for bit.
    pub fn sample_marginal(&self, t: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
        check_time(t)?;
        self.base.sample_power(t, n, seed)
    }

    /// One path observed at `times`: `Y(t_1) ~ G^{t_1}` and
    /// `Y(t_i) = Y(t_{i-1}) ∨ Z_i` with independent `Z_i ~ G^{t_i - t_{i-1}}`.
    pub fn sample_path(&self, times: &[f64], seed: u64) -> Result<Vec<(f64, f64)>> {
        let mut prev = 0.0;
        for (index, &t) in times.iter().enumerate() {
            if !(t.is_finite() && t > prev) {
                return Err(Error::NonMonotoneTimes { index });
            }
            prev = t;
        }
        let mut rng = rng::stream(seed, 0);
        let mut prev = 0.0;
        let mut level = f64::NEG_INFINITY;
        let mut path = Vec::with_capacity(times.len());
        for &t in times {
            let dt = t - prev;
            let z = self.base.tail_inverse(rng::neg_log_uniform(&mut rng) / dt)?;
            level = level.max(z);
            path.push((t, level));
            prev = t;
        }
        Ok(path)
    }

    /// Exact and (optionally) empirical check of `{Y(bt)} =d {b^H Y(t)}`.
    ///
    /// The exact part is `max |b t ψ(b^H u) - t ψ(u)| / (t ψ(u))` over
    /// `u ∈ grid` and `t ∈ {0.5, 1, 2}`. The empirical part compares
    /// `n` draws of `Y(b)` with `n` draws of `b^H Y(1)`.
    pub fn check_semi_ss(
        &self,
        scale_b: f64,
        exponent_h: f64,
        grid: &[f64],
        empirical: Option<EmpiricalCheck>,
    ) -> Result<SemiSsReport> {
        if !(scale_b.is_finite() && scale_b > 0.0) {
            return Err(Error::InvalidParameter(format!("scale must be positive, got {scale_b}")));
        }
        let space = scale_b.powf(exponent_h);
        let mut errors = Vec::with_capacity(grid.len() * IDENTITY_TIMES.len());
        for &u in grid {
            let psi = self.base.tail(u)?;
            let scaled = self.base.tail(space * u)?;
            for t in IDENTITY_TIMES {
                let lhs = scale_b * t * scaled;
                let rhs = t * psi;
                errors.push((u, (lhs - rhs).abs() / rhs));
            }
        }
        let identity = IdentityReport::from_errors(errors, IDENTITY_TOL);

        let ks = match empirical {
            Some(check) => {
                let stretched = self.base.sample_power(scale_b, check.n, check.seed)?;
                let mut rng = rng::stream(check.seed, 1);
                let rescaled = (0..check.n)
                    .map(|_| {
                        self.base
                            .tail_inverse(rng::neg_log_uniform(&mut rng))
                            .map(|y| space * y)
                    })
                    .collect::<Result<Vec<f64>>>()?;
                Some(ks_two_sample(&stretched, &rescaled, check.level)?)
            }
            None => None,
        };

        Ok(SemiSsReport {
            scale_b,
            exponent_h,
            identity,
            ks,
        })
    }

    /// Run [`check_semi_ss`](Self::check_semi_ss) at every scale in
    /// `b_samples`. Each empirical check gets its own seed `seed + index`.
    pub fn check_ss(
        &self,
        exponent_h: f64,
        b_samples: &[f64],
        grid: &[f64],
        empirical: Option<EmpiricalCheck>,
    ) -> Result<SsReport> {
        if b_samples.is_empty() {
            return Err(Error::InvalidParameter("at least one scale is required".into()));
        }
        let reports = b_samples
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let check = empirical.map(|c| EmpiricalCheck {
                    seed: c.seed.wrapping_add(i as u64),
                    ..c
                });
                self.check_semi_ss(b, exponent_h, grid, check)
            })
            .collect::<Result<Vec<_>>>()?;
        let pass = reports.iter().all(SemiSsReport::pass);
        Ok(SsReport {
            exponent_h,
            reports,
            pass,
        })
    }
}
