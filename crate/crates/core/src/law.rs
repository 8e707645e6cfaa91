//! Max-semi-stable(a, b) laws `F(x) = exp{-ψ(x)}`.
//!
//! Extended Fréchet: `ψ(x) = x^{-α} h(ln x)` on `x > 0`, `b > 1`, `a = b^α`.
//! Extended Weibull: `ψ(x) = |x|^{α} h(ln|x|)` on `x < 0`, `0 < b < 1`,
//! `a = b^{-α}`. In both cases `h` has period `|ln b|` and `ψ(x) = a ψ(bx)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::periodic::{Branch, PeriodicFn, ValidationReport, DEFAULT_GRID};
use crate::rng;

/// Relative tolerance of the exact identity checks.
pub const IDENTITY_TOL: f64 = 1e-10;

/// Tolerance on `|h.period - |ln b||`.
pub const PERIOD_TOL: f64 = 1e-12;

const MAX_BISECTION: usize = 200;

/// Absolute tolerance on `ln|x|`, i.e. relative tolerance on `x`.
const ROOT_TOL: f64 = 1e-15;

/// Levels `0.01, 0.02, ..., 0.99` of the standard identity grid.
pub fn quantile_levels() -> impl Iterator<Item = f64> {
    (1..100).map(|i| i as f64 / 100.0)
}

/// Serialized form of a law: `{"branch", "alpha", "b", "h"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawSpec {
    pub branch: Branch,
    pub alpha: f64,
    pub b: f64,
    pub h: PeriodicFn,
}

/// Maximum relative error of an exact functional identity over a grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IdentityReport {
    pub max_error: f64,
    /// Grid point where `max_error` is attained.
    pub worst_at: f64,
    pub points: usize,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityReport {
    /// Aggregate `(grid point, error)` pairs; any NaN error fails the report.
    pub fn from_errors(errors: impl IntoIterator<Item = (f64, f64)>, tolerance: f64) -> Self {
        let mut max_error = 0.0f64;
        let mut worst_at = f64::NAN;
        let mut points = 0;
        let mut saw_nan = false;
        for (at, err) in errors {
            points += 1;
            if err.is_nan() {
                if !saw_nan {
                    saw_nan = true;
                    worst_at = at;
                }
            } else if !saw_nan && (worst_at.is_nan() || err > max_error) {
                max_error = err;
                worst_at = at;
            }
        }
        if saw_nan {
            max_error = f64::NAN;
        }
        IdentityReport {
            max_error,
            worst_at,
            points,
            tolerance,
            pass: points > 0 && !saw_nan && max_error <= tolerance,
        }
    }
}

/// Max-semi-stable(a, b) distribution of extended Fréchet or Weibull type.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiStableLaw {
    branch: Branch,
    alpha: f64,
    b: f64,
    a: f64,
    h: PeriodicFn,
}

fn derived_a(branch: Branch, alpha: f64, b: f64) -> f64 {
    match branch {
        Branch::Frechet => b.powf(alpha),
        Branch::Weibull => b.powf(-alpha),
    }
}

impl SemiStableLaw {
    /// Build and validate a law. `a` is derived from `b` and `α`.
    pub fn new(branch: Branch, alpha: f64, b: f64, h: PeriodicFn) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        let b_ok = match branch {
            Branch::Frechet => b.is_finite() && b > 1.0,
            Branch::Weibull => b > 0.0 && b < 1.0,
        };
        if !b_ok {
            return Err(Error::InvalidParameter(match branch {
                Branch::Frechet => format!("Fréchet branch needs b > 1, got {b}"),
                Branch::Weibull => format!("Weibull branch needs 0 < b < 1, got {b}"),
            }));
        }
        let expected = b.ln().abs();
        if (h.period - expected).abs() > PERIOD_TOL {
            return Err(Error::PeriodMismatch(format!(
                "h.period = {} but |ln b| = {expected}",
                h.period
            )));
        }
        h.validate(alpha, branch, DEFAULT_GRID)?;
        let a = derived_a(branch, alpha, b);
        debug_assert!(a > 1.0);
        Ok(SemiStableLaw { branch, alpha, b, a, h })
    }

    /// Max-stable law `exp{-κ x^{-α}}` (Fréchet) or `exp{-κ |x|^{α}}` (Weibull).
    ///
    /// `h ≡ κ` has every period; `b` is fixed to 2 (Fréchet) or 1/2 (Weibull).
    pub fn max_stable(branch: Branch, alpha: f64, kappa: f64) -> Result<Self> {
        let b = match branch {
            Branch::Frechet => 2.0,
            Branch::Weibull => 0.5,
        };
        SemiStableLaw::new(branch, alpha, b, PeriodicFn::constant(std::f64::consts::LN_2, kappa))
    }

    /// Assemble a law without any validation.
    ///
    /// Only meant for negative controls: the resulting object may violate
    /// `ψ(x) = a ψ(bx)` and [`quantile`](Self::quantile) may fail on it.
    #[doc(hidden)]
    pub fn new_unchecked(branch: Branch, alpha: f64, b: f64, h: PeriodicFn) -> Self {
        let a = derived_a(branch, alpha, b);
        SemiStableLaw { branch, alpha, b, a, h }
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn h(&self) -> &PeriodicFn {
        &self.h
    }

    pub fn is_max_stable(&self) -> bool {
        self.h.is_constant()
    }

    pub fn spec(&self) -> LawSpec {
        LawSpec {
            branch: self.branch,
            alpha: self.alpha,
            b: self.b,
            h: self.h.clone(),
        }
    }

    /// Positivity and monotonicity report of `h` for this law.
    pub fn validation_report(&self) -> Result<ValidationReport> {
        self.h.report(self.alpha, self.branch, DEFAULT_GRID)
    }

    /// Signed exponent of `|x|` in `ψ`: `-α` (Fréchet) or `+α` (Weibull).
    fn power(&self) -> f64 {
        match self.branch {
            Branch::Frechet => -self.alpha,
            Branch::Weibull => self.alpha,
        }
    }

    /// `ψ` as a function of `r = |x| > 0`.
    fn radial(&self, r: f64) -> f64 {
        r.powf(self.power()) * self.h.eval(r.ln())
    }

    fn ln_radial(&self, ln_r: f64) -> f64 {
        self.power() * ln_r + self.h.eval(ln_r).ln()
    }

    fn check_support(&self, x: f64) -> Result<()> {
        if self.branch.in_support(x) {
            Ok(())
        } else {
            Err(Error::Domain {
                x,
                branch: self.branch.name(),
            })
        }
    }

    /// Tail function `ψ(x) = -ln F(x)` on the open support.
    pub fn tail(&self, x: f64) -> Result<f64> {
        self.check_support(x)?;
        Ok(self.radial(x.abs()))
    }

    /// Distribution function.
    pub fn cdf(&self, x: f64) -> f64 {
        if self.branch.in_support(x) {
            (-self.radial(x.abs())).exp()
        } else if x.is_nan() {
            f64::NAN
        } else {
            match self.branch {
                Branch::Frechet => 0.0,
                Branch::Weibull => 1.0,
            }
        }
    }

    /// Solve `ψ(x) = target` for `target ∈ (0, ∞)`.
    ///
    /// The identity `ψ(b^k y) = a^{-k} ψ(y)` moves the target into one period,
    /// `|y|` between 1 and `b`, where a bracketed root search on `ln|y|`
    /// runs on the strictly monotone `ln ψ`.
    pub fn tail_inverse(&self, target: f64) -> Result<f64> {
        if !(target.is_finite() && target > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tail target must be positive and finite, got {target}"
            )));
        }
        let ln_a = self.a.ln();
        let ln_b = self.b.ln();
        let ln_h0 = self.h.eval(0.0).ln();
        let ln_target = target.ln();

        // a^k target ∈ [h(0)/a, h(0)]
        let mut k = ((ln_h0 - ln_target) / ln_a).floor();
        let mut reduced = ln_target + k * ln_a;
        if reduced > ln_h0 {
            k -= 1.0;
            reduced = ln_target + k * ln_a;
        } else if reduced < ln_h0 - ln_a {
            k += 1.0;
            reduced = ln_target + k * ln_a;
        }

        // g(ln y) = ln ψ(y) - reduced is ≥ 0 at ln y = 0 and ≤ 0 at ln y = ln b.
        // Newton steps use g' = power + h'/h and fall back to bisection
        // whenever they would leave the bracket.
        let g = |ln_y: f64| self.ln_radial(ln_y) - reduced;
        let dg = |ln_y: f64| self.power() + self.h.derivative(ln_y) / self.h.eval(ln_y);
        let (mut pos, mut neg) = (0.0f64, ln_b);
        let (g_pos, g_neg) = (g(pos), g(neg));
        if g_pos == 0.0 {
            neg = pos;
        } else if g_neg == 0.0 {
            pos = neg;
        } else if !(g_pos > 0.0 && g_neg < 0.0) {
            return Err(Error::Convergence(format!(
                "no bracket for ψ = {target}: g(0) = {g_pos}, g(ln b) = {g_neg}"
            )));
        }

        let mut ln_y = 0.5 * (pos + neg);
        let mut converged = pos == neg;
        if converged {
            ln_y = pos;
        }
        for _ in 0..MAX_BISECTION {
            if converged {
                break;
            }
            let gy = g(ln_y);
            if gy == 0.0 {
                converged = true;
                break;
            }
            if gy > 0.0 {
                pos = ln_y;
            } else {
                neg = ln_y;
            }
            let newton = ln_y - gy / dg(ln_y);
            let (lo, hi) = (pos.min(neg), pos.max(neg));
            let next = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (pos + neg)
            };
            converged = (next - ln_y).abs() <= ROOT_TOL || hi - lo <= ROOT_TOL;
            ln_y = next;
        }
        if !converged {
            return Err(Error::Convergence(format!(
                "root finding did not converge for ψ = {target}"
            )));
        }
        let r = (k * ln_b + ln_y).exp();
        Ok(match self.branch {
            Branch::Frechet => r,
            Branch::Weibull => -r,
        })
    }

    /// Inverse distribution function on `(0, 1)`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "quantile level must lie in (0, 1), got {u}"
            )));
        }
        self.tail_inverse(-u.ln())
    }

    /// `n` inverse-transform draws from a ChaCha stream seeded with `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        self.sample_power(1.0, n, seed)
    }

    /// Draws from `F^t`: solve `t ψ(x) = -ln U`.
    pub(crate) fn sample_power(&self, t: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::InvalidParameter("sample size must be at least 1".into()));
        }
        let mut rng = rng::stream(seed, 0);
        (0..n)
            .map(|_| self.tail_inverse(rng::neg_log_uniform(&mut rng) / t))
            .collect()
    }

    /// Quantiles of `F` at levels `0.01, ..., 0.99`.
    pub fn quantile_grid(&self) -> Result<Vec<f64>> {
        quantile_levels().map(|u| self.quantile(u)).collect()
    }

    /// Sorted support grid whose `ψ` values run geometrically from 700
    /// down to `1e-13`, so `F` ranges from about `e^{-700}` to `1 - 1e-13`.
    pub fn support_grid(&self, points: usize) -> Result<Vec<f64>> {
        let points = points.max(2);
        let (hi, lo) = (700f64.ln(), 1e-13f64.ln());
        (0..points)
            .map(|i| {
                let s = hi + (lo - hi) * i as f64 / (points - 1) as f64;
                self.tail_inverse(s.exp())
            })
            .collect()
    }

    /// Log-spaced support grid `|x| = e^s`, `s ∈ [-5, 5]`, that needs no
    /// root finding and therefore also works for unchecked laws.
    pub fn log_grid(&self, points: usize) -> Vec<f64> {
        let points = points.max(2);
        let mut grid: Vec<f64> = (0..points)
            .map(|i| {
                let r = (-5.0 + 10.0 * i as f64 / (points - 1) as f64).exp();
                match self.branch {
                    Branch::Frechet => r,
                    Branch::Weibull => -r,
                }
            })
            .collect();
        grid.sort_by(f64::total_cmp);
        grid
    }

    /// Relative error of `ψ(x) = a' ψ(b' x)` over `grid`.
    pub fn check_scaling_identity(&self, a: f64, b: f64, grid: &[f64]) -> Result<IdentityReport> {
        let mut errors = Vec::with_capacity(grid.len());
        for &x in grid {
            let lhs = self.tail(x)?;
            let rhs = a * self.tail(b * x)?;
            errors.push((x, (lhs - rhs).abs() / lhs));
        }
        Ok(IdentityReport::from_errors(errors, IDENTITY_TOL))
    }

    /// `ψ(x) = a ψ(bx)` at the law's own `(a, b)`.
    pub fn check_semistable_identity(&self, grid: &[f64]) -> Result<IdentityReport> {
        self.check_scaling_identity(self.a, self.b, grid)
    }

    /// Cofactor `H(x) = F(x) / F(bx) = exp{-ψ(x) + ψ(bx)}` of the
    /// factorization `F(x) = F(bx) H(x)`.
    pub fn cofactor(&self, x: f64) -> Result<f64> {
        self.cofactor_at(self.b, x)
    }

    /// Cofactor for a general scale `c`, computed in log-space.
    pub fn cofactor_at(&self, c: f64, x: f64) -> Result<f64> {
        self.check_support(x)?;
        Ok((-self.radial(x.abs()) + self.radial((c * x).abs())).exp())
    }
}

impl TryFrom<LawSpec> for SemiStableLaw {
    type Error = Error;

    fn try_from(spec: LawSpec) -> Result<Self> {
        SemiStableLaw::new(spec.branch, spec.alpha, spec.b, spec.h)
    }
}

impl Serialize for SemiStableLaw {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.spec().serialize(serializer)
    }
}

/// Result of testing the factorization `F(x) = F(cx) H(x)` on a grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CofactorCheck {
    pub c: f64,
    pub grid: Vec<f64>,
    /// `H` on the grid.
    pub values: Vec<f64>,
    pub monotone: bool,
    pub in_unit_interval: bool,
    pub lower_limit: bool,
    pub upper_limit: bool,
    pub non_degenerate: bool,
    pub verdict: bool,
    /// Largest magnitude by which any condition is violated; 0 when none is.
    pub worst_violation: f64,
}

/// Limit tolerance for `H → 0` and `H → 1` at the grid ends.
pub const LIMIT_TOL: f64 = 1e-6;

const ORDER_TOL: f64 = 1e-12;

/// Check whether `cdf` is max-semi-SD(c): the candidate cofactor
/// `H(x) = F(x)/F(cx)` must be a non-degenerate distribution function.
///
/// `grid` should be sorted and reach far enough into both ends of the
/// support for the limits 0 and 1 to show within [`LIMIT_TOL`].
pub fn check_max_semi_sd<F: Fn(f64) -> f64>(cdf: F, c: f64, grid: &[f64]) -> CofactorCheck {
    let values: Vec<f64> = grid
        .iter()
        .map(|&x| {
            let num = cdf(x);
            let den = cdf(c * x);
            if den > 0.0 {
                num / den
            } else if num == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        })
        .collect();

    let mut worst = 0.0f64;
    let scale_ok = c.is_finite() && c > 0.0 && c != 1.0;

    let mut monotone = grid.windows(2).all(|w| w[0] <= w[1]);
    for w in values.windows(2) {
        let drop = w[0] - w[1];
        if drop > ORDER_TOL || drop.is_nan() {
            monotone = false;
            worst = worst.max(if drop.is_nan() { f64::INFINITY } else { drop });
        }
    }

    let mut in_unit_interval = true;
    for &v in &values {
        if !(-ORDER_TOL..=1.0 + ORDER_TOL).contains(&v) {
            in_unit_interval = false;
            worst = worst.max(if v.is_nan() { f64::INFINITY } else { (v - 1.0).max(-v) });
        }
    }

    let first = values.first().copied().unwrap_or(f64::NAN);
    let last = values.last().copied().unwrap_or(f64::NAN);
    let lower_limit = first <= LIMIT_TOL;
    if !lower_limit {
        worst = worst.max(first);
    }
    let upper_limit = last >= 1.0 - LIMIT_TOL;
    if !upper_limit {
        worst = worst.max(1.0 - last);
    }

    let non_degenerate = values.iter().any(|&v| v > LIMIT_TOL && v < 1.0 - LIMIT_TOL);

    let verdict = scale_ok
        && !grid.is_empty()
        && monotone
        && in_unit_interval
        && lower_limit
        && upper_limit
        && non_degenerate;

    CofactorCheck {
        c,
        grid: grid.to_vec(),
        values,
        monotone,
        in_unit_interval,
        lower_limit,
        upper_limit,
        non_degenerate,
        verdict,
        worst_violation: worst,
    }
}

impl SemiStableLaw {
    /// [`check_max_semi_sd`] on this law's distribution function.
    pub fn check_max_semi_sd(&self, c: f64, grid: &[f64]) -> CofactorCheck {
        check_max_semi_sd(|x| self.cdf(x), c, grid)
    }
}
