//! Stationary max-AR(1) recursion `X_n = ρ X_{n-1} ∨ ε_n`.
//!
//! With `X_0 ~ G` max-semi-stable(a, b) and `b = 1/ρ`, the innovation
//! `ε_n =d ρ Y(e)` has d.f. `{G(bu)}^{e}` where `e = b^α - 1` (Fréchet) or
//! `e = b^{-α} - 1` (Weibull). One step of the recursion then gives
//! `G(bu) {G(bu)}^{e} = {G(bu)}^{1+e} = G(u)`, so the series is exactly
//! stationary from the start.

use crate::error::{Error, Result};
use crate::law::{check_max_semi_sd, CofactorCheck, IdentityReport, SemiStableLaw, IDENTITY_TOL};
use crate::periodic::Branch;
use crate::rng;
use crate::stats::{ks_one_sample, KsReport, Level};

/// Default thinning stride for the empirical stationarity check.
pub const DEFAULT_THIN: usize = 10;

const RHO_TOL: f64 = 1e-12;

/// Absolute tolerance between the two innovation d.f. routes.
pub const CONSISTENCY_TOL: f64 = 1e-12;

/// Law of `ρ Y(e)`: `u ↦ {G(scale·u)}^{exponent}`.
#[derive(Clone, Debug, PartialEq)]
pub struct InnovationLaw {
    base: SemiStableLaw,
    exponent: f64,
    scale: f64,
}

impl InnovationLaw {
    pub fn base(&self) -> &SemiStableLaw {
        &self.base
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn cdf(&self, u: f64) -> f64 {
        let v = self.scale * u;
        match self.base.tail(v) {
            Ok(psi) => (-self.exponent * psi).exp(),
            Err(_) => self.base.cdf(v),
        }
    }

    fn draw<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        let y = self.base.tail_inverse(rng::neg_log_uniform(rng) / self.exponent)?;
        Ok(y / self.scale)
    }

    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::InvalidParameter("sample size must be at least 1".into()));
        }
        let mut rng = rng::stream(seed, 0);
        (0..n).map(|_| self.draw(&mut rng)).collect()
    }
}

/// Max-AR(1) model with max-semi-stable stationary marginal.
#[derive(Clone, Debug, PartialEq)]
pub struct MaxArModel {
    rho: f64,
    b: f64,
    marginal: SemiStableLaw,
    innovation: InnovationLaw,
}

fn natural_exponent(branch: Branch, alpha: f64, b: f64) -> f64 {
    match branch {
        Branch::Frechet => b.powf(alpha) - 1.0,
        Branch::Weibull => b.powf(-alpha) - 1.0,
    }
}

impl MaxArModel {
    /// Build the model with `b = 1/ρ`.
    ///
    /// For non-constant `h` the coefficient must satisfy `ρ = 1/marginal.b`;
    /// max-stable marginals accept any `ρ` for which the innovation exponent
    /// is positive, i.e. `ρ < 1` (Fréchet) or `ρ > 1` (Weibull).
    pub fn new(marginal: SemiStableLaw, rho: f64) -> Result<Self> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")));
        }
        if !marginal.is_max_stable() && (rho * marginal.b() - 1.0).abs() > RHO_TOL {
            return Err(Error::PeriodMismatch(format!(
                "rho = {rho} but the periodic marginal requires rho = 1/b = {}",
                1.0 / marginal.b()
            )));
        }
        let b = 1.0 / rho;
        let exponent = natural_exponent(marginal.branch(), marginal.alpha(), b);
        if !(exponent.is_finite() && exponent > 0.0) {
            return Err(Error::InvalidInnovation(format!(
                "exponent {exponent} is not positive for rho = {rho} on the {} branch",
                marginal.branch()
            )));
        }
        Ok(MaxArModel::assemble(marginal, rho, exponent))
    }

    /// Model with an arbitrary innovation exponent; for negative controls.
    #[doc(hidden)]
    pub fn with_exponent_unchecked(marginal: SemiStableLaw, rho: f64, exponent: f64) -> Self {
        MaxArModel::assemble(marginal, rho, exponent)
    }

    fn assemble(marginal: SemiStableLaw, rho: f64, exponent: f64) -> Self {
        let b = 1.0 / rho;
        MaxArModel {
            rho,
            b,
            innovation: InnovationLaw {
                base: marginal.clone(),
                exponent,
                scale: b,
            },
            marginal,
        }
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn marginal(&self) -> &SemiStableLaw {
        &self.marginal
    }

    pub fn innovation(&self) -> &InnovationLaw {
        &self.innovation
    }

    /// `{G(bu)}^{e}`.
    pub fn innovation_cdf(&self, u: f64) -> f64 {
        self.innovation.cdf(u)
    }

    /// Cofactor route `F(u) / F(u/ρ)`; `0` where both vanish.
    pub fn innovation_cdf_ratio(&self, u: f64) -> f64 {
        let den = self.marginal.cdf(u / self.rho);
        if den > 0.0 {
            self.marginal.cdf(u) / den
        } else {
            0.0
        }
    }

    /// `burn_in + n` steps of the recursion from `X_0 ~ G`; returns the last `n`.
    pub fn simulate(&self, n: usize, burn_in: usize, seed: u64) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::InvalidParameter("series length must be at least 1".into()));
        }
        let mut rng = rng::stream(seed, 0);
        let mut x = self.marginal.tail_inverse(rng::neg_log_uniform(&mut rng))?;
        let mut out = Vec::with_capacity(n);
        for step in 0..burn_in + n {
            let eps = self.innovation.draw(&mut rng)?;
            x = (self.rho * x).max(eps);
            if step >= burn_in {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// One-step chain `G(bu)^{1+e} = G(u)` checked as
    /// `|(1+e) ψ(bu) - ψ(u)| / ψ(u)` over `grid`.
    pub fn check_stationarity_identity(&self, grid: &[f64]) -> Result<IdentityReport> {
        let total = 1.0 + self.innovation.exponent;
        let mut errors = Vec::with_capacity(grid.len());
        for &u in grid {
            let psi = self.marginal.tail(u)?;
            let stepped = total * self.marginal.tail(self.b * u)?;
            errors.push((u, (stepped - psi).abs() / psi));
        }
        Ok(IdentityReport::from_errors(errors, IDENTITY_TOL))
    }

    /// Largest `|{G(bu)}^e - F(u)/F(u/ρ)|` over `grid`, skipping points where
    /// `F(u/ρ) ≤ 1e-300`. Tolerance `1e-12`.
    pub fn check_innovation_consistency(&self, grid: &[f64]) -> IdentityReport {
        let errors = grid
            .iter()
            .filter(|&&u| self.marginal.cdf(u / self.rho) > 1e-300)
            .map(|&u| (u, (self.innovation_cdf(u) - self.innovation_cdf_ratio(u)).abs()))
            .collect::<Vec<_>>();
        IdentityReport::from_errors(errors, CONSISTENCY_TOL)
    }

    /// Simulate, keep every `thin`-th value, and run a one-sample KS test
    /// against the marginal d.f.
    pub fn check_marginal_stationarity_empirical(
        &self,
        n: usize,
        burn_in: usize,
        thin: usize,
        level: Level,
        seed: u64,
    ) -> Result<KsReport> {
        if n < 100 {
            return Err(Error::TooFewSamples { got: n, need: 100 });
        }
        if thin == 0 {
            return Err(Error::InvalidParameter("thinning stride must be at least 1".into()));
        }
        let series = self.simulate(n, burn_in, seed)?;
        let kept: Vec<f64> = series.into_iter().step_by(thin).collect();
        ks_one_sample(&kept, |x| self.marginal.cdf(x), level)
    }
}

/// Is `marginal` max-semi-SD(1/ρ)? A true verdict certifies a stationary
/// max-AR(1) with coefficient `ρ` and this marginal.
pub fn check_max_semi_sd_equivalence(marginal: &SemiStableLaw, rho: f64, grid: &[f64]) -> CofactorCheck {
    check_max_semi_sd(|x| marginal.cdf(x), 1.0 / rho, grid)
}
