//! Positive bounded periodic perturbations `h`.
//!
//! `h` is represented as a finite trigonometric series
//!
//! ```text
//! h(y) = level + Σ_k [ c_k cos(2πk y / P) + s_k sin(2πk y / P) ]
//! ```
//!
//! which keeps both `h` and `h'` available in closed form. The derivative is
//! what makes the monotonicity check possible: `x ↦ x^{-α} h(ln x)` is
//! non-increasing iff `h' ≤ α h`, and `r ↦ r^{α} h(ln r)` is non-decreasing
//! iff `h' ≥ -α h`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of grid points used when validating `h`.
pub const DEFAULT_GRID: usize = 4096;

/// Smallest grid size accepted by [`PeriodicFn::report`].
pub const MIN_GRID: usize = 256;

/// Values of `h` at or below this are treated as non-positive.
pub const POSITIVITY_TOL: f64 = 1e-9;

/// Support branch of a max-semi-stable law.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// Extended Fréchet: support `x > 0`, `b > 1`.
    Frechet,
    /// Extended Weibull: support `x < 0`, `0 < b < 1`.
    Weibull,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Frechet => "frechet",
            Branch::Weibull => "weibull",
        }
    }

    /// Whether `x` lies in the open support half-line.
    pub fn in_support(self, x: f64) -> bool {
        match self {
            Branch::Frechet => x > 0.0,
            Branch::Weibull => x < 0.0,
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One term `cos·cos(2πk y/P) + sin·sin(2πk y/P)` of the series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "(u32, f64, f64)", into = "(u32, f64, f64)")]
pub struct Harmonic {
    pub index: u32,
    pub cos: f64,
    pub sin: f64,
}

impl Harmonic {
    pub fn new(index: u32, cos: f64, sin: f64) -> Self {
        Harmonic { index, cos, sin }
    }
}

impl From<(u32, f64, f64)> for Harmonic {
    fn from((index, cos, sin): (u32, f64, f64)) -> Self {
        Harmonic { index, cos, sin }
    }
}

impl From<Harmonic> for (u32, f64, f64) {
    fn from(h: Harmonic) -> Self {
        (h.index, h.cos, h.sin)
    }
}

/// Positive bounded periodic function given by a finite trigonometric series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicFn {
    pub period: f64,
    pub level: f64,
    #[serde(default)]
    pub harmonics: Vec<Harmonic>,
}

/// Outcome of scanning `h` and `h'` over one period.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ValidationReport {
    pub branch: Branch,
    pub alpha: f64,
    pub grid_size: usize,
    /// Smallest value of `h` on the grid.
    pub min_h: f64,
    pub argmin_h: f64,
    /// Smallest value of `α h - h'` (Fréchet) or `α h + h'` (Weibull).
    pub min_slack: f64,
    pub argmin_slack: f64,
    /// `level + Σ(|c_k| + |s_k|)`.
    pub upper_bound: f64,
    pub positive: bool,
    pub monotone: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.positive && self.monotone
    }

    /// First violated condition as an error, if any.
    pub fn violation(&self) -> Option<Error> {
        if !self.positive {
            Some(Error::NonPositive {
                min: self.min_h,
                at: self.argmin_h,
            })
        } else if !self.monotone {
            Some(Error::NonMonotoneTail {
                slack: self.min_slack,
                at: self.argmin_slack,
            })
        } else {
            None
        }
    }
}

impl PeriodicFn {
    pub fn new(period: f64, level: f64, harmonics: Vec<Harmonic>) -> Self {
        PeriodicFn {
            period,
            level,
            harmonics,
        }
    }

    /// The constant function `h ≡ level`.
    pub fn constant(period: f64, level: f64) -> Self {
        PeriodicFn::new(period, level, Vec::new())
    }

    /// `level + amplitude·cos(2πy/period)`.
    pub fn cosine(period: f64, level: f64, amplitude: f64) -> Self {
        PeriodicFn::new(period, level, vec![Harmonic::new(1, amplitude, 0.0)])
    }

    fn omega(&self) -> f64 {
        TAU / self.period
    }

    /// `h(y)`.
    pub fn eval(&self, y: f64) -> f64 {
        let w = self.omega();
        self.harmonics.iter().fold(self.level, |acc, hm| {
            let phase = w * f64::from(hm.index) * y;
            let (s, c) = phase.sin_cos();
            acc + hm.cos * c + hm.sin * s
        })
    }

    /// `h'(y)` from the termwise derivative of the series.
    pub fn derivative(&self, y: f64) -> f64 {
        let w = self.omega();
        self.harmonics.iter().fold(0.0, |acc, hm| {
            let freq = w * f64::from(hm.index);
            let (s, c) = (freq * y).sin_cos();
            acc + freq * (hm.sin * c - hm.cos * s)
        })
    }

    pub fn upper_bound(&self) -> f64 {
        self.harmonics
            .iter()
            .fold(self.level, |acc, hm| acc + hm.cos.abs() + hm.sin.abs())
    }

    /// True when every harmonic coefficient vanishes, i.e. the max-stable case.
    pub fn is_constant(&self) -> bool {
        self.harmonics.iter().all(|hm| hm.cos == 0.0 && hm.sin == 0.0)
    }

    /// Copy with every harmonic coefficient multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        PeriodicFn {
            period: self.period,
            level: self.level,
            harmonics: self
                .harmonics
                .iter()
                .map(|hm| Harmonic::new(hm.index, hm.cos * factor, hm.sin * factor))
                .collect(),
        }
    }

    fn check_structure(&self) -> Result<()> {
        if !(self.period.is_finite() && self.period > 0.0) {
            return Err(Error::InvalidPeriod(self.period));
        }
        if !(self.level.is_finite() && self.level > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "level must be positive and finite, got {}",
                self.level
            )));
        }
        for hm in &self.harmonics {
            if hm.index == 0 {
                return Err(Error::InvalidParameter(
                    "harmonic index must be at least 1".into(),
                ));
            }
            if !(hm.cos.is_finite() && hm.sin.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "harmonic {} has a non-finite coefficient",
                    hm.index
                )));
            }
        }
        Ok(())
    }

    /// Scan `gridSize` equi-spaced points of `[0, period)` and report
    /// positivity and the branch monotonicity condition.
    ///
    /// Only structural problems (bad period, level or grid) are errors; failed
    /// verdicts are reported in the returned value.
    pub fn report(&self, alpha: f64, branch: Branch, grid_size: usize) -> Result<ValidationReport> {
        self.check_structure()?;
        if grid_size < MIN_GRID {
            return Err(Error::InvalidParameter(format!(
                "validation grid needs at least {MIN_GRID} points, got {grid_size}"
            )));
        }
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive and finite, got {alpha}"
            )));
        }

        let mut min_h = f64::INFINITY;
        let mut argmin_h = 0.0;
        let mut min_slack = f64::INFINITY;
        let mut argmin_slack = 0.0;
        for i in 0..grid_size {
            let y = self.period * i as f64 / grid_size as f64;
            let h = self.eval(y);
            let dh = self.derivative(y);
            let slack = match branch {
                Branch::Frechet => alpha * h - dh,
                Branch::Weibull => alpha * h + dh,
            };
            if h < min_h {
                min_h = h;
                argmin_h = y;
            }
            if slack < min_slack {
                min_slack = slack;
                argmin_slack = y;
            }
        }

        Ok(ValidationReport {
            branch,
            alpha,
            grid_size,
            min_h,
            argmin_h,
            min_slack,
            argmin_slack,
            upper_bound: self.upper_bound(),
            positive: min_h > POSITIVITY_TOL,
            monotone: min_slack >= 0.0,
        })
    }

    /// [`report`](Self::report) with failed verdicts turned into errors.
    pub fn validate(&self, alpha: f64, branch: Branch, grid_size: usize) -> Result<ValidationReport> {
        let report = self.report(alpha, branch, grid_size)?;
        match report.violation() {
            Some(err) => Err(err),
            None => Ok(report),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    fn canonical() -> PeriodicFn {
        PeriodicFn::cosine(LN_2, 1.0, 0.1)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(PeriodicFn::constant(LN_2, 1.0).eval(3.7), 1.0);
        assert!((canonical().eval(0.0) - 1.1).abs() < 1e-15);
        assert!((canonical().eval(LN_2) - 1.1).abs() < 1e-14);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let h = PeriodicFn::new(
            1.3,
            2.0,
            vec![Harmonic::new(1, 0.2, -0.1), Harmonic::new(3, 0.05, 0.07)],
        );
        for i in 0..50 {
            let y = -2.0 + 0.1 * i as f64;
            let step = 1e-6;
            let fd = (h.eval(y + step) - h.eval(y - step)) / (2.0 * step);
            assert!((fd - h.derivative(y)).abs() < 1e-7, "y = {y}");
        }
    }

    #[test]
    fn constant_is_valid_with_unit_margins() {
        let r = PeriodicFn::constant(LN_2, 1.0)
            .validate(1.0, Branch::Frechet, DEFAULT_GRID)
            .unwrap();
        assert_eq!(r.min_h, 1.0);
        assert_eq!(r.min_slack, 1.0);
    }

    #[test]
    fn small_cosine_is_valid_by_grid_scan() {
        // Brute-force scan of α h − h' on a grid independent of the one
        // used by `report`.
        let h = canonical();
        let w = TAU / LN_2;
        let brute = (0..100_000)
            .map(|i| {
                let y = LN_2 * i as f64 / 100_000.0;
                1.0 + 0.1 * (w * y).cos() + 0.1 * w * (w * y).sin()
            })
            .fold(f64::INFINITY, f64::min);
        assert!(brute > 0.0);
        let r = h.validate(1.0, Branch::Frechet, DEFAULT_GRID).unwrap();
        assert!((r.min_slack - brute).abs() < 1e-5);
        assert!(h.validate(1.0, Branch::Weibull, DEFAULT_GRID).is_ok());
    }

    #[test]
    fn large_cosine_fails_monotonicity() {
        let h = PeriodicFn::cosine(LN_2, 1.0, 0.99);
        let err = h.validate(1.0, Branch::Frechet, DEFAULT_GRID).unwrap_err();
        assert!(matches!(err, Error::NonMonotoneTail { .. }), "{err:?}");
    }

    #[test]
    fn negative_dip_fails_positivity() {
        let h = PeriodicFn::cosine(LN_2, 1.0, 1.5);
        let err = h.validate(1.0, Branch::Frechet, DEFAULT_GRID).unwrap_err();
        assert!(matches!(err, Error::NonPositive { .. }));
    }

    #[test]
    fn structural_errors() {
        assert_eq!(
            PeriodicFn::constant(0.0, 1.0).report(1.0, Branch::Frechet, 4096),
            Err(Error::InvalidPeriod(0.0))
        );
        assert!(matches!(
            PeriodicFn::constant(-1.0, 1.0).report(1.0, Branch::Frechet, 4096),
            Err(Error::InvalidPeriod(_))
        ));
        assert!(matches!(
            canonical().report(1.0, Branch::Frechet, 255),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            PeriodicFn::new(1.0, 1.0, vec![Harmonic::new(0, 0.1, 0.0)]).report(1.0, Branch::Frechet, 4096),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn upper_bound_is_arithmetic() {
        let h = PeriodicFn::new(1.0, 2.0, vec![Harmonic::new(1, -0.3, 0.1), Harmonic::new(2, 0.2, -0.4)]);
        assert!((h.upper_bound() - 3.0).abs() < 1e-15);
        for i in 0..1000 {
            assert!(h.eval(i as f64 * 0.0137).abs() <= h.upper_bound());
        }
    }

    #[test]
    fn json_shape() {
        let json = serde_json::to_string(&canonical()).unwrap();
        assert_eq!(json, format!("{{\"period\":{LN_2},\"level\":1.0,\"harmonics\":[[1,0.1,0.0]]}}"));
        let back: PeriodicFn = serde_json::from_str(&json).unwrap();
        assert_eq!(back, canonical());
    }

    fn valid_periodic() -> impl Strategy<Value = (PeriodicFn, f64, Branch)> {
        (
            0.1f64..3.0,
            0.5f64..3.0,
            prop::collection::vec((1u32..4, -0.05f64..0.05, -0.05f64..0.05), 0..3),
            0.5f64..3.0,
            prop::bool::ANY,
        )
            .prop_filter_map("invalid h", |(period, level, hs, alpha, frechet)| {
                let branch = if frechet { Branch::Frechet } else { Branch::Weibull };
                let h = PeriodicFn::new(period, level, hs.into_iter().map(Harmonic::from).collect());
                h.validate(alpha, branch, DEFAULT_GRID).ok().map(|_| (h, alpha, branch))
            })
    }

    proptest! {
        #[test]
        fn periodicity((h, _, _) in valid_periodic(), y in -20.0f64..20.0) {
            let a = h.eval(y);
            let b = h.eval(y + h.period);
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }

        #[test]
        fn positive_everywhere((h, _, _) in valid_periodic(), t in -10.0f64..10.0) {
            prop_assert!(h.eval(t * h.period) > 0.0);
        }

        #[test]
        fn shrinking_amplitude_stays_valid((h, alpha, branch) in valid_periodic()) {
            for lambda in [0.0, 0.5] {
                prop_assert!(h.scaled(lambda).validate(alpha, branch, DEFAULT_GRID).is_ok());
            }
        }
    }
}
