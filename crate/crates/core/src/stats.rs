//! Empirical distribution functions and Kolmogorov–Smirnov tests with
//! asymptotic critical values.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Minimum sample size accepted by the KS tests.
pub const MIN_KS_SAMPLES: usize = 8;

/// Supported significance levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    FivePercent,
    OnePercent,
}

impl Level {
    pub fn from_f64(level: f64) -> Result<Self> {
        if level == 0.05 {
            Ok(Level::FivePercent)
        } else if level == 0.01 {
            Ok(Level::OnePercent)
        } else {
            Err(Error::UnsupportedLevel(level))
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Level::FivePercent => 0.05,
            Level::OnePercent => 0.01,
        }
    }

    /// Asymptotic Kolmogorov quantile `c(level)`.
    pub fn coefficient(self) -> f64 {
        match self {
            Level::FivePercent => 1.358,
            Level::OnePercent => 1.628,
        }
    }
}

impl Serialize for Level {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.as_f64())
    }
}

/// Sorted sample with right-continuous step evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalCdf {
    values: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::TooFewSamples { got: 0, need: 1 });
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidParameter("sample contains NaN".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(EmpiricalCdf { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `#{values ≤ x} / n`.
    pub fn eval(&self, x: f64) -> f64 {
        self.values.partition_point(|&v| v <= x) as f64 / self.values.len() as f64
    }
}

/// Outcome of a one- or two-sample KS test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KsReport {
    pub statistic: f64,
    #[serde(rename = "critical")]
    pub critical_value: f64,
    pub level: Level,
    pub n: usize,
    /// Size of the second sample for two-sample tests.
    pub m: Option<usize>,
    pub pass: bool,
}

impl KsReport {
    fn new(statistic: f64, critical_value: f64, level: Level, n: usize, m: Option<usize>) -> Self {
        KsReport {
            statistic,
            critical_value,
            level,
            n,
            m,
            pass: statistic < critical_value,
        }
    }
}

fn require(n: usize) -> Result<()> {
    if n < MIN_KS_SAMPLES {
        Err(Error::TooFewSamples {
            got: n,
            need: MIN_KS_SAMPLES,
        })
    } else {
        Ok(())
    }
}

/// One-sample KS test of `sample` against the distribution function `cdf`.
pub fn ks_one_sample<F: Fn(f64) -> f64>(sample: &[f64], cdf: F, level: Level) -> Result<KsReport> {
    require(sample.len())?;
    let ecdf = EmpiricalCdf::new(sample.to_vec())?;
    let n = ecdf.len() as f64;
    let statistic = ecdf
        .values()
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max);
    let critical = level.coefficient() / n.sqrt();
    Ok(KsReport::new(statistic, critical, level, ecdf.len(), None))
}

/// Two-sample KS test; ties are consumed from both samples before the
/// ECDFs are compared.
pub fn ks_two_sample(a: &[f64], b: &[f64], level: Level) -> Result<KsReport> {
    require(a.len())?;
    require(b.len())?;
    let a = EmpiricalCdf::new(a.to_vec())?;
    let b = EmpiricalCdf::new(b.to_vec())?;
    let (xs, ys) = (a.values(), b.values());
    let (n, m) = (xs.len(), ys.len());

    let (mut i, mut j) = (0, 0);
    let mut statistic = 0.0f64;
    while i < n && j < m {
        let x = xs[i].min(ys[j]);
        while i < n && xs[i] <= x {
            i += 1;
        }
        while j < m && ys[j] <= x {
            j += 1;
        }
        let diff = (i as f64 / n as f64 - j as f64 / m as f64).abs();
        statistic = statistic.max(diff);
    }

    let (nf, mf) = (n as f64, m as f64);
    let critical = level.coefficient() * ((nf + mf) / (nf * mf)).sqrt();
    Ok(KsReport::new(statistic, critical, level, n, Some(m)))
}
