//! WebAssembly bindings behind `www/index.html`.
//!
//! Each exported function takes the law as `(branch, alpha, b, amplitude)`,
//! meaning `h(y) = 1 + amplitude·cos(2πy/|ln b|)`, and returns a flat
//! `Float64Array` that the page slices into columns.

use maxsev_core::{Branch, ExtremalProcess, MaxArModel, PeriodicFn, SemiStableLaw};
use wasm_bindgen::prelude::*;

fn parse_branch(branch: &str) -> Result<Branch, String> {
    match branch {
        "frechet" => Ok(Branch::Frechet),
        "weibull" => Ok(Branch::Weibull),
        other => Err(format!("unknown branch `{other}`")),
    }
}

fn build(branch: &str, alpha: f64, b: f64, amplitude: f64) -> Result<SemiStableLaw, String> {
    let branch = parse_branch(branch)?;
    let h = PeriodicFn::cosine(b.ln().abs(), 1.0, amplitude);
    SemiStableLaw::new(branch, alpha, b, h).map_err(|e| e.to_string())
}

/// `[x; points] ++ [F(x); points] ++ [H(x); points]` where `H(x) = F(x)/F(bx)`,
/// on quantiles of `F` between 0.001 and 0.999.
pub fn law_curve_columns(branch: &str, alpha: f64, b: f64, amplitude: f64, points: usize) -> Result<Vec<f64>, String> {
    let law = build(branch, alpha, b, amplitude)?;
    let points = points.clamp(2, 5000);
    let mut xs = Vec::with_capacity(points);
    for i in 0..points {
        let u = 0.001 + 0.998 * i as f64 / (points - 1) as f64;
        xs.push(law.quantile(u).map_err(|e| e.to_string())?);
    }
    let cdf: Vec<f64> = xs.iter().map(|&x| law.cdf(x)).collect();
    let cofactor = xs
        .iter()
        .map(|&x| law.cofactor(x).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok([xs, cdf, cofactor].concat())
}

/// `n` values of the stationary max-AR(1) series with `ρ = 1/b`.
pub fn max_ar_series(branch: &str, alpha: f64, b: f64, amplitude: f64, n: usize, seed: u32) -> Result<Vec<f64>, String> {
    let law = build(branch, alpha, b, amplitude)?;
    let model = MaxArModel::new(law, 1.0 / b).map_err(|e| e.to_string())?;
    model.simulate(n.clamp(1, 200_000), 0, u64::from(seed)).map_err(|e| e.to_string())
}

/// Exact semi-selfsimilarity error against the time scale.
///
/// Returns `[scale; points] ++ [error; points]` for scales log-spaced on
/// `[1/a, a^3]` and the natural exponent `±1/α`. The error vanishes at
/// integer powers of `a`, and everywhere when `amplitude = 0`.
pub fn semi_ss_error_columns(branch: &str, alpha: f64, b: f64, amplitude: f64, points: usize) -> Result<Vec<f64>, String> {
    let law = build(branch, alpha, b, amplitude)?;
    let grid = law.quantile_grid().map_err(|e| e.to_string())?;
    let (lo, hi) = (-law.a().ln(), 3.0 * law.a().ln());
    let process = ExtremalProcess::new(law);
    let exponent = process.natural_exponent();
    let points = points.clamp(2, 2000);
    let scales: Vec<f64> = (0..points)
        .map(|i| (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp())
        .collect();
    let errors = scales
        .iter()
        .map(|&s| {
            process
                .check_semi_ss(s, exponent, &grid, None)
                .map(|r| r.identity.max_error)
                .map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok([scales, errors].concat())
}

#[wasm_bindgen(js_name = lawCurve)]
pub fn law_curve(branch: &str, alpha: f64, b: f64, amplitude: f64, points: usize) -> Result<Vec<f64>, JsError> {
    law_curve_columns(branch, alpha, b, amplitude, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = simulateMaxAr)]
pub fn simulate_max_ar(branch: &str, alpha: f64, b: f64, amplitude: f64, n: usize, seed: u32) -> Result<Vec<f64>, JsError> {
    max_ar_series(branch, alpha, b, amplitude, n, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = semiSsErrorCurve)]
pub fn semi_ss_error_curve(branch: &str, alpha: f64, b: f64, amplitude: f64, points: usize) -> Result<Vec<f64>, JsError> {
    semi_ss_error_columns(branch, alpha, b, amplitude, points).map_err(|e| JsError::new(&e))
}
