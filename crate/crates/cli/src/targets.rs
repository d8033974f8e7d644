//! Built-in target functions.

use std::f64::consts::PI;

use mlqi::CosineSeries;

use crate::CliError;

/// Quadrature nodes for the `exp(cos 2 pi x)` coefficients.
pub const EXPCOS_NODES: usize = 1 << 14;
/// Highest retained frequency of `exp(cos 2 pi x)`.
pub const EXPCOS_MAX_FREQ: usize = 40;

/// Cosine coefficients of `exp(cos 2 pi x)` by the trapezoidal rule.
pub fn expcos_series() -> CosineSeries {
    let n = EXPCOS_NODES;
    let samples: Vec<f64> = (0..n)
        .map(|j| (2.0 * PI * j as f64 / n as f64).cos().exp())
        .collect();
    let coeffs = (0..=EXPCOS_MAX_FREQ)
        .map(|k| {
            let sum: f64 = samples
                .iter()
                .enumerate()
                .map(|(j, v)| v * (2.0 * PI * ((k * j) % n) as f64 / n as f64).cos())
                .sum();
            let weight = if k == 0 { 1.0 } else { 2.0 };
            weight * sum / n as f64
        })
        .collect();
    CosineSeries::from_coeffs(coeffs).expect("finite coefficients")
}

/// `c<m>` or `expcos`.
pub fn named_target(name: &str) -> Result<CosineSeries, CliError> {
    if name == "expcos" {
        return Ok(expcos_series());
    }
    name.strip_prefix('c')
        .and_then(|m| m.parse::<usize>().ok())
        .filter(|&m| m <= 1 << 20)
        .map(CosineSeries::cosine)
        .ok_or_else(|| {
            CliError::Usage(format!("unknown target `{name}` (expected c<m> or expcos)"))
        })
}
