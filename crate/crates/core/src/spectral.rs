//! Even 1-periodic functions as finite cosine series, and the stationary
//! Gaussian quasi-interpolation operator on them.
//!
//! A [`CosineSeries`] stores `f = sum_m coeffs[m] cos(2 pi m x)`. Cosine
//! frequencies fold, `cos(-r x) = cos(r x)`, so a weight landing on a negative
//! index `m + n k < 0` is accumulated at `|m + n k|`.
//!
//! The operator is available two ways:
//! * [`qi_eval_direct`] sums shifted kernels against grid samples,
//! * [`qi_spectral`] maps cosine coefficients through the exact aliasing
//!   identity `Q_{1/n} c_m = sum_k psi_hat(k + m/n) c_{|m + n k|}`.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::kernel::{psi, psi_hat};
use crate::{Error, Result};

/// Finite cosine expansion of an even 1-periodic function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct CosineSeries {
    coeffs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    coeffs: Vec<f64>,
}

impl TryFrom<SeriesRepr> for CosineSeries {
    type Error = Error;
    fn try_from(r: SeriesRepr) -> Result<Self> {
        CosineSeries::from_coeffs(r.coeffs)
    }
}

impl From<CosineSeries> for SeriesRepr {
    fn from(s: CosineSeries) -> Self {
        SeriesRepr { coeffs: s.coeffs }
    }
}

impl CosineSeries {
    /// Builds a series from its coefficients; an empty vector is the zero
    /// series. Non-finite coefficients are rejected.
    pub fn from_coeffs(coeffs: Vec<f64>) -> Result<Self> {
        if let Some(m) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::param(format!("coefficient {m} is not finite")));
        }
        Ok(Self::from_vec(coeffs))
    }

    fn from_vec(mut coeffs: Vec<f64>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![0.0] }
    }

    /// The pure cosine `c_m(x) = cos(2 pi m x)`.
    pub fn cosine(m: usize) -> Self {
        let mut coeffs = vec![0.0; m + 1];
        coeffs[m] = 1.0;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Highest stored frequency (the stored top coefficient may be zero).
    pub fn max_freq(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `c_m`, zero beyond the stored range.
    pub fn coefficient(&self, m: usize) -> f64 {
        self.coeffs.get(m).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Nonzero `(frequency, coefficient)` pairs in increasing frequency.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(m, &c)| (m, c))
    }

    /// Drops trailing zero coefficients.
    pub fn trimmed(&self) -> Self {
        let len = self
            .coeffs
            .iter()
            .rposition(|&c| c != 0.0)
            .map_or(1, |m| m + 1);
        Self::from_vec(self.coeffs[..len].to_vec())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::from_vec(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Largest coefficientwise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .map(|m| (self.coefficient(m) - other.coefficient(m)).abs())
            .fold(0.0, f64::max)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::from_vec(
            (0..len)
                .map(|m| op(self.coefficient(m), other.coefficient(m)))
                .collect(),
        )
    }

    /// CSV block `frequency,coefficient`, one row per stored frequency.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("frequency,coefficient\n");
        for (m, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("{m},{c:e}\n"));
        }
        out
    }

    /// Parses the CSV block written by [`CosineSeries::to_csv`]. Lines starting
    /// with `#` are ignored; missing frequencies are zero, repeated ones add.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut coeffs: Vec<f64> = Vec::new();
        let mut header_seen = false;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !header_seen {
                header_seen = true;
                if line.starts_with("frequency") {
                    continue;
                }
            }
            let mut cols = line.split(',').map(str::trim);
            let bad = || {
                Error::Parse(format!(
                    "line {}: expected `frequency,coefficient`",
                    lineno + 1
                ))
            };
            let (m, c) = match (cols.next(), cols.next(), cols.next()) {
                (Some(m), Some(c), None) => (m, c),
                _ => return Err(bad()),
            };
            let m: usize = m.parse().map_err(|_| bad())?;
            let c: f64 = c.parse().map_err(|_| bad())?;
            if coeffs.len() <= m {
                coeffs.resize(m + 1, 0.0);
            }
            coeffs[m] += c;
        }
        Self::from_coeffs(coeffs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("cosine series serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl Add for &CosineSeries {
    type Output = CosineSeries;
    fn add(self, rhs: &CosineSeries) -> CosineSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &CosineSeries {
    type Output = CosineSeries;
    fn sub(self, rhs: &CosineSeries) -> CosineSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<&CosineSeries> for f64 {
    type Output = CosineSeries;
    fn mul(self, rhs: &CosineSeries) -> CosineSeries {
        rhs.scaled(self)
    }
}

/// Values of a function at the `n = 2^ell` nodes `j / n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSamples {
    ell: u32,
    values: Vec<f64>,
}

impl GridSamples {
    pub fn new(ell: u32, values: Vec<f64>) -> Result<Self> {
        let n = grid_size(ell)?;
        if values.len() != n {
            return Err(Error::param(format!(
                "expected {n} samples for ell = {ell}, got {}",
                values.len()
            )));
        }
        Ok(Self { ell, values })
    }

    /// Samples `f` at `j / 2^ell`.
    pub fn from_fn(ell: u32, f: impl Fn(f64) -> f64) -> Result<Self> {
        let n = grid_size(ell)?;
        let values = (0..n).map(|j| f(j as f64 / n as f64)).collect();
        Ok(Self { ell, values })
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.values.len() as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn grid_size(ell: u32) -> Result<usize> {
    if ell > 40 {
        return Err(Error::param(format!("grid exponent {ell} is too large")));
    }
    Ok(1usize << ell)
}

/// Truncation knobs shared by the direct and spectral operators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalSpec {
    /// Kernel cutoff radius in units of the spacing.
    pub window_radius: f64,
    /// Spectral weights `psi_hat(k + m/n) <= eta` are skipped.
    pub eta: f64,
    /// Output frequency cap of [`qi_spectral`].
    pub max_freq: usize,
    /// Number of midpoint samples used by [`sup_norm_estimate`].
    pub eval_points: usize,
}

impl Default for EvalSpec {
    fn default() -> Self {
        Self {
            window_radius: 14.0,
            eta: 1e-40,
            max_freq: 1 << 16,
            eval_points: 8192,
        }
    }
}

impl EvalSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.window_radius >= 8.0) || !self.window_radius.is_finite() {
            return Err(Error::param("window radius must be a finite value >= 8"));
        }
        if !(self.eta >= 0.0 && self.eta <= 1e-20) {
            return Err(Error::param("eta must lie in [0, 1e-20]"));
        }
        if self.max_freq == 0 {
            return Err(Error::param("max_freq must be positive"));
        }
        if self.eval_points < 1024 {
            return Err(Error::param("eval_points must be at least 1024"));
        }
        Ok(())
    }

    /// Bound on the kernel mass outside the window relative to `sup |values|`:
    /// `2 sum_{r > R} psi(r)`.
    pub fn window_tail_bound(&self) -> f64 {
        let first = self.window_radius.floor() + 1.0;
        // psi(r + 1) / psi(r) <= exp(-r - 1/2), so the tail is dominated by
        // a geometric series from the first neglected shift.
        2.0 * psi(first) / (1.0 - (-first - 0.5).exp())
    }
}

/// `sum_m f_m cos(2 pi m x)`.
pub fn eval_series(f: &CosineSeries, x: f64) -> f64 {
    let x = x.rem_euclid(1.0);
    f.nonzero()
        .map(|(m, c)| c * (2.0 * PI * (m as f64) * x).cos())
        .sum()
}

/// Samples `f` on the `2^ell`-point grid.
pub fn sample(f: &CosineSeries, ell: u32) -> Result<GridSamples> {
    GridSamples::from_fn(ell, |x| eval_series(f, x))
}

/// `Q_h f(x) = sum_l f(h l) psi(x/h - l)` with `h = 1/n`, the samples
/// extended n-periodically and the sum restricted to `|x/h - l| <= R`.
pub fn qi_eval_direct(s: &GridSamples, x: f64, spec: &EvalSpec) -> f64 {
    let n = s.len();
    let u = x.rem_euclid(1.0) * n as f64;
    let lo = (u - spec.window_radius).ceil() as i64;
    let hi = (u + spec.window_radius).floor() as i64;
    (lo..=hi)
        .map(|l| s.values[l.rem_euclid(n as i64) as usize] * psi(u - l as f64))
        .sum()
}

/// Frequency-domain image of the quasi-interpolant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiInterpolant {
    pub series: CosineSeries,
    /// Absolute mass of the weights that landed above `max_freq`.
    pub spilled_mass: f64,
}

/// `Q_{1/n} f` with `n = 2^ell`, computed exactly from the cosine
/// coefficients: `Q_{1/n} c_m = sum_k psi_hat(k + m/n) c_{|m + n k|}`.
///
/// Weights not exceeding `spec.eta` are skipped; weights above
/// `spec.max_freq` are dropped and their absolute mass reported.
pub fn qi_spectral(f: &CosineSeries, ell: u32, spec: &EvalSpec) -> Result<QuasiInterpolant> {
    let n = grid_size(ell)? as i64;
    // psi_hat(u) > eta  <=>  |u| < reach
    let reach = if spec.eta > 0.0 {
        (-spec.eta.ln() / (2.0 * PI * PI)).sqrt()
    } else {
        // below this psi_hat underflows to zero anyway
        7.0
    };

    let mut out = vec![0.0; spec.max_freq.min(f.max_freq() + 8 * n as usize) + 1];
    let mut top = 0usize;
    let mut spilled = 0.0;
    for (m, c) in f.nonzero() {
        let t = m as f64 / n as f64;
        let k_lo = (-reach - t).ceil() as i64;
        let k_hi = (reach - t).floor() as i64;
        for k in k_lo..=k_hi {
            let w = psi_hat(k as f64 + t);
            if w <= spec.eta || w == 0.0 {
                continue;
            }
            let idx = (m as i64 + n * k).unsigned_abs() as usize;
            if idx > spec.max_freq {
                spilled += (c * w).abs();
                continue;
            }
            if idx >= out.len() {
                out.resize(idx + 1, 0.0);
            }
            out[idx] += c * w;
            top = top.max(idx);
        }
    }
    out.truncate(top + 1);
    Ok(QuasiInterpolant {
        series: CosineSeries::from_vec(out),
        spilled_mass: spilled,
    })
}

/// `sum_m |f_m|`, the Wiener norm restricted to even functions.
pub fn wiener_norm(f: &CosineSeries) -> f64 {
    f.coeffs.iter().map(|c| c.abs()).sum()
}

/// `max_j |f((j + 1/2) / N)|` over `N = spec.eval_points` offset points.
///
/// Cosines are read from a table of `cos(pi k / N)`, indexed by
/// `m (2j + 1) mod 2N`.
pub fn sup_norm_estimate(f: &CosineSeries, spec: &EvalSpec) -> f64 {
    let n = spec.eval_points.max(1);
    let period = 2 * n;
    let table: Vec<f64> = (0..period)
        .map(|k| (PI * k as f64 / n as f64).cos())
        .collect();
    let terms: Vec<(usize, f64)> = f.nonzero().map(|(m, c)| (m % period, c)).collect();
    if terms.is_empty() {
        return 0.0;
    }
    (0..n)
        .map(|j| {
            let odd = 2 * j + 1;
            terms
                .iter()
                .map(|&(m, c)| c * table[(m * odd) % period])
                .sum::<f64>()
                .abs()
        })
        .fold(0.0, f64::max)
}

/// Periodic Sobolev norm `(f_0^2 + sum_{k>=1} k^{2s} f_k^2)^{1/2}` in the
/// all-cosine convention, so that `|c_k|_s = k^s`.
pub fn sobolev_norm(f: &CosineSeries, s: f64) -> f64 {
    f.coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let w = if k == 0 {
                1.0
            } else {
                (k as f64).powf(2.0 * s)
            };
            w * c * c
        })
        .sum::<f64>()
        .sqrt()
}
