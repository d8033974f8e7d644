//! Truncation coefficients of the multilevel error of a low-frequency cosine.
//!
//! For `h = 2^{-ell}` and `m < 2^{ell-1}` the level-`p` error `M_{h,p} c_m`
//! is, up to a remainder far below double precision, the finite sum
//!
//! ```text
//! T_{h,p} c_m = sum_{j < 2^p} alpha_bar_j c_{m - (2^p - j)/h} + alpha_j c_{m + j/h}.
//! ```

use serde::Serialize;

use crate::kernel::{bound_constants, psi_hat};
use crate::multilevel::{multilevel_spectral, Mode, RunConfig};
use crate::spectral::{CosineSeries, EvalSpec};
use crate::{Error, Result};

/// Arrays have `2^p` entries, so the recursion is capped here.
pub const MAX_TRUNCATION_LEVELS: u32 = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationState {
    pub p: u32,
    pub m: u64,
    pub ell: u32,
    /// Coefficient of `c_{m - (2^p - j) 2^ell}`.
    pub alpha_bar: Vec<f64>,
    /// Coefficient of `c_{m + j 2^ell}`.
    pub alpha: Vec<f64>,
    /// Bound `p A^{p-1} eps` on the neglected remainder.
    pub remainder_budget: f64,
}

fn check_frequency(m: u64, ell: u32) -> Result<()> {
    if !(2..=40).contains(&ell) {
        return Err(Error::param(format!(
            "requires 2 <= ell <= 40 (got ell = {ell})"
        )));
    }
    if m >= 1u64 << (ell - 1) {
        return Err(Error::FrequencyOutOfRange { m, ell });
    }
    Ok(())
}

impl TruncationState {
    /// `M_{h,0} c_m = c_m`. One [`step`](Self::step) from here yields the
    /// level-one coefficients.
    pub fn level_zero(m: u64, ell: u32) -> Result<Self> {
        check_frequency(m, ell)?;
        Ok(Self {
            p: 0,
            m,
            ell,
            alpha_bar: vec![0.0],
            alpha: vec![1.0],
            remainder_budget: 0.0,
        })
    }

    /// `hm = m / 2^ell`.
    pub fn hm(&self) -> f64 {
        self.m as f64 / (1u64 << self.ell) as f64
    }

    /// Level `p + 1` from level `p`. With `s = alpha_bar_j + alpha_j` and
    /// `x = (hm + j) / 2^p`:
    ///
    /// ```text
    /// alpha_bar_j       <- -s psi_hat(x - 2)
    /// alpha_bar_{2^p+j} <- alpha_bar_j - s psi_hat(x - 1)
    /// alpha_j           <- alpha_j - s psi_hat(x)
    /// alpha_{2^p+j}     <- -s psi_hat(x + 1)
    /// ```
    pub fn step(&self) -> Self {
        let n = self.alpha.len();
        let scale = n as f64;
        let hm = self.hm();
        let mut alpha_bar = vec![0.0; 2 * n];
        let mut alpha = vec![0.0; 2 * n];
        for j in 0..n {
            let s = self.alpha_bar[j] + self.alpha[j];
            let x = (hm + j as f64) / scale;
            alpha_bar[j] = -s * psi_hat(x - 2.0);
            alpha_bar[n + j] = self.alpha_bar[j] - s * psi_hat(x - 1.0);
            alpha[j] = self.alpha[j] - s * psi_hat(x);
            alpha[n + j] = -s * psi_hat(x + 1.0);
        }
        let c = bound_constants();
        let p = self.p + 1;
        Self {
            p,
            m: self.m,
            ell: self.ell,
            alpha_bar,
            alpha,
            remainder_budget: f64::from(p) * c.error_norm.powi(p as i32 - 1) * c.epsilon,
        }
    }

    /// `S_j = |alpha_bar_j| + |alpha_j|`.
    pub fn pair_sum(&self, j: usize) -> f64 {
        self.alpha_bar[j].abs() + self.alpha[j].abs()
    }

    /// Places the coefficients at their (folded) cosine frequencies.
    pub fn to_series(&self) -> CosineSeries {
        let n = 1u64 << self.ell;
        let len = self.alpha.len() as u64;
        let top = (self.m + (len - 1) * n).max(len * n - self.m);
        let mut coeffs = vec![0.0; top as usize + 1];
        for j in 0..len {
            let below = (self.m as i64 - ((len - j) * n) as i64).unsigned_abs();
            coeffs[below as usize] += self.alpha_bar[j as usize];
            coeffs[(self.m + j * n) as usize] += self.alpha[j as usize];
        }
        CosineSeries::from_coeffs(coeffs).expect("finite coefficients")
    }
}

/// The level-one state.
pub fn init_truncation(m: u64, ell: u32) -> Result<TruncationState> {
    Ok(TruncationState::level_zero(m, ell)?.step())
}

/// `sum_j |alpha_bar_j| + |alpha_j|`.
pub fn truncation_norm(s: &TruncationState) -> f64 {
    s.alpha_bar.iter().chain(&s.alpha).map(|c| c.abs()).sum()
}

/// States for `p = 0..=levels`.
pub(crate) fn truncation_states(m: u64, ell: u32, levels: u32) -> Result<Vec<TruncationState>> {
    if levels > MAX_TRUNCATION_LEVELS {
        return Err(Error::param(format!(
            "at most {MAX_TRUNCATION_LEVELS} truncation levels are supported"
        )));
    }
    let mut states = vec![TruncationState::level_zero(m, ell)?];
    for _ in 0..levels {
        let next = states.last().expect("nonempty").step();
        states.push(next);
    }
    Ok(states)
}

/// Largest coefficientwise difference between `T_{h,p} c_m` and the spectral
/// residual `M_{h,p} c_m`, for each `p = 1..=levels`.
pub fn truncation_discrepancies(
    m: u64,
    ell: u32,
    levels: u32,
    spec: &EvalSpec,
) -> Result<Vec<f64>> {
    if levels == 0 {
        return Err(Error::param("levels must be at least 1"));
    }
    let states = truncation_states(m, ell, levels)?;
    let cfg = RunConfig {
        spec: *spec,
        ..RunConfig::new(ell, levels, Mode::Spectral)
    };
    let reports = multilevel_spectral(&CosineSeries::cosine(m as usize), &cfg)?;
    Ok(reports
        .iter()
        .zip(&states[1..])
        .map(|(r, s)| {
            let residual = r
                .residual
                .as_ref()
                .expect("spectral reports carry residuals");
            residual.max_abs_diff(&s.to_series())
        })
        .collect())
}

/// Maximum of [`truncation_discrepancies`] over all levels.
pub fn verify_truncation(m: u64, ell: u32, levels: u32, spec: &EvalSpec) -> Result<f64> {
    Ok(truncation_discrepancies(m, ell, levels, spec)?
        .into_iter()
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_one_coefficients() {
        let s = init_truncation(1, 2).unwrap();
        assert_eq!(s.p, 1);
        assert_eq!(
            s.alpha_bar,
            vec![-psi_hat(0.25 - 2.0), -psi_hat(0.25 - 1.0)]
        );
        assert_eq!(s.alpha, vec![1.0 - psi_hat(0.25), -psi_hat(1.25)]);
        assert_eq!(s.remainder_budget, bound_constants().epsilon);
    }

    #[test]
    fn constant_is_reproduced_at_level_one() {
        assert_eq!(init_truncation(0, 2).unwrap().alpha[0], 0.0);
    }

    #[test]
    fn frequency_range_enforced() {
        assert_eq!(
            init_truncation(4, 3),
            Err(Error::FrequencyOutOfRange { m: 4, ell: 3 })
        );
        assert!(init_truncation(3, 3).is_ok());
        assert!(init_truncation(0, 1).is_err());
    }

    #[test]
    fn lengths_double() {
        let s = init_truncation(1, 2).unwrap().step().step();
        assert_eq!((s.p, s.alpha.len(), s.alpha_bar.len()), (3, 8, 8));
    }

    #[test]
    fn series_layout() {
        let s = init_truncation(1, 2).unwrap();
        let f = s.to_series();
        // frequencies |1 - 8| = 7, |1 - 4| = 3, 1, 5
        assert_eq!(f.coefficient(7), s.alpha_bar[0]);
        assert_eq!(f.coefficient(3), s.alpha_bar[1]);
        assert_eq!(f.coefficient(1), s.alpha[0]);
        assert_eq!(f.coefficient(5), s.alpha[1]);
    }

    #[test]
    fn too_many_levels() {
        assert!(verify_truncation(1, 2, 9, &EvalSpec::default()).is_err());
    }
}
