//! Multilevel refinement: at level `p` the residual of the previous levels is
//! quasi-interpolated at spacing `h / 2^{p-1}` and subtracted, so that the
//! level-`p` residual is `M_{h,p} f = E_{h/2^{p-1}} M_{h,p-1} f` with
//! `E_h = I - Q_h`.

use serde::{Deserialize, Serialize};

use crate::spectral::{
    eval_series, qi_eval_direct, qi_spectral, sup_norm_estimate, wiener_norm, CosineSeries,
    EvalSpec, GridSamples,
};
use crate::{Error, Result};

/// Sup errors at or below this are dominated by double-precision roundoff.
pub const ROUNDOFF_FLOOR: f64 = 1e-13;

/// Largest grid exponent `ell0 + levels - 1` accepted by the sampled driver.
pub const MAX_SAMPLED_EXPONENT: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Spectral,
    Sampled,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(Mode::Spectral),
            "sampled" => Ok(Mode::Sampled),
            other => Err(Error::param(format!(
                "unknown mode `{other}` (expected spectral or sampled)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Level-one spacing is `h = 2^{-ell0}`.
    pub ell0: u32,
    pub levels: u32,
    pub mode: Mode,
    pub spec: EvalSpec,
    /// Stop after the first level whose sup error falls below this value.
    pub stop_below: Option<f64>,
}

impl RunConfig {
    pub fn new(ell0: u32, levels: u32, mode: Mode) -> Self {
        Self {
            ell0,
            levels,
            mode,
            spec: EvalSpec::default(),
            stop_below: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels == 0 {
            return Err(Error::param("levels must be at least 1"));
        }
        if self.ell0 > 30 || self.levels > 40 {
            return Err(Error::param("ell0 or levels out of range"));
        }
        if let Some(t) = self.stop_below {
            if !(t >= 0.0) {
                return Err(Error::param("stop threshold must be nonnegative"));
            }
        }
        self.spec.validate()
    }

    fn grid_exponent(&self, p: u32) -> u32 {
        self.ell0 + p - 1
    }
}

/// Per-level outcome of a multilevel run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub p: u32,
    /// `h / 2^{p-1}`.
    pub spacing: f64,
    pub sup_error: f64,
    /// Wiener norm of the residual (spectral mode).
    pub wiener_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<CosineSeries>,
    /// Weight mass dropped above `max_freq`, accumulated over levels.
    pub spilled_mass: f64,
    pub roundoff_dominated: bool,
}

impl LevelReport {
    fn new(p: u32, spacing: f64, sup_error: f64) -> Self {
        Self {
            p,
            spacing,
            sup_error,
            wiener_error: None,
            residual: None,
            spilled_mass: 0.0,
            roundoff_dominated: sup_error <= ROUNDOFF_FLOOR,
        }
    }
}

/// `M_{2^{-ell0}, levels} f` as a cosine series; `levels = 0` returns `f`.
pub fn multilevel_residual(
    f: &CosineSeries,
    ell0: u32,
    levels: u32,
    spec: &EvalSpec,
) -> Result<CosineSeries> {
    let mut r = f.clone();
    for p in 1..=levels {
        let q = qi_spectral(&r, ell0 + p - 1, spec)?;
        r = &r - &q.series;
    }
    Ok(r)
}

/// Multilevel run carried out exactly on cosine coefficients.
pub fn multilevel_spectral(f: &CosineSeries, cfg: &RunConfig) -> Result<Vec<LevelReport>> {
    cfg.validate()?;
    let mut residual = f.clone();
    let mut spilled = 0.0;
    let mut reports = Vec::with_capacity(cfg.levels as usize);
    for p in 1..=cfg.levels {
        let ell = cfg.grid_exponent(p);
        let q = qi_spectral(&residual, ell, &cfg.spec)?;
        residual = &residual - &q.series;
        spilled += q.spilled_mass;

        let mut report = LevelReport::new(
            p,
            (-f64::from(ell)).exp2(),
            sup_norm_estimate(&residual, &cfg.spec),
        );
        report.wiener_error = Some(wiener_norm(&residual));
        report.spilled_mass = spilled;
        report.residual = Some(residual.clone());
        let stop = cfg.stop_below.is_some_and(|t| report.sup_error < t);
        reports.push(report);
        if stop {
            break;
        }
    }
    Ok(reports)
}

/// Multilevel run that only sees `f` through point evaluations.
///
/// The approximant is kept as the list of per-level sample vectors; it is
/// evaluated with [`qi_eval_direct`] at each new grid and, incrementally, on
/// the offset evaluation grid used for the sup error.
pub fn multilevel_sampled(f: impl Fn(f64) -> f64, cfg: &RunConfig) -> Result<Vec<LevelReport>> {
    cfg.validate()?;
    if cfg.grid_exponent(cfg.levels) > MAX_SAMPLED_EXPONENT {
        return Err(Error::param(format!(
            "sampled mode supports grids up to 2^{MAX_SAMPLED_EXPONENT} nodes"
        )));
    }
    let spec = &cfg.spec;
    let n_eval = spec.eval_points;
    let eval_x: Vec<f64> = (0..n_eval)
        .map(|j| (j as f64 + 0.5) / n_eval as f64)
        .collect();
    let f_eval: Vec<f64> = eval_x.iter().map(|&x| f(x)).collect();
    let mut approx_eval = vec![0.0; n_eval];

    let mut levels: Vec<GridSamples> = Vec::new();
    let mut reports = Vec::with_capacity(cfg.levels as usize);
    for p in 1..=cfg.levels {
        let ell = cfg.grid_exponent(p);
        let residual = GridSamples::from_fn(ell, |x| {
            f(x) - levels
                .iter()
                .map(|s| qi_eval_direct(s, x, spec))
                .sum::<f64>()
        })?;
        for (a, &x) in approx_eval.iter_mut().zip(&eval_x) {
            *a += qi_eval_direct(&residual, x, spec);
        }
        levels.push(residual);

        let sup = f_eval
            .iter()
            .zip(&approx_eval)
            .map(|(fx, ax)| (fx - ax).abs())
            .fold(0.0, f64::max);
        let report = LevelReport::new(p, (-f64::from(ell)).exp2(), sup);
        let stop = cfg.stop_below.is_some_and(|t| report.sup_error < t);
        reports.push(report);
        if stop {
            break;
        }
    }
    Ok(reports)
}

/// Runs `f` in the mode selected by `cfg`. Sampled mode evaluates the
/// series pointwise.
pub fn run_multilevel(f: &CosineSeries, cfg: &RunConfig) -> Result<Vec<LevelReport>> {
    match cfg.mode {
        Mode::Spectral => multilevel_spectral(f, cfg),
        Mode::Sampled => multilevel_sampled(|x| eval_series(f, x), cfg),
    }
}

/// `sup_error_p / sup_error_{p-1}` for consecutive reports; `None` where the
/// previous level's error is zero.
pub fn decay_ratios(reports: &[LevelReport]) -> Result<Vec<Option<f64>>> {
    if reports.len() < 2 {
        return Err(Error::param("decay ratios need at least two levels"));
    }
    Ok(reports
        .windows(2)
        .map(|w| (w[0].sup_error > 0.0).then(|| w[1].sup_error / w[0].sup_error))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::psi_hat;

    fn report(e: f64) -> LevelReport {
        LevelReport::new(1, 1.0, e)
    }

    #[test]
    fn ratios_of_geometric_sequence() {
        let r = decay_ratios(&[report(1.0), report(0.5), report(0.25)]).unwrap();
        assert_eq!(r, vec![Some(0.5), Some(0.5)]);
        let r = decay_ratios(&[report(0.0), report(0.5)]).unwrap();
        assert_eq!(r, vec![None]);
        assert!(decay_ratios(&[report(1.0)]).is_err());
        assert!(decay_ratios(&[]).is_err());
    }

    #[test]
    fn zero_levels_rejected() {
        let cfg = RunConfig::new(0, 0, Mode::Spectral);
        assert!(multilevel_spectral(&CosineSeries::cosine(1), &cfg).is_err());
    }

    #[test]
    fn first_level_of_c1_at_unit_spacing() {
        // on the integers c_1 is sampled as the constant 1
        let cfg = RunConfig::new(0, 1, Mode::Spectral);
        let rep = &multilevel_spectral(&CosineSeries::cosine(1), &cfg).unwrap()[0];
        let r = rep.residual.as_ref().unwrap();
        assert_eq!(r.coefficient(0), -1.0);
        assert!((r.coefficient(1) - (1.0 - 2.0 * psi_hat(1.0))).abs() < 1e-15);
        assert!((rep.sup_error - 2.0).abs() < 1e-6);
        assert_eq!(rep.spacing, 1.0);
    }

    #[test]
    fn stop_threshold_ends_run() {
        let mut cfg = RunConfig::new(1, 10, Mode::Spectral);
        cfg.stop_below = Some(1e-3);
        let reps = multilevel_spectral(&CosineSeries::cosine(1), &cfg).unwrap();
        assert!(reps.len() < 10);
        assert!(reps.last().unwrap().sup_error < 1e-3);
    }

    #[test]
    fn mode_parses() {
        assert_eq!("sampled".parse::<Mode>().unwrap(), Mode::Sampled);
        assert!("other".parse::<Mode>().is_err());
    }
}
