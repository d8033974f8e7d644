//! Gaussian kernel, its Fourier transform, Jacobi theta functions and the
//! constants used by the convergence analysis.
//!
//! Everything here is a pure function of its arguments. Constants are
//! evaluated at call time from [`psi_hat`] rather than stored as literals.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dd::Dd;
use crate::{Error, Result};

/// Default cutoff for series and product truncation.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-30;

/// Relaxed form of `mu_a` used in the three-term truncation recursion.
pub const MU_A_RELAXED: f64 = 0.0072;

/// Relaxed form of `mu_b + mu_c` used in the three-term truncation recursion.
pub const MU_BC_RELAXED: f64 = 0.711;

/// Per-level contraction rate of the truncation norm.
pub const CONTRACTION_RATE: f64 = 0.9;

/// The Gaussian `psi(x) = exp(-x^2 / 2) / sqrt(2 pi)`.
pub fn psi(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Fourier transform of [`psi`]: `exp(-2 pi^2 t^2)`.
///
/// Underflows to exactly `0.0` once `|t|` exceeds about 6; callers treat a
/// zero weight as valid.
pub fn psi_hat(t: f64) -> f64 {
    (-2.0 * PI * PI * t * t).exp()
}

/// The nome `e^{-1/2}` for which `theta3(pi t, q) / sqrt(2 pi)` is the
/// periodized Fourier sum of the kernel.
pub fn gaussian_nome() -> f64 {
    (-0.5f64).exp()
}

/// A truncated theta evaluation together with a bound on what was dropped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaEval {
    pub value: f64,
    /// Upper bound on the neglected tail (absolute for the series, relative
    /// for the product).
    pub tail_bound: f64,
    /// Number of terms or factors used.
    pub terms: usize,
}

fn check_nome(q: f64) -> Result<()> {
    if q.is_finite() && q.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidNome(q))
    }
}

/// `theta3(z, q) = 1 + 2 sum_{l>=1} q^{l^2} cos(2 l z)` by direct summation.
pub fn theta3_series(z: f64, q: f64) -> Result<f64> {
    theta3_series_with(z, q, DEFAULT_TAIL_TOLERANCE).map(|t| t.value)
}

/// Series evaluation with an explicit tail tolerance.
///
/// Terms are accumulated in double-double so that values far below the size
/// of the individual terms (e.g. `z` near `pi/2` with `q` close to one) keep
/// full relative accuracy.
pub fn theta3_series_with(z: f64, q: f64, tol: f64) -> Result<ThetaEval> {
    check_nome(q)?;
    if q == 0.0 {
        return Ok(ThetaEval {
            value: 1.0,
            tail_bound: 0.0,
            terms: 1,
        });
    }
    // theta3 is pi-periodic in z
    let z = z.rem_euclid(PI);
    let (sin2z, cos2z) = Dd::sin_cos(2.0 * z);

    let q_sq = Dd::product(q, q);
    let mut q_odd = Dd::new(q); // q^{2l-1}
    let mut q_pow = Dd::new(q); // q^{l^2}
    let (mut cos_l, mut sin_l) = (cos2z, sin2z);
    let mut sum = Dd::ZERO;
    let mut l = 1usize;
    while q_pow.abs_hi() >= tol {
        sum = sum + q_pow * cos_l;
        let next_cos = cos_l * cos2z - sin_l * sin2z;
        sin_l = sin_l * cos2z + cos_l * sin2z;
        cos_l = next_cos;
        q_odd = q_odd * q_sq;
        q_pow = q_pow * q_odd;
        l += 1;
    }
    // remaining terms k >= l satisfy |q|^{k^2} <= |q|^{l^2} |q|^{2l (k-l)}
    let ratio = q.abs().powi(2 * l as i32);
    let tail_bound = 2.0 * q_pow.abs_hi() / (1.0 - ratio);
    Ok(ThetaEval {
        value: (Dd::ONE + sum + sum).to_f64(),
        tail_bound,
        terms: l,
    })
}

/// `theta3(z, q)` from the product representation
/// `prod_{l>=1} (1 + 2 q^{2l-1} cos 2z + q^{4l-2}) (1 - q^{2l})`.
pub fn theta3_product(z: f64, q: f64) -> Result<f64> {
    theta3_product_with(z, q, DEFAULT_TAIL_TOLERANCE).map(|t| t.value)
}

/// Product evaluation with an explicit tail tolerance.
pub fn theta3_product_with(z: f64, q: f64, tol: f64) -> Result<ThetaEval> {
    check_nome(q)?;
    let (sz, cz) = z.sin_cos();
    let cos2z_negative = cz * cz < sz * sz;
    // 1 + 2a cos 2z + a^2 written without cancellation on either half-period
    let first = |a: f64| {
        if cos2z_negative {
            (1.0 - a) * (1.0 - a) + 4.0 * a * cz * cz
        } else {
            (1.0 + a) * (1.0 + a) - 4.0 * a * sz * sz
        }
    };

    let q_sq = q * q;
    let mut odd = q; // q^{2l-1}
    let mut even = q_sq; // q^{2l}
    let mut value = 1.0;
    let mut terms = 0usize;
    loop {
        value *= first(odd) * (1.0 - even);
        terms += 1;
        let step = 2.0 * odd.abs() + odd * odd + even.abs();
        odd *= q_sq;
        even *= q_sq;
        if step < tol || odd == 0.0 {
            break;
        }
    }
    let next = 2.0 * odd.abs() + odd * odd + even.abs();
    Ok(ThetaEval {
        value,
        tail_bound: next / (1.0 - q_sq),
        terms,
    })
}

/// `E(t) = sum_l psi_hat(l + t)`, summed directly.
pub fn periodized_sum_e(t: f64) -> f64 {
    let r = t.rem_euclid(1.0);
    // smallest terms first; beyond |l + r| > 7 every term underflows
    let mut terms: Vec<f64> = (-8..=8).map(|l| psi_hat(f64::from(l) + r)).collect();
    terms.sort_by(|a, b| a.total_cmp(b));
    terms.iter().sum()
}

/// `E(t)` via Poisson summation: `theta3(pi t, e^{-1/2}) / sqrt(2 pi)`.
pub fn periodized_sum_e_theta(t: f64) -> f64 {
    let r = t.rem_euclid(1.0);
    theta3_product(PI * r, gaussian_nome()).expect("gaussian nome is inside the unit disc")
        / (2.0 * PI).sqrt()
}

/// Constants of the convergence analysis, each evaluated from [`psi_hat`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    /// Bound on the Wiener norm of the quasi-interpolation operator,
    /// `1 + 3 psi_hat(1)`.
    pub qi_norm: f64,
    /// Bound on the Wiener norm of the error operator, `1 + qi_norm`.
    pub error_norm: f64,
    /// Remainder tolerance `2 psi_hat(2)`.
    pub epsilon: f64,
    /// `psi_hat(1/2) + psi_hat(1)`: mid-range coefficients, two levels back.
    pub mu_a: f64,
    /// `mu_a + psi_hat(1/4) (psi_hat(sqrt 2) + psi_hat(1))`.
    pub mu_b: f64,
    /// Low-frequency coefficients, three levels back.
    pub mu_c: f64,
    /// `mu_b + mu_c`.
    pub mu_bc: f64,
}

pub fn bound_constants() -> BoundConstants {
    let ph1 = psi_hat(1.0);
    let qi_norm = 1.0 + 3.0 * ph1;
    let mu_a = psi_hat(0.5) + ph1;
    let mu_b = mu_a + psi_hat(0.25) * (psi_hat(2f64.sqrt()) + ph1);
    let mu_c = (1.0 - psi_hat(0.25)) * (1.0 + ph1 - psi_hat(0.5)) + psi_hat(1.5) * (1.0 + ph1);
    BoundConstants {
        qi_norm,
        error_norm: 1.0 + qi_norm,
        epsilon: 2.0 * psi_hat(2.0),
        mu_a,
        mu_b,
        mu_c,
        mu_bc: mu_b + mu_c,
    }
}

impl BoundConstants {
    /// Whether `psi_hat(1) r^2 + 0.0072 r + 0.711 <= r^3` at `r = 0.9`, which
    /// turns the three-term recursion into a geometric envelope.
    pub fn recursion_closes(&self) -> bool {
        let r = CONTRACTION_RATE;
        psi_hat(1.0) * r * r + MU_A_RELAXED * r + MU_BC_RELAXED <= r * r * r
    }

    /// The published inequalities on the constants.
    pub fn invariants_hold(&self) -> bool {
        psi_hat(1.0) < 3e-9
            && self.mu_a < MU_A_RELAXED
            && self.mu_bc < MU_BC_RELAXED
            && self.recursion_closes()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_is_even_and_normalised_at_zero() {
        assert_eq!(psi(0.0), 1.0 / (2.0 * PI).sqrt());
        assert_eq!(psi(1.0), psi(-1.0));
        assert!(psi(30.0) >= 0.0);
    }

    #[test]
    fn psi_hat_range() {
        assert_eq!(psi_hat(0.0), 1.0);
        assert_eq!(psi_hat(0.3), psi_hat(-0.3));
        assert_eq!(psi_hat(10.0), 0.0);
    }

    #[test]
    fn rejects_nome_outside_disc() {
        assert_eq!(theta3_series(0.0, 1.0), Err(Error::InvalidNome(1.0)));
        assert_eq!(theta3_product(0.0, -1.5), Err(Error::InvalidNome(-1.5)));
        assert!(theta3_series(0.0, f64::NAN).is_err());
    }

    #[test]
    fn zero_nome_gives_one() {
        for z in [0.0, 0.3, 2.0, -5.0] {
            assert_eq!(theta3_series(z, 0.0).unwrap(), 1.0);
            assert_eq!(theta3_product(z, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn series_tail_bound_is_below_tolerance() {
        let t = theta3_series_with(0.4, 0.9, 1e-30).unwrap();
        assert!(t.tail_bound < 1e-29);
        assert!(t.terms > 20);
    }

    #[test]
    fn e_theta_agrees_with_direct_sum_at_extremes() {
        for t in [0.0, 0.5] {
            let d = periodized_sum_e(t);
            let th = periodized_sum_e_theta(t);
            assert!((d - th).abs() <= 1e-14 * d, "t={t}: {d} vs {th}");
        }
    }

    #[test]
    fn constants_close_the_recursion() {
        let c = bound_constants();
        assert!(c.recursion_closes());
        assert!(c.invariants_hold());
        assert_eq!(c.error_norm, 1.0 + c.qi_norm);
        assert_eq!(c.mu_bc, c.mu_b + c.mu_c);
        // E(0) <= a
        assert!(periodized_sum_e(0.0) <= c.qi_norm);
    }
}
