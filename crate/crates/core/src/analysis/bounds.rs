//! The `m_p` sequence and the assembled error bound for Sobolev targets.

use serde::{Deserialize, Serialize};

use crate::kernel::{bound_constants, psi_hat, CONTRACTION_RATE};
use crate::{Error, Result};

/// Upper limit of the explicit partial sum inside `C(t)`.
const C_PARTIAL_SUM_END: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MpVariant {
    /// `prod_{j=0}^{p-1} (1 - 2 psi_hat(2^-j)) * (1 - psi_hat(2^-p))`.
    AsPrinted,
    /// `prod_{j=1}^{p} (1 - psi_hat(2^-j))`.
    TableConsistent,
}

impl std::str::FromStr for MpVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "as-printed" => Ok(MpVariant::AsPrinted),
            "table-consistent" => Ok(MpVariant::TableConsistent),
            other => Err(Error::param(format!("unknown m_p variant `{other}`"))),
        }
    }
}

/// `m_1, ..., m_P`.
pub fn mp_sequence(levels: u32, variant: MpVariant) -> Result<Vec<f64>> {
    if levels == 0 {
        return Err(Error::param("m_p needs at least one level"));
    }
    let inv_pow2 = |j: u32| (-f64::from(j)).exp2();
    Ok(match variant {
        MpVariant::TableConsistent => (1..=levels)
            .scan(1.0, |acc, j| {
                *acc *= 1.0 - psi_hat(inv_pow2(j));
                Some(*acc)
            })
            .collect(),
        MpVariant::AsPrinted => (1..=levels)
            .map(|p| {
                let head: f64 = (0..p).map(|j| 1.0 - 2.0 * psi_hat(inv_pow2(j))).product();
                head * (1.0 - psi_hat(inv_pow2(p)))
            })
            .collect(),
    })
}

/// Components of the bound on `||M_{1,p} f||` for `f` in the Sobolev space
/// of order `s`. The three terms already include the factor `||f||_s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoremBound {
    pub c_t: f64,
    pub d_s: f64,
    /// `31 B (1 + D(s)) 0.9^p ||f||_s`: low frequencies.
    pub low: f64,
    /// `C(t) A^p 2^{-(p-2)(s-t)} ||f||_s`: high-frequency tail.
    pub tail: f64,
    /// `(2/sqrt 3) p^{3/2} A^p eps ||f||_s`: accumulated remainders.
    pub remainder: f64,
    pub total: f64,
}

/// `C(t) = (sum_{k >= 2^{p-2}} k^{-2t})^{1/2}`: an explicit partial sum to
/// `max(10^6, 2^{p-2})`, then the integral bound on the rest.
pub fn c_of_t(t: f64, p: u32) -> f64 {
    let start = 1u64 << (p - 2);
    let end = start.max(C_PARTIAL_SUM_END);
    let partial: f64 = (start..=end).rev().map(|k| (k as f64).powf(-2.0 * t)).sum();
    let tail = (end as f64).powf(1.0 - 2.0 * t) / (2.0 * t - 1.0);
    (partial + tail).sqrt()
}

/// `D(s) = (sum_{l=0}^{p-3} 0.9^{-2l-4} 2^{-2l(s-1/2)})^{1/2}`.
pub fn d_of_s(s: f64, p: u32) -> f64 {
    let r = CONTRACTION_RATE;
    (0..=p - 3)
        .map(|l| {
            let l = f64::from(l);
            r.powf(-2.0 * l - 4.0) * (-2.0 * l * (s - 0.5)).exp2()
        })
        .sum::<f64>()
        .sqrt()
}

pub fn theorem_bound(s: f64, t: f64, p: u32, f_norm_s: f64, big_b: f64) -> Result<TheoremBound> {
    if !(s >= 1.0) || !s.is_finite() {
        return Err(Error::param("requires s >= 1"));
    }
    if !(t > 0.5 && t < s) {
        return Err(Error::param("requires 1/2 < t < s"));
    }
    if !(3..=60).contains(&p) {
        return Err(Error::param("requires 3 <= p <= 60"));
    }
    if !(f_norm_s >= 0.0) || !f_norm_s.is_finite() {
        return Err(Error::param("requires a finite norm ||f||_s >= 0"));
    }
    if !(big_b > 0.0) || !big_b.is_finite() {
        return Err(Error::param("requires B > 0"));
    }
    let c = bound_constants();
    let big_a_p = c.error_norm.powi(p as i32);
    let c_t = c_of_t(t, p);
    let d_s = d_of_s(s, p);
    let pf = f64::from(p);
    let low = 31.0 * big_b * (1.0 + d_s) * CONTRACTION_RATE.powi(p as i32) * f_norm_s;
    let tail = c_t * big_a_p * (-(pf - 2.0) * (s - t)).exp2() * f_norm_s;
    let remainder = 2.0 / 3f64.sqrt() * pf.powf(1.5) * big_a_p * c.epsilon * f_norm_s;
    Ok(TheoremBound {
        c_t,
        d_s,
        low,
        tail,
        remainder,
        total: low + tail + remainder,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_terms_of_mp() {
        let m = mp_sequence(2, MpVariant::TableConsistent).unwrap();
        assert_eq!(m[0], 1.0 - psi_hat(0.5));
        assert_eq!(m[1], m[0] * (1.0 - psi_hat(0.25)));
        let printed = mp_sequence(1, MpVariant::AsPrinted).unwrap();
        assert_eq!(
            printed[0],
            (1.0 - 2.0 * psi_hat(1.0)) * (1.0 - psi_hat(0.5))
        );
        assert!(mp_sequence(0, MpVariant::AsPrinted).is_err());
    }

    #[test]
    fn parameter_ranges() {
        assert!(theorem_bound(1.0, 0.4, 5, 1.0, 10.0).is_err());
        assert!(theorem_bound(2.0, 2.0, 5, 1.0, 10.0).is_err());
        assert!(theorem_bound(0.9, 0.7, 5, 1.0, 10.0).is_err());
        assert!(theorem_bound(3.0, 1.0, 2, 1.0, 10.0).is_err());
        assert!(theorem_bound(3.0, 1.0, 5, 1.0, 0.0).is_err());
        let e = theorem_bound(1.0, 0.4, 5, 1.0, 10.0).unwrap_err();
        assert!(e.to_string().contains("requires 1/2 < t < s"));
    }

    #[test]
    fn d_has_one_term_at_p3() {
        assert!((d_of_s(2.0, 3) - CONTRACTION_RATE.powi(-2)).abs() < 1e-15);
    }

    #[test]
    fn total_is_sum_of_parts() {
        let b = theorem_bound(3.0, 1.0, 10, 2.0, 10.0).unwrap();
        assert_eq!(b.total, b.low + b.tail + b.remainder);
    }
}
