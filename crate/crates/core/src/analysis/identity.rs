//! Decomposition of the multilevel error for a high frequency
//! `m = 2^ell + n`, `0 <= n < 2^ell`, at unit level-one spacing.
//!
//! On the grid of spacing `2^{-j}` with `j <= ell` the cosine `c_m` aliases
//! to `c_{n mod 2^j}`, which gives, for `1 <= p <= ell + 1`,
//!
//! ```text
//! M_{1,p} c_m = c_m - sum_{j=0}^{p-1} M_{2^{-(j+1)}, p-1-j} Q_{2^{-j}} c_{n mod 2^j}
//! ```
//!
//! and for `p >= ell + 2`
//!
//! ```text
//! M_{1,p} c_m = M_{2^{-(ell+2)}, p-ell-2} (c_m - Q_{2^{-(ell+1)}} c_m)
//!             - sum_{j=0}^{ell} M_{2^{-(j+1)}, p-j-1} Q_{2^{-j}} c_{n mod 2^j}.
//! ```

use crate::multilevel::multilevel_residual;
use crate::spectral::{qi_spectral, CosineSeries, EvalSpec};
use crate::{Error, Result};

/// Both sides of the identity built with the spectral engine; returns the
/// largest coefficientwise difference.
pub fn highfreq_identity_check(ell: u32, n: u64, p: u32, spec: &EvalSpec) -> Result<f64> {
    if ell > 24 {
        return Err(Error::param("requires ell <= 24"));
    }
    if n >= 1u64 << ell {
        return Err(Error::param(format!(
            "requires n < 2^ell (got n = {n}, ell = {ell})"
        )));
    }
    if p == 0 || p > ell + 4 {
        return Err(Error::param(format!(
            "requires 1 <= p <= ell + 4 (got p = {p}, ell = {ell})"
        )));
    }
    spec.validate()?;
    let m = (1usize << ell) + n as usize;
    let cm = CosineSeries::cosine(m);
    let lhs = multilevel_residual(&cm, 0, p, spec)?;

    let aliased_term = |j: u32| -> Result<CosineSeries> {
        let alias = CosineSeries::cosine((n % (1u64 << j)) as usize);
        let q = qi_spectral(&alias, j, spec)?.series;
        multilevel_residual(&q, j + 1, p - 1 - j, spec)
    };

    let mut rhs = if p <= ell + 1 {
        cm
    } else {
        let q = qi_spectral(&cm, ell + 1, spec)?.series;
        multilevel_residual(&(&cm - &q), ell + 2, p - ell - 2, spec)?
    };
    for j in 0..p.min(ell + 1) {
        rhs = &rhs - &aliased_term(j)?;
    }
    Ok(lhs.max_abs_diff(&rhs))
}
