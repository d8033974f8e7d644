//! Scans of the coefficientwise lemma inequalities and the three-term norm
//! recursion over every admissible `(p, j)`.
//!
//! Right-hand sides use `S_{q,j} = |alpha_bar_j^(q)| + |alpha_j^(q)|`.
//! Level `p` is compared with level `p - 1` (L3), `p - 2` (L4) and `p - 3`
//! (L5, L6); the level-zero state `alpha = [1]` is included so that L3 covers
//! the start coefficients.

use serde::Serialize;

use super::truncation::{truncation_norm, truncation_states, TruncationState};
use crate::kernel::{bound_constants, psi_hat, MU_A_RELAXED, MU_BC_RELAXED};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LemmaFamily {
    L3,
    L4,
    L5,
    L6,
    #[serde(rename = "T1-recursion")]
    T1Recursion,
}

impl LemmaFamily {
    pub const ALL: [LemmaFamily; 5] = [
        LemmaFamily::L3,
        LemmaFamily::L4,
        LemmaFamily::L5,
        LemmaFamily::L6,
        LemmaFamily::T1Recursion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaFamily::L3 => "L3",
            LemmaFamily::L4 => "L4",
            LemmaFamily::L5 => "L5",
            LemmaFamily::L6 => "L6",
            LemmaFamily::T1Recursion => "T1-recursion",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub p: u32,
    /// Index into the earlier level, absent for norm inequalities.
    pub j: Option<usize>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundScanReport {
    pub family: LemmaFamily,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl BoundScanReport {
    fn new(family: LemmaFamily) -> Self {
        Self {
            family,
            checked: 0,
            violations: Vec::new(),
        }
    }

    fn check(&mut self, p: u32, j: Option<usize>, lhs: f64, rhs: f64) {
        self.checked += 1;
        if lhs > rhs {
            self.violations.push(Violation { p, j, lhs, rhs });
        }
    }

    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs all five families for `c_m` at `h = 2^{-ell}` up to level `levels`.
pub fn scan_lemma_bounds(m: u64, ell: u32, levels: u32) -> Result<Vec<BoundScanReport>> {
    let states = truncation_states(m, ell, levels)?;
    let c = bound_constants();
    let ph1 = psi_hat(1.0);
    let mut reports: Vec<BoundScanReport> = LemmaFamily::ALL
        .iter()
        .map(|&f| BoundScanReport::new(f))
        .collect();
    let norms: Vec<f64> = states.iter().map(truncation_norm).collect();

    for p in 1..=levels {
        let cur = &states[p as usize];
        let back = |k: u32| -> &TruncationState { &states[(p - k) as usize] };
        let half = 1usize << (p - 1);

        for j in 0..half {
            let rhs = ph1 * back(1).pair_sum(j);
            reports[0].check(p, Some(j), cur.alpha_bar[j].abs(), rhs);
            reports[0].check(p, Some(j), cur.alpha[half + j].abs(), rhs);
        }
        if p < 3 {
            continue;
        }
        let quarter = half / 2;
        let eighth = half / 4;
        for j in 0..quarter {
            let rhs = c.mu_a * back(2).pair_sum(j);
            reports[1].check(p, Some(j), cur.alpha_bar[half + j].abs(), rhs);
            reports[1].check(p, Some(j), cur.alpha[quarter + j].abs(), rhs);
        }
        for j in 0..eighth {
            let s = back(3).pair_sum(j);
            let rhs = c.mu_b * s;
            reports[2].check(p, Some(j), cur.alpha_bar[half + quarter + j].abs(), rhs);
            reports[2].check(p, Some(j), cur.alpha[eighth + j].abs(), rhs);
            let rhs = c.mu_c * s;
            reports[3].check(
                p,
                Some(j),
                cur.alpha_bar[half + quarter + eighth + j].abs(),
                rhs,
            );
            reports[3].check(p, Some(j), cur.alpha[j].abs(), rhs);
        }
        let k = p as usize;
        let rhs = ph1 * norms[k - 1] + MU_A_RELAXED * norms[k - 2] + MU_BC_RELAXED * norms[k - 3];
        reports[4].check(p, None, norms[k], rhs);
    }
    Ok(reports)
}
