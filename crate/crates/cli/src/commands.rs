use std::f64::consts::PI;

use mlqi::analysis::{
    init_truncation, mp_sequence, scan_lemma_bounds, theorem_bound, truncation_discrepancies,
    truncation_norm, MpVariant, TruncationState, MAX_TRUNCATION_LEVELS,
};
use mlqi::kernel::{gaussian_nome, periodized_sum_e, theta3_product_with, theta3_series_with};
use mlqi::multilevel::{LevelReport, ROUNDOFF_FLOOR};
use mlqi::{
    bound_constants, decay_ratios, run_multilevel, wiener_norm, CosineSeries, EvalSpec, Mode,
    RunConfig,
};

use crate::output::{format_float, Cell, OutputRecord};
use crate::targets::{expcos_series, EXPCOS_MAX_FREQ, EXPCOS_NODES};
use crate::CliError;

const TABLE1_LEVELS: u32 = 10;
/// Level-one exponents that reproduce the three measured columns.
const TABLE1_ELL0_C1: u32 = 1;
const TABLE1_ELL0_C9: u32 = 0;
const TABLE1_ELL0_EXPCOS: u32 = 1;

const MAX_SPECTRAL_LEVELS: u32 = 24;
const MAX_SAMPLED_LEVELS: u32 = 12;

/// Spilled mass above this is reported.
const SPILL_WARNING: f64 = 1e-20;

/// (m, ell) pairs scanned by `bounds`.
pub const SCAN_MATRIX: [(u64, u32); 5] = [(1, 2), (1, 3), (3, 3), (0, 2), (5, 4)];

fn spec_params(r: &mut OutputRecord, spec: &EvalSpec) {
    r.param("window", spec.window_radius)
        .param("eta", spec.eta)
        .param("max_freq", spec.max_freq)
        .param("grid", spec.eval_points);
}

fn note_levels(r: &mut OutputRecord, label: &str, reports: &[LevelReport]) {
    let flagged: Vec<String> = reports
        .iter()
        .filter(|rep| rep.roundoff_dominated)
        .map(|rep| rep.p.to_string())
        .collect();
    if !flagged.is_empty() {
        r.warn(format!(
            "roundoff-dominated: {label} p={}",
            flagged.join(",")
        ));
    }
    if let Some(last) = reports.last() {
        if last.spilled_mass > SPILL_WARNING {
            r.warn(format!(
                "spilled_mass={} ({label})",
                format_float(last.spilled_mass)
            ));
        }
    }
}

fn spectral_run(
    f: &CosineSeries,
    ell0: u32,
    spec: &EvalSpec,
) -> Result<Vec<LevelReport>, CliError> {
    let cfg = RunConfig {
        spec: *spec,
        ..RunConfig::new(ell0, TABLE1_LEVELS, Mode::Spectral)
    };
    Ok(run_multilevel(f, &cfg)?)
}

pub fn table1(spec: &EvalSpec) -> Result<OutputRecord, CliError> {
    let c1 = spectral_run(&CosineSeries::cosine(1), TABLE1_ELL0_C1, spec)?;
    let c9 = spectral_run(&CosineSeries::cosine(9), TABLE1_ELL0_C9, spec)?;
    let ex = spectral_run(&expcos_series(), TABLE1_ELL0_EXPCOS, spec)?;
    let mp = mp_sequence(TABLE1_LEVELS, MpVariant::TableConsistent)?;

    let mut r = OutputRecord::new("table1", &["p", "c1_sup", "c9_sup", "m_p", "expcos_sup"]);
    r.param("levels", TABLE1_LEVELS)
        .param("ell0_c1", TABLE1_ELL0_C1)
        .param("ell0_c9", TABLE1_ELL0_C9)
        .param("ell0_expcos", TABLE1_ELL0_EXPCOS)
        .param("mp_variant", "table-consistent")
        .param("expcos_nodes", EXPCOS_NODES)
        .param("expcos_max_freq", EXPCOS_MAX_FREQ);
    spec_params(&mut r, spec);
    for i in 0..TABLE1_LEVELS as usize {
        r.push_row(vec![
            (i as u32 + 1).into(),
            c1[i].sup_error.into(),
            c9[i].sup_error.into(),
            mp[i].into(),
            ex[i].sup_error.into(),
        ]);
    }
    note_levels(&mut r, "c1", &c1);
    note_levels(&mut r, "c9", &c9);
    note_levels(&mut r, "expcos", &ex);
    Ok(r)
}

pub struct Single {
    pub name: String,
    pub f: CosineSeries,
    pub l0: u32,
    pub levels: u32,
    pub mode: Mode,
    pub stop_below: Option<f64>,
}

pub fn single(s: &Single, spec: &EvalSpec) -> Result<OutputRecord, CliError> {
    if s.levels == 0 {
        return Err(CliError::Usage("levels must be at least 1".into()));
    }
    let cap = match s.mode {
        Mode::Spectral => MAX_SPECTRAL_LEVELS,
        Mode::Sampled => MAX_SAMPLED_LEVELS,
    };
    if s.levels > cap {
        return Err(CliError::Usage(format!(
            "levels must be at most {cap} in this mode (got {})",
            s.levels
        )));
    }
    if s.l0 > 20 {
        return Err(CliError::Usage("l0 must be at most 20".into()));
    }
    let cfg = RunConfig {
        spec: *spec,
        stop_below: s.stop_below,
        ..RunConfig::new(s.l0, s.levels, s.mode)
    };
    let reports = run_multilevel(&s.f, &cfg)?;

    // ||M_{h,p} f|| <= A^p ||f||
    let growth = bound_constants().error_norm;
    let f_norm = wiener_norm(&s.f);
    for rep in &reports {
        if let Some(w) = rep.wiener_error {
            let cap = growth.powi(rep.p as i32) * f_norm;
            if w > cap * (1.0 + 1e-12) {
                return Err(CliError::Internal(format!(
                    "residual norm {w} exceeds the growth bound {cap} at p = {}",
                    rep.p
                )));
            }
        }
    }

    let ratios = if reports.len() >= 2 {
        decay_ratios(&reports)?
    } else {
        Vec::new()
    };
    let mut r = OutputRecord::new(
        "single",
        &[
            "p",
            "spacing",
            "sup_error",
            "wiener_error",
            "ratio",
            "flags",
        ],
    );
    r.param("target", s.name.as_str())
        .param("l0", s.l0)
        .param("levels", s.levels)
        .param(
            "mode",
            match s.mode {
                Mode::Spectral => "spectral",
                Mode::Sampled => "sampled",
            },
        );
    spec_params(&mut r, spec);
    for (i, rep) in reports.iter().enumerate() {
        let ratio = if i == 0 { None } else { ratios[i - 1] };
        let flag = if rep.sup_error <= ROUNDOFF_FLOOR {
            "roundoff-dominated"
        } else {
            ""
        };
        r.push_row(vec![
            rep.p.into(),
            rep.spacing.into(),
            rep.sup_error.into(),
            rep.wiener_error.into(),
            ratio.into(),
            flag.into(),
        ]);
    }
    note_levels(&mut r, &s.name, &reports);
    Ok(r)
}

fn push_state(r: &mut OutputRecord, s: &TruncationState, discrepancy: f64) {
    let n = 1u64 << s.ell;
    let len = s.alpha.len() as u64;
    let norm = truncation_norm(s);
    for j in 0..len {
        let below = (s.m as i64 - ((len - j) * n) as i64).unsigned_abs();
        r.push_row(vec![
            s.p.into(),
            j.into(),
            below.into(),
            s.alpha_bar[j as usize].into(),
            (s.m + j * n).into(),
            s.alpha[j as usize].into(),
            norm.into(),
            s.remainder_budget.into(),
            discrepancy.into(),
        ]);
    }
}

pub fn coeffs(m: u64, ell: u32, levels: u32, spec: &EvalSpec) -> Result<OutputRecord, CliError> {
    if levels == 0 || levels > MAX_TRUNCATION_LEVELS {
        return Err(CliError::Usage(format!(
            "levels must lie in 1..={MAX_TRUNCATION_LEVELS}"
        )));
    }
    let mut state = init_truncation(m, ell)?;
    let discrepancies = truncation_discrepancies(m, ell, levels, spec)?;

    let mut r = OutputRecord::new(
        "coeffs",
        &[
            "p",
            "j",
            "freq_bar",
            "alpha_bar",
            "freq",
            "alpha",
            "truncation_norm",
            "remainder_budget",
            "discrepancy",
        ],
    );
    r.param("m", m).param("ell", ell).param("levels", levels);
    spec_params(&mut r, spec);
    for (i, d) in discrepancies.iter().enumerate() {
        if i > 0 {
            state = state.step();
        }
        push_state(&mut r, &state, *d);
    }
    let worst = discrepancies.iter().copied().fold(0.0, f64::max);
    if worst > 1e-11 {
        r.warn(format!(
            "recursion and spectral residual differ by {}",
            format_float(worst)
        ));
    }
    Ok(r)
}

pub fn bounds(pmax: u32) -> Result<OutputRecord, CliError> {
    if !(3..=MAX_TRUNCATION_LEVELS).contains(&pmax) {
        return Err(CliError::Usage(format!(
            "pmax must lie in 3..={MAX_TRUNCATION_LEVELS} (got {pmax})"
        )));
    }
    let mut r = OutputRecord::new(
        "bounds",
        &["kind", "name", "m", "ell", "value", "checked", "violations"],
    );
    r.param("pmax", pmax);
    let c = bound_constants();
    for (name, value) in [
        ("a", c.qi_norm),
        ("A", c.error_norm),
        ("epsilon", c.epsilon),
        ("mu_a", c.mu_a),
        ("mu_b", c.mu_b),
        ("mu_c", c.mu_c),
        ("b", c.mu_bc),
    ] {
        r.push_row(vec![
            "constant".into(),
            name.into(),
            Cell::Empty,
            Cell::Empty,
            value.into(),
            Cell::Empty,
            Cell::Empty,
        ]);
    }
    let (mut checked, mut violations) = (0usize, 0usize);
    for (m, ell) in SCAN_MATRIX {
        for rep in scan_lemma_bounds(m, ell, pmax)? {
            checked += rep.checked;
            violations += rep.violations.len();
            if !rep.holds() {
                r.warn(format!(
                    "{} violated {} times for m={m}, ell={ell}",
                    rep.family.name(),
                    rep.violations.len()
                ));
            }
            r.push_row(vec![
                "scan".into(),
                rep.family.name().into(),
                m.into(),
                ell.into(),
                Cell::Empty,
                rep.checked.into(),
                rep.violations.len().into(),
            ]);
        }
    }
    r.push_row(vec![
        "total".into(),
        "all".into(),
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        checked.into(),
        violations.into(),
    ]);
    if !c.invariants_hold() {
        r.warn("constant inequalities do not hold");
    }
    Ok(r)
}

pub fn theta(z: f64, q: f64) -> Result<OutputRecord, CliError> {
    if !z.is_finite() {
        return Err(CliError::Usage("z must be finite".into()));
    }
    let tol = mlqi::kernel::DEFAULT_TAIL_TOLERANCE;
    let series = theta3_series_with(z, q, tol)?;
    let product = theta3_product_with(z, q, tol)?;
    let diff = (series.value - product.value).abs();
    let gaussian = (q - gaussian_nome()).abs() <= 1e-15;

    let mut r = OutputRecord::new(
        "theta",
        &[
            "z",
            "q",
            "series",
            "product",
            "abs_diff",
            "rel_diff",
            "series_terms",
            "product_factors",
            "e_t",
            "e_t_direct",
        ],
    );
    r.param("z", z).param("q", q);
    let (e_t, e_direct) = if gaussian {
        let t = z / PI;
        (
            Cell::Float(series.value / (2.0 * PI).sqrt()),
            Cell::Float(periodized_sum_e(t)),
        )
    } else {
        (Cell::Empty, Cell::Empty)
    };
    r.push_row(vec![
        z.into(),
        q.into(),
        series.value.into(),
        product.value.into(),
        diff.into(),
        (diff / series.value.abs()).into(),
        series.terms.into(),
        product.terms.into(),
        e_t,
        e_direct,
    ]);
    Ok(r)
}

pub fn bound(s: f64, t: f64, p: u32, f_norm: f64, big_b: f64) -> Result<OutputRecord, CliError> {
    let b = theorem_bound(s, t, p, f_norm, big_b)?;
    let mut r = OutputRecord::new(
        "bound",
        &[
            "s",
            "t",
            "p",
            "c_t",
            "d_s",
            "low",
            "tail",
            "remainder",
            "total",
        ],
    );
    r.param("s", s)
        .param("t", t)
        .param("p", p)
        .param("f_norm", f_norm)
        .param("big_b", big_b);
    r.push_row(vec![
        s.into(),
        t.into(),
        p.into(),
        b.c_t.into(),
        b.d_s.into(),
        b.low.into(),
        b.tail.into(),
        b.remainder.into(),
        b.total.into(),
    ]);
    r.warn("B is an empirical envelope, not a constant fixed by the analysis");
    Ok(r)
}
