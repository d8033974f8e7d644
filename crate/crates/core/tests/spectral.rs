// Oracle digits are kept as produced, beyond f64 precision.
#![allow(clippy::excessive_precision)]

use approx::assert_relative_eq;
use mlqi::kernel::periodized_sum_e;
use mlqi::{
    bound_constants, eval_series, psi_hat, qi_eval_direct, qi_spectral, sample, sobolev_norm,
    sup_norm_estimate, wiener_norm, CosineSeries, EvalSpec,
};
use proptest::prelude::*;

fn spec() -> EvalSpec {
    EvalSpec::default()
}

/// Additive recurrence with the golden ratio: well spread points in [0, 1).
fn spread_points(n: usize) -> impl Iterator<Item = f64> {
    let phi = 0.618_033_988_749_894_8;
    (0..n).map(move |i| (0.5 + phi * i as f64).fract())
}

fn series() -> impl Strategy<Value = CosineSeries> {
    prop::collection::vec((0usize..40, -2.0f64..2.0), 1..=8).prop_map(|terms| {
        let mut c = vec![0.0; 41];
        for (m, v) in terms {
            c[m] += v;
        }
        CosineSeries::from_coeffs(c).unwrap()
    })
}

fn direct_spectral_gap(f: &CosineSeries, ell: u32, points: usize) -> f64 {
    let s = sample(f, ell).unwrap();
    let q = qi_spectral(f, ell, &spec()).unwrap().series;
    spread_points(points)
        .map(|x| (qi_eval_direct(&s, x, &spec()) - eval_series(&q, x)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn exp_cos_partial_sum_at_zero() {
    // 2 I_k(1) for k >= 1, I_0(1) for k = 0, from the Bessel power series
    let mut coeffs = vec![0.0; 31];
    let mut fact = vec![1.0f64; 64];
    for i in 1..64 {
        fact[i] = fact[i - 1] * i as f64;
    }
    for (k, c) in coeffs.iter_mut().enumerate() {
        let ik: f64 = (0..25)
            .map(|j| 0.5f64.powi((2 * j + k) as i32) / (fact[j] * fact[j + k]))
            .sum();
        *c = if k == 0 { ik } else { 2.0 * ik };
    }
    let f = CosineSeries::from_coeffs(coeffs).unwrap();
    assert!((eval_series(&f, 0.0) - 1f64.exp()).abs() < 1e-10);
    assert_relative_eq!(
        f.coefficient(0),
        1.266_065_877_752_008_335_6,
        max_relative = 1e-14
    );
    assert_relative_eq!(
        f.coefficient(1),
        1.130_318_207_984_970_054_4,
        max_relative = 1e-14
    );
}

#[test]
fn aliasing_on_the_grid() {
    let a = sample(&CosineSeries::cosine(9), 3).unwrap();
    let b = sample(&CosineSeries::cosine(1), 3).unwrap();
    for (x, y) in a.values().iter().zip(b.values()) {
        assert!((x - y).abs() < 1e-14);
    }
}

#[test]
fn aliasing_of_the_operator() {
    for (m, ell) in [(1usize, 2u32), (3, 3)] {
        let n = 1usize << ell;
        let base = qi_spectral(&CosineSeries::cosine(m), ell, &spec())
            .unwrap()
            .series;
        for j in 1..=2 {
            let shifted = qi_spectral(&CosineSeries::cosine(m + j * n), ell, &spec())
                .unwrap()
                .series;
            assert!(
                shifted.max_abs_diff(&base) <= 1e-15,
                "m={m} ell={ell} j={j}"
            );
        }
    }
}

#[test]
fn c3_weights() {
    let q = qi_spectral(&CosineSeries::cosine(3), 3, &spec())
        .unwrap()
        .series;
    assert_relative_eq!(
        q.coefficient(3),
        0.062_297_982_470_988_877_213,
        max_relative = 1e-6
    );
    assert_relative_eq!(
        q.coefficient(5),
        4.480_398_232_346_675_865_6e-4,
        max_relative = 1e-6
    );
}

#[test]
fn direct_constant_is_e0() {
    let s = sample(&CosineSeries::cosine(0), 3).unwrap();
    assert!((qi_eval_direct(&s, 0.0, &spec()) - 1.000_000_005_350_575_982).abs() < 1e-12);
    assert!((qi_eval_direct(&s, 0.0, &spec()) - periodized_sum_e(0.0)).abs() < 1e-12);
}

#[test]
fn direct_matches_spectral_for_fixed_targets() {
    for m in [0usize, 1, 5] {
        let f = CosineSeries::cosine(m);
        for ell in [2u32, 3, 4] {
            let gap = direct_spectral_gap(&f, ell, 200);
            assert!(
                gap <= 1e-11 * (1.0 + wiener_norm(&f)),
                "c_{m}, ell={ell}: {gap:e}"
            );
        }
    }
}

#[test]
fn wiener_norm_of_quasi_interpolated_constant() {
    let q = qi_spectral(&CosineSeries::cosine(0), 3, &spec()).unwrap();
    assert!(wiener_norm(&q.series) <= bound_constants().qi_norm);
}

#[test]
fn sup_norm_examples() {
    assert!((sup_norm_estimate(&CosineSeries::cosine(7), &spec()) - 1.0).abs() < 1e-6);
    let f = &CosineSeries::cosine(1) + &CosineSeries::cosine(2);
    assert!((sup_norm_estimate(&f, &spec()) - 2.0).abs() < 1e-6);
}

#[test]
fn sobolev_examples() {
    assert_eq!(sobolev_norm(&CosineSeries::cosine(0), 2.5), 1.0);
    assert_eq!(sobolev_norm(&CosineSeries::cosine(2), 1.0), 2.0);
}

proptest! {
    #[test]
    fn direct_matches_spectral(f in series(), ell in 2u32..=4) {
        let gap = direct_spectral_gap(&f, ell, 200);
        prop_assert!(gap <= 1e-11 * (1.0 + wiener_norm(&f)), "gap {:e}", gap);
    }

    #[test]
    fn operator_is_bounded(f in series(), ell in 0u32..=6) {
        let q = qi_spectral(&f, ell, &spec()).unwrap();
        let a = bound_constants().qi_norm;
        prop_assert!(wiener_norm(&q.series) + q.spilled_mass <= a * wiener_norm(&f) + 1e-12);
    }

    #[test]
    fn operator_is_linear(f in series(), g in series(), a in -3.0f64..3.0, b in -3.0f64..3.0, ell in 0u32..=5) {
        let combo = &(a * &f) + &(b * &g);
        let lhs = qi_spectral(&combo, ell, &spec()).unwrap().series;
        let qf = qi_spectral(&f, ell, &spec()).unwrap().series;
        let qg = qi_spectral(&g, ell, &spec()).unwrap().series;
        let rhs = &(a * &qf) + &(b * &qg);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-13 * (1.0 + wiener_norm(&combo)));
    }

    #[test]
    fn aliasing_is_exact(m in 0usize..64, ell in 0u32..=5, j in 1usize..=2) {
        let n = 1usize << ell;
        let a = qi_spectral(&CosineSeries::cosine(m), ell, &spec()).unwrap().series;
        let b = qi_spectral(&CosineSeries::cosine(m + j * n), ell, &spec()).unwrap().series;
        prop_assert!(a.max_abs_diff(&b) <= 1e-15);
    }

    #[test]
    fn sup_below_wiener(f in series()) {
        prop_assert!(sup_norm_estimate(&f, &spec()) <= wiener_norm(&f) + 1e-15);
    }

    #[test]
    fn sobolev_monotone_in_s(f in series(), s in 0.0f64..3.0, ds in 0.0f64..2.0) {
        prop_assume!(f.trimmed().max_freq() >= 1);
        prop_assert!(sobolev_norm(&f, s) <= sobolev_norm(&f, s + ds) * (1.0 + 1e-15));
    }

    #[test]
    fn direct_is_periodic(f in series(), x in 0.0f64..1.0) {
        let s = sample(&f, 3).unwrap();
        let a = qi_eval_direct(&s, x, &spec());
        let b = qi_eval_direct(&s, x + 1.0, &spec());
        prop_assert!((a - b).abs() <= 1e-13 * (1.0 + wiener_norm(&f)));
    }

    #[test]
    fn text_forms_round_trip(f in series()) {
        prop_assert_eq!(CosineSeries::from_csv(&f.to_csv()).unwrap(), f.clone());
        prop_assert_eq!(CosineSeries::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn trimming_preserves_value(f in series(), x in 0.0f64..1.0) {
        prop_assert_eq!(eval_series(&f.trimmed(), x), eval_series(&f, x));
    }
}

#[test]
fn psi_hat_cutoff_respected() {
    let tight = EvalSpec {
        eta: 1e-20,
        ..EvalSpec::default()
    };
    let q = qi_spectral(&CosineSeries::cosine(0), 0, &tight)
        .unwrap()
        .series;
    // psi_hat(2) ~ 5e-35 is below eta
    assert_eq!(q.coefficient(2), 0.0);
    assert_eq!(q.coefficient(1), 2.0 * psi_hat(1.0));
}
