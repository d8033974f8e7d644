//! Kernel evaluations against values frozen from a 40-digit reference
//! evaluation of the closed forms.

#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use approx::assert_relative_eq;
use mlqi::kernel::{
    gaussian_nome, periodized_sum_e, periodized_sum_e_theta, theta3_product, theta3_series,
};
use mlqi::{bound_constants, psi, psi_hat};
use proptest::prelude::*;

#[test]
fn psi_values() {
    assert_relative_eq!(psi(0.0), 0.398_942_280_401_432_677_94, max_relative = 1e-15);
    assert_relative_eq!(
        psi(3.0),
        0.004_431_848_411_938_007_175_6,
        max_relative = 1e-14
    );
    assert_eq!(psi(1.0), psi(-1.0));
}

#[test]
fn psi_hat_values() {
    let cases = [
        (1.0, 2.675_287_991_074_239_681_2e-9),
        (0.5, 0.007_191_883_355_826_365_607_8),
        (0.25, 0.291_212_933_214_020_866_06),
        (0.75, 1.506_246_076_958_715_856_1e-5),
        (1.25, 4.029_642_041_290_337_561_2e-14),
        (1.75, 5.575_993_758_835_143_641_2e-27),
        (0.125, 0.734_602_944_328_633_341_13),
        (0.375, 0.062_297_982_470_988_877_213),
        (0.625, 4.480_398_232_346_675_865_6e-4),
        (2.0, 5.122_502_279_235_430_175_5e-35),
        (1.5, 5.147_350_184_496_359_827_3e-20),
    ];
    for (t, expected) in cases {
        assert_relative_eq!(psi_hat(t), expected, max_relative = 1e-12);
    }
    assert_eq!(psi_hat(0.0), 1.0);
    assert!((psi_hat(1.0) - 2.6753e-9).abs() < 1e-13);
    assert!((psi_hat(0.5) - 7.1919e-3).abs() < 1e-7);
}

#[test]
fn theta_reference_values() {
    let small = (-2.0 * PI * PI).exp();
    assert_relative_eq!(
        theta3_series(0.0, small).unwrap(),
        1.000_000_005_350_575_982_148_479,
        max_relative = 1e-15
    );
    assert_relative_eq!(
        theta3_series(0.9425, gaussian_nome()).unwrap(),
        0.424_305_491_262_362_706_271_888_2,
        max_relative = 1e-14
    );
    assert_relative_eq!(
        theta3_product(0.0, 0.5).unwrap(),
        2.128_936_827_211_877_158_669_459,
        max_relative = 1e-14
    );
}

#[test]
fn product_is_accurate_under_cancellation() {
    // mpmath at 60 digits
    let q = -0.949_936_627_101_159_3;
    assert_relative_eq!(
        theta3_product(0.0, q).unwrap(),
        2.139_062_550_881_760_117_049_3e-20,
        max_relative = 1e-13
    );
}

#[test]
fn leading_terms_at_small_nome() {
    let q = (-2.0 * PI * PI).exp();
    let leading = 1.0 + 2.0 * q + 2.0 * q.powi(4);
    assert_relative_eq!(
        theta3_series(0.0, q).unwrap(),
        leading,
        max_relative = 1e-16
    );
}

#[test]
fn series_and_product_agree_on_grid() {
    for q in [0.1, gaussian_nome(), 0.9] {
        for i in 0..100 {
            let z = PI * f64::from(i) / 99.0;
            let s = theta3_series(z, q).unwrap();
            let p = theta3_product(z, q).unwrap();
            assert!(
                (s - p).abs() <= 1e-13 * s.abs(),
                "q={q} z={z}: series {s:e} product {p:e}"
            );
        }
    }
}

#[test]
fn gaussian_theta_peaks_at_zero() {
    let q = gaussian_nome();
    let peak = theta3_product(0.0, q).unwrap();
    for i in 0..10_000 {
        let t = f64::from(i) / 10_000.0;
        assert!(theta3_product(PI * t, q).unwrap() <= peak);
    }
}

#[test]
fn e_reference_values() {
    assert_relative_eq!(
        periodized_sum_e(0.0) - 1.0,
        5.350_575_982_148_479_362_5e-9,
        max_relative = 1e-6
    );
    assert_relative_eq!(
        periodized_sum_e(0.5),
        0.014_383_766_711_652_731_318_549_74,
        max_relative = 1e-14
    );
}

#[test]
fn e_direct_matches_theta_form() {
    for i in 0..1000 {
        let t = f64::from(i) / 1000.0;
        let d = periodized_sum_e(t);
        let th = periodized_sum_e_theta(t);
        assert!((d - th).abs() <= 1e-13 * d, "t={t}: {d:e} vs {th:e}");
    }
}

#[test]
fn e_is_periodic_and_minimal_at_half() {
    for t in [0.13, 0.5, 0.77] {
        assert_relative_eq!(
            periodized_sum_e(t + 1.0),
            periodized_sum_e(t),
            max_relative = 1e-15
        );
    }
    let half = periodized_sum_e(0.5);
    let mut prev = periodized_sum_e(0.0);
    for i in 1..=500 {
        let t = f64::from(i) / 1000.0;
        let e = periodized_sum_e(t);
        assert!(e <= prev, "E must decrease on [0, 1/2]");
        assert!(half <= e);
        prev = e;
    }
}

#[test]
fn constants_match_reference() {
    let c = bound_constants();
    assert_relative_eq!(c.mu_a, 0.007_191_886_031_114_356_682, max_relative = 1e-13);
    assert_relative_eq!(
        c.mu_b,
        0.007_191_886_810_192_821_839_3,
        max_relative = 1e-13
    );
    assert_relative_eq!(c.mu_c, 0.703_689_554_773_745_588_06, max_relative = 1e-13);
    assert_relative_eq!(c.mu_bc, 0.710_881_441_583_938_409_9, max_relative = 1e-13);
    assert_relative_eq!(c.qi_norm, 1.000_000_008_025_863_973_2, max_relative = 1e-15);
    assert_relative_eq!(
        c.epsilon,
        1.024_500_455_847_086_035_1e-34,
        max_relative = 1e-12
    );
    assert!(c.mu_a < 0.0072);
    assert!(c.mu_bc < 0.711);
    assert!(psi_hat(1.0) < 3e-9);
    assert!(c.recursion_closes());
    assert!(periodized_sum_e(0.0) <= c.qi_norm);
}

#[test]
fn constants_round_trip_json() {
    let c = bound_constants();
    let back: mlqi::BoundConstants =
        serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
    assert_eq!(back, c);
}

proptest! {
    #[test]
    fn psi_hat_monotone(a in 0.0f64..5.0, b in 0.0f64..5.0) {
        let (s, t) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(psi_hat(t) <= psi_hat(s));
        prop_assert_eq!(psi_hat(t), psi_hat(-t));
    }

    #[test]
    fn psi_positive_even(x in -30.0f64..30.0) {
        prop_assert!(psi(x) > 0.0);
        prop_assert_eq!(psi(x), psi(-x));
    }

    #[test]
    fn theta_forms_agree(z in -10.0f64..10.0, q in -0.95f64..0.95) {
        let s = theta3_series(z, q).unwrap();
        let p = theta3_product(z, q).unwrap();
        // near q = -1, z = 0 the terms cancel by up to 20 digits, so the
        // series is only good to double-double precision of sum |terms|
        let scale = theta3_series(0.0, q.abs()).unwrap();
        prop_assert!((s - p).abs() <= 1e-12 * s.abs() + 1e-30 * scale, "{} vs {}", s, p);
    }

    #[test]
    fn nome_outside_disc_rejected(q in 1.0f64..10.0, neg in any::<bool>()) {
        let q = if neg { -q } else { q };
        prop_assert!(theta3_series(0.3, q).is_err());
        prop_assert!(theta3_product(0.3, q).is_err());
    }
}
