use std::f64::consts::TAU;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use sgfloquet::ode::{integrate, StepControl};
use sgfloquet::special::{complete_elliptic_k, jacobi_sn, EllipticModulus};
use sgfloquet::wave::fundamental_period;
use sgfloquet::{WaveParams, WaveProfile};

const REPRESENTATIVES: [(f64, f64); 4] = [
    (2.0, 3.0),
    (0.5, -1.0),
    (1.732_050_807_568_877_2, 1.0),
    (0.5, 1.0),
];

fn wave(c: f64, e: f64) -> WaveProfile {
    WaveProfile::new(WaveParams::new(c, e)).unwrap()
}

#[test]
fn energy_is_conserved_at_random_points() {
    let mut rng = StdRng::seed_from_u64(7);
    for &(c, e) in &REPRESENTATIVES {
        let w = wave(c, e);
        for _ in 0..200 {
            let z = rng.gen_range(-3.0..3.0) * w.period();
            let r = w.energy_residual(z);
            assert!(r.abs() < 1e-9, "({c}, {e}) z = {z}: {r:e}");
        }
    }
}

#[test]
fn cos_f_is_even_and_periodic() {
    let mut rng = StdRng::seed_from_u64(11);
    for &(c, e) in &REPRESENTATIVES {
        let w = wave(c, e);
        let t = w.period();
        for _ in 0..200 {
            let z = rng.gen_range(-2.0..2.0) * t;
            assert!((w.cos_f(z) - w.cos_f(-z)).abs() < 1e-10);
            assert!((w.cos_f(z + t) - w.cos_f(z)).abs() < 1e-9);
            if w.class().is_librational() {
                assert!((w.cos_f(z + 0.5 * t) - w.cos_f(z)).abs() < 1e-9);
            }
        }
    }
}

/// Integrates the pendulum equation from the normalized initial data and
/// compares `cos f` with the elliptic profile.
#[test]
fn elliptic_profile_matches_direct_integration() {
    for &(c, e) in &REPRESENTATIVES {
        let w = wave(c, e);
        let gamma = w.gamma();
        let ctl = StepControl::new(1e-13);
        let mut state = [w.f0(), w.v0()];
        let mut z = 0.0;
        let dz = w.period() / 37.0;
        for _ in 0..100 {
            let (next, _) = integrate(
                |_, y: &[f64; 2], dy: &mut [f64; 2]| {
                    dy[0] = y[1];
                    dy[1] = -gamma * y[0].sin();
                },
                z,
                z + dz,
                state,
                1,
                &ctl,
            )
            .unwrap();
            state = next;
            z += dz;
            let p = w.at(z);
            assert!(
                (state[0].cos() - p.cos_f).abs() < 1e-8,
                "({c}, {e}) z = {z}"
            );
            assert!(
                (state[0].sin() - p.sin_f).abs() < 1e-8,
                "({c}, {e}) z = {z}"
            );
            assert!((state[1] - p.f_prime).abs() < 1e-8, "({c}, {e}) z = {z}");
        }
    }
}

/// Rotational period with `f` as the independent variable: `dz/df = 1/f'`,
/// `d(f')/df = -gamma sin f / f'`, run until `f` has advanced by `2 pi`.
fn rotational_period_by_ode(c: f64, e: f64) -> f64 {
    let w = wave(c, e);
    let gamma = w.gamma();
    let (end, _) = integrate(
        |f, y: &[f64; 2], dy: &mut [f64; 2]| {
            dy[0] = 1.0 / y[1];
            dy[1] = -gamma * f.sin() / y[1];
        },
        w.f0(),
        w.f0() + TAU,
        [0.0, w.v0()],
        1,
        &StepControl::new(1e-14),
    )
    .unwrap();
    end[0]
}

#[test]
fn rotational_period_agrees_with_ode_oracle() {
    for &(c, e) in &[(2.0, 3.0), (0.5, -1.0), (1.5, 5.0), (0.8, -0.5)] {
        let by_quadrature = fundamental_period(WaveParams::new(c, e)).unwrap();
        let by_ode = rotational_period_by_ode(c, e);
        assert!(
            (by_quadrature - by_ode).abs() < 1e-9,
            "({c}, {e}): {by_quadrature} vs {by_ode}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sn_is_odd_and_4k_periodic(zeta in -20.0_f64..20.0, k in 0.0_f64..0.999) {
        let m = EllipticModulus::new(k).unwrap();
        let kk = complete_elliptic_k(m);
        let s = jacobi_sn(zeta, m);
        prop_assert!((jacobi_sn(zeta + 4.0 * kk, m) - s).abs() < 1e-10);
        prop_assert!((jacobi_sn(-zeta, m) + s).abs() < 1e-12);
    }
}
