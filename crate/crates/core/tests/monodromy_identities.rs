use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use sgfloquet::monodromy::hill_parameter;
use sgfloquet::*;

const RTOL: f64 = 1e-10;
const CLASSES: [(f64, f64); 4] = [
    (2.0, 3.0),
    (0.5, -1.0),
    (1.732_050_807_568_877_2, 1.0),
    (0.5, 1.0),
];

fn wave(c: f64, e: f64) -> WaveProfile {
    WaveProfile::new(WaveParams::new(c, e)).unwrap()
}

fn random_lambdas(seed: u64, n: usize) -> Vec<Complex64> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
        .collect()
}

#[test]
fn lambda_zero_has_a_periodic_multiplier() {
    for &(c, e) in &CLASSES {
        let w = wave(c, e);
        let m = monodromy_p(&w, Complex64::new(0.0, 0.0), RTOL).unwrap();
        // f' starts at (v0, 0), so the first column is the periodic solution.
        assert!((m.matrix.m11 - 1.0).norm() < 1e-8 && m.matrix.m21.norm() < 1e-8);
        // The multiplier 1 is double (a Jordan block), so the computed pair
        // only agrees with it to the square root of the integration error.
        let pair = floquet_multipliers(&m);
        let nearest = (pair.rho_plus - 1.0)
            .norm()
            .min((pair.rho_minus - 1.0).norm());
        assert!(nearest < 1e-4, "({c}, {e}): {pair:?}");
        let g = g_p(&w, Complex64::new(0.0, 0.0), RTOL).unwrap();
        // G_p(0) = -delta^2 with delta the split of the double multiplier.
        assert!(g.abs() < 10.0 * RTOL, "({c}, {e}): G_p(0) = {g:e}");
    }
}

#[test]
fn abel_determinants_hold() {
    for &(c, e) in &CLASSES {
        let w = wave(c, e);
        for lambda in random_lambdas(3, 50) {
            let mp = monodromy_p(&w, lambda, RTOL).unwrap();
            let expected = (2.0 * c * w.gamma() * lambda * w.period()).exp();
            assert!((mp.abel_det() - expected).norm() <= 1e-15 * expected.norm());
            assert!(mp.abel_residual < 1e-8, "({c}, {e}) lambda = {lambda}");
            let mq = monodromy_q(&w, lambda, RTOL).unwrap();
            assert!(mq.abel_residual < 1e-8, "({c}, {e}) mu = {lambda}");
        }
    }
}

#[test]
fn standing_wave_problems_coincide() {
    let w = wave(0.0, 1.0);
    for lambda in random_lambdas(5, 10) {
        let mp = monodromy_p(&w, lambda, RTOL).unwrap().matrix;
        let mq = monodromy_q(&w, hill_parameter(&w, lambda), RTOL)
            .unwrap()
            .matrix;
        assert!((mp - mq).max_norm() <= 1e-10 * mq.max_norm().max(1.0));
        assert!(conjugation_residual(&w, lambda, RTOL).unwrap() < 1e-10);
    }
}

#[test]
fn real_mu_gives_real_discriminant() {
    let w = wave(2.0, 3.0);
    for mu in [-3.0, -0.3, 0.0, 0.7] {
        let m = monodromy_q(&w, Complex64::new(mu, 0.0), RTOL).unwrap();
        assert!(m.trace.im.abs() < 1e-10);
    }
}

#[test]
fn conjugation_maps_p_to_q() {
    for &(c, e) in &CLASSES {
        let w = wave(c, e);
        for lambda in random_lambdas(17, 20) {
            let r = conjugation_residual(&w, lambda, RTOL).unwrap();
            assert!(r < 1e-8, "({c}, {e}) lambda = {lambda}: {r:e}");
        }
        assert!(conjugation_residual(&w, Complex64::new(0.0, 0.0), RTOL).unwrap() < 1e-10);
    }
}

#[test]
fn multipliers_map_between_p_and_q() {
    for &(c, e) in &CLASSES {
        let w = wave(c, e);
        for lambda in random_lambdas(23, 20) {
            let p = floquet_multipliers(&monodromy_p(&w, lambda, RTOL).unwrap());
            let q =
                floquet_multipliers(&monodromy_q(&w, hill_parameter(&w, lambda), RTOL).unwrap());
            let factor = (-c * w.gamma() * lambda * w.period()).exp();
            let (a, b) = (p.rho_plus * factor, p.rho_minus * factor);
            let close = |x: Complex64, y: Complex64| (x - y).norm() <= 1e-8 * y.norm().max(1.0);
            let straight = close(a, q.rho_plus) && close(b, q.rho_minus);
            let swapped = close(a, q.rho_minus) && close(b, q.rho_plus);
            assert!(straight || swapped, "({c}, {e}) lambda = {lambda}");
        }
    }
}

#[test]
fn indicator_identities() {
    for &(c, e) in &CLASSES {
        let w = wave(c, e);
        for lambda in random_lambdas(29, 50) {
            let gp = g_p(&w, lambda, RTOL).unwrap();
            let gq = g_q(&w, lambda, RTOL).unwrap();
            assert!(gq <= 1e-12, "G_q({lambda}) = {gq:e}");
            let shift = (c * w.gamma() * lambda * w.period()).re;
            assert!(
                (gp - shift * shift - gq).abs() < 1e-8,
                "({c}, {e}) lambda = {lambda}"
            );
            assert!((gp - g_p(&w, lambda.conj(), RTOL).unwrap()).abs() < 1e-8);
            assert!((gp - g_p(&w, -lambda, RTOL).unwrap()).abs() < 1e-8);
        }
    }
}

#[test]
fn indicators_agree_on_the_imaginary_axis() {
    for &(c, e) in &CLASSES {
        let w = wave(c, e);
        for beta in [0.1, 0.5, 0.9, 1.3, 2.0, 3.7] {
            let lambda = Complex64::new(0.0, beta);
            let gp = g_p(&w, lambda, RTOL).unwrap();
            let gq = g_q(&w, lambda, RTOL).unwrap();
            assert!((gp - gq).abs() < 1e-9, "({c}, {e}) beta = {beta}");
        }
    }
}

#[test]
fn hill_multipliers_are_unimodular_inside_a_band() {
    // beta = 0.5 maps to mu = -1/36, inside the top band (-1/6, 0) of (2, 3).
    let w = wave(2.0, 3.0);
    let mu = hill_parameter(&w, Complex64::new(0.0, 0.5));
    let pair = floquet_multipliers(&monodromy_q(&w, mu, RTOL).unwrap());
    assert!((pair.rho_plus.norm() - 1.0).abs() < 1e-9);
    assert!((pair.rho_minus.norm() - 1.0).abs() < 1e-9);
}

#[test]
fn large_real_lambda_sign_follows_speed() {
    let lambda = Complex64::new(3.0, 0.0);
    assert!(g_p(&wave(2.0, 3.0), lambda, RTOL).unwrap() > 0.0);
    assert!(g_p(&wave(3.0_f64.sqrt(), 1.0), lambda, RTOL).unwrap() > 0.0);
    assert!(g_p(&wave(0.5, -1.0), lambda, RTOL).unwrap() < 0.0);
    assert!(g_p(&wave(0.5, 1.0), lambda, RTOL).unwrap() < 0.0);
}
