//! Periodic traveling waves of the sine-Gordon equation.
//!
//! In the co-moving frame `z = x - ct` a traveling wave `f(z)` solves the
//! pendulum equation `(c^2 - 1) f'' + sin f = 0`, with first integral
//! `(c^2 - 1) f'^2 / 2 + 1 - cos f = E`. Waves are classified by speed
//! (subluminal `c^2 < 1`, superluminal `c^2 > 1`) and by orbit type
//! (librational `0 < E < 2`, rotational otherwise).
//!
//! Every profile is normalized so that `sin f(0) = 0` and `f'(0) > 0`, with
//! `f(0) = 0` for superluminal and `f(0) = pi` for subluminal waves. With
//! that choice `cos f` is even in `z` and has a closed form through Jacobi
//! elliptic functions of `zeta = scale * z`:
//!
//! | class                  | `cos f`          | `f'`                  | `T`            |
//! |------------------------|------------------|-----------------------|----------------|
//! | superluminal rotational| `1 - 2 sn^2`     | `2 scale dn`          | `2K / scale`   |
//! | subluminal rotational  | `-1 + 2 sn^2`    | `2 scale dn`          | `2K / scale`   |
//! | superluminal librational| `1 - 2k^2 sn^2` | `2 k scale cn`        | `4K / scale`   |
//! | subluminal librational | `-1 + 2k^2 sn^2` | `2 k scale cn`        | `4K / scale`   |

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{
    adaptive_quadrature, adaptive_quadrature_endpoints, complete_elliptic_k, Abscissa,
    EllipticModulus, JacobiElliptic, QuadratureSpec,
};

/// Distance from `|c| = 1`, `E = 0` and `E = 2` below which parameters are
/// rejected as luminal or separatrix.
pub const SEPARATRIX_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpeedRegime {
    Subluminal,
    Superluminal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MotionType {
    Rotational,
    Librational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WaveClass {
    pub speed_regime: SpeedRegime,
    pub motion_type: MotionType,
}

impl WaveClass {
    pub fn is_subluminal(&self) -> bool {
        self.speed_regime == SpeedRegime::Subluminal
    }

    pub fn is_librational(&self) -> bool {
        self.motion_type == MotionType::Librational
    }

    /// Kebab-case label, e.g. `subluminal-rotational`.
    pub fn label(&self) -> &'static str {
        match (self.speed_regime, self.motion_type) {
            (SpeedRegime::Subluminal, MotionType::Rotational) => "subluminal-rotational",
            (SpeedRegime::Subluminal, MotionType::Librational) => "subluminal-librational",
            (SpeedRegime::Superluminal, MotionType::Rotational) => "superluminal-rotational",
            (SpeedRegime::Superluminal, MotionType::Librational) => "superluminal-librational",
        }
    }
}

impl fmt::Display for WaveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Wave speed `c` and energy `E`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveParams {
    pub c: f64,
    #[serde(rename = "E")]
    pub energy: f64,
}

impl WaveParams {
    pub fn new(c: f64, energy: f64) -> Self {
        Self { c, energy }
    }

    /// `gamma = 1 / (c^2 - 1)`.
    pub fn gamma(&self) -> f64 {
        1.0 / (self.c * self.c - 1.0)
    }
}

pub fn classify(c: f64, energy: f64) -> Result<WaveClass> {
    if !c.is_finite() || !energy.is_finite() {
        return Err(Error::domain("wave parameters must be finite"));
    }
    if (c.abs() - 1.0).abs() < SEPARATRIX_MARGIN {
        return Err(Error::domain("luminal speed excluded"));
    }
    if energy.abs() < SEPARATRIX_MARGIN || (energy - 2.0).abs() < SEPARATRIX_MARGIN {
        return Err(Error::domain("separatrix"));
    }
    let speed_regime = if c * c < 1.0 {
        SpeedRegime::Subluminal
    } else {
        SpeedRegime::Superluminal
    };
    let motion_type = match speed_regime {
        _ if energy > 0.0 && energy < 2.0 => MotionType::Librational,
        SpeedRegime::Subluminal if energy < 0.0 => MotionType::Rotational,
        SpeedRegime::Superluminal if energy > 2.0 => MotionType::Rotational,
        _ => return Err(Error::domain("no real wave")),
    };
    Ok(WaveClass {
        speed_regime,
        motion_type,
    })
}

/// `cos f`, `sin f` and `f'` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub cos_f: f64,
    pub sin_f: f64,
    pub f_prime: f64,
}

/// A normalized traveling-wave profile with its elliptic representation.
#[derive(Debug, Clone)]
pub struct WaveProfile {
    params: WaveParams,
    class: WaveClass,
    gamma: f64,
    period: f64,
    f0: f64,
    v0: f64,
    scale: f64,
    quarter_period: f64,
    jacobi: JacobiElliptic,
}

impl WaveProfile {
    pub fn new(params: WaveParams) -> Result<Self> {
        let class = classify(params.c, params.energy)?;
        let gamma = params.gamma();
        let e = params.energy;
        let (k_squared, scale) = match (class.speed_regime, class.motion_type) {
            (SpeedRegime::Superluminal, MotionType::Rotational) => {
                (2.0 / e, (0.5 * gamma * e).sqrt())
            }
            (SpeedRegime::Subluminal, MotionType::Rotational) => {
                (2.0 / (2.0 - e), (0.5 * (-gamma) * (2.0 - e)).sqrt())
            }
            (SpeedRegime::Superluminal, MotionType::Librational) => (0.5 * e, gamma.sqrt()),
            (SpeedRegime::Subluminal, MotionType::Librational) => {
                (0.5 * (2.0 - e), (-gamma).sqrt())
            }
        };
        let modulus = EllipticModulus::new(k_squared.sqrt())?;
        let quarter_period = complete_elliptic_k(modulus);
        let (period, v0) = if class.is_librational() {
            (4.0 * quarter_period / scale, 2.0 * modulus.value() * scale)
        } else {
            (2.0 * quarter_period / scale, 2.0 * scale)
        };
        let f0 = if class.is_subluminal() { PI } else { 0.0 };
        Ok(Self {
            params,
            class,
            gamma,
            period,
            f0,
            v0,
            scale,
            quarter_period,
            jacobi: JacobiElliptic::new(modulus),
        })
    }

    pub fn params(&self) -> WaveParams {
        self.params
    }

    pub fn class(&self) -> WaveClass {
        self.class
    }

    pub fn c(&self) -> f64 {
        self.params.c
    }

    pub fn energy(&self) -> f64 {
        self.params.energy
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Fundamental period `T` of `f` modulo `2 pi`.
    pub fn period(&self) -> f64 {
        self.period
    }

    /// Smallest period of the coefficient `cos f`: `T / 2` for librational
    /// waves, `T` for rotational ones.
    pub fn coefficient_period(&self) -> f64 {
        if self.class.is_librational() {
            0.5 * self.period
        } else {
            self.period
        }
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }

    /// `f'(0) > 0`.
    pub fn v0(&self) -> f64 {
        self.v0
    }

    pub fn modulus(&self) -> EllipticModulus {
        self.jacobi.modulus()
    }

    /// Factor mapping `z` to the elliptic argument `zeta = scale * z`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `K(k)` for the profile's modulus.
    pub fn quarter_period(&self) -> f64 {
        self.quarter_period
    }

    pub fn at(&self, z: f64) -> ProfilePoint {
        let t = self.jacobi.eval(self.scale * z);
        let k = self.jacobi.modulus().value();
        let (cos_g, sin_g, f_prime) = if self.class.is_librational() {
            (
                1.0 - 2.0 * k * k * t.sn * t.sn,
                2.0 * k * t.sn * t.dn,
                2.0 * k * self.scale * t.cn,
            )
        } else {
            (
                1.0 - 2.0 * t.sn * t.sn,
                2.0 * t.sn * t.cn,
                2.0 * self.scale * t.dn,
            )
        };
        // Subluminal profiles are the superluminal shapes shifted by pi.
        if self.class.is_subluminal() {
            ProfilePoint {
                cos_f: -cos_g,
                sin_f: -sin_g,
                f_prime,
            }
        } else {
            ProfilePoint {
                cos_f: cos_g,
                sin_f: sin_g,
                f_prime,
            }
        }
    }

    /// `cos f(z)` alone; this is the coefficient of the linearized problems.
    #[inline]
    pub fn cos_f(&self, z: f64) -> f64 {
        let sn = self.jacobi.eval(self.scale * z).sn;
        let k = self.jacobi.modulus().value();
        let amplitude = if self.class.is_librational() {
            k * k
        } else {
            1.0
        };
        let cos_g = 1.0 - 2.0 * amplitude * sn * sn;
        if self.class.is_subluminal() {
            -cos_g
        } else {
            cos_g
        }
    }

    /// Residual of the first integral at `z`.
    pub fn energy_residual(&self, z: f64) -> f64 {
        let p = self.at(z);
        0.5 * (self.params.c * self.params.c - 1.0) * p.f_prime * p.f_prime + 1.0
            - p.cos_f
            - self.params.energy
    }
}

/// `cos f`, `sin f`, `f'` at `z` for the normalized wave with `params`.
pub fn profile(params: WaveParams, z: f64) -> Result<ProfilePoint> {
    Ok(WaveProfile::new(params)?.at(z))
}

fn period_quadrature_spec() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-15,
        rel_tol: 5e-16,
        max_subdivisions: 4000,
    }
}

/// `P(E) = 2 int_0^1 du / (sqrt(s (2 - E s)) sqrt(u))`, `s = 1 - u`: the
/// librational half-orbit integral after the substitutions `w = cos f`,
/// `w = E (u - 1) + 1`.
fn librational_period_integral(e: f64) -> Result<f64> {
    let integral = adaptive_quadrature_endpoints(
        |n: Abscissa| {
            let (u, s) = (n.from_a, n.from_b);
            1.0 / ((s * (2.0 - e * s)).sqrt() * u.sqrt())
        },
        0.0,
        1.0,
        &period_quadrature_spec(),
    )?;
    Ok(2.0 * integral)
}

/// `P'(E) = int_0^1 s^2 / ((s (2 - E s))^{3/2} sqrt(u)) du`, `s = 1 - u`.
fn librational_period_integral_derivative(e: f64) -> Result<f64> {
    adaptive_quadrature_endpoints(
        |n: Abscissa| {
            let (u, s) = (n.from_a, n.from_b);
            // s^2 / (s (2 - E s))^{3/2} = sqrt(s) / (2 - E s)^{3/2}
            s.sqrt() / ((2.0 - e * s).powf(1.5) * u.sqrt())
        },
        0.0,
        1.0,
        &period_quadrature_spec(),
    )
}

/// Fundamental period by quadrature of the first integral.
///
/// Librational waves use the closed half-orbit integral `P`; rotational
/// waves integrate `dz/df` over one full turn of `f`.
pub fn fundamental_period(params: WaveParams) -> Result<f64> {
    let class = classify(params.c, params.energy)?;
    let c2m1 = params.c * params.c - 1.0;
    let e = params.energy;
    match (class.speed_regime, class.motion_type) {
        (SpeedRegime::Superluminal, MotionType::Librational) => {
            Ok((2.0 * c2m1).sqrt() * librational_period_integral(e)?)
        }
        (SpeedRegime::Subluminal, MotionType::Librational) => {
            Ok((-2.0 * c2m1).sqrt() * librational_period_integral(2.0 - e)?)
        }
        (_, MotionType::Rotational) => adaptive_quadrature(
            |f: f64| (c2m1 / (2.0 * (e - 1.0 + f.cos()))).sqrt(),
            0.0,
            TAU,
            &period_quadrature_spec(),
        ),
    }
}

/// `T_E = dT/dE`.
///
/// Librational waves differentiate `P` under the integral sign. Rotational
/// waves use a once-Richardson-extrapolated central difference of
/// [`fundamental_period`] with step `max(1e-6, 1e-6 |E|)`.
pub fn period_energy_derivative(params: WaveParams) -> Result<f64> {
    let class = classify(params.c, params.energy)?;
    let c2m1 = params.c * params.c - 1.0;
    let e = params.energy;
    match (class.speed_regime, class.motion_type) {
        (SpeedRegime::Superluminal, MotionType::Librational) => {
            Ok((2.0 * c2m1).sqrt() * librational_period_integral_derivative(e)?)
        }
        (SpeedRegime::Subluminal, MotionType::Librational) => {
            Ok(-(-2.0 * c2m1).sqrt() * librational_period_integral_derivative(2.0 - e)?)
        }
        (_, MotionType::Rotational) => {
            let h = 1e-6_f64.max(1e-6 * e.abs());
            let central = |step: f64| -> Result<f64> {
                let plus = fundamental_period(WaveParams::new(params.c, e + step))?;
                let minus = fundamental_period(WaveParams::new(params.c, e - step))?;
                Ok((plus - minus) / (2.0 * step))
            };
            let coarse = central(h)?;
            let fine = central(0.5 * h)?;
            Ok((4.0 * fine - coarse) / 3.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn wave(c: f64, e: f64) -> WaveProfile {
        WaveProfile::new(WaveParams::new(c, e)).unwrap()
    }

    #[test]
    fn classification_examples() {
        let sqrt3 = 3.0_f64.sqrt();
        assert_eq!(
            classify(sqrt3, 1.0).unwrap(),
            WaveClass {
                speed_regime: SpeedRegime::Superluminal,
                motion_type: MotionType::Librational
            }
        );
        assert_eq!(
            classify(0.5, -1.0).unwrap(),
            WaveClass {
                speed_regime: SpeedRegime::Subluminal,
                motion_type: MotionType::Rotational
            }
        );
        assert_eq!(
            classify(2.0, 3.0).unwrap().label(),
            "superluminal-rotational"
        );
        assert_eq!(
            classify(0.5, 1.0).unwrap().label(),
            "subluminal-librational"
        );
    }

    #[test]
    fn classification_errors() {
        let msg = |r: Result<WaveClass>| match r {
            Err(Error::Domain(m)) => m,
            other => panic!("expected domain error, got {other:?}"),
        };
        assert_eq!(msg(classify(0.5, 3.0)), "no real wave");
        assert_eq!(msg(classify(2.0, -1.0)), "no real wave");
        assert_eq!(msg(classify(1.0, 1.0)), "luminal speed excluded");
        assert_eq!(msg(classify(-1.0, 1.0)), "luminal speed excluded");
        assert_eq!(msg(classify(2.0, 2.0)), "separatrix");
        assert_eq!(msg(classify(0.5, 0.0)), "separatrix");
        assert_eq!(msg(classify(0.5, 5e-10)), "separatrix");
    }

    #[test]
    fn normalization_at_origin() {
        for &(c, e) in &[
            (2.0, 3.0),
            (0.5, -1.0),
            (3.0_f64.sqrt(), 1.0),
            (0.5, 1.0),
            (0.0, 1.0),
        ] {
            let w = wave(c, e);
            let p = w.at(0.0);
            assert_eq!(p.sin_f, 0.0);
            assert!(p.f_prime > 0.0);
            assert_eq!(p.f_prime, w.v0());
            assert!((p.cos_f - w.f0().cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn superluminal_rotational_initial_slope() {
        let p = wave(2.0, 3.0).at(0.0);
        assert!((p.cos_f - 1.0).abs() < 1e-15);
        assert!((p.f_prime - SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn librational_half_period_reflection() {
        let w = wave(3.0_f64.sqrt(), 1.0);
        let p = w.at(0.5 * w.period());
        assert!((p.cos_f - 1.0).abs() < 1e-12);
        assert!((p.f_prime + w.v0()).abs() < 1e-12);
    }

    #[test]
    fn period_of_reference_librational_wave() {
        let params = WaveParams::new(3.0_f64.sqrt(), 1.0);
        let by_quadrature = fundamental_period(params).unwrap();
        let by_elliptic = wave(params.c, params.energy).period();
        assert!((by_quadrature - by_elliptic).abs() < 1e-10);
        assert!((by_elliptic - 10.488_230_217_168_479).abs() < 1e-12);
    }

    #[test]
    fn periods_agree_for_every_class() {
        for &(c, e) in &[
            (2.0, 3.0),
            (0.5, -1.0),
            (0.5, 1.0),
            (1.5, 5.0),
            (0.8, -0.5),
            (0.0, 1.0),
        ] {
            let q = fundamental_period(WaveParams::new(c, e)).unwrap();
            let t = wave(c, e).period();
            assert!(((q - t) / t).abs() < 1e-12, "({c}, {e}): {q} vs {t}");
        }
    }

    #[test]
    fn small_energy_limit_is_linear_pendulum() {
        let c = 3.0_f64.sqrt();
        let t = fundamental_period(WaveParams::new(c, 1e-6)).unwrap();
        let linear = TAU * (c * c - 1.0).sqrt();
        assert!(((t - linear) / linear).abs() < 1e-4);
    }

    #[test]
    fn librational_period_derivative_sign() {
        for &(c, e) in &[
            (3.0_f64.sqrt(), 1.0),
            (0.5, 1.0),
            (1.2, 0.3),
            (0.1, 1.9),
            (0.0, 1.0),
        ] {
            let te = period_energy_derivative(WaveParams::new(c, e)).unwrap();
            assert!((c * c - 1.0) * te > 0.0, "({c}, {e}): T_E = {te}");
        }
    }

    fn finite_difference_te(c: f64, e: f64) -> f64 {
        let h = 1e-4;
        let t = |e: f64| fundamental_period(WaveParams::new(c, e)).unwrap();
        (8.0 * (t(e + h) - t(e - h)) - (t(e + 2.0 * h) - t(e - 2.0 * h))) / (12.0 * h)
    }

    #[test]
    fn period_derivative_matches_finite_difference() {
        for &(c, e) in &[(3.0_f64.sqrt(), 1.0), (0.5, 1.0), (2.0, 3.0), (0.5, -1.0)] {
            let te = period_energy_derivative(WaveParams::new(c, e)).unwrap();
            let fd = finite_difference_te(c, e);
            assert!(((te - fd) / fd).abs() < 1e-6, "({c}, {e}): {te} vs {fd}");
        }
    }

    #[test]
    fn cos_f_fast_path_matches_full_profile() {
        for &(c, e) in &[(2.0, 3.0), (0.5, -1.0), (0.5, 1.0), (3.0_f64.sqrt(), 1.0)] {
            let w = wave(c, e);
            for i in 0..40 {
                let z = -3.0 + 0.37 * i as f64;
                assert_eq!(w.cos_f(z), w.at(z).cos_f);
            }
        }
    }
}
