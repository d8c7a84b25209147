//! Monodromy matrices and Floquet multipliers of the linearized problems.
//!
//! (P) is `p'' - 2 c gamma lambda p' + gamma (lambda^2 + cos f) p = 0`,
//! written as `Y' = A_p Y` with
//! `A_p = [[0, 1], [-gamma (lambda^2 + cos f), 2 c gamma lambda]]`.
//! (Q) is Hill's equation `q'' + gamma cos f q = mu q`, with
//! `A_q = [[0, 1], [mu - gamma cos f, 0]]`. The substitution
//! `q = p exp(-c gamma lambda z)` maps (P) to (Q) at `mu = gamma^2 lambda^2`.
//!
//! Both are integrated from the identity over one period `T` of the wave.
//! For librational waves `cos f` has period `T / 2`, so the half-period
//! matrix is computed and squared.

use std::ops::{Mul, Sub};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ode::{integrate, IntegrationStats, StepControl};
use crate::wave::WaveProfile;

pub const MIN_RTOL: f64 = 1e-13;
pub const MAX_RTOL: f64 = 1e-6;

/// Complex 2×2 matrix in row-major entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexMat2 {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
}

impl ComplexMat2 {
    pub fn new(m11: Complex64, m12: Complex64, m21: Complex64, m22: Complex64) -> Self {
        Self { m11, m12, m21, m22 }
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self::new(one, zero, zero, one)
    }

    pub fn trace(&self) -> Complex64 {
        self.m11 + self.m22
    }

    pub fn det(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// `|m11 m22| + |m12 m21|`: the size of the terms that cancel in
    /// [`ComplexMat2::det`].
    pub fn det_magnitude(&self) -> f64 {
        (self.m11 * self.m22).norm() + (self.m12 * self.m21).norm()
    }

    pub fn inverse(&self) -> Self {
        let d = self.det();
        Self::new(self.m22 / d, -self.m12 / d, -self.m21 / d, self.m11 / d)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.m11 * s, self.m12 * s, self.m21 * s, self.m22 * s)
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        [self.m11, self.m12, self.m21, self.m22]
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.norm()))
    }

    pub fn is_finite(&self) -> bool {
        [self.m11, self.m12, self.m21, self.m22]
            .iter()
            .all(|v| v.is_finite())
    }
}

impl Mul for ComplexMat2 {
    type Output = Self;

    fn mul(self, o: Self) -> Self {
        Self::new(
            self.m11 * o.m11 + self.m12 * o.m21,
            self.m11 * o.m12 + self.m12 * o.m22,
            self.m21 * o.m11 + self.m22 * o.m21,
            self.m21 * o.m12 + self.m22 * o.m22,
        )
    }
}

impl Sub for ComplexMat2 {
    type Output = Self;

    fn sub(self, o: Self) -> Self {
        Self::new(
            self.m11 - o.m11,
            self.m12 - o.m12,
            self.m21 - o.m21,
            self.m22 - o.m22,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum System {
    P,
    Q,
}

/// Monodromy matrix of (P) or (Q) with its invariants.
#[derive(Debug, Clone, Serialize)]
pub struct MonodromyData {
    pub which: System,
    /// `lambda` for (P), `mu` for (Q).
    pub parameter: Complex64,
    pub matrix: ComplexMat2,
    pub trace: Complex64,
    /// Determinant computed from the matrix entries.
    pub det: Complex64,
    /// `trace^2 - 4 det`.
    pub discriminant: Complex64,
    /// `ln` of the determinant predicted by Abel's identity:
    /// `2 c gamma lambda T` for (P) and `0` for (Q).
    pub log_abel_det: Complex64,
    /// `|det - exp(log_abel_det)|` relative to the size of the terms in the
    /// determinant.
    pub abel_residual: f64,
    #[serde(skip)]
    pub stats: IntegrationStats,
}

impl MonodromyData {
    fn new(
        which: System,
        parameter: Complex64,
        matrix: ComplexMat2,
        log_abel_det: Complex64,
        stats: IntegrationStats,
    ) -> Self {
        let trace = matrix.trace();
        let det = matrix.det();
        let expected = log_abel_det.exp();
        let scale = expected.norm().max(matrix.det_magnitude());
        Self {
            which,
            parameter,
            matrix,
            trace,
            det,
            discriminant: trace * trace - 4.0 * det,
            log_abel_det,
            abel_residual: (det - expected).norm() / scale,
            stats,
        }
    }

    /// The determinant from Abel's identity.
    pub fn abel_det(&self) -> Complex64 {
        self.log_abel_det.exp()
    }
}

/// The two Floquet multipliers and `ln|rho_+| ln|rho_-|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FloquetPair {
    /// The root of larger modulus.
    pub rho_plus: Complex64,
    pub rho_minus: Complex64,
    pub log_abs_plus: f64,
    pub log_abs_minus: f64,
    pub g_value: f64,
}

impl FloquetPair {
    /// Roots of `rho^2 - trace rho + det = 0`.
    pub fn from_trace_det(trace: Complex64, det: Complex64) -> Self {
        Self::from_trace_log_det(trace, det.ln())
    }

    /// As [`FloquetPair::from_trace_det`], with the determinant given by its
    /// logarithm so that `ln|rho_-| = ln|det| - ln|rho_+|` stays exact when
    /// the multipliers are far apart in size.
    pub fn from_trace_log_det(trace: Complex64, log_det: Complex64) -> Self {
        let det = log_det.exp();
        let root = (trace * trace - 4.0 * det).sqrt();
        let a = trace + root;
        let b = trace - root;
        let rho_plus = if a.norm() >= b.norm() {
            0.5 * a
        } else {
            0.5 * b
        };
        let rho_minus = det / rho_plus;
        let log_abs_plus = rho_plus.norm().ln();
        let log_abs_minus = log_det.re - log_abs_plus;
        Self {
            rho_plus,
            rho_minus,
            log_abs_plus,
            log_abs_minus,
            g_value: log_abs_plus * log_abs_minus,
        }
    }

    /// Relative separation below which the two roots count as one double
    /// root. A double root splits by the square root of the perturbation,
    /// while the mean `trace / 2` stays accurate.
    pub const CLUSTER_TOL: f64 = 1e-4;

    /// The multiplier nearest `target`, replaced by the pair mean when the
    /// roots form a numerically double root.
    pub fn resolved_nearest(&self, target: Complex64) -> Complex64 {
        let scale = self.rho_plus.norm().max(self.rho_minus.norm());
        if (self.rho_plus - self.rho_minus).norm() < Self::CLUSTER_TOL * scale {
            return 0.5 * (self.rho_plus + self.rho_minus);
        }
        if (self.rho_plus - target).norm() <= (self.rho_minus - target).norm() {
            self.rho_plus
        } else {
            self.rho_minus
        }
    }

    /// The multiplier whose modulus is closest to 1.
    pub fn most_unimodular(&self) -> Complex64 {
        if self.log_abs_plus.abs() <= self.log_abs_minus.abs() {
            self.rho_plus
        } else {
            self.rho_minus
        }
    }
}

pub fn floquet_multipliers(m: &MonodromyData) -> FloquetPair {
    FloquetPair::from_trace_log_det(m.trace, m.log_abel_det)
}

fn check_rtol(rtol: f64) -> Result<()> {
    if !(MIN_RTOL..=MAX_RTOL).contains(&rtol) {
        return Err(Error::domain(format!(
            "rtol {rtol:e} outside [{MIN_RTOL:e}, {MAX_RTOL:e}]"
        )));
    }
    Ok(())
}

/// Number of coefficient periods in one wave period.
fn repeats(profile: &WaveProfile) -> usize {
    if profile.class().is_librational() {
        2
    } else {
        1
    }
}

/// Fundamental matrix at one coefficient period of
/// `y'' = (alpha + beta cos f) y + b y'`.
fn fundamental_complex(
    profile: &WaveProfile,
    alpha: Complex64,
    beta: f64,
    b: Complex64,
    rtol: f64,
) -> Result<(ComplexMat2, IntegrationStats)> {
    // State: column j occupies [4j, 4j + 4) as (Re y, Im y, Re y', Im y').
    let rhs = |z: f64, y: &[f64; 8], dy: &mut [f64; 8]| {
        let a = alpha + beta * profile.cos_f(z);
        for col in 0..2 {
            let o = 4 * col;
            let u = Complex64::new(y[o], y[o + 1]);
            let v = Complex64::new(y[o + 2], y[o + 3]);
            let dv = a * u + b * v;
            dy[o] = v.re;
            dy[o + 1] = v.im;
            dy[o + 2] = dv.re;
            dy[o + 3] = dv.im;
        }
    };
    let y0 = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0];
    let (y, stats) = integrate(
        rhs,
        0.0,
        profile.coefficient_period(),
        y0,
        2,
        &StepControl::new(rtol),
    )?;
    let m = ComplexMat2::new(
        Complex64::new(y[0], y[1]),
        Complex64::new(y[4], y[5]),
        Complex64::new(y[2], y[3]),
        Complex64::new(y[6], y[7]),
    );
    Ok((m, stats))
}

/// Real fast path of [`fundamental_complex`] for `y'' = (alpha + beta cos f) y`.
fn fundamental_real(
    profile: &WaveProfile,
    alpha: f64,
    beta: f64,
    rtol: f64,
) -> Result<(ComplexMat2, IntegrationStats)> {
    let rhs = |z: f64, y: &[f64; 4], dy: &mut [f64; 4]| {
        let a = alpha + beta * profile.cos_f(z);
        dy[0] = y[1];
        dy[1] = a * y[0];
        dy[2] = y[3];
        dy[3] = a * y[2];
    };
    let (y, stats) = integrate(
        rhs,
        0.0,
        profile.coefficient_period(),
        [1.0, 0.0, 0.0, 1.0],
        2,
        &StepControl::new(rtol),
    )?;
    let c = |v: f64| Complex64::new(v, 0.0);
    Ok((ComplexMat2::new(c(y[0]), c(y[2]), c(y[1]), c(y[3])), stats))
}

fn finish(
    profile: &WaveProfile,
    which: System,
    parameter: Complex64,
    (half, stats): (ComplexMat2, IntegrationStats),
    log_abel_det: Complex64,
    rtol: f64,
) -> Result<MonodromyData> {
    let matrix = if repeats(profile) == 2 {
        half * half
    } else {
        half
    };
    if !matrix.is_finite() {
        return Err(Error::Convergence {
            message: format!("monodromy matrix of ({which:?}) overflowed at {parameter}"),
            estimate: f64::NAN,
            error_bound: f64::INFINITY,
        });
    }
    let data = MonodromyData::new(which, parameter, matrix, log_abel_det, stats);
    let bound = 10.0 * rtol;
    if !(data.abel_residual <= bound) {
        return Err(Error::Accuracy {
            check: format!("Abel determinant of ({which:?}) at {parameter}"),
            residual: data.abel_residual,
            bound,
        });
    }
    Ok(data)
}

/// Monodromy matrix of (P) at `lambda`.
pub fn monodromy_p(profile: &WaveProfile, lambda: Complex64, rtol: f64) -> Result<MonodromyData> {
    check_rtol(rtol)?;
    let gamma = profile.gamma();
    let b = 2.0 * profile.c() * gamma * lambda;
    let fundamental = fundamental_complex(profile, -gamma * lambda * lambda, -gamma, b, rtol)?;
    let log_abel_det = b * profile.period();
    finish(profile, System::P, lambda, fundamental, log_abel_det, rtol)
}

/// Monodromy matrix of (Q) at `mu`.
pub fn monodromy_q(profile: &WaveProfile, mu: Complex64, rtol: f64) -> Result<MonodromyData> {
    check_rtol(rtol)?;
    let gamma = profile.gamma();
    let fundamental = if mu.im == 0.0 {
        fundamental_real(profile, mu.re, -gamma, rtol)?
    } else {
        fundamental_complex(profile, mu, -gamma, Complex64::new(0.0, 0.0), rtol)?
    };
    finish(
        profile,
        System::Q,
        mu,
        fundamental,
        Complex64::new(0.0, 0.0),
        rtol,
    )
}

/// `mu = gamma^2 lambda^2`.
pub fn hill_parameter(profile: &WaveProfile, lambda: Complex64) -> Complex64 {
    let g = profile.gamma();
    g * g * lambda * lambda
}

/// `G_p(lambda) = ln|rho_+| ln|rho_-|` for (P); zero exactly on the spectrum.
pub fn g_p(profile: &WaveProfile, lambda: Complex64, rtol: f64) -> Result<f64> {
    Ok(floquet_multipliers(&monodromy_p(profile, lambda, rtol)?).g_value)
}

/// `G_q(lambda) = ln|eta_+| ln|eta_-|` for (Q) at `mu = gamma^2 lambda^2`.
pub fn g_q(profile: &WaveProfile, lambda: Complex64, rtol: f64) -> Result<f64> {
    let mu = hill_parameter(profile, lambda);
    Ok(floquet_multipliers(&monodromy_q(profile, mu, rtol)?).g_value)
}

/// `H = [[1, 0], [-c gamma lambda, 1]]`, mapping (P) solutions to (Q) ones.
pub fn conjugator(profile: &WaveProfile, lambda: Complex64) -> ComplexMat2 {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    ComplexMat2::new(one, zero, -profile.c() * profile.gamma() * lambda, one)
}

/// `max|M_q - exp(-c gamma lambda T) H M_p H^{-1}|`, relative to
/// `max(1, max|M_q|)`.
pub fn conjugation_residual(profile: &WaveProfile, lambda: Complex64, rtol: f64) -> Result<f64> {
    let mp = monodromy_p(profile, lambda, rtol)?.matrix;
    let mq = monodromy_q(profile, hill_parameter(profile, lambda), rtol)?.matrix;
    Ok(conjugation_residual_of(profile, lambda, &mp, &mq))
}

pub(crate) fn conjugation_residual_of(
    profile: &WaveProfile,
    lambda: Complex64,
    mp: &ComplexMat2,
    mq: &ComplexMat2,
) -> f64 {
    let h = conjugator(profile, lambda);
    let factor = (-profile.c() * profile.gamma() * lambda * profile.period()).exp();
    let mapped = (h * *mp * h.inverse()).scale(factor);
    (*mq - mapped).max_norm() / mq.max_norm().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wave::WaveParams;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn periodic_double_root() {
        let f = FloquetPair::from_trace_det(c(2.0, 0.0), c(1.0, 0.0));
        assert!((f.rho_plus - 1.0).norm() < 1e-15);
        assert!((f.rho_minus - 1.0).norm() < 1e-15);
        assert_eq!(f.g_value, 0.0);
    }

    #[test]
    fn reciprocal_pair() {
        let f = FloquetPair::from_trace_det(c(2.5, 0.0), c(1.0, 0.0));
        assert!((f.rho_plus - 2.0).norm() < 1e-15);
        assert!((f.rho_minus - 0.5).norm() < 1e-15);
        let ln2 = 2.0_f64.ln();
        assert!((f.g_value + ln2 * ln2).abs() < 1e-15);
    }

    #[test]
    fn matrix_algebra() {
        let m = ComplexMat2::new(c(1.0, 2.0), c(0.5, 0.0), c(-1.0, 1.0), c(3.0, -1.0));
        let p = m * m.inverse();
        assert!((p - ComplexMat2::identity()).max_norm() < 1e-15);
        assert!(
            (m.det() - (c(1.0, 2.0) * c(3.0, -1.0) - c(0.5, 0.0) * c(-1.0, 1.0))).norm() < 1e-15
        );
    }

    #[test]
    fn rtol_range_is_enforced() {
        let w = WaveProfile::new(WaveParams::new(2.0, 3.0)).unwrap();
        assert!(matches!(
            monodromy_p(&w, c(0.0, 0.0), 1e-14),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            monodromy_q(&w, c(0.0, 0.0), 1e-5),
            Err(Error::Domain(_))
        ));
    }
}
