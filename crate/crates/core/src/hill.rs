//! Hill's equation `q'' + gamma cos f q = mu q` for real `mu`.
//!
//! The discriminant `Delta_q(mu)` is the trace of the monodromy matrix over
//! the wave period `T`. Bands are where `|Delta_q| <= 2`. In every case
//! the equation is a Lamé equation `w'' + (h - 2 k^2 sn^2) w = 0` with
//! `nu = 1` under an affine map `h = A + B mu`, so it has exactly one open
//! gap, with edges at `h = 1` and `h = 1 + k^2`; the top of the spectrum is
//! `h = k^2`.
//!
//! For librational waves `T` is twice the period of `cos f`. Measured over
//! `T`, every edge has `Delta_q = 2`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::monodromy::monodromy_q;
use crate::wave::{period_energy_derivative, MotionType, SpeedRegime, WaveClass, WaveProfile};

/// Minimum number of grid points in the band-edge scan.
pub const SCAN_POINTS: usize = 401;
/// Bisection tolerance for band edges.
pub const EDGE_TOL: f64 = 1e-11;
/// `|Delta_q| - 2` below this counts as band, which absorbs closed gaps.
pub const GAP_THRESHOLD: f64 = 1e-8;
/// Step of the central difference for `dDelta_q/dmu` at zero.
pub const SLOPE_STEP: f64 = 1e-5;

/// `Delta_q(mu)` for real `mu`.
pub fn delta_q(profile: &WaveProfile, mu: f64, rtol: f64) -> Result<f64> {
    let m = monodromy_q(profile, Complex64::new(mu, 0.0), rtol)?;
    if m.trace.im.abs() > 1e-10 {
        return Err(Error::Accuracy {
            check: format!("imaginary part of Delta_q({mu})"),
            residual: m.trace.im.abs(),
            bound: 1e-10,
        });
    }
    Ok(m.trace.re)
}

/// Parameters of the Lamé form of (Q) at one `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LameParams {
    pub k: f64,
    pub h: f64,
    pub nu: f64,
    /// `zeta = scale * z`.
    pub scale: f64,
    pub case: WaveClass,
    /// `h = h_intercept + h_slope * mu`.
    pub h_intercept: f64,
    pub h_slope: f64,
}

/// The affine map `mu -> h` as `(intercept, slope)`.
fn lame_map(profile: &WaveProfile) -> (f64, f64) {
    let k2 = profile.modulus().value().powi(2);
    let gamma = profile.gamma();
    let class = profile.class();
    match (class.speed_regime, class.motion_type) {
        (SpeedRegime::Superluminal, MotionType::Rotational) => (k2, -k2 / gamma),
        (SpeedRegime::Subluminal, MotionType::Rotational) => (k2, k2 / gamma),
        (SpeedRegime::Superluminal, MotionType::Librational) => (1.0, -1.0 / gamma),
        (SpeedRegime::Subluminal, MotionType::Librational) => (1.0, 1.0 / gamma),
    }
}

pub fn lame_params(profile: &WaveProfile, mu: f64) -> LameParams {
    let (h_intercept, h_slope) = lame_map(profile);
    LameParams {
        k: profile.modulus().value(),
        h: h_intercept + h_slope * mu,
        nu: 1.0,
        scale: profile.scale(),
        case: profile.class(),
        h_intercept,
        h_slope,
    }
}

/// `mu` at the three Lamé edges `h = k^2, 1, 1 + k^2` (in decreasing `mu`).
pub fn lame_band_edges(profile: &WaveProfile) -> [f64; 3] {
    let (a, b) = lame_map(profile);
    let k2 = profile.modulus().value().powi(2);
    [k2, 1.0, 1.0 + k2].map(|h| (h - a) / b)
}

#[derive(Debug, Clone, Serialize)]
pub struct BandStructure {
    /// Largest periodic eigenvalue.
    pub mu0_0: f64,
    /// Second periodic eigenvalue (librational waves only).
    pub mu1_0: Option<f64>,
    /// The open gap `(lower, upper)`.
    pub gap: (f64, f64),
    pub mu_star: f64,
    pub beta_star: f64,
    pub alpha_star: Option<f64>,
    /// All located edges, increasing.
    pub edges: Vec<f64>,
    /// `dDelta_q/dmu` at `mu = 0` (librational waves only).
    pub slope_at_zero: Option<f64>,
    pub window: (f64, f64),
    pub grid_points: usize,
    pub period: f64,
    pub coefficient_period: f64,
}

/// Locates the band edges of (Q) in `[mu_min, |gamma| + 1]`.
///
/// Every periodic eigenvalue lies below `max(gamma cos f) = |gamma|`, so the
/// window always contains the top of the spectrum with a margin of at least
/// one. `mu_min` defaults to one below the lowest Lamé edge.
pub fn band_structure(
    profile: &WaveProfile,
    mu_min: Option<f64>,
    rtol: f64,
) -> Result<BandStructure> {
    let lame = lame_band_edges(profile);
    let mu_min = mu_min.unwrap_or(lame[2] - 1.0);
    let mu_max = profile.gamma().abs() + 1.0;
    if !(mu_min < mu_max) {
        return Err(Error::domain(format!(
            "mu_min = {mu_min} is not below the window top {mu_max}"
        )));
    }
    let n = SCAN_POINTS;
    let step = (mu_max - mu_min) / (n - 1) as f64;
    let grid: Vec<f64> = (0..n).map(|i| mu_min + step * i as f64).collect();
    let excess: Vec<f64> = grid
        .par_iter()
        .map(|&mu| delta_q(profile, mu, rtol).map(|d| d.abs() - 2.0))
        .collect::<Result<_>>()?;

    let in_gap = |e: f64| e > GAP_THRESHOLD;
    let mut edges = Vec::new();
    for i in 0..n - 1 {
        if in_gap(excess[i]) != in_gap(excess[i + 1]) {
            edges.push(bisect_edge(
                profile,
                grid[i],
                grid[i + 1],
                in_gap(excess[i]),
                rtol,
            )?);
        }
    }

    if !in_gap(excess[n - 1]) {
        return Err(Error::Structure(format!(
            "Delta_q is not in the gap at the window top mu = {mu_max}"
        )));
    }
    // Above the top edge lies the unbounded gap; every other gap is a pair.
    if edges.len() % 2 == 0 {
        return Err(Error::Structure(
            "an open gap is cut by the lower end of the window; lower mu_min".into(),
        ));
    }
    let open_gaps = edges.len() / 2;
    if open_gaps != 1 {
        return Err(Error::Structure(format!(
            "expected exactly one open gap, found {open_gaps} (edges {edges:?})"
        )));
    }
    let mu0_0 = edges[2];
    let gap = (edges[0], edges[1]);
    let gamma = profile.gamma();
    let mu_star = 0.5 * (gap.0 + gap.1);
    if mu_star >= 0.0 {
        return Err(Error::Structure(format!("gap {gap:?} is not below zero")));
    }
    let beta_star = (-mu_star).sqrt() / gamma.abs();

    let (mu1_0, alpha_star, slope_at_zero) = if profile.class().is_librational() {
        if !(mu0_0 > 0.0) {
            return Err(Error::Structure(format!(
                "librational wave with top periodic eigenvalue {mu0_0} <= 0"
            )));
        }
        let slope = delta_q_slope_at_zero(profile, rtol)?;
        if !(slope < 0.0) {
            return Err(Error::Structure(format!(
                "dDelta_q/dmu at zero is {slope:e}, expected negative"
            )));
        }
        (Some(gap.1), Some(mu0_0.sqrt() / gamma.abs()), Some(slope))
    } else {
        (None, None, None)
    };

    Ok(BandStructure {
        mu0_0,
        mu1_0,
        gap,
        mu_star,
        beta_star,
        alpha_star,
        edges,
        slope_at_zero,
        window: (mu_min, mu_max),
        grid_points: n,
        period: profile.period(),
        coefficient_period: profile.coefficient_period(),
    })
}

/// Bisects a band/gap transition in `[lo, hi]` down to [`EDGE_TOL`].
fn bisect_edge(
    profile: &WaveProfile,
    mut lo: f64,
    mut hi: f64,
    lo_in_gap: bool,
    rtol: f64,
) -> Result<f64> {
    while hi - lo > EDGE_TOL {
        let mid = 0.5 * (lo + hi);
        let gap = delta_q(profile, mid, rtol)?.abs() - 2.0 > 0.0;
        if gap == lo_in_gap {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Central difference of `Delta_q` at `mu = 0` with step [`SLOPE_STEP`].
pub fn delta_q_slope_at_zero(profile: &WaveProfile, rtol: f64) -> Result<f64> {
    let plus = delta_q(profile, SLOPE_STEP, rtol)?;
    let minus = delta_q(profile, -SLOPE_STEP, rtol)?;
    Ok((plus - minus) / (2.0 * SLOPE_STEP))
}

/// Comparison of `M_q(0)` with `[[1, -v0^2 (c^2 - 1) T_E], [0, 1]]`.
#[derive(Debug, Clone, Serialize)]
pub struct MqZeroReport {
    pub residual: f64,
    pub computed_m12: f64,
    pub predicted_m12: f64,
    pub period_energy_derivative: f64,
    pub slope_at_zero: f64,
}

pub const MQ_ZERO_BOUND: f64 = 1e-6;

pub fn verify_mq_zero(profile: &WaveProfile, rtol: f64) -> Result<MqZeroReport> {
    let m = monodromy_q(profile, Complex64::new(0.0, 0.0), rtol)?.matrix;
    let te = period_energy_derivative(profile.params())?;
    let c2m1 = profile.c() * profile.c() - 1.0;
    let predicted_m12 = -profile.v0() * profile.v0() * c2m1 * te;
    let residual = [
        (m.m11 - 1.0).norm(),
        (m.m12 - predicted_m12).norm(),
        m.m21.norm(),
        (m.m22 - 1.0).norm(),
    ]
    .into_iter()
    .fold(0.0_f64, f64::max);
    if !(residual <= MQ_ZERO_BOUND) {
        return Err(Error::Accuracy {
            check: "M_q(0) form".into(),
            residual,
            bound: MQ_ZERO_BOUND,
        });
    }
    let slope_at_zero = delta_q_slope_at_zero(profile, rtol)?;
    if slope_at_zero.signum() != -(c2m1 * te).signum() {
        return Err(Error::Structure(format!(
            "sign of dDelta_q/dmu at zero ({slope_at_zero:e}) does not oppose (c^2 - 1) T_E ({:e})",
            c2m1 * te
        )));
    }
    Ok(MqZeroReport {
        residual,
        computed_m12: m.m12.re,
        predicted_m12,
        period_energy_derivative: te,
        slope_at_zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wave::WaveParams;

    fn wave(c: f64, e: f64) -> WaveProfile {
        WaveProfile::new(WaveParams::new(c, e)).unwrap()
    }

    #[test]
    fn lame_params_at_zero() {
        let p = lame_params(&wave(2.0, 3.0), 0.0);
        assert!((p.k - (2.0_f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((p.h - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(p.nu, 1.0);
        let p = lame_params(&wave(3.0_f64.sqrt(), 1.0), 0.0);
        assert!((p.k - 0.5_f64.sqrt()).abs() < 1e-15);
        assert!((p.h - 1.0).abs() < 1e-15);
        assert!((p.scale - 0.5_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn lame_map_is_decreasing() {
        for &(c, e) in &[(2.0, 3.0), (0.5, -1.0), (3.0_f64.sqrt(), 1.0), (0.5, 1.0)] {
            assert!(lame_params(&wave(c, e), 0.0).h_slope < 0.0);
        }
    }

    #[test]
    fn lame_edges_of_reference_waves() {
        let close = |a: [f64; 3], b: [f64; 3]| a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-14);
        assert!(close(
            lame_band_edges(&wave(2.0, 3.0)),
            [0.0, -1.0 / 6.0, -0.5]
        ));
        assert!(close(
            lame_band_edges(&wave(3.0_f64.sqrt(), 1.0)),
            [0.25, 0.0, -0.25]
        ));
        assert!(close(
            lame_band_edges(&wave(0.5, 1.0)),
            [2.0 / 3.0, 0.0, -2.0 / 3.0]
        ));
    }
}
