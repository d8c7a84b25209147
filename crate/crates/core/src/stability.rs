//! Stability verdicts, instability certificates and spectrum tracing.
//!
//! `lambda` is in the spectrum of (P) exactly when `G_p(lambda) = 0`. The
//! certificates follow the intermediate-value argument: `G_p < 0` at a
//! point `i beta_*` whose image `mu_*` lies in the open Hill gap, `G_p > 0`
//! at a real point, and bisection along the straight segment between them
//! finds a zero with positive real part.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result, SearchFailure};
use crate::hill::{band_structure, delta_q, BandStructure, GAP_THRESHOLD};
use crate::monodromy::{floquet_multipliers, monodromy_p, FloquetPair, MIN_RTOL};
use crate::wave::{MotionType, SpeedRegime, WaveProfile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Relative tolerance of the monodromy integrations.
    pub ode_rtol: f64,
    /// Bisection stops once `|G_p|` drops below this.
    pub gp_tol: f64,
    /// Bisection also stops once the bracket in the path parameter is this narrow.
    pub bracket_tol: f64,
    /// Allowed `||rho| - 1|` for the unimodular multiplier of a certificate.
    pub unimodular_tol: f64,
    /// Cap on the doubling search for a large real point, as a power of two.
    pub max_doublings: u32,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            ode_rtol: 1e-10,
            gp_tol: 1e-10,
            bracket_tol: 1e-14,
            unimodular_tol: 1e-6,
            max_doublings: 15,
        }
    }
}

/// `G_p` and the multipliers at `lambda`. An Abel-check failure is retried
/// once with a ten times smaller tolerance.
pub fn evaluate_gp(profile: &WaveProfile, lambda: Complex64, rtol: f64) -> Result<FloquetPair> {
    match monodromy_p(profile, lambda, rtol) {
        Ok(m) => Ok(floquet_multipliers(&m)),
        Err(Error::Accuracy { .. }) if rtol / 10.0 >= MIN_RTOL => Ok(floquet_multipliers(
            &monodromy_p(profile, lambda, rtol / 10.0)?,
        )),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InstabilityCertificate {
    pub lambda_star: Complex64,
    pub gp_residual: f64,
    pub unimodular_multiplier: Complex64,
    /// Endpoints `(lambda0, lambda1)` of the search segment.
    pub path: (Complex64, Complex64),
    pub gp_at_endpoints: (f64, f64),
    pub iterations: usize,
    /// Final bracket width in the path parameter `t`.
    pub bracket_width: f64,
}

/// Outcome of bisecting `G_p` along `lambda0 (1 - t) + lambda1 t`.
struct Root {
    lambda: Complex64,
    pair: FloquetPair,
    iterations: usize,
    bracket_width: f64,
}

/// Bisection with `G_p(lambda0)` and `G_p(lambda1)` of opposite signs.
fn bisect_segment(
    profile: &WaveProfile,
    lambda0: Complex64,
    lambda1: Complex64,
    g0: f64,
    tol: &Tolerances,
) -> Result<Root> {
    let point = |t: f64| lambda0 * (1.0 - t) + lambda1 * t;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let lo_positive = g0 > 0.0;
    let mut iterations = 0;
    let mut best: Option<(f64, FloquetPair)> = None;
    while hi - lo > tol.bracket_tol {
        let mid = 0.5 * (lo + hi);
        let pair = evaluate_gp(profile, point(mid), tol.ode_rtol)?;
        iterations += 1;
        if best.is_none_or(|(_, b)| pair.g_value.abs() < b.g_value.abs()) {
            best = Some((mid, pair));
        }
        if pair.g_value.abs() < tol.gp_tol {
            break;
        }
        if (pair.g_value > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (t, pair) = best.expect("bracket_tol below 1 guarantees one evaluation");
    Ok(Root {
        lambda: point(t),
        pair,
        iterations,
        bracket_width: hi - lo,
    })
}

/// Tolerance for re-resolving multipliers at a located root.
fn fine_rtol(tol: &Tolerances) -> f64 {
    (tol.ode_rtol * 1e-2).max(MIN_RTOL)
}

fn sign_failure(endpoint: &'static str, lambda: Complex64, gp: f64) -> Error {
    Error::Search(SearchFailure::SignCondition {
        endpoint,
        lambda_re: lambda.re,
        lambda_im: lambda.im,
        gp,
    })
}

/// First `lambda = start * 2^j` (`j <= max_doublings`) at which
/// `G_p(lambda)` has the sign of `want_positive`.
fn doubling_search(
    profile: &WaveProfile,
    start: f64,
    want_positive: bool,
    tol: &Tolerances,
) -> Result<(f64, f64)> {
    let mut lambda = start;
    let mut gp = f64::NAN;
    for _ in 0..=tol.max_doublings {
        gp = evaluate_gp(profile, Complex64::new(lambda, 0.0), tol.ode_rtol)?.g_value;
        if (gp > 0.0) == want_positive && gp != 0.0 {
            return Ok((lambda, gp));
        }
        lambda *= 2.0;
    }
    Err(Error::Search(SearchFailure::DoublingExhausted {
        last_lambda: lambda / 2.0,
        last_gp: gp,
    }))
}

fn certificate_from_root(
    root: Root,
    path: (Complex64, Complex64),
    gp_at_endpoints: (f64, f64),
    tol: &Tolerances,
) -> Result<InstabilityCertificate> {
    let unimodular = root.pair.most_unimodular();
    if !((unimodular.norm() - 1.0).abs() < tol.unimodular_tol) {
        return Err(Error::Search(SearchFailure::Unverified(format!(
            "no unimodular multiplier at {} (|rho| = {})",
            root.lambda,
            unimodular.norm()
        ))));
    }
    if !(root.lambda.re > 0.0) {
        return Err(Error::Search(SearchFailure::Unverified(format!(
            "located root {} is not in the right half-plane",
            root.lambda
        ))));
    }
    Ok(InstabilityCertificate {
        lambda_star: root.lambda,
        gp_residual: root.pair.g_value.abs(),
        unimodular_multiplier: unimodular,
        path,
        gp_at_endpoints,
        iterations: root.iterations,
        bracket_width: root.bracket_width,
    })
}

/// Searches for a temporal eigenvalue with positive real part.
pub fn find_unstable_eigenvalue(
    profile: &WaveProfile,
    tol: &Tolerances,
) -> Result<InstabilityCertificate> {
    let class = profile.class();
    if class.is_subluminal() && !class.is_librational() {
        return Err(Error::Search(SearchFailure::WrongClass(class)));
    }
    let bands = band_structure(profile, None, tol.ode_rtol)?;
    find_unstable_eigenvalue_with(profile, &bands, tol)
}

/// [`find_unstable_eigenvalue`] with a precomputed band structure.
pub fn find_unstable_eigenvalue_with(
    profile: &WaveProfile,
    bands: &BandStructure,
    tol: &Tolerances,
) -> Result<InstabilityCertificate> {
    let class = profile.class();
    if class.is_subluminal() && !class.is_librational() {
        return Err(Error::Search(SearchFailure::WrongClass(class)));
    }
    let lambda0 = Complex64::new(0.0, bands.beta_star);
    let g0 = evaluate_gp(profile, lambda0, tol.ode_rtol)?.g_value;
    if !(g0 < 0.0) {
        return Err(sign_failure("lambda0", lambda0, g0));
    }

    if profile.c() == 0.0 {
        // (P) and (Q) coincide, and alpha_* maps to the periodic eigenvalue mu_0.
        // The multipliers there are a double root, split by the square root
        // of the integration error, so they are resolved at a finer tolerance.
        let alpha = bands.alpha_star.expect("c = 0 waves are librational");
        let lambda1 = Complex64::new(alpha, 0.0);
        let pair = evaluate_gp(profile, lambda1, fine_rtol(tol))?;
        let root = Root {
            lambda: lambda1,
            pair,
            iterations: 0,
            bracket_width: 0.0,
        };
        return certificate_from_root(root, (lambda0, lambda1), (g0, pair.g_value), tol);
    }

    let (lambda1, g1) = match class.motion_type {
        MotionType::Librational => {
            let lambda1 = Complex64::new(bands.alpha_star.expect("librational"), 0.0);
            let g1 = evaluate_gp(profile, lambda1, tol.ode_rtol)?.g_value;
            if !(g1 > 0.0) {
                return Err(sign_failure("lambda1", lambda1, g1));
            }
            (lambda1, g1)
        }
        MotionType::Rotational => {
            let (l, g) = doubling_search(profile, 1.0, true, tol)?;
            (Complex64::new(l, 0.0), g)
        }
    };
    let root = bisect_segment(profile, lambda0, lambda1, g0, tol)?;
    certificate_from_root(root, (lambda0, lambda1), (g0, g1), tol)
}

/// Result of sampling `G_p` over a box in the open right half-plane.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub samples: usize,
    pub re_range: (f64, f64),
    pub im_range: (f64, f64),
    /// Largest sampled `G_p`; negative when the audit passes.
    pub max_gp: f64,
    pub argmax: Complex64,
}

pub const AUDIT_RE_RANGE: (f64, f64) = (0.05, 2.0);
pub const AUDIT_IM_RANGE: (f64, f64) = (0.0, 2.0);
pub const AUDIT_THRESHOLD: f64 = -1e-12;

/// Radical inverse of `i` in `base`.
pub fn halton(mut i: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Checks `G_p < 0` at `n_samples` Halton points of
/// `[0.05, 2] x [0, 2i]`.
pub fn stability_audit_subluminal_rotational(
    profile: &WaveProfile,
    n_samples: usize,
    rtol: f64,
) -> Result<AuditReport> {
    let class = profile.class();
    if !(class.speed_regime == SpeedRegime::Subluminal
        && class.motion_type == MotionType::Rotational)
    {
        return Err(Error::Search(SearchFailure::WrongClass(class)));
    }
    let (re0, re1) = AUDIT_RE_RANGE;
    let (im0, im1) = AUDIT_IM_RANGE;
    let points: Vec<Complex64> = (1..=n_samples)
        .map(|i| {
            Complex64::new(
                re0 + (re1 - re0) * halton(i, 2),
                im0 + (im1 - im0) * halton(i, 3),
            )
        })
        .collect();
    let values: Vec<f64> = points
        .par_iter()
        .map(|&l| evaluate_gp(profile, l, rtol).map(|p| p.g_value))
        .collect::<Result<_>>()?;
    let (argmax, max_gp) = points.iter().zip(&values).fold(
        (Complex64::new(f64::NAN, f64::NAN), f64::NEG_INFINITY),
        |acc, (&l, &g)| {
            if g > acc.1 {
                (l, g)
            } else {
                acc
            }
        },
    );
    if !(max_gp < AUDIT_THRESHOLD) {
        return Err(Error::Structure(format!(
            "G_p({argmax}) = {max_gp:e} is not negative for a subluminal rotational wave"
        )));
    }
    Ok(AuditReport {
        samples: n_samples,
        re_range: AUDIT_RE_RANGE,
        im_range: AUDIT_IM_RANGE,
        max_gp,
        argmax,
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Stable { audit: AuditReport },
    Unstable { certificate: InstabilityCertificate },
}

impl Verdict {
    pub fn is_stable(&self) -> bool {
        matches!(self, Verdict::Stable { .. })
    }
}

pub const AUDIT_SAMPLES: usize = 200;

/// Subluminal rotational waves are stable; every other class is unstable.
pub fn classify_stability(profile: &WaveProfile, tol: &Tolerances) -> Result<Verdict> {
    let class = profile.class();
    if class.is_subluminal() && !class.is_librational() {
        let audit = stability_audit_subluminal_rotational(profile, AUDIT_SAMPLES, tol.ode_rtol)?;
        Ok(Verdict::Stable { audit })
    } else {
        let certificate = find_unstable_eigenvalue(profile, tol)?;
        Ok(Verdict::Unstable { certificate })
    }
}

/// The positive real periodic eigenvalue of a subluminal librational wave.
#[derive(Debug, Clone, Serialize)]
pub struct RealEigenvalue {
    pub lambda_star: f64,
    pub rho: Complex64,
    pub gp_residual: f64,
    pub path: (f64, f64),
    pub iterations: usize,
}

pub fn real_periodic_eigenvalue(profile: &WaveProfile, tol: &Tolerances) -> Result<RealEigenvalue> {
    let class = profile.class();
    if !(class.is_subluminal() && class.is_librational()) {
        return Err(Error::Search(SearchFailure::WrongClass(class)));
    }
    let bands = band_structure(profile, None, tol.ode_rtol)?;
    let alpha = bands.alpha_star.expect("librational");
    let lambda0 = Complex64::new(alpha, 0.0);
    let p0 = evaluate_gp(profile, lambda0, tol.ode_rtol)?;

    let (root, lambda1) = if profile.c() == 0.0 {
        let root = Root {
            lambda: lambda0,
            pair: p0,
            iterations: 0,
            bracket_width: 0.0,
        };
        (root, alpha)
    } else {
        if !(p0.g_value > 0.0) {
            return Err(sign_failure("lambda0", lambda0, p0.g_value));
        }
        let (lambda1, _) = doubling_search(profile, 2.0 * alpha, false, tol)?;
        let root = bisect_segment(
            profile,
            lambda0,
            Complex64::new(lambda1, 0.0),
            p0.g_value,
            tol,
        )?;
        (root, lambda1)
    };
    let rho = evaluate_gp(profile, root.lambda, fine_rtol(tol))?
        .resolved_nearest(Complex64::new(1.0, 0.0));
    if !((rho - 1.0).norm() < 1e-5) {
        return Err(Error::Search(SearchFailure::Unverified(format!(
            "multiplier nearest 1 at lambda = {} is {rho}",
            root.lambda.re
        ))));
    }
    Ok(RealEigenvalue {
        lambda_star: root.lambda.re,
        rho,
        gp_residual: root.pair.g_value.abs(),
        path: (alpha, lambda1),
        iterations: root.iterations,
    })
}

/// Maximal `beta`-intervals with `i beta` in the spectrum of (P).
#[derive(Debug, Clone, Serialize)]
pub struct ImagAxisSpectrum {
    pub beta_intervals: Vec<(f64, f64)>,
    pub beta_max: f64,
    pub samples: usize,
}

/// `i beta` is in the spectrum of (P) exactly when `mu = -gamma^2 beta^2` is
/// in a band of (Q). Samples `[0, beta_max]` at `n` points and bisects each
/// band/gap transition.
pub fn imaginary_axis_spectrum(
    profile: &WaveProfile,
    beta_max: f64,
    n: usize,
    rtol: f64,
) -> Result<ImagAxisSpectrum> {
    if !(beta_max > 0.0) || n < 2 {
        return Err(Error::domain(
            "imaginary_axis_spectrum needs beta_max > 0 and n >= 2",
        ));
    }
    let g2 = profile.gamma() * profile.gamma();
    let excess =
        |beta: f64| -> Result<f64> { Ok(delta_q(profile, -g2 * beta * beta, rtol)?.abs() - 2.0) };
    let betas: Vec<f64> = (0..n)
        .map(|i| beta_max * i as f64 / (n - 1) as f64)
        .collect();
    let in_band: Vec<bool> = betas
        .par_iter()
        .map(|&b| excess(b).map(|e| e <= GAP_THRESHOLD))
        .collect::<Result<_>>()?;

    let bisect = |mut lo: f64, mut hi: f64, lo_band: bool| -> Result<f64> {
        while hi - lo > 1e-12 * beta_max.max(1.0) {
            let mid = 0.5 * (lo + hi);
            if (excess(mid)? <= 0.0) == lo_band {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    };

    let mut intervals = Vec::new();
    let mut start = if in_band[0] { Some(0.0) } else { None };
    for i in 0..n - 1 {
        if in_band[i] == in_band[i + 1] {
            continue;
        }
        let edge = bisect(betas[i], betas[i + 1], in_band[i])?;
        match start.take() {
            Some(s) => intervals.push((s, edge)),
            None => start = Some(edge),
        }
    }
    if let Some(s) = start {
        intervals.push((s, beta_max));
    }
    Ok(ImagAxisSpectrum {
        beta_intervals: intervals,
        beta_max,
        samples: n,
    })
}

/// A rectangle `[re_min, re_max] x [im_min, im_max]` sampled at `nx * ny` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn re(&self, i: usize) -> f64 {
        lerp(self.re_min, self.re_max, i, self.nx)
    }

    pub fn im(&self, j: usize) -> f64 {
        lerp(self.im_min, self.im_max, j, self.ny)
    }

    pub fn dx(&self) -> f64 {
        (self.re_max - self.re_min) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.im_max - self.im_min) / (self.ny - 1) as f64
    }
}

/// `i`-th of `n` equispaced points on `[a, b]`, computed from the nearer end
/// so that grids on symmetric boxes are exactly symmetric.
fn lerp(a: f64, b: f64, i: usize, n: usize) -> f64 {
    let last = (n - 1) as f64;
    if 2 * i < n {
        a + (b - a) * (i as f64 / last)
    } else {
        b - (b - a) * ((n - 1 - i) as f64 / last)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumContour {
    pub grid: Grid,
    /// `gp_samples[j][i] = G_p(re(i) + i im(j))`; NaN where integration failed.
    pub gp_samples: Vec<Vec<f64>>,
    pub failed_points: usize,
    pub polylines: Vec<Vec<Complex64>>,
}

pub const MIN_CONTOUR_GRID: usize = 16;
pub const MAX_FAILED_FRACTION: f64 = 0.01;

/// Zero-level set of `G_p` over `grid`.
pub fn spectrum_contours(profile: &WaveProfile, grid: Grid, rtol: f64) -> Result<SpectrumContour> {
    if grid.nx < MIN_CONTOUR_GRID || grid.ny < MIN_CONTOUR_GRID {
        return Err(Error::domain(format!(
            "contour grid must be at least {MIN_CONTOUR_GRID} x {MIN_CONTOUR_GRID}"
        )));
    }
    if !(grid.re_min < grid.re_max && grid.im_min < grid.im_max) {
        return Err(Error::domain("contour box must have positive extent"));
    }
    let values: Vec<f64> = (0..grid.nx * grid.ny)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % grid.nx, idx / grid.nx);
            let lambda = Complex64::new(grid.re(i), grid.im(j));
            evaluate_gp(profile, lambda, rtol).map_or(f64::NAN, |p| p.g_value)
        })
        .collect();
    let failed_points = values.iter().filter(|v| !v.is_finite()).count();
    let fraction = failed_points as f64 / values.len() as f64;
    if fraction > MAX_FAILED_FRACTION {
        return Err(Error::Accuracy {
            check: "fraction of failed contour grid points".into(),
            residual: fraction,
            bound: MAX_FAILED_FRACTION,
        });
    }
    let gp_samples: Vec<Vec<f64>> = values.chunks(grid.nx).map(<[f64]>::to_vec).collect();
    let polylines = marching_squares(&grid, &gp_samples);
    Ok(SpectrumContour {
        grid,
        gp_samples,
        failed_points,
        polylines,
    })
}

/// Grid edge carrying a contour vertex: horizontal from `(i, j)` to
/// `(i + 1, j)` or vertical from `(i, j)` to `(i, j + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum EdgeKey {
    H(usize, usize),
    V(usize, usize),
}

/// Zero-level polylines of `values` by marching squares with linear
/// interpolation. Cells touching a NaN are skipped; saddles are resolved by
/// the cell-centre average.
pub fn marching_squares(grid: &Grid, values: &[Vec<f64>]) -> Vec<Vec<Complex64>> {
    use std::collections::BTreeMap;

    let point = |key: EdgeKey| -> Complex64 {
        let ((i0, j0), (i1, j1)) = match key {
            EdgeKey::H(i, j) => ((i, j), (i + 1, j)),
            EdgeKey::V(i, j) => ((i, j), (i, j + 1)),
        };
        let (a, b) = (values[j0][i0], values[j1][i1]);
        let t = a / (a - b);
        let p0 = Complex64::new(grid.re(i0), grid.im(j0));
        let p1 = Complex64::new(grid.re(i1), grid.im(j1));
        p0 + (p1 - p0) * t
    };

    let mut links: BTreeMap<EdgeKey, Vec<EdgeKey>> = BTreeMap::new();
    let mut link = |a: EdgeKey, b: EdgeKey| {
        links.entry(a).or_default().push(b);
        links.entry(b).or_default().push(a);
    };
    for j in 0..grid.ny - 1 {
        for i in 0..grid.nx - 1 {
            let v = [
                values[j][i],
                values[j][i + 1],
                values[j + 1][i + 1],
                values[j + 1][i],
            ];
            if v.iter().any(|x| !x.is_finite()) {
                continue;
            }
            let inside = v.map(|x| x > 0.0);
            // Edges of the cell in corner order: bottom, right, top, left.
            let edges = [
                EdgeKey::H(i, j),
                EdgeKey::V(i + 1, j),
                EdgeKey::H(i, j + 1),
                EdgeKey::V(i, j),
            ];
            let crossing: Vec<usize> = (0..4)
                .filter(|&e| inside[e] != inside[(e + 1) % 4])
                .collect();
            match crossing.len() {
                2 => link(edges[crossing[0]], edges[crossing[1]]),
                4 => {
                    let centre_inside = v.iter().sum::<f64>() > 0.0;
                    if centre_inside == inside[0] {
                        // Corner 0's region connects through the centre, so
                        // corners 1 and 3 are cut off.
                        link(edges[0], edges[1]);
                        link(edges[2], edges[3]);
                    } else {
                        link(edges[3], edges[0]);
                        link(edges[1], edges[2]);
                    }
                }
                _ => {}
            }
        }
    }

    let mut visited: std::collections::BTreeSet<EdgeKey> = std::collections::BTreeSet::new();
    let mut polylines = Vec::new();
    // Open chains start at degree-one vertices; the rest are closed loops.
    let starts: Vec<EdgeKey> = links
        .iter()
        .filter(|(_, n)| n.len() == 1)
        .map(|(k, _)| *k)
        .chain(links.keys().copied())
        .collect();
    for start in starts {
        if visited.contains(&start) {
            continue;
        }
        let mut chain = vec![start];
        visited.insert(start);
        let mut current = start;
        loop {
            let next = links[&current]
                .iter()
                .copied()
                .find(|n| !visited.contains(n));
            match next {
                Some(n) => {
                    visited.insert(n);
                    chain.push(n);
                    current = n;
                }
                None => {
                    if chain.len() > 2 && links[&current].contains(&start) {
                        chain.push(start);
                    }
                    break;
                }
            }
        }
        polylines.push(chain.into_iter().map(point).collect());
    }
    polylines
}

impl SpectrumContour {
    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.polylines.iter().flatten().copied()
    }

    /// Contour points with both `|Re|` and `|Im|` above `margin`.
    pub fn off_axis_points(&self, margin: f64) -> Vec<Complex64> {
        self.points()
            .filter(|p| p.re.abs() > margin && p.im.abs() > margin)
            .collect()
    }

    /// Contour points with `|Re| > margin`.
    pub fn points_off_imaginary_axis(&self, margin: f64) -> Vec<Complex64> {
        self.points().filter(|p| p.re.abs() > margin).collect()
    }

    /// Largest distance, in grid cells, from a contour point reflected
    /// through either axis to the nearest contour segment.
    pub fn symmetry_defect(&self) -> f64 {
        let segments: Vec<(Complex64, Complex64)> = self
            .polylines
            .iter()
            .flat_map(|p| p.windows(2).map(|w| (w[0], w[1])))
            .collect();
        let cell = self.grid.dx().hypot(self.grid.dy());
        let nearest = |q: Complex64| -> f64 {
            segments
                .iter()
                .map(|&(a, b)| distance_to_segment(q, a, b))
                .fold(f64::INFINITY, f64::min)
        };
        let mut worst = 0.0_f64;
        for p in self.points() {
            for q in [Complex64::new(-p.re, p.im), p.conj()] {
                worst = worst.max(nearest(q) / cell);
            }
        }
        worst
    }
}

fn distance_to_segment(q: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (q - a).norm();
    }
    let t = (((q - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (q - (a + d * t)).norm()
}
