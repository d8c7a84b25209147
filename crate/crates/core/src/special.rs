//! Complete elliptic integral of the first kind, Jacobi elliptic functions
//! and an adaptive Gauss–Kronrod quadrature that tolerates inverse square
//! root singularities at either endpoint.

use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Elliptic modulus `k` restricted to `0 <= k < 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EllipticModulus(f64);

impl EllipticModulus {
    pub fn new(k: f64) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::domain(format!("elliptic modulus {k} is not finite")));
        }
        if k < 0.0 {
            return Err(Error::domain(format!("elliptic modulus {k} is negative")));
        }
        if k >= 1.0 {
            return Err(Error::domain(format!(
                "elliptic modulus {k} is not below 1"
            )));
        }
        Ok(Self(k))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Complementary parameter `1 - k^2`.
    pub fn complementary_parameter(self) -> f64 {
        (1.0 - self.0) * (1.0 + self.0)
    }
}

/// Arithmetic-geometric mean of two positive numbers.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

/// `K(k) = pi / (2 AGM(1, sqrt(1 - k^2)))`.
pub fn complete_elliptic_k(k: EllipticModulus) -> f64 {
    FRAC_PI_2 / agm(1.0, k.complementary_parameter().sqrt())
}

/// The triple `(sn, cn, dn)` at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

// Relative AGM gap at which the descending sequence is cut off. The
// remaining error is quadratic in this value, well below f64 resolution.
const LANDEN_CUTOFF: f64 = 1e-9;
const LANDEN_MAX_LEVELS: usize = 16;

/// Jacobi elliptic functions at a fixed modulus, by descending Landen
/// transformation.
///
/// The modulus is driven to zero through the AGM sequence, where the
/// functions reduce to `sin` and `cos`; the ascending recurrence then
/// recovers `sn`, `cn`, `dn` at the original modulus. The AGM ladder depends
/// only on `k` and is built once.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiElliptic {
    modulus: EllipticModulus,
    a_levels: [f64; LANDEN_MAX_LEVELS],
    b_levels: [f64; LANDEN_MAX_LEVELS],
    levels: usize,
    agm_limit: f64,
}

impl JacobiElliptic {
    pub fn new(k: EllipticModulus) -> Self {
        let mut a_levels = [0.0_f64; LANDEN_MAX_LEVELS];
        let mut b_levels = [0.0_f64; LANDEN_MAX_LEVELS];
        let mut a = 1.0_f64;
        let mut emc = k.complementary_parameter();
        let mut c = 1.0_f64;
        let mut levels = 0;
        for i in 0..LANDEN_MAX_LEVELS {
            levels = i + 1;
            a_levels[i] = a;
            emc = emc.sqrt();
            b_levels[i] = emc;
            c = 0.5 * (a + emc);
            if (a - emc).abs() <= LANDEN_CUTOFF * a {
                break;
            }
            emc *= a;
            a = c;
        }
        Self {
            modulus: k,
            a_levels,
            b_levels,
            levels,
            agm_limit: c,
        }
    }

    pub fn modulus(&self) -> EllipticModulus {
        self.modulus
    }

    pub fn eval(&self, zeta: f64) -> JacobiTriple {
        let mut c = self.agm_limit;
        let u = zeta * c;
        let (mut sn, mut cn) = u.sin_cos();
        let mut dn = 1.0;
        if sn != 0.0 {
            let mut ratio = cn / sn;
            c *= ratio;
            for i in (0..self.levels).rev() {
                let b = self.a_levels[i];
                ratio *= c;
                c *= dn;
                dn = (self.b_levels[i] + ratio) / (b + ratio);
                ratio = c / b;
            }
            let s = 1.0 / (c * c + 1.0).sqrt();
            sn = if sn >= 0.0 { s } else { -s };
            cn = c * sn;
        }
        JacobiTriple { sn, cn, dn }
    }
}

pub fn jacobi_elliptic(zeta: f64, k: EllipticModulus) -> JacobiTriple {
    JacobiElliptic::new(k).eval(zeta)
}

pub fn jacobi_sn(zeta: f64, k: EllipticModulus) -> f64 {
    jacobi_elliptic(zeta, k).sn
}

/// Tolerances for [`adaptive_quadrature`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-15,
            rel_tol: 1e-14,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::domain("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::domain("max_subdivisions must be at least 1"));
        }
        Ok(())
    }
}

// 15-point Kronrod abscissae (positive half, descending) and weights, with
// the embedded 7-point Gauss weights at the odd-indexed nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One application of the 15-point Kronrod rule: `(kronrod, |kronrod - gauss|)`.
fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss–Kronrod integration of a smooth integrand.
fn adaptive_gk<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    let (value, error) = gauss_kronrod_15(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total = value;
    let mut total_err = error;

    for _ in 0..spec.max_subdivisions {
        if !total.is_finite() {
            break;
        }
        if total_err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
            return Ok(total);
        }
        let worst = heap.pop().expect("segment heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1) = gauss_kronrod_15(f, worst.a, mid);
        let (v2, e2) = gauss_kronrod_15(f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }

    // Recompute from the pieces to shed accumulated cancellation.
    let (total, total_err) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
    if total_err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
        return Ok(total);
    }
    Err(Error::Convergence {
        message: format!(
            "adaptive quadrature on [{a}, {b}] exceeded {} subdivisions",
            spec.max_subdivisions
        ),
        estimate: total,
        error_bound: total_err,
    })
}

/// A quadrature node together with its exact distances to both endpoints.
///
/// Integrands singular at an endpoint should be written in terms of
/// `from_a` / `from_b` rather than `x - a` / `b - x`, which cancel badly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abscissa {
    pub x: f64,
    pub from_a: f64,
    pub from_b: f64,
}

/// Integrates `integrand` over `[a, b]`.
///
/// The integrand may blow up like an inverse square root at either
/// endpoint. The substitution `x = a + (b - a) sin^2(phi)` absorbs both
/// singularities into the Jacobian, and the transformed integrand on
/// `[0, pi/2]` is handed to adaptive Gauss–Kronrod.
pub fn adaptive_quadrature<F>(integrand: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    adaptive_quadrature_endpoints(|node: Abscissa| integrand(node.x), a, b, spec)
}

/// [`adaptive_quadrature`] for integrands that need accurate endpoint
/// distances.
pub fn adaptive_quadrature_endpoints<F>(
    integrand: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<f64>
where
    F: Fn(Abscissa) -> f64,
{
    spec.validate()?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!(
            "invalid integration interval [{a}, {b}]"
        )));
    }
    let width = b - a;
    let transformed = |phi: f64| {
        let (s, c) = phi.sin_cos();
        let from_a = width * s * s;
        let from_b = width * c * c;
        let x = if from_a <= from_b {
            a + from_a
        } else {
            b - from_b
        };
        integrand(Abscissa { x, from_a, from_b }) * 2.0 * width * s * c
    };
    adaptive_gk(&transformed, 0.0, FRAC_PI_2, spec)
}

/// `K(k)` by direct quadrature of `1 / sqrt(1 - k^2 sin^2 theta)`.
///
/// Independent of the AGM route; used to cross-check it.
pub fn complete_elliptic_k_quadrature(k: EllipticModulus) -> Result<f64> {
    let m = k.value() * k.value();
    let spec = QuadratureSpec {
        abs_tol: 1e-16,
        rel_tol: 1e-15,
        max_subdivisions: 4000,
    };
    adaptive_gk(
        &|theta: f64| {
            let s = theta.sin();
            1.0 / (1.0 - m * s * s).sqrt()
        },
        0.0,
        FRAC_PI_2,
        &spec,
    )
}
