//! Adaptive embedded Runge–Kutta integration on fixed-size real states.
//!
//! Verner's efficient 9(8) pair: 16 stages, ninth-order propagation with an
//! embedded eighth-order solution for local error control.

use crate::error::{Error, Result};

const STAGES: usize = 16;
const ORDER: f64 = 9.0;

mod tableau {
    use super::STAGES;

    pub(crate) const C: [f64; STAGES] = [
        0.0,
        0.3571e-1,
        9.906_028_091_267_415e-2,
        0.148_590_421_369_011_2,
        0.6134,
        0.232_735_947_360_562_7,
        0.553_864_052_639_437_3,
        0.6555,
        0.491625,
        0.6858e-1,
        0.253,
        0.662_064_179_541_204_6,
        0.8309,
        0.8998,
        1.0,
        1.0,
    ];

    pub(crate) const A: [[f64; STAGES]; STAGES] = [
        [
            0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        ],
        [
            0.3571e-1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        ],
        [
            -3.833_735_636_677_017e-2,
            0.137_397_637_279_444_32,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
        ],
        [
            3.714_760_534_225_28e-2,
            0.0,
            0.111_442_816_026_758_42,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
        ],
        [
            2.674_764_429_871_505,
            0.0,
            -9.982_382_134_885_293,
            7.921_017_705_013_789,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
        ],
        [
            5.242_104_050_577_351e-2,
            0.0,
            0.0,
            0.179_691_118_917_595_32,
            6.237_879_371_938_568e-4,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
        ],
        [
            0.159_249_222_364_763_22,
            0.0,
            0.0,
            -0.429_842_987_724_108_7,
            6.665_266_542_726_088e-2,
            0.757_805_152_571_522,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
        ],
        [
            7.283_333_333_333_333e-2,
            0.0,
            0.0,
            0.0,
            0.0,
            0.335_934_459_066_510_37,
            0.246_732_207_600_156_3,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
        ],
        [
            0.729755859375e-1,
            0.0,
            0.0,
            0.0,
            0.0,
            0.334_800_972_969_933_33,
            0.118_415_823_905_066_65,
            -0.345673828125e-1,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
        ],
        [
            4.911_213_663_452_096_4e-2,
            0.0,
            0.0,
            0.0,
            0.0,
            3.983_857_361_308_652e-2,
            0.106_967_528_893_935_49,
            -2.174_259_165_458_647_7e-2,
            -0.105_595_647_486_956_49,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
        ],
        [
            -2.707_988_818_641_280_5e-2,
            0.0,
            0.0,
            0.0,
            0.0,
            0.333e-1,
            -0.164_552_607_003_605_72,
            3.428_266_306_497_39e-2,
            0.158_526_406_443_922_1,
            0.218_523_425_681_122_5,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
        ],
        [
            5.584_657_769_108_862_5e-2,
            0.0,
            0.0,
            0.0,
            0.0,
            9.166_533_166_672_539e-2,
            0.239_239_965_552_362_7,
            1.023_834_712_248_415e-2,
            -2.679_331_322_859_542_6e-3,
            4.235_624_181_474_284_5e-2,
            0.225_397_047_016_660_4,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
        ],
        [
            -0.480_251_051_272_519_6,
            0.0,
            0.0,
            0.0,
            0.0,
            -6.359_610_162_555_930_5,
            -0.276_231_389_804_084_1,
            -6.500_796_633_979_847,
            0.573_476_587_704_095_7,
            1.347_125_994_868_138_9,
            5.936_840_409_706_221,
            6.590_346_245_333_925,
            0.0,
            0.0,
            0.0,
            0.0,
        ],
        [
            0.330_753_306_767_140_1,
            0.0,
            0.0,
            0.0,
            0.0,
            5.956_207_776_829_962,
            -0.486_831_640_048_152_77,
            4.462_055_288_206_771,
            0.741_025_823_144_207_2,
            -0.711_819_203_457_591_3,
            -5.454_619_594_516_665,
            -4.140_803_729_244_71,
            0.203_831_972_319_038_66,
            0.0,
            0.0,
            0.0,
        ],
        [
            -0.584_711_112_299_894_5,
            0.0,
            0.0,
            0.0,
            0.0,
            -12.412_684_171_162_67,
            1.360_245_445_660_928,
            -22.426_105_311_118_683,
            -0.882_885_705_586_545_8,
            1.770_155_128_538_230_4,
            12.158_096_519_185_339,
            22.230_375_204_077_607,
            -0.663_448_376_020_124_9,
            0.450_962_378_725_813_74,
            0.0,
            0.0,
        ],
        [
            1.940_575_549_810_648_7,
            0.0,
            0.0,
            0.0,
            0.0,
            21.977_984_081_145_564,
            0.823_074_732_698_472_9,
            68.164_416_836_263_54,
            -3.117_097_463_620_267,
            -4.568_841_021_822_44,
            -18.741_909_871_262_65,
            -66.577_118_396_378_32,
            1.098_915_553_165_441_8,
            0.0,
            0.0,
            0.0,
        ],
    ];

    pub(crate) const B_HIGH: [f64; STAGES] = [
        1.500_669_014_979_724_7e-2,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        -1.055_180_992_746_381_3,
        0.238_494_726_378_218_3,
        0.128_815_177_428_299_15,
        0.227_662_311_104_621_57,
        1.229_532_587_437_517_4,
        4.624_976_662_810_384e-2,
        0.138_619_631_936_629_38,
        3.080_010_168_319_435_5e-2,
        0.0,
    ];

    pub(crate) const B_LOW: [f64; STAGES] = [
        1.897_210_532_481_101_4e-2,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        3.408_110_314_549_493_8,
        0.126_032_388_382_092_1,
        0.118_837_506_345_114_97,
        0.249_104_199_783_868_75,
        -3.269_966_219_928_978_3,
        0.302_379_810_022_888_3,
        0.0,
        0.0,
        4.652_989_552_070_924e-2,
    ];
}

/// Step-size control settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl StepControl {
    pub fn new(rtol: f64) -> Self {
        Self {
            rtol,
            atol: rtol,
            max_steps: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// Weighted max-norm of a local error estimate.
///
/// The state is split into `groups` equal blocks (for a fundamental matrix,
/// one block per column); each block is measured against its own largest
/// component, so columns of very different size are each held to `rtol`.
fn error_norm<const N: usize>(
    err: &[f64; N],
    y_old: &[f64; N],
    y_new: &[f64; N],
    groups: usize,
    ctl: &StepControl,
) -> f64 {
    let width = N / groups;
    let mut worst = 0.0_f64;
    for g in 0..groups {
        let range = g * width..(g + 1) * width;
        let scale_old = y_old[range.clone()]
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        let scale_new = y_new[range.clone()]
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        let scale = ctl.atol + ctl.rtol * scale_old.max(scale_new);
        for &e in &err[range] {
            worst = worst.max(e.abs() / scale);
        }
    }
    worst
}

/// One step of the pair from `(t, y)` with `k[0] = rhs(t, y)` already set.
/// Writes the ninth-order solution and the difference to the embedded one.
fn rk_step<const N: usize, F>(
    rhs: &mut F,
    t: f64,
    h: f64,
    y: &[f64; N],
    k: &mut [[f64; N]; STAGES],
    y_high: &mut [f64; N],
    err: &mut [f64; N],
) where
    F: FnMut(f64, &[f64; N], &mut [f64; N]),
{
    let mut stage_y = [0.0_f64; N];
    for s in 1..STAGES {
        for i in 0..N {
            let mut acc = 0.0;
            for (j, kj) in k.iter().enumerate().take(s) {
                acc += tableau::A[s][j] * kj[i];
            }
            stage_y[i] = y[i] + h * acc;
        }
        rhs(t + tableau::C[s] * h, &stage_y, &mut k[s]);
    }
    for i in 0..N {
        let mut high = 0.0;
        let mut low = 0.0;
        for (s, ks) in k.iter().enumerate() {
            high += tableau::B_HIGH[s] * ks[i];
            low += tableau::B_LOW[s] * ks[i];
        }
        y_high[i] = y[i] + h * high;
        err[i] = h * (high - low);
    }
}

/// Integrates `y' = rhs(t, y)` from `t0` to `t1 > t0`.
///
/// `groups` must divide `N`; see [`error_norm`].
pub fn integrate<const N: usize, F>(
    mut rhs: F,
    t0: f64,
    t1: f64,
    y0: [f64; N],
    groups: usize,
    ctl: &StepControl,
) -> Result<([f64; N], IntegrationStats)>
where
    F: FnMut(f64, &[f64; N], &mut [f64; N]),
{
    assert!(
        groups > 0 && N.is_multiple_of(groups),
        "groups must divide the state size"
    );
    assert!(t1 > t0, "integration interval must be increasing");

    let span = t1 - t0;
    let mut stats = IntegrationStats::default();
    let mut t = t0;
    let mut y = y0;
    let mut k = [[0.0_f64; N]; STAGES];

    rhs(t, &y, &mut k[0]);
    stats.evaluations += 1;

    // Initial step from the size of the derivative relative to the state.
    let mut h = {
        let d0 = y.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let d1 = k[0].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let guess = if d0 < 1e-5 || d1 < 1e-5 {
            1e-3 * span
        } else {
            0.01 * d0 / d1
        };
        guess.min(span).max(1e-6 * span)
    };

    let h_min = 16.0 * f64::EPSILON * t0.abs().max(t1.abs()).max(span);
    let mut y_high = [0.0_f64; N];
    let mut err = [0.0_f64; N];

    while t < t1 {
        if stats.accepted + stats.rejected >= ctl.max_steps {
            return Err(Error::Convergence {
                message: format!("step limit {} reached at t = {t}", ctl.max_steps),
                estimate: t,
                error_bound: h,
            });
        }
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }

        rk_step(&mut rhs, t, h, &y, &mut k, &mut y_high, &mut err);
        stats.evaluations += STAGES - 1;

        let norm = error_norm(&err, &y, &y_high, groups, ctl);
        if !norm.is_finite() || y_high.iter().any(|v| !v.is_finite()) {
            if y.iter().any(|v| !v.is_finite()) {
                return Err(Error::Convergence {
                    message: format!("solution became non-finite at t = {t}"),
                    estimate: t,
                    error_bound: f64::INFINITY,
                });
            }
            stats.rejected += 1;
            h *= 0.1;
        } else if norm <= 1.0 {
            stats.accepted += 1;
            t = if last { t1 } else { t + h };
            y = y_high;
            rhs(t, &y, &mut k[0]);
            stats.evaluations += 1;
            let factor = if norm == 0.0 {
                5.0
            } else {
                (0.9 * norm.powf(-1.0 / ORDER)).clamp(0.2, 5.0)
            };
            h *= factor;
        } else {
            stats.rejected += 1;
            h *= (0.9 * norm.powf(-1.0 / ORDER)).clamp(0.1, 0.9);
        }

        if t < t1 && h < h_min {
            return Err(Error::Convergence {
                message: format!("step size underflow at t = {t}"),
                estimate: t,
                error_bound: h,
            });
        }
    }
    Ok((y, stats))
}
