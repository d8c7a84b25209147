//! Floquet spectra and spectral stability of periodic traveling waves of
//! the sine-Gordon equation `u_tt - u_xx + sin u = 0`.

// Negated comparisons are deliberate: a NaN must fail every check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod hill;
pub mod monodromy;
pub mod ode;
pub mod special;
pub mod stability;
pub mod wave;

pub use error::{Error, Result, SearchFailure};
pub use monodromy::{
    conjugation_residual, floquet_multipliers, g_p, g_q, monodromy_p, monodromy_q, ComplexMat2,
    FloquetPair, MonodromyData,
};
pub use wave::{classify, MotionType, SpeedRegime, WaveClass, WaveParams, WaveProfile};
