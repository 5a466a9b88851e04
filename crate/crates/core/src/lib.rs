//! Prolate spheroidal wave functions for large size parameter.
//!
//! The angular function `Ps(x, γ²)` on (−1, 1), the radial function on (1, ∞)
//! and the eigenvalue `λ` are computed two ways: by uniform asymptotic
//! approximations built from parabolic cylinder and Bessel functions
//! ([`approx`]), and by a multiprecision Legendre/Bessel series oracle
//! ([`oracle`]) used as ground truth.
//!
//! The differential equation is
//!
//! ```text
//! (1 − z²) y'' − 2z y' + (λ − m²/(1 − z²) + γ²(1 − z²)) y = 0
//! ```
//!
//! so `λ` here equals the common Flammer eigenvalue minus `γ²`.

// `!(x < b)` is how the domain checks reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod eigensystem;
mod error;
pub mod maps;
pub mod oracle;
pub mod specfun;

pub use approx::{
    ConstantSource, EvalOptions, EvalResult, Evaluator, MatchingConstants, Regime, RegimePartition,
};
pub use eigensystem::{CoefficientTable, ModeIndex, Normalization, SpectralState, Truncation};
pub use error::{Error, Result};
pub use maps::{Branch, MapPoint};
pub use oracle::{Oracle, SeriesEvaluation};
pub use specfun::pcf::PcPair;
