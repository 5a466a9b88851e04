//! Double-precision special-function kernels.

pub mod bessel;
pub mod elliptic;
pub mod gamma;
pub mod pcf;
pub mod quad;

pub use bessel::{bessel_i, bessel_i_scaled, bessel_j, bessel_y, env_bessel_j};
pub use elliptic::elliptic_e;
pub use gamma::{ln_factorial, ln_gamma};
pub use pcf::{pcf, ParabolicCylinder, PcPair};

/// sin(πx) with exact argument reduction.
pub fn sin_pi(x: f64) -> f64 {
    let r = reduce_two(x);
    if r == 0.0 || r == 1.0 || r == -1.0 {
        return 0.0;
    }
    if r == 0.5 || r == -1.5 {
        return 1.0;
    }
    if r == -0.5 || r == 1.5 {
        return -1.0;
    }
    (std::f64::consts::PI * r).sin()
}

/// cos(πx) with exact argument reduction.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

// x - 2 round(x/2), exact for |x| < 2^52
fn reduce_two(x: f64) -> f64 {
    x - 2.0 * (x / 2.0).round()
}
