//! Tanh-sinh (double exponential) quadrature.
//!
//! The integrand receives `(x, x - a, b - x)` so that factors vanishing at an
//! endpoint can be formed from the exact distance instead of a difference of
//! nearly equal numbers.

use crate::{Error, Result};
use std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

const MAX_LEVEL: u32 = 11;
const T_MAX: f64 = 6.5;

/// Integrate `f` over `[a, b]` to relative tolerance `tol`.
pub fn tanh_sinh<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<Quadrature>
where
    F: FnMut(f64, f64, f64) -> f64,
{
    if a == b {
        return Ok(Quadrature { value: 0.0, error: 0.0, evaluations: 0 });
    }
    if b < a {
        let q = forward(&mut |x, da, db| f(x, db, da), b, a, tol)?;
        return Ok(Quadrature { value: -q.value, ..q });
    }
    forward(&mut f, a, b, tol)
}

fn forward(f: &mut dyn FnMut(f64, f64, f64) -> f64, a: f64, b: f64, tol: f64) -> Result<Quadrature> {
    let half = 0.5 * (b - a);
    let mid = a + half;
    let mut evals = 0usize;
    let mut node = |t: f64, f: &mut dyn FnMut(f64, f64, f64) -> f64| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        let cu = u.cosh();
        let w = FRAC_PI_2 * t.cosh() / (cu * cu);
        if !w.is_finite() || w == 0.0 {
            return 0.0;
        }
        // distance from the nearer endpoint: half * (1 - tanh|u|)
        let near = half * 2.0 / (1.0 + (2.0 * u.abs()).exp());
        if near == 0.0 {
            return 0.0;
        }
        let far = 2.0 * half - near;
        let (x, da, db) = if u >= 0.0 { (b - near, far, near) } else { (a + near, near, far) };
        let x = if u == 0.0 { mid } else { x };
        evals += 1;
        let v = f(x, da, db);
        if v.is_finite() { w * v } else { f64::NAN }
    };

    let mut h = 1.0;
    let mut sum = node(0.0, f);
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        if t > T_MAX {
            break;
        }
        sum += node(t, f) + node(-t, f);
        k += 1;
    }
    let mut estimate = sum * h * half;
    let mut prev_diff = f64::INFINITY;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut add = 0.0;
        let mut j = 1;
        loop {
            let t = j as f64 * h;
            if t > T_MAX {
                break;
            }
            add += node(t, f) + node(-t, f);
            j += 2;
        }
        sum += add;
        let next = sum * h * half;
        if next.is_nan() {
            return Err(Error::NonConvergence("non-finite integrand value".into()));
        }
        let diff = (next - estimate).abs();
        estimate = next;
        let scale = estimate.abs().max(f64::MIN_POSITIVE);
        if level >= 3 && (diff <= tol * scale || (diff < 64.0 * f64::EPSILON * scale && diff >= prev_diff)) {
            return Ok(Quadrature { value: estimate, error: diff, evaluations: evals });
        }
        if estimate == 0.0 && diff == 0.0 && level >= 3 {
            return Ok(Quadrature { value: 0.0, error: 0.0, evaluations: evals });
        }
        prev_diff = diff;
    }
    Err(Error::NonConvergence(format!(
        "tanh-sinh did not reach tolerance {tol:e} on [{a}, {b}]"
    )))
}
