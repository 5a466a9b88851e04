//! Incomplete elliptic integral of the second kind in algebraic form.

use super::quad::tanh_sinh;
use crate::error::domain;
use crate::Result;

const TOL: f64 = 1e-15;

/// E(a; b) = ∫₀^a √((1 − b²t²)/(1 − t²)) dt.
///
/// Real for |a| ≤ 1 and, when b > 1, for |a| ≤ 1/b (the integrand is taken
/// positive on that range). Odd in `a`.
pub fn elliptic_e(a: f64, b: f64) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() || b < 0.0 {
        return domain(format!("elliptic_E({a}, {b}) needs finite a and b ≥ 0"));
    }
    if a < 0.0 {
        return elliptic_e(-a, b).map(|v| -v);
    }
    if a > 1.0 {
        return domain(format!("elliptic_E({a}, {b}) is complex for a > 1"));
    }
    let mut one_ab = (-a).mul_add(b, 1.0);
    if one_ab < 0.0 {
        if one_ab > -4.0 * f64::EPSILON {
            one_ab = 0.0;
        } else {
            return domain(format!("elliptic_E({a}, {b}) is complex for a·b > 1"));
        }
    }
    if a == 0.0 {
        return Ok(0.0);
    }
    let one_a = 1.0 - a;
    let q = tanh_sinh(
        |t, _, db| {
            let num = (one_ab + b * db) * (1.0 + b * t);
            let den = (one_a + db) * (1.0 + t);
            (num / den).sqrt()
        },
        0.0,
        a,
        TOL,
    )?;
    Ok(q.value)
}

/// Complete elliptic integral of the first kind K(k) by the AGM, 0 ≤ k < 1.
pub fn complete_k(k: f64) -> f64 {
    let mut a = 1.0;
    let mut g = ((1.0 - k) * (1.0 + k)).sqrt();
    for _ in 0..60 {
        let an = 0.5 * (a + g);
        let gn = (a * g).sqrt();
        if (an - gn).abs() <= 1e-16 * an {
            a = an;
            break;
        }
        a = an;
        g = gn;
    }
    std::f64::consts::FRAC_PI_2 / a
}
