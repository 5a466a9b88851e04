//! Integer-order Bessel functions J_m, Y_m and I_m for real argument.

use super::{cos_pi, gamma::ln_factorial, sin_pi};
use crate::error::domain;
use crate::{Error, Result};
use std::f64::consts::{FRAC_2_PI, PI};

pub const MAX_ORDER: u32 = 200;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HANKEL_MIN_X: f64 = 25.0;

fn check(m: u32, x: f64) -> Result<()> {
    if m > MAX_ORDER {
        return domain(format!("Bessel order {m} exceeds {MAX_ORDER}"));
    }
    if !x.is_finite() || x < 0.0 {
        return domain(format!("Bessel argument {x} must be finite and ≥ 0"));
    }
    Ok(())
}

/// J_m(x).
pub fn bessel_j(m: u32, x: f64) -> Result<f64> {
    check(m, x)?;
    if x == 0.0 {
        return Ok(if m == 0 { 1.0 } else { 0.0 });
    }
    let mf = m as f64;
    if x <= 2.0 || x * x <= mf + 1.0 {
        return Ok(j_series(m, x));
    }
    if x >= HANKEL_MIN_X.max(mf * mf) {
        if let Some((j, _)) = hankel(mf, x) {
            return Ok(j);
        }
    }
    Ok(miller_j(x, m as usize)[m as usize])
}

/// Y_m(x), x > 0.
pub fn bessel_y(m: u32, x: f64) -> Result<f64> {
    check(m, x)?;
    if x == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let (y0, y1) = y01(x);
    if m == 0 {
        return Ok(y0);
    }
    let (mut prev, mut cur) = (y0, y1);
    for k in 1..m {
        let next = (2.0 * k as f64 / x) * cur - prev;
        prev = cur;
        cur = next;
        if !cur.is_finite() {
            return Ok(f64::NEG_INFINITY);
        }
    }
    Ok(cur)
}

/// e^{-x} I_m(x).
pub fn bessel_i_scaled(m: u32, x: f64) -> Result<f64> {
    check(m, x)?;
    if x == 0.0 {
        return Ok(if m == 0 { 1.0 } else { 0.0 });
    }
    let mf = m as f64;
    if x <= 2.0 || x * x <= mf + 1.0 {
        return Ok(i_series(m, x) * (-x).exp());
    }
    if x > 1e4 && x > 4.0 * mf * mf {
        if let Some(v) = i_asymptotic(mf, x) {
            return Ok(v);
        }
    }
    Ok(miller_i_scaled(x, m as usize))
}

/// I_m(x); overflow error when the value exceeds the double range.
pub fn bessel_i(m: u32, x: f64) -> Result<f64> {
    let s = bessel_i_scaled(m, x)?;
    if x > 700.0 && s.ln() + x > 709.0 {
        return Err(Error::Overflow(format!(
            "I_{m}({x}) exceeds the double range; use bessel_i_scaled"
        )));
    }
    Ok(s * x.exp())
}

/// ln I_m(x), usable far beyond the overflow threshold.
pub fn ln_bessel_i(m: u32, x: f64) -> Result<f64> {
    Ok(bessel_i_scaled(m, x)?.ln() + x)
}

/// Smallest positive root of J_m(x) + Y_m(x) = 0, where the envelope changes form.
pub fn bessel_j_transition(m: u32) -> Result<f64> {
    check(m, 0.0)?;
    let f = |x: f64| -> f64 { bessel_j(m, x).unwrap() + bessel_y(m, x).unwrap() };
    let step = 0.05 * (1.0 + m as f64).cbrt();
    let mut lo = 0.05;
    let mut hi = lo;
    while f(hi) < 0.0 {
        lo = hi;
        hi += step;
        if hi > 2.0 * m as f64 + 50.0 {
            return Err(Error::NonConvergence(format!("no envelope transition for order {m}")));
        }
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// env J_m(x): √(J² + Y²) past the transition point and √(2|J Y|) before it.
pub fn env_bessel_j(m: u32, x: f64) -> Result<f64> {
    let xt = bessel_j_transition(m)?;
    env_bessel_j_with(m, x, xt)
}

pub fn env_bessel_j_with(m: u32, x: f64, transition: f64) -> Result<f64> {
    let j = bessel_j(m, x)?;
    if x == 0.0 {
        return Ok(j.abs());
    }
    let y = bessel_y(m, x)?;
    if x >= transition {
        Ok(j.hypot(y))
    } else {
        Ok((2.0 * (j * y).abs()).sqrt())
    }
}

/// Envelope divided by the weight √|Y/J| below the transition: the error scale
/// that stays relative to J_m where J_m is recessive.
pub fn modulus_bessel_j(m: u32, x: f64, transition: f64) -> Result<f64> {
    let j = bessel_j(m, x)?;
    if x >= transition {
        Ok(j.hypot(bessel_y(m, x)?))
    } else {
        Ok(std::f64::consts::SQRT_2 * j.abs())
    }
}

fn j_series(m: u32, x: f64) -> f64 {
    let mf = m as f64;
    let ln_lead = mf * (0.5 * x).ln() - ln_factorial(m as u64);
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..300 {
        let kf = k as f64;
        term *= q / (kf * (mf + kf));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    ln_lead.exp() * sum
}

fn i_series(m: u32, x: f64) -> f64 {
    let mf = m as f64;
    let ln_lead = mf * (0.5 * x).ln() - ln_factorial(m as u64);
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..300 {
        let kf = k as f64;
        term *= q / (kf * (mf + kf));
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    ln_lead.exp() * sum
}

/// Hankel expansion (J_ν, Y_ν) for large x; None if the series cannot reach
/// full precision.
fn hankel(nu: f64, x: f64) -> Option<(f64, f64)> {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut t = 1.0f64;
    let mut ok = false;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = t * (mu - odd * odd) / (8.0 * kf * x);
        if next.abs() > t.abs() && k > 2 {
            break;
        }
        t = next;
        match k % 4 {
            1 => q += t,
            2 => p -= t,
            3 => q -= t,
            _ => p += t,
        }
        if t.abs() < 1e-17 {
            ok = true;
            break;
        }
    }
    if !ok {
        return None;
    }
    // ω = x − (ν/2 + 1/4)π
    let phase = 0.5 * nu + 0.25;
    let (sx, cx) = x.sin_cos();
    let (sp, cp) = (sin_pi(phase), cos_pi(phase));
    let cw = cx * cp + sx * sp;
    let sw = sx * cp - cx * sp;
    let amp = (FRAC_2_PI / x).sqrt();
    Some((amp * (p * cw - q * sw), amp * (p * sw + q * cw)))
}

fn start_index(order: usize, x: f64) -> usize {
    let top = (order as f64).max(x);
    let n = (top + 10.0 * top.cbrt() + 30.0).ceil() as usize;
    n + (n & 1)
}

/// J_0..=J_nmax by backward recurrence normalised with J_0 + 2ΣJ_{2k} = 1.
fn miller_j(x: f64, nmax: usize) -> Vec<f64> {
    let n = start_index(nmax, x);
    let mut out = vec![0.0; nmax + 1];
    let mut next = 0.0;
    let mut cur = 1e-30;
    let mut norm = 0.0;
    for k in (1..=n).rev() {
        if k <= nmax {
            out[k] = cur;
        }
        if k % 2 == 0 {
            norm += 2.0 * cur;
        }
        let prev = (2.0 * k as f64 / x) * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > 1e250 {
            let s = 1e-250;
            cur *= s;
            next *= s;
            norm *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    out[0] = cur;
    norm += cur;
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

fn miller_i_scaled(x: f64, m: usize) -> f64 {
    let n = start_index(m, x) + (9.0 * x.sqrt()) as usize;
    let mut next = 0.0;
    let mut cur = 1e-30;
    let mut norm = 0.0;
    let mut want = 0.0;
    for k in (1..=n).rev() {
        if k == m {
            want = cur;
        }
        norm += 2.0 * cur;
        let prev = (2.0 * k as f64 / x) * cur + next;
        next = cur;
        cur = prev;
        if cur > 1e250 {
            let s = 1e-250;
            cur *= s;
            next *= s;
            norm *= s;
            want *= s;
        }
    }
    if m == 0 {
        want = cur;
    }
    norm += cur;
    want / norm
}

fn i_asymptotic(nu: f64, x: f64) -> Option<f64> {
    let mu = 4.0 * nu * nu;
    let mut sum = 1.0;
    let mut t = 1.0f64;
    for k in 1..100 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = -t * (mu - odd * odd) / (8.0 * kf * x);
        if next.abs() > t.abs() {
            return None;
        }
        t = next;
        sum += t;
        if t.abs() < 1e-17 {
            return Some(sum / (2.0 * PI * x).sqrt());
        }
    }
    None
}

fn y01(x: f64) -> (f64, f64) {
    if x >= HANKEL_MIN_X {
        let (_, y0) = hankel(0.0, x).expect("Hankel series converges for x ≥ 25");
        let (_, y1) = hankel(1.0, x).expect("Hankel series converges for x ≥ 25");
        return (y0, y1);
    }
    let js = miller_j(x, start_index(0, x));
    let lg = (0.5 * x).ln() + EULER_GAMMA;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut sign = -1.0;
    let mut k = 1;
    while 2 * k + 1 < js.len() {
        let kf = k as f64;
        s0 += sign * js[2 * k] / kf;
        s1 += sign * (js[2 * k - 1] - js[2 * k + 1]) / kf;
        sign = -sign;
        k += 1;
    }
    let y0 = FRAC_2_PI * (lg * js[0] - 2.0 * s0);
    let y1 = FRAC_2_PI * (lg * js[1] - js[0] / x + s1);
    (y0, y1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn j_power_series(m: u32, x: f64) -> f64 {
        j_series(m, x)
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(3, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_i_scaled(0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn first_zero_of_j0() {
        // bisection on the power series alone
        let (mut lo, mut hi) = (2.0, 3.0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if j_power_series(0, mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let j0 = 0.5 * (lo + hi);
        assert!((j0 - 2.404_825_557_695_773).abs() < 1e-14);
        assert!(bessel_j(0, j0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn regimes_agree() {
        // Miller against the power series where both are accurate
        for &x in &[2.5, 4.0, 7.5] {
            for m in 0..6 {
                let a = miller_j(x, m as usize)[m as usize];
                let b = j_power_series(m, x);
                assert!((a - b).abs() < 1e-13, "m={m} x={x}: {a} vs {b}");
            }
        }
        // Miller against Hankel for large x
        for &x in &[30.0, 55.5, 120.0] {
            for m in 0..4u32 {
                let a = miller_j(x, m as usize)[m as usize];
                let (b, _) = hankel(m as f64, x).unwrap();
                assert!((a - b).abs() < 2e-14, "m={m} x={x}");
            }
        }
    }

    #[test]
    fn wronskian_j_y() {
        for &x in &[0.3, 1.0, 3.7, 12.0, 24.9, 25.1, 60.0, 300.0] {
            for m in 0..8u32 {
                let w = bessel_j(m + 1, x).unwrap() * bessel_y(m, x).unwrap()
                    - bessel_j(m, x).unwrap() * bessel_y(m + 1, x).unwrap();
                let exact = 2.0 / (PI * x);
                assert!(((w - exact) / exact).abs() < 1e-11, "m={m} x={x} w={w}");
            }
        }
    }

    #[test]
    fn i_against_series() {
        for &x in &[0.5, 3.0, 9.0, 20.0] {
            for m in 0..5u32 {
                let a = bessel_i_scaled(m, x).unwrap();
                let b = i_series(m, x) * (-x).exp();
                assert!(((a - b) / b).abs() < 1e-13, "m={m} x={x}");
            }
        }
        let a = bessel_i_scaled(2, 2e4).unwrap();
        let b = miller_i_scaled(2e4, 2);
        assert!(((a - b) / b).abs() < 1e-12);
    }

    #[test]
    fn envelope_majorises() {
        for m in 0..4u32 {
            let xt = bessel_j_transition(m).unwrap();
            for i in 1..400 {
                let x = 0.05 * i as f64;
                let e = env_bessel_j_with(m, x, xt).unwrap();
                assert!(e >= bessel_j(m, x).unwrap().abs() * (1.0 - 1e-14));
            }
        }
    }
}
