use std::f64::consts::PI;

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::NAN;
    }
    libm::lgamma(x)
}

/// Γ(x) for real x away from the non-positive integers.
pub fn gamma(x: f64) -> f64 {
    if x > 0.0 {
        return libm::tgamma(x);
    }
    if x == x.floor() {
        return f64::NAN;
    }
    PI / (super::sin_pi(x) * gamma(1.0 - x))
}

/// ln n!
pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    if n <= 20 {
        let mut p: u64 = 1;
        for k in 2..=n {
            p *= k;
        }
        return (p as f64).ln();
    }
    ln_gamma(n as f64 + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_integers() {
        let mut f = 1.0f64;
        for n in 1..25u64 {
            f *= n as f64;
            let rel = (ln_gamma(n as f64 + 1.0) - f.ln()).abs() / f.ln().max(1.0);
            assert!(rel < 2e-15, "n={n} rel={rel}");
        }
    }

    #[test]
    fn half_integers() {
        let sqrt_pi = PI.sqrt();
        assert!((ln_gamma(0.5) - sqrt_pi.ln()).abs() < 2e-15);
        assert!((gamma(1.5) - 0.5 * sqrt_pi).abs() < 2e-15);
        assert!((gamma(-0.5) + 2.0 * sqrt_pi).abs() < 1e-14);
    }

    #[test]
    fn recurrence_holds() {
        for i in 1..200 {
            let x = 0.037 * i as f64;
            let lhs = ln_gamma(x + 1.0);
            let rhs = ln_gamma(x) + x.ln();
            assert!((lhs - rhs).abs() < 4e-15 * (1.0 + lhs.abs()), "x={x}");
        }
    }
}
