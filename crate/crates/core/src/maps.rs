//! Liouville variables: ξ (radial), η = ξ² (pole), ζ with turning point α
//! (angular turning-point zone), ρ, ρ̂, Φ (fixed-n zone), and the residual
//! potentials ψ, ψ̂, ψ_pc, φ, χ of the transformed equations.
//!
//! Every action integral is evaluated with the integrand written in terms of
//! exact distances to the endpoints, so quantities like ζ − α and x − σ keep
//! full relative accuracy right up to the turning point.

use crate::eigensystem::action_j;
use crate::error::domain;
use crate::specfun::quad::tanh_sinh;
use crate::{Error, Result};
use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

const QUAD_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    RadialXi,
    PoleEta,
    TurningZeta,
    FixedNRho,
}

/// A point x with its mapped coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapPoint {
    pub x: f64,
    pub value: f64,
    pub branch: Branch,
}

impl MapPoint {
    pub fn xi(x: f64, sigma: f64) -> Result<Self> {
        Ok(MapPoint { x, value: xi(x, sigma)?, branch: Branch::RadialXi })
    }
    pub fn eta(x: f64, sigma: f64) -> Result<Self> {
        Ok(MapPoint { x, value: eta_abs(x, sigma)?, branch: Branch::PoleEta })
    }
    pub fn zeta(x: f64, sigma: f64, alpha: f64) -> Result<Self> {
        Ok(MapPoint { x, value: zeta(x, sigma, alpha)?.zeta, branch: Branch::TurningZeta })
    }
    pub fn rho(x: f64) -> Result<Self> {
        Ok(MapPoint { x, value: rho(x)?, branch: Branch::FixedNRho })
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(0.0..1.0).contains(&sigma) {
        return domain(format!("σ = {sigma} outside [0, 1)"));
    }
    Ok(())
}

fn quad<F: FnMut(f64, f64, f64) -> f64>(f: F, a: f64, b: f64) -> Result<f64> {
    Ok(tanh_sinh(f, a, b, QUAD_TOL)?.value)
}

/// ∫₀^x √((σ² − t²)/(1 − t²)) dt for 0 ≤ x ≤ σ; equals σE(x; 1/σ).
pub fn inner_action(x: f64, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    if !(0.0..=sigma).contains(&x) {
        return domain(format!("inner action needs 0 ≤ x ≤ σ, got x = {x}, σ = {sigma}"));
    }
    let gap = sigma - x;
    quad(|t, _, db| ((gap + db) * (sigma + t) / ((1.0 - t) * (1.0 + t))).sqrt(), 0.0, x)
}

/// ∫ₓ^σ √((σ² − t²)/(1 − t²)) dt for 0 ≤ x ≤ σ.
pub fn inner_remainder(x: f64, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    if !(0.0..=sigma).contains(&x) {
        return domain(format!("inner remainder needs 0 ≤ x ≤ σ, got x = {x}"));
    }
    let top = 1.0 - sigma;
    quad(|t, _, db| (db * (sigma + t) / ((top + db) * (1.0 + t))).sqrt(), x, sigma)
}

/// ∫_σ^x √((t² − σ²)/(1 − t²)) dt for σ ≤ x ≤ 1.
pub fn outer_action(x: f64, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    if !(sigma..=1.0).contains(&x) {
        return domain(format!("outer action needs σ ≤ x ≤ 1, got x = {x}, σ = {sigma}"));
    }
    let gap = 1.0 - x;
    quad(|t, da, db| (da * (t + sigma) / ((gap + db) * (1.0 + t))).sqrt(), sigma, x)
}

/// ∫ₓ¹ √((t² − σ²)/(1 − t²)) dt for σ ≤ x ≤ 1; this is |ξ| on the angular side.
pub fn tail_action(x: f64, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    if !(sigma..=1.0).contains(&x) {
        return domain(format!("tail action needs σ ≤ x ≤ 1, got x = {x}, σ = {sigma}"));
    }
    let gap = x - sigma;
    quad(|t, da, db| ((gap + da) * (t + sigma) / (db * (1.0 + t))).sqrt(), x, 1.0)
}

/// ξ = ∫₁^x √((t² − σ²)/(t² − 1)) dt for x ≥ 1.
pub fn xi(x: f64, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    if !(x >= 1.0) || !x.is_finite() {
        return domain(format!("ξ needs x ≥ 1, got {x}"));
    }
    if x <= 2.0 {
        let s2 = (1.0 - sigma) * (1.0 + sigma);
        return quad(|t, da, _| ((s2 + da * (t + 1.0)) / (da * (t + 1.0))).sqrt(), 1.0, x);
    }
    // ξ = x − J(σ) − ∫ₓ^∞ (g − 1) dt with g − 1 = (1 − σ²)/((t² − 1)(g + 1)), t = x/s
    let s2 = (1.0 - sigma) * (1.0 + sigma);
    let tail = quad(
        |s, _, _| {
            if s < 1e-8 {
                return s2 / (2.0 * x);
            }
            let t = x / s;
            let t2m1 = (t - 1.0) * (t + 1.0);
            let g = (1.0 + s2 / t2m1).sqrt();
            s2 / (t2m1 * (g + 1.0)) * x / (s * s)
        },
        0.0,
        1.0,
    )?;
    Ok(x - action_j(sigma)? - tail)
}

/// |η|: ξ² for x > 1, (∫ₓ¹ …)² for σ < x < 1.
pub fn eta_abs(x: f64, sigma: f64) -> Result<f64> {
    if x >= 1.0 {
        let v = xi(x, sigma)?;
        return Ok(v * v);
    }
    if !(x > sigma) {
        return domain(format!("|η| needs x > σ, got x = {x}, σ = {sigma}"));
    }
    let v = tail_action(x, sigma)?;
    Ok(v * v)
}

/// α = 2√(J(σ)/π).
pub fn alpha_of_sigma(sigma: f64) -> Result<f64> {
    Ok(2.0 * (action_j(sigma)? / PI).sqrt())
}

/// ζ(x) with the quantities the parabolic cylinder form needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaPoint {
    pub zeta: f64,
    /// (α² − ζ²)/(σ² − x²), positive and finite across x = σ.
    pub ratio: f64,
}

impl ZetaPoint {
    /// ((α² − ζ²)/((σ² − x²)(1 − x²)))^{1/4}
    pub fn prefactor(&self, x: f64) -> f64 {
        (self.ratio / ((1.0 - x) * (1.0 + x))).powf(0.25)
    }

    /// dζ/dx
    pub fn derivative(&self, x: f64) -> f64 {
        1.0 / (self.ratio * (1.0 - x) * (1.0 + x)).sqrt()
    }
}

/// ∫₀^u √(s(2α ∓ s)) ds (minus sign for the inner side).
fn g_turn(u: f64, alpha: f64, inner: bool) -> f64 {
    if u == 0.0 {
        return 0.0;
    }
    let y = u / alpha;
    let sgn = if inner { -1.0 } else { 1.0 };
    if y < 0.1 {
        // √(2α) Σ binom(½,k) (±1/(2α))^k u^{k+3/2}/(k+3/2)
        let mut coef = 1.0;
        let mut sum = 0.0;
        let r = sgn * u / (2.0 * alpha);
        let mut p = 1.0;
        for k in 0..60 {
            let kf = k as f64;
            let term = coef * p / (kf + 1.5);
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
            coef *= (0.5 - kf) / (kf + 1.0);
            p *= r;
        }
        return (2.0 * alpha).sqrt() * u.powf(1.5) * sum;
    }
    let w = (u * (2.0 * alpha + sgn * u)).sqrt();
    if inner {
        let z = alpha - u;
        // ½α² arccos(ζ/α) − ½ζ√(α² − ζ²), arccos(1 − y) = 2 asin(√(y/2))
        alpha * alpha * (0.5 * y).sqrt().asin() - 0.5 * z * w
    } else {
        let z = alpha + u;
        0.5 * z * w - 0.5 * alpha * alpha * ((u + w) / alpha).ln_1p()
    }
}

/// Solve g_turn(u) = target for u ≥ 0 (u ≤ α on the inner side).
fn solve_turn(target: f64, alpha: f64, inner: bool) -> Result<f64> {
    if target == 0.0 {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    let mut hi = if inner { alpha } else { f64::INFINITY };
    let mut u = (1.5 * target / (2.0 * alpha).sqrt()).powf(2.0 / 3.0);
    if inner {
        u = u.min(alpha);
    }
    if !inner {
        // large-u behaviour G ≈ u²/2 bounds the root
        u = u.min((2.0 * target).sqrt().max(1e-300));
        let mut h = u.max(1e-300);
        while g_turn(h, alpha, false) < target {
            h *= 2.0;
        }
        hi = h;
    }
    for _ in 0..200 {
        let f = g_turn(u, alpha, inner) - target;
        if f > 0.0 {
            hi = u;
        } else {
            lo = u;
        }
        let slope = (u * (2.0 * alpha + if inner { -u } else { u })).sqrt();
        let mut next = if slope > 0.0 { u - f / slope } else { 0.5 * (lo + hi) };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - u).abs() <= 4.0 * f64::EPSILON * next.abs() || hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(next);
        }
        u = next;
    }
    Err(Error::NonConvergence(format!("ζ root-find for target {target}, α = {alpha}")))
}

/// Turning-point map ζ(x) on 0 ≤ x < 1 (ζ(0) = 0, ζ(σ) = α).
pub fn zeta(x: f64, sigma: f64, alpha: f64) -> Result<ZetaPoint> {
    check_sigma(sigma)?;
    if !(0.0..1.0).contains(&x) {
        return domain(format!("ζ needs 0 ≤ x < 1, got {x}"));
    }
    if sigma == 0.0 {
        let r = rho(x)?;
        let q = 1.0 + ((1.0 - x) * (1.0 + x)).sqrt();
        return Ok(ZetaPoint { zeta: r, ratio: 2.0 / q });
    }
    if !(alpha > 0.0) {
        return domain(format!("α = {alpha} must be positive when σ > 0"));
    }
    if x == sigma {
        let lim = (sigma / (alpha * (1.0 - sigma) * (1.0 + sigma))).cbrt();
        return Ok(ZetaPoint { zeta: alpha, ratio: lim * alpha / sigma });
    }
    if x < sigma {
        if x < 0.5 * sigma {
            // direct relation keeps ζ relatively accurate near 0
            let target = inner_action(x, sigma)?;
            let z = solve_direct(target, alpha)?;
            let ratio = (alpha - z) * (alpha + z) / ((sigma - x) * (sigma + x));
            return Ok(ZetaPoint { zeta: z, ratio });
        }
        let u = solve_turn(inner_remainder(x, sigma)?, alpha, true)?;
        let z = alpha - u;
        let ratio = u / (sigma - x) * (alpha + z) / (sigma + x);
        Ok(ZetaPoint { zeta: z, ratio })
    } else {
        let u = solve_turn(outer_action(x, sigma)?, alpha, false)?;
        let z = alpha + u;
        let ratio = u / (x - sigma) * (alpha + z) / (sigma + x);
        Ok(ZetaPoint { zeta: z, ratio })
    }
}

/// Solve ½α² arcsin(ζ/α) + ½ζ√(α² − ζ²) = target for 0 ≤ ζ ≤ α.
fn solve_direct(target: f64, alpha: f64) -> Result<f64> {
    if target == 0.0 {
        return Ok(0.0);
    }
    let f = |z: f64| {
        let w = ((alpha - z) * (alpha + z)).max(0.0).sqrt();
        0.5 * alpha * alpha * (z / alpha).min(1.0).asin() + 0.5 * z * w - target
    };
    let (mut lo, mut hi) = (0.0, alpha);
    let mut z = (target / alpha).min(alpha);
    for _ in 0..200 {
        let v = f(z);
        if v > 0.0 {
            hi = z;
        } else {
            lo = z;
        }
        let slope = ((alpha - z) * (alpha + z)).max(0.0).sqrt();
        let mut next = if slope > 0.0 { z - v / slope } else { 0.5 * (lo + hi) };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - z).abs() <= 4.0 * f64::EPSILON * next.abs() || hi - lo <= 4.0 * f64::EPSILON * alpha {
            return Ok(next);
        }
        z = next;
    }
    Err(Error::NonConvergence(format!("ζ root-find near the origin, target {target}")))
}

/// ρ = √(2 − 2√(1 − x²)) on [0, 1], odd extension for negative x.
pub fn rho(x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return domain(format!("ρ needs |x| ≤ 1, got {x}"));
    }
    let c = ((1.0 - x) * (1.0 + x)).sqrt();
    Ok(x * (2.0 / (1.0 + c)).sqrt())
}

/// Φ(ρ) = a ln(1 − ρ²/4)/(4ρ).
pub fn phi_shift(rho: f64, a: f64) -> Result<f64> {
    if !(rho.abs() < 2.0) {
        return domain(format!("Φ needs |ρ| < 2, got {rho}"));
    }
    if rho.abs() < 1e-8 {
        return Ok(-a * rho / 16.0);
    }
    Ok(a * (-0.25 * rho * rho).ln_1p() / (4.0 * rho))
}

/// ρ̂ = ρ + Φ(ρ)/γ.
pub fn rho_hat(rho: f64, a: f64, gamma: f64) -> Result<f64> {
    Ok(rho + phi_shift(rho, a)? / gamma)
}

fn turning_factor(z2: f64, sigma: f64) -> f64 {
    (1.0 - sigma * sigma) * (6.0 * z2 * z2 - (3.0 + sigma * sigma) * z2 - 2.0 * sigma * sigma)
}

/// ψ(ξ) of the Liouville-Green form, as a function of x.
pub fn psi_lg(x: f64, sigma: f64, m: u32) -> Result<f64> {
    let x2 = x * x;
    let s2 = sigma * sigma;
    if x2 == 1.0 || x2 == s2 {
        return Err(Error::Singularity(format!("ψ is singular at x = {x}")));
    }
    let mf = m as f64;
    let p = (x2 - 1.0) * (x2 - s2);
    Ok((mf * mf - 1.0) / p + turning_factor(x2, sigma) / (4.0 * p * (x2 - s2).powi(2)))
}

/// ψ̂ of the pole form; η is signed (negative for x < 1).
pub fn psi_hat(x: f64, sigma: f64, m: u32) -> Result<f64> {
    let x2 = x * x;
    let s2 = sigma * sigma;
    if x == 1.0 {
        return Err(Error::Singularity("ψ̂ evaluated at x = 1; take the limit".into()));
    }
    if x2 == s2 {
        return Err(Error::Singularity(format!("ψ̂ is singular at the turning point x = {x}")));
    }
    let e = eta_abs(x, sigma)?;
    let eta = if x > 1.0 { e } else { -e };
    let mf = m as f64;
    let p = (x2 - 1.0) * (x2 - s2);
    Ok((1.0 - 4.0 * mf * mf) / (16.0 * eta)
        + (mf * mf - 1.0) / (4.0 * p)
        + turning_factor(x2, sigma) / (16.0 * p * (x2 - s2).powi(2)))
}

/// ψ(γ, α, ζ) of the turning-point form.
pub fn psi_pc(x: f64, zeta: f64, sigma: f64, alpha: f64, m: u32) -> Result<f64> {
    let x2 = x * x;
    let s2 = sigma * sigma;
    let a2 = alpha * alpha;
    let z2 = zeta * zeta;
    if x2 == s2 || z2 == a2 || x.abs() >= 1.0 {
        return Err(Error::Singularity(format!("ψ_pc evaluated at a singular point x = {x}")));
    }
    let mf = m as f64;
    let d = (1.0 - x2) * (s2 - x2);
    Ok((1.0 - mf * mf) * (a2 - z2) / d + (2.0 * a2 + 3.0 * z2) / (4.0 * (a2 - z2).powi(2))
        - (a2 - z2) * turning_factor(x2, sigma) / (4.0 * d * (s2 - x2).powi(2)))
}

/// φ(ρ) = −aρ/(4 − ρ²).
pub fn phi5(rho: f64, a: f64) -> Result<f64> {
    if rho.abs() >= 2.0 {
        return Err(Error::Singularity(format!("φ is singular at ρ = {rho}")));
    }
    Ok(-a * rho / (4.0 - rho * rho))
}

/// χ(ρ) of the fixed-n form.
pub fn chi5(rho: f64, m: u32) -> Result<f64> {
    let r2 = rho * rho;
    if (r2 - 2.0).abs() < f64::EPSILON || r2 >= 4.0 {
        return Err(Error::Singularity(format!("χ is singular at ρ = {rho}")));
    }
    let mf = m as f64;
    Ok(r2 * (4.0 * mf * mf - 1.0) / (2.0 - r2).powi(2)
        + (7.0 * r2 - 40.0) / (4.0 * (4.0 - r2).powi(2))
        + 4.0 * mf * mf / (4.0 - r2))
}

/// dξ/dx = √((x² − σ²)/(x² − 1)) for x > 1.
pub fn xi_derivative(x: f64, sigma: f64) -> f64 {
    (((x - sigma) * (x + sigma)) / ((x - 1.0) * (x + 1.0))).sqrt()
}

/// A majorant of ∫ₓ^∞ |ψ| dξ for the Liouville-Green error heuristic (x > 1).
pub fn lg_variation(x: f64, sigma: f64, m: u32) -> Result<f64> {
    if !(x > 1.0) {
        return domain(format!("LG variation needs x > 1, got {x}"));
    }
    // only feeds error estimates; a loose tolerance is enough
    Ok(tanh_sinh(
        |s, _, _| {
            if s < 1e-8 {
                return 0.0;
            }
            let t = x / s;
            // termwise |·| keeps the integrand smooth where ψ changes sign
            let (t2, s2) = (t * t, sigma * sigma);
            let p = (t - 1.0) * (t + 1.0) * (t2 - s2);
            let mf = m as f64;
            let psi = ((mf * mf - 1.0) / p).abs() + (turning_factor(t2, sigma) / (4.0 * p * (t2 - s2).powi(2))).abs();
            let v = psi * xi_derivative(t, sigma);
            v * x / (s * s)
        },
        0.0,
        1.0,
        1e-8,
    )?
    .value)
}

/// ρ(1) = √2, the right end of the fixed-n variable.
pub const RHO_MAX: f64 = SQRT_2;

/// The quarter period π/2 used by phase diagnostics.
pub const QUARTER: f64 = FRAC_PI_2;
