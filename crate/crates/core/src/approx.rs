//! Uniform large-γ approximations of the angular and radial functions.
//!
//! The angular interval splits at 1 − δ₀: a parabolic cylinder form covers
//! [0, 1 − δ₀] (both turning points ±σ inside), a modified Bessel form covers
//! [1 − δ₀, 1). On the radial side a Bessel-J form is valid on all of (1, ∞)
//! and the Liouville-Green form is available for x ≥ 1 + δ.
//!
//! Each form carries one proportionality constant. It is either anchored to
//! the series oracle (K, Ps(0), Ps'(0), V) or taken from the large-γ
//! expressions built on p and q.

use crate::eigensystem::{action_j, norm_h, ModeIndex, SpectralState};
use crate::error::domain;
use crate::maps::{self, tail_action, xi, zeta};
use crate::oracle::{Oracle, SeriesEvaluation};
use crate::specfun::bessel::{bessel_j, bessel_j_transition, env_bessel_j_with, ln_bessel_i};
use crate::specfun::gamma::ln_factorial;
use crate::specfun::pcf::ParabolicCylinder;
use crate::specfun::quad::tanh_sinh;
use crate::{Error, Result};
use std::f64::consts::{FRAC_PI_2, PI};

/// Largest n accepted by the fixed-n form.
pub const FIXED_N_CAP: u32 = 10;

const P_TOL: f64 = 1e-11;

/// The constants δ, δ₀, σ₀ that split the x-axis into regimes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimePartition {
    /// Margin in the admissibility bound n ≤ 2γ(1 − δ)/π; also the LG cutoff x ≥ 1 + δ.
    pub delta: f64,
    /// Angular split point 1 − δ₀.
    pub delta0: f64,
    /// Cap on the turning point σ.
    pub sigma0: f64,
}

impl Default for RegimePartition {
    fn default() -> Self {
        RegimePartition { delta: 0.05, delta0: 0.25 * (1.0 - 0.9), sigma0: 0.9 }
    }
}

impl RegimePartition {
    pub fn new(delta: f64, delta0: f64, sigma0: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&sigma0) {
            return domain(format!("σ₀ = {sigma0} outside [0, 1)"));
        }
        if !(delta0 > 0.0 && delta0 < 1.0 - sigma0) {
            return domain(format!("δ₀ = {delta0} outside (0, 1 − σ₀) = (0, {})", 1.0 - sigma0));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return domain(format!("δ = {delta} outside (0, 1)"));
        }
        Ok(RegimePartition { delta, delta0, sigma0 })
    }

    /// Default δ₀ = (1 − σ₀)/4 for a given σ₀.
    pub fn with_sigma0(delta: f64, sigma0: f64) -> Result<Self> {
        Self::new(delta, 0.25 * (1.0 - sigma0), sigma0)
    }

    pub fn split(&self) -> f64 {
        1.0 - self.delta0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    LgRadial,
    BesselRadial,
    BesselIAngular,
    PcAngular,
    PcFixedN,
    SeriesOracle,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::LgRadial => "LG_RADIAL",
            Regime::BesselRadial => "BESSEL_RADIAL",
            Regime::BesselIAngular => "BESSELI_ANGULAR",
            Regime::PcAngular => "PC_ANGULAR",
            Regime::PcFixedN => "PC_FIXEDN",
            Regime::SeriesOracle => "SERIES_ORACLE",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A function value with its regime and an error estimate.
///
/// `ln_abs` and `sign` are always filled; `value` is `sign·exp(ln_abs)` and
/// may be ±0 or ±∞ when that leaves the double range. `scale` is the local
/// amplitude (constant × prefactor × envelope) that errors are measured
/// against, so `err_estimate = rate·scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub x: f64,
    pub value: f64,
    pub ln_abs: f64,
    pub sign: f64,
    pub regime: Regime,
    pub err_estimate: f64,
    pub scale: f64,
}

impl EvalResult {
    fn from_log(x: f64, sign: f64, ln_abs: f64, regime: Regime, ln_scale: f64, ln_rate: f64) -> Self {
        let sign = if ln_abs == f64::NEG_INFINITY { 0.0 } else { sign };
        EvalResult {
            x,
            value: sign * ln_abs.exp(),
            ln_abs,
            sign,
            regime,
            err_estimate: (ln_scale + ln_rate).exp(),
            scale: ln_scale.exp(),
        }
    }

    fn zero(x: f64, regime: Regime, scale: f64, rate: f64) -> Self {
        EvalResult { x, value: 0.0, ln_abs: f64::NEG_INFINITY, sign: 0.0, regime, err_estimate: rate * scale, scale }
    }

    /// |value − reference| / scale.
    pub fn relative_error(&self, reference: f64) -> f64 {
        (self.value - reference).abs() / self.scale
    }

    /// Wrap an oracle series value.
    pub fn from_series(x: f64, s: &SeriesEvaluation) -> Self {
        EvalResult {
            x,
            value: s.value,
            ln_abs: s.value.abs().ln(),
            sign: if s.value == 0.0 { 0.0 } else { s.value.signum() },
            regime: Regime::SeriesOracle,
            err_estimate: s.tail_bound,
            scale: s.value.abs(),
        }
    }

    /// The same result at −x, multiplied by `parity` (±1); exact.
    fn reflect(self, parity: f64) -> Self {
        let sign = self.sign * parity;
        EvalResult { x: -self.x, value: self.value * parity, sign, ..self }
    }
}

/// Where the proportionality constants come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConstantSource {
    /// K, Ps(0)/Ps'(0) and V from the series oracle.
    #[default]
    Oracle,
    /// c and d from p and q alone.
    Asymptotic,
}

/// The constants tying each regime to the normalised function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchingConstants {
    /// Angular Bessel-I constant; the radial Bessel-J form uses (−1)^m c.
    pub c: f64,
    /// Parabolic cylinder constant.
    pub d: f64,
    pub p: f64,
    pub q: f64,
    /// ln q, kept because q underflows for large γ.
    pub ln_q: f64,
    /// Ratio of the solution normalised at infinity to the radial function.
    pub v: f64,
    /// Ps(0) for even modes, Ps'(0) for odd ones.
    pub origin: f64,
    pub source: ConstantSource,
}

impl MatchingConstants {
    /// Radial Bessel-J constant.
    pub fn c_radial(&self, mode: ModeIndex) -> f64 {
        if mode.m % 2 == 1 {
            -self.c
        } else {
            self.c
        }
    }

    /// c/(d√q), which tends to 1 as γ grows.
    pub fn cd_ratio(&self) -> f64 {
        self.c / self.d * (-0.5 * self.ln_q).exp()
    }

    /// Constants from p and q only.
    pub fn asymptotic(mode: ModeIndex, s: &SpectralState, part: &RegimePartition) -> Result<Self> {
        Self::asymptotic_tol(mode, s, part, P_TOL)
    }

    pub fn asymptotic_tol(mode: ModeIndex, s: &SpectralState, part: &RegimePartition, tol: f64) -> Result<Self> {
        let ln_q = ln_const_q(s)?;
        let p = const_p_tol(mode, s, part, tol)?;
        let half_h = 0.5 * norm_h(mode);
        // positive sign: the function is positive as x → 1⁻
        let d = (half_h / p).sqrt();
        let c = d * (0.5 * ln_q).exp();
        let origin = origin_from_d(mode, s, d)?;
        let v = v_from_c(mode, s.gamma, parity_sign(mode.m) * c);
        Ok(MatchingConstants { c, d, p, q: ln_q.exp(), ln_q, v, origin, source: ConstantSource::Asymptotic })
    }

    /// Constants anchored to the series oracle. V comes from the oracle when it
    /// covers the probe points (x_max ≥ 8), otherwise from the Bessel-J/LG match.
    pub fn from_oracle(oracle: &Oracle, s: &SpectralState, part: &RegimePartition) -> Result<Self> {
        Self::from_oracle_tol(oracle, s, part, P_TOL)
    }

    pub fn from_oracle_tol(oracle: &Oracle, s: &SpectralState, part: &RegimePartition, tol: f64) -> Result<Self> {
        let mode = oracle.mode();
        let ln_q = ln_const_q(s)?;
        let p = const_p_tol(mode, s, part, tol)?;
        let k = oracle.boundary_k()?;
        let c = c_from_k(mode, s.lambda, k);
        let (ps0, dps0) = oracle.origin_values()?;
        let pc = ParabolicCylinder::new(s.pc_parameter())?;
        let at0 = pc.eval(0.0)?;
        let (d, origin) = if mode.is_even() {
            ((s.sigma / s.alpha).sqrt() * ps0 / at0.u_value()?, ps0)
        } else {
            ((s.alpha / s.sigma).sqrt() * dps0 / ((2.0 * s.gamma).sqrt() * at0.du_value()?), dps0)
        };
        let v = if oracle.x_max() >= 8.0 {
            oracle.v_const()?
        } else {
            v_from_c(mode, s.gamma, parity_sign(mode.m) * c)
        };
        Ok(MatchingConstants { c, d, p, q: ln_q.exp(), ln_q, v, origin, source: ConstantSource::Oracle })
    }
}

fn parity_sign(k: u32) -> f64 {
    if k % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// c = (−2/λ)^{m/2} m! K.
fn c_from_k(mode: ModeIndex, lambda: f64, k: f64) -> f64 {
    let m = mode.m as f64;
    k * (0.5 * m * (-2.0 / lambda).ln() + ln_factorial(mode.m as u64)).exp()
}

/// Matching the large-argument Bessel-J form to the LG form gives
/// V = (−1)^n/((n − m)! c_rad √(2γ/π)).
fn v_from_c(mode: ModeIndex, gamma: f64, c_rad: f64) -> f64 {
    parity_sign(mode.n) / (ln_factorial((mode.n - mode.m) as u64).exp() * c_rad * (2.0 * gamma / PI).sqrt())
}

/// Ps(0) or Ps'(0) implied by the parabolic cylinder form with constant d.
fn origin_from_d(mode: ModeIndex, s: &SpectralState, d: f64) -> Result<f64> {
    let at0 = ParabolicCylinder::new(s.pc_parameter())?.eval(0.0)?;
    if mode.is_even() {
        Ok(d * (s.alpha / s.sigma).sqrt() * at0.u_value()?)
    } else {
        Ok(d * (s.sigma / s.alpha).sqrt() * (2.0 * s.gamma).sqrt() * at0.du_value()?)
    }
}

/// ln q = (γα²/2)ln(γα²/2e) + ½ln(2π²γ) − 2γ∫_σ¹√((t²−σ²)/(1−t²))dt, so that
/// c = d√q matches the uniform large-t behaviour of U against that of I_m.
pub fn ln_const_q(s: &SpectralState) -> Result<f64> {
    let g = s.gamma;
    let h = 0.5 * g * s.alpha * s.alpha;
    let power = if h > 0.0 { h * (h.ln() - 1.0) } else { 0.0 };
    Ok(power + 0.5 * (2.0 * PI * PI * g).ln() - 2.0 * g * tail_action(s.sigma, s.sigma)?)
}

pub fn const_q(s: &SpectralState) -> Result<f64> {
    let l = ln_const_q(s)?;
    let q = l.exp();
    if q == 0.0 || !q.is_finite() {
        return Err(Error::Overflow(format!("q = exp({l}) outside the double range; use ln_const_q")));
    }
    Ok(q)
}

/// p: the parabolic cylinder integral over [0, 1 − δ₀] plus q times the
/// modified Bessel integral over [1 − δ₀, 1].
pub fn const_p(mode: ModeIndex, s: &SpectralState, part: &RegimePartition) -> Result<f64> {
    const_p_tol(mode, s, part, P_TOL)
}

pub fn const_p_tol(mode: ModeIndex, s: &SpectralState, part: &RegimePartition, tol: f64) -> Result<f64> {
    let split = part.split();
    if !(s.sigma < split) {
        return domain(format!("σ = {} is not below the split point {split}", s.sigma));
    }
    let g = s.gamma;
    let root = (2.0 * g).sqrt();
    let pc = ParabolicCylinder::new(s.pc_parameter())?;
    let mut fail: Option<Error> = None;
    let mut pc_part = |x: f64| -> f64 {
        let r = (|| -> Result<f64> {
            let z = zeta(x, s.sigma, s.alpha)?;
            let u = pc.eval(z.zeta * root)?;
            let pre = (z.ratio / ((1.0 - x) * (1.0 + x))).sqrt();
            Ok(pre * (2.0 * u.ln_abs_u()).exp())
        })();
        r.unwrap_or_else(|e| {
            fail.get_or_insert(e);
            0.0
        })
    };
    // split the oscillatory part so each panel holds about one zero
    let pieces = (mode.n - mode.m + 2) as usize;
    let mut first = 0.0;
    for i in 0..pieces {
        let (a, b) = (s.sigma * i as f64 / pieces as f64, s.sigma * (i + 1) as f64 / pieces as f64);
        first += tanh_sinh(|x, _, _| pc_part(x), a, b, tol)?.value;
    }
    first += tanh_sinh(|x, _, _| pc_part(x), s.sigma, split, tol)?.value;
    if let Some(e) = fail.take() {
        return Err(e);
    }
    let ln_q = ln_const_q(s)?;
    let mut fail: Option<Error> = None;
    let second = tanh_sinh(
        |x, _, db| {
            if db == 0.0 {
                return if mode.m == 0 { (ln_q).exp() } else { 0.0 };
            }
            let r = (|| -> Result<f64> {
                let e = tail_action(x, s.sigma)?;
                let w = e * e / (db * (1.0 + x) * (x - s.sigma) * (x + s.sigma));
                Ok(w.sqrt() * (ln_q + 2.0 * ln_bessel_i(mode.m, g * e)?).exp())
            })();
            r.unwrap_or_else(|e| {
                fail.get_or_insert(e);
                0.0
            })
        },
        split,
        1.0,
        tol,
    )?
    .value;
    if let Some(e) = fail {
        return Err(e);
    }
    Ok(first + second)
}

/// Evaluation switches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub source: ConstantSource,
    /// Use the fixed-n parabolic cylinder form on [0, 1 − δ₀].
    pub fixed_n: bool,
    /// Use the Liouville-Green form on the radial side for x ≥ 1 + δ.
    pub radial_lg: bool,
    /// Quadrature tolerance for the constant p.
    pub p_tol: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { source: ConstantSource::Oracle, fixed_n: false, radial_lg: false, p_tol: P_TOL }
    }
}

/// Approximations for one (m, n, γ): spectral state and constants are fixed
/// at construction and every evaluation is a pure function of x.
#[derive(Debug, Clone)]
pub struct Evaluator {
    mode: ModeIndex,
    spectral: SpectralState,
    partition: RegimePartition,
    consts: MatchingConstants,
    options: EvalOptions,
    pc: ParabolicCylinder,
    fixed: Option<FixedN>,
    j_transition: f64,
    ln_gamma: f64,
}

#[derive(Debug, Clone)]
struct FixedN {
    a: f64,
    pc: ParabolicCylinder,
    /// Ps(0)/U(−a/2, 0) or Ps'(0)/U'(−a/2, 0)
    anchor: f64,
}

impl Evaluator {
    /// Builds the spectral state and constants, running the oracle when the
    /// options ask for anchored constants.
    pub fn new(mode: ModeIndex, gamma: f64, partition: RegimePartition, options: EvalOptions) -> Result<Self> {
        mode.check_admissible(gamma, partition.delta)?;
        match options.source {
            ConstantSource::Oracle => {
                let oracle = Oracle::new(mode, gamma, 1.0)?;
                Self::with_oracle(&oracle, partition, options)
            }
            ConstantSource::Asymptotic => {
                let s = SpectralState::asymptotic(mode, gamma)?;
                check_sigma(&s, &partition)?;
                let consts = MatchingConstants::asymptotic_tol(mode, &s, &partition, options.p_tol)?;
                Self::assemble(mode, s, partition, consts, options)
            }
        }
    }

    /// Anchored constants from an existing oracle; λ is the oracle's.
    pub fn with_oracle(oracle: &Oracle, partition: RegimePartition, options: EvalOptions) -> Result<Self> {
        let mode = oracle.mode();
        mode.check_admissible(oracle.gamma(), partition.delta)?;
        let s = SpectralState::from_lambda(oracle.gamma(), oracle.lambda())?;
        check_sigma(&s, &partition)?;
        let consts = MatchingConstants::from_oracle_tol(oracle, &s, &partition, options.p_tol)?;
        Self::assemble(mode, s, partition, consts, EvalOptions { source: ConstantSource::Oracle, ..options })
    }

    /// From explicit parts, for callers that already hold the constants.
    pub fn from_parts(
        mode: ModeIndex,
        spectral: SpectralState,
        partition: RegimePartition,
        consts: MatchingConstants,
        options: EvalOptions,
    ) -> Result<Self> {
        check_sigma(&spectral, &partition)?;
        Self::assemble(mode, spectral, partition, consts, options)
    }

    fn assemble(
        mode: ModeIndex,
        spectral: SpectralState,
        partition: RegimePartition,
        consts: MatchingConstants,
        options: EvalOptions,
    ) -> Result<Self> {
        let pc = ParabolicCylinder::new(spectral.pc_parameter())?;
        let fixed = if mode.n <= FIXED_N_CAP {
            let a = spectral.lambda / spectral.gamma + spectral.gamma;
            let fpc = ParabolicCylinder::new(-0.5 * a)?;
            let at0 = fpc.eval(0.0)?;
            let anchor = if mode.is_even() { consts.origin / at0.u_value()? } else { consts.origin / at0.du_value()? };
            Some(FixedN { a, pc: fpc, anchor })
        } else {
            None
        };
        if options.fixed_n && fixed.is_none() {
            return Err(Error::Range(format!("fixed-n form needs n ≤ {FIXED_N_CAP}, got n = {}", mode.n)));
        }
        Ok(Evaluator {
            mode,
            spectral,
            partition,
            consts,
            options,
            pc,
            fixed,
            j_transition: bessel_j_transition(mode.m)?,
            ln_gamma: spectral.gamma.ln(),
        })
    }

    pub fn mode(&self) -> ModeIndex {
        self.mode
    }
    pub fn spectral(&self) -> &SpectralState {
        &self.spectral
    }
    pub fn partition(&self) -> &RegimePartition {
        &self.partition
    }
    pub fn constants(&self) -> &MatchingConstants {
        &self.consts
    }
    pub fn options(&self) -> &EvalOptions {
        &self.options
    }

    /// Angular function on (−1, 1), with Ps(−x) = (−1)^{m+n} Ps(x) exactly.
    pub fn evaluate_angular(&self, x: f64) -> Result<EvalResult> {
        if !(x.abs() < 1.0) {
            return domain(format!("angular function needs |x| < 1, got {x}"));
        }
        let ax = x.abs();
        let r = if ax <= self.partition.split() {
            if self.options.fixed_n {
                self.angular_pc_fixedn(ax)?
            } else {
                self.angular_pc(ax)?
            }
        } else {
            self.angular_bessel_i(ax)?
        };
        Ok(if x.is_sign_negative() { r.reflect(self.mode.parity()) } else { r })
    }

    /// Radial function on (1, ∞): Bessel-J by default, LG for x ≥ 1 + δ when enabled.
    pub fn evaluate_radial(&self, x: f64) -> Result<EvalResult> {
        if !(x > 1.0) || !x.is_finite() {
            return domain(format!("radial function needs x > 1, got {x}"));
        }
        if self.options.radial_lg && x >= 1.0 + self.partition.delta {
            self.radial_lg(x)
        } else {
            self.radial_bessel(x)
        }
    }

    /// Parabolic cylinder form; nominal range [0, 1 − δ₀], accepted on [0, 1).
    pub fn angular_pc(&self, x: f64) -> Result<EvalResult> {
        check_half_open(x, 0.0, "parabolic cylinder form")?;
        let s = &self.spectral;
        let d = self.consts.d;
        let ln_rate = self.ln_gamma.max(1.0).ln() - 2.0 / 3.0 * self.ln_gamma;
        let z = zeta(x, s.sigma, s.alpha)?;
        let t = z.zeta * (2.0 * s.gamma).sqrt();
        let u = self.pc.eval(t)?;
        let ln_pre = d.abs().ln() + z.prefactor(x).ln();
        let ln_scale = ln_pre + self.pc.ln_envelope(t)?;
        if x == 0.0 && !self.mode.is_even() {
            return Ok(EvalResult::zero(x, Regime::PcAngular, ln_scale.exp(), ln_rate.exp()));
        }
        Ok(EvalResult::from_log(x, d.signum() * u.u.signum(), ln_pre + u.ln_abs_u(), Regime::PcAngular, ln_scale, ln_rate))
    }

    /// Fixed-n parabolic cylinder form; nominal range [0, 1 − δ₀], accepted on [0, 1).
    pub fn angular_pc_fixedn(&self, x: f64) -> Result<EvalResult> {
        check_half_open(x, 0.0, "fixed-n form")?;
        let f = self
            .fixed
            .as_ref()
            .ok_or_else(|| Error::Range(format!("fixed-n form needs n ≤ {FIXED_N_CAP}, got n = {}", self.mode.n)))?;
        let g = self.spectral.gamma;
        let ln_rate = self.ln_gamma.max(1.0).ln() - self.ln_gamma;
        let rho = maps::rho(x)?;
        let rh = maps::rho_hat(rho, f.a, g)?;
        let t = rh * (2.0 * g).sqrt();
        let u = f.pc.eval(t)?;
        // ρ/x → 1 at the origin
        let ratio = if x == 0.0 { 1.0 } else { rho / x };
        let mut ln_pre = 0.5 * ratio.ln() - 0.25 * ((1.0 - x) * (1.0 + x)).ln() + f.anchor.abs().ln();
        if !self.mode.is_even() {
            ln_pre -= 0.5 * (2.0 * g).ln();
        }
        let ln_scale = ln_pre + f.pc.ln_envelope(t)?;
        if x == 0.0 {
            if self.mode.is_even() {
                let v = self.consts.origin;
                let mut r = EvalResult::from_log(x, v.signum(), v.abs().ln(), Regime::PcFixedN, ln_scale, ln_rate);
                r.value = v;
                return Ok(r);
            }
            return Ok(EvalResult::zero(x, Regime::PcFixedN, ln_scale.exp(), ln_rate.exp()));
        }
        Ok(EvalResult::from_log(x, f.anchor.signum() * u.u.signum(), ln_pre + u.ln_abs_u(), Regime::PcFixedN, ln_scale, ln_rate))
    }

    /// Modified Bessel form; nominal range [1 − δ₀, 1), accepted on (σ, 1).
    pub fn angular_bessel_i(&self, x: f64) -> Result<EvalResult> {
        let s = &self.spectral;
        if !(x > s.sigma && x < 1.0) {
            return domain(format!("Bessel-I form needs σ < x < 1, got x = {x}, σ = {}", s.sigma));
        }
        let c = self.consts.c;
        let e = tail_action(x, s.sigma)?;
        let ln_pre = 0.5 * e.ln() - 0.25 * ((1.0 - x) * (1.0 + x) * (x - s.sigma) * (x + s.sigma)).ln();
        let ln_abs = c.abs().ln() + ln_pre + ln_bessel_i(self.mode.m, s.gamma * e)?;
        Ok(EvalResult::from_log(x, c.signum(), ln_abs, Regime::BesselIAngular, ln_abs, -self.ln_gamma))
    }

    /// Bessel-J form on (1, ∞).
    pub fn radial_bessel(&self, x: f64) -> Result<EvalResult> {
        if !(x > 1.0) || !x.is_finite() {
            return domain(format!("Bessel-J form needs x > 1, got {x}"));
        }
        let s = &self.spectral;
        let c = self.consts.c_radial(self.mode);
        let e = xi(x, s.sigma)?;
        let ln_pre = c.abs().ln() + 0.5 * e.ln() - 0.25 * ((x - 1.0) * (x + 1.0) * (x - s.sigma) * (x + s.sigma)).ln();
        let arg = s.gamma * e;
        let j = bessel_j(self.mode.m, arg)?;
        let env = env_bessel_j_with(self.mode.m, arg, self.j_transition)?;
        Ok(EvalResult::from_log(
            x,
            c.signum() * j.signum(),
            ln_pre + j.abs().ln(),
            Regime::BesselRadial,
            ln_pre + env.ln(),
            -self.ln_gamma,
        ))
    }

    /// Liouville-Green form on [1 + δ, ∞).
    pub fn radial_lg(&self, x: f64) -> Result<EvalResult> {
        if !(x >= 1.0 + self.partition.delta) || !x.is_finite() {
            return domain(format!("LG form needs x ≥ 1 + δ = {}, got {x}", 1.0 + self.partition.delta));
        }
        let s = &self.spectral;
        let (m, n) = (self.mode.m, self.mode.n);
        let phase = s.gamma * (xi(x, s.sigma)? + action_j(s.sigma)?) - n as f64 * FRAC_PI_2;
        let amp = parity_sign(n)
            / (s.gamma
                * ln_factorial((n - m) as u64).exp()
                * self.consts.v
                * ((x - 1.0) * (x + 1.0) * (x - s.sigma) * (x + s.sigma)).powf(0.25));
        let value = amp * phase.sin();
        Ok(EvalResult::from_log(x, value.signum(), value.abs().ln(), Regime::LgRadial, amp.abs().ln(), -self.ln_gamma))
    }
}

fn check_half_open(x: f64, lo: f64, what: &str) -> Result<()> {
    if !(x >= lo && x < 1.0) {
        return domain(format!("{what} needs {lo} ≤ x < 1, got {x}"));
    }
    Ok(())
}

fn check_sigma(s: &SpectralState, part: &RegimePartition) -> Result<()> {
    if s.sigma > part.sigma0 {
        return Err(Error::Range(format!("turning point σ = {} exceeds σ₀ = {}", s.sigma, part.sigma0)));
    }
    Ok(())
}
