//! Parabolic cylinder functions U(a, t) and V(a, t) for a ≤ 0.
//!
//! Both solve W'' = (t²/4 + a) W. Values are produced by a Taylor-series
//! integrator: forward from t = 0 (closed-form initial values) for V and for U
//! up to the turning point 2√(−a), and backward from a point T where the
//! large-t expansion of U is accurate to full precision. Beyond T both
//! functions come straight from their asymptotic expansions.
//!
//! All states carry a separate natural-log scale, so arbitrarily large |a| and
//! t do not overflow. The companion stored in [`PcPair::ubar`] is normalised so
//! that W{U, ubar} = √(2/π); the companion of equal oscillatory amplitude is
//! Γ(½ − a)·ubar.

use super::gamma::ln_gamma;
use super::sin_pi;
use crate::error::domain;
use crate::{Error, Result};
use std::f64::consts::{FRAC_2_PI, LN_2, PI};

/// Values of U, U', V, V' at (a, t). The true value of U is `u·exp(ln_scale_u)`;
/// likewise for the others.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcPair {
    pub a: f64,
    pub t: f64,
    pub u: f64,
    pub du: f64,
    pub ubar: f64,
    pub dubar: f64,
    pub ln_scale_u: f64,
    pub ln_scale_ubar: f64,
}

impl PcPair {
    fn unscale(v: f64, ls: f64, what: &str) -> Result<f64> {
        let r = v * ls.exp();
        if v != 0.0 && (!r.is_finite() || r == 0.0) {
            return Err(Error::Overflow(format!("{what} outside the double range; use the scaled form")));
        }
        Ok(r)
    }

    pub fn u_value(&self) -> Result<f64> {
        Self::unscale(self.u, self.ln_scale_u, "U")
    }
    pub fn du_value(&self) -> Result<f64> {
        Self::unscale(self.du, self.ln_scale_u, "U'")
    }
    pub fn ubar_value(&self) -> Result<f64> {
        Self::unscale(self.ubar, self.ln_scale_ubar, "Ū")
    }
    pub fn dubar_value(&self) -> Result<f64> {
        Self::unscale(self.dubar, self.ln_scale_ubar, "Ū'")
    }

    /// U·exp(t²/4).
    pub fn u_scaled(&self) -> Result<f64> {
        Self::unscale(self.u, self.ln_scale_u + 0.25 * self.t * self.t, "scaled U")
    }

    /// Ū·exp(−t²/4).
    pub fn ubar_scaled(&self) -> Result<f64> {
        Self::unscale(self.ubar, self.ln_scale_ubar - 0.25 * self.t * self.t, "scaled Ū")
    }

    /// ln |U(a, t)|.
    pub fn ln_abs_u(&self) -> f64 {
        self.u.abs().ln() + self.ln_scale_u
    }

    pub fn ln_abs_ubar(&self) -> f64 {
        self.ubar.abs().ln() + self.ln_scale_ubar
    }

    /// U Ū' − U' Ū.
    pub fn wronskian(&self) -> f64 {
        (self.u * self.dubar - self.du * self.ubar) * (self.ln_scale_u + self.ln_scale_ubar).exp()
    }
}

#[derive(Debug, Clone, Copy)]
struct State {
    t: f64,
    w: f64,
    dw: f64,
    ls: f64,
}

impl State {
    fn normalised(mut self) -> Self {
        let m = self.w.abs().max(self.dw.abs());
        if m > 0.0 && m.is_finite() {
            self.w /= m;
            self.dw /= m;
            self.ls += m.ln();
        }
        self
    }
}

/// Parabolic cylinder functions at fixed a, with cached integration checkpoints.
#[derive(Debug, Clone)]
pub struct ParabolicCylinder {
    a: f64,
    ln_gamma_half_minus_a: f64,
    turning: f64,
    t_asym: f64,
    forward_u: Vec<State>,
    forward_v: Vec<State>,
    backward_u: Vec<State>,
    crossing: f64,
}

const SERIES_EPS: f64 = 1e-18;
const MAX_A: f64 = 1e4;
const MAX_T: f64 = 1e4;

fn step_size(a: f64, t: f64) -> f64 {
    let q = a.abs() + 0.25 * (t.abs() + 0.5).powi(2) + 1.0;
    (0.9 / q.sqrt()).min(0.5)
}

/// One Taylor step of length h from `s` for W'' = (t²/4 + a) W.
fn taylor_step(a: f64, s: State, h: f64) -> State {
    let t0 = s.t;
    let q = a + 0.25 * t0 * t0;
    let h2 = h * h;
    // scaled coefficients d_k = W^{(k)}(t0) h^k / k!
    let mut dm2 = 0.0;
    let mut dm1 = 0.0;
    let mut dk = s.w;
    let mut dk1 = s.dw * h;
    let mut sum_w = dk + dk1;
    let mut sum_dw = dk1;
    let mut k = 0usize;
    let mut small = 0;
    loop {
        // d_{k+2} from d_k, d_{k-1}, d_{k-2}
        let kf = k as f64;
        let next = h2 * (q * dk + 0.5 * t0 * h * dm1 + 0.25 * h2 * dm2) / ((kf + 1.0) * (kf + 2.0));
        sum_w += next;
        sum_dw += (kf + 2.0) * next;
        let scale = sum_w.abs() + sum_dw.abs();
        if next.abs() <= SERIES_EPS * scale {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
        dm2 = dm1;
        dm1 = dk;
        dk = dk1;
        dk1 = next;
        k += 1;
        if k > 400 {
            break;
        }
    }
    State { t: t0 + h, w: sum_w, dw: sum_dw / h, ls: s.ls }.normalised()
}

fn integrate_to(a: f64, mut s: State, target: f64, keep: Option<&mut Vec<State>>) -> State {
    let mut store = keep;
    let dir = if target >= s.t { 1.0 } else { -1.0 };
    while (target - s.t) * dir > 0.0 {
        let h = step_size(a, s.t).min((target - s.t).abs()) * dir;
        let next = taylor_step(a, s, h);
        s = if (target - next.t) * dir <= 1e-15 * target.abs().max(1.0) {
            State { t: target, ..next }
        } else {
            next
        };
        if let Some(v) = store.as_mut() {
            v.push(s);
        }
    }
    s
}

/// Large-t expansions. Returns (U state, V state) or None when the series do
/// not reach full precision at t.
fn asymptotic(a: f64, t: f64) -> Option<(State, State)> {
    let inv = 1.0 / (2.0 * t * t);
    let series = |b: f64, sign: f64| -> Option<(f64, f64)> {
        // Σ sign^s (b)_{2s} / (s! (2t²)^s) and Σ s·term
        let mut term = 1.0f64;
        let mut sum: f64 = 1.0;
        let mut ssum = 0.0;
        for s in 1..2000 {
            let sf = s as f64;
            let next = term * sign * (b + 2.0 * sf - 2.0) * (b + 2.0 * sf - 1.0) * inv / sf;
            if next.abs() > term.abs() && next.abs() > SERIES_EPS * sum.abs() {
                return None;
            }
            term = next;
            sum += term;
            ssum += sf * term;
            if term.abs() <= SERIES_EPS * sum.abs() {
                return Some((sum, ssum));
            }
        }
        None
    };
    let (su, ssu) = series(0.5 + a, -1.0)?;
    let (sv, ssv) = series(0.5 - a, 1.0)?;
    if su <= 0.0 {
        return None;
    }
    let p = -a - 0.5;
    let u = State {
        t,
        w: su,
        dw: -0.5 * t * su + (p * su - 2.0 * ssu) / t,
        ls: -0.25 * t * t + p * t.ln(),
    };
    let v = State {
        t,
        w: sv,
        dw: 0.5 * t * sv + ((a - 0.5) * sv - 2.0 * ssv) / t,
        ls: 0.25 * t * t + (a - 0.5) * t.ln() + 0.5 * FRAC_2_PI.ln(),
    };
    Some((u.normalised(), v.normalised()))
}

fn nearest_below(v: &[State], t: f64) -> State {
    let i = v.partition_point(|s| s.t <= t);
    v[i.saturating_sub(1)]
}

fn nearest_above(v: &[State], t: f64) -> State {
    // backward checkpoints are stored with decreasing t
    let i = v.partition_point(|s| s.t >= t);
    v[i.saturating_sub(1)]
}

impl ParabolicCylinder {
    pub fn new(a: f64) -> Result<Self> {
        if !a.is_finite() || a > 0.0 {
            return domain(format!("parabolic cylinder parameter a = {a} must satisfy a ≤ 0"));
        }
        if a < -MAX_A {
            return domain(format!("parabolic cylinder parameter a = {a} below −{MAX_A}"));
        }
        let lg0 = -0.5 * PI.ln() - (0.5 * a + 0.25) * LN_2 + ln_gamma(0.25 - 0.5 * a);
        let lg1 = -0.5 * PI.ln() + (0.25 - 0.5 * a) * LN_2 + ln_gamma(0.75 - 0.5 * a);
        let lgh = ln_gamma(0.5 - a);
        let s_minus = sin_pi(0.25 - 0.5 * a);
        let s_plus = sin_pi(0.25 + 0.5 * a);
        let r = (lg1 - lg0).exp();
        let u0 = State { t: 0.0, w: s_minus, dw: -r * s_plus, ls: lg0 }.normalised();
        let v0 = State { t: 0.0, w: s_plus, dw: r * s_minus, ls: lg0 - lgh }.normalised();

        let turning = 2.0 * (-a).sqrt();
        let mut t_asym = (1.5 * turning).max(turning + 6.0).max(8.0);
        let (ua, _) = loop {
            if let Some(p) = asymptotic(a, t_asym) {
                break p;
            }
            t_asym *= 1.15;
            if t_asym > MAX_T {
                return Err(Error::NonConvergence(format!("no asymptotic start for a = {a}")));
            }
        };

        let mut forward_u = vec![u0];
        integrate_to(a, u0, turning, Some(&mut forward_u));
        let mut forward_v = vec![v0];
        integrate_to(a, v0, t_asym, Some(&mut forward_v));
        let mut backward_u = vec![ua];
        integrate_to(a, ua, (turning - 0.5).max(0.0), Some(&mut backward_u));

        let mut pc = ParabolicCylinder {
            a,
            ln_gamma_half_minus_a: lgh,
            turning,
            t_asym,
            forward_u,
            forward_v,
            backward_u,
            crossing: 0.0,
        };
        pc.crossing = pc.find_crossing()?;
        Ok(pc)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// ln Γ(½ − a): Γ(½ − a)·V is the companion with the same oscillatory amplitude as U.
    pub fn ln_gamma_half_minus_a(&self) -> f64 {
        self.ln_gamma_half_minus_a
    }

    /// Turning point 2√(−a).
    pub fn turning_point(&self) -> f64 {
        self.turning
    }

    /// Largest t at which U and Γ(½ − a)V are equal and positive; the envelope
    /// switches form there.
    pub fn crossing(&self) -> f64 {
        self.crossing
    }

    fn u_state(&self, t: f64) -> State {
        if t >= self.t_asym {
            return asymptotic(self.a, t).expect("expansion converges beyond its start").0;
        }
        if t <= self.turning {
            let s = nearest_below(&self.forward_u, t);
            integrate_to(self.a, s, t, None)
        } else {
            let s = nearest_above(&self.backward_u, t);
            integrate_to(self.a, s, t, None)
        }
    }

    fn v_state(&self, t: f64) -> State {
        if t >= self.t_asym {
            return asymptotic(self.a, t).expect("expansion converges beyond its start").1;
        }
        let s = nearest_below(&self.forward_v, t);
        integrate_to(self.a, s, t, None)
    }

    /// U, U', V, V' at t.
    pub fn eval(&self, t: f64) -> Result<PcPair> {
        if !t.is_finite() || t.abs() > MAX_T {
            return Err(Error::Overflow(format!("|t| = {} beyond the exponent guard", t.abs())));
        }
        let tt = t.abs();
        let u = self.u_state(tt);
        let v = self.v_state(tt);
        if t >= 0.0 {
            return Ok(PcPair {
                a: self.a,
                t,
                u: u.w,
                du: u.dw,
                ubar: v.w,
                dubar: v.dw,
                ln_scale_u: u.ls,
                ln_scale_ubar: v.ls,
            });
        }
        let sa = sin_pi(self.a);
        let ca = sin_pi(self.a + 0.5);
        let g = self.ln_gamma_half_minus_a;
        // U(a,−t) = −sin(πa)U + cos(πa)Γ(½−a)V,  V(a,−t) = sin(πa)V + cos(πa)U/Γ(½−a)
        let (uw, ul) = combine(-sa, u.w, u.ls, ca, v.w, v.ls + g);
        let (udw, udl) = combine(sa, u.dw, u.ls, -ca, v.dw, v.ls + g);
        let (vw, vl) = combine(sa, v.w, v.ls, ca, u.w, u.ls - g);
        let (vdw, vdl) = combine(-sa, v.dw, v.ls, -ca, u.dw, u.ls - g);
        let (u_w, u_dw, lsu) = same_scale(uw, ul, udw, udl);
        let (v_w, v_dw, lsv) = same_scale(vw, vl, vdw, vdl);
        Ok(PcPair {
            a: self.a,
            t,
            u: u_w,
            du: u_dw,
            ubar: v_w,
            dubar: v_dw,
            ln_scale_u: lsu,
            ln_scale_ubar: lsv,
        })
    }

    fn olver_positive(&self, t: f64) -> Result<Option<(f64, f64)>> {
        let p = self.eval(t)?;
        if p.u > 0.0 && p.ubar > 0.0 {
            Ok(Some((p.ln_abs_u(), p.ln_abs_ubar() + self.ln_gamma_half_minus_a)))
        } else {
            Ok(None)
        }
    }

    fn find_crossing(&self) -> Result<f64> {
        let beyond = |t: f64| -> Result<bool> {
            Ok(matches!(self.olver_positive(t)?, Some((lu, lb)) if lb > lu))
        };
        let mut hi = self.t_asym;
        if !beyond(hi)? {
            return Err(Error::Inconsistent(format!("U dominates at t = {hi} for a = {}", self.a)));
        }
        let mut lo = hi;
        loop {
            let step = 0.5 * step_size(self.a, lo);
            lo -= step;
            if lo <= 0.0 {
                if beyond(0.0)? {
                    return Ok(0.0);
                }
                lo = 0.0;
                break;
            }
            if !beyond(lo)? {
                break;
            }
            hi = lo;
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if beyond(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo < 1e-13 * hi.max(1.0) {
                break;
            }
        }
        Ok(hi)
    }

    /// ln env U(a, t): hypot(U, Ū) before the crossing point and √(2UŪ) after it,
    /// with Ū = Γ(½ − a)V the amplitude-matched companion.
    pub fn ln_envelope(&self, t: f64) -> Result<f64> {
        let p = self.eval(t)?;
        let lu = p.ln_abs_u();
        let lb = p.ln_abs_ubar() + self.ln_gamma_half_minus_a;
        if t >= self.crossing && t >= 0.0 {
            Ok(0.5 * (LN_2 + lu + lb))
        } else {
            Ok(ln_hypot(lu, lb))
        }
    }

    /// ln of the error scale env U / E, where E = √(Ū/U) past the crossing:
    /// hypot(U, Ū) before it and √2·|U| after it.
    pub fn ln_modulus(&self, t: f64) -> Result<f64> {
        let p = self.eval(t)?;
        let lu = p.ln_abs_u();
        if t >= self.crossing && t >= 0.0 {
            Ok(0.5 * LN_2 + lu)
        } else {
            Ok(ln_hypot(lu, p.ln_abs_ubar() + self.ln_gamma_half_minus_a))
        }
    }
}

fn ln_hypot(la: f64, lb: f64) -> f64 {
    let (hi, lo) = if la >= lb { (la, lb) } else { (lb, la) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + 0.5 * (2.0 * (lo - hi)).exp().ln_1p()
}

fn combine(c1: f64, x1: f64, l1: f64, c2: f64, x2: f64, l2: f64) -> (f64, f64) {
    let l = l1.max(l2);
    (c1 * x1 * (l1 - l).exp() + c2 * x2 * (l2 - l).exp(), l)
}

fn same_scale(w: f64, lw: f64, dw: f64, ldw: f64) -> (f64, f64, f64) {
    let l = lw.max(ldw);
    (w * (lw - l).exp(), dw * (ldw - l).exp(), l)
}

/// U, U', V, V' at (a, t).
pub fn pcf(a: f64, t: f64) -> Result<PcPair> {
    ParabolicCylinder::new(a)?.eval(t)
}

/// ln env U(a, t).
pub fn ln_pcf_envelope(a: f64, t: f64) -> Result<f64> {
    ParabolicCylinder::new(a)?.ln_envelope(t)
}
