//! Series ground truth: Ferrers and Legendre sums, the Bessel series for the
//! solution normalised at infinity, the constants K, A, V, and Ps(0), Ps′(0).
//!
//! [`Oracle`] redoes the eigenvalue and every coefficient in multiprecision.
//! The double-precision coefficients are fine for λ but useless for values
//! near x = ±1, for K and for A once γ is more than a few dozen: all of those
//! are exponentially small sums of O(1) terms.

mod mp;

use crate::eigensystem::{coefficient_table, norm_h, CoefficientTable, ModeIndex, Normalization, Truncation};
use crate::specfun::gamma::ln_gamma;
use crate::{Error, Result};
use mp::{from_f64, from_i64, log2_abs, to_f64, Accum, F};

/// Converged series value with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEvaluation {
    pub value: f64,
    pub terms_used: usize,
    /// Magnitude of the last retained terms.
    pub tail_bound: f64,
}

/// Bits kept in reserve beyond the cancellation seen in a sum.
const GUARD_BITS: f64 = 64.0;

/// Ferrers function P^m_ℓ(x) on (−1, 1), double precision.
pub fn ferrers_p(l: u32, m: u32, x: f64) -> Result<f64> {
    if !(x > -1.0 && x < 1.0) {
        return Err(Error::Domain(format!("Ferrers P needs |x| < 1, got {x}")));
    }
    if m > l {
        return Ok(0.0);
    }
    let s = ((1.0 - x) * (1.0 + x)).sqrt();
    ladder_f64(l, m, x, s, if m % 2 == 1 { -1.0 } else { 1.0 })
}

/// Associated Legendre function P^m_ℓ(x) on (1, ∞), double precision.
pub fn legendre_p_gt1(l: u32, m: u32, x: f64) -> Result<f64> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!("Legendre P needs x > 1, got {x}")));
    }
    if m > l {
        return Ok(0.0);
    }
    let s = ((x - 1.0) * (x + 1.0)).sqrt();
    ladder_f64(l, m, x, s, 1.0)
}

fn ladder_f64(l: u32, m: u32, x: f64, s: f64, sign: f64) -> Result<f64> {
    // running rescale keeps the x > 1 recurrence inside the exponent range
    let mut ln_scale = 0.0;
    let mut p_prev = 0.0;
    let mut p = sign;
    for j in 1..=m {
        p *= (2 * j - 1) as f64 * s;
        if p.abs() > 1e250 {
            ln_scale += p.abs().ln();
            p = p.signum();
        }
    }
    for d in m..l {
        let next = ((2 * d + 1) as f64 * x * p - (d + m) as f64 * p_prev) / (d - m + 1) as f64;
        p_prev = p;
        p = next;
        if p.abs() > 1e250 {
            let f = p.abs();
            ln_scale += f.ln();
            p /= f;
            p_prev /= f;
        }
    }
    let v = p * ln_scale.exp();
    if !v.is_finite() {
        return Err(Error::Overflow(format!("P^{m}_{l}({x}) exceeds the double range")));
    }
    Ok(v)
}

/// Angular series Σ (−1)^k a_k P^m_{n+2k}(x) in double precision.
pub fn angular_series(table: &CoefficientTable, x: f64) -> Result<SeriesEvaluation> {
    if !(x > -1.0 && x < 1.0) {
        return Err(Error::Domain(format!("angular series needs |x| < 1, got {x}")));
    }
    let s = ((1.0 - x) * (1.0 + x)).sqrt();
    series_f64(table, x, s, table.mode.m % 2 == 1)
}

/// Radial series Σ (−1)^k a_k P^m_{n+2k}(x) in double precision.
pub fn radial_series(table: &CoefficientTable, x: f64) -> Result<SeriesEvaluation> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!("radial series needs x > 1, got {x}")));
    }
    let s = ((x - 1.0) * (x + 1.0)).sqrt();
    series_f64(table, x, s, false)
}

fn series_f64(table: &CoefficientTable, x: f64, s: f64, negate: bool) -> Result<SeriesEvaluation> {
    let (m, n) = (table.mode.m, table.mode.n);
    let l_top = (n as i64 + 2 * table.k_max) as u32;
    let mut p = if negate { -1.0 } else { 1.0 };
    for j in 1..=m {
        p *= (2 * j - 1) as f64 * s;
    }
    let mut p_prev = 0.0;
    let mut sum = 0.0;
    let mut last = [0.0f64; 2];
    let mut used = 0;
    for l in m..=l_top {
        let k2 = l as i64 - n as i64;
        if k2 % 2 == 0 && k2 / 2 >= table.k_min {
            let k = k2 / 2;
            let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let t = sign * table.a(k) * p;
            sum += t;
            last = [last[1], t.abs()];
            used += 1;
        }
        let next = ((2 * l + 1) as f64 * x * p - (l + m) as f64 * p_prev) / (l - m + 1) as f64;
        p_prev = p;
        p = next;
        if !p.is_finite() {
            return Err(Error::Overflow(format!("Legendre recurrence overflowed at degree {l}")));
        }
    }
    Ok(SeriesEvaluation { value: sum, terms_used: used, tail_bound: last[0].max(last[1]) })
}

/// Multiprecision series oracle for one mode and γ, valid for |x| ≤ x_max.
#[derive(Debug, Clone)]
pub struct Oracle {
    mode: ModeIndex,
    gamma: f64,
    bits: usize,
    x_max: f64,
    lambda: f64,
    /// a_k for k = −k⁺ ..= k_top (band included).
    coeffs: Vec<F>,
    k_lo: i64,
    table: CoefficientTable,
}

fn w_of(x: f64) -> f64 {
    let x = x.abs();
    if x <= 1.0 {
        1.0
    } else {
        x + ((x - 1.0) * (x + 1.0)).sqrt()
    }
}

/// Precision that covers the cancellation of the Legendre sums up to x_max.
pub fn default_bits(gamma: f64, x_max: f64) -> usize {
    let w = w_of(x_max);
    (128.0 + gamma * (1.5f64).max(0.75 * w) / std::f64::consts::LN_2).ceil() as usize
}

/// Top index past which a_k P_{n+2k}(x) < 2^{−bits} on |x| ≤ x_max.
fn top_index(mode: ModeIndex, gamma: f64, x_max: f64, bits: usize, floor: i64) -> i64 {
    let g = gamma * w_of(x_max) / 4.0;
    let target = -((bits + 40) as f64) * std::f64::consts::LN_2;
    let mut k = (g.ceil() as i64).max(1);
    loop {
        let kf = k as f64;
        let l = mode.n as f64 + 2.0 * kf + 1.0;
        let ln_term = 2.0 * kf * g.max(1e-300).ln() - 2.0 * ln_gamma(kf + 1.0) + mode.m as f64 * l.ln();
        if ln_term < target {
            return (k + 10).max(floor);
        }
        k += 1;
    }
}

struct Ladder {
    a: Vec<F>,
    b: Vec<F>,
    c: Vec<F>,
}

impl Ladder {
    fn new(mode: ModeIndex, gamma: f64, k_lo: i64, k_top: i64, bits: usize) -> Self {
        let g = from_f64(gamma, bits);
        let g2 = &g * &g;
        let (m, n) = (mode.m as i64, mode.n as i64);
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut c = Vec::new();
        for k in k_lo..=k_top {
            let l = n + 2 * k;
            let q = |num: i64, den: i64| from_i64(num, bits) / from_i64(den, bits) * &g2;
            a.push(q((n - m + 2 * k - 1) * (n - m + 2 * k), (2 * l - 3) * (2 * l - 1)));
            b.push(q(2 * (l * (l + 1) + m * m - 1), (2 * l - 1) * (2 * l + 3)) - from_i64(l * (l + 1), bits));
            c.push(q((n + m + 2 * k + 1) * (n + m + 2 * k + 2), (2 * l + 3) * (2 * l + 5)));
        }
        Ladder { a, b, c }
    }
}

impl Oracle {
    /// Oracle with the default precision for |x| ≤ x_max.
    pub fn new(mode: ModeIndex, gamma: f64, x_max: f64) -> Result<Self> {
        Self::with_bits(mode, gamma, x_max, default_bits(gamma, x_max))
    }

    pub fn with_bits(mode: ModeIndex, gamma: f64, x_max: f64, bits: usize) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::Domain(format!("oracle needs γ > 0, got {gamma}")));
        }
        if !(x_max >= 0.0) || !x_max.is_finite() {
            return Err(Error::Domain(format!("x_max = {x_max} must be finite and ≥ 0")));
        }
        let table = coefficient_table(mode, gamma, Truncation::Auto, Normalization::Legendre)?;
        let k0 = -mode.k_minus();
        let k_lo = -mode.k_plus();
        let k_top = top_index(mode, gamma, x_max, bits, table.k_max);
        let lad = Ladder::new(mode, gamma, k_lo, k_top, bits);
        let idx = |k: i64| (k - k_lo) as usize;

        // pivot at the largest coefficient keeps both continued fractions tame
        let k_star = table
            .iter()
            .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
            .map(|(k, _)| k)
            .unwrap_or(0);

        let residual = |lam: &F| -> F {
            let mut r = from_i64(0, bits);
            for k in (k_star..k_top).rev() {
                let j = idx(k + 1);
                r = -(&lad.a[j]) / (lam + &lad.b[j] + &lad.c[j] * &r);
            }
            let mut s = from_i64(0, bits);
            for k in (k0 + 1)..=k_star {
                let j = idx(k - 1);
                s = -(&lad.c[j]) / (lam + &lad.b[j] + &lad.a[j] * &s);
            }
            let j = idx(k_star);
            lam + &lad.b[j] + &lad.a[j] * &s + &lad.c[j] * &r
        };

        // secant refinement of the double-precision eigenvalue
        let lam_d = table.lambda;
        let mut x0 = from_f64(lam_d, bits);
        let mut x1 = from_f64(lam_d + 1e-9 * lam_d.abs().max(1.0), bits);
        let mut f0 = residual(&x0);
        let mut f1 = residual(&x1);
        let tol_log2 = log2_abs(&x1).max(0.0) - bits as f64 + 6.0;
        let mut done = false;
        for _ in 0..200 {
            if mp::is_zero(&f1) {
                done = true;
                break;
            }
            let den = &f1 - &f0;
            if mp::is_zero(&den) {
                done = true;
                break;
            }
            let step = &f1 * (&x1 - &x0) / den;
            let x2 = &x1 - &step;
            x0 = x1;
            f0 = f1;
            x1 = x2;
            f1 = residual(&x1);
            if log2_abs(&step) < tol_log2 {
                done = true;
                break;
            }
        }
        let lambda = to_f64(&x1);
        if !done || (lambda - lam_d).abs() > 1e-6 * lam_d.abs().max(1.0) {
            return Err(Error::NonConvergence(format!(
                "multiprecision refinement of λ for {mode} at γ = {gamma} left {lam_d} (reached {lambda})"
            )));
        }
        let lam = x1;

        // coefficients from the two continued fractions, a_{k*} = 1
        let len = (k_top - k_lo + 1) as usize;
        let mut coeffs = vec![from_i64(0, bits); len];
        coeffs[idx(k_star)] = from_i64(1, bits);
        let mut ratios = vec![from_i64(0, bits); len];
        let mut r = from_i64(0, bits);
        for k in (k_star..k_top).rev() {
            let j = idx(k + 1);
            r = -(&lad.a[j]) / (&lam + &lad.b[j] + &lad.c[j] * &r);
            ratios[idx(k)] = r.clone();
        }
        for k in k_star..k_top {
            coeffs[idx(k + 1)] = &coeffs[idx(k)] * &ratios[idx(k)];
        }
        let mut s = from_i64(0, bits);
        for k in (k0 + 1)..=k_star {
            let j = idx(k - 1);
            s = -(&lad.c[j]) / (&lam + &lad.b[j] + &lad.a[j] * &s);
            ratios[idx(k)] = s.clone();
        }
        for k in ((k0 + 1)..=k_star).rev() {
            coeffs[idx(k - 1)] = &coeffs[idx(k)] * &ratios[idx(k)];
        }

        // normalisation Σ a_k² h_{n+2k} = h_n and a_0 > 0
        let (m, n) = (mode.m as i64, mode.n as i64);
        let h = |l: i64| -> F {
            let mut p = from_i64(1, bits);
            for j in (l - m + 1)..=(l + m) {
                p *= from_i64(j, bits);
            }
            p / from_i64(2 * l + 1, bits)
        };
        let hn = h(n);
        let mut total = from_i64(0, bits);
        for k in k0..=k_top {
            let a = &coeffs[idx(k)];
            total += a * a * h(n + 2 * k) / &hn;
        }
        let mut scale = from_i64(1, bits) / total.sqrt();
        if coeffs[idx(0)] < F::ZERO {
            scale = -scale;
        }
        for v in coeffs.iter_mut().skip(idx(k0)) {
            *v = &*v * &scale;
        }

        // lower band by upward recurrence from a_{−k⁺} = 1, a_{−k⁺−1} = 0
        if k0 > k_lo {
            let mut band = vec![from_i64(0, bits); (k0 - k_lo + 1) as usize];
            band[0] = from_i64(1, bits);
            let mut prev = from_i64(0, bits);
            for k in k_lo..k0 {
                let j = idx(k);
                let next = -((&lam + &lad.b[j]) * &band[j] + &lad.a[j] * &prev) / &lad.c[j];
                prev = band[j].clone();
                band[j + 1] = next;
            }
            let top = band[idx(k0)].clone();
            if mp::is_zero(&top) {
                return Err(Error::Degenerate(format!("lower band of {mode} vanished at the join")));
            }
            let fac = &coeffs[idx(k0)] / top;
            for k in k_lo..k0 {
                coeffs[idx(k)] = &band[idx(k)] * &fac;
            }
        }

        Ok(Oracle { mode, gamma, bits, x_max, lambda, coeffs, k_lo, table })
    }

    pub fn mode(&self) -> ModeIndex {
        self.mode
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn bits(&self) -> usize {
        self.bits
    }
    pub fn x_max(&self) -> f64 {
        self.x_max
    }
    /// λ rounded from the multiprecision value.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    /// The double-precision table the oracle was seeded from.
    pub fn table(&self) -> &CoefficientTable {
        &self.table
    }
    fn k_top(&self) -> i64 {
        self.k_lo + self.coeffs.len() as i64 - 1
    }
    fn coef(&self, k: i64) -> &F {
        &self.coeffs[(k - self.k_lo) as usize]
    }
    /// a_k rounded to double (band included).
    pub fn coefficient(&self, k: i64) -> f64 {
        if k < self.k_lo || k > self.k_top() {
            0.0
        } else {
            to_f64(self.coef(k))
        }
    }

    fn check_x(&self, x: f64) -> Result<()> {
        // the precision budget is flat on [−1, 1]
        if x.abs() > 1.0 && x.abs() > self.x_max * (1.0 + 1e-12) {
            return Err(Error::Domain(format!("oracle was built for |x| ≤ {}, got {x}", self.x_max)));
        }
        Ok(())
    }

    fn finish(&self, acc: &Accum, used: usize, tail: f64, what: &str) -> Result<SeriesEvaluation> {
        let lost = acc.lost_bits();
        if (self.bits as f64) - lost < GUARD_BITS && !mp::is_zero(&acc.sum) {
            return Err(Error::Precision { needed: (lost + 2.0 * GUARD_BITS) as usize, have: self.bits });
        }
        let value = to_f64(&acc.sum);
        if tail > 1e-15 * value.abs().max(1e-300) && tail > 0.0 && value != 0.0 {
            return Err(Error::NonConvergence(format!("{what}: tail {tail:e} against value {value:e}")));
        }
        Ok(SeriesEvaluation { value, terms_used: used, tail_bound: tail })
    }

    /// Σ (−1)^k a_k P^m_{n+2k}(x) and its x-derivative, multiprecision.
    fn legendre_sum(&self, x: f64) -> (Accum, Accum, usize, f64) {
        let bits = self.bits;
        let (m, n) = (self.mode.m, self.mode.n);
        let k0 = -self.mode.k_minus();
        let k_top = self.k_top();
        let l_top = (n as i64 + 2 * k_top) as u32;
        let xm = from_f64(x, bits);
        let p = mp::legendre_ladder(m, l_top, &xm, bits);
        let one = from_i64(1, bits);
        let den = (&one - &xm) * (&one + &xm);
        let mut val = Accum::new(bits);
        let mut der = Accum::new(bits);
        let mut last = [f64::NEG_INFINITY; 2];
        let mut used = 0;
        for k in k0..=k_top {
            let l = (n as i64 + 2 * k) as u32;
            let i = (l - m) as usize;
            let mut a = self.coef(k).clone();
            if k.rem_euclid(2) == 1 {
                a = -a;
            }
            let t = &a * &p[i];
            last = [last[1], log2_abs(&t)];
            val.add(&t);
            let prev = if i == 0 { from_i64(0, bits) } else { p[i - 1].clone() };
            let dp = (prev * from_i64((l + m) as i64, bits) - &xm * &p[i] * from_i64(l as i64, bits)) / &den;
            der.add(&(&a * dp));
            used += 1;
        }
        let tail = 2f64.powf(last[0].max(last[1]));
        (val, der, used, tail)
    }

    /// Angular function Ps(x) on (−1, 1).
    pub fn angular(&self, x: f64) -> Result<SeriesEvaluation> {
        self.angular_with_derivative(x).map(|(v, _)| v)
    }

    /// Angular function and its derivative.
    pub fn angular_with_derivative(&self, x: f64) -> Result<(SeriesEvaluation, f64)> {
        if !(x > -1.0 && x < 1.0) {
            return Err(Error::Domain(format!("angular function needs |x| < 1, got {x}")));
        }
        self.check_x(x)?;
        let (val, der, used, tail) = self.legendre_sum(x);
        let d = to_f64(&der.sum);
        if x == 0.0 && !self.mode.is_even() {
            return Ok((SeriesEvaluation { value: 0.0, terms_used: used, tail_bound: tail }, d));
        }
        if x == 0.0 && self.mode.is_even() {
            let v = self.finish(&val, used, tail, "angular series")?;
            return Ok((v, 0.0));
        }
        Ok((self.finish(&val, used, tail, "angular series")?, d))
    }

    /// Radial function Ps(x) on (1, ∞).
    pub fn radial(&self, x: f64) -> Result<SeriesEvaluation> {
        self.radial_with_derivative(x).map(|(v, _)| v)
    }

    pub fn radial_with_derivative(&self, x: f64) -> Result<(SeriesEvaluation, f64)> {
        if !(x > 1.0) || !x.is_finite() {
            return Err(Error::Domain(format!("radial function needs x > 1, got {x}")));
        }
        self.check_x(x)?;
        let (val, der, used, tail) = self.legendre_sum(x);
        Ok((self.finish(&val, used, tail, "radial series")?, to_f64(&der.sum)))
    }

    /// A = Σ_{k ≥ −k⁺} (−1)^k a_k.
    pub fn norm_a(&self) -> Result<f64> {
        Ok(to_f64(&self.norm_a_mp()?))
    }

    fn norm_a_mp(&self) -> Result<F> {
        let mut acc = Accum::new(self.bits);
        for k in self.k_lo..=self.k_top() {
            let t = if k.rem_euclid(2) == 1 { -self.coef(k).clone() } else { self.coef(k).clone() };
            acc.add(&t);
        }
        if (self.bits as f64) - acc.lost_bits() < GUARD_BITS {
            return Err(Error::Precision { needed: (acc.lost_bits() + 2.0 * GUARD_BITS) as usize, have: self.bits });
        }
        Ok(acc.sum)
    }

    /// K: the limit of Ps(x)/(1 − x)^{m/2} as x → 1⁻.
    pub fn boundary_k(&self) -> Result<f64> {
        let bits = self.bits;
        let (m, n) = (self.mode.m as i64, self.mode.n as i64);
        let mut acc = Accum::new(bits);
        for k in -self.mode.k_minus()..=self.k_top() {
            let l = n + 2 * k;
            let mut w = from_i64(1, bits);
            for j in (l - m + 1)..=(l + m) {
                w *= from_i64(j, bits);
            }
            let mut t = w * self.coef(k);
            if k.rem_euclid(2) == 1 {
                t = -t;
            }
            acc.add(&t);
        }
        if (bits as f64) - acc.lost_bits() < GUARD_BITS {
            return Err(Error::Precision { needed: (acc.lost_bits() + 2.0 * GUARD_BITS) as usize, have: bits });
        }
        let mut pre = from_i64(1, bits);
        for j in 2..=m {
            pre *= from_i64(j, bits);
        }
        let root2m = from_i64(2, bits).sqrt();
        for _ in 0..m {
            pre *= &root2m;
        }
        let k = acc.sum / pre;
        Ok(if m % 2 == 1 { -to_f64(&k) } else { to_f64(&k) })
    }

    /// Limit of the radial Ps(x)/(x − 1)^{m/2} as x → 1⁺; equals (−1)^m K.
    pub fn boundary_k_radial(&self) -> Result<f64> {
        let k = self.boundary_k()?;
        Ok(if self.mode.m % 2 == 1 { -k } else { k })
    }

    /// Ps(0) (even modes) and Ps′(0) (odd modes); the other entry is zero.
    pub fn origin_values(&self) -> Result<(f64, f64)> {
        let (v, d) = self.angular_with_derivative(0.0)?;
        if self.mode.is_even() {
            Ok((v.value, 0.0))
        } else {
            Ok((0.0, d))
        }
    }

    /// Solution normalised at infinity, via the spherical Bessel series
    /// (z² − 1)^{−m/2} z^m / A · Σ_{k ≥ −k⁺} a_k j_{n+2k}(γz).
    pub fn s1_bessel(&self, x: f64) -> Result<SeriesEvaluation> {
        if !(x >= 1.05) || !x.is_finite() {
            return Err(Error::Domain(format!("Bessel series needs x ≥ 1.05, got {x}")));
        }
        let bits = self.bits;
        let n = self.mode.n as i64;
        let l_top = (n + 2 * self.k_top()) as usize;
        let xm = from_f64(x, bits);
        let w = from_f64(self.gamma, bits) * &xm;
        let j = mp::spherical_j(l_top.max(1), &w, bits);
        // negative orders by the same recurrence run downward
        let l_low = n + 2 * self.k_lo;
        let mut neg: Vec<F> = Vec::new();
        if l_low < 0 {
            let (mut hi, mut mid) = (j[1].clone(), j[0].clone());
            for l in (l_low..0).rev() {
                // j_{l} = (2(l+1)+1)/w j_{l+1} − j_{l+2}
                let next = from_i64(2 * (l + 1) + 1, bits) / &w * &mid - &hi;
                hi = mid;
                mid = next.clone();
                neg.push(next);
            }
        }
        let sph = |l: i64| -> &F {
            if l >= 0 {
                &j[l as usize]
            } else {
                &neg[(-l - 1) as usize]
            }
        };
        let mut acc = Accum::new(bits);
        let mut last = [f64::NEG_INFINITY; 2];
        let mut used = 0;
        for k in self.k_lo..=self.k_top() {
            let t = self.coef(k) * sph(n + 2 * k);
            last = [last[1], log2_abs(&t)];
            acc.add(&t);
            used += 1;
        }
        let a = self.norm_a_mp()?;
        let one = from_i64(1, bits);
        let m = self.mode.m;
        let mut pre = from_i64(1, bits) / a;
        if m > 0 {
            let r = (&xm * &xm - &one).sqrt();
            for _ in 0..m {
                pre = pre * &xm / &r;
            }
        }
        let tail = 2f64.powf(last[0].max(last[1])) * to_f64(&mp::abs(&pre));
        let scaled = Accum { sum: &acc.sum * &pre, max_log2: acc.max_log2 + log2_abs(&pre) };
        self.finish(&scaled, used, tail, "Bessel series")
    }

    /// V from S⁽¹⁾ = (−1)^n (n − m)! V Ps at the probes x = 4, 6, 8.
    pub fn v_const(&self) -> Result<f64> {
        const PROBES: [f64; 3] = [4.0, 6.0, 8.0];
        let mut fact = 1.0;
        for j in 2..=(self.mode.n - self.mode.m) {
            fact *= j as f64;
        }
        let sign = if self.mode.n % 2 == 1 { -1.0 } else { 1.0 };
        let mut vals = Vec::with_capacity(PROBES.len());
        for &x in &PROBES {
            let s1 = self.s1_bessel(x)?.value;
            let ps = self.radial(x)?.value;
            vals.push(s1 / (sign * fact * ps));
        }
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let spread = vals.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max) / mean.abs();
        if !(spread < 1e-9) {
            return Err(Error::Inconsistent(format!("V probe ratios spread by {spread:e}")));
        }
        Ok(mean)
    }

    /// Relative spread of the V probe ratios (for diagnostics).
    pub fn v_spread(&self, probes: &[f64]) -> Result<(f64, f64)> {
        let mut fact = 1.0;
        for j in 2..=(self.mode.n - self.mode.m) {
            fact *= j as f64;
        }
        let sign = if self.mode.n % 2 == 1 { -1.0 } else { 1.0 };
        let mut vals = Vec::with_capacity(probes.len());
        for &x in probes {
            vals.push(self.s1_bessel(x)?.value / (sign * fact * self.radial(x)?.value));
        }
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let spread = vals.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max) / mean.abs();
        Ok((mean, spread))
    }

    /// h_n, the value of ∫Ps² under the chosen normalisation.
    pub fn norm_h(&self) -> f64 {
        norm_h(self.mode)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mode(m: u32, n: u32) -> ModeIndex {
        ModeIndex::new(m, n).unwrap()
    }

    // Rodrigues: P^m_ℓ(x) = (−1)^m (1−x²)^{m/2} dᵐ/dxᵐ P_ℓ(x), P_ℓ from the
    // explicit sum Σ (−1)^j (2ℓ−2j)! / (2^ℓ j! (ℓ−j)! (ℓ−2j)!) x^{ℓ−2j}
    fn rodrigues(l: u32, m: u32, x: f64) -> f64 {
        let fact = |k: u32| (1..=k).fold(1.0, |p, j| p * j as f64);
        let mut s = 0.0;
        for j in 0..=(l / 2) {
            let p = l - 2 * j;
            if p < m {
                continue;
            }
            let c = (-1f64).powi(j as i32) * fact(2 * l - 2 * j) / (2f64.powi(l as i32) * fact(j) * fact(l - j) * fact(p));
            s += c * fact(p) / fact(p - m) * x.powi((p - m) as i32);
        }
        (-1f64).powi(m as i32) * (1.0 - x * x).powf(m as f64 / 2.0) * s
    }

    #[test]
    fn ferrers_against_rodrigues() {
        assert_eq!(ferrers_p(1, 0, 0.37).unwrap(), 0.37);
        for &(l, m, x) in &[(5, 2, 0.3), (4, 1, -0.8), (6, 3, 0.55)] {
            let a = ferrers_p(l, m, x).unwrap();
            assert!((a - rodrigues(l, m, x)).abs() < 1e-13, "{l} {m} {x}");
            let b = ferrers_p(l, m, -x).unwrap();
            assert!((b - (-1f64).powi((l + m) as i32) * a).abs() < 1e-13);
        }
    }

    #[test]
    fn mp_matches_double_at_small_gamma() {
        let md = mode(1, 2);
        let o = Oracle::new(md, 10.0, 0.99).unwrap();
        let t = o.table();
        for &x in &[0.0, 0.3, -0.7, 0.95] {
            let a = o.angular(x).unwrap().value;
            let b = angular_series(t, x).unwrap().value;
            assert!((a - b).abs() < 1e-12, "x={x}: {a} {b}");
        }
        assert!((o.boundary_k().unwrap() - t.k_const().value).abs() < 1e-10 * t.k_const().value.abs());
    }

    #[test]
    fn odd_mode_vanishes_at_origin() {
        let o = Oracle::new(mode(0, 1), 20.0, 0.5).unwrap();
        assert_eq!(o.angular(0.0).unwrap().value, 0.0);
        assert!(o.origin_values().unwrap().1 != 0.0);
    }
}
