//! Eigenvalue λ and expansion coefficients from the three-term recurrence,
//! plus the asymptotic action relation that predicts λ without it.

use crate::specfun::elliptic::{complete_k, elliptic_e};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Mode (m, n) with 0 ≤ m ≤ n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeIndex {
    pub m: u32,
    pub n: u32,
}

impl ModeIndex {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if m > n {
            return Err(Error::InvalidMode(format!("m ≤ n violated: m = {m}, n = {n}")));
        }
        Ok(ModeIndex { m, n })
    }

    /// ⌊(n − m)/2⌋
    pub fn k_minus(&self) -> i64 {
        ((self.n - self.m) / 2) as i64
    }

    /// ⌊(n + m)/2⌋
    pub fn k_plus(&self) -> i64 {
        ((self.n + self.m) / 2) as i64
    }

    /// True when the angular function is even in x.
    pub fn is_even(&self) -> bool {
        (self.n + self.m) % 2 == 0
    }

    /// (−1)^{m+n}
    pub fn parity(&self) -> f64 {
        if self.is_even() {
            1.0
        } else {
            -1.0
        }
    }

    /// Lowest degree on the ladder n + 2k.
    pub fn l_min(&self) -> u32 {
        self.n - 2 * (self.k_minus() as u32)
    }

    /// Large-γ admissibility: n ≤ 2γ(1 − δ)/π.
    pub fn check_admissible(&self, gamma: f64, delta: f64) -> Result<()> {
        let cap = 2.0 * gamma * (1.0 - delta) / PI;
        if self.n as f64 > cap {
            return Err(Error::Range(format!(
                "n = {} exceeds 2γ(1−δ)/π = {cap:.6} for γ = {gamma}, δ = {delta}",
                self.n
            )));
        }
        Ok(())
    }
}

impl std::fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(m={}, n={})", self.m, self.n)
    }
}

/// Recurrence coefficients (A, B, C) at index k.
pub fn recurrence_coeffs(mode: ModeIndex, k: i64, gamma: f64) -> (f64, f64, f64) {
    let (m, n) = (mode.m as f64, mode.n as f64);
    let kf = k as f64;
    let g2 = gamma * gamma;
    let l = n + 2.0 * kf;
    let a = (n - m + 2.0 * kf - 1.0) * (n - m + 2.0 * kf) / ((2.0 * l - 3.0) * (2.0 * l - 1.0)) * g2;
    let b = 2.0 * (l * (l + 1.0) + m * m - 1.0) / ((2.0 * l - 1.0) * (2.0 * l + 3.0)) * g2 - l * (l + 1.0);
    let c = (n + m + 2.0 * kf + 1.0) * (n + m + 2.0 * kf + 2.0) / ((2.0 * l + 3.0) * (2.0 * l + 5.0)) * g2;
    (a, b, c)
}

/// Truncation policy for the Legendre ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Truncation {
    /// Start from max(2n, ⌈1.5γ⌉) + 30 and double until λ settles.
    #[default]
    Auto,
    /// Use exactly this k_max, still verified against 2·k_max.
    Fixed(usize),
}

impl Truncation {
    pub fn initial(&self, mode: ModeIndex, gamma: f64) -> usize {
        match *self {
            Truncation::Auto => (2 * mode.n as usize).max((1.5 * gamma).ceil() as usize) + 30,
            Truncation::Fixed(k) => k.max(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Σ a_k² h_{n+2k} = h_n, h_ℓ = 2(ℓ+m)!/((2ℓ+1)(ℓ−m)!); makes ∫Ps² equal h_n.
    #[default]
    Legendre,
    UnitVector,
}

const LAMBDA_TOL: f64 = 1e-10;
const MAX_DOUBLINGS: usize = 6;

/// Symmetric tridiagonal form on k = −k⁻ .. k_max.
struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Tridiagonal {
    fn new(mode: ModeIndex, gamma: f64, k_max: usize) -> Self {
        let k0 = -mode.k_minus();
        let len = (k_max as i64 - k0 + 1) as usize;
        let mut diag = Vec::with_capacity(len);
        let mut off = Vec::with_capacity(len.saturating_sub(1));
        for i in 0..len {
            let k = k0 + i as i64;
            let (_, b, c) = recurrence_coeffs(mode, k, gamma);
            diag.push(-b);
            if i + 1 < len {
                let (a1, _, _) = recurrence_coeffs(mode, k + 1, gamma);
                off.push(-(a1 * c).max(0.0).sqrt());
            }
        }
        Tridiagonal { diag, off }
    }

    /// Number of eigenvalues strictly below x.
    fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.diag.len() {
            let e2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            q = self.diag[i] - x - if i == 0 { 0.0 } else { e2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (self.diag[i].abs() + x.abs() + 1.0);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn eigenvalue(&self, rank: usize) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.diag.len() {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i < self.off.len() { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        let pad = 1e-12 * (lo.abs().max(hi.abs()) + 1.0);
        lo -= pad;
        hi += pad;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > rank {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Inverse iteration for the eigenvector of `lambda`.
    fn eigenvector(&self, lambda: f64) -> Result<Vec<f64>> {
        let n = self.diag.len();
        let scale = self.diag.iter().fold(1.0f64, |s, d| s.max(d.abs()))
            + self.off.iter().fold(0.0f64, |s, d| s.max(d.abs()));
        let mut v = vec![1.0; n];
        for (i, x) in v.iter_mut().enumerate() {
            // start vector with no special structure
            *x = 1.0 + 0.1 * ((i as f64) * 0.7548776662).sin();
        }
        let shift = lambda;
        for _ in 0..3 {
            v = solve_shifted(&self.diag, &self.off, shift, &v, scale)?;
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(norm.is_finite() && norm > 0.0) {
                return Err(Error::Degenerate("inverse iteration produced a zero vector".into()));
            }
            v.iter_mut().for_each(|x| *x /= norm);
        }
        // residual ‖(T − λ)v‖ relative to the matrix scale
        let mut res = 0.0f64;
        for i in 0..n {
            let mut r = (self.diag[i] - lambda) * v[i];
            if i > 0 {
                r += self.off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                r += self.off[i] * v[i + 1];
            }
            res = res.max(r.abs());
        }
        if res > 1e-9 * scale {
            return Err(Error::Degenerate(format!(
                "inverse iteration residual {res:e} at λ = {lambda}; eigenvalue may be nearly multiple"
            )));
        }
        Ok(v)
    }
}

/// Solve (T − s I) x = b with partial pivoting (tridiagonal LU).
fn solve_shifted(diag: &[f64], off: &[f64], s: f64, b: &[f64], scale: f64) -> Result<Vec<f64>> {
    let n = diag.len();
    // row i holds d[i], u1[i], u2[i] at columns i, i+1, i+2; u2 is pivoting fill-in
    let mut d: Vec<f64> = diag.iter().map(|x| x - s).collect();
    let mut u1: Vec<f64> = (0..n).map(|i| if i + 1 < n { off[i] } else { 0.0 }).collect();
    let mut u2 = vec![0.0; n];
    let mut rhs = b.to_vec();
    let tiny = f64::EPSILON * scale;
    for i in 0..n.saturating_sub(1) {
        let sub = off[i];
        if sub.abs() > d[i].abs() {
            // swap rows i and i+1
            let (nd, nu1, nu2) = (sub, d[i + 1], u1[i + 1]);
            let (od, ou1, ou2) = (d[i], u1[i], u2[i]);
            d[i] = nd;
            u1[i] = nu1;
            u2[i] = nu2;
            rhs.swap(i, i + 1);
            let f = od / nd;
            d[i + 1] = ou1 - f * nu1;
            u1[i + 1] = ou2 - f * nu2;
            rhs[i + 1] -= f * rhs[i];
        } else {
            let piv = if d[i] == 0.0 { tiny } else { d[i] };
            d[i] = piv;
            let f = sub / piv;
            d[i + 1] -= f * u1[i];
            u1[i + 1] -= f * u2[i];
            rhs[i + 1] -= f * rhs[i];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        if i + 1 < n {
            acc -= u1[i] * x[i + 1];
        }
        if i + 2 < n {
            acc -= u2[i] * x[i + 2];
        }
        let piv = if d[i] == 0.0 { tiny } else { d[i] };
        x[i] = acc / piv;
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Degenerate("tridiagonal solve overflowed".into()));
    }
    Ok(x)
}

fn rank(mode: ModeIndex) -> usize {
    ((mode.n - mode.l_min()) / 2) as usize
}

fn validate(gamma: f64) -> Result<()> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!("γ = {gamma} must be finite and ≥ 0")));
    }
    Ok(())
}

/// λ and the k_max at which it converged.
fn converged_lambda(mode: ModeIndex, gamma: f64, trunc: Truncation) -> Result<(f64, usize)> {
    validate(gamma)?;
    let r = rank(mode);
    let mut k_max = trunc.initial(mode, gamma).max(mode.k_minus() as usize + 2);
    if gamma == 0.0 {
        // diagonal ladder: the Legendre limit is exact
        let n = mode.n as f64;
        return Ok((n * (n + 1.0), k_max));
    }
    let mut prev = Tridiagonal::new(mode, gamma, k_max).eigenvalue(r);
    for _ in 0..MAX_DOUBLINGS {
        let next_k = 2 * k_max;
        let next = Tridiagonal::new(mode, gamma, next_k).eigenvalue(r);
        if (next - prev).abs() < LAMBDA_TOL * next.abs().max(1.0) {
            return Ok((next, next_k));
        }
        if matches!(trunc, Truncation::Fixed(_)) {
            return Err(Error::NonConvergence(format!(
                "λ moved by {:e} when k_max doubled from {k_max}",
                (next - prev).abs()
            )));
        }
        prev = next;
        k_max = next_k;
    }
    Err(Error::NonConvergence(format!("λ not converged for {mode} at γ = {gamma}")))
}

/// λ by Sturm bisection on the truncated, symmetrised recurrence matrix.
pub fn eigenvalue_oracle(mode: ModeIndex, gamma: f64, trunc: Truncation) -> Result<f64> {
    converged_lambda(mode, gamma, trunc).map(|(l, _)| l)
}

/// Ladder ratio ln(e_{k+1}/e_k) for the symmetrising similarity.
fn ln_scale_step(mode: ModeIndex, k: i64) -> f64 {
    let (m, n) = (mode.m as f64, mode.n as f64);
    let kf = k as f64;
    let num = (n - m + 2.0 * kf + 1.0) * (n - m + 2.0 * kf + 2.0) * (2.0 * n + 4.0 * kf + 5.0);
    let den = (n + m + 2.0 * kf + 1.0) * (n + m + 2.0 * kf + 2.0) * (2.0 * n + 4.0 * kf + 1.0);
    0.5 * (num / den).ln()
}

/// h_ℓ / h_n with h_ℓ = 2(ℓ+m)!/((2ℓ+1)(ℓ−m)!).
fn h_ratio(m: u32, n: u32, l: u32) -> f64 {
    let r = |l: u32| -> f64 {
        let mut p = 1.0;
        for j in (l - m + 1)..=(l + m) {
            p *= j as f64;
        }
        p / (2 * l + 1) as f64
    };
    r(l) / r(n)
}

/// h_n = 2(n+m)!/((2n+1)(n−m)!)
pub fn norm_h(mode: ModeIndex) -> f64 {
    let mut p = 2.0;
    for j in (mode.n - mode.m + 1)..=(mode.n + mode.m) {
        p *= j as f64;
    }
    p / (2 * mode.n + 1) as f64
}

/// A sum with its largest term, to judge cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckedSum {
    pub value: f64,
    pub largest_term: f64,
}

impl CheckedSum {
    /// True when the sum lost more than eight digits to cancellation.
    pub fn significance_lost(&self) -> bool {
        self.value.abs() < 1e-8 * self.largest_term
    }
}

/// Expansion coefficients a_{n,k} for k = −k⁻ .. k_max, plus the lower band
/// k = −k⁺ .. −k⁻−1 that only the Bessel series uses.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    pub mode: ModeIndex,
    pub gamma: f64,
    pub lambda: f64,
    pub k_min: i64,
    pub k_max: i64,
    pub values: Vec<f64>,
    pub band: Vec<f64>,
    pub normalization: Normalization,
}

impl CoefficientTable {
    /// a_{n,k}, zero outside the stored range.
    pub fn a(&self, k: i64) -> f64 {
        if k >= self.k_min && k <= self.k_max {
            self.values[(k - self.k_min) as usize]
        } else {
            let lo = self.k_min - self.band.len() as i64;
            if k >= lo && k < self.k_min {
                self.band[(k - lo) as usize]
            } else {
                0.0
            }
        }
    }

    /// (k, a_k) over the Legendre range.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values.iter().enumerate().map(move |(i, &v)| (self.k_min + i as i64, v))
    }

    /// Σ_k a_k² h_{n+2k}
    pub fn weighted_norm(&self) -> f64 {
        let (m, n) = (self.mode.m, self.mode.n);
        let hn = norm_h(self.mode);
        self.iter()
            .map(|(k, a)| a * a * hn * h_ratio(m, n, (n as i64 + 2 * k) as u32))
            .sum()
    }

    /// A = Σ_{k ≥ −k⁺} (−1)^k a_k, lower band included.
    pub fn norm_a(&self) -> CheckedSum {
        let lo = self.k_min - self.band.len() as i64;
        let mut sum = 0.0;
        let mut big = 0.0f64;
        for k in lo..=self.k_max {
            let t = sign_k(k) * self.a(k);
            sum += t;
            big = big.max(t.abs());
        }
        CheckedSum { value: sum, largest_term: big }
    }

    /// K = (−1)^m/(2^{m/2} m!) Σ_{k ≥ −k⁻} (−1)^k (n+2k+m)!/(n+2k−m)! a_k,
    /// the limit of Ps/(1 − x)^{m/2} as x → 1⁻.
    pub fn k_const(&self) -> CheckedSum {
        let m = self.mode.m;
        let mut sum = 0.0;
        let mut big = 0.0f64;
        for (k, a) in self.iter() {
            let l = (self.mode.n as i64 + 2 * k) as u32;
            let mut w = 1.0;
            for j in (l - m + 1)..=(l + m) {
                w *= j as f64;
            }
            let t = sign_k(k) * w * a;
            sum += t;
            big = big.max(t.abs());
        }
        let mut pre = if m % 2 == 0 { 1.0 } else { -1.0 };
        pre /= 2f64.powf(0.5 * m as f64);
        for j in 2..=m {
            pre /= j as f64;
        }
        CheckedSum { value: pre * sum, largest_term: pre.abs() * big }
    }
}

fn sign_k(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Lower band a_k for k = −k⁺ .. −k⁻−1, by upward recurrence from a_{−k⁺} = 1
/// scaled to meet the given a_{−k⁻}.
fn lower_band(mode: ModeIndex, gamma: f64, lambda: f64, a_bottom: f64) -> Vec<f64> {
    let (kp, km) = (mode.k_plus(), mode.k_minus());
    let len = (kp - km) as usize;
    if len == 0 || gamma == 0.0 {
        return vec![0.0; len];
    }
    let mut vals = vec![0.0; len + 1];
    vals[0] = 1.0;
    let mut prev = 0.0;
    for i in 0..len {
        let k = -kp + i as i64;
        let (a, b, c) = recurrence_coeffs(mode, k, gamma);
        let next = -((lambda + b) * vals[i] + a * prev) / c;
        prev = vals[i];
        vals[i + 1] = next;
    }
    let s = a_bottom / vals[len];
    vals.truncate(len);
    vals.iter().map(|v| v * s).collect()
}

/// Coefficients of the converged truncated system, normalised as requested
/// with a_{n,0} > 0.
pub fn coefficient_table(
    mode: ModeIndex,
    gamma: f64,
    trunc: Truncation,
    normalization: Normalization,
) -> Result<CoefficientTable> {
    let (lambda, k_max) = converged_lambda(mode, gamma, trunc)?;
    let k_min = -mode.k_minus();
    let mut values = if gamma == 0.0 {
        let mut v = vec![0.0; (k_max as i64 - k_min + 1) as usize];
        v[(-k_min) as usize] = 1.0;
        v
    } else {
        let t = Tridiagonal::new(mode, gamma, k_max);
        let v = t.eigenvector(lambda)?;
        let mut ln_e = 0.0;
        let mut out = Vec::with_capacity(v.len());
        for (i, x) in v.iter().enumerate() {
            if i > 0 {
                ln_e += ln_scale_step(mode, k_min + i as i64 - 1);
            }
            out.push(x * ln_e.exp());
        }
        out
    };
    let a0 = values[(-k_min) as usize];
    if a0 == 0.0 {
        return Err(Error::Degenerate(format!("a_(n,0) vanished for {mode} at γ = {gamma}")));
    }
    let s = a0.signum();
    values.iter_mut().for_each(|x| *x *= s);
    let mut table = CoefficientTable {
        mode,
        gamma,
        lambda,
        k_min,
        k_max: k_max as i64,
        values,
        band: Vec::new(),
        normalization,
    };
    let scale = match normalization {
        Normalization::Legendre => (norm_h(mode) / table.weighted_norm()).sqrt(),
        Normalization::UnitVector => 1.0 / table.values.iter().map(|x| x * x).sum::<f64>().sqrt(),
    };
    table.values.iter_mut().for_each(|x| *x *= scale);
    table.band = lower_band(mode, gamma, lambda, table.values[0]);
    Ok(table)
}

/// J(σ) = ∫₀^σ √((σ² − t²)/(1 − t²)) dt = σ E(σ; 1/σ).
pub fn action_j(sigma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&sigma) {
        return Err(Error::Domain(format!("σ = {sigma} outside [0, 1]")));
    }
    if sigma == 0.0 {
        return Ok(0.0);
    }
    Ok(sigma * elliptic_e(sigma, 1.0 / sigma)?)
}

/// dJ/dσ = σ K(σ).
pub fn action_j_derivative(sigma: f64) -> f64 {
    if sigma >= 1.0 {
        return f64::INFINITY;
    }
    sigma * complete_k(sigma)
}

/// σ with γ J(σ) = ½(n − m + ½)π.
pub fn solve_sigma(mode: ModeIndex, gamma: f64) -> Result<f64> {
    validate(gamma)?;
    let target = 0.5 * ((mode.n - mode.m) as f64 + 0.5) * PI / gamma;
    if !(target < 1.0) {
        return Err(Error::Range(format!(
            "½(n−m+½)π = {:.6} ≥ γ = {gamma}; {mode} is outside the admissible band",
            target * gamma
        )));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut s = (4.0 * target / PI).sqrt().min(0.99);
    for _ in 0..200 {
        let f = action_j(s)? - target;
        if f.abs() < 1e-14 {
            return Ok(s);
        }
        if f > 0.0 {
            hi = s;
        } else {
            lo = s;
        }
        let step = f / action_j_derivative(s);
        let mut next = s - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - s).abs() < 1e-16 * s.max(1e-300) || hi - lo < 1e-16 {
            return Ok(next);
        }
        s = next;
    }
    Err(Error::NonConvergence(format!("σ root-find for {mode} at γ = {gamma}")))
}

/// −γ²(1 − σ²) with σ from the action relation.
pub fn lambda_asymptotic(mode: ModeIndex, gamma: f64) -> Result<f64> {
    let s = solve_sigma(mode, gamma)?;
    Ok(-gamma * gamma * (1.0 - s) * (1.0 + s))
}

/// (γ, λ, σ, α) with λ = −γ²(1 − σ²) and α² = 4J(σ)/π.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralState {
    pub gamma: f64,
    pub lambda: f64,
    pub sigma: f64,
    pub alpha: f64,
}

impl SpectralState {
    /// From a known eigenvalue.
    pub fn from_lambda(gamma: f64, lambda: f64) -> Result<Self> {
        validate(gamma)?;
        if gamma == 0.0 {
            return Err(Error::Domain("γ = 0 has no turning point".into()));
        }
        let s2 = 1.0 + lambda / (gamma * gamma);
        if !(0.0..1.0).contains(&s2) {
            return Err(Error::Range(format!(
                "λ = {lambda} gives σ² = {s2} outside [0, 1) at γ = {gamma}"
            )));
        }
        Self::from_sigma(gamma, s2.sqrt())
    }

    /// From σ, with λ computed by the exact relation.
    pub fn from_sigma(gamma: f64, sigma: f64) -> Result<Self> {
        let alpha = crate::maps::alpha_of_sigma(sigma)?;
        Ok(SpectralState { gamma, lambda: -gamma * gamma * (1.0 - sigma) * (1.0 + sigma), sigma, alpha })
    }

    /// σ from the action relation.
    pub fn asymptotic(mode: ModeIndex, gamma: f64) -> Result<Self> {
        Self::from_sigma(gamma, solve_sigma(mode, gamma)?)
    }

    /// λ from the recurrence.
    pub fn oracle(mode: ModeIndex, gamma: f64, trunc: Truncation) -> Result<Self> {
        Self::from_lambda(gamma, eigenvalue_oracle(mode, gamma, trunc)?)
    }

    /// Parabolic cylinder parameter −½γα².
    pub fn pc_parameter(&self) -> f64 {
        -0.5 * self.gamma * self.alpha * self.alpha
    }
}
