//! Thin helpers over dashu binary floats.

use dashu_base::Abs;
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;

pub(crate) type F = FBig<HalfEven, 2>;

pub(crate) fn from_f64(x: f64, bits: usize) -> F {
    F::try_from(x).expect("finite input").with_precision(bits).value()
}

pub(crate) fn from_i64(x: i64, bits: usize) -> F {
    F::from(x).with_precision(bits).value()
}

pub(crate) fn to_f64(x: &F) -> f64 {
    x.to_f64().value()
}

pub(crate) fn is_zero(x: &F) -> bool {
    x.repr().significand().is_zero()
}

/// log₂|x|, −∞ for zero; accurate to a fraction of a bit.
pub(crate) fn log2_abs(x: &F) -> f64 {
    if is_zero(x) {
        return f64::NEG_INFINITY;
    }
    let r = x.repr();
    let digits = r.digits();
    // leading 53 bits of the significand carry the fractional part
    let shift = digits.saturating_sub(53);
    let lead = (r.significand().clone() >> shift).abs();
    let lead = F::from(lead);
    to_f64(&lead).log2() + shift as f64 + r.exponent() as f64
}

pub(crate) fn abs(x: &F) -> F {
    x.clone().abs()
}

/// Running sum that remembers the largest term magnitude (as log₂).
pub(crate) struct Accum {
    pub sum: F,
    pub max_log2: f64,
}

impl Accum {
    pub fn new(bits: usize) -> Self {
        Accum { sum: from_i64(0, bits), max_log2: f64::NEG_INFINITY }
    }

    pub fn add(&mut self, t: &F) {
        self.max_log2 = self.max_log2.max(log2_abs(t));
        self.sum = &self.sum + t;
    }

    /// Bits lost to cancellation.
    pub fn lost_bits(&self) -> f64 {
        if self.max_log2 == f64::NEG_INFINITY {
            return 0.0;
        }
        (self.max_log2 - log2_abs(&self.sum)).max(0.0)
    }
}

/// P^m_ℓ(x) for ℓ = m ..= l_max: Ferrers functions for |x| < 1, associated
/// Legendre functions (no Condon-Shortley sign) for x > 1.
pub(crate) fn legendre_ladder(m: u32, l_max: u32, x: &F, bits: usize) -> Vec<F> {
    let one = from_i64(1, bits);
    let inside = abs(x) < one;
    let w = if inside { (&one - x) * (&one + x) } else { (x - &one) * (x + &one) };
    let mut seed = from_i64(1, bits);
    for j in 1..=m {
        seed *= from_i64(2 * j as i64 - 1, bits);
    }
    if m > 0 {
        let root = w.sqrt();
        for _ in 0..m {
            seed *= &root;
        }
    }
    if inside && m % 2 == 1 {
        seed = -seed;
    }
    let mut out = Vec::with_capacity((l_max + 1 - m) as usize);
    out.push(seed);
    if l_max == m {
        return out;
    }
    let second = x * &out[0] * from_i64(2 * m as i64 + 1, bits);
    out.push(second);
    for l in (m + 1)..l_max {
        let i = (l - m) as usize;
        let next = (x * &out[i] * from_i64(2 * l as i64 + 1, bits) - &out[i - 1] * from_i64((l + m) as i64, bits))
            / from_i64((l - m + 1) as i64, bits);
        out.push(next);
    }
    out
}

/// j_ℓ(w) for ℓ = 0 ..= l_max by Miller's backward recurrence, scaled by
/// Σ(2ℓ+1)j_ℓ² = 1 and signed against the closed forms of j₀, j₁.
pub(crate) fn spherical_j(l_max: usize, w: &F, bits: usize) -> Vec<F> {
    let wf = to_f64(w);
    let start = 2 * l_max.max(wf.ceil() as usize) + bits + 30;
    let mut vals = vec![from_i64(0, bits); start + 2];
    vals[start] = from_i64(1, bits);
    let tiny = from_f64(1e-200, bits);
    for l in (1..=start).rev() {
        let next = from_i64(2 * l as i64 + 1, bits) / w * &vals[l] - &vals[l + 1];
        vals[l - 1] = next;
        // keep the magnitudes tame
        if log2_abs(&vals[l - 1]) > 600.0 {
            for v in vals[l - 1..=start].iter_mut() {
                *v = &*v * &tiny;
            }
        }
    }
    let mut norm = from_i64(0, bits);
    for (l, v) in vals.iter().enumerate().take(start + 1) {
        norm += v * v * from_i64(2 * l as i64 + 1, bits);
    }
    let scale = from_i64(1, bits) / norm.sqrt();
    let (s, c) = (w.sin(), w.cos());
    let j0 = &s / w;
    let j1 = &s / w / w - &c / w;
    let reference_sign = if abs(&j0) > abs(&j1) {
        sign_agree(&j0, &vals[0])
    } else {
        sign_agree(&j1, &vals[1])
    };
    let scale = if reference_sign { scale } else { -scale };
    vals.truncate(l_max + 1);
    vals.iter().map(|v| v * &scale).collect()
}

fn sign_agree(a: &F, b: &F) -> bool {
    let zero = F::ZERO;
    (*a >= zero) == (*b >= zero)
}
