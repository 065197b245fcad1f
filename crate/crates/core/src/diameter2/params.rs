use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::harmonic;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct D2BreakerParams {
    pub n: usize,
    pub epsilon: f64,
    pub b: usize,
    pub r_prime_max: usize,
    /// Worst case t = 2r′+2.
    pub t_worst: usize,
    /// ((b−1)/2)·ln(n−t−1−r′) at the worst case.
    pub box_rhs: f64,
    pub box_condition_holds: bool,
}

/// b = ⌈(2+ε)·sqrt(n/ln n)⌉ and r′ ≤ ⌈(n−1)/b⌉.
pub fn d2_breaker_params(n: usize, epsilon: f64) -> Result<D2BreakerParams> {
    if n < 8 || epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidParameters(format!("need n ≥ 8 and ε > 0 (n={n}, ε={epsilon})")));
    }
    let nf = n as f64;
    let b = ((2.0 + epsilon) * (nf / nf.ln()).sqrt()).ceil() as usize;
    let r_prime_max = (n - 1).div_ceil(b);
    let t_worst = 2 * r_prime_max + 2;
    let rest = nf - t_worst as f64 - 1.0 - r_prime_max as f64;
    let box_rhs = if rest > 1.0 { (b as f64 - 1.0) / 2.0 * rest.ln() } else { f64::NEG_INFINITY };
    Ok(D2BreakerParams { n, epsilon, b, r_prime_max, t_worst, box_rhs, box_condition_holds: t_worst as f64 <= box_rhs })
}

/// Exact Phase II box condition t ≤ ((b−1)/2)·H_{k−1} for k boxes.
pub fn d2_box_condition(t: usize, k: usize, b: usize) -> bool {
    k >= 1 && t as f64 <= (b as f64 - 1.0) / 2.0 * harmonic(k - 1) * (1.0 + 1e-12)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct D2Conditions {
    pub cond1: bool,
    pub cond2: bool,
    pub cond3c: bool,
    pub cond3a: bool,
    pub cond3b: bool,
    pub cond4a: bool,
    pub cond4b: bool,
    pub cond5: bool,
}

impl D2Conditions {
    pub fn all(&self) -> bool {
        self.cond1 && self.cond2 && self.cond3c && self.cond3a && self.cond3b && self.cond4a && self.cond4b && self.cond5
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct D2MakerParams {
    pub n: f64,
    pub b: f64,
    pub c: f64,
    pub r: f64,
    pub s: f64,
    pub ell_max: f64,
    pub lambda4: f64,
    pub conds: D2Conditions,
}

/// λ = 1/(16bℓ) − (4b+1)/(16bℓ)².
pub fn game4_lambda(b: f64, ell: f64) -> f64 {
    let q = 16.0 * b * ell;
    1.0 / q - (4.0 * b + 1.0) / (q * q)
}

/// b = n^{1/8}/(9(ln n)^{3/8}).
pub fn d2_maker_bias(n: f64) -> f64 {
    n.powf(0.125) / (9.0 * n.ln().powf(0.375))
}

impl D2MakerParams {
    /// All parameters and conditions at a given Breaker bias.
    pub fn evaluate(n: f64, b: f64) -> D2MakerParams {
        let ln_n = n.ln();
        let c = 0.125;
        let r = (n * ln_n / 2.0).sqrt();
        let s = n.powf(0.75) / ln_n;
        let ell_max = (32.0 * r * b * b).ceil();
        let lambda4 = game4_lambda(b, ell_max);
        // C(n,2)/(2nr) = (n−1)/(4r)
        let virtual_b = (n - 1.0) / (4.0 * r) - 2.0;
        let conds = D2Conditions {
            cond1: c >= 36.0 * b.powf(1.5) * (ln_n / n).sqrt(),
            cond2: n >= 4.0 * b * r,
            cond3c: virtual_b >= 4.0 * b,
            cond3a: s >= r && r >= 3.0,
            cond3b: ln_n < 2.0 * r * r * 3f64.ln() / n,
            cond4a: 4.0 * b < c * n / b,
            cond4b: (32.0 * r * b * b).ln() - 3.0 * n / (32768.0 * r * b.powi(4)) + 3.0 / 64.0 < 0.0,
            cond5: (n * s / 2.0).ln() - n / (32.0 * b * b * s) * std::f64::consts::LN_2 < 0.0,
        };
        D2MakerParams { n, b, c, r, s, ell_max, lambda4, conds }
    }
}

/// Parameters at the theorem's bias b(n).
pub fn d2_maker_params(n: f64) -> Result<D2MakerParams> {
    if n.is_nan() || n < 16.0 {
        return Err(Error::InvalidParameters(format!("need n ≥ 16, got {n}")));
    }
    Ok(D2MakerParams::evaluate(n, d2_maker_bias(n)))
}

/// Smallest 10^k, 1 ≤ k ≤ 40, at which every condition holds.
pub fn d2_maker_threshold() -> Option<f64> {
    (2..=40).map(|k| 10f64.powi(k)).find(|&n| d2_maker_params(n).map(|p| p.conds.all()).unwrap_or(false))
}
