use serde::Serialize;

use crate::error::{Error, Result};

/// Default constant inside r₁ = (n/(hb))(1 − C·sqrt(hb·ln n/n)).
pub const R1_CONSTANT: f64 = 6.0;
/// Default multiplier m in the a=1 Breaker bias b = m·d^{1/(d−1)}·n^{1−1/(d−1)}.
pub const BREAKER_MULTIPLIER: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DdParams {
    pub n: f64,
    pub d: usize,
    /// ⌈d/2⌉.
    pub half: usize,
    pub beta: f64,
    pub b: f64,
    pub r1_constant: f64,
    /// r₀ = 1, r₁, …, r_{half−1}.
    pub r: Vec<f64>,
    /// Upper Claim 1 bound r_i ≤ (ln n/ln 2)β^i, for i = 1..half−1.
    pub claim1_upper: Vec<bool>,
    /// Lower Claim 1 bound (1−6β^{−1/2})^i (ln n/ln 2)β^i ≤ r_i.
    pub claim1_lower: Vec<bool>,
    /// 2·half·b·ln n < r_{half−1}·ln 2.
    pub nontrivial_ok: bool,
    /// (1/(2d))(n/ln n)^{1−1/half}.
    pub theorem_bound: f64,
    pub bound_ok: bool,
    /// d ≤ ln n/(3 ln ln n).
    pub d_in_range: bool,
}

impl DdParams {
    pub fn claim1_ok(&self) -> bool {
        self.claim1_upper.iter().chain(&self.claim1_lower).all(|&x| x)
    }

    /// r_i from r₀..r_{i−1} by the recurrence.
    pub fn next_r(&self, prev: &[f64]) -> f64 {
        let ln2 = std::f64::consts::LN_2;
        let last = *prev.last().expect("r₀ is always present");
        self.n * last * ln2 / (self.half as f64 * self.b * self.n.ln() + last * ln2) - prev.iter().sum::<f64>()
    }
}

pub fn dd_params(n: f64, d: usize) -> Result<DdParams> {
    dd_params_with(n, d, R1_CONSTANT)
}

pub fn dd_params_with(n: f64, d: usize, r1_constant: f64) -> Result<DdParams> {
    if d < 3 || n.is_nan() || n < 16.0 {
        return Err(Error::InvalidParameters(format!("need d ≥ 3 and n ≥ 16 (n={n}, d={d})")));
    }
    let ln2 = std::f64::consts::LN_2;
    let ln_n = n.ln();
    let half = d.div_ceil(2);
    let hf = half as f64;
    let beta = (2.0 * n * ln2 / ln_n).powf(1.0 / hf);
    let b = n * ln2 / (hf * ln_n) / beta;
    let mut p = DdParams {
        n,
        d,
        half,
        beta,
        b,
        r1_constant,
        r: vec![1.0],
        claim1_upper: Vec::new(),
        claim1_lower: Vec::new(),
        nontrivial_ok: false,
        theorem_bound: (n / ln_n).powf(1.0 - 1.0 / hf) / (2.0 * d as f64),
        bound_ok: false,
        d_in_range: d as f64 <= ln_n / (3.0 * ln_n.ln()),
    };
    p.bound_ok = b > p.theorem_bound;
    for i in 1..half {
        let ri = if i == 1 { n / (hf * b) * (1.0 - r1_constant * (hf * b * ln_n / n).sqrt()) } else { p.next_r(&p.r) };
        p.r.push(ri);
        let upper = ln_n / ln2 * beta.powi(i as i32);
        let lower = (1.0 - 6.0 / beta.sqrt()).powi(i as i32) * upper;
        p.claim1_upper.push(ri <= upper * (1.0 + 1e-12));
        p.claim1_lower.push(lower <= ri + 1e-12 * upper);
    }
    p.nontrivial_ok = 2.0 * hf * b * ln_n < p.r[half - 1] * ln2;
    Ok(p)
}

/// The (n, d) grid n = 2^10..2^30 (powers of two), d = 3..8.
pub fn claim1_grid() -> Vec<(f64, usize)> {
    (10..=30).flat_map(|k| (3..=8).map(move |d| (2f64.powi(k), d))).collect()
}

/// Breaker a=1 biases: b₁ = d^{1/(d−1)}n^{1−1/(d−1)} and b = multiplier·b₁, both rounded up.
pub fn dd_breaker_biases(n: usize, d: usize, multiplier: f64) -> Result<(usize, usize)> {
    if d < 2 || n < 4 {
        return Err(Error::InvalidParameters(format!("need d ≥ 2 and n ≥ 4 (n={n}, d={d})")));
    }
    let (nf, df) = (n as f64, d as f64);
    let b1 = df.powf(1.0 / (df - 1.0)) * nf.powf(1.0 - 1.0 / (df - 1.0));
    Ok((b1.ceil() as usize, (multiplier * b1).ceil() as usize))
}

/// ⌊n/b₁ + 6·sqrt(n ln n/b₁)⌋, the Maker degree cap the degree-capping half guarantees.
pub fn live_delta_cap(n: usize, b1: usize) -> usize {
    let (nf, bf) = (n as f64, b1 as f64);
    (nf / bf + 6.0 * (nf * nf.ln() / bf).sqrt()).floor() as usize
}

/// a ≥ 2 Breaker bias ⌈4n^{1−1/d}⌉.
pub fn dd_breaker_a2_bias(n: usize, d: usize) -> usize {
    (4.0 * (n as f64).powf(1.0 - 1.0 / d as f64)).ceil() as usize
}
