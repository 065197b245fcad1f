use std::ops::RangeInclusive;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};

/// kΔ^{k+1} − (k+1)Δ^k + 1, non-negative for Δ ≥ 1.
fn bracket(delta: u64, k: u64) -> BigUint {
    let p = BigUint::from(delta).pow(k as u32);
    &p * delta * k + 1u32 - p * (k + 1)
}

fn check_delta(delta: u64) -> Result<()> {
    if delta < 2 {
        return Err(Error::InvalidParameters(format!("Δ must be at least 2, got {delta}")));
    }
    Ok(())
}

/// f(k) = [(m−k)Δ^{m−k+1} − (m−k+1)Δ^{m−k} + 1] + [kΔ^{k+1} − (k+1)Δ^k + 1].
pub fn claim2_f(delta: u64, m: u64, k: u64) -> Result<BigUint> {
    check_delta(delta)?;
    if m < 2 || k == 0 || k >= m {
        return Err(Error::InvalidParameters(format!("need m ≥ 2 and 1 ≤ k ≤ m−1 (m={m}, k={k})")));
    }
    Ok(bracket(delta, m - k) + bracket(delta, k))
}

/// (m−1)Δ^m − mΔ^{m−1} + 1 + (Δ−1)².
pub fn claim2_bound(delta: u64, m: u64) -> Result<BigUint> {
    check_delta(delta)?;
    Ok(bracket(delta, m - 1) + BigUint::from(delta - 1).pow(2))
}

/// f(k) ≤ bound for every Δ, m in range and every k.
pub fn claim2_check(deltas: RangeInclusive<u64>, ms: RangeInclusive<u64>) -> Result<bool> {
    for delta in deltas {
        for m in ms.clone() {
            let bound = claim2_bound(delta, m)?;
            for k in 1..m {
                if claim2_f(delta, m, k)? > bound {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Per-turn blocking budget ⌊[(d−1)Δ^d − dΔ^{d−1} + 1 + (Δ−1)²]/(Δ−1)²⌋.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockBudget {
    pub delta: u64,
    pub d: u64,
    pub budget: u64,
}

pub fn block_budget(delta: u64, d: u64) -> Result<BlockBudget> {
    check_delta(delta)?;
    let v = claim2_bound(delta, d)? / BigUint::from(delta - 1).pow(2);
    Ok(BlockBudget { delta, d, budget: u64::try_from(v).unwrap_or(u64::MAX) })
}

/// Σ_{k=0}^{t−1} Δ^k Σ_{ℓ=0}^{t−1−k} Δ^ℓ: edges E(N_k(x), B_{t−1−k}) when every
/// Maker degree is at most Δ.
pub fn blocking_sum(delta: u64, t: u64) -> BigUint {
    let mut total = BigUint::from(0u32);
    let d = BigUint::from(delta);
    for k in 0..t {
        for l in 0..t - k {
            total += d.pow((k + l) as u32);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(claim2_f(2, 4, 1).unwrap(), BigUint::from(18u32));
        assert_eq!(claim2_f(2, 4, 2).unwrap(), BigUint::from(10u32));
        assert_eq!(claim2_bound(2, 4).unwrap(), BigUint::from(18u32));
        assert!(claim2_f(1, 4, 1).is_err());
        assert!(claim2_f(2, 4, 4).is_err());
        assert_eq!(block_budget(3, 3).unwrap().budget, 8);
    }

    #[test]
    fn symmetric() {
        for delta in 2..8 {
            for m in 2..15 {
                for k in 1..m {
                    assert_eq!(claim2_f(delta, m, k).unwrap(), claim2_f(delta, m, m - k).unwrap());
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_sum() {
        // (Δ−1)²·Σ = tΔ^{t+1} − (t+1)Δ^t + 1
        for delta in 2..9u64 {
            for t in 1..9 {
                assert_eq!(blocking_sum(delta, t) * BigUint::from(delta - 1).pow(2), bracket(delta, t));
            }
        }
    }

    #[test]
    fn exhaustive_range() {
        assert!(claim2_check(2..=10, 2..=20).unwrap());
    }
}
