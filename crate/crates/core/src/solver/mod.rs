//! Exhaustive minimax for small diameter games, plus one-sided verification
//! of scripted strategies.

mod canon;
mod verify;

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use dashmap::DashMap;
use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{edge_count, Player};

pub use canon::{CanonicalKey, Canonizer, MAX_CANON_N};
pub use verify::{
    diameter_judge, verify_diameter, verify_one_sided, FamilyAdapter, KnAdapter, Scripted, SearchBoard, VerifyConfig,
    VerifyResult,
};

/// Vertex adjacency bitsets from an edge mask over the lexicographic edge order.
pub(crate) fn adjacency(n: usize, mask: u64) -> Vec<u64> {
    let mut adj = vec![0u64; n];
    let mut i = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> i & 1 == 1 {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
            i += 1;
        }
    }
    adj
}

/// Every vertex reaches every other within `d` steps.
pub(crate) fn bits_diameter_at_most(adj: &[u64], d: usize) -> bool {
    let n = adj.len();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    (0..n).all(|v| {
        let mut reach = 1u64 << v;
        for _ in 0..d {
            let mut next = reach;
            let mut rest = reach;
            while rest != 0 {
                let w = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                next |= adj[w];
            }
            if next == reach {
                break;
            }
            reach = next;
        }
        reach == full
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SolverConfig {
    /// Largest C(n,2) accepted.
    pub edge_cap: usize,
    pub memo: bool,
    pub canonicalize: bool,
    pub cutoffs: bool,
    pub memo_cap: usize,
    pub parallel: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { edge_cap: 15, memo: true, canonicalize: true, cutoffs: true, memo_cap: 50_000_000, parallel: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub d: usize,
    pub first: Player,
    pub winner: Player,
    pub states_visited: u64,
    /// Seconds.
    pub elapsed: f64,
}

struct Search<'a> {
    n: usize,
    m: usize,
    a: usize,
    b: usize,
    d: usize,
    cfg: &'a SolverConfig,
    canon: Option<Canonizer>,
    memo: DashMap<u64, bool>,
    visited: AtomicU64,
    overflow: AtomicBool,
}

impl Search<'_> {
    fn full(&self) -> u64 {
        if self.m == 64 {
            u64::MAX
        } else {
            (1u64 << self.m) - 1
        }
    }

    /// Winner if already decided.
    fn decided(&self, maker: u64, breaker: u64) -> Option<Player> {
        let free = self.full() & !(maker | breaker);
        if free == 0 || self.cfg.cutoffs {
            if bits_diameter_at_most(&adjacency(self.n, maker), self.d) {
                return Some(Player::Maker);
            }
            if free == 0 {
                return Some(Player::Breaker);
            }
            if !bits_diameter_at_most(&adjacency(self.n, maker | free), self.d) {
                return Some(Player::Breaker);
            }
        }
        None
    }

    fn key(&self, maker: u64, breaker: u64, side: Player) -> u64 {
        match &self.canon {
            Some(c) => c.key(maker, breaker, side).0,
            None => maker | breaker << 28 | (side as u64) << 60,
        }
    }

    fn moves(&self, maker: u64, breaker: u64, side: Player) -> Vec<u64> {
        let free: Vec<usize> = (0..self.m).filter(|&i| (maker | breaker) >> i & 1 == 0).collect();
        let bias = if side == Player::Maker { self.a } else { self.b };
        let k = bias.min(free.len());
        free.into_iter().combinations(k).map(|c| c.into_iter().fold(0u64, |acc, i| acc | 1 << i)).collect()
    }

    /// True iff Maker wins from this turn boundary.
    fn maker_wins(&self, maker: u64, breaker: u64, side: Player, parallel: bool) -> bool {
        self.visited.fetch_add(1, Ordering::Relaxed);
        if let Some(w) = self.decided(maker, breaker) {
            return w == Player::Maker;
        }
        let key = self.cfg.memo.then(|| self.key(maker, breaker, side));
        if let Some(k) = key {
            if let Some(v) = self.memo.get(&k) {
                return *v;
            }
        }
        let moves = self.moves(maker, breaker, side);
        let child = |mv: &u64| match side {
            Player::Maker => self.maker_wins(maker | mv, breaker, Player::Breaker, false),
            Player::Breaker => self.maker_wins(maker, breaker | mv, Player::Maker, false),
        };
        let value = match (side, parallel) {
            (Player::Maker, true) => moves.par_iter().any(child),
            (Player::Maker, false) => moves.iter().any(child),
            (Player::Breaker, true) => moves.par_iter().all(child),
            (Player::Breaker, false) => moves.iter().all(child),
        };
        if let Some(k) = key {
            if self.memo.len() >= self.cfg.memo_cap {
                self.overflow.store(true, Ordering::Relaxed);
            } else {
                self.memo.insert(k, value);
            }
        }
        value
    }
}

pub fn solve(n: usize, a: usize, b: usize, d: usize, first: Player) -> Result<SolveResult> {
    solve_with(n, a, b, d, first, &SolverConfig::default())
}

/// Value of D_d(a:b) on K_n under optimal play.
pub fn solve_with(n: usize, a: usize, b: usize, d: usize, first: Player, cfg: &SolverConfig) -> Result<SolveResult> {
    if n < 2 || a == 0 || b == 0 || d == 0 {
        return Err(Error::InvalidParameters(format!("need n ≥ 2 and a, b, d ≥ 1 (n={n}, a={a}, b={b}, d={d})")));
    }
    let m = edge_count(n);
    if m > cfg.edge_cap || m > 28 {
        return Err(Error::OverCap(format!("C({n},2) = {m} edges exceeds the cap of {}", cfg.edge_cap.min(28))));
    }
    let started = Instant::now();
    let search = Search {
        n,
        m,
        a,
        b,
        d,
        cfg,
        canon: if cfg.canonicalize { Some(Canonizer::new(n)?) } else { None },
        memo: DashMap::new(),
        visited: AtomicU64::new(0),
        overflow: AtomicBool::new(false),
    };
    let maker_wins = search.maker_wins(0, 0, first, cfg.parallel);
    if search.overflow.load(Ordering::Relaxed) {
        return Err(Error::MemoOverflow { cap: cfg.memo_cap });
    }
    Ok(SolveResult {
        n,
        a,
        b,
        d,
        first,
        winner: if maker_wins { Player::Maker } else { Player::Breaker },
        states_visited: search.visited.load(Ordering::Relaxed),
        elapsed: started.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_instances() {
        assert_eq!(solve(2, 1, 1, 2, Player::Maker).unwrap().winner, Player::Maker);
        assert_eq!(solve(2, 3, 2, 2, Player::Maker).unwrap().winner, Player::Maker);
        assert_eq!(solve(3, 1, 1, 2, Player::Maker).unwrap().winner, Player::Maker);
        assert_eq!(solve(4, 1, 1, 2, Player::Maker).unwrap().winner, Player::Breaker);
    }

    #[test]
    fn over_cap_and_bad_args() {
        assert!(matches!(solve(7, 1, 1, 2, Player::Maker), Err(Error::OverCap(_))));
        assert!(matches!(solve(1, 1, 1, 2, Player::Maker), Err(Error::InvalidParameters(_))));
    }

    #[test]
    fn switches_agree() {
        for n in 2..=4 {
            for (a, b) in [(1, 1), (2, 1), (1, 2)] {
                for d in [1, 2, 3] {
                    for first in [Player::Maker, Player::Breaker] {
                        let base = solve(n, a, b, d, first).unwrap().winner;
                        for (memo, canonicalize, cutoffs) in [(false, false, false), (true, false, true), (true, true, false)] {
                            let cfg = SolverConfig { memo, canonicalize, cutoffs, parallel: false, ..SolverConfig::default() };
                            assert_eq!(solve_with(n, a, b, d, first, &cfg).unwrap().winner, base);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn memo_cap_is_reported() {
        let cfg = SolverConfig { memo_cap: 1, cutoffs: false, ..SolverConfig::default() };
        assert!(matches!(solve_with(4, 1, 1, 2, Player::Maker, &cfg), Err(Error::MemoOverflow { cap: 1 })));
    }

    #[test]
    fn bit_diameter() {
        // path 0-1-2-3: edges 01, 12, 23 at indices 0, 3, 5
        let adj = adjacency(4, 1 | 1 << 3 | 1 << 5);
        assert!(bits_diameter_at_most(&adj, 3));
        assert!(!bits_diameter_at_most(&adj, 2));
    }
}
