use serde_json::json;

use crate::degree::{mindeg_params, DegreeWeights};
use crate::error::{Error, Result};
use crate::game::{Edge, GameState, Player};
use crate::graph::{bfs, Dist, Graph};
use crate::play::{Notes, Strategy};

use super::claim2::block_budget;
use super::params::live_delta_cap;

const INF: usize = usize::MAX;

fn maker_dist(game: &GameState, src: usize) -> Vec<usize> {
    bfs(game.n(), src, |x| game.maker_neighbors(x).iter().copied(), usize::MAX).into_iter().map(|d| d.finite().unwrap_or(INF)).collect()
}

/// Which blocking rule applies to Maker's edge and the distances involved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum BlockCase {
    /// x is as close to u as y, and y as close to v as x; i = dist(x,u), j = dist(y,v).
    AsClose { x: usize, y: usize, i: usize, j: usize },
    /// x is strictly closer than y to both; i = dist(x,u), j = dist(x,v).
    Closer { x: usize, y: usize, i: usize, j: usize },
}

/// Classify Maker's edge {p, q} against the pair (u, v). Unreachable
/// vertices have distance `usize::MAX`.
pub fn classify(p: usize, q: usize, du: &[usize], dv: &[usize]) -> BlockCase {
    if du[p] <= du[q] && dv[q] <= dv[p] {
        BlockCase::AsClose { x: p, y: q, i: du[p], j: dv[q] }
    } else if du[q] <= du[p] && dv[p] <= dv[q] {
        BlockCase::AsClose { x: q, y: p, i: du[q], j: dv[p] }
    } else if du[p] < du[q] {
        BlockCase::Closer { x: p, y: q, i: du[p], j: dv[p] }
    } else {
        BlockCase::Closer { x: q, y: p, i: du[q], j: dv[q] }
    }
}

/// Free edges the blocking rule demands after Maker's edge {p, q}, in
/// increasing k with the u-side rule before the v-side rule, deduplicated.
pub fn blocking_demand(game: &GameState, d: usize, u: usize, v: usize, p: usize, q: usize) -> (BlockCase, Vec<Edge>) {
    let du = maker_dist(game, u);
    let dv = maker_dist(game, v);
    let case = classify(p, q, &du, &dv);
    // (centre of N_k, ball distances, top index t): edges E(N_k(centre), B_{t−k}) for k = 0..=t
    let mut rules: Vec<(usize, &[usize], usize)> = Vec::new();
    match case {
        BlockCase::AsClose { x, y, i, j } => {
            if i < d {
                rules.push((x, &dv, d - i - 1));
            }
            if j < d {
                rules.push((y, &du, d - j - 1));
            }
        }
        BlockCase::Closer { y, i, j, .. } => {
            if i.saturating_add(2) <= d {
                rules.push((y, &dv, d - i - 2));
            }
            if j.saturating_add(2) <= d {
                rules.push((y, &du, d - j - 2));
            }
        }
    }
    let centres: Vec<Vec<usize>> = rules.iter().map(|&(c, _, _)| maker_dist(game, c)).collect();
    let n = game.n();
    let mut seen = vec![false; game.num_edges()];
    let mut out = Vec::new();
    let top = rules.iter().map(|r| r.2).max().unwrap_or(0);
    for k in 0..=top {
        for (r, &(_, ball, t)) in rules.iter().enumerate() {
            if k > t {
                continue;
            }
            let radius = t - k;
            for a in (0..n).filter(|&a| centres[r][a] == k) {
                for b in (0..n).filter(|&b| b != a && ball[b] <= radius) {
                    let e = Edge::new(a.min(b), a.max(b));
                    let idx = game.index(e);
                    if !seen[idx] && game.is_free(a, b) {
                        seen[idx] = true;
                        out.push(e);
                    }
                }
            }
        }
    }
    (case, out)
}

/// Free edges whose Maker capture would close a u–v path of length ≤ d.
pub fn threatening_edges(game: &GameState, d: usize, u: usize, v: usize, extra_breaker: &[Edge]) -> Vec<Edge> {
    let du = maker_dist(game, u);
    let dv = maker_dist(game, v);
    let n = game.n();
    let mut out = Vec::new();
    for a in (0..n).filter(|&a| du[a] < d) {
        for b in (0..n).filter(|&b| b != a && dv[b] < d && du[a] + dv[b] < d) {
            let e = Edge::new(a.min(b), a.max(b));
            if game.is_free(a, b) && !extra_breaker.contains(&e) && !out.contains(&e) {
                out.push(e);
            }
        }
    }
    out
}

/// Breaker against a bias-1 Maker in D_d: degree capping with b₁ claims
/// and ball blocking around a fixed pair u, v with the remaining b − b₁.
#[derive(Debug, Clone)]
pub struct DdBreakerA1 {
    d: usize,
    b1: usize,
    b2: usize,
    weights: DegreeWeights,
    pair: Option<(usize, usize)>,
    delta_cap: usize,
    budget: Option<u64>,
}

impl DdBreakerA1 {
    pub fn for_game(n: usize, d: usize, b1: usize, b: usize) -> Result<DdBreakerA1> {
        if d < 2 || b1 == 0 || b1 > b {
            return Err(Error::InvalidParameters(format!("need d ≥ 2 and 1 ≤ b₁ ≤ b (d={d}, b₁={b1}, b={b})")));
        }
        let delta_cap = live_delta_cap(n, b1);
        let budget = (delta_cap >= 3.max(d)).then(|| block_budget(delta_cap as u64, d as u64).map(|bb| bb.budget)).transpose()?;
        Ok(DdBreakerA1 { d, b1, b2: b - b1, weights: DegreeWeights::new(mindeg_params(n, b1, 1)?), pair: None, delta_cap, budget })
    }

    pub fn pair(&self) -> Option<(usize, usize)> {
        self.pair
    }

    pub fn delta_cap(&self) -> usize {
        self.delta_cap
    }

    /// Delfinal budget at the live Δ cap, when the cap is at least max(3, d).
    pub fn budget(&self) -> Option<u64> {
        self.budget
    }

    fn open(&mut self, game: &GameState) -> Result<Edge> {
        let n = game.n();
        let taken = game.last_claim_of(Player::Maker).map(|c| c.edges.clone()).unwrap_or_default();
        let touched = |w: usize| taken.iter().any(|e| e.touches(w));
        let pair = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).find(|&(u, v)| !touched(u) && !touched(v) && game.is_free(u, v));
        let (u, v) = pair.ok_or_else(|| Error::StrategyInapplicable { strategy: "dd-breaker-a1".into(), reason: "no free pair avoids Maker's opening".into() })?;
        self.pair = Some((u, v));
        Ok(Edge::new(u, v))
    }
}

impl Strategy for DdBreakerA1 {
    fn id(&self) -> &str {
        "dd-breaker-a1"
    }

    fn select(&mut self, game: &GameState, notes: &mut Notes) -> Result<Vec<Edge>> {
        if game.a() != 1 {
            return Err(Error::StrategyInapplicable { strategy: "dd-breaker-a1".into(), reason: "Maker bias must be 1".into() });
        }
        let due = game.claims_due();
        let mut out = Vec::with_capacity(due);
        let (u, v) = match self.pair {
            Some(p) => p,
            None => {
                out.push(self.open(game)?);
                let p = self.pair.expect("set by open");
                notes.note("dd.pair", p);
                notes.note("dd.budget", json!({"delta_cap": self.delta_cap, "delfinal": self.budget, "b1": self.b1, "b2": self.b2}));
                p
            }
        };
        let d = self.d;
        let maker_max = game.degrees(Player::Maker).iter().copied().max().unwrap_or(0);
        if maker_max > self.delta_cap {
            notes.flag("dd.delta_cap_exceeded");
        }
        if let Some(last) = game.last_claim_of(Player::Maker).and_then(|c| c.edges.first().copied()).filter(|_| out.is_empty()) {
            let (case, demand) = blocking_demand(game, d, u, v, last.u(), last.v());
            notes.note("dd.block", json!({"case": case, "demand": demand.len()}));
            if let Some(budget) = self.budget {
                if demand.len() as u64 > budget {
                    notes.flag("dd.delfinal_exceeded");
                }
            }
            if demand.len() > self.b2 {
                notes.flag("dd.budget_exceeded");
            }
            out.extend(demand.into_iter().take(self.b2.min(due)));
        }
        if out.len() < due {
            let extra = self.weights.select(game, Player::Breaker, Player::Breaker, due - out.len(), &out);
            out.extend(extra);
        }
        if out.len() < due {
            let extra = game.lowest_unclaimed(due - out.len(), &out);
            out.extend(extra);
        }
        let threats = threatening_edges(game, d, u, v, &out);
        if !threats.is_empty() {
            notes.violation(format!("{} free edges would close a u–v path of length ≤ {d}", threats.len()));
        }
        Ok(out)
    }

    fn state_key(&self) -> Option<u64> {
        Some(self.pair.map_or(0, |(u, v)| 1 + (u as u64) * 1024 + v as u64))
    }
}

/// Breaker against Maker bias a ≥ 2: pure degree capping.
#[derive(Debug, Clone)]
pub struct DdBreakerA2 {
    weights: DegreeWeights,
    in_regime: bool,
    announced: bool,
}

impl DdBreakerA2 {
    pub fn for_game(n: usize, a: usize, b: usize) -> Result<DdBreakerA2> {
        let nf = n as f64;
        Ok(DdBreakerA2 { weights: DegreeWeights::new(mindeg_params(n, b, a)?), in_regime: b as f64 <= nf / (4.0 * nf.ln()), announced: false })
    }
}

pub fn dd_breaker_a2_select(game: &GameState, weights: &DegreeWeights) -> Vec<Edge> {
    weights.select(game, Player::Breaker, Player::Breaker, game.claims_due(), &[])
}

impl Strategy for DdBreakerA2 {
    fn id(&self) -> &str {
        "dd-breaker-a2"
    }

    fn select(&mut self, game: &GameState, notes: &mut Notes) -> Result<Vec<Edge>> {
        if !self.announced {
            self.announced = true;
            if !self.in_regime {
                notes.flag("dd.a2_bias_outside_regime");
            }
        }
        Ok(dd_breaker_a2_select(game, &self.weights))
    }
}

/// |B_d(v)| < 2Δ^d for every v, where Δ is the maximum degree; vacuous for Δ < 4.
pub fn ball_bound_holds(g: &Graph, d: usize) -> bool {
    let delta = (0..g.n()).map(|v| g.neighbors(v).len()).max().unwrap_or(0);
    if delta < 4 {
        return true;
    }
    let cap = 2.0 * (delta as f64).powi(d as i32);
    (0..g.n()).all(|v| {
        let reach = bfs(g.n(), v, |x| g.neighbors(x).iter().copied(), d);
        (reach.iter().filter(|x| matches!(x, Dist::Finite(_))).count() as f64) < cap
    })
}
