//! Simple opponents used as adversaries in simulations. They work for either side.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::game::{Edge, GameState, Player};
use crate::graph::Dist;
use crate::play::{Notes, Strategy};

/// Uniformly random distinct free edges.
#[derive(Debug, Clone)]
pub struct RandomPlayer {
    rng: ChaCha8Rng,
}

impl RandomPlayer {
    pub fn new(seed: u64) -> RandomPlayer {
        RandomPlayer { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Strategy for RandomPlayer {
    fn id(&self) -> &str {
        "random"
    }

    fn select(&mut self, game: &GameState, _: &mut Notes) -> Result<Vec<Edge>> {
        let free = game.free_indices();
        let due = game.claims_due();
        let mut picks: Vec<usize> = sample(&mut self.rng, free.len(), due).into_iter().map(|i| free[i]).collect();
        picks.sort_unstable();
        Ok(picks.into_iter().map(|i| game.edge(i)).collect())
    }
}

/// Always the lexicographically smallest free edges.
#[derive(Debug, Clone, Default)]
pub struct LowestEdge;

impl LowestEdge {
    pub fn new() -> LowestEdge {
        LowestEdge
    }
}

impl Strategy for LowestEdge {
    fn id(&self) -> &str {
        "lowest"
    }

    fn select(&mut self, game: &GameState, _: &mut Notes) -> Result<Vec<Edge>> {
        Ok(game.lowest_unclaimed(game.claims_due(), &[]))
    }

    fn state_key(&self) -> Option<u64> {
        Some(0)
    }
}

fn pending_adj(game: &GameState, me: Player, picked: &[Edge]) -> Vec<Vec<usize>> {
    let n = game.n();
    let mut adj = vec![Vec::new(); n];
    for (i, e) in game.edges().iter().enumerate() {
        if game.owner(i) == me.into() {
            adj[e.u()].push(e.v());
            adj[e.v()].push(e.u());
        }
    }
    for e in picked {
        adj[e.u()].push(e.v());
        adj[e.v()].push(e.u());
    }
    adj
}

fn is_picked(picked: &[Edge], e: Edge) -> bool {
    picked.contains(&e)
}

/// Raises the smallest own degree: joins the poorest vertex to the poorest
/// available partner.
#[derive(Debug, Clone, Default)]
pub struct DegreeGreedy;

impl DegreeGreedy {
    pub fn new() -> DegreeGreedy {
        DegreeGreedy
    }
}

impl Strategy for DegreeGreedy {
    fn id(&self) -> &str {
        "degree-greedy"
    }

    fn select(&mut self, game: &GameState, _: &mut Notes) -> Result<Vec<Edge>> {
        let me = game.to_move();
        let n = game.n();
        let mut deg = game.degrees(me).to_vec();
        let mut picked = Vec::new();
        for _ in 0..game.claims_due() {
            let mut best: Option<(usize, usize, Edge)> = None;
            for &i in game.free_indices() {
                let e = game.edge(i);
                if is_picked(&picked, e) {
                    continue;
                }
                let (lo, hi) = if deg[e.u()] <= deg[e.v()] { (deg[e.u()], deg[e.v()]) } else { (deg[e.v()], deg[e.u()]) };
                let better = match best {
                    None => true,
                    Some((bl, bh, be)) => (lo, hi, e) < (bl, bh, be),
                };
                if better {
                    best = Some((lo, hi, e));
                }
            }
            let Some((_, _, e)) = best else { break };
            deg[e.u()] += 1;
            deg[e.v()] += 1;
            picked.push(e);
        }
        debug_assert!(picked.iter().all(|e| e.v() < n));
        picked.sort_unstable();
        Ok(picked)
    }

    fn state_key(&self) -> Option<u64> {
        Some(0)
    }
}

/// Maximizes the number of vertex pairs newly brought within distance two
/// in its own graph.
#[derive(Debug, Clone, Default)]
pub struct TwoPathGreedy;

impl TwoPathGreedy {
    pub fn new() -> TwoPathGreedy {
        TwoPathGreedy
    }
}

impl Strategy for TwoPathGreedy {
    fn id(&self) -> &str {
        "two-path-greedy"
    }

    fn select(&mut self, game: &GameState, _: &mut Notes) -> Result<Vec<Edge>> {
        let me = game.to_move();
        let n = game.n();
        let mut picked = Vec::new();
        for _ in 0..game.claims_due() {
            let adj = pending_adj(game, me, &picked);
            let mut covered = vec![false; n * n];
            for w in 0..n {
                covered[w * n + w] = true;
                for &x in &adj[w] {
                    covered[w * n + x] = true;
                    for &y in &adj[w] {
                        covered[x * n + y] = true;
                    }
                }
            }
            let mut best: Option<(usize, Edge)> = None;
            for &i in game.free_indices() {
                let e = game.edge(i);
                if is_picked(&picked, e) {
                    continue;
                }
                let (u, v) = (e.u(), e.v());
                let mut gain = usize::from(!covered[u * n + v]);
                gain += adj[v].iter().filter(|&&x| !covered[u * n + x]).count();
                gain += adj[u].iter().filter(|&&x| !covered[v * n + x]).count();
                if best.is_none_or(|(g, be)| gain > g || (gain == g && e < be)) {
                    best = Some((gain, e));
                }
            }
            let Some((_, e)) = best else { break };
            picked.push(e);
        }
        picked.sort_unstable();
        Ok(picked)
    }

    fn state_key(&self) -> Option<u64> {
        Some(0)
    }
}

/// Tries to build a short own path between the endpoints of the opponent's
/// first edge (or between 0 and n−1 before the opponent has moved).
#[derive(Debug, Clone, Default)]
pub struct GreedyPath;

impl GreedyPath {
    pub fn new() -> GreedyPath {
        GreedyPath
    }
}

impl Strategy for GreedyPath {
    fn id(&self) -> &str {
        "greedy-path"
    }

    fn select(&mut self, game: &GameState, _: &mut Notes) -> Result<Vec<Edge>> {
        let me = game.to_move();
        let n = game.n();
        let (p, q) = game
            .log()
            .iter()
            .find(|c| c.player == me.opponent() && !c.edges.is_empty())
            .map(|c| (c.edges[0].u(), c.edges[0].v()))
            .unwrap_or((0, n - 1));
        let mut picked = Vec::new();
        for _ in 0..game.claims_due() {
            let adj = pending_adj(game, me, &picked);
            let dp = crate::graph::bfs(n, p, |v: usize| adj[v].iter().copied(), usize::MAX);
            let dq = crate::graph::bfs(n, q, |v: usize| adj[v].iter().copied(), usize::MAX);
            let cost = |d: Dist| d.finite().unwrap_or(n);
            let mut best: Option<(usize, Edge)> = None;
            for &i in game.free_indices() {
                let e = game.edge(i);
                if is_picked(&picked, e) {
                    continue;
                }
                let (x, y) = (e.u(), e.v());
                let s = (cost(dp[x]) + cost(dq[y])).min(cost(dp[y]) + cost(dq[x]));
                if best.is_none_or(|(c, be)| s < c || (s == c && e < be)) {
                    best = Some((s, e));
                }
            }
            let Some((_, e)) = best else { break };
            picked.push(e);
        }
        picked.sort_unstable();
        Ok(picked)
    }

    fn state_key(&self) -> Option<u64> {
        Some(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn play_one(s: &mut dyn Strategy, g: &GameState) -> Vec<Edge> {
        s.select(g, &mut Notes::quiet()).unwrap()
    }

    #[test]
    fn every_heuristic_claims_legally() {
        let mut strategies: Vec<Box<dyn Strategy>> = vec![
            Box::new(RandomPlayer::new(1)),
            Box::new(LowestEdge),
            Box::new(DegreeGreedy),
            Box::new(TwoPathGreedy),
            Box::new(GreedyPath),
        ];
        for s in strategies.iter_mut() {
            let mut g = GameState::new(7, 2, 3, Player::Maker).unwrap();
            while !g.is_exhausted() {
                let p = g.to_move();
                let claim = play_one(s.as_mut(), &g);
                g.apply_claim(p, &claim).unwrap();
            }
        }
    }

    #[test]
    fn degree_greedy_avoids_rich_vertices() {
        let mut g = GameState::new(5, 1, 1, Player::Maker).unwrap();
        g.apply_claim(Player::Maker, &[Edge::new(0, 1)]).unwrap();
        g.apply_claim(Player::Breaker, &[Edge::new(3, 4)]).unwrap();
        assert_eq!(play_one(&mut DegreeGreedy, &g), vec![Edge::new(2, 3)]);
    }

    #[test]
    fn two_path_greedy_extends_a_star() {
        let mut g = GameState::new(5, 1, 1, Player::Maker).unwrap();
        g.apply_claim(Player::Maker, &[Edge::new(0, 1)]).unwrap();
        g.apply_claim(Player::Breaker, &[Edge::new(3, 4)]).unwrap();
        // (0,2) brings 2 within reach of both 0 and 1
        assert_eq!(play_one(&mut TwoPathGreedy, &g), vec![Edge::new(0, 2)]);
    }
}
