//! The board: ownership of the edges of K_n under an (a:b) turn schedule.
//!
//! Edges are numbered in lexicographic `(u, v)` order. That numbering is the
//! tie-break of last resort for every strategy in the crate.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    Maker,
    Breaker,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Maker => Player::Breaker,
            Player::Breaker => Player::Maker,
        }
    }

    pub(crate) fn slot(self) -> usize {
        match self {
            Player::Maker => 0,
            Player::Breaker => 1,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Maker => f.write_str("Maker"),
            Player::Breaker => f.write_str("Breaker"),
        }
    }
}

impl std::str::FromStr for Player {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "maker" => Ok(Player::Maker),
            "breaker" => Ok(Player::Breaker),
            other => Err(Error::Parse(format!("unknown player {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Owner {
    #[default]
    Unclaimed,
    Maker,
    Breaker,
}

impl From<Player> for Owner {
    fn from(p: Player) -> Self {
        match p {
            Player::Maker => Owner::Maker,
            Player::Breaker => Owner::Breaker,
        }
    }
}

/// An undirected edge stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[usize; 2]", try_from = "[usize; 2]")]
pub struct Edge {
    u: usize,
    v: usize,
}

impl Edge {
    /// Builds the canonical form of `{x, y}`. Panics on a self-loop.
    pub fn new(x: usize, y: usize) -> Edge {
        assert_ne!(x, y, "self-loop {x}-{x}");
        if x < y {
            Edge { u: x, v: y }
        } else {
            Edge { u: y, v: x }
        }
    }

    pub fn try_new(x: usize, y: usize) -> Result<Edge> {
        if x == y {
            return Err(Error::InvalidParameters(format!("self-loop at vertex {x}")));
        }
        Ok(Edge::new(x, y))
    }

    pub fn u(self) -> usize {
        self.u
    }

    pub fn v(self) -> usize {
        self.v
    }

    pub fn touches(self, w: usize) -> bool {
        self.u == w || self.v == w
    }

    /// The endpoint that is not `w`, if `w` is an endpoint.
    pub fn other(self, w: usize) -> Option<usize> {
        if self.u == w {
            Some(self.v)
        } else if self.v == w {
            Some(self.u)
        } else {
            None
        }
    }
}

impl From<Edge> for [usize; 2] {
    fn from(e: Edge) -> Self {
        [e.u, e.v]
    }
}

impl TryFrom<[usize; 2]> for Edge {
    type Error = Error;

    fn try_from(p: [usize; 2]) -> Result<Self> {
        Edge::try_new(p[0], p[1])
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

/// Number of edges of K_n.
pub fn edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Lexicographic index of `(u, v)` with `u < v < n`.
#[inline]
pub fn edge_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v < n);
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

/// All edges of K_n in index order.
pub fn all_edges(n: usize) -> Vec<Edge> {
    let mut out = Vec::with_capacity(edge_count(n));
    for u in 0..n {
        for v in u + 1..n {
            out.push(Edge { u, v });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub player: Player,
    pub edges: Vec<Edge>,
}

/// Live state of an (a:b) game on the edges of K_n.
#[derive(Debug, Clone)]
pub struct GameState {
    n: usize,
    a: usize,
    b: usize,
    first: Player,
    edges: Arc<[Edge]>,
    owner: Vec<Owner>,
    to_move: Player,
    turns: [usize; 2],
    claimed: [usize; 2],
    degree: [Vec<usize>; 2],
    maker_adj: Vec<Vec<usize>>,
    free: Vec<usize>,
    free_pos: Vec<usize>,
    lowest_free: usize,
    log: Vec<Claim>,
}

const NOT_FREE: usize = usize::MAX;

impl GameState {
    pub fn new(n: usize, a: usize, b: usize, first: Player) -> Result<GameState> {
        if n < 2 {
            return Err(Error::InvalidParameters(format!("need n >= 2, got {n}")));
        }
        if a < 1 || b < 1 {
            return Err(Error::InvalidParameters(format!("biases must be >= 1, got ({a}:{b})")));
        }
        let m = edge_count(n);
        Ok(GameState {
            n,
            a,
            b,
            first,
            edges: all_edges(n).into(),
            owner: vec![Owner::Unclaimed; m],
            to_move: first,
            turns: [0, 0],
            claimed: [0, 0],
            degree: [vec![0; n], vec![0; n]],
            maker_adj: vec![Vec::new(); n],
            free: (0..m).collect(),
            free_pos: (0..m).collect(),
            lowest_free: 0,
            log: Vec::new(),
        })
    }

    /// Rebuilds a state by replaying `log` from the empty board.
    pub fn replay(n: usize, a: usize, b: usize, first: Player, log: &[Claim]) -> Result<GameState> {
        let mut state = GameState::new(n, a, b, first)?;
        for claim in log {
            state.apply_claim(claim.player, &claim.edges)?;
        }
        Ok(state)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn first(&self) -> Player {
        self.first
    }

    pub fn bias(&self, p: Player) -> usize {
        match p {
            Player::Maker => self.a,
            Player::Breaker => self.b,
        }
    }

    pub fn to_move(&self) -> Player {
        self.to_move
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, idx: usize) -> Edge {
        self.edges[idx]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn index(&self, e: Edge) -> usize {
        edge_index(self.n, e.u, e.v)
    }

    pub fn owner(&self, idx: usize) -> Owner {
        self.owner[idx]
    }

    pub fn owner_of(&self, x: usize, y: usize) -> Owner {
        let e = Edge::new(x, y);
        self.owner[self.index(e)]
    }

    pub fn is_free(&self, x: usize, y: usize) -> bool {
        self.owner_of(x, y) == Owner::Unclaimed
    }

    pub fn ownership(&self) -> &[Owner] {
        &self.owner
    }

    pub fn degree(&self, p: Player, v: usize) -> usize {
        self.degree[p.slot()][v]
    }

    pub fn degrees(&self, p: Player) -> &[usize] {
        &self.degree[p.slot()]
    }

    pub fn maker_neighbors(&self, v: usize) -> &[usize] {
        &self.maker_adj[v]
    }

    pub fn turns_taken(&self, p: Player) -> usize {
        self.turns[p.slot()]
    }

    pub fn claimed_by(&self, p: Player) -> usize {
        self.claimed[p.slot()]
    }

    pub fn unclaimed_count(&self) -> usize {
        self.free.len()
    }

    pub fn is_exhausted(&self) -> bool {
        self.free.is_empty()
    }

    /// Indices of unclaimed edges, in no particular order.
    pub fn free_indices(&self) -> &[usize] {
        &self.free
    }

    pub fn first_unclaimed(&self) -> Option<usize> {
        (self.lowest_free..self.owner.len()).find(|&i| self.owner[i] == Owner::Unclaimed)
    }

    /// Lowest-index unclaimed edges, skipping those in `exclude`.
    pub fn lowest_unclaimed(&self, count: usize, exclude: &[Edge]) -> Vec<Edge> {
        let mut out = Vec::with_capacity(count);
        for i in self.lowest_free..self.owner.len() {
            if out.len() == count {
                break;
            }
            let e = self.edges[i];
            if self.owner[i] == Owner::Unclaimed && !exclude.contains(&e) {
                out.push(e);
            }
        }
        out
    }

    /// Number of claims the side to move must make this turn.
    pub fn claims_due(&self) -> usize {
        self.bias(self.to_move).min(self.free.len())
    }

    pub fn log(&self) -> &[Claim] {
        &self.log
    }

    /// The most recent claim made by `p`, if any.
    pub fn last_claim_of(&self, p: Player) -> Option<&Claim> {
        self.log.iter().rev().find(|c| c.player == p)
    }

    pub fn apply_claim(&mut self, player: Player, edges: &[Edge]) -> Result<()> {
        if player != self.to_move {
            return Err(Error::WrongTurn { expected: self.to_move, got: player });
        }
        if self.free.is_empty() {
            return Err(Error::BoardExhausted);
        }
        let due = self.claims_due();
        if edges.len() != due {
            return Err(Error::WrongClaimCount { expected: due, got: edges.len() });
        }
        for (i, e) in edges.iter().enumerate() {
            if e.v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: e.v, n: self.n });
            }
            if self.owner[self.index(*e)] != Owner::Unclaimed {
                return Err(Error::AlreadyClaimed(*e));
            }
            if edges[..i].contains(e) {
                return Err(Error::DuplicateInClaim(*e));
            }
        }
        let slot = player.slot();
        for &e in edges {
            let idx = self.index(e);
            self.owner[idx] = player.into();
            self.degree[slot][e.u] += 1;
            self.degree[slot][e.v] += 1;
            if player == Player::Maker {
                self.maker_adj[e.u].push(e.v);
                self.maker_adj[e.v].push(e.u);
            }
            let pos = self.free_pos[idx];
            let last = *self.free.last().expect("free list non-empty");
            self.free.swap_remove(pos);
            if last != idx {
                self.free_pos[last] = pos;
            }
            self.free_pos[idx] = NOT_FREE;
        }
        while self.lowest_free < self.owner.len() && self.owner[self.lowest_free] != Owner::Unclaimed {
            self.lowest_free += 1;
        }
        self.claimed[slot] += edges.len();
        self.turns[slot] += 1;
        self.log.push(Claim { player, edges: edges.to_vec() });
        self.to_move = player.opponent();
        // full O(m) audit only on small boards; disjointness is enforced above
        debug_assert!(self.owner.len() > 4096 || self.check_invariants().is_ok());
        Ok(())
    }

    /// Graph of Maker's edges.
    pub fn maker_graph(&self) -> Graph {
        self.graph_of(Owner::Maker)
    }

    pub fn breaker_graph(&self) -> Graph {
        self.graph_of(Owner::Breaker)
    }

    /// Maker's edges plus every unclaimed edge: the most Maker can still end up with.
    pub fn maker_potential_graph(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for (i, &o) in self.owner.iter().enumerate() {
            if o != Owner::Breaker {
                g.insert(self.edges[i]);
            }
        }
        g
    }

    fn graph_of(&self, who: Owner) -> Graph {
        let mut g = Graph::empty(self.n);
        for (i, &o) in self.owner.iter().enumerate() {
            if o == who {
                g.insert(self.edges[i]);
            }
        }
        g
    }

    /// Structural self-check: disjointness, bias accounting and degree caches.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut count = [0usize; 2];
        let mut deg = [vec![0usize; self.n], vec![0usize; self.n]];
        for (i, &o) in self.owner.iter().enumerate() {
            let slot = match o {
                Owner::Unclaimed => continue,
                Owner::Maker => 0,
                Owner::Breaker => 1,
            };
            count[slot] += 1;
            deg[slot][self.edges[i].u] += 1;
            deg[slot][self.edges[i].v] += 1;
        }
        if count != self.claimed {
            return Err(format!("claim counters {:?} disagree with board {:?}", self.claimed, count));
        }
        if deg != self.degree {
            return Err("degree cache out of sync".into());
        }
        for p in [Player::Maker, Player::Breaker] {
            let s = p.slot();
            let cap = self.bias(p) * self.turns[s];
            if count[s] > cap {
                return Err(format!("{p} owns {} edges after {} turns", count[s], self.turns[s]));
            }
            // only the final turn may fall short
            let full_turns = self.turns[s].saturating_sub(1);
            if count[s] < self.bias(p) * full_turns {
                return Err(format!("{p} made a short claim before the end of the board"));
            }
        }
        if count[0] + count[1] + self.free.len() != self.owner.len() {
            return Err("free list out of sync".into());
        }
        Ok(())
    }
}
