use serde_json::json;

use crate::degree::{mindeg_params, DegreeWeights, MinDegMaker};
use crate::error::{Error, Result};
use crate::expansion::ExpMaker;
use crate::game::{edge_count, Edge, GameState, Owner, Player};
use crate::play::{Notes, Strategy};

use super::params::{game4_lambda, D2MakerParams};

/// Largest expansion family Game 3 will build.
pub const GAME3_CAP: u64 = 200_000;

/// Degree-game Maker aiming at minimum degree ⌈(n−1)/2⌉, which forces
/// diameter two. Meant for b < a.
#[derive(Debug, Clone)]
pub struct D2SimpleMaker {
    inner: MinDegMaker,
    target: usize,
    in_regime: bool,
    announced: bool,
}

impl D2SimpleMaker {
    pub fn for_game(n: usize, a: usize, b: usize) -> Result<D2SimpleMaker> {
        let inner = MinDegMaker::new(mindeg_params(n, a, b)?).with_label("d2-simple");
        let nf = n as f64;
        let in_regime = b < a && (a as f64) <= (nf / (72.0 * nf.ln())).cbrt();
        Ok(D2SimpleMaker { inner, target: n / 2, in_regime, announced: false })
    }

    /// ⌈(n−1)/2⌉.
    pub fn target_degree(&self) -> usize {
        self.target
    }
}

impl Strategy for D2SimpleMaker {
    fn id(&self) -> &str {
        self.inner.id()
    }

    fn select(&mut self, game: &GameState, notes: &mut Notes) -> Result<Vec<Edge>> {
        if !self.announced {
            self.announced = true;
            notes.note("d2simple.target", self.target);
            if !self.in_regime {
                notes.flag("d2simple.outside_regime");
            }
        }
        self.inner.select(game, notes)
    }
}

/// Row-per-vertex bitsets for Maker adjacency and for "not Breaker-owned".
struct Board {
    n: usize,
    words: usize,
    maker: Vec<u64>,
    open: Vec<u64>,
}

impl Board {
    fn new(game: &GameState) -> Board {
        let n = game.n();
        let words = n.div_ceil(64);
        let mut b = Board { n, words, maker: vec![0; n * words], open: vec![0; n * words] };
        for (i, e) in game.edges().iter().enumerate() {
            match game.owner(i) {
                Owner::Maker => {
                    b.set(true, e.u(), e.v());
                    b.set(false, e.u(), e.v());
                }
                Owner::Unclaimed => b.set(false, e.u(), e.v()),
                Owner::Breaker => {}
            }
        }
        b
    }

    fn set(&mut self, maker: bool, x: usize, y: usize) {
        let rows = if maker { &mut self.maker } else { &mut self.open };
        rows[x * self.words + y / 64] |= 1 << (y % 64);
        rows[y * self.words + x / 64] |= 1 << (x % 64);
    }

    fn claim(&mut self, e: Edge) {
        self.set(true, e.u(), e.v());
    }

    fn row<'a>(&self, rows: &'a [u64], v: usize) -> &'a [u64] {
        &rows[v * self.words..(v + 1) * self.words]
    }

    fn adjacent(&self, x: usize, y: usize) -> bool {
        self.maker[x * self.words + y / 64] >> (y % 64) & 1 == 1
    }

    fn is_open(&self, x: usize, y: usize) -> bool {
        self.open[x * self.words + y / 64] >> (y % 64) & 1 == 1
    }

    /// Maker distance at most two.
    fn connected(&self, x: usize, y: usize) -> bool {
        self.adjacent(x, y) || self.row(&self.maker, x).iter().zip(self.row(&self.maker, y)).any(|(p, q)| p & q != 0)
    }

    /// Y: 2-paths x–w–y with neither edge Breaker-owned.
    fn open_paths(&self, x: usize, y: usize) -> u32 {
        self.row(&self.open, x).iter().zip(self.row(&self.open, y)).map(|(p, q)| (p & q).count_ones()).sum()
    }

    /// Cheapest way to bring x and y within distance two: the direct edge
    /// if free, else the open 2-path with the fewest free edges, lowest
    /// middle vertex first.
    fn route(&self, x: usize, y: usize) -> Option<Vec<Edge>> {
        let free = |p: usize, q: usize| self.is_open(p, q) && !self.adjacent(p, q);
        if free(x, y) {
            return Some(vec![Edge::new(x.min(y), x.max(y))]);
        }
        let mut best: Option<(usize, usize)> = None;
        for w in 0..self.n {
            if w == x || w == y || !self.is_open(x, w) || !self.is_open(w, y) {
                continue;
            }
            let need = free(x, w) as usize + free(w, y) as usize;
            if best.is_none_or(|(b, _)| need < b) {
                best = Some((need, w));
            }
        }
        best.map(|(_, w)| {
            [(x, w), (w, y)].into_iter().filter(|&(p, q)| free(p, q)).map(|(p, q)| Edge::new(p.min(q), p.max(q))).collect()
        })
    }

    fn lowest_free(&self) -> Option<Edge> {
        (0..self.n).flat_map(|u| (u + 1..self.n).map(move |v| (u, v))).find(|&(u, v)| self.is_open(u, v) && !self.adjacent(u, v)).map(|(u, v)| Edge::new(u, v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Move {
    Game1,
    Game2,
    Game3,
    Game4,
    Paths,
    Free,
}

impl Move {
    fn label(self) -> &'static str {
        match self {
            Move::Game1 => "game1",
            Move::Game2 => "game2",
            Move::Game3 => "game3",
            Move::Game4 => "game4",
            Move::Paths => "paths",
            Move::Free => "free",
        }
    }
}

/// Two-phase D₂ Maker for bias 2. Phase I runs four interleaved subgames
/// (degree, poorest vertex, expansion, connecting high vertices), Phase II
/// closes the remaining non-adjacent pairs through open 2-paths.
#[derive(Debug, Clone)]
pub struct D2CompositeMaker {
    params: D2MakerParams,
    phase1_len: usize,
    truncated: bool,
    game1: DegreeWeights,
    game3: Option<ExpMaker>,
    game3_fallback: bool,
    threshold: usize,
    ln_step: f64,
    high: Vec<usize>,
    is_high: Vec<bool>,
    last_t: Option<(f64, usize)>,
    started: bool,
}

impl D2CompositeMaker {
    /// Composite Maker against Breaker bias `b` on K_n.
    pub fn for_game(n: usize, b: usize) -> Result<D2CompositeMaker> {
        if n < 4 || b == 0 {
            return Err(Error::InvalidParameters(format!("composite D2 Maker needs n ≥ 4 and b ≥ 1 (n={n}, b={b})")));
        }
        let (nf, bf) = (n as f64, b as f64);
        let params = D2MakerParams::evaluate(nf, bf);
        let total_rounds = edge_count(n).div_ceil(2 + b);
        let literal = (2.0 * nf * params.r).ceil() as usize;
        let phase1_len = literal.min(total_rounds / 2);
        let virtual_b = ((edge_count(n) as f64 / (2.0 * nf * params.r)).floor() - 2.0).max(1.0);
        let (game3, game3_fallback) = game3_maker(n, params.r, params.s, virtual_b);
        Ok(D2CompositeMaker {
            params,
            phase1_len,
            truncated: phase1_len < literal,
            game1: DegreeWeights::new(mindeg_params(n, 2, 4 * b)?),
            game3,
            game3_fallback,
            threshold: (params.c * nf / bf).ceil() as usize,
            ln_step: game4_lambda(bf, params.ell_max).ln_1p(),
            high: Vec::new(),
            is_high: vec![false; n],
            last_t: None,
            started: false,
        })
    }

    pub fn params(&self) -> &D2MakerParams {
        &self.params
    }

    pub fn phase1_len(&self) -> usize {
        self.phase1_len
    }

    /// High vertices in order of emergence.
    pub fn high(&self) -> &[usize] {
        &self.high
    }

    /// Breaker degree at which a vertex becomes high.
    pub fn high_threshold(&self) -> usize {
        self.threshold
    }

    /// Shape (r, s) of the Game 3 expansion family, if one fits the cap.
    pub fn game3_shape(&self) -> Option<(usize, usize)> {
        self.game3.as_ref().map(|m| m.shape())
    }

    /// T = Σ (1+λ)^{−Y(x,y)} over high pairs at Maker distance > 2.
    fn game4_potential(&self, board: &Board) -> f64 {
        let mut t = 0.0;
        for (i, &x) in self.high.iter().enumerate() {
            for &y in &self.high[i + 1..] {
                if !board.connected(x, y) {
                    t += (-(board.open_paths(x, y) as f64) * self.ln_step).exp();
                }
            }
        }
        t
    }

    fn schedule(&self, round: usize) -> Move {
        if round <= self.phase1_len {
            match round % 4 {
                1 => Move::Game1,
                2 => Move::Game2,
                3 => Move::Game3,
                _ => Move::Game4,
            }
        } else if round % 2 == 1 {
            Move::Paths
        } else if round.is_multiple_of(4) {
            Move::Game4
        } else {
            Move::Free
        }
    }

    fn update_high(&mut self, game: &GameState, round: usize, notes: &mut Notes) {
        for v in 0..game.n() {
            if !self.is_high[v] && game.degree(Player::Breaker, v) >= self.threshold {
                self.is_high[v] = true;
                self.high.push(v);
                notes.note("d2maker.high", json!({"vertex": v, "round": round}));
            }
        }
        let bound = (2 * game.claimed_by(Player::Breaker)) / self.threshold.max(1);
        if self.high.len() > bound {
            notes.violation(format!("{} high vertices exceed the degree-sum bound {bound}", self.high.len()));
        }
    }

    fn game4(&mut self, board: &Board, notes: &mut Notes) -> Vec<Edge> {
        let t = self.game4_potential(board);
        if let Some((prev, count)) = self.last_t {
            if count == self.high.len() && t > prev * (1.0 + 1e-9) {
                notes.violation(format!("game 4 potential rose without a new high vertex: {prev:.12e} -> {t:.12e}"));
            }
        }
        self.last_t = Some((t, self.high.len()));
        notes.note("d2maker.game4_t", t);
        let mut best: Option<(u32, Vec<Edge>)> = None;
        for (i, &x) in self.high.iter().enumerate() {
            for &y in &self.high[i + 1..] {
                if board.connected(x, y) {
                    continue;
                }
                let yv = board.open_paths(x, y);
                if best.as_ref().is_some_and(|(b, _)| yv >= *b) {
                    continue;
                }
                if let Some(route) = board.route(x, y) {
                    best = Some((yv, route));
                }
            }
        }
        best.map(|(_, r)| r).unwrap_or_default()
    }

    fn game2(&self, game: &GameState) -> Vec<Edge> {
        let n = game.n();
        let has_free = |v: usize| (0..n).any(|w| w != v && game.is_free(v, w));
        let Some(x) = (0..n).filter(|&v| has_free(v)).min_by_key(|&v| (game.degree(Player::Maker, v), v)) else {
            return Vec::new();
        };
        let mut partners: Vec<(f64, usize)> = (0..n)
            .filter(|&w| w != x && game.is_free(x, w))
            .map(|w| (self.game1.log_weight(game.degree(Player::Maker, w), game.degree(Player::Breaker, w)), w))
            .collect();
        partners.sort_by(|p, q| q.0.total_cmp(&p.0).then(p.1.cmp(&q.1)));
        partners.into_iter().take(game.claims_due()).map(|(_, w)| Edge::new(x.min(w), x.max(w))).collect()
    }
}

fn game3_maker(n: usize, r: f64, s: f64, virtual_b: f64) -> (Option<ExpMaker>, bool) {
    let r0 = (r.ceil() as usize).max(1);
    let s0 = (s.ceil() as usize).max(1);
    if r0 + s0 <= n {
        if let Ok(m) = ExpMaker::new(n, r0, s0, 2, virtual_b, GAME3_CAP) {
            return (Some(m), false);
        }
    }
    for s1 in (1..=s0.min(n - 1)).rev() {
        if let Ok(m) = ExpMaker::new(n, 1, s1, 2, virtual_b, GAME3_CAP) {
            return (Some(m), true);
        }
    }
    (None, true)
}

/// Routes for unconnected pairs, most endangered (fewest open 2-paths)
/// first; with `skip_high_pairs`, pairs of two high vertices are ignored.
fn path_claims(board: &mut Board, is_high: &[bool], skip_high_pairs: bool, count: usize, out: &mut Vec<Edge>) {
    while out.len() < count {
        let mut best: Option<(u32, Vec<Edge>)> = None;
        for x in 0..board.n {
            for y in x + 1..board.n {
                if (skip_high_pairs && is_high[x] && is_high[y]) || board.connected(x, y) {
                    continue;
                }
                let yv = board.open_paths(x, y);
                if best.as_ref().is_some_and(|(b, _)| yv >= *b) {
                    continue;
                }
                if let Some(route) = board.route(x, y) {
                    best = Some((yv, route));
                }
            }
        }
        let Some((_, route)) = best else { break };
        for e in route.into_iter().take(count - out.len()) {
            board.claim(e);
            out.push(e);
        }
    }
    while out.len() < count {
        let Some(e) = board.lowest_free() else { break };
        board.claim(e);
        out.push(e);
    }
}

impl Strategy for D2CompositeMaker {
    fn id(&self) -> &str {
        "d2-composite"
    }

    fn select(&mut self, game: &GameState, notes: &mut Notes) -> Result<Vec<Edge>> {
        if game.a() != 2 {
            return Err(Error::StrategyInapplicable { strategy: "d2-composite".into(), reason: "Maker bias must be 2".into() });
        }
        let round = game.turns_taken(Player::Maker) + 1;
        if !self.started {
            self.started = true;
            notes.note("d2maker.params", self.params);
            notes.note("d2maker.phase1_len", self.phase1_len);
            notes.note("d2maker.game3_shape", self.game3_shape());
            if !self.params.conds.all() {
                notes.flag("d2maker.unguaranteed");
            }
            if self.truncated {
                notes.flag("d2maker.phase1_truncated");
            }
            if self.game3_fallback {
                notes.flag("d2maker.game3_fallback");
            }
        }
        if round <= self.phase1_len {
            self.update_high(game, round, notes);
        }
        let due = game.claims_due();
        let mv = self.schedule(round);
        notes.note("d2maker.round", json!({"round": round, "phase": if round <= self.phase1_len { 1 } else { 2 }, "game": mv.label()}));
        let mut board = Board::new(game);
        let mut out: Vec<Edge> = match mv {
            Move::Game1 => self.game1.select(game, Player::Maker, Player::Maker, due, &[]),
            Move::Game2 => self.game2(game),
            Move::Game3 => self.game3.as_ref().map(|m| m.picks(game, due, &[])).unwrap_or_default(),
            Move::Game4 => self.game4(&board, notes),
            Move::Paths => Vec::new(),
            Move::Free => board.lowest_free().into_iter().collect(),
        };
        out.truncate(due);
        for &e in &out {
            board.claim(e);
        }
        let skip_high_pairs = mv == Move::Paths;
        path_claims(&mut board, &self.is_high, skip_high_pairs, due, &mut out);
        Ok(out)
    }
}
