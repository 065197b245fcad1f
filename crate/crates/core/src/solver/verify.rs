//! One-sided verification: one side follows a scripted strategy, the other
//! side is searched exhaustively.

use dashmap::DashMap;
use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use super::{adjacency, bits_diameter_at_most};
use crate::error::{Error, Result};
use crate::game::{edge_count, GameState, Owner, Player};
use crate::play::{Notes, Strategy};
use crate::potential::{FamilyGameState, FamilyStrategy};

/// A board the verifier can branch on. Positions are dense indices.
pub trait SearchBoard: Clone + Send + Sync {
    fn to_move(&self) -> Player;
    fn claims_due(&self) -> usize;
    fn free_positions(&self) -> Vec<usize>;
    fn claim_positions(&mut self, player: Player, positions: &[usize]) -> Result<()>;
    fn position_count(&self) -> usize;

    /// (Maker mask, Breaker mask, side) packed; `None` if the board is too big.
    fn memo_key(&self) -> Option<u128> {
        let m = self.position_count();
        if m > 63 {
            return None;
        }
        let (mut mk, mut bk) = (0u128, 0u128);
        for p in 0..m {
            match self.owner_at(p) {
                Owner::Maker => mk |= 1 << p,
                Owner::Breaker => bk |= 1 << p,
                Owner::Unclaimed => {}
            }
        }
        Some(mk | bk << 64 | u128::from(self.to_move() == Player::Breaker) << 63)
    }

    fn owner_at(&self, position: usize) -> Owner;
}

impl SearchBoard for GameState {
    fn to_move(&self) -> Player {
        GameState::to_move(self)
    }

    fn claims_due(&self) -> usize {
        GameState::claims_due(self)
    }

    fn free_positions(&self) -> Vec<usize> {
        let mut f = self.free_indices().to_vec();
        f.sort_unstable();
        f
    }

    fn claim_positions(&mut self, player: Player, positions: &[usize]) -> Result<()> {
        let edges: Vec<_> = positions.iter().map(|&i| self.edge(i)).collect();
        self.apply_claim(player, &edges)
    }

    fn position_count(&self) -> usize {
        self.num_edges()
    }

    fn owner_at(&self, position: usize) -> Owner {
        self.owner(position)
    }
}

impl SearchBoard for FamilyGameState {
    fn to_move(&self) -> Player {
        FamilyGameState::to_move(self)
    }

    fn claims_due(&self) -> usize {
        FamilyGameState::claims_due(self)
    }

    fn free_positions(&self) -> Vec<usize> {
        FamilyGameState::free_positions(self)
    }

    fn claim_positions(&mut self, player: Player, positions: &[usize]) -> Result<()> {
        self.apply_claim(player, positions)
    }

    fn position_count(&self) -> usize {
        self.ownership().len()
    }

    fn owner_at(&self, position: usize) -> Owner {
        self.owner(position)
    }
}

/// A strategy the verifier can clone at every branch.
pub trait Scripted<B>: Clone + Send + Sync {
    fn id(&self) -> String;
    fn choose(&mut self, board: &B, notes: &mut Notes) -> Result<Vec<usize>>;
    /// Must separate clones that could act differently later; `None` disables memoization.
    fn key(&self) -> Option<u64>;
}

/// Runs a K_n [`Strategy`] under the verifier.
#[derive(Debug, Clone)]
pub struct KnAdapter<S>(pub S);

impl<S: Strategy + Clone + Sync> Scripted<GameState> for KnAdapter<S> {
    fn id(&self) -> String {
        self.0.id().to_string()
    }

    fn choose(&mut self, board: &GameState, notes: &mut Notes) -> Result<Vec<usize>> {
        Ok(self.0.select(board, notes)?.into_iter().map(|e| board.index(e)).collect())
    }

    fn key(&self) -> Option<u64> {
        self.0.state_key()
    }
}

/// Runs a [`FamilyStrategy`] under the verifier.
#[derive(Debug, Clone)]
pub struct FamilyAdapter<S>(pub S);

impl<S: FamilyStrategy + Clone + Sync> Scripted<FamilyGameState> for FamilyAdapter<S> {
    fn id(&self) -> String {
        self.0.id().to_string()
    }

    fn choose(&mut self, board: &FamilyGameState, notes: &mut Notes) -> Result<Vec<usize>> {
        self.0.select(board, notes)
    }

    fn key(&self) -> Option<u64> {
        self.0.state_key()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub position_cap: usize,
    pub memo: bool,
    pub memo_cap: usize,
    pub parallel: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { position_cap: 28, memo: true, memo_cap: 50_000_000, parallel: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyResult {
    /// The scripted side reaches its goal against every opponent line.
    pub holds: bool,
    pub states_visited: u64,
}

struct Verifier<'a, J> {
    side: Player,
    judge: &'a J,
    cfg: &'a VerifyConfig,
    memo: DashMap<(u128, u64), bool>,
    visited: AtomicU64,
    overflow: AtomicBool,
}

impl<J> Verifier<'_, J> {
    fn run<B, S>(&self, board: &B, script: &S, parallel: bool) -> Result<bool>
    where
        B: SearchBoard,
        S: Scripted<B>,
        J: Fn(&B, &S) -> Option<Player> + Sync,
    {
        self.visited.fetch_add(1, Ordering::Relaxed);
        if let Some(w) = (self.judge)(board, script) {
            return Ok(w == self.side);
        }
        if board.claims_due() == 0 {
            return Err(Error::InvalidParameters("judge left an exhausted board undecided".into()));
        }
        let key = if self.cfg.memo { board.memo_key().zip(script.key()) } else { None };
        if let Some(k) = key {
            if let Some(v) = self.memo.get(&k) {
                return Ok(*v);
            }
        }
        let mover = board.to_move();
        let value = if mover == self.side {
            let mut s = script.clone();
            let picks = s.choose(board, &mut Notes::quiet()).map_err(|e| fault(script, e))?;
            let mut next = board.clone();
            next.claim_positions(mover, &picks).map_err(|e| fault(script, e))?;
            self.run(&next, &s, parallel)?
        } else {
            let free = board.free_positions();
            let moves: Vec<Vec<usize>> = free.into_iter().combinations(board.claims_due()).collect();
            let child = |mv: &Vec<usize>| -> Result<bool> {
                let mut next = board.clone();
                next.claim_positions(mover, mv)?;
                self.run(&next, script, false)
            };
            if parallel {
                match moves.par_iter().map(child).find_any(|r| !matches!(r, Ok(true))) {
                    None => true,
                    Some(Ok(_)) => false,
                    Some(Err(e)) => return Err(e),
                }
            } else {
                let mut all = true;
                for mv in &moves {
                    if !child(mv)? {
                        all = false;
                        break;
                    }
                }
                all
            }
        };
        if let Some(k) = key {
            if self.memo.len() >= self.cfg.memo_cap {
                self.overflow.store(true, Ordering::Relaxed);
            } else {
                self.memo.insert(k, value);
            }
        }
        Ok(value)
    }
}

fn fault<B, S: Scripted<B>>(script: &S, e: Error) -> Error {
    match e {
        Error::StrategyFault { .. } | Error::StrategyInapplicable { .. } => e,
        other => Error::StrategyFault { strategy: script.id(), message: other.to_string() },
    }
}

/// Whether `scripted`, playing `side` from `root`, wins against all play of
/// the other side. `judge` returns the winner once the game is decided and
/// must decide every exhausted board.
pub fn verify_one_sided<B, S, J>(root: B, scripted: S, side: Player, judge: J, cfg: &VerifyConfig) -> Result<VerifyResult>
where
    B: SearchBoard,
    S: Scripted<B>,
    J: Fn(&B, &S) -> Option<Player> + Sync,
{
    if root.position_count() > cfg.position_cap {
        return Err(Error::OverCap(format!("{} positions exceed the cap of {}", root.position_count(), cfg.position_cap)));
    }
    let v = Verifier {
        side,
        judge: &judge,
        cfg,
        memo: DashMap::new(),
        visited: AtomicU64::new(0),
        overflow: AtomicBool::new(false),
    };
    let holds = v.run(&root, &scripted, cfg.parallel)?;
    if v.overflow.load(Ordering::Relaxed) {
        return Err(Error::MemoOverflow { cap: cfg.memo_cap });
    }
    Ok(VerifyResult { holds, states_visited: v.visited.load(Ordering::Relaxed) })
}

/// Decides the diameter game: Maker once its graph has diameter ≤ d,
/// Breaker once Maker plus unclaimed edges cannot reach it.
pub fn diameter_judge<S>(d: usize) -> impl Fn(&GameState, &S) -> Option<Player> + Sync {
    move |g: &GameState, _: &S| {
        let n = g.n();
        let (mut mk, mut free) = (0u64, 0u64);
        for i in 0..g.num_edges() {
            match g.owner(i) {
                Owner::Maker => mk |= 1 << i,
                Owner::Unclaimed => free |= 1 << i,
                Owner::Breaker => {}
            }
        }
        if bits_diameter_at_most(&adjacency(n, mk), d) {
            Some(Player::Maker)
        } else if free == 0 || !bits_diameter_at_most(&adjacency(n, mk | free), d) {
            Some(Player::Breaker)
        } else {
            None
        }
    }
}

/// [`verify_one_sided`] for D_d(a:b) on K_n with a K_n strategy; n ≤ 7 by default.
#[allow(clippy::too_many_arguments)]
pub fn verify_diameter<S: Strategy + Clone + Sync>(
    n: usize,
    a: usize,
    b: usize,
    d: usize,
    first: Player,
    scripted: S,
    side: Player,
    cfg: &VerifyConfig,
) -> Result<VerifyResult> {
    let cap = cfg.position_cap.min(edge_count(7));
    if edge_count(n) > cap {
        return Err(Error::OverCap(format!("n = {n} exceeds the one-sided cap")));
    }
    let root = GameState::new(n, a, b, first)?;
    verify_one_sided(root, KnAdapter(scripted), side, diameter_judge(d), cfg)
}
