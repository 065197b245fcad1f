use crate::degree::lowest_untouched;
use crate::error::{Error, Result};
use crate::game::{Edge, GameState, Owner, Player};
use crate::play::{Notes, Strategy};
use crate::potential::box_picks;

use super::params::d2_box_condition;

fn edge(x: usize, y: usize) -> Edge {
    Edge::new(x.min(y), x.max(y))
}

/// Answers Maker's uw with wv and vw with wu around a fixed Breaker edge uv,
/// keeping u and v at Maker distance at least three. (1:1) games, n ≥ 4.
#[derive(Debug, Clone, Default)]
pub struct PairingBreaker {
    pair: Option<(usize, usize)>,
}

impl PairingBreaker {
    pub fn new() -> PairingBreaker {
        PairingBreaker::default()
    }

    pub fn pair(&self) -> Option<(usize, usize)> {
        self.pair
    }
}

pub fn pairing_breaker_select(game: &GameState, pair: &mut Option<(usize, usize)>) -> Result<Vec<Edge>> {
    if game.n() < 4 || game.bias(Player::Breaker) != 1 || game.bias(Player::Maker) != 1 {
        return Err(Error::StrategyInapplicable { strategy: "pairing".into(), reason: "needs a (1:1) game on n ≥ 4".into() });
    }
    let last = game.last_claim_of(Player::Maker).and_then(|c| c.edges.first().copied());
    let Some((u, v)) = *pair else {
        let e = match last {
            Some(m) => game
                .free_indices()
                .iter()
                .map(|&i| game.edge(i))
                .filter(|e| !e.touches(m.u()) && !e.touches(m.v()))
                .min()
                .ok_or_else(|| Error::StrategyInapplicable { strategy: "pairing".into(), reason: "no free edge avoids Maker's".into() })?,
            None => game.lowest_unclaimed(1, &[])[0],
        };
        *pair = Some((e.u(), e.v()));
        return Ok(vec![e]);
    };
    let reply = last.and_then(|m| {
        let answer = if let Some(w) = m.other(u) {
            (w != v).then(|| edge(w, v))
        } else if let Some(w) = m.other(v) {
            (w != u).then(|| edge(w, u))
        } else {
            None
        };
        answer.filter(|e| game.is_free(e.u(), e.v()))
    });
    Ok(vec![reply.unwrap_or_else(|| game.lowest_unclaimed(1, &[])[0])])
}

impl Strategy for PairingBreaker {
    fn id(&self) -> &str {
        "pairing"
    }

    fn select(&mut self, game: &GameState, notes: &mut Notes) -> Result<Vec<Edge>> {
        let fresh = self.pair.is_none();
        let out = pairing_breaker_select(game, &mut self.pair)?;
        if fresh {
            notes.note("pairing.pair", self.pair);
        }
        Ok(out)
    }

    fn state_key(&self) -> Option<u64> {
        Some(self.pair.map_or(0, |(u, v)| 1 + (u as u64) * 1024 + v as u64))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Stage {
    Start,
    Flood { v: usize, rounds: usize },
    Boxes { v: usize, boxes: Vec<Vec<usize>> },
    Done,
}

/// Two-phase D₂ Breaker: flood a Maker-free vertex v, then play the box
/// game on E_x = {x u₁, …, x u_t} where u_i are v's Maker neighbours.
#[derive(Debug, Clone)]
pub struct D2TwoPhaseBreaker {
    stage: Stage,
    r_prime_max: usize,
}

impl D2TwoPhaseBreaker {
    /// `r_prime_max` is the Phase I round bound ⌈(n−1)/b⌉.
    pub fn new(r_prime_max: usize) -> D2TwoPhaseBreaker {
        D2TwoPhaseBreaker { stage: Stage::Start, r_prime_max }
    }

    pub fn for_game(n: usize, b: usize) -> D2TwoPhaseBreaker {
        D2TwoPhaseBreaker::new((n - 1).div_ceil(b.max(1)))
    }

    pub fn target(&self) -> Option<usize> {
        match self.stage {
            Stage::Flood { v, .. } | Stage::Boxes { v, .. } => Some(v),
            _ => None,
        }
    }
}

impl D2TwoPhaseBreaker {
    fn start_boxes(&mut self, game: &GameState, v: usize, rounds: usize, notes: &mut Notes) {
        let n = game.n();
        let us: Vec<usize> = game.maker_neighbors(v).to_vec();
        let t = us.len();
        if rounds > self.r_prime_max {
            notes.violation(format!("phase I lasted {rounds} rounds, bound {}", self.r_prime_max));
        }
        if t > 2 * rounds + 2 {
            notes.violation(format!("t = {t} exceeds 2r'+2 = {}", 2 * rounds + 2));
        }
        if (0..n).any(|x| x != v && game.is_free(x, v)) {
            notes.violation("unclaimed edge at v after phase I");
        }
        if t == 0 {
            notes.note("d2breaker.phase2", serde_json::json!({"v": v, "t": 0, "r_prime": rounds, "boxes": 0}));
            self.stage = Stage::Done;
            return;
        }
        let boxes: Vec<Vec<usize>> = (0..n)
            .filter(|&x| x != v && !us.contains(&x))
            .filter(|&x| game.owner_of(x, v) != Owner::Maker && us.iter().all(|&u| game.owner_of(x, u) != Owner::Maker))
            .map(|x| us.iter().map(|&u| game.index(edge(x, u))).collect())
            .collect();
        let k = boxes.len();
        if !d2_box_condition(t, k, game.b()) {
            notes.flag("d2breaker.box_condition_failed");
        }
        notes.note("d2breaker.phase2", serde_json::json!({"v": v, "t": t, "r_prime": rounds, "boxes": k}));
        self.stage = Stage::Boxes { v, boxes };
    }
}

impl Strategy for D2TwoPhaseBreaker {
    fn id(&self) -> &str {
        "d2-two-phase"
    }

    fn select(&mut self, game: &GameState, notes: &mut Notes) -> Result<Vec<Edge>> {
        let due = game.claims_due();
        if self.stage == Stage::Start {
            let v = lowest_untouched(game, Player::Maker).ok_or_else(|| Error::StrategyInapplicable {
                strategy: "d2-two-phase".into(),
                reason: "every vertex already has a Maker edge".into(),
            })?;
            notes.note("d2breaker.v", v);
            self.stage = Stage::Flood { v, rounds: 0 };
        }
        if let Stage::Flood { v, rounds } = self.stage {
            let at_v: Vec<Edge> = (0..game.n()).filter(|&x| x != v && game.is_free(x, v)).map(|x| edge(x, v)).take(due).collect();
            if !at_v.is_empty() {
                self.stage = Stage::Flood { v, rounds: rounds + 1 };
                let mut out = at_v;
                if out.len() < due {
                    let extra = game.lowest_unclaimed(due - out.len(), &out);
                    out.extend(extra);
                }
                return Ok(out);
            }
            self.start_boxes(game, v, rounds, notes);
        }
        if let Stage::Boxes { boxes, .. } = &self.stage {
            let mut free = game.free_indices().to_vec();
            free.sort_unstable();
            let picks = box_picks(boxes, |p| game.owner(p), Owner::Breaker, due, &free);
            return Ok(picks.into_iter().map(|i| game.edge(i)).collect());
        }
        Ok(game.lowest_unclaimed(due, &[]))
    }
}
