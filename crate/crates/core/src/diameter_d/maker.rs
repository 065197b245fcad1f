use crate::degree::{mindeg_params, DegreeWeights};
use crate::error::{Error, Result};
use crate::expansion::ExpMaker;
use crate::game::{Edge, GameState, Player};
use crate::play::{Notes, Strategy};

use super::params::DdParams;

#[derive(Debug, Clone)]
enum Subgame {
    MinDeg(DegreeWeights),
    Exp(ExpMaker),
}

/// Round-robin D_d Maker for bias 1: Game 1 is a degree game, Games
/// 2..⌈d/2⌉ are expansion games that grow the Maker balls step by step.
#[derive(Debug, Clone)]
pub struct DdMaker {
    games: Vec<Subgame>,
    shapes: Vec<(usize, usize)>,
    announced: bool,
}

impl DdMaker {
    /// Subgames from the analytic parameters, with each r_i rounded up.
    pub fn from_params(n: usize, breaker_b: usize, p: &DdParams, cap: u64) -> Result<DdMaker> {
        let mut r = Vec::with_capacity(p.r.len() - 1);
        for &ri in &p.r[1..] {
            if !(ri >= 1.0) {
                return Err(Error::InvalidParameters(format!("r sequence has a non-positive entry {ri}")));
            }
            r.push(ri.ceil() as usize);
        }
        DdMaker::manual(n, p.d, breaker_b, &r, cap)
    }

    /// Subgames from explicit sizes r₁..r_{⌈d/2⌉−1}.
    pub fn manual(n: usize, d: usize, breaker_b: usize, r: &[usize], cap: u64) -> Result<DdMaker> {
        let half = d.div_ceil(2);
        if d < 3 || r.len() != half - 1 || breaker_b == 0 {
            return Err(Error::InvalidParameters(format!("d={d} needs {} r values and b ≥ 1", half.saturating_sub(1))));
        }
        let virtual_b = (half * breaker_b) as f64;
        let mut rr = vec![1];
        rr.extend_from_slice(r);
        let mut games = vec![Subgame::MinDeg(DegreeWeights::new(mindeg_params(n, 1, half * breaker_b)?))];
        let mut shapes = vec![(r[0], 0)];
        let mut exp = |ri: usize, si: usize| -> Result<()> {
            if si == 0 || ri + si > n {
                return Err(Error::InvalidParameters(format!("EXP({ri},{si}) does not fit on {n} vertices")));
            }
            games.push(Subgame::Exp(ExpMaker::new(n, ri, si, 1, virtual_b, cap)?));
            shapes.push((ri, si));
            Ok(())
        };
        for i in 2..half {
            exp(rr[i - 1], n.saturating_sub(rr[i]))?;
        }
        let last = rr[half - 1];
        if d.is_multiple_of(2) {
            exp(last, n.div_ceil(2).saturating_sub(1))?;
        } else {
            exp(last, n.saturating_sub(last))?;
        }
        Ok(DdMaker { games, shapes, announced: false })
    }

    /// (r, s) per subgame; Game 1 reports (r₁, 0).
    pub fn shapes(&self) -> &[(usize, usize)] {
        &self.shapes
    }

    /// Subgame (1-based) played in Maker round `round`.
    pub fn game_for_round(&self, round: usize) -> usize {
        let half = self.games.len();
        match round % half {
            0 => half,
            k => k,
        }
    }
}

pub fn dd_maker_select(game: &GameState, maker: &DdMaker) -> Vec<Edge> {
    let k = maker.game_for_round(game.turns_taken(Player::Maker) + 1);
    let due = game.claims_due();
    let mut out = match &maker.games[k - 1] {
        Subgame::MinDeg(w) => w.select(game, Player::Maker, Player::Maker, due, &[]),
        Subgame::Exp(m) => m.picks(game, due, &[]),
    };
    if out.len() < due {
        let extra = game.lowest_unclaimed(due - out.len(), &out);
        out.extend(extra);
    }
    out
}

impl Strategy for DdMaker {
    fn id(&self) -> &str {
        "dd-maker"
    }

    fn select(&mut self, game: &GameState, notes: &mut Notes) -> Result<Vec<Edge>> {
        if game.a() != 1 {
            return Err(Error::StrategyInapplicable { strategy: "dd-maker".into(), reason: "Maker bias must be 1".into() });
        }
        if !self.announced {
            self.announced = true;
            notes.note("dd.maker_shapes", &self.shapes);
        }
        notes.note("dd.subgame", self.game_for_round(game.turns_taken(Player::Maker) + 1));
        Ok(dd_maker_select(game, self))
    }
}
