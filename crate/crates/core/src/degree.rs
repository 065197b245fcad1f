//! The biased minimum-degree game: weight-function play for the side that
//! wants every degree high, and vertex flooding for the side that wants one
//! degree low.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{Edge, GameState, Player};
use crate::play::{Notes, Strategy};
use crate::potential::REL_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinDegParams {
    pub n: usize,
    /// Bias of the degree-seeking side.
    pub a: usize,
    /// Bias of its opponent.
    pub b: usize,
    pub k: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub d_max: f64,
    /// d_max > 0.
    pub non_vacuous: bool,
    /// a ≤ n/(4 ln n).
    pub bias_ok: bool,
    /// λ₂ ∈ (0,1), λ₁ > 0 and (1+λ₁)^b ≤ 1 + aλ₂.
    pub weights_ok: bool,
    /// ln of the start potential T₀.
    pub ln_t0: f64,
    pub t0_below_one: bool,
}

impl MinDegParams {
    pub fn preconditions_hold(&self) -> bool {
        self.non_vacuous && self.bias_ok && self.weights_ok
    }

    /// Largest integer degree target the weights guarantee.
    pub fn target_degree(&self) -> Option<usize> {
        (self.d_max > 0.0).then(|| self.d_max.floor() as usize)
    }
}

pub fn mindeg_params(n: usize, a: usize, b: usize) -> Result<MinDegParams> {
    if n < 3 || a == 0 || b == 0 {
        return Err(Error::InvalidParameters(format!("mindeg needs n ≥ 3 and a, b ≥ 1 (got n={n}, a={a}, b={b})")));
    }
    let (nf, af, bf) = (n as f64, a as f64, b as f64);
    let ln_n = nf.ln();
    let k = 6.0 * af * bf / (af + bf).powf(1.5) * (nf * ln_n).sqrt();
    let lambda2 = ((af + bf) * ln_n / (af * (af + 1.0) * nf)).sqrt();
    let lambda1 = (1.0 + af * lambda2).powf(1.0 / bf) - 1.0;
    let d_max = af * nf / (af + bf) - k;
    let eq2 = (1.0 + lambda1).powf(bf) <= (1.0 + af * lambda2) * (1.0 + 1e-9);
    let weights_ok = lambda2 > 0.0 && lambda2 < 1.0 && lambda1 > 0.0 && eq2;
    let ln_t0 = if lambda2 < 1.0 {
        ln_n - (bf * nf / (af + bf) + k) * lambda1.ln_1p() - (af * nf / (af + bf) - k) * (-lambda2).ln_1p()
    } else {
        f64::NAN
    };
    Ok(MinDegParams {
        n,
        a,
        b,
        k,
        lambda1,
        lambda2,
        d_max,
        non_vacuous: d_max > 0.0,
        bias_ok: af <= nf / (4.0 * ln_n),
        weights_ok,
        ln_t0,
        t0_below_one: ln_t0 < 0.0,
    })
}

/// Vertex weights w(A_v) = (1+λ₁)^{d_opp(v) − (bn/(a+b)+k)} · (1−λ₂)^{d_me(v) − (an/(a+b)−k)}, in log space.
#[derive(Debug, Clone)]
pub struct DegreeWeights {
    params: MinDegParams,
    ln_up: f64,
    ln_down: f64,
    opp_offset: f64,
    my_offset: f64,
}

impl DegreeWeights {
    pub fn new(params: MinDegParams) -> DegreeWeights {
        let (nf, af, bf) = (params.n as f64, params.a as f64, params.b as f64);
        // λ₂ ≥ 1 only occurs on vacuous tiny boards; keep the weights finite there
        let lambda2 = params.lambda2.min(1.0 - 1e-9);
        DegreeWeights {
            params,
            ln_up: params.lambda1.ln_1p(),
            ln_down: (-lambda2).ln_1p(),
            opp_offset: bf * nf / (af + bf) + params.k,
            my_offset: af * nf / (af + bf) - params.k,
        }
    }

    pub fn params(&self) -> &MinDegParams {
        &self.params
    }

    pub fn log_weight(&self, d_me: usize, d_opp: usize) -> f64 {
        (d_opp as f64 - self.opp_offset) * self.ln_up + (d_me as f64 - self.my_offset) * self.ln_down
    }

    /// ln T where T = Σ_v w(A_v), from the live degrees of `me` and its opponent.
    pub fn ln_potential(&self, game: &GameState, me: Player) -> f64 {
        let mine = game.degrees(me);
        let theirs = game.degrees(me.opponent());
        let logs: Vec<f64> = (0..game.n()).map(|v| self.log_weight(mine[v], theirs[v])).collect();
        log_sum_exp(&logs)
    }

    pub fn potential(&self, game: &GameState, me: Player) -> f64 {
        self.ln_potential(game, me).exp()
    }

    /// Sequentially picks `count` free edges, each maximizing w(A_u)+w(A_v)
    /// under the weights of `me`. The picking side is `chooser`; its picks
    /// update the matching degree before the next pick. Ties within
    /// [`REL_TOL`] go to the lexicographically smallest edge.
    pub fn select(&self, game: &GameState, me: Player, chooser: Player, count: usize, exclude: &[Edge]) -> Vec<Edge> {
        let n = game.n();
        let mut d_me = game.degrees(me).to_vec();
        let mut d_opp = game.degrees(me.opponent()).to_vec();
        let mut blocked = vec![false; game.num_edges()];
        // free edges per vertex not yet excluded or picked; saturated vertices are skipped
        let mut open: Vec<usize> = (0..n).map(|v| n - 1 - game.degree(Player::Maker, v) - game.degree(Player::Breaker, v)).collect();
        let block = |e: Edge, blocked: &mut [bool], open: &mut [usize]| {
            let idx = game.index(e);
            if !blocked[idx] && game.is_free(e.u(), e.v()) {
                blocked[idx] = true;
                open[e.u()] -= 1;
                open[e.v()] -= 1;
            }
        };
        for &e in exclude {
            block(e, &mut blocked, &mut open);
        }
        let available = |x: usize, y: usize, blocked: &[bool]| game.is_free(x, y) && !blocked[game.index(Edge::new(x.min(y), x.max(y)))];
        // weights are scaled by a constant fixed at entry; argmax and the relative tie band are scale-free
        let logs: Vec<f64> = (0..n).map(|v| self.log_weight(d_me[v], d_opp[v])).collect();
        let mut top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut w: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
        let rank = |x: usize, y: usize, w: &[f64]| w[y].total_cmp(&w[x]).then(x.cmp(&y));
        let mut order: Vec<usize> = (0..n).filter(|&v| open[v] > 0).collect();
        order.sort_unstable_by(|&x, &y| rank(x, y, &w));
        let mut picked: Vec<Edge> = Vec::with_capacity(count);
        while picked.len() < count {
            if order.first().is_some_and(|&v| w[v] < 1e-100) {
                top = (0..n).map(|v| self.log_weight(d_me[v], d_opp[v])).fold(f64::NEG_INFINITY, f64::max);
                w = (0..n).map(|v| (self.log_weight(d_me[v], d_opp[v]) - top).exp()).collect();
            }
            let mut best = f64::NEG_INFINITY;
            for i in 0..order.len() {
                let u = order[i];
                if i + 1 < order.len() && w[u] + w[order[i + 1]] < best {
                    break;
                }
                if let Some(&v) = order[i + 1..].iter().find(|&&v| available(u, v, &blocked)) {
                    best = best.max(w[u] + w[v]);
                }
            }
            if best == f64::NEG_INFINITY {
                break;
            }
            let floor = best - REL_TOL * best;
            let wmax = w[order[0]];
            let mut choice = None;
            // both endpoints of a maximal pair lie in this set
            let mut cand: Vec<usize> = order.iter().copied().take_while(|&v| w[v] + wmax >= floor).collect();
            cand.sort_unstable();
            'outer: for (i, &u) in cand.iter().enumerate() {
                for &v in &cand[i + 1..] {
                    if w[u] + w[v] >= floor && available(u, v, &blocked) {
                        choice = Some(Edge::new(u, v));
                        break 'outer;
                    }
                }
            }
            let e = choice.expect("an edge attains the maximum");
            let bump = if chooser == me { &mut d_me } else { &mut d_opp };
            bump[e.u()] += 1;
            bump[e.v()] += 1;
            block(e, &mut blocked, &mut open);
            order.retain(|&x| x != e.u() && x != e.v());
            for x in [e.u(), e.v()] {
                w[x] = (self.log_weight(d_me[x], d_opp[x]) - top).exp();
                if open[x] > 0 {
                    let at = order.partition_point(|&y| rank(y, x, &w).is_lt());
                    order.insert(at, x);
                }
            }
            picked.push(e);
        }
        picked
    }
}

pub(crate) fn log_sum_exp(xs: &[f64]) -> f64 {
    let top = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + xs.iter().map(|x| (x - top).exp()).sum::<f64>().ln()
}

/// Degree-game Maker move for the side to move, using that side's weights.
pub fn mindeg_maker_select(game: &GameState, weights: &DegreeWeights) -> Vec<Edge> {
    let me = game.to_move();
    weights.select(game, me, me, game.claims_due(), &[])
}

/// Weight-function player for the degree game. Works for either seat; the
/// parameters must name this seat's bias as `a`.
#[derive(Debug, Clone)]
pub struct MinDegMaker {
    weights: DegreeWeights,
    last_ln_t: Option<f64>,
    label: String,
}

impl MinDegMaker {
    pub fn new(params: MinDegParams) -> MinDegMaker {
        MinDegMaker { weights: DegreeWeights::new(params), last_ln_t: None, label: "mindeg".into() }
    }

    pub fn for_game(n: usize, a: usize, b: usize) -> Result<MinDegMaker> {
        Ok(MinDegMaker::new(mindeg_params(n, a, b)?))
    }

    pub fn weights(&self) -> &DegreeWeights {
        &self.weights
    }

    /// Reports under a different strategy id.
    pub fn with_label(mut self, label: impl Into<String>) -> MinDegMaker {
        self.label = label.into();
        self
    }
}

impl Strategy for MinDegMaker {
    fn id(&self) -> &str {
        &self.label
    }

    fn select(&mut self, game: &GameState, notes: &mut Notes) -> Result<Vec<Edge>> {
        let me = game.to_move();
        // one full round has passed since the previous call
        let ln_t = self.weights.ln_potential(game, me);
        match self.last_ln_t {
            None => {
                notes.note("mindeg.params", self.weights.params());
                if !self.weights.params().preconditions_hold() {
                    notes.flag("mindeg.preconditions_failed");
                }
            }
            Some(prev) if ln_t > prev + 1e-9 => {
                notes.violation(format!("mindeg potential rose: ln T {prev:.12} -> {ln_t:.12}"));
            }
            Some(_) => {}
        }
        notes.note("mindeg.ln_t", ln_t);
        self.last_ln_t = Some(ln_t);
        Ok(mindeg_maker_select(game, &self.weights))
    }
}

/// Opponent that raises the degree-game potential as fast as it can, i.e.
/// the weight-function choice made from the other seat.
#[derive(Debug, Clone)]
pub struct PotentialGreedyBreaker {
    weights: DegreeWeights,
}

impl PotentialGreedyBreaker {
    /// `params` describe the opposing degree-seeking side (its bias is `a`).
    pub fn new(params: MinDegParams) -> PotentialGreedyBreaker {
        PotentialGreedyBreaker { weights: DegreeWeights::new(params) }
    }
}

impl Strategy for PotentialGreedyBreaker {
    fn id(&self) -> &str {
        "potential-greedy"
    }

    fn select(&mut self, game: &GameState, _: &mut Notes) -> Result<Vec<Edge>> {
        let me = game.to_move();
        Ok(self.weights.select(game, me.opponent(), me, game.claims_due(), &[]))
    }

    fn state_key(&self) -> Option<u64> {
        Some(0)
    }
}

/// Claims for the flooding strategy: up to `count` free edges at `target`
/// in order of the other endpoint, then the lowest free edges elsewhere.
pub fn flood_claims(game: &GameState, target: usize, count: usize) -> Vec<Edge> {
    let mut out: Vec<Edge> = (0..game.n())
        .filter(|&x| x != target && game.is_free(x, target))
        .take(count)
        .map(|x| Edge::new(x.min(target), x.max(target)))
        .collect();
    let spill = count - out.len();
    if spill > 0 {
        let extra = game.lowest_unclaimed(spill, &out);
        out.extend(extra);
    }
    out
}

/// Keeps one vertex's opponent degree low by claiming its edges every turn.
#[derive(Debug, Clone, Default)]
pub struct FloodingBreaker {
    target: Option<usize>,
}

impl FloodingBreaker {
    pub fn new() -> FloodingBreaker {
        FloodingBreaker::default()
    }

    pub fn target(&self) -> Option<usize> {
        self.target
    }
}

/// Lowest vertex untouched by `p`.
pub fn lowest_untouched(game: &GameState, p: Player) -> Option<usize> {
    game.degrees(p).iter().position(|&d| d == 0)
}

pub fn mindeg_breaker_select(game: &GameState, target: &mut Option<usize>) -> Result<Vec<Edge>> {
    let t = match *target {
        Some(t) => t,
        None => {
            let t = lowest_untouched(game, game.to_move().opponent()).ok_or_else(|| Error::StrategyInapplicable {
                strategy: "flooding".into(),
                reason: "every vertex already has an opponent edge".into(),
            })?;
            *target = Some(t);
            t
        }
    };
    Ok(flood_claims(game, t, game.claims_due()))
}

impl Strategy for FloodingBreaker {
    fn id(&self) -> &str {
        "flooding"
    }

    fn select(&mut self, game: &GameState, notes: &mut Notes) -> Result<Vec<Edge>> {
        let fresh = self.target.is_none();
        let claims = mindeg_breaker_select(game, &mut self.target)?;
        if fresh {
            notes.note("flooding.target", self.target);
        }
        Ok(claims)
    }

    fn state_key(&self) -> Option<u64> {
        Some(self.target.map_or(0, |t| t as u64 + 1))
    }
}
