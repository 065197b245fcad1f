//! Strategy contract, match execution and line-delimited JSON transcripts.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::game::{Claim, Edge, GameState, Player};
use crate::graph::Graph;

/// A move selector. Implementations see the whole board and must return
/// exactly `game.claims_due()` distinct unclaimed edges.
pub trait Strategy: Send {
    fn id(&self) -> &str;

    fn select(&mut self, game: &GameState, notes: &mut Notes) -> Result<Vec<Edge>>;

    /// Fingerprint of internal state for memoized one-sided search.
    ///
    /// Two clones with equal keys must behave identically on every future
    /// board. `None` (the default) disables memoization for this strategy.
    fn state_key(&self) -> Option<u64> {
        None
    }
}

impl<S: Strategy + ?Sized> Strategy for Box<S> {
    fn id(&self) -> &str {
        (**self).id()
    }

    fn select(&mut self, game: &GameState, notes: &mut Notes) -> Result<Vec<Edge>> {
        (**self).select(game, notes)
    }

    fn state_key(&self) -> Option<u64> {
        (**self).state_key()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Annotation {
    pub turn: usize,
    pub player: Player,
    pub label: String,
    pub value: Value,
}

/// Side channel through which strategies report phases, flags and invariant violations.
#[derive(Debug, Clone, Default)]
pub struct Notes {
    turn: usize,
    player: Option<Player>,
    record: bool,
    annotations: Vec<Annotation>,
    flags: BTreeMap<String, u64>,
    violations: Vec<String>,
}

impl Notes {
    pub fn new() -> Notes {
        Notes { record: true, ..Notes::default() }
    }

    /// A sink that keeps flags and violations but drops annotations.
    pub fn quiet() -> Notes {
        Notes::default()
    }

    pub fn set_context(&mut self, turn: usize, player: Player) {
        self.turn = turn;
        self.player = Some(player);
    }

    pub fn note(&mut self, label: &str, value: impl Serialize) {
        if !self.record {
            return;
        }
        let value = serde_json::to_value(value).unwrap_or(Value::Null);
        self.annotations.push(Annotation {
            turn: self.turn,
            player: self.player.unwrap_or(Player::Maker),
            label: label.to_string(),
            value,
        });
    }

    pub fn flag(&mut self, name: &str) {
        *self.flags.entry(name.to_string()).or_insert(0) += 1;
    }

    pub fn violation(&mut self, msg: impl Into<String>) {
        let msg = msg.into();
        log::warn!("invariant violation at turn {}: {msg}", self.turn);
        self.violations.push(msg);
    }

    pub fn annotations(&self) -> &[Annotation] {
        &self.annotations
    }

    pub fn flags(&self) -> &BTreeMap<String, u64> {
        &self.flags
    }

    pub fn flag_count(&self, name: &str) -> u64 {
        self.flags.get(name).copied().unwrap_or(0)
    }

    pub fn violations(&self) -> &[String] {
        &self.violations
    }
}

/// Monotone target properties of Maker's final graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetProperty {
    DiameterAtMost(usize),
    MinDegreeAtLeast(usize),
    Expansion { r: usize, s: usize },
}

impl TargetProperty {
    pub fn holds(&self, g: &Graph) -> bool {
        match *self {
            TargetProperty::DiameterAtMost(d) => g.diameter_at_most(d),
            TargetProperty::MinDegreeAtLeast(k) => g.degree_profile().min >= k,
            TargetProperty::Expansion { r, s } => g.has_expansion(r, s).unwrap_or(false),
        }
    }

    /// Same as [`holds`](Self::holds) on Maker's graph, with cheap degree-based rejections first.
    pub fn holds_for_maker(&self, game: &GameState) -> bool {
        let degs = game.degrees(Player::Maker);
        match *self {
            TargetProperty::DiameterAtMost(_) if game.n() > 1 && degs.contains(&0) => false,
            TargetProperty::MinDegreeAtLeast(k) => degs.iter().all(|&d| d >= k),
            _ => self.holds(&game.maker_graph()),
        }
    }
}

impl fmt::Display for TargetProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetProperty::DiameterAtMost(d) => write!(f, "diameter<={d}"),
            TargetProperty::MinDegreeAtLeast(k) => write!(f, "mindeg>={k}"),
            TargetProperty::Expansion { r, s } => write!(f, "expansion({r},{s})"),
        }
    }
}

impl FromStr for TargetProperty {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown property {s:?}"));
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        if let Some(rest) = s.strip_prefix("diameter<=") {
            Ok(TargetProperty::DiameterAtMost(num(rest)?))
        } else if let Some(rest) = s.strip_prefix("mindeg>=") {
            Ok(TargetProperty::MinDegreeAtLeast(num(rest)?))
        } else if let Some(rest) = s.strip_prefix("expansion(").and_then(|r| r.strip_suffix(')')) {
            let (r, t) = rest.split_once(',').ok_or_else(bad)?;
            Ok(TargetProperty::Expansion { r: num(r)?, s: num(t)? })
        } else {
            Err(bad())
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MatchOptions {
    /// Stop as soon as the (monotone) property holds for Maker.
    pub early_stop: bool,
    /// Seed recorded in the transcript header.
    pub seed: u64,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions { early_stop: true, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub first: Player,
    pub maker: String,
    pub breaker: String,
    pub seed: u64,
    pub property: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimRecord {
    pub turn: usize,
    pub player: Player,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fault {
    pub player: Player,
    pub strategy: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Footer {
    pub verdict: Player,
    pub property_holds: bool,
    pub rounds: usize,
    pub early_stop: bool,
    #[serde(default)]
    pub fault: Option<Fault>,
    #[serde(default)]
    pub flags: BTreeMap<String, u64>,
    #[serde(default)]
    pub violations: Vec<String>,
    #[serde(default)]
    pub annotations: Vec<Annotation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Line {
    Header(Header),
    Claim(ClaimRecord),
    Footer(Footer),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    pub header: Header,
    pub claims: Vec<ClaimRecord>,
    pub footer: Footer,
}

impl Transcript {
    pub fn winner(&self) -> Player {
        self.footer.verdict
    }

    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer(&mut w, &Line::Header(self.header.clone()))?;
        writeln!(w)?;
        for c in &self.claims {
            serde_json::to_writer(&mut w, &Line::Claim(c.clone()))?;
            writeln!(w)?;
        }
        serde_json::to_writer(&mut w, &Line::Footer(self.footer.clone()))?;
        writeln!(w)?;
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }

    pub fn read_jsonl<R: BufRead>(r: R) -> Result<Transcript> {
        let mut header = None;
        let mut claims = Vec::new();
        let mut footer = None;
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<Line>(&line).map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))? {
                Line::Header(h) if header.is_none() => header = Some(h),
                Line::Claim(c) if header.is_some() && footer.is_none() => claims.push(c),
                Line::Footer(f) if header.is_some() && footer.is_none() => footer = Some(f),
                _ => return Err(Error::Parse(format!("line {}: out-of-order record", i + 1))),
            }
        }
        Ok(Transcript {
            header: header.ok_or_else(|| Error::Parse("missing header".into()))?,
            claims,
            footer: footer.ok_or_else(|| Error::Parse("missing footer".into()))?,
        })
    }

    /// Replays the claims from an empty board.
    pub fn replay_state(&self) -> Result<GameState> {
        let h = &self.header;
        let log: Vec<Claim> = self.claims.iter().map(|c| Claim { player: c.player, edges: c.edges.clone() }).collect();
        GameState::replay(h.n, h.a, h.b, h.first, &log)
    }

    /// Replays the claims and re-derives the verdict.
    pub fn replay(&self) -> Result<ReplayReport> {
        let state = self.replay_state()?;
        let property: TargetProperty = self.header.property.parse()?;
        let holds = property.holds(&state.maker_graph());
        let verdict = if holds { Player::Maker } else { Player::Breaker };
        Ok(ReplayReport {
            claims: self.claims.len(),
            property_holds: holds,
            verdict,
            matches_footer: verdict == self.footer.verdict && holds == self.footer.property_holds,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplayReport {
    pub claims: usize,
    pub property_holds: bool,
    pub verdict: Player,
    pub matches_footer: bool,
}

/// Plays `maker` against `breaker` from a fresh `state` until the board is
/// exhausted (or, with `early_stop`, until Maker's graph has the property).
///
/// A strategy that errors or returns an illegal claim ends the match; the
/// fault is recorded in the footer and the verdict is taken at that point.
pub fn run_match(
    mut state: GameState,
    maker: &mut dyn Strategy,
    breaker: &mut dyn Strategy,
    property: TargetProperty,
    opts: MatchOptions,
) -> Result<(Transcript, GameState)> {
    if !state.log().is_empty() {
        return Err(Error::InvalidParameters("run_match needs a fresh board".into()));
    }
    let header = Header {
        n: state.n(),
        a: state.a(),
        b: state.b(),
        first: state.first(),
        maker: maker.id().to_string(),
        breaker: breaker.id().to_string(),
        seed: opts.seed,
        property: property.to_string(),
    };
    let mut notes = Notes::new();
    let mut claims = Vec::new();
    let mut fault = None;
    let mut stopped_early = false;
    let mut turn = 0;
    while !state.is_exhausted() {
        let p = state.to_move();
        notes.set_context(turn, p);
        let strat: &mut dyn Strategy = if p == Player::Maker { &mut *maker } else { &mut *breaker };
        let outcome = strat.select(&state, &mut notes).and_then(|edges| {
            state.apply_claim(p, &edges)?;
            Ok(edges)
        });
        match outcome {
            Ok(edges) => claims.push(ClaimRecord { turn, player: p, edges }),
            Err(e) => {
                log::warn!("{} ({p}) faulted: {e}", strat.id());
                fault = Some(Fault { player: p, strategy: strat.id().to_string(), message: e.to_string() });
                break;
            }
        }
        turn += 1;
        if opts.early_stop && p == Player::Maker && property.holds_for_maker(&state) {
            stopped_early = !state.is_exhausted();
            break;
        }
    }
    let holds = property.holds_for_maker(&state);
    let footer = Footer {
        verdict: if holds { Player::Maker } else { Player::Breaker },
        property_holds: holds,
        rounds: state.turns_taken(Player::Maker),
        early_stop: stopped_early,
        fault,
        flags: notes.flags().clone(),
        violations: notes.violations().to_vec(),
        annotations: notes.annotations().to_vec(),
    };
    Ok((Transcript { header, claims, footer }, state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heuristics::{LowestEdge, RandomPlayer};

    #[test]
    fn property_ids_round_trip() {
        for p in [
            TargetProperty::DiameterAtMost(3),
            TargetProperty::MinDegreeAtLeast(7),
            TargetProperty::Expansion { r: 2, s: 5 },
        ] {
            assert_eq!(p.to_string().parse::<TargetProperty>().unwrap(), p);
        }
        assert!("girth>=4".parse::<TargetProperty>().is_err());
    }

    #[test]
    fn k2_maker_always_wins() {
        let g = GameState::new(2, 1, 1, Player::Maker).unwrap();
        let (t, _) = run_match(g, &mut LowestEdge::new(), &mut LowestEdge::new(), TargetProperty::DiameterAtMost(2), MatchOptions::default()).unwrap();
        assert_eq!(t.winner(), Player::Maker);
    }

    #[test]
    fn k3_greedy_maker_wins() {
        for seed in 0..20 {
            let g = GameState::new(3, 1, 1, Player::Maker).unwrap();
            let (t, _) = run_match(
                g,
                &mut LowestEdge::new(),
                &mut RandomPlayer::new(seed),
                TargetProperty::DiameterAtMost(2),
                MatchOptions { early_stop: false, seed },
            )
            .unwrap();
            assert_eq!(t.winner(), Player::Maker);
        }
    }

    struct Cheater;

    impl Strategy for Cheater {
        fn id(&self) -> &str {
            "cheater"
        }

        fn select(&mut self, _: &GameState, _: &mut Notes) -> Result<Vec<Edge>> {
            Ok(vec![Edge::new(0, 1)])
        }
    }

    #[test]
    fn illegal_claim_is_attributed() {
        let g = GameState::new(4, 1, 1, Player::Maker).unwrap();
        let (t, _) = run_match(g, &mut LowestEdge::new(), &mut Cheater, TargetProperty::DiameterAtMost(2), MatchOptions::default()).unwrap();
        let f = t.footer.fault.as_ref().unwrap();
        assert_eq!((f.player, f.strategy.as_str()), (Player::Breaker, "cheater"));
    }

    #[test]
    fn transcript_jsonl_replays() {
        let g = GameState::new(6, 2, 1, Player::Maker).unwrap();
        let (t, state) = run_match(
            g,
            &mut RandomPlayer::new(3),
            &mut RandomPlayer::new(4),
            TargetProperty::DiameterAtMost(2),
            MatchOptions { early_stop: false, seed: 3 },
        )
        .unwrap();
        let text = t.to_jsonl();
        let back = Transcript::read_jsonl(text.as_bytes()).unwrap();
        assert_eq!(back, t);
        let replayed = back.replay_state().unwrap();
        assert_eq!(replayed.ownership(), state.ownership());
        assert!(back.replay().unwrap().matches_footer);
    }

    #[test]
    fn early_stop_only_when_property_holds() {
        for seed in 0..10 {
            let g = GameState::new(7, 3, 1, Player::Maker).unwrap();
            let (t, state) = run_match(
                g,
                &mut RandomPlayer::new(seed),
                &mut RandomPlayer::new(seed + 100),
                TargetProperty::DiameterAtMost(2),
                MatchOptions { early_stop: true, seed },
            )
            .unwrap();
            if t.footer.early_stop {
                assert!(TargetProperty::DiameterAtMost(2).holds(&state.maker_graph()));
                assert_eq!(t.winner(), Player::Maker);
            }
        }
    }
}
