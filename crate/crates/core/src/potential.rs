//! Hypergraph games: the Erdős–Selfridge–Beck criterion and greedy Breaker,
//! and the smallest-box attack for disjoint families.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Owner, Player};
use crate::play::Notes;

/// Relative tolerance used when comparing potentials and scores.
pub const REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WinningSetFamily {
    universe_size: usize,
    sets: Vec<Vec<usize>>,
}

impl WinningSetFamily {
    /// Validates and normalizes (sorts, dedups) each set.
    pub fn new(universe_size: usize, sets: Vec<Vec<usize>>) -> Result<WinningSetFamily> {
        let mut out = Vec::with_capacity(sets.len());
        for mut s in sets {
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                return Err(Error::InvalidParameters("winning sets must be non-empty".into()));
            }
            if let Some(&p) = s.iter().find(|&&p| p >= universe_size) {
                return Err(Error::PositionOutOfRange { position: p, size: universe_size });
            }
            out.push(s);
        }
        Ok(WinningSetFamily { universe_size, sets: out })
    }

    pub fn from_json(text: &str) -> Result<WinningSetFamily> {
        let raw: WinningSetFamily = serde_json::from_str(text)?;
        WinningSetFamily::new(raw.universe_size, raw.sets)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("family serializes")
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// For each position, the ids of the sets containing it.
    pub fn incidence(&self) -> Vec<Vec<u32>> {
        let mut inc = vec![Vec::new(); self.universe_size];
        for (i, s) in self.sets.iter().enumerate() {
            for &p in s {
                inc[p].push(i as u32);
            }
        }
        inc
    }

    pub fn is_pairwise_disjoint(&self) -> bool {
        let mut seen = vec![false; self.universe_size];
        for s in &self.sets {
            for &p in s {
                if std::mem::replace(&mut seen[p], true) {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EsbReport {
    pub value: f64,
    pub breaker_wins: bool,
}

/// Σ_A (1+b)^{1−|A|/a}; the Breaker-win condition is `value < 1`.
pub fn esb_start_value(family: &WinningSetFamily, a: usize, b: usize) -> Result<EsbReport> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidParameters("biases must be at least 1".into()));
    }
    let ln = (1.0 + b as f64).ln();
    let value: f64 = family.sets().iter().map(|s| (ln * (1.0 - s.len() as f64 / a as f64)).exp()).sum();
    Ok(EsbReport { value, breaker_wins: value < 1.0 })
}

/// Sequential greedy potential play, shared by the ESB Breaker and the
/// role-swapped expansion Maker.
///
/// A set is live while `killer` owns none of its positions; its weight is
/// `base^{−(unclaimed positions)/divisor}`. Each pick maximizes the summed
/// weight of live sets through it, then kills those sets. Scores within
/// [`REL_TOL`] of the maximum tie, lowest position wins. `free` must be
/// sorted ascending.
pub(crate) fn greedy_potential_picks<F>(
    sets: &[Vec<usize>],
    incidence: &[Vec<u32>],
    owner: F,
    killer: Owner,
    base: f64,
    divisor: f64,
    count: usize,
    free: &[usize],
) -> Vec<usize>
where
    F: Fn(usize) -> Owner,
{
    let ln_base = base.ln();
    let mut logw: Vec<Option<f64>> = sets
        .iter()
        .map(|s| {
            let mut unclaimed = 0usize;
            for &p in s {
                match owner(p) {
                    o if o == killer => return None,
                    Owner::Unclaimed => unclaimed += 1,
                    _ => {}
                }
            }
            Some(-(unclaimed as f64) / divisor * ln_base)
        })
        .collect();
    // scale so the heaviest live set has weight 1; argmax is unaffected
    let top = logw.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut weight: Vec<f64> = logw.iter_mut().map(|l| l.map_or(0.0, |l| (l - top).exp())).collect();
    let mut score = vec![0.0f64; incidence.len()];
    for &p in free {
        score[p] = incidence[p].iter().map(|&s| weight[s as usize]).sum();
    }
    let mut taken = BTreeSet::new();
    let mut picks = Vec::with_capacity(count);
    while picks.len() < count {
        let best = free.iter().filter(|p| !taken.contains(*p)).map(|&p| score[p]).fold(f64::NEG_INFINITY, f64::max);
        if best == f64::NEG_INFINITY {
            break;
        }
        let floor = best - REL_TOL * best.abs();
        let p = *free.iter().find(|&&p| !taken.contains(&p) && score[p] >= floor).expect("max is attained");
        taken.insert(p);
        picks.push(p);
        for &s in &incidence[p] {
            let w = std::mem::take(&mut weight[s as usize]);
            if w > 0.0 {
                for &q in &sets[s as usize] {
                    score[q] -= w;
                }
            }
        }
    }
    picks
}

/// Board for a game on an abstract hypergraph.
#[derive(Debug, Clone)]
pub struct FamilyGameState {
    family: Arc<WinningSetFamily>,
    incidence: Arc<Vec<Vec<u32>>>,
    owner: Vec<Owner>,
    a: usize,
    b: usize,
    first: Player,
    to_move: Player,
    unclaimed: usize,
}

impl FamilyGameState {
    pub fn new(family: WinningSetFamily, a: usize, b: usize, first: Player) -> Result<FamilyGameState> {
        if a == 0 || b == 0 {
            return Err(Error::InvalidParameters("biases must be at least 1".into()));
        }
        let incidence = Arc::new(family.incidence());
        let size = family.universe_size();
        Ok(FamilyGameState {
            family: Arc::new(family),
            incidence,
            owner: vec![Owner::Unclaimed; size],
            a,
            b,
            first,
            to_move: first,
            unclaimed: size,
        })
    }

    pub fn family(&self) -> &WinningSetFamily {
        &self.family
    }

    pub fn incidence(&self) -> &[Vec<u32>] {
        &self.incidence
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

    pub fn owner(&self, p: usize) -> Owner {
        self.owner[p]
    }

    pub fn ownership(&self) -> &[Owner] {
        &self.owner
    }

    pub fn unclaimed_count(&self) -> usize {
        self.unclaimed
    }

    pub fn free_positions(&self) -> Vec<usize> {
        (0..self.owner.len()).filter(|&p| self.owner[p] == Owner::Unclaimed).collect()
    }

    pub fn claims_due(&self) -> usize {
        self.bias(self.to_move).min(self.unclaimed)
    }

    pub fn apply_claim(&mut self, player: Player, positions: &[usize]) -> Result<()> {
        if player != self.to_move {
            return Err(Error::WrongTurn { expected: self.to_move, got: player });
        }
        if self.unclaimed == 0 {
            return Err(Error::BoardExhausted);
        }
        let due = self.claims_due();
        if positions.len() != due {
            return Err(Error::WrongClaimCount { expected: due, got: positions.len() });
        }
        for (i, &p) in positions.iter().enumerate() {
            if p >= self.owner.len() {
                return Err(Error::PositionOutOfRange { position: p, size: self.owner.len() });
            }
            if self.owner[p] != Owner::Unclaimed || positions[..i].contains(&p) {
                return Err(Error::AlreadyClaimedPosition(p));
            }
        }
        for &p in positions {
            self.owner[p] = player.into();
        }
        self.unclaimed -= positions.len();
        self.to_move = player.opponent();
        Ok(())
    }

    /// Some winning set is entirely Maker's.
    pub fn maker_completed(&self) -> bool {
        self.family.sets().iter().any(|s| s.iter().all(|&p| self.owner[p] == Owner::Maker))
    }

    /// Every winning set contains a Breaker position.
    pub fn all_sets_blocked(&self) -> bool {
        self.family.sets().iter().all(|s| s.iter().any(|&p| self.owner[p] == Owner::Breaker))
    }

    /// Σ over sets without a Breaker position of (1+b)^{−unclaimed/a}.
    pub fn esb_potential(&self) -> f64 {
        let ln = (1.0 + self.b as f64).ln();
        self.family
            .sets()
            .iter()
            .filter(|s| s.iter().all(|&p| self.owner[p] != Owner::Breaker))
            .map(|s| {
                let u = s.iter().filter(|&&p| self.owner[p] == Owner::Unclaimed).count();
                (-(u as f64) / self.a as f64 * ln).exp()
            })
            .sum()
    }
}

/// Strategy contract for hypergraph games.
pub trait FamilyStrategy: Send {
    fn id(&self) -> &str;

    fn select(&mut self, state: &FamilyGameState, notes: &mut Notes) -> Result<Vec<usize>>;

    /// See [`crate::play::Strategy::state_key`].
    fn state_key(&self) -> Option<u64> {
        None
    }
}

/// The greedy ESB Breaker choice for the side to move.
pub fn esb_breaker_select(state: &FamilyGameState) -> Vec<usize> {
    let free = state.free_positions();
    greedy_potential_picks(
        state.family.sets(),
        &state.incidence,
        |p| state.owner[p],
        Owner::Breaker,
        1.0 + state.b as f64,
        state.a as f64,
        state.claims_due(),
        &free,
    )
}

#[derive(Debug, Clone, Default)]
pub struct EsbBreaker;

impl FamilyStrategy for EsbBreaker {
    fn id(&self) -> &str {
        "esb-breaker"
    }

    fn select(&mut self, state: &FamilyGameState, _: &mut Notes) -> Result<Vec<usize>> {
        Ok(esb_breaker_select(state))
    }

    fn state_key(&self) -> Option<u64> {
        Some(0)
    }
}

/// H_m = Σ_{i=1}^m 1/i.
pub fn harmonic(m: usize) -> f64 {
    (1..=m).map(|i| 1.0 / i as f64).sum()
}

/// Disjoint-family condition: r ≤ (a−1)·H_{k−1} against a bias-1 opponent,
/// r ≤ ((a−1)/2)·H_{k−1} against bias 2.
pub fn box_game_condition(r: usize, k: usize, a: usize, opponent_bias: usize) -> Result<bool> {
    if r == 0 || k == 0 || a == 0 {
        return Err(Error::InvalidParameters("r, k and a must be at least 1".into()));
    }
    let scale = match opponent_bias {
        1 => 1.0,
        2 => 0.5,
        other => return Err(Error::InvalidParameters(format!("opponent bias must be 1 or 2, got {other}"))),
    };
    let rhs = (a as f64 - 1.0) * scale * harmonic(k - 1);
    Ok(r as f64 <= rhs * (1.0 + REL_TOL))
}

/// Smallest-surviving-box attack for the side `me`: each claim goes to the
/// lowest unclaimed position of the surviving set (no opponent position)
/// with the fewest unclaimed positions, ties to the lowest set index. With
/// no such set, the lowest free positions are taken.
pub(crate) fn box_picks<F>(sets: &[Vec<usize>], owner: F, me: Owner, count: usize, free: &[usize]) -> Vec<usize>
where
    F: Fn(usize) -> Owner,
{
    let mut taken: Vec<usize> = Vec::with_capacity(count);
    let mut remaining: Vec<Option<usize>> = sets
        .iter()
        .map(|s| {
            let mut u = 0;
            for &p in s {
                match owner(p) {
                    Owner::Unclaimed => u += 1,
                    o if o != me => return None,
                    _ => {}
                }
            }
            Some(u)
        })
        .collect();
    while taken.len() < count {
        let target = remaining
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.filter(|&u| u > 0).map(|u| (u, i)))
            .min();
        let p = match target {
            Some((_, i)) => {
                let p = *sets[i].iter().find(|&&p| owner(p) == Owner::Unclaimed && !taken.contains(&p)).expect("counted");
                remaining[i] = remaining[i].map(|u| u - 1);
                p
            }
            None => match free.iter().find(|p| !taken.contains(p)) {
                Some(&p) => p,
                None => break,
            },
        };
        taken.push(p);
    }
    taken
}

/// Box Maker move for the side to move on a disjoint family.
pub fn box_maker_select(state: &FamilyGameState) -> Result<Vec<usize>> {
    if !state.family.is_pairwise_disjoint() {
        return Err(Error::InvalidParameters("box strategy needs pairwise disjoint sets".into()));
    }
    let free = state.free_positions();
    let me: Owner = state.to_move.into();
    Ok(box_picks(state.family.sets(), |p| state.owner[p], me, state.claims_due(), &free))
}

#[derive(Debug, Clone, Default)]
pub struct BoxMaker;

impl FamilyStrategy for BoxMaker {
    fn id(&self) -> &str {
        "box-maker"
    }

    fn select(&mut self, state: &FamilyGameState, _: &mut Notes) -> Result<Vec<usize>> {
        box_maker_select(state)
    }

    fn state_key(&self) -> Option<u64> {
        Some(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fam(u: usize, sets: &[&[usize]]) -> WinningSetFamily {
        WinningSetFamily::new(u, sets.iter().map(|s| s.to_vec()).collect()).unwrap()
    }

    #[test]
    fn start_value_examples() {
        let f = fam(6, &[&[0, 1, 2], &[3, 4, 5]]);
        let r = esb_start_value(&f, 1, 1).unwrap();
        assert!((r.value - 0.5).abs() < 1e-15 && r.breaker_wins);
        let empty = fam(3, &[]);
        assert_eq!(esb_start_value(&empty, 1, 1).unwrap().value, 0.0);
        let one = fam(4, &[&[0, 1]]);
        let r = esb_start_value(&one, 2, 3).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15 && !r.breaker_wins);
    }

    #[test]
    fn esb_breaker_blocks_the_threat() {
        let f = fam(4, &[&[0, 1], &[2, 3]]);
        let mut s = FamilyGameState::new(f, 1, 1, Player::Maker).unwrap();
        s.apply_claim(Player::Maker, &[0]).unwrap();
        // oracle: weights by hand, position 1 carries 2^{-1}, 2 and 3 carry 2^{-2}
        assert_eq!(esb_breaker_select(&s), vec![1]);
    }

    #[test]
    fn esb_breaker_tie_breaks_low() {
        let f = fam(4, &[&[0, 1], &[2, 3]]);
        let s = FamilyGameState::new(f.clone(), 1, 1, Player::Breaker).unwrap();
        assert_eq!(esb_breaker_select(&s), vec![0]);
        let mut s = FamilyGameState::new(f, 1, 2, Player::Breaker).unwrap();
        s.apply_claim(Player::Breaker, &[0, 2]).unwrap();
        s.apply_claim(Player::Maker, &[1]).unwrap();
        assert_eq!(esb_breaker_select(&s), vec![3]);
    }

    #[test]
    fn esb_breaker_is_sequential() {
        // two picks: after taking 0 every set through 0 dies, so the second
        // pick goes to the other cluster rather than 1
        let f = fam(6, &[&[0, 1], &[0, 2], &[1, 2], &[3, 4]]);
        let s = FamilyGameState::new(f, 1, 2, Player::Breaker).unwrap();
        assert_eq!(esb_breaker_select(&s), vec![0, 1]);
        let f = fam(6, &[&[0, 1], &[0, 2], &[3, 4]]);
        let s = FamilyGameState::new(f, 1, 2, Player::Breaker).unwrap();
        assert_eq!(esb_breaker_select(&s), vec![0, 3]);
    }

    #[test]
    fn box_condition_examples() {
        assert!(box_game_condition(1, 2, 2, 1).unwrap());
        for r in 1..5 {
            assert!(!box_game_condition(r, 5, 1, 1).unwrap());
        }
        assert!(box_game_condition(2, 8, 3, 2).unwrap());
        assert!(box_game_condition(1, 1, 2, 3).is_err());
    }

    #[test]
    fn box_maker_attacks_smallest() {
        let f = fam(6, &[&[3, 4, 5], &[1, 2], &[0]]);
        let s = FamilyGameState::new(f, 2, 1, Player::Maker).unwrap();
        assert_eq!(box_maker_select(&s).unwrap(), vec![0, 1]);
        let f = fam(5, &[&[0, 1], &[2, 3, 4]]);
        let mut s = FamilyGameState::new(f, 2, 1, Player::Breaker).unwrap();
        s.apply_claim(Player::Breaker, &[0]).unwrap();
        assert_eq!(box_maker_select(&s).unwrap(), vec![2, 3]);
    }

    #[test]
    fn box_maker_completes_last_box() {
        let f = fam(4, &[&[0, 1], &[2, 3]]);
        let mut s = FamilyGameState::new(f, 2, 1, Player::Breaker).unwrap();
        s.apply_claim(Player::Breaker, &[2]).unwrap();
        let picks = box_maker_select(&s).unwrap();
        s.apply_claim(Player::Maker, &picks).unwrap();
        assert!(s.maker_completed());
    }

    #[test]
    fn family_json_round_trip() {
        let f = fam(5, &[&[4, 0], &[2]]);
        let back = WinningSetFamily::from_json(&f.to_json()).unwrap();
        assert_eq!(back.sets(), &[vec![0, 4], vec![2]]);
        assert!(WinningSetFamily::from_json(r#"{"universe_size":2,"sets":[[5]]}"#).is_err());
    }

    fn arb_family() -> impl proptest::strategy::Strategy<Value = WinningSetFamily> {
        (4usize..10).prop_flat_map(|u| {
            proptest::collection::vec(proptest::collection::btree_set(0..u, 2..6), 1..5)
                .prop_map(move |sets| WinningSetFamily::new(u, sets.into_iter().map(|s| s.into_iter().collect()).collect()).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig { max_global_rejects: 100_000, ..ProptestConfig::default() })]

        // the greedy Breaker keeps the measured potential below 1 after each of its turns
        #[test]
        fn esb_potential_stays_below_one(f in arb_family(), a in 1usize..3, b in 1usize..3, seed in any::<u64>()) {
            prop_assume!(esb_start_value(&f, a, b).unwrap().breaker_wins);
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut s = FamilyGameState::new(f, a, b, Player::Maker).unwrap();
            while s.unclaimed_count() > 0 {
                let picks = if s.to_move() == Player::Maker {
                    let mut free = s.free_positions();
                    let mut out = Vec::new();
                    for _ in 0..s.claims_due() {
                        out.push(free.swap_remove(rng.gen_range(0..free.len())));
                    }
                    out
                } else {
                    esb_breaker_select(&s)
                };
                let p = s.to_move();
                s.apply_claim(p, &picks).unwrap();
                if p == Player::Breaker {
                    prop_assert!(s.esb_potential() < 1.0);
                }
                prop_assert!(!s.maker_completed());
            }
        }

        #[test]
        fn box_maker_never_wastes_claims(seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let f = fam(9, &[&[0, 1, 2], &[3, 4, 5], &[6, 7, 8]]);
            let mut s = FamilyGameState::new(f, 2, 1, Player::Breaker).unwrap();
            while s.unclaimed_count() > 0 {
                let p = s.to_move();
                let picks = if p == Player::Breaker {
                    let free = s.free_positions();
                    vec![free[rng.gen_range(0..free.len())]]
                } else {
                    let picks = box_maker_select(&s).unwrap();
                    let live_open = s.family().sets().iter().any(|set| {
                        set.iter().all(|&q| s.owner(q) != Owner::Breaker) && set.iter().any(|&q| s.owner(q) == Owner::Unclaimed)
                    });
                    if live_open {
                        let q = picks[0];
                        let set = s.family().sets().iter().find(|set| set.contains(&q)).unwrap();
                        prop_assert!(set.iter().all(|&x| s.owner(x) != Owner::Breaker));
                    }
                    picks
                };
                s.apply_claim(p, &picks).unwrap();
            }
        }
    }
}
