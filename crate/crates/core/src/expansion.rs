//! The (a:b) expansion game EXP(r,s): Maker needs an edge between every
//! pair of disjoint vertex sets of sizes r and s.

use std::sync::Arc;

use itertools::Itertools;
use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{edge_count, edge_index, Edge, GameState, Owner};
use crate::play::{Notes, Strategy};
use crate::potential::{greedy_potential_picks, WinningSetFamily};

/// Default cap on materialized hyperedges.
pub const DEFAULT_FAMILY_CAP: u64 = 2_000_000;

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionParams {
    pub n: usize,
    pub r: usize,
    pub s: usize,
    pub a: usize,
    pub b: usize,
    pub case_a: bool,
    pub case_b: bool,
    pub case_c: bool,
    /// Cases (a) and (b) assume r ≤ s; case (c) is evaluated regardless.
    pub r_exceeds_s: bool,
    /// C(n,r)·C(n−r,s), exact.
    #[serde(serialize_with = "ser_big")]
    pub pair_count: BigUint,
    /// Distinct hyperedges: pair_count, halved when r = s.
    #[serde(serialize_with = "ser_big")]
    pub family_size: BigUint,
    /// C(n,r)·C(n−r,s)·(1+a)^{−rs/b}.
    pub closed_form_start: f64,
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl ExpansionParams {
    pub fn any_case(&self) -> bool {
        self.case_a || self.case_b || self.case_c
    }

    /// How many ordered pairs map to one hyperedge.
    pub fn multiplicity(&self) -> usize {
        if self.r == self.s {
            2
        } else {
            1
        }
    }
}

pub fn exp_condition(n: usize, r: usize, s: usize, a: usize, b: usize) -> Result<ExpansionParams> {
    if r == 0 || s == 0 || a == 0 || b == 0 {
        return Err(Error::InvalidParameters("r, s, a, b must be at least 1".into()));
    }
    if r + s > n {
        return Err(Error::InvalidParameters(format!("r + s = {} exceeds n = {n}", r + s)));
    }
    let (nf, rf, sf) = (n as f64, r as f64, s as f64);
    let ln_n = nf.ln();
    let bl = b as f64 * ln_n;
    let ra = rf * (a as f64 + 1.0).ln();
    let case_a = 2.0 * bl < ra;
    let case_b = bl < ra && ra <= 2.0 * bl && sf > rf * bl / (ra - bl);
    let case_c = nf - sf < nf * ra / (bl + ra);
    let pair_count = binomial(n, r) * binomial(n - r, s);
    let family_size = if r == s { &pair_count / 2u32 } else { pair_count.clone() };
    let ln_count = big_ln(&pair_count);
    let closed_form_start = (ln_count - rf * sf / b as f64 * (a as f64 + 1.0).ln()).exp();
    Ok(ExpansionParams { n, r, s, a, b, case_a, case_b, case_c, r_exceeds_s: r > s, pair_count, family_size, closed_form_start })
}

fn big_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_string().parse::<f64>().map_or(f64::INFINITY, f64::ln);
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    top.to_string().parse::<f64>().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// One hyperedge per disjoint (R,S), positions indexed by [`edge_index`].
/// When r = s each unordered pair appears once.
pub fn exp_family(n: usize, r: usize, s: usize, cap: u64) -> Result<WinningSetFamily> {
    if r == 0 || s == 0 || r + s > n {
        return Err(Error::InvalidParameters(format!("need 1 ≤ r, s and r + s ≤ n (r={r}, s={s}, n={n})")));
    }
    let pairs = binomial(n, r) * binomial(n - r, s);
    let size = if r == s { &pairs / 2u32 } else { pairs };
    if size > BigUint::from(cap) {
        return Err(Error::FamilyTooLarge { count: size.to_string(), cap });
    }
    let mut sets = Vec::with_capacity(size.to_string().parse().unwrap_or(0));
    for big_r in (0..n).combinations(r) {
        let rest: Vec<usize> = (0..n).filter(|v| !big_r.contains(v)).collect();
        for big_s in rest.into_iter().combinations(s) {
            if r == s && big_s < big_r {
                continue;
            }
            let mut set: Vec<usize> = big_r
                .iter()
                .flat_map(|&x| big_s.iter().map(move |&y| edge_index(n, x.min(y), x.max(y))))
                .collect();
            set.sort_unstable();
            sets.push(set);
        }
    }
    WinningSetFamily::new(edge_count(n), sets)
}

/// Potential play on an expansion family from the seat that wants to touch
/// every hyperedge: a set is live until this seat owns one of its edges,
/// and weighs (1+own_bias)^{−unclaimed/virtual_b}.
#[derive(Debug, Clone)]
pub struct ExpMaker {
    family: Arc<WinningSetFamily>,
    incidence: Arc<Vec<Vec<u32>>>,
    own_bias: usize,
    virtual_b: f64,
    r: usize,
    s: usize,
}

impl ExpMaker {
    pub fn new(n: usize, r: usize, s: usize, own_bias: usize, virtual_b: f64, cap: u64) -> Result<ExpMaker> {
        if own_bias == 0 || virtual_b <= 0.0 {
            return Err(Error::InvalidParameters("biases must be positive".into()));
        }
        let family = exp_family(n, r, s, cap)?;
        let incidence = family.incidence();
        Ok(ExpMaker { family: Arc::new(family), incidence: Arc::new(incidence), own_bias, virtual_b, r, s })
    }

    pub fn family(&self) -> &WinningSetFamily {
        &self.family
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.r, self.s)
    }

    /// `count` picks for the side to move, avoiding `exclude`.
    pub fn picks(&self, game: &GameState, count: usize, exclude: &[Edge]) -> Vec<Edge> {
        let me: Owner = game.to_move().into();
        let mut free: Vec<usize> = game.free_indices().iter().copied().filter(|&i| !exclude.contains(&game.edge(i))).collect();
        free.sort_unstable();
        greedy_potential_picks(
            self.family.sets(),
            &self.incidence,
            |p| game.owner(p),
            me,
            1.0 + self.own_bias as f64,
            self.virtual_b,
            count,
            &free,
        )
        .into_iter()
        .map(|i| game.edge(i))
        .collect()
    }

    /// Hyperedges not yet touched by `who`.
    pub fn untouched(&self, game: &GameState, who: Owner) -> usize {
        self.family.sets().iter().filter(|s| s.iter().all(|&p| game.owner(p) != who)).count()
    }
}

pub fn exp_maker_select(game: &GameState, maker: &ExpMaker) -> Vec<Edge> {
    maker.picks(game, game.claims_due(), &[])
}

impl Strategy for ExpMaker {
    fn id(&self) -> &str {
        "exp-maker"
    }

    fn select(&mut self, game: &GameState, _: &mut Notes) -> Result<Vec<Edge>> {
        Ok(exp_maker_select(game, self))
    }

    fn state_key(&self) -> Option<u64> {
        Some(0)
    }
}
