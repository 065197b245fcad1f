//! Exact canonical forms for two-colourings of E(K_n), n ≤ 8.

use crate::error::{Error, Result};
use crate::game::{edge_count, edge_index, Player};

pub const MAX_CANON_N: usize = 8;

/// Canonical encoding of (ownership colouring, side to move). Two boards
/// related by a vertex permutation share a key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(pub u64);

/// Edge-index tables for one n.
#[derive(Debug, Clone)]
pub struct Canonizer {
    n: usize,
    ends: Vec<(usize, usize)>,
    index: Vec<Vec<usize>>,
}

impl Canonizer {
    pub fn new(n: usize) -> Result<Canonizer> {
        if !(2..=MAX_CANON_N).contains(&n) {
            return Err(Error::OverCap(format!("canonical keys need 2 ≤ n ≤ {MAX_CANON_N}, got {n}")));
        }
        let mut ends = Vec::with_capacity(edge_count(n));
        let mut index = vec![vec![usize::MAX; n]; n];
        for u in 0..n {
            for v in u + 1..n {
                let i = edge_index(n, u, v);
                debug_assert_eq!(i, ends.len());
                ends.push((u, v));
                index[u][v] = i;
                index[v][u] = i;
            }
        }
        Ok(Canonizer { n, ends, index })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Plain (non-canonical) key from edge masks.
    pub fn raw_key(&self, maker: u64, breaker: u64, to_move: Player) -> u64 {
        let mut code = 0u64;
        for i in 0..self.ends.len() {
            code |= colour(maker, breaker, i) << (2 * i);
        }
        code | (side_bit(to_move) << 62)
    }

    /// Minimum encoding over all vertex relabellings that respect a refined
    /// degree invariant; exact because the invariant is isomorphism-invariant.
    pub fn key(&self, maker: u64, breaker: u64, to_move: Player) -> CanonicalKey {
        let n = self.n;
        let mut inv = [0u64; MAX_CANON_N];
        let mut md = [0u64; MAX_CANON_N];
        let mut bd = [0u64; MAX_CANON_N];
        for (i, &(u, v)) in self.ends.iter().enumerate() {
            if maker >> i & 1 == 1 {
                md[u] += 1;
                md[v] += 1;
            } else if breaker >> i & 1 == 1 {
                bd[u] += 1;
                bd[v] += 1;
            }
        }
        for v in 0..n {
            inv[v] = md[v] << 8 | bd[v];
        }
        // one refinement round: append the sorted invariants of each colour class of neighbours
        let mut refined = [0u64; MAX_CANON_N];
        for v in 0..n {
            let mut mn: Vec<u64> = Vec::with_capacity(n);
            let mut bn: Vec<u64> = Vec::with_capacity(n);
            for w in 0..n {
                if w == v {
                    continue;
                }
                let i = self.index[v][w];
                match colour(maker, breaker, i) {
                    1 => mn.push(inv[w]),
                    2 => bn.push(inv[w]),
                    _ => {}
                }
            }
            mn.sort_unstable();
            bn.sort_unstable();
            refined[v] = fnv(inv[v], &mn, &bn);
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (refined[v], inv[v]));
        let mut cells: Vec<(usize, usize)> = Vec::new();
        let mut start = 0;
        for i in 1..=n {
            if i == n || (refined[order[i]], inv[order[i]]) != (refined[order[start]], inv[order[start]]) {
                cells.push((start, i));
                start = i;
            }
        }
        let mut best = u64::MAX;
        let mut label = [0usize; MAX_CANON_N];
        self.search(&cells, 0, &mut order, &mut label, maker, breaker, &mut best);
        CanonicalKey(best | (side_bit(to_move) << 62))
    }

    #[allow(clippy::too_many_arguments)]
    fn search(
        &self,
        cells: &[(usize, usize)],
        cell: usize,
        order: &mut Vec<usize>,
        label: &mut [usize; MAX_CANON_N],
        maker: u64,
        breaker: u64,
        best: &mut u64,
    ) {
        if cell == cells.len() {
            for (pos, &v) in order.iter().enumerate() {
                label[v] = pos;
            }
            let mut code = 0u64;
            for (i, &(u, v)) in self.ends.iter().enumerate() {
                let c = colour(maker, breaker, i);
                if c != 0 {
                    code |= c << (2 * self.index[label[u]][label[v]]);
                }
            }
            *best = (*best).min(code);
            return;
        }
        let (lo, hi) = cells[cell];
        permute(order, lo, lo, hi, &mut |order| self.search(cells, cell + 1, order, label, maker, breaker, best));
    }
}

/// Heap-free recursive permutation of `order[lo..hi]` in place.
fn permute(order: &mut Vec<usize>, k: usize, lo: usize, hi: usize, f: &mut dyn FnMut(&mut Vec<usize>)) {
    if hi - lo <= 1 || k + 1 >= hi {
        f(order);
        return;
    }
    for i in k..hi {
        order.swap(k, i);
        permute(order, k + 1, lo, hi, f);
        order.swap(k, i);
    }
}

fn colour(maker: u64, breaker: u64, i: usize) -> u64 {
    if maker >> i & 1 == 1 {
        1
    } else if breaker >> i & 1 == 1 {
        2
    } else {
        0
    }
}

fn side_bit(p: Player) -> u64 {
    match p {
        Player::Maker => 0,
        Player::Breaker => 1,
    }
}

fn fnv(seed: u64, a: &[u64], b: &[u64]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64 ^ seed;
    for &x in a.iter().chain(std::iter::once(&u64::MAX)).chain(b) {
        h ^= x;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
