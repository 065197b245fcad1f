//! Distances, balls, diameter, degrees and expansion on simple graphs.

use std::collections::VecDeque;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::Edge;

/// A shortest-path length. `Infinite` orders after every finite length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dist {
    Finite(usize),
    Infinite,
}

impl Dist {
    pub fn finite(self) -> Option<usize> {
        match self {
            Dist::Finite(d) => Some(d),
            Dist::Infinite => None,
        }
    }

    pub fn is_within(self, d: usize) -> bool {
        matches!(self, Dist::Finite(x) if x <= d)
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Finite(d) => write!(f, "{d}"),
            Dist::Infinite => f.write_str("inf"),
        }
    }
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    edges: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Graph {
        Graph { n, adj: vec![Vec::new(); n], edges: 0 }
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert(Edge::new(u, v));
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Graph> {
        let mut g = Graph::empty(n);
        for e in edges {
            g.add_edge(e)?;
        }
        Ok(g)
    }

    /// Adds `e`; returns whether it was new.
    pub fn add_edge(&mut self, e: Edge) -> Result<bool> {
        if e.v() >= self.n {
            return Err(Error::VertexOutOfRange { vertex: e.v(), n: self.n });
        }
        if self.has_edge(e.u(), e.v()) {
            return Ok(false);
        }
        self.insert(e);
        Ok(true)
    }

    /// Unchecked insert for callers that already guarantee validity and novelty.
    pub(crate) fn insert(&mut self, e: Edge) {
        self.adj[e.u()].push(e.v());
        self.adj[e.v()].push(e.u());
        self.edges += 1;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        let (a, b) = if self.adj[x].len() <= self.adj[y].len() { (x, y) } else { (y, x) };
        self.adj[a].contains(&b)
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.edges);
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push(Edge::new(u, v));
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }

    /// BFS distances from `src` to every vertex.
    pub fn distances_from(&self, src: usize) -> Result<Vec<Dist>> {
        self.check_vertex(src)?;
        Ok(bfs(self.n, src, |v| self.adj[v].iter().copied(), usize::MAX))
    }

    pub fn dist(&self, u: usize, v: usize) -> Result<Dist> {
        self.check_vertex(v)?;
        Ok(self.distances_from(u)?[v])
    }

    /// `B_i(v)`: all vertices within distance `radius` of `v`, sorted.
    pub fn ball(&self, v: usize, radius: usize) -> Result<Vec<usize>> {
        self.check_vertex(v)?;
        let d = bfs(self.n, v, |x| self.adj[x].iter().copied(), radius);
        Ok((0..self.n).filter(|&w| d[w].is_within(radius)).collect())
    }

    pub fn diameter(&self) -> Result<Dist> {
        if self.n < 2 {
            return Err(Error::InvalidParameters(format!("diameter needs n >= 2, got {}", self.n)));
        }
        if self.edges + 1 < self.n {
            return Ok(Dist::Infinite);
        }
        let mut best = 0;
        for v in 0..self.n {
            let d = bfs(self.n, v, |x| self.adj[x].iter().copied(), usize::MAX);
            for x in d {
                match x {
                    Dist::Infinite => return Ok(Dist::Infinite),
                    Dist::Finite(k) => best = best.max(k),
                }
            }
        }
        Ok(Dist::Finite(best))
    }

    /// True iff every pair of vertices is within distance `d`.
    pub fn diameter_at_most(&self, d: usize) -> bool {
        if self.n < 2 {
            return true;
        }
        if self.edges + 1 < self.n || self.adj.iter().any(|a| a.is_empty()) {
            return false;
        }
        (0..self.n).all(|v| {
            let dist = bfs(self.n, v, |x| self.adj[x].iter().copied(), d);
            dist.iter().all(|x| x.is_within(d))
        })
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let degrees: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let min = degrees.iter().copied().min().unwrap_or(0);
        let max = degrees.iter().copied().max().unwrap_or(0);
        DegreeProfile { degrees, min, max }
    }

    /// True iff every disjoint pair `(R, S)` with `|R| = r`, `|S| = s` has an edge between them.
    ///
    /// Enumerates only the `R` sets: `(R, S)` fails exactly when at least `s`
    /// vertices outside `R` have no neighbour in `R`.
    pub fn has_expansion(&self, r: usize, s: usize) -> Result<bool> {
        if r < 1 || s < 1 || r + s > self.n {
            return Err(Error::InvalidParameters(format!("need 1 <= r, s and r + s <= n; got r={r}, s={s}, n={}", self.n)));
        }
        let mut touched = vec![false; self.n];
        for rset in (0..self.n).combinations(r) {
            touched.iter_mut().for_each(|t| *t = false);
            for &x in &rset {
                touched[x] = true;
                for &y in &self.adj[x] {
                    touched[y] = true;
                }
            }
            let lonely = touched.iter().filter(|&&t| !t).count();
            if lonely >= s {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub degrees: Vec<usize>,
    pub min: usize,
    pub max: usize,
}

/// Generic BFS with an optional depth limit; vertices beyond the limit stay `Infinite`.
pub(crate) fn bfs<I, F>(n: usize, src: usize, mut nbrs: F, limit: usize) -> Vec<Dist>
where
    F: FnMut(usize) -> I,
    I: Iterator<Item = usize>,
{
    let mut dist = vec![Dist::Infinite; n];
    let mut raw = vec![usize::MAX; n];
    raw[src] = 0;
    dist[src] = Dist::Finite(0);
    let mut q = VecDeque::from([src]);
    while let Some(x) = q.pop_front() {
        let dx = raw[x];
        if dx >= limit {
            continue;
        }
        for y in nbrs(x) {
            if raw[y] == usize::MAX {
                raw[y] = dx + 1;
                dist[y] = Dist::Finite(dx + 1);
                q.push_back(y);
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (0..n - 1).map(|i| Edge::new(i, i + 1))).unwrap()
    }

    #[test]
    fn dist_examples() {
        let p = path(4);
        assert_eq!(p.dist(0, 3).unwrap(), Dist::Finite(3));
        assert_eq!(p.dist(2, 2).unwrap(), Dist::Finite(0));
        assert_eq!(Graph::empty(2).dist(0, 1).unwrap(), Dist::Infinite);
        assert!(matches!(p.dist(0, 9), Err(Error::VertexOutOfRange { .. })));
        assert!(Dist::Finite(1_000_000) < Dist::Infinite);
    }

    #[test]
    fn ball_examples() {
        let p = path(4);
        assert_eq!(p.ball(0, 2).unwrap(), vec![0, 1, 2]);
        assert_eq!(p.ball(3, 0).unwrap(), vec![3]);
        assert_eq!(Graph::complete(5).ball(0, 1).unwrap(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(Graph::complete(6).diameter().unwrap(), Dist::Finite(1));
        let star = Graph::from_edges(4, [Edge::new(0, 1), Edge::new(0, 2), Edge::new(0, 3)]).unwrap();
        assert_eq!(star.diameter().unwrap(), Dist::Finite(2));
        let iso = Graph::from_edges(4, [Edge::new(0, 1), Edge::new(1, 2)]).unwrap();
        assert_eq!(iso.diameter().unwrap(), Dist::Infinite);
        assert!(Graph::empty(1).diameter().is_err());
    }

    #[test]
    fn degree_examples() {
        let k4 = Graph::complete(4).degree_profile();
        assert_eq!((k4.degrees.clone(), k4.min, k4.max), (vec![3; 4], 3, 3));
        assert_eq!(Graph::empty(3).degree_profile().degrees, vec![0, 0, 0]);
        assert_eq!(path(3).degree_profile().degrees, vec![1, 2, 1]);
    }

    #[test]
    fn expansion_examples() {
        let matching = Graph::from_edges(4, [Edge::new(0, 1), Edge::new(2, 3)]).unwrap();
        assert!(!matching.has_expansion(1, 2).unwrap());
        assert!(Graph::complete(6).has_expansion(2, 3).unwrap());
        assert!(!Graph::empty(3).has_expansion(1, 1).unwrap());
        assert!(Graph::complete(4).has_expansion(3, 2).is_err());
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (2usize..8).prop_flat_map(|n| {
            let m = n * (n - 1) / 2;
            proptest::collection::vec(any::<bool>(), m).prop_map(move |bits| {
                let edges = crate::game::all_edges(n).into_iter().zip(bits).filter(|(_, b)| *b).map(|(e, _)| e);
                Graph::from_edges(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn balls_are_nested(g in arb_graph(), v_seed in 0usize..8) {
            let v = v_seed % g.n();
            for i in 0..g.n() {
                let inner = g.ball(v, i).unwrap();
                let outer = g.ball(v, i + 1).unwrap();
                prop_assert!(inner.iter().all(|x| outer.contains(x)));
            }
        }

        #[test]
        fn diameter_ball_duality(g in arb_graph(), d in 0usize..6) {
            let by_diam = g.diameter().unwrap().is_within(d);
            let by_ball = (0..g.n()).all(|v| g.ball(v, d).unwrap().len() == g.n());
            prop_assert_eq!(by_diam, by_ball);
            prop_assert_eq!(by_diam, g.diameter_at_most(d));
        }

        #[test]
        fn unit_expansion_iff_complete(g in arb_graph()) {
            let complete = g.edge_count() == g.n() * (g.n() - 1) / 2;
            prop_assert_eq!(g.has_expansion(1, 1).unwrap(), complete);
        }

        #[test]
        fn adding_an_edge_is_monotone(g in arb_graph(), pick in 0usize..64) {
            let n = g.n();
            let missing: Vec<Edge> = crate::game::all_edges(n).into_iter().filter(|e| !g.has_edge(e.u(), e.v())).collect();
            prop_assume!(!missing.is_empty());
            let mut h = g.clone();
            h.add_edge(missing[pick % missing.len()]).unwrap();
            for v in 0..n {
                let dg = g.distances_from(v).unwrap();
                let dh = h.distances_from(v).unwrap();
                prop_assert!(dg.iter().zip(&dh).all(|(a, b)| b <= a));
                prop_assert!(h.neighbors(v).len() >= g.neighbors(v).len());
            }
            for r in 1..n {
                for s in 1..=(n - r) {
                    if g.has_expansion(r, s).unwrap() {
                        prop_assert!(h.has_expansion(r, s).unwrap());
                    }
                }
            }
        }
    }
}
