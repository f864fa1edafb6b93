//! Undirected simple graphs over dense vertex ids `0..n`, BFS distances and
//! the s-club test.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Set of vertex ids. Ordered so that serialized output is canonical.
pub type VertexSet = BTreeSet<usize>;

/// Shortest-path length; unreachable pairs are `Infinite`.
///
/// The derived ordering puts every finite distance below `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dist {
    Finite(usize),
    Infinite,
}

impl Dist {
    pub fn is_finite(self) -> bool {
        matches!(self, Dist::Finite(_))
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Dist::Finite(d) => Some(d),
            Dist::Infinite => None,
        }
    }

    /// `true` when this distance is at most `bound`.
    pub fn within(self, bound: usize) -> bool {
        matches!(self, Dist::Finite(d) if d <= bound)
    }
}

/// Serialized as a number, or `null` when infinite.
impl Serialize for Dist {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.finite().serialize(ser)
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

/// Undirected simple graph. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    // sorted adjacency lists
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list. Rejects self-loops, duplicate edges
    /// (in either orientation) and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Graph {
            adj,
            m: edges.len(),
        })
    }

    /// Like [`Graph::from_edges`] but silently merges duplicate edges.
    pub(crate) fn from_edge_set(n: usize, edges: &BTreeSet<(usize, usize)>) -> Result<Self> {
        let list: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        Graph::from_edges(n, &list)
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Graph::from_edges(n, &edges).expect("complete graph edges are valid")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::from_edges(n, &edges).expect("path edges are valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((0, n - 1));
        Graph::from_edges(n, &edges).expect("cycle edges are valid")
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Graph::from_edges(leaves + 1, &edges).expect("star edges are valid")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn vertices(&self) -> VertexSet {
        (0..self.n()).collect()
    }

    /// Complement graph on the same vertex set.
    pub fn complement(&self) -> Graph {
        let n = self.n();
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !self.has_edge(u, v))
            .collect();
        Graph::from_edges(n, &edges).expect("complement edges are valid")
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            });
        }
        Ok(())
    }

    fn check_set(&self, s: &VertexSet) -> Result<()> {
        match s.iter().next_back() {
            Some(&max) => self.check_vertex(max),
            None => Ok(()),
        }
    }

    /// Distances from `source` to every vertex.
    pub fn bfs_distances(&self, source: usize) -> Result<Vec<Dist>> {
        self.check_vertex(source)?;
        let mut dist = vec![Dist::Infinite; self.n()];
        dist[source] = Dist::Finite(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let Dist::Finite(du) = dist[u] else {
                unreachable!()
            };
            for &w in &self.adj[u] {
                if dist[w] == Dist::Infinite {
                    dist[w] = Dist::Finite(du + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// Single-pair distance.
    pub fn distance(&self, u: usize, v: usize) -> Result<Dist> {
        self.check_vertex(v)?;
        Ok(self.bfs_distances(u)?[v])
    }

    /// Row-per-source distance matrix (one BFS per vertex).
    pub fn all_pairs_distances(&self) -> Vec<Vec<Dist>> {
        (0..self.n())
            .map(|v| self.bfs_distances(v).expect("vertex in range"))
            .collect()
    }

    /// Largest pairwise distance. The empty graph has diameter 0; a
    /// disconnected graph has diameter `Infinite`.
    pub fn diameter(&self) -> Dist {
        let mut best = Dist::Finite(0);
        for v in 0..self.n() {
            let far = self
                .bfs_distances(v)
                .expect("vertex in range")
                .into_iter()
                .max()
                .unwrap_or(Dist::Finite(0));
            if far == Dist::Infinite {
                return Dist::Infinite;
            }
            best = best.max(far);
        }
        best
    }

    /// Vertices within distance `radius` of `v`. Radius 1 gives `N[v]`.
    pub fn ball(&self, v: usize, radius: usize) -> Result<VertexSet> {
        Ok(self
            .bfs_distances(v)?
            .into_iter()
            .enumerate()
            .filter(|(_, d)| d.within(radius))
            .map(|(u, _)| u)
            .collect())
    }

    /// Closed neighborhood `N[v]`.
    pub fn closed_neighborhood(&self, v: usize) -> Result<VertexSet> {
        self.check_vertex(v)?;
        let mut set: VertexSet = self.adj[v].iter().copied().collect();
        set.insert(v);
        Ok(set)
    }

    /// Union of closed neighborhoods of `set`.
    pub fn closed_neighborhood_of_set(&self, set: &VertexSet) -> Result<VertexSet> {
        self.check_set(set)?;
        let mut out = set.clone();
        for &v in set {
            out.extend(self.adj[v].iter().copied());
        }
        Ok(out)
    }

    /// Subgraph induced by `set`. The returned vector maps each new vertex id
    /// to its id in `self`; members keep their relative order.
    pub fn induced_subgraph(&self, set: &VertexSet) -> Result<(Graph, Vec<usize>)> {
        self.check_set(set)?;
        let old_of_new: Vec<usize> = set.iter().copied().collect();
        let mut new_of_old = vec![usize::MAX; self.n()];
        for (i, &v) in old_of_new.iter().enumerate() {
            new_of_old[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in old_of_new.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = new_of_old[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        let g = Graph::from_edges(old_of_new.len(), &edges)?;
        Ok((g, old_of_new))
    }

    /// First pair (in vertex order) whose distance inside `G[set]` exceeds
    /// `s`, with that distance. `None` means `set` induces an s-club.
    pub fn far_pair(&self, set: &VertexSet, s: usize) -> Result<Option<(usize, usize, Dist)>> {
        let (sub, old) = self.induced_subgraph(set)?;
        for u in 0..sub.n() {
            let dist = sub.bfs_distances(u)?;
            if let Some((w, d)) = dist
                .into_iter()
                .enumerate()
                .skip(u + 1)
                .find(|(_, d)| !d.within(s))
            {
                return Ok(Some((old[u], old[w], d)));
            }
        }
        Ok(None)
    }

    /// Whether `G[set]` has diameter at most `s`. Disconnected sets are never
    /// clubs; the empty set is rejected.
    pub fn is_s_club(&self, set: &VertexSet, s: usize) -> Result<bool> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        if s == 0 {
            return Err(Error::InvalidInput("club parameter s must be >= 1".into()));
        }
        Ok(self.far_pair(set, s)?.is_none())
    }

    /// Whether every vertex is in `set` or adjacent to a member.
    pub fn is_dominating(&self, set: &VertexSet) -> Result<bool> {
        Ok(self.first_undominated(set)?.is_none())
    }

    pub(crate) fn first_undominated(&self, set: &VertexSet) -> Result<Option<usize>> {
        let covered = self.closed_neighborhood_of_set(set)?;
        Ok((0..self.n()).find(|v| !covered.contains(v)))
    }

    /// Whether `set` induces a complete subgraph.
    pub fn is_clique(&self, set: &VertexSet) -> Result<bool> {
        self.check_set(set)?;
        let members: Vec<usize> = set.iter().copied().collect();
        Ok(members
            .iter()
            .enumerate()
            .all(|(i, &u)| members[i + 1..].iter().all(|&v| self.has_edge(u, v))))
    }
}
