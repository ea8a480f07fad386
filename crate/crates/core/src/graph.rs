//! Graph model: weighted symmetric digraphs, orientations, breaker
//! functions, dipaths and dicycles.
//!
//! Vertices are 1-based integer ids. Edge pairs are stored once per
//! unordered pair `{u, v}` with `u < v`, carrying both arc weights; every
//! positional structure over the pair set (orientations, breakers) is
//! indexed against the pair list sorted by `(u, v)`.

use std::collections::BTreeMap;

use num_traits::Signed;

use crate::rational::{format_rational, Rational};
use crate::Error;

/// 1-based vertex id.
pub type Vertex = u32;

/// One unordered edge pair `{u, v}` with `u < v` and its two arc weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgePair {
    pub u: Vertex,
    pub v: Vertex,
    /// Weight of the arc `u -> v`.
    pub c_uv: Rational,
    /// Weight of the arc `v -> u`.
    pub c_vu: Rational,
}

/// A digraph in which arc `xy` exists iff arc `yx` exists, every arc
/// carrying a positive exact rational weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedSymmetricDigraph {
    n: u32,
    pairs: Vec<EdgePair>,
    index: BTreeMap<(Vertex, Vertex), usize>,
    adj: Vec<Vec<Vertex>>,
}

impl WeightedSymmetricDigraph {
    /// Builds a digraph from explicit edge pairs `(u, v, c_uv, c_vu)`.
    pub fn new(
        n: u32,
        edge_pairs: impl IntoIterator<Item = (Vertex, Vertex, Rational, Rational)>,
    ) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::EmptyVertexSet);
        }
        let mut pairs = Vec::new();
        for (u, v, c_uv, c_vu) in edge_pairs {
            check_endpoints(u, v, n)?;
            if !c_uv.is_positive() {
                return Err(Error::NonPositiveWeight(u, v, format_rational(&c_uv)));
            }
            if !c_vu.is_positive() {
                return Err(Error::NonPositiveWeight(v, u, format_rational(&c_vu)));
            }
            // Normalize so the stored pair has u < v.
            if u < v {
                pairs.push(EdgePair { u, v, c_uv, c_vu });
            } else {
                pairs.push(EdgePair {
                    u: v,
                    v: u,
                    c_uv: c_vu,
                    c_vu: c_uv,
                });
            }
        }
        pairs.sort_by_key(|p| (p.u, p.v));
        let mut index = BTreeMap::new();
        let mut adj = vec![Vec::new(); n as usize + 1];
        for (i, p) in pairs.iter().enumerate() {
            if index.insert((p.u, p.v), i).is_some() {
                return Err(Error::DuplicatePair(p.u, p.v));
            }
            adj[p.u as usize].push(p.v);
            adj[p.v as usize].push(p.u);
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        Ok(Self {
            n,
            pairs,
            index,
            adj,
        })
    }

    pub fn vertex_count(&self) -> u32 {
        self.n
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n
    }

    pub fn pairs(&self) -> &[EdgePair] {
        &self.pairs
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// Index of the pair `{x, y}` in the sorted pair list, together with
    /// whether `(x, y)` is its stored (`u < v`) direction.
    pub fn pair_index(&self, x: Vertex, y: Vertex) -> Option<(usize, bool)> {
        let key = if x < y { (x, y) } else { (y, x) };
        self.index.get(&key).map(|&i| (i, x < y))
    }

    pub fn has_arc(&self, x: Vertex, y: Vertex) -> bool {
        x != y && self.pair_index(x, y).is_some()
    }

    /// Weight of the arc `x -> y`, if it exists.
    pub fn arc_weight(&self, x: Vertex, y: Vertex) -> Option<&Rational> {
        let (i, forward) = self.pair_index(x, y)?;
        let p = &self.pairs[i];
        Some(if forward { &p.c_uv } else { &p.c_vu })
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize]
    }

    /// All arcs in ascending `(tail, head)` order.
    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex, &Rational)> + '_ {
        self.vertices().flat_map(move |x| {
            self.neighbors(x)
                .iter()
                .map(move |&y| (x, y, self.arc_weight(x, y).unwrap()))
        })
    }

    /// `L(G,c)`: the maximum over edge pairs of `c_uv + c_vu`.
    /// Undefined (an error) for an arcless digraph.
    pub fn max_pair_weight(&self) -> Result<Rational, Error> {
        self.pairs
            .iter()
            .map(|p| &p.c_uv + &p.c_vu)
            .max()
            .ok_or(Error::NoArcs)
    }

    /// The edge pair attaining `L(G,c)` (smallest `(u, v)` among ties).
    pub fn max_weight_pair(&self) -> Result<&EdgePair, Error> {
        let l = self.max_pair_weight()?;
        self.pairs
            .iter()
            .find(|p| &p.c_uv + &p.c_vu == l)
            .ok_or(Error::NoArcs)
    }

    /// Sum of all arc weights, over both directions.
    pub fn total_weight(&self) -> Rational {
        self.pairs
            .iter()
            .map(|p| &p.c_uv + &p.c_vu)
            .fold(Rational::from_integer(0.into()), |a, b| a + b)
    }

    /// Connected components of the underlying graph, each sorted
    /// ascending; the components themselves ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        components_of(self.n, |v| self.neighbors(v))
    }

    /// The underlying simple graph (weights dropped).
    pub fn underlying_graph(&self) -> SimpleGraph {
        SimpleGraph::new(self.n, self.pairs.iter().map(|p| (p.u, p.v)))
            .expect("underlying edges already validated")
    }
}

fn check_endpoints(u: Vertex, v: Vertex, n: u32) -> Result<(), Error> {
    if u == v {
        return Err(Error::SelfLoop(u));
    }
    for w in [u, v] {
        if w == 0 || w > n {
            return Err(Error::VertexOutOfRange(w, n));
        }
    }
    Ok(())
}

fn components_of<'a>(n: u32, neighbors: impl Fn(Vertex) -> &'a [Vertex]) -> Vec<Vec<Vertex>> {
    let mut seen = vec![false; n as usize + 1];
    let mut out = Vec::new();
    for start in 1..=n {
        if seen[start as usize] {
            continue;
        }
        let mut comp = vec![start];
        seen[start as usize] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in neighbors(x) {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    comp.push(y);
                    queue.push_back(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// An undirected simple graph given by `n` and a sorted edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: u32,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
}

impl SimpleGraph {
    pub fn new(n: u32, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::EmptyVertexSet);
        }
        let mut list: Vec<(Vertex, Vertex)> = Vec::new();
        for (u, v) in edges {
            check_endpoints(u, v, n)?;
            list.push(if u < v { (u, v) } else { (v, u) });
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePair(w[0].0, w[0].1));
        }
        let mut adj = vec![Vec::new(); n as usize + 1];
        for &(u, v) in &list {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        Ok(Self {
            n,
            edges: list,
            adj,
        })
    }

    pub fn vertex_count(&self) -> u32 {
        self.n
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }

    pub fn components(&self) -> Vec<Vec<Vertex>> {
        components_of(self.n, |v| self.neighbors(v))
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }
}

/// Derives the symmetric digraph of a graph: both arcs per edge, all
/// weights 1.
pub fn derive_symmetric(graph: &SimpleGraph) -> WeightedSymmetricDigraph {
    let one = || Rational::from_integer(1.into());
    WeightedSymmetricDigraph::new(
        graph.vertex_count(),
        graph.edges().iter().map(|&(u, v)| (u, v, one(), one())),
    )
    .expect("derived digraph inherits validity from the graph")
}

/// A choice of direction for every edge pair: `forward[i]` means pair
/// `i = {u, v}` (with `u < v`) is directed `u -> v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    forward: Vec<bool>,
}

impl Orientation {
    pub fn new(forward: Vec<bool>) -> Self {
        Self { forward }
    }

    /// Builds an orientation of `graph` from a list of directed edges,
    /// which must cover every edge exactly once.
    pub fn from_directed_edges(
        graph: &SimpleGraph,
        directed: &[(Vertex, Vertex)],
    ) -> Result<Self, Error> {
        let mut forward: Vec<Option<bool>> = vec![None; graph.edge_count()];
        for &(x, y) in directed {
            let key = if x < y { (x, y) } else { (y, x) };
            let i = graph
                .edges()
                .binary_search(&key)
                .map_err(|_| Error::MissingArc(x, y))?;
            if forward[i].is_some() {
                return Err(Error::DuplicatePair(key.0, key.1));
            }
            forward[i] = Some(x < y);
        }
        let forward: Option<Vec<bool>> = forward.into_iter().collect();
        forward.map(|f| Self { forward: f }).ok_or({
            Error::DomainMismatch {
                expected: graph.edge_count(),
                found: directed.len(),
            }
        })
    }

    /// Orients every edge from its smaller to its larger endpoint.
    /// Always acyclic.
    pub fn lexicographic(edge_count: usize) -> Self {
        Self {
            forward: vec![true; edge_count],
        }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// Whether pair `i` is directed from its smaller endpoint to its
    /// larger one.
    pub fn is_forward(&self, i: usize) -> bool {
        self.forward[i]
    }

    /// Whether the edge `{x, y}` is directed `x -> y`. `i` is the pair
    /// index of `{x, y}` in the owning graph.
    pub fn directs(&self, i: usize, x: Vertex, y: Vertex) -> bool {
        self.forward[i] == (x < y)
    }

    pub fn reversed(&self) -> Self {
        Self {
            forward: self.forward.iter().map(|b| !b).collect(),
        }
    }
}

/// A 0/1 labeling of arcs with `T(xy) + T(yx) = 1` per edge pair.
/// `bits[i]` is `T(u -> v)` for pair `i = {u, v}` with `u < v`; the
/// reverse arc's value is implied.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BreakerFunction {
    bits: Vec<bool>,
}

impl BreakerFunction {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// The breaker with encoding `k` over `m` pairs: pair `i` has
    /// `T(u_i -> v_i) = 1` iff bit `i` of `k` is set. Enumerating
    /// `k = 0..2^m` in ascending order visits breakers in canonical
    /// (lexicographically smallest encoding first) order.
    pub fn from_index(k: u64, m: usize) -> Self {
        Self {
            bits: (0..m).map(|i| k >> i & 1 == 1).collect(),
        }
    }

    pub fn index(&self) -> u64 {
        self.bits
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | (u64::from(b) << i))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// `T(u_i -> v_i)` for pair `i` as a bool.
    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn validate_for(&self, g: &WeightedSymmetricDigraph) -> Result<(), Error> {
        if self.bits.len() == g.pair_count() {
            Ok(())
        } else {
            Err(Error::DomainMismatch {
                expected: g.pair_count(),
                found: self.bits.len(),
            })
        }
    }

    /// `T(x -> y)` as 0 or 1.
    pub fn value(&self, g: &WeightedSymmetricDigraph, x: Vertex, y: Vertex) -> Result<u8, Error> {
        let (i, forward) = g.pair_index(x, y).ok_or(Error::MissingArc(x, y))?;
        Ok(u8::from(self.bits[i] == forward))
    }

    /// The arcs with `T = 1`, in pair order; these form an orientation of
    /// the underlying graph.
    pub fn forward_arcs(&self, g: &WeightedSymmetricDigraph) -> Vec<(Vertex, Vertex)> {
        g.pairs()
            .iter()
            .zip(&self.bits)
            .map(|(p, &b)| if b { (p.u, p.v) } else { (p.v, p.u) })
            .collect()
    }

    pub fn to_orientation(&self) -> Orientation {
        Orientation::new(self.bits.clone())
    }
}

/// `T(xy) = 1` iff the orientation directs `{x, y}` as `x -> y`.
pub fn breaker_from_orientation(
    g: &WeightedSymmetricDigraph,
    omega: &Orientation,
) -> Result<BreakerFunction, Error> {
    if omega.len() != g.pair_count() {
        return Err(Error::DomainMismatch {
            expected: g.pair_count(),
            found: omega.len(),
        });
    }
    Ok(BreakerFunction::new(
        (0..omega.len()).map(|i| omega.is_forward(i)).collect(),
    ))
}

/// Flips `T` on every arc; the result is again a breaker function.
pub fn breaker_complement(t: &BreakerFunction) -> BreakerFunction {
    BreakerFunction::new(t.bits.iter().map(|b| !b).collect())
}

/// A directed path on distinct vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dipath {
    vertices: Vec<Vertex>,
}

impl Dipath {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self, Error> {
        if vertices.is_empty() {
            return Err(Error::InvalidInput("empty dipath".into()));
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("dipath repeats a vertex".into()));
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn validate_in(&self, g: &WeightedSymmetricDigraph) -> Result<(), Error> {
        for w in self.vertices.windows(2) {
            if !g.has_arc(w[0], w[1]) {
                return Err(Error::MissingArc(w[0], w[1]));
            }
        }
        Ok(())
    }
}

/// A directed cycle on distinct vertices, stored in canonical form:
/// rotated so the smallest vertex id comes first, traversal direction
/// preserved. A dicycle and its reversal are distinct objects.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dicycle {
    vertices: Vec<Vertex>,
}

impl Dicycle {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self, Error> {
        if vertices.len() < 2 {
            return Err(Error::InvalidInput(
                "a dicycle visits at least 2 vertices".into(),
            ));
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("dicycle repeats a vertex".into()));
        }
        Ok(Self {
            vertices: canonical_rotation(vertices),
        })
    }

    /// The vertex sequence `v_1, ..., v_k` (the closing arc `v_k -> v_1`
    /// is implicit); `v_1` is the minimum id.
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Consecutive arcs `(v_i, v_{i+1})` including the closing arc.
    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let k = self.vertices.len();
        (0..k).map(move |i| (self.vertices[i], self.vertices[(i + 1) % k]))
    }

    /// The same closed walk traversed in the opposite direction.
    pub fn reversed(&self) -> Dicycle {
        let mut vs = self.vertices.clone();
        vs.reverse();
        Dicycle {
            vertices: canonical_rotation(vs),
        }
    }

    pub fn validate_in(&self, g: &WeightedSymmetricDigraph) -> Result<(), Error> {
        for (x, y) in self.arcs() {
            if !g.has_arc(x, y) {
                return Err(Error::MissingArc(x, y));
            }
        }
        Ok(())
    }
}

fn canonical_rotation(vertices: Vec<Vertex>) -> Vec<Vertex> {
    let min_pos = vertices
        .iter()
        .enumerate()
        .min_by_key(|&(_, v)| v)
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut rotated = Vec::with_capacity(vertices.len());
    rotated.extend_from_slice(&vertices[min_pos..]);
    rotated.extend_from_slice(&vertices[..min_pos]);
    rotated
}
