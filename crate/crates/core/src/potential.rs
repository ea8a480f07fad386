//! Spanning-tree potentials and the coloring construction built on them.
//!
//! Fixing a breaker `T` and modulus `r` reduces each arc weight to
//! `c_xy - r * T(xy)`. A rooted spanning tree of a component assigns
//! every vertex the reduced weight of its root path, and a local search
//! re-hangs subtrees while any arc `y -> x` with `y` outside the subtree
//! of `x` would raise `x`'s potential. At a local maximum the potentials
//! taken mod `r` are the constructed coloring; they form a valid
//! circular `r`-coloring whenever `r` is at least `L(G,c)` and every
//! dangerous cycle has ratio at most `r`.

use std::collections::{BTreeMap, VecDeque};

use num_traits::{Signed, Zero};

use crate::graph::{BreakerFunction, Vertex, WeightedSymmetricDigraph};
use crate::rational::{format_rational, mod_r, Rational};
use crate::Error;

/// Arc weights reduced by the breaker: `c_xy - r * T(xy)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedWeights {
    r: Rational,
    weights: BTreeMap<(Vertex, Vertex), Rational>,
}

impl ReducedWeights {
    pub fn new(
        g: &WeightedSymmetricDigraph,
        t: &BreakerFunction,
        r: Rational,
    ) -> Result<Self, Error> {
        t.validate_for(g)?;
        if !r.is_positive() {
            return Err(Error::NonPositiveModulus(format_rational(&r)));
        }
        let mut weights = BTreeMap::new();
        for (x, y, c) in g.arcs() {
            let w = if t.value(g, x, y)? == 1 {
                c - &r
            } else {
                c.clone()
            };
            weights.insert((x, y), w);
        }
        Ok(Self { r, weights })
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    pub fn weight(&self, x: Vertex, y: Vertex) -> Option<&Rational> {
        self.weights.get(&(x, y))
    }

    /// All arcs with their reduced weights in ascending `(tail, head)`
    /// order.
    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex, &Rational)> {
        self.weights.iter().map(|(&(x, y), w)| (x, y, w))
    }
}

/// A rooted spanning tree of one component with the potential of every
/// vertex: 0 at the root, and parent potential plus the reduced weight
/// of the parent-to-child arc below it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PotentialTree {
    root: Vertex,
    vertices: Vec<Vertex>,
    parent: BTreeMap<Vertex, Vertex>,
    children: BTreeMap<Vertex, Vec<Vertex>>,
    f: BTreeMap<Vertex, Rational>,
    tin: BTreeMap<Vertex, u32>,
    tout: BTreeMap<Vertex, u32>,
}

impl PotentialTree {
    /// Breadth-first spanning tree of `component` rooted at its lowest
    /// vertex, with neighbors attached in ascending order.
    fn grow(
        g: &WeightedSymmetricDigraph,
        rw: &ReducedWeights,
        component: &[Vertex],
    ) -> Result<Self, Error> {
        let mut vertices = component.to_vec();
        vertices.sort_unstable();
        vertices.dedup();
        if vertices.is_empty() {
            return Err(Error::InvalidInput("empty component".into()));
        }
        for &v in &vertices {
            if v == 0 || v > g.vertex_count() {
                return Err(Error::VertexOutOfRange(v, g.vertex_count()));
            }
        }

        let root = vertices[0];
        let mut parent = BTreeMap::new();
        let mut children: BTreeMap<Vertex, Vec<Vertex>> =
            vertices.iter().map(|&v| (v, Vec::new())).collect();
        let mut f = BTreeMap::from([(root, Rational::zero())]);
        let mut queue = VecDeque::from([root]);
        while let Some(p) = queue.pop_front() {
            for &v in g.neighbors(p) {
                if !children.contains_key(&v) || f.contains_key(&v) {
                    continue;
                }
                let w = rw.weight(p, v).expect("neighbor arcs exist");
                let fv = &f[&p] + w;
                f.insert(v, fv);
                parent.insert(v, p);
                children.get_mut(&p).expect("p is in the component").push(v);
                queue.push_back(v);
            }
        }
        if f.len() != vertices.len() {
            let unreached: Vec<Vertex> = vertices
                .iter()
                .copied()
                .filter(|v| !f.contains_key(v))
                .collect();
            return Err(Error::DisconnectedComponent(unreached));
        }

        let mut tree = Self {
            root,
            vertices,
            parent,
            children,
            f,
            tin: BTreeMap::new(),
            tout: BTreeMap::new(),
        };
        tree.renumber();
        Ok(tree)
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent.get(&v).copied()
    }

    pub fn children(&self, v: Vertex) -> &[Vertex] {
        self.children.get(&v).map_or(&[], Vec::as_slice)
    }

    pub fn potential(&self, v: Vertex) -> &Rational {
        &self.f[&v]
    }

    pub fn potentials(&self) -> &BTreeMap<Vertex, Rational> {
        &self.f
    }

    /// Sum of all potentials; the quantity the local search raises.
    pub fn weight(&self) -> Rational {
        self.f.values().fold(Rational::zero(), |acc, v| acc + v)
    }

    pub fn in_subtree(&self, ancestor: Vertex, v: Vertex) -> bool {
        self.tin[&ancestor] <= self.tin[&v] && self.tout[&v] <= self.tout[&ancestor]
    }

    /// Entry/exit renumbering for subtree tests, depth first in child
    /// order.
    fn renumber(&mut self) {
        self.tin.clear();
        self.tout.clear();
        let mut clock = 0u32;
        let mut stack = vec![(self.root, false)];
        while let Some((v, done)) = stack.pop() {
            if done {
                self.tout.insert(v, clock);
                clock += 1;
                continue;
            }
            self.tin.insert(v, clock);
            clock += 1;
            stack.push((v, true));
            for &c in self.children(v).iter().rev() {
                stack.push((c, false));
            }
        }
    }

    /// First improving exchange in ascending `(y, x)` arc order: an arc
    /// `y -> x` with `x` not the root, `y` outside the subtree of `x`,
    /// and `f(y) + w(yx) > f(x)`.
    fn improving_move(&self, rw: &ReducedWeights) -> Option<(Vertex, Vertex, Rational)> {
        for (y, x, w) in rw.arcs() {
            if x == self.root || !self.f.contains_key(&y) {
                continue;
            }
            if self.in_subtree(x, y) {
                continue;
            }
            let lifted = &self.f[&y] + w;
            if lifted > self.f[&x] {
                let delta = lifted - &self.f[&x];
                return Some((y, x, delta));
            }
        }
        None
    }

    /// Whether no exchange can raise any potential.
    pub fn is_locally_maximal(&self, rw: &ReducedWeights) -> bool {
        self.improving_move(rw).is_none()
    }

    /// Re-hangs `x` (with its whole subtree) under `y`, lifting every
    /// subtree potential by `delta`.
    fn rehang(&mut self, y: Vertex, x: Vertex, delta: &Rational) {
        let old = self.parent.insert(x, y).expect("x is not the root");
        let siblings = self.children.get_mut(&old).expect("old parent tracked");
        siblings.retain(|&c| c != x);
        let adopted = self.children.get_mut(&y).expect("y is in the component");
        adopted.push(x);
        adopted.sort_unstable();

        let mut stack = vec![x];
        while let Some(v) = stack.pop() {
            *self.f.get_mut(&v).expect("subtree potentials exist") += delta;
            stack.extend_from_slice(self.children.get(&v).map_or(&[], Vec::as_slice));
        }
        self.renumber();
    }
}

/// Local search over one component: repeat the first improving exchange
/// until none remains. Terminates because the tree weight strictly
/// increases and the trees on a fixed root are finite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentSearch {
    tree: PotentialTree,
    weight_log: Vec<Rational>,
}

impl ComponentSearch {
    pub fn run(
        g: &WeightedSymmetricDigraph,
        rw: &ReducedWeights,
        component: &[Vertex],
    ) -> Result<Self, Error> {
        let mut tree = PotentialTree::grow(g, rw, component)?;
        let mut weight_log = vec![tree.weight()];
        while let Some((y, x, delta)) = tree.improving_move(rw) {
            tree.rehang(y, x, &delta);
            weight_log.push(tree.weight());
        }
        Ok(Self { tree, weight_log })
    }

    pub fn tree(&self) -> &PotentialTree {
        &self.tree
    }

    /// Tree weight after growth and after each exchange; strictly
    /// increasing.
    pub fn weight_log(&self) -> &[Rational] {
        &self.weight_log
    }

    pub fn moves(&self) -> usize {
        self.weight_log.len() - 1
    }
}

/// The coloring produced by locally maximal potentials, with the
/// per-component searches that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionOutcome {
    pub modulus: Rational,
    pub colors: BTreeMap<Vertex, Rational>,
    pub components: Vec<ComponentSearch>,
}

/// Builds the candidate circular `r`-coloring for breaker `t`:
/// per-component locally maximal potentials taken mod `r`.
///
/// Requires `r >= L(G,c)` whenever the digraph has arcs; validity of the
/// result is a separate check and is guaranteed only when additionally
/// every dangerous cycle has `|C|_c / |C|_T <= r`.
pub fn construct_coloring(
    g: &WeightedSymmetricDigraph,
    t: &BreakerFunction,
    r: &Rational,
) -> Result<ConstructionOutcome, Error> {
    if !r.is_positive() {
        return Err(Error::NonPositiveModulus(format_rational(r)));
    }
    if g.pair_count() > 0 {
        let l = g.max_pair_weight()?;
        if *r < l {
            let p = g.max_weight_pair()?;
            return Err(Error::BelowPairBound {
                r: format_rational(r),
                l: format_rational(&l),
                u: p.u,
                v: p.v,
            });
        }
    }
    let rw = ReducedWeights::new(g, t, r.clone())?;
    let mut colors = BTreeMap::new();
    let mut components = Vec::new();
    for component in g.components() {
        let search = ComponentSearch::run(g, &rw, &component)?;
        for (&v, fv) in search.tree().potentials() {
            colors.insert(v, mod_r(fv, r)?);
        }
        components.push(search);
    }
    Ok(ConstructionOutcome {
        modulus: r.clone(),
        colors,
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{derive_symmetric, SimpleGraph};
    use crate::rational::rat;
    use proptest::prelude::*;

    fn cycle_graph(n: u32) -> SimpleGraph {
        let edges = (1..n).map(|i| (i, i + 1)).chain([(1, n)]);
        SimpleGraph::new(n, edges).unwrap()
    }

    /// Direct validity check of the circular coloring constraint
    /// `(phi(y) - phi(x)) mod r >= c_xy` on every arc.
    fn is_valid(
        g: &WeightedSymmetricDigraph,
        colors: &BTreeMap<Vertex, Rational>,
        r: &Rational,
    ) -> bool {
        g.arcs().all(|(x, y, c)| {
            let gap = mod_r(&(&colors[&y] - &colors[&x]), r).unwrap();
            gap >= *c
        })
    }

    #[test]
    fn single_pair_reaches_a_tight_coloring() {
        let g = WeightedSymmetricDigraph::new(2, [(1, 2, rat(3, 2), rat(1, 2))]).unwrap();
        for k in 0..2 {
            let t = BreakerFunction::from_index(k, 1);
            let out = construct_coloring(&g, &t, &rat(2, 1)).unwrap();
            assert_eq!(out.colors[&1], rat(0, 1));
            assert_eq!(out.colors[&2], rat(3, 2));
            assert!(is_valid(&g, &out.colors, &rat(2, 1)));
            assert_eq!(out.components.len(), 1);
        }
    }

    #[test]
    fn triangle_at_three_makes_one_exchange() {
        let g = derive_symmetric(&SimpleGraph::new(3, [(1, 2), (2, 3), (1, 3)]).unwrap());
        let t = BreakerFunction::from_index(0b111, 3);
        let out = construct_coloring(&g, &t, &rat(3, 1)).unwrap();
        let search = &out.components[0];
        assert_eq!(search.moves(), 1);
        assert_eq!(search.weight_log(), &[rat(-4, 1), rat(-3, 1)]);
        assert_eq!(out.colors[&1], rat(0, 1));
        assert_eq!(out.colors[&2], rat(2, 1));
        assert_eq!(out.colors[&3], rat(1, 1));
        assert!(is_valid(&g, &out.colors, &rat(3, 1)));
    }

    #[test]
    fn pentagon_at_five_halves() {
        let g = derive_symmetric(&cycle_graph(5));
        // T = 1 along 1 -> 2 -> 3 -> 4 -> 5 -> 1; no dangerous cycles at
        // r = 5/2, so the construction must come out valid.
        let t = BreakerFunction::from_index(0b11101, 5);
        let r = rat(5, 2);
        let out = construct_coloring(&g, &t, &r).unwrap();
        let search = &out.components[0];
        assert_eq!(search.moves(), 2);
        assert_eq!(
            search.weight_log(),
            &[rat(-3, 2), rat(9, 2), rat(10, 1)]
        );
        let tree = search.tree();
        assert!(tree.is_locally_maximal(&ReducedWeights::new(&g, &t, r.clone()).unwrap()));
        assert_eq!(tree.root(), 1);
        assert_eq!(tree.parent(2), Some(3));
        assert_eq!(tree.parent(3), Some(4));
        assert_eq!(tree.parent(4), Some(5));
        assert_eq!(tree.parent(5), Some(1));
        let expect: BTreeMap<Vertex, Rational> = [
            (1, rat(0, 1)),
            (2, rat(3, 2)),
            (3, rat(1, 2)),
            (4, rat(2, 1)),
            (5, rat(1, 1)),
        ]
        .into();
        assert_eq!(out.colors, expect);
        assert!(is_valid(&g, &out.colors, &r));
    }

    #[test]
    fn components_get_independent_roots() {
        let g = derive_symmetric(&SimpleGraph::new(5, [(1, 2), (4, 5)]).unwrap());
        let t = BreakerFunction::from_index(0b11, 2);
        let out = construct_coloring(&g, &t, &rat(2, 1)).unwrap();
        assert_eq!(out.components.len(), 3);
        assert_eq!(out.components[0].tree().root(), 1);
        assert_eq!(out.components[1].tree().root(), 3);
        assert_eq!(out.components[2].tree().root(), 4);
        assert_eq!(out.colors[&3], rat(0, 1));
        assert!(is_valid(&g, &out.colors, &rat(2, 1)));
    }

    #[test]
    fn arcless_digraph_colors_to_zero() {
        let g = derive_symmetric(&SimpleGraph::new(3, []).unwrap());
        let t = BreakerFunction::from_index(0, 0);
        let out = construct_coloring(&g, &t, &rat(1, 1)).unwrap();
        assert!(out.colors.values().all(|c| c.is_zero()));
    }

    #[test]
    fn rejects_bad_moduli_and_components() {
        let g = derive_symmetric(&SimpleGraph::new(3, [(1, 2), (2, 3)]).unwrap());
        let t = BreakerFunction::from_index(0b11, 2);
        assert!(matches!(
            construct_coloring(&g, &t, &rat(0, 1)),
            Err(Error::NonPositiveModulus(_))
        ));
        assert!(matches!(
            construct_coloring(&g, &t, &rat(3, 2)),
            Err(Error::BelowPairBound { .. })
        ));

        let rw = ReducedWeights::new(&g, &t, rat(2, 1)).unwrap();
        let err = ComponentSearch::run(&g, &rw, &[1, 2, 3]);
        assert!(err.is_ok());
        let g2 = derive_symmetric(&SimpleGraph::new(3, [(1, 2)]).unwrap());
        let rw2 = ReducedWeights::new(&g2, &BreakerFunction::from_index(0, 1), rat(2, 1)).unwrap();
        assert!(matches!(
            ComponentSearch::run(&g2, &rw2, &[1, 2, 3]),
            Err(Error::DisconnectedComponent(v)) if v == vec![3]
        ));
    }

    #[test]
    fn reduced_weights_match_definition() {
        let g = WeightedSymmetricDigraph::new(2, [(1, 2, rat(3, 2), rat(1, 2))]).unwrap();
        let t = BreakerFunction::from_index(1, 1);
        let rw = ReducedWeights::new(&g, &t, rat(2, 1)).unwrap();
        assert_eq!(rw.weight(1, 2).unwrap(), &rat(-1, 2));
        assert_eq!(rw.weight(2, 1).unwrap(), &rat(1, 2));
        assert_eq!(rw.weight(1, 3), None);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn search_invariants_hold(
            n in 2u32..=6,
            edge_bits in proptest::collection::vec(any::<bool>(), 15),
            numers in proptest::collection::vec(1i64..=5, 30),
            denoms in proptest::collection::vec(1i64..=3, 30),
            breaker_bits in any::<u64>(),
            slack in 0i64..=3,
        ) {
            let all_pairs: Vec<(u32, u32)> =
                (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect();
            let edges: Vec<(u32, u32)> = all_pairs
                .iter()
                .zip(&edge_bits)
                .filter_map(|(&e, &keep)| keep.then_some(e))
                .collect();
            prop_assume!(!edges.is_empty());
            let weighted = edges.iter().enumerate().map(|(i, &(u, v))| {
                (u, v, rat(numers[2 * i], denoms[2 * i]), rat(numers[2 * i + 1], denoms[2 * i + 1]))
            });
            let g = WeightedSymmetricDigraph::new(n, weighted).unwrap();
            let t = BreakerFunction::from_index(
                breaker_bits & ((1u64 << g.pair_count()) - 1),
                g.pair_count(),
            );
            let r = g.max_pair_weight().unwrap() + rat(slack, 2);
            let out = construct_coloring(&g, &t, &r).unwrap();

            let rw = ReducedWeights::new(&g, &t, r.clone()).unwrap();
            for search in &out.components {
                // Weights strictly increase move by move.
                for w in search.weight_log().windows(2) {
                    prop_assert!(w[0] < w[1]);
                }
                prop_assert!(search.tree().is_locally_maximal(&rw));
                // Roots sit at zero potential.
                prop_assert!(search.tree().potential(search.tree().root()).is_zero());
            }
            // Colors all land in [0, r).
            for c in out.colors.values() {
                prop_assert!(!c.is_negative() && *c < r);
            }
        }
    }
}
