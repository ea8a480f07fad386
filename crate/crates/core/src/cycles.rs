//! Dicycle enumeration and per-cycle functionals: cost, break count,
//! danger filtering, and exhaustive maximum cycle ratios.
//!
//! Enumeration is Johnson's elementary-circuit search, iterative and
//! lazy. Each dicycle surfaces exactly once, already in canonical form
//! (rooted at its smallest vertex), and the overall order is
//! deterministic: roots ascend, and within a root the search expands
//! neighbors in ascending order.

use num_traits::{Signed, Zero};

use crate::graph::{
    BreakerFunction, Dicycle, Orientation, SimpleGraph, Vertex, WeightedSymmetricDigraph,
};
use crate::rational::{format_rational, mod_r, Rational};
use crate::Error;

struct Frame {
    v: Vertex,
    next: usize,
    found: bool,
}

/// Lazy iterator over all elementary dicycles of a symmetric digraph.
///
/// In a symmetric digraph every connected induced subgraph with an arc is
/// strongly connected, so the search runs per ascending root over the
/// vertices greater than or equal to that root, with no component
/// preprocessing.
pub struct DicycleIter<'a> {
    g: &'a WeightedSymmetricDigraph,
    n: u32,
    root: Vertex,
    stack: Vec<Frame>,
    path: Vec<Vertex>,
    blocked: Vec<bool>,
    b: Vec<Vec<Vertex>>,
}

impl<'a> DicycleIter<'a> {
    fn new(g: &'a WeightedSymmetricDigraph) -> Self {
        let n = g.vertex_count();
        Self {
            g,
            n,
            root: 1,
            stack: Vec::new(),
            path: Vec::new(),
            blocked: vec![false; n as usize + 1],
            b: vec![Vec::new(); n as usize + 1],
        }
    }

    fn unblock(&mut self, v: Vertex) {
        let mut todo = vec![v];
        while let Some(u) = todo.pop() {
            self.blocked[u as usize] = false;
            for w in std::mem::take(&mut self.b[u as usize]) {
                if self.blocked[w as usize] {
                    todo.push(w);
                }
            }
        }
    }
}

impl Iterator for DicycleIter<'_> {
    type Item = Dicycle;

    fn next(&mut self) -> Option<Dicycle> {
        loop {
            if self.stack.is_empty() {
                // Start the next root that can lie on a cycle rooted at
                // itself: it needs an out-arc into the higher vertices.
                let s = loop {
                    if self.root > self.n {
                        return None;
                    }
                    let s = self.root;
                    if self.g.neighbors(s).iter().any(|&w| w > s) {
                        break s;
                    }
                    self.root += 1;
                };
                self.blocked.fill(false);
                for list in &mut self.b {
                    list.clear();
                }
                self.blocked[s as usize] = true;
                self.path.push(s);
                self.stack.push(Frame {
                    v: s,
                    next: 0,
                    found: false,
                });
            }
            let s = self.root;
            let frame = self.stack.last_mut().expect("stack nonempty");
            let v = frame.v;
            if let Some(&w) = self.g.neighbors(v).get(frame.next) {
                frame.next += 1;
                if w < s {
                    continue;
                }
                if w == s {
                    frame.found = true;
                    let cycle = Dicycle::new(self.path.clone())
                        .expect("search paths are elementary and rooted at the minimum");
                    return Some(cycle);
                }
                if !self.blocked[w as usize] {
                    self.blocked[w as usize] = true;
                    self.path.push(w);
                    self.stack.push(Frame {
                        v: w,
                        next: 0,
                        found: false,
                    });
                }
                continue;
            }
            let frame = self.stack.pop().expect("stack nonempty");
            self.path.pop();
            if frame.found {
                self.unblock(v);
            } else {
                for &w in self.g.neighbors(v) {
                    if w < s {
                        continue;
                    }
                    if !self.b[w as usize].contains(&v) {
                        self.b[w as usize].push(v);
                    }
                }
            }
            match self.stack.last_mut() {
                Some(parent) => parent.found |= frame.found,
                None => self.root += 1,
            }
        }
    }
}

/// All elementary dicycles of `g`, lazily and in deterministic order.
pub fn enumerate_dicycles(g: &WeightedSymmetricDigraph) -> DicycleIter<'_> {
    DicycleIter::new(g)
}

/// Collects every dicycle, failing once more than `max_cycles` exist.
pub fn collect_dicycles(
    g: &WeightedSymmetricDigraph,
    max_cycles: u64,
) -> Result<Vec<Dicycle>, Error> {
    let mut out = Vec::new();
    for cycle in enumerate_dicycles(g) {
        if out.len() as u64 >= max_cycles {
            return Err(Error::CapExceeded {
                what: "dicycle enumeration",
                cap: max_cycles,
            });
        }
        out.push(cycle);
    }
    Ok(out)
}

/// `|C|_c`: the sum of arc weights along the dicycle.
pub fn cycle_cost(g: &WeightedSymmetricDigraph, cycle: &Dicycle) -> Result<Rational, Error> {
    let mut total = Rational::zero();
    for (x, y) in cycle.arcs() {
        total += g.arc_weight(x, y).ok_or(Error::MissingArc(x, y))?;
    }
    Ok(total)
}

/// `|C|_T`: the number of arcs along the dicycle with `T = 1`.
pub fn cycle_breaks(
    g: &WeightedSymmetricDigraph,
    t: &BreakerFunction,
    cycle: &Dicycle,
) -> Result<u64, Error> {
    t.validate_for(g)?;
    let mut total = 0u64;
    for (x, y) in cycle.arcs() {
        total += u64::from(t.value(g, x, y)?);
    }
    Ok(total)
}

/// The residue window that makes a dicycle dangerous at modulus `r`:
/// a cycle matters only when `0 < |C|_c mod r < upper`, where `upper`
/// is the maximum pair weight `L(G,c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DangerFilter {
    r: Rational,
    upper: Rational,
}

impl DangerFilter {
    pub fn new(r: Rational, upper: Rational) -> Result<Self, Error> {
        if !r.is_positive() {
            return Err(Error::NonPositiveModulus(format_rational(&r)));
        }
        Ok(Self { r, upper })
    }

    /// Filter at modulus `r` with the window bound taken from `g`.
    pub fn for_digraph(g: &WeightedSymmetricDigraph, r: Rational) -> Result<Self, Error> {
        let upper = g.max_pair_weight()?;
        Self::new(r, upper)
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    pub fn upper(&self) -> &Rational {
        &self.upper
    }

    /// `|C|_c mod r`, always in `[0, r)`.
    pub fn residue(&self, cost: &Rational) -> Rational {
        mod_r(cost, &self.r).expect("modulus validated positive at construction")
    }

    pub fn admits(&self, cost: &Rational) -> bool {
        let m = self.residue(cost);
        m.is_positive() && m < self.upper
    }
}

/// A cycle ratio `|C|_c / |C|_T`, infinite when the cycle has no breaks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum RatioValue {
    Finite(Rational),
    Infinite,
}

impl RatioValue {
    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            RatioValue::Finite(q) => Some(q),
            RatioValue::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, RatioValue::Infinite)
    }
}

/// Maximum cycle ratio over a (possibly filtered) cycle set. Taking the
/// maximum over no cycles at all is a distinct outcome, not a value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MaxRatio {
    Empty,
    Attained { ratio: RatioValue, witness: Dicycle },
}

impl MaxRatio {
    pub fn ratio(&self) -> Option<&RatioValue> {
        match self {
            MaxRatio::Empty => None,
            MaxRatio::Attained { ratio, .. } => Some(ratio),
        }
    }

    pub fn witness(&self) -> Option<&Dicycle> {
        match self {
            MaxRatio::Empty => None,
            MaxRatio::Attained { witness, .. } => Some(witness),
        }
    }

    /// Whether every contributing ratio is at most `r`. An empty maximum
    /// bounds trivially.
    pub fn within(&self, r: &Rational) -> bool {
        match self.ratio() {
            None => true,
            Some(RatioValue::Infinite) => false,
            Some(RatioValue::Finite(q)) => q <= r,
        }
    }
}

/// Maximum of `|C|_c / |C|_T` over every dicycle admitted by `filter`
/// (over all dicycles when `filter` is `None`), by full enumeration.
///
/// Ties on the ratio resolve to the lexicographically smallest canonical
/// witness, so the result does not depend on enumeration order.
pub fn max_ratio_exhaustive(
    g: &WeightedSymmetricDigraph,
    t: &BreakerFunction,
    filter: Option<&DangerFilter>,
    max_cycles: u64,
) -> Result<MaxRatio, Error> {
    t.validate_for(g)?;
    let mut best: Option<(RatioValue, Dicycle)> = None;
    let mut seen = 0u64;
    for cycle in enumerate_dicycles(g) {
        seen += 1;
        if seen > max_cycles {
            return Err(Error::CapExceeded {
                what: "dicycle enumeration",
                cap: max_cycles,
            });
        }
        let cost = cycle_cost(g, &cycle)?;
        if let Some(f) = filter {
            if !f.admits(&cost) {
                continue;
            }
        }
        let breaks = cycle_breaks(g, t, &cycle)?;
        let ratio = if breaks == 0 {
            RatioValue::Infinite
        } else {
            RatioValue::Finite(cost / Rational::from_integer(breaks.into()))
        };
        let better = match &best {
            None => true,
            Some((r, w)) => ratio > *r || (ratio == *r && cycle < *w),
        };
        if better {
            best = Some((ratio, cycle));
        }
    }
    Ok(match best {
        None => MaxRatio::Empty,
        Some((ratio, witness)) => MaxRatio::Attained { ratio, witness },
    })
}

/// Per-cycle cost plus bitmask data for sweeping many breakers cheaply.
///
/// Pair `i` of the digraph maps to bit `i`; a breaker is its `u64`
/// encoding. Limited to 64 edge pairs, which exhaustive breaker sweeps
/// never approach.
pub struct CycleFunctionals {
    costs: Vec<Rational>,
    fwd: Vec<u64>,
    bwd: Vec<u64>,
    bwd_counts: Vec<u32>,
}

impl CycleFunctionals {
    pub fn new(g: &WeightedSymmetricDigraph, cycles: &[Dicycle]) -> Result<Self, Error> {
        if g.pair_count() > 64 {
            return Err(Error::CapExceeded {
                what: "edge pairs in a mask sweep",
                cap: 64,
            });
        }
        let mut costs = Vec::with_capacity(cycles.len());
        let mut fwd = Vec::with_capacity(cycles.len());
        let mut bwd = Vec::with_capacity(cycles.len());
        for cycle in cycles {
            costs.push(cycle_cost(g, cycle)?);
            let (mut f, mut b) = (0u64, 0u64);
            for (x, y) in cycle.arcs() {
                let (i, forward) = g.pair_index(x, y).ok_or(Error::MissingArc(x, y))?;
                if forward {
                    f |= 1 << i;
                } else {
                    b |= 1 << i;
                }
            }
            fwd.push(f);
            bwd.push(b);
        }
        let bwd_counts = bwd.iter().map(|m| m.count_ones()).collect();
        Ok(Self {
            costs,
            fwd,
            bwd,
            bwd_counts,
        })
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    pub fn cost(&self, i: usize) -> &Rational {
        &self.costs[i]
    }

    /// `|C_i|_T` for the breaker with encoding `bits`: forward-traversed
    /// pairs break when their bit is set, backward-traversed pairs when
    /// it is clear.
    pub fn breaks(&self, i: usize, bits: u64) -> u64 {
        let hits = (bits & self.fwd[i]).count_ones() + self.bwd_counts[i]
            - (bits & self.bwd[i]).count_ones();
        u64::from(hits)
    }
}

/// How a cycle's traversal meets an orientation: `along` arcs agree with
/// it, `against` arcs oppose it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraversalSplit {
    pub total: u32,
    pub along: u32,
    pub against: u32,
}

/// Splits the arcs of `cycle` by agreement with `omega`, an orientation
/// of `graph`.
pub fn traversal_split(
    graph: &SimpleGraph,
    omega: &Orientation,
    cycle: &Dicycle,
) -> Result<TraversalSplit, Error> {
    if omega.len() != graph.edge_count() {
        return Err(Error::DomainMismatch {
            expected: graph.edge_count(),
            found: omega.len(),
        });
    }
    let (mut along, mut against) = (0u32, 0u32);
    for (x, y) in cycle.arcs() {
        let key = if x < y { (x, y) } else { (y, x) };
        let i = graph
            .edges()
            .binary_search(&key)
            .map_err(|_| Error::MissingArc(x, y))?;
        if omega.directs(i, x, y) {
            along += 1;
        } else {
            against += 1;
        }
    }
    Ok(TraversalSplit {
        total: along + against,
        along,
        against,
    })
}

/// `max(|C| / along, |C| / against)`; infinite when the traversal never
/// opposes (or never follows) the orientation.
pub fn tau(split: &TraversalSplit) -> RatioValue {
    if split.along == 0 || split.against == 0 {
        RatioValue::Infinite
    } else {
        let denom = split.along.min(split.against);
        RatioValue::Finite(Rational::new(split.total.into(), denom.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::derive_symmetric;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn cycle_graph(n: u32) -> SimpleGraph {
        let edges = (1..n).map(|i| (i, i + 1)).chain([(1, n)]);
        SimpleGraph::new(n, edges).unwrap()
    }

    fn complete_graph(n: u32) -> SimpleGraph {
        let edges = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v)));
        SimpleGraph::new(n, edges).unwrap()
    }

    #[test]
    fn triangle_dicycles_in_order() {
        let g = derive_symmetric(&complete_graph(3));
        let got: Vec<Vec<Vertex>> = enumerate_dicycles(&g)
            .map(|c| c.vertices().to_vec())
            .collect();
        assert_eq!(
            got,
            vec![
                vec![1, 2],
                vec![1, 2, 3],
                vec![1, 3],
                vec![1, 3, 2],
                vec![2, 3],
            ]
        );
    }

    #[test]
    fn pentagon_has_seven_dicycles() {
        let g = derive_symmetric(&cycle_graph(5));
        let cycles = collect_dicycles(&g, 1 << 20).unwrap();
        assert_eq!(cycles.len(), 7);
        let long: Vec<_> = cycles.iter().filter(|c| c.len() == 5).collect();
        assert_eq!(long.len(), 2);
        assert_eq!(long[0].reversed(), *long[1]);
    }

    #[test]
    fn complete_four_has_twenty_dicycles() {
        // 6 two-cycles, 4 triangles in 2 directions, 3 quadrilaterals in 2.
        let g = derive_symmetric(&complete_graph(4));
        assert_eq!(enumerate_dicycles(&g).count(), 20);
        assert!(matches!(
            collect_dicycles(&g, 19),
            Err(Error::CapExceeded { cap: 19, .. })
        ));
        assert_eq!(collect_dicycles(&g, 20).unwrap().len(), 20);
    }

    #[test]
    fn arcless_graph_has_no_dicycles() {
        let g = derive_symmetric(&SimpleGraph::new(3, []).unwrap());
        assert_eq!(enumerate_dicycles(&g).count(), 0);
    }

    #[test]
    fn cost_and_breaks_on_a_weighted_pair() {
        let g = WeightedSymmetricDigraph::new(2, [(1, 2, rat(3, 2), rat(1, 2))]).unwrap();
        let c = Dicycle::new(vec![1, 2]).unwrap();
        assert_eq!(cycle_cost(&g, &c).unwrap(), rat(2, 1));
        for k in 0..2 {
            let t = BreakerFunction::from_index(k, 1);
            assert_eq!(cycle_breaks(&g, &t, &c).unwrap(), 1);
        }
    }

    #[test]
    fn danger_filter_windows() {
        let g = derive_symmetric(&cycle_graph(5));
        assert_eq!(g.max_pair_weight().unwrap(), rat(2, 1));

        let at_half = DangerFilter::for_digraph(&g, rat(5, 2)).unwrap();
        assert!(!at_half.admits(&rat(2, 1))); // residue 2, not below the window
        assert!(!at_half.admits(&rat(5, 1))); // residue 0

        let tight = DangerFilter::for_digraph(&g, rat(12, 5)).unwrap();
        assert!(!tight.admits(&rat(2, 1)));
        assert!(tight.admits(&rat(5, 1))); // residue 1/5
        assert_eq!(tight.residue(&rat(5, 1)), rat(1, 5));

        assert!(DangerFilter::new(rat(0, 1), rat(2, 1)).is_err());
    }

    #[test]
    fn exhaustive_ratio_on_pentagon() {
        let g = derive_symmetric(&cycle_graph(5));
        // Pairs sorted: (1,2) (1,5) (2,3) (3,4) (4,5); all bits set sends
        // every pair low-to-high.
        let t = BreakerFunction::from_index(0b11111, 5);

        let unfiltered = max_ratio_exhaustive(&g, &t, None, 1 << 20).unwrap();
        match &unfiltered {
            MaxRatio::Attained { ratio, witness } => {
                assert_eq!(ratio.as_finite().unwrap(), &rat(5, 1));
                assert_eq!(witness.vertices(), &[1, 5, 4, 3, 2]);
            }
            other => panic!("expected attained maximum, got {other:?}"),
        }
        assert!(!unfiltered.within(&rat(5, 2)));
        assert!(unfiltered.within(&rat(5, 1)));

        let filter = DangerFilter::for_digraph(&g, rat(5, 2)).unwrap();
        let filtered = max_ratio_exhaustive(&g, &t, Some(&filter), 1 << 20).unwrap();
        assert_eq!(filtered, MaxRatio::Empty);
        assert!(filtered.within(&rat(5, 2)));

        let tight = DangerFilter::for_digraph(&g, rat(12, 5)).unwrap();
        let at_tight = max_ratio_exhaustive(&g, &t, Some(&tight), 1 << 20).unwrap();
        match at_tight {
            MaxRatio::Attained { ratio, .. } => {
                assert_eq!(ratio.as_finite().unwrap(), &rat(5, 1));
            }
            other => panic!("expected attained maximum, got {other:?}"),
        }
    }

    #[test]
    fn exhaustive_ratio_detects_unbroken_cycle() {
        let g = derive_symmetric(&cycle_graph(5));
        // T = 1 exactly along 1 -> 2 -> 3 -> 4 -> 5 -> 1, so the reverse
        // traversal has no breaks.
        let t = BreakerFunction::from_index(0b11101, 5);
        let got = max_ratio_exhaustive(&g, &t, None, 1 << 20).unwrap();
        match got {
            MaxRatio::Attained { ratio, witness } => {
                assert!(ratio.is_infinite());
                assert_eq!(witness.vertices(), &[1, 5, 4, 3, 2]);
            }
            other => panic!("expected infinite maximum, got {other:?}"),
        }
    }

    #[test]
    fn functionals_match_direct_evaluation() {
        let g = derive_symmetric(&complete_graph(4));
        let cycles = collect_dicycles(&g, 1 << 20).unwrap();
        let funcs = CycleFunctionals::new(&g, &cycles).unwrap();
        assert_eq!(funcs.len(), cycles.len());
        for bits in 0..1u64 << g.pair_count() {
            let t = BreakerFunction::from_index(bits, g.pair_count());
            for (i, c) in cycles.iter().enumerate() {
                assert_eq!(funcs.breaks(i, bits), cycle_breaks(&g, &t, c).unwrap());
                assert_eq!(funcs.cost(i), &cycle_cost(&g, c).unwrap());
            }
        }
    }

    #[test]
    fn traversal_split_and_tau() {
        let graph = cycle_graph(5);
        let omega = Orientation::from_directed_edges(
            &graph,
            &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)],
        )
        .unwrap();
        let around = Dicycle::new(vec![1, 2, 3, 4, 5]).unwrap();
        let split = traversal_split(&graph, &omega, &around).unwrap();
        assert_eq!((split.total, split.along, split.against), (5, 5, 0));
        assert!(tau(&split).is_infinite());

        let mixed = Orientation::from_directed_edges(
            &graph,
            &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)],
        )
        .unwrap();
        let split = traversal_split(&graph, &mixed, &around).unwrap();
        assert_eq!((split.total, split.along, split.against), (5, 4, 1));
        assert_eq!(tau(&split).as_finite().unwrap(), &rat(5, 1));

        let two = Dicycle::new(vec![1, 2]).unwrap();
        let split = traversal_split(&graph, &mixed, &two).unwrap();
        assert_eq!((split.total, split.along, split.against), (2, 1, 1));
        assert_eq!(tau(&split).as_finite().unwrap(), &rat(2, 1));
    }

    proptest! {
        #[test]
        fn enumeration_matches_brute_force(
            n in 2u32..=6,
            edge_bits in proptest::collection::vec(any::<bool>(), 15),
        ) {
            let all_pairs: Vec<(u32, u32)> =
                (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect();
            let edges: Vec<(u32, u32)> = all_pairs
                .iter()
                .zip(&edge_bits)
                .filter_map(|(&e, &keep)| keep.then_some(e))
                .collect();
            let g = derive_symmetric(&SimpleGraph::new(n, edges).unwrap());

            let mut got = collect_dicycles(&g, 1 << 20).unwrap();
            let expected = crate::oracle::dicycles_by_permutation(&g).unwrap();
            prop_assert_eq!(got.len(), expected.len());
            got.sort();
            prop_assert_eq!(got, expected);
        }

        #[test]
        fn every_cycle_is_canonical_and_valid(
            n in 2u32..=6,
            edge_bits in proptest::collection::vec(any::<bool>(), 15),
        ) {
            let all_pairs: Vec<(u32, u32)> =
                (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect();
            let edges: Vec<(u32, u32)> = all_pairs
                .iter()
                .zip(&edge_bits)
                .filter_map(|(&e, &keep)| keep.then_some(e))
                .collect();
            let g = derive_symmetric(&SimpleGraph::new(n, edges).unwrap());

            for cycle in enumerate_dicycles(&g) {
                prop_assert!(cycle.validate_in(&g).is_ok());
                let min = *cycle.vertices().iter().min().unwrap();
                prop_assert_eq!(cycle.vertices()[0], min);
            }
        }
    }
}
