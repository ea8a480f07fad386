//! Brute-force references: independent slow paths for answers the main
//! algorithms produce, plus small-graph catalogues to sweep them over.
//!
//! Nothing here shares machinery with the fast paths. Cycles come from
//! permutation scans instead of the search-based enumerator, and the
//! unit-graph chromatic number comes from backtracking over integer
//! `(k, d)`-colorings instead of breakers and cycle ratios.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_integer::Integer;
use num_traits::Zero;

use crate::chromatic::{chi_c_exact, ChiC, KdColoring, SearchOptions};
use crate::cycles::{cycle_breaks, cycle_cost, max_ratio_exhaustive, MaxRatio, RatioValue};
use crate::graph::{
    derive_symmetric, BreakerFunction, Dicycle, SimpleGraph, Vertex, WeightedSymmetricDigraph,
};
use crate::parametric::max_ratio_parametric;
use crate::rational::{rat, Rational};
use crate::Error;

/// Largest vertex count the backtracking searches accept by default.
pub const BRUTE_VERTEX_CAP: u32 = 10;

/// Every elementary dicycle, found by trying each vertex subset in each
/// cyclic order with the minimum vertex first. Exponential and
/// independent of the lazy enumerator; sorted canonical output.
pub fn dicycles_by_permutation(g: &WeightedSymmetricDigraph) -> Result<Vec<Dicycle>, Error> {
    let n = g.vertex_count();
    if n > 10 {
        return Err(Error::InvalidInput(
            "permutation scan is limited to 10 vertices".into(),
        ));
    }
    let mut found = Vec::new();
    for mask in 1u32..1 << n {
        if mask.count_ones() < 2 {
            continue;
        }
        let subset: Vec<Vertex> = (1..=n).filter(|v| mask >> (v - 1) & 1 == 1).collect();
        for rest in permutations(&subset[1..]) {
            let mut seq = vec![subset[0]];
            seq.extend(rest);
            let closed = g.has_arc(seq[seq.len() - 1], seq[0])
                && seq.windows(2).all(|w| g.has_arc(w[0], w[1]));
            if closed {
                found.push(Dicycle::new(seq).expect("subset orders are elementary"));
            }
        }
    }
    found.sort();
    found.dedup();
    Ok(found)
}

fn permutations(items: &[Vertex]) -> Vec<Vec<Vertex>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let v = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, v);
            out.push(tail);
        }
    }
    out
}

/// All `2^(n choose 2)` labeled graphs on `n` vertices.
pub fn all_labeled_graphs(n: u32) -> Result<Vec<SimpleGraph>, Error> {
    if n == 0 {
        return Err(Error::EmptyVertexSet);
    }
    if n > 6 {
        return Err(Error::InvalidInput(
            "labeled listing is limited to 6 vertices".into(),
        ));
    }
    let pairs: Vec<(Vertex, Vertex)> = (1..=n)
        .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
        .collect();
    let mut out = Vec::with_capacity(1 << pairs.len());
    for mask in 0u32..1 << pairs.len() {
        let edges = pairs
            .iter()
            .enumerate()
            .filter_map(|(i, &e)| (mask >> i & 1 == 1).then_some(e));
        out.push(SimpleGraph::new(n, edges).expect("pair list is valid"));
    }
    Ok(out)
}

fn canonical_edges(graph: &SimpleGraph) -> Vec<(Vertex, Vertex)> {
    let n = graph.vertex_count();
    let ids: Vec<Vertex> = (1..=n).collect();
    let mut best: Option<Vec<(Vertex, Vertex)>> = None;
    for perm in permutations(&ids) {
        // perm[v - 1] is the new label of v.
        let mut mapped: Vec<(Vertex, Vertex)> = graph
            .edges()
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (perm[u as usize - 1], perm[v as usize - 1]);
                if a < b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        mapped.sort_unstable();
        if best.as_ref().is_none_or(|b| mapped < *b) {
            best = Some(mapped);
        }
    }
    best.expect("at least the identity permutation applies")
}

/// One representative per isomorphism class of connected graphs on
/// exactly `n` labeled vertices, in a deterministic order (edge count,
/// then canonical edge list).
pub fn connected_classes(n: u32) -> Result<Vec<SimpleGraph>, Error> {
    let mut seen = BTreeSet::new();
    for graph in all_labeled_graphs(n)? {
        if !graph.is_connected() {
            continue;
        }
        seen.insert(canonical_edges(&graph));
    }
    let mut keys: Vec<Vec<(Vertex, Vertex)>> = seen.into_iter().collect();
    keys.sort_by_key(|e| (e.len(), e.clone()));
    Ok(keys
        .into_iter()
        .map(|edges| SimpleGraph::new(n, edges).expect("canonical edges are valid"))
        .collect())
}

/// BFS 2-coloring test.
pub fn is_bipartite(graph: &SimpleGraph) -> bool {
    let n = graph.vertex_count() as usize;
    let mut side = vec![None; n + 1];
    for s in 1..=n as Vertex {
        if side[s as usize].is_some() {
            continue;
        }
        side[s as usize] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            let sx = side[x as usize].expect("queued vertices are colored");
            for &y in graph.neighbors(x) {
                match side[y as usize] {
                    None => {
                        side[y as usize] = Some(!sx);
                        queue.push_back(y);
                    }
                    Some(sy) if sy == sx => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

/// First `(k, d)`-coloring found by backtracking, or `None`. Vertices
/// are assigned in descending-degree order (ascending id on ties) and
/// values are tried in ascending order, so the result is deterministic.
/// Instances above [`BRUTE_VERTEX_CAP`] vertices are refused; use
/// [`brute_kd_capped`] to raise the cap knowingly.
pub fn brute_kd(graph: &SimpleGraph, k: u32, d: u32) -> Result<Option<KdColoring>, Error> {
    brute_kd_capped(graph, k, d, BRUTE_VERTEX_CAP)
}

pub fn brute_kd_capped(
    graph: &SimpleGraph,
    k: u32,
    d: u32,
    cap: u32,
) -> Result<Option<KdColoring>, Error> {
    if d == 0 || k < 2 * d {
        return Err(Error::BadKd(k, d));
    }
    if graph.vertex_count() > cap {
        return Err(Error::CapExceeded {
            what: "backtracking vertex count",
            cap: cap.into(),
        });
    }
    let mut order: Vec<Vertex> = (1..=graph.vertex_count()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(graph.degree(v)), v));

    fn assign(
        graph: &SimpleGraph,
        order: &[Vertex],
        pos: usize,
        k: u32,
        d: u32,
        chosen: &mut BTreeMap<Vertex, u32>,
    ) -> bool {
        let Some(&v) = order.get(pos) else {
            return true;
        };
        'values: for value in 0..k {
            for &u in graph.neighbors(v) {
                if let Some(&cu) = chosen.get(&u) {
                    let diff = (i64::from(value) - i64::from(cu)).abs();
                    if diff < i64::from(d) || diff > i64::from(k - d) {
                        continue 'values;
                    }
                }
            }
            chosen.insert(v, value);
            if assign(graph, order, pos + 1, k, d, chosen) {
                return true;
            }
            chosen.remove(&v);
        }
        false
    }

    let mut chosen = BTreeMap::new();
    if assign(graph, &order, 0, k, d, &mut chosen) {
        Ok(Some(KdColoring::new(k, d, chosen)?))
    } else {
        Ok(None)
    }
}

/// Unit-graph circular chromatic number by scanning reduced fractions
/// `k/d` in ascending value order and backtracking for each. The
/// minimum is always attained with `k` at most the vertex count; the
/// scan runs two further values of `k` as a guard and fails loudly if
/// the bound were ever beaten.
pub fn chi_c_bruteforce_unit(graph: &SimpleGraph) -> Result<Rational, Error> {
    if graph.edge_count() == 0 {
        return Ok(Rational::zero());
    }
    let n = graph.vertex_count();
    let mut candidates: Vec<(u32, u32)> = (2..=n + 2)
        .flat_map(|k| (1..=k / 2).map(move |d| (k, d)))
        .filter(|&(k, d)| k.gcd(&d) == 1)
        .collect();
    candidates.sort_by_key(|&(k, d)| Rational::new(k.into(), d.into()));
    for (k, d) in candidates {
        if brute_kd(graph, k, d)?.is_some() {
            if k > n {
                return Err(Error::Internal(format!(
                    "minimum (k, d) = ({k}, {d}) needs more colors than vertices"
                )));
            }
            return Ok(Rational::new(k.into(), d.into()));
        }
    }
    // An n-clique admits the (n, 1)-coloring with all colors distinct.
    Err(Error::Internal(
        "no (k, d)-coloring found up to the guard band".into(),
    ))
}

/// Both circular chromatic number routes run on one graph: the breaker
/// sweep over the unit-weight derived digraph against the backtracking
/// search over `(k, d)`-colorings. On disagreement the report carries
/// both answers for debugging; disagreement is an outcome, not an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheck {
    pub solver: ChiC,
    pub brute_force: Rational,
    pub agree: bool,
}

pub fn cross_check(graph: &SimpleGraph, opts: &SearchOptions) -> Result<CrossCheck, Error> {
    let solver = chi_c_exact(&derive_symmetric(graph), opts)?;
    let brute_force = chi_c_bruteforce_unit(graph)?;
    let agree = match &solver {
        ChiC::Degenerate => brute_force.is_zero(),
        ChiC::Finite { value, .. } => *value == brute_force,
    };
    Ok(CrossCheck {
        solver,
        brute_force,
        agree,
    })
}

/// Side-by-side run of the enumerating and parametric maximum-ratio
/// algorithms. `agree` requires equal outcomes, equal ratio values, and
/// both witnesses to attain the claimed ratio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioAgreement {
    pub exhaustive: MaxRatio,
    pub parametric: MaxRatio,
    pub agree: bool,
}

pub fn compare_ratio_solvers(
    g: &WeightedSymmetricDigraph,
    t: &BreakerFunction,
    max_cycles: u64,
) -> Result<RatioAgreement, Error> {
    let exhaustive = max_ratio_exhaustive(g, t, None, max_cycles)?;
    let parametric = max_ratio_parametric(g, t, &rat(1, 1_000_000))?;
    let agree = match (&exhaustive, &parametric) {
        (MaxRatio::Empty, MaxRatio::Empty) => true,
        (
            MaxRatio::Attained { ratio: a, witness: wa },
            MaxRatio::Attained { ratio: b, witness: wb },
        ) => a == b && witness_attains(g, t, wa, a)? && witness_attains(g, t, wb, b)?,
        _ => false,
    };
    Ok(RatioAgreement {
        exhaustive,
        parametric,
        agree,
    })
}

fn witness_attains(
    g: &WeightedSymmetricDigraph,
    t: &BreakerFunction,
    witness: &Dicycle,
    ratio: &RatioValue,
) -> Result<bool, Error> {
    let breaks = cycle_breaks(g, t, witness)?;
    Ok(match ratio {
        RatioValue::Infinite => breaks == 0,
        RatioValue::Finite(q) => {
            breaks > 0 && cycle_cost(g, witness)? == q * Rational::from_integer(breaks.into())
        }
    })
}
