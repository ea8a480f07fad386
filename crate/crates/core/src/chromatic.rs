//! Circular colorings: validation, breaker extraction, exact circular
//! chromatic number, and the orientation and (k, d) corollaries of the
//! cycle-ratio criterion.
//!
//! The chromatic number of a weighted symmetric digraph is
//! `min_T max_C |C|_c / |C|_T` over breaker functions `T` and dicycles
//! `C`. Deciding a single modulus `r >= L(G,c)` only needs the dangerous
//! cycles (residue of `|C|_c` mod `r` strictly inside `(0, L)`); every
//! constructed coloring is re-verified against the definition before it
//! is returned.

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::cycles::{
    enumerate_dicycles, collect_dicycles, tau, traversal_split, CycleFunctionals, DangerFilter,
    RatioValue,
};
use crate::graph::{
    breaker_from_orientation, derive_symmetric, BreakerFunction, Dicycle, Orientation, SimpleGraph,
    Vertex, WeightedSymmetricDigraph,
};
use crate::potential::construct_coloring;
use crate::rational::{format_rational, mod_r, Rational};
use crate::Error;

/// Enumeration caps for procedures that sweep cycles or breakers.
/// `max_witnesses` bounds only how much infeasibility evidence is
/// retained, not how many breakers are tried.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub max_cycles: u64,
    pub max_breakers: u64,
    pub max_witnesses: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            max_cycles: 1_000_000,
            max_breakers: 1 << 20,
            max_witnesses: 4096,
        }
    }
}

/// An assignment of a color in `[0, r)` to every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircularColoring {
    r: Rational,
    colors: BTreeMap<Vertex, Rational>,
}

impl CircularColoring {
    pub fn new(r: Rational, colors: BTreeMap<Vertex, Rational>) -> Result<Self, Error> {
        if !r.is_positive() {
            return Err(Error::NonPositiveModulus(format_rational(&r)));
        }
        for (&v, c) in &colors {
            if c.is_negative() || *c >= r {
                return Err(Error::ColorOutOfRange {
                    vertex: v,
                    value: format_rational(c),
                    modulus: format_rational(&r),
                });
            }
        }
        Ok(Self { r, colors })
    }

    /// The all-zero coloring on the vertices of `g`.
    pub fn zero(g: &WeightedSymmetricDigraph, r: Rational) -> Result<Self, Error> {
        let colors = g.vertices().map(|v| (v, Rational::zero())).collect();
        Self::new(r, colors)
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    pub fn color(&self, v: Vertex) -> Option<&Rational> {
        self.colors.get(&v)
    }

    pub fn colors(&self) -> &BTreeMap<Vertex, Rational> {
        &self.colors
    }
}

/// Forward circular gap from color `a` to color `b` on a circle of
/// circumference `r`.
pub fn circular_distance(a: &Rational, b: &Rational, r: &Rational) -> Result<Rational, Error> {
    mod_r(&(b - a), r)
}

/// One arc whose color gap falls short of its weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcViolation {
    pub tail: Vertex,
    pub head: Vertex,
    pub required: Rational,
    pub gap: Rational,
}

/// Outcome of checking a coloring arc by arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub modulus: Rational,
    pub arcs_checked: usize,
    pub violations: Vec<ArcViolation>,
}

impl VerificationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_color_domain(
    g: &WeightedSymmetricDigraph,
    coloring: &CircularColoring,
) -> Result<(), Error> {
    for v in g.vertices() {
        if coloring.color(v).is_none() {
            return Err(Error::MissingColor(v));
        }
    }
    for &v in coloring.colors().keys() {
        if v == 0 || v > g.vertex_count() {
            return Err(Error::VertexOutOfRange(v, g.vertex_count()));
        }
    }
    Ok(())
}

/// Checks the defining constraint on every arc: the forward gap
/// `(phi(y) - phi(x)) mod r` must be at least `c_xy`.
pub fn verify_coloring(
    g: &WeightedSymmetricDigraph,
    coloring: &CircularColoring,
) -> Result<VerificationReport, Error> {
    check_color_domain(g, coloring)?;
    let r = coloring.r();
    let mut violations = Vec::new();
    let mut arcs_checked = 0;
    for (x, y, c) in g.arcs() {
        arcs_checked += 1;
        let gap = circular_distance(
            coloring.color(x).expect("domain checked"),
            coloring.color(y).expect("domain checked"),
            r,
        )?;
        if gap < *c {
            violations.push(ArcViolation {
                tail: x,
                head: y,
                required: c.clone(),
                gap,
            });
        }
    }
    Ok(VerificationReport {
        modulus: r.clone(),
        arcs_checked,
        violations,
    })
}

/// Reads a breaker off a valid coloring: `T(xy) = 1` iff
/// `phi(x) > phi(y)`. Adjacent colors are never equal in a valid
/// coloring, so the rule is total.
pub fn extract_breaker(
    g: &WeightedSymmetricDigraph,
    coloring: &CircularColoring,
) -> Result<BreakerFunction, Error> {
    let report = verify_coloring(g, coloring)?;
    if !report.is_valid() {
        return Err(Error::InvalidColoring {
            violations: report.violations.len(),
        });
    }
    let bits = g
        .pairs()
        .iter()
        .map(|p| coloring.color(p.u).expect("domain checked") > coloring.color(p.v).expect("domain checked"))
        .collect();
    Ok(BreakerFunction::new(bits))
}

/// Arcs where `phi(x) + c_xy <= phi(y) + r * T(xy)` fails. A breaker
/// extracted from a valid coloring satisfies it everywhere.
pub fn arc_inequality_check(
    g: &WeightedSymmetricDigraph,
    coloring: &CircularColoring,
    t: &BreakerFunction,
) -> Result<Vec<(Vertex, Vertex)>, Error> {
    check_color_domain(g, coloring)?;
    t.validate_for(g)?;
    let r = coloring.r();
    let mut bad = Vec::new();
    for (x, y, c) in g.arcs() {
        let lhs = coloring.color(x).expect("domain checked") + c;
        let mut rhs = coloring.color(y).expect("domain checked").clone();
        if t.value(g, x, y)? == 1 {
            rhs += r;
        }
        if lhs > rhs {
            bad.push((x, y));
        }
    }
    Ok(bad)
}

/// Constructs the potential coloring for `t` at modulus `r` and insists
/// on validity; an invalid result here means the feasibility hypothesis
/// was not actually established, which is a bug, not an input error.
fn certified_coloring(
    g: &WeightedSymmetricDigraph,
    t: &BreakerFunction,
    r: &Rational,
) -> Result<CircularColoring, Error> {
    let outcome = construct_coloring(g, t, r)?;
    let coloring = CircularColoring::new(r.clone(), outcome.colors)?;
    let report = verify_coloring(g, &coloring)?;
    if !report.is_valid() {
        return Err(Error::Internal(format!(
            "constructed coloring fails on {} arcs",
            report.violations.len()
        )));
    }
    Ok(coloring)
}

fn breaker_space(m: usize, opts: &SearchOptions) -> Result<u64, Error> {
    let cap_err = Err(Error::CapExceeded {
        what: "breaker enumeration",
        cap: opts.max_breakers,
    });
    if m >= 64 {
        return cap_err;
    }
    let count = 1u64 << m;
    if count > opts.max_breakers {
        return cap_err;
    }
    Ok(count)
}

/// A failing breaker together with a dangerous cycle whose ratio
/// exceeds the modulus under it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreakerWitness {
    pub breaker: BreakerFunction,
    pub cycle: Dicycle,
    pub ratio: RatioValue,
}

/// Why a modulus is infeasible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InfeasibleReason {
    /// `r` is below the heaviest edge pair; its 2-dicycle already fails.
    PairBound { l: Rational, u: Vertex, v: Vertex },
    /// Every breaker leaves a dangerous cycle with ratio above `r`;
    /// one witness per breaker, retention capped by `max_witnesses`.
    BreakersExhausted {
        tried: u64,
        witnesses: Vec<BreakerWitness>,
    },
}

/// Answer to "does a circular `r`-coloring exist", with certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Feasible {
        breaker: BreakerFunction,
        coloring: CircularColoring,
    },
    Infeasible {
        reason: InfeasibleReason,
    },
}

impl Decision {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Decision::Feasible { .. })
    }
}

/// Decides circular `r`-colorability by scanning breakers in ascending
/// encoding order and testing only the dangerous cycles; the first
/// breaker whose dangerous cycles all have ratio at most `r` yields a
/// verified coloring.
pub fn decide_r(
    g: &WeightedSymmetricDigraph,
    r: &Rational,
    opts: &SearchOptions,
) -> Result<Decision, Error> {
    if !r.is_positive() {
        return Err(Error::NonPositiveModulus(format_rational(r)));
    }
    if g.pair_count() == 0 {
        return Ok(Decision::Feasible {
            breaker: BreakerFunction::from_index(0, 0),
            coloring: CircularColoring::zero(g, r.clone())?,
        });
    }
    let l = g.max_pair_weight()?;
    if *r < l {
        let p = g.max_weight_pair()?;
        return Ok(Decision::Infeasible {
            reason: InfeasibleReason::PairBound {
                l,
                u: p.u,
                v: p.v,
            },
        });
    }

    let m = g.pair_count();
    let space = breaker_space(m, opts)?;
    let cycles = collect_dicycles(g, opts.max_cycles)?;
    let funcs = CycleFunctionals::new(g, &cycles)?;
    let filter = DangerFilter::new(r.clone(), l)?;
    let dangerous: Vec<usize> = (0..funcs.len())
        .filter(|&i| filter.admits(funcs.cost(i)))
        .collect();
    let max_len = cycles.iter().map(Dicycle::len).max().unwrap_or(0);
    let bounds: Vec<Rational> = (0..=max_len)
        .map(|k| r * Rational::from_integer(k.into()))
        .collect();

    let mut witnesses = Vec::new();
    for bits in 0..space {
        let violation = dangerous.iter().copied().find(|&i| {
            let b = funcs.breaks(i, bits);
            b == 0 || *funcs.cost(i) > bounds[b as usize]
        });
        let Some(i) = violation else {
            let t = BreakerFunction::from_index(bits, m);
            let coloring = certified_coloring(g, &t, r)?;
            return Ok(Decision::Feasible {
                breaker: t,
                coloring,
            });
        };
        if witnesses.len() < opts.max_witnesses {
            let b = funcs.breaks(i, bits);
            let ratio = if b == 0 {
                RatioValue::Infinite
            } else {
                RatioValue::Finite(funcs.cost(i) / Rational::from_integer(b.into()))
            };
            witnesses.push(BreakerWitness {
                breaker: BreakerFunction::from_index(bits, m),
                cycle: cycles[i].clone(),
                ratio,
            });
        }
    }
    Ok(Decision::Infeasible {
        reason: InfeasibleReason::BreakersExhausted {
            tried: space,
            witnesses,
        },
    })
}

/// The circular chromatic number of an arcless digraph is reported as a
/// degenerate 0; with arcs it is the attained min-max cycle ratio, with
/// the optimal breaker and a verified optimal coloring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChiC {
    Degenerate,
    Finite {
        value: Rational,
        breaker: BreakerFunction,
        coloring: CircularColoring,
    },
}

impl ChiC {
    pub fn value(&self) -> Rational {
        match self {
            ChiC::Degenerate => Rational::zero(),
            ChiC::Finite { value, .. } => value.clone(),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, ChiC::Degenerate)
    }
}

/// Exact circular chromatic number: minimize the unfiltered maximum
/// cycle ratio over every breaker, tie-breaking on the smallest breaker
/// encoding, then color at the optimum.
pub fn chi_c_exact(g: &WeightedSymmetricDigraph, opts: &SearchOptions) -> Result<ChiC, Error> {
    if g.pair_count() == 0 {
        return Ok(ChiC::Degenerate);
    }
    let m = g.pair_count();
    let space = breaker_space(m, opts)?;
    let cycles = collect_dicycles(g, opts.max_cycles)?;
    let funcs = CycleFunctionals::new(g, &cycles)?;

    let mut best: Option<(Rational, u64)> = None;
    for bits in 0..space {
        let mut worst: Option<Rational> = None;
        let mut unbroken = false;
        for i in 0..funcs.len() {
            let b = funcs.breaks(i, bits);
            if b == 0 {
                unbroken = true;
                break;
            }
            let ratio = funcs.cost(i) / Rational::from_integer(b.into());
            if worst.as_ref().is_none_or(|w| ratio > *w) {
                worst = Some(ratio);
            }
        }
        if unbroken {
            continue;
        }
        let w = worst.expect("a digraph with arcs has 2-dicycles");
        if best.as_ref().is_none_or(|(v, _)| w < *v) {
            best = Some((w, bits));
        }
    }
    let (value, bits) = best.expect("the ascending orientation breaker is always finite");
    let t = BreakerFunction::from_index(bits, m);
    let coloring = certified_coloring(g, &t, &value)?;
    Ok(ChiC::Finite {
        value,
        breaker: t,
        coloring,
    })
}

/// Outcome of testing one orientation of an unweighted graph at `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrientationOutcome {
    /// All dangerous cycle lengths meet `tau <= r`; a verified coloring
    /// follows from the induced breaker.
    Colored {
        breaker: BreakerFunction,
        coloring: CircularColoring,
    },
    /// A cycle with length residue in `(0, 2)` mod `r` exceeds `r`.
    Blocked { cycle: Dicycle, tau: RatioValue },
}

/// Tests whether an orientation certifies circular `r`-colorability of
/// a graph: every cycle whose length has residue strictly inside
/// `(0, 2)` mod `r` must satisfy
/// `max(|C| / along, |C| / against) <= r`. On success the orientation's
/// breaker colors the graph.
pub fn color_by_orientation(
    graph: &SimpleGraph,
    omega: &Orientation,
    r: &Rational,
    opts: &SearchOptions,
) -> Result<OrientationOutcome, Error> {
    if !r.is_positive() {
        return Err(Error::NonPositiveModulus(format_rational(r)));
    }
    let g = derive_symmetric(graph);
    let t = breaker_from_orientation(&g, omega)?;
    if graph.edge_count() == 0 {
        return Ok(OrientationOutcome::Colored {
            breaker: t,
            coloring: CircularColoring::zero(&g, r.clone())?,
        });
    }
    let two = Rational::from_integer(2.into());
    if *r < two {
        let &(u, v) = graph.edges().first().expect("edges checked nonempty");
        return Err(Error::BelowPairBound {
            r: format_rational(r),
            l: format_rational(&two),
            u,
            v,
        });
    }

    let filter = DangerFilter::new(r.clone(), two)?;
    let mut seen = 0u64;
    for cycle in enumerate_dicycles(&g) {
        seen += 1;
        if seen > opts.max_cycles {
            return Err(Error::CapExceeded {
                what: "dicycle enumeration",
                cap: opts.max_cycles,
            });
        }
        if cycle.len() < 3 {
            continue;
        }
        let length = Rational::from_integer((cycle.len() as u64).into());
        if !filter.admits(&length) {
            continue;
        }
        let split = traversal_split(graph, omega, &cycle)?;
        let value = tau(&split);
        let blocked = match &value {
            RatioValue::Infinite => true,
            RatioValue::Finite(q) => q > r,
        };
        if blocked {
            return Ok(OrientationOutcome::Blocked { cycle, tau: value });
        }
    }
    let coloring = certified_coloring(&g, &t, r)?;
    Ok(OrientationOutcome::Colored {
        breaker: t,
        coloring,
    })
}

/// Outcome of the cycle-length window test at `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WindowCheck {
    /// No cycle length lands in `(0, 2)` mod `r`, so no cycle is ever
    /// dangerous and any orientation colors the graph.
    Vacuous {
        breaker: BreakerFunction,
        coloring: CircularColoring,
    },
    /// Some cycle's length residue falls inside the window; the test is
    /// inconclusive for this graph and modulus.
    Occupied { cycle: Dicycle, residue: Rational },
}

/// Checks whether the danger window is empty for every cycle length of
/// the graph; if so, circular `r`-colorability is automatic and the
/// ascending orientation provides a verified coloring.
pub fn cycle_length_window_check(
    graph: &SimpleGraph,
    r: &Rational,
    opts: &SearchOptions,
) -> Result<WindowCheck, Error> {
    if !r.is_positive() {
        return Err(Error::NonPositiveModulus(format_rational(r)));
    }
    let g = derive_symmetric(graph);
    if graph.edge_count() == 0 {
        return Ok(WindowCheck::Vacuous {
            breaker: BreakerFunction::from_index(0, 0),
            coloring: CircularColoring::zero(&g, r.clone())?,
        });
    }
    let two = Rational::from_integer(2.into());
    if *r < two {
        let &(u, v) = graph.edges().first().expect("edges checked nonempty");
        return Err(Error::BelowPairBound {
            r: format_rational(r),
            l: format_rational(&two),
            u,
            v,
        });
    }

    let filter = DangerFilter::new(r.clone(), two)?;
    let mut seen = 0u64;
    for cycle in enumerate_dicycles(&g) {
        seen += 1;
        if seen > opts.max_cycles {
            return Err(Error::CapExceeded {
                what: "dicycle enumeration",
                cap: opts.max_cycles,
            });
        }
        if cycle.len() < 3 {
            continue;
        }
        let length = Rational::from_integer((cycle.len() as u64).into());
        if filter.admits(&length) {
            let residue = filter.residue(&length);
            return Ok(WindowCheck::Occupied { cycle, residue });
        }
    }
    let t = BreakerFunction::new(vec![true; g.pair_count()]);
    let coloring = certified_coloring(&g, &t, r)?;
    Ok(WindowCheck::Vacuous {
        breaker: t,
        coloring,
    })
}

/// A `(k, d)`-coloring: integer colors in `0..k` with every edge's color
/// difference between `d` and `k - d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KdColoring {
    pub k: u32,
    pub d: u32,
    pub values: BTreeMap<Vertex, u32>,
}

impl KdColoring {
    pub fn new(k: u32, d: u32, values: BTreeMap<Vertex, u32>) -> Result<Self, Error> {
        if d == 0 || k < 2 * d {
            return Err(Error::BadKd(k, d));
        }
        for (&v, &c) in &values {
            if c >= k {
                return Err(Error::ColorOutOfRange {
                    vertex: v,
                    value: c.to_string(),
                    modulus: k.to_string(),
                });
            }
        }
        Ok(Self { k, d, values })
    }

    /// Edges violating `d <= |g(u) - g(v)| <= k - d`.
    pub fn violations_in(&self, graph: &SimpleGraph) -> Result<Vec<(Vertex, Vertex)>, Error> {
        let mut bad = Vec::new();
        for &(u, v) in graph.edges() {
            let cu = *self.values.get(&u).ok_or(Error::MissingColor(u))?;
            let cv = *self.values.get(&v).ok_or(Error::MissingColor(v))?;
            let diff = (i64::from(cu) - i64::from(cv)).abs();
            if diff < i64::from(self.d) || diff > i64::from(self.k - self.d) {
                bad.push((u, v));
            }
        }
        Ok(bad)
    }

    pub fn is_valid_in(&self, graph: &SimpleGraph) -> Result<bool, Error> {
        Ok(self.violations_in(graph)?.is_empty())
    }
}

/// Rounds a circular `k/d`-coloring of a graph down to a `(k, d)`-
/// coloring: `g(v) = floor(d * phi(v))`. The input must be valid and
/// its modulus must equal `k/d` exactly; the rounded coloring is
/// checked edge by edge before it is returned.
pub fn kd_coloring_from_circular(
    graph: &SimpleGraph,
    coloring: &CircularColoring,
    k: u32,
    d: u32,
) -> Result<KdColoring, Error> {
    if d == 0 || k < 2 * d {
        return Err(Error::BadKd(k, d));
    }
    let ratio = Rational::new(k.into(), d.into());
    if *coloring.r() != ratio {
        return Err(Error::ModulusMismatch {
            r: format_rational(coloring.r()),
            k,
            d,
        });
    }
    let g = derive_symmetric(graph);
    let report = verify_coloring(&g, coloring)?;
    if !report.is_valid() {
        return Err(Error::InvalidColoring {
            violations: report.violations.len(),
        });
    }

    let dd = Rational::from_integer(d.into());
    let mut values = BTreeMap::new();
    for (&v, phi) in coloring.colors() {
        let scaled = (&dd * phi).floor();
        let value = scaled
            .to_integer()
            .to_u32()
            .ok_or_else(|| Error::Internal("rounded color out of u32 range".into()))?;
        values.insert(v, value);
    }
    let kd = KdColoring::new(k, d, values)?;
    let bad = kd.violations_in(graph)?;
    if !bad.is_empty() {
        return Err(Error::Internal(format!(
            "rounded coloring fails on {} edges",
            bad.len()
        )));
    }
    Ok(kd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::{cycle_breaks, cycle_cost};
    use crate::rational::rat;

    fn cycle_graph(n: u32) -> SimpleGraph {
        let edges = (1..n).map(|i| (i, i + 1)).chain([(1, n)]);
        SimpleGraph::new(n, edges).unwrap()
    }

    fn complete_graph(n: u32) -> SimpleGraph {
        let edges = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v)));
        SimpleGraph::new(n, edges).unwrap()
    }

    fn pentagon_half_coloring() -> CircularColoring {
        CircularColoring::new(
            rat(5, 2),
            [
                (1, rat(0, 1)),
                (2, rat(3, 2)),
                (3, rat(1, 2)),
                (4, rat(2, 1)),
                (5, rat(1, 1)),
            ]
            .into(),
        )
        .unwrap()
    }

    #[test]
    fn verification_accepts_and_rejects() {
        let g = derive_symmetric(&cycle_graph(5));
        let good = pentagon_half_coloring();
        let report = verify_coloring(&g, &good).unwrap();
        assert!(report.is_valid());
        assert_eq!(report.arcs_checked, 10);

        let mut colors = good.colors().clone();
        colors.insert(2, rat(1, 4));
        let bad = CircularColoring::new(rat(5, 2), colors).unwrap();
        let report = verify_coloring(&g, &bad).unwrap();
        assert!(!report.is_valid());
        let pairs: Vec<(Vertex, Vertex)> = report
            .violations
            .iter()
            .map(|v| (v.tail, v.head))
            .collect();
        assert!(pairs.contains(&(1, 2)) || pairs.contains(&(2, 1)));

        let mut colors = good.colors().clone();
        colors.remove(&4);
        let partial = CircularColoring::new(rat(5, 2), colors).unwrap();
        assert!(matches!(
            verify_coloring(&g, &partial),
            Err(Error::MissingColor(4))
        ));

        assert!(matches!(
            CircularColoring::new(rat(5, 2), [(1, rat(5, 2))].into()),
            Err(Error::ColorOutOfRange { vertex: 1, .. })
        ));
    }

    #[test]
    fn breaker_extraction_and_arc_inequality() {
        let g = derive_symmetric(&cycle_graph(5));
        let coloring = pentagon_half_coloring();
        let t = extract_breaker(&g, &coloring).unwrap();
        // Descending-color arcs carry T = 1: pairs (2,3) and (4,5).
        assert_eq!(t.index(), 0b10100);
        assert_eq!(arc_inequality_check(&g, &coloring, &t).unwrap(), vec![]);

        // The complement breaks the inequality somewhere.
        let flipped = crate::graph::breaker_complement(&t);
        assert!(!arc_inequality_check(&g, &coloring, &flipped)
            .unwrap()
            .is_empty());

        let mut colors = coloring.colors().clone();
        colors.insert(2, rat(1, 4));
        let bad = CircularColoring::new(rat(5, 2), colors).unwrap();
        assert!(matches!(
            extract_breaker(&g, &bad),
            Err(Error::InvalidColoring { .. })
        ));
    }

    #[test]
    fn decide_pentagon_across_moduli() {
        let g = derive_symmetric(&cycle_graph(5));
        let opts = SearchOptions::default();

        match decide_r(&g, &rat(5, 2), &opts).unwrap() {
            Decision::Feasible { coloring, .. } => {
                assert!(verify_coloring(&g, &coloring).unwrap().is_valid());
            }
            other => panic!("expected feasible at 5/2, got {other:?}"),
        }

        match decide_r(&g, &rat(12, 5), &opts).unwrap() {
            Decision::Infeasible {
                reason: InfeasibleReason::BreakersExhausted { tried, witnesses },
            } => {
                assert_eq!(tried, 32);
                assert_eq!(witnesses.len(), 32);
                let r = rat(12, 5);
                let filter = DangerFilter::for_digraph(&g, r.clone()).unwrap();
                for w in &witnesses {
                    let cost = cycle_cost(&g, &w.cycle).unwrap();
                    assert!(filter.admits(&cost));
                    let breaks = cycle_breaks(&g, &w.breaker, &w.cycle).unwrap();
                    match &w.ratio {
                        RatioValue::Infinite => assert_eq!(breaks, 0),
                        RatioValue::Finite(q) => {
                            assert_eq!(*q, cost / rat(breaks as i64, 1));
                            assert!(*q > r);
                        }
                    }
                }
            }
            other => panic!("expected infeasible at 12/5, got {other:?}"),
        }

        match decide_r(&g, &rat(1, 1), &opts).unwrap() {
            Decision::Infeasible {
                reason: InfeasibleReason::PairBound { l, .. },
            } => assert_eq!(l, rat(2, 1)),
            other => panic!("expected pair-bound rejection at 1, got {other:?}"),
        }

        assert!(decide_r(&g, &rat(3, 1), &opts).unwrap().is_feasible());
        assert!(matches!(
            decide_r(&g, &rat(0, 1), &opts),
            Err(Error::NonPositiveModulus(_))
        ));
    }

    #[test]
    fn decide_respects_caps() {
        let g = derive_symmetric(&cycle_graph(5));
        let tight = SearchOptions {
            max_cycles: 3,
            ..SearchOptions::default()
        };
        assert!(matches!(
            decide_r(&g, &rat(3, 1), &tight),
            Err(Error::CapExceeded { .. })
        ));
        let tiny = SearchOptions {
            max_breakers: 16,
            ..SearchOptions::default()
        };
        assert!(matches!(
            decide_r(&g, &rat(3, 1), &tiny),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn chromatic_number_of_small_graphs() {
        let opts = SearchOptions::default();
        let cases: Vec<(SimpleGraph, Rational)> = vec![
            (complete_graph(3), rat(3, 1)),
            (complete_graph(4), rat(4, 1)),
            (cycle_graph(4), rat(2, 1)),
            (cycle_graph(5), rat(5, 2)),
            (cycle_graph(7), rat(7, 3)),
            (SimpleGraph::new(3, [(1, 2), (2, 3)]).unwrap(), rat(2, 1)),
        ];
        for (graph, expected) in cases {
            let g = derive_symmetric(&graph);
            match chi_c_exact(&g, &opts).unwrap() {
                ChiC::Finite { value, coloring, .. } => {
                    assert_eq!(value, expected, "graph {:?}", graph.edges());
                    assert!(verify_coloring(&g, &coloring).unwrap().is_valid());
                }
                other => panic!("expected finite chromatic number, got {other:?}"),
            }
        }
    }

    #[test]
    fn chromatic_number_weighted_pair() {
        let g = WeightedSymmetricDigraph::new(2, [(1, 2, rat(3, 2), rat(1, 2))]).unwrap();
        match chi_c_exact(&g, &SearchOptions::default()).unwrap() {
            ChiC::Finite { value, .. } => assert_eq!(value, rat(2, 1)),
            other => panic!("expected 2, got {other:?}"),
        }
    }

    #[test]
    fn chromatic_number_ties_choose_smallest_breaker() {
        let g = derive_symmetric(&cycle_graph(5));
        match chi_c_exact(&g, &SearchOptions::default()).unwrap() {
            ChiC::Finite { value, breaker, .. } => {
                assert_eq!(value, rat(5, 2));
                assert_eq!(breaker.index(), 1);
            }
            other => panic!("expected finite, got {other:?}"),
        }
    }

    #[test]
    fn chromatic_number_degenerate_without_arcs() {
        let g = derive_symmetric(&SimpleGraph::new(4, []).unwrap());
        let got = chi_c_exact(&g, &SearchOptions::default()).unwrap();
        assert!(got.is_degenerate());
        assert!(got.value().is_zero());
    }

    #[test]
    fn orientation_test_on_pentagon() {
        let graph = cycle_graph(5);
        let opts = SearchOptions::default();
        let around =
            Orientation::from_directed_edges(&graph, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)])
                .unwrap();

        // At 5/2 the length-5 residue is 0: nothing is dangerous.
        match color_by_orientation(&graph, &around, &rat(5, 2), &opts).unwrap() {
            OrientationOutcome::Colored { coloring, .. } => {
                let g = derive_symmetric(&graph);
                assert!(verify_coloring(&g, &coloring).unwrap().is_valid());
            }
            other => panic!("expected colored, got {other:?}"),
        }

        // At 12/5 the 5-cycles are dangerous and one side is empty.
        match color_by_orientation(&graph, &around, &rat(12, 5), &opts).unwrap() {
            OrientationOutcome::Blocked { cycle, tau } => {
                assert_eq!(cycle.len(), 5);
                assert!(tau.is_infinite());
            }
            other => panic!("expected blocked, got {other:?}"),
        }

        let mixed =
            Orientation::from_directed_edges(&graph, &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])
                .unwrap();
        match color_by_orientation(&graph, &mixed, &rat(12, 5), &opts).unwrap() {
            OrientationOutcome::Blocked { tau, .. } => {
                assert_eq!(tau.as_finite().unwrap(), &rat(5, 1));
            }
            other => panic!("expected blocked, got {other:?}"),
        }

        assert!(matches!(
            color_by_orientation(&graph, &around, &rat(3, 2), &opts),
            Err(Error::BelowPairBound { .. })
        ));
    }

    #[test]
    fn orientation_test_on_triangle() {
        let graph = complete_graph(3);
        let opts = SearchOptions::default();
        let acyclic =
            Orientation::from_directed_edges(&graph, &[(1, 2), (2, 3), (1, 3)]).unwrap();

        // Length 3 is a multiple of 3: the window is empty.
        match color_by_orientation(&graph, &acyclic, &rat(3, 1), &opts).unwrap() {
            OrientationOutcome::Colored { coloring, .. } => {
                let g = derive_symmetric(&graph);
                assert!(verify_coloring(&g, &coloring).unwrap().is_valid());
            }
            other => panic!("expected colored, got {other:?}"),
        }

        // At 5/2 the triangles are dangerous and tau = 3 > 5/2.
        match color_by_orientation(&graph, &acyclic, &rat(5, 2), &opts).unwrap() {
            OrientationOutcome::Blocked { tau, .. } => {
                assert_eq!(tau.as_finite().unwrap(), &rat(3, 1));
            }
            other => panic!("expected blocked, got {other:?}"),
        }
    }

    #[test]
    fn window_check_examples() {
        let opts = SearchOptions::default();

        match cycle_length_window_check(&cycle_graph(5), &rat(5, 2), &opts).unwrap() {
            WindowCheck::Vacuous { coloring, .. } => {
                let g = derive_symmetric(&cycle_graph(5));
                assert!(verify_coloring(&g, &coloring).unwrap().is_valid());
            }
            other => panic!("expected vacuous, got {other:?}"),
        }

        match cycle_length_window_check(&cycle_graph(5), &rat(12, 5), &opts).unwrap() {
            WindowCheck::Occupied { cycle, residue } => {
                assert_eq!(cycle.len(), 5);
                assert_eq!(residue, rat(1, 5));
            }
            other => panic!("expected occupied, got {other:?}"),
        }

        match cycle_length_window_check(&complete_graph(3), &rat(3, 1), &opts).unwrap() {
            WindowCheck::Vacuous { .. } => {}
            other => panic!("expected vacuous, got {other:?}"),
        }

        assert!(matches!(
            cycle_length_window_check(&complete_graph(3), &rat(3, 2), &opts),
            Err(Error::BelowPairBound { .. })
        ));

        let empty = SimpleGraph::new(3, []).unwrap();
        assert!(matches!(
            cycle_length_window_check(&empty, &rat(1, 2), &opts).unwrap(),
            WindowCheck::Vacuous { .. }
        ));
    }

    #[test]
    fn kd_rounding_on_the_pentagon() {
        let graph = cycle_graph(5);
        let coloring = pentagon_half_coloring();
        let kd = kd_coloring_from_circular(&graph, &coloring, 5, 2).unwrap();
        let expect: BTreeMap<Vertex, u32> = [(1, 0), (2, 3), (3, 1), (4, 4), (5, 2)].into();
        assert_eq!(kd.values, expect);
        assert!(kd.is_valid_in(&graph).unwrap());

        assert!(matches!(
            kd_coloring_from_circular(&graph, &coloring, 4, 2),
            Err(Error::ModulusMismatch { .. })
        ));
        assert!(matches!(
            kd_coloring_from_circular(&graph, &coloring, 3, 2),
            Err(Error::BadKd(3, 2))
        ));
        assert!(matches!(
            kd_coloring_from_circular(&graph, &coloring, 5, 0),
            Err(Error::BadKd(5, 0))
        ));
    }

    #[test]
    fn kd_colorings_validate_edges() {
        let graph = cycle_graph(5);
        let kd = KdColoring::new(5, 2, [(1, 0), (2, 3), (3, 1), (4, 4), (5, 2)].into()).unwrap();
        assert!(kd.is_valid_in(&graph).unwrap());
        let off = KdColoring::new(5, 2, [(1, 0), (2, 1), (3, 3), (4, 0), (5, 2)].into()).unwrap();
        assert_eq!(off.violations_in(&graph).unwrap(), vec![(1, 2)]);
        assert!(matches!(
            KdColoring::new(5, 2, [(1, 5)].into()),
            Err(Error::ColorOutOfRange { .. })
        ));
    }
}
