//! Exact circular-coloring toolkit for weighted symmetric digraphs.
//!
//! Everything here is computed over exact rationals: feasibility of a
//! circular `r`-coloring is decided through breaker functions and cycle
//! ratios, colorings are constructed by a spanning-tree potential search,
//! and the circular chromatic number comes out of the min-max cycle-ratio
//! formula. Brute-force reference implementations live in [`oracle`] so
//! every nontrivial answer can be cross-checked on small instances.

pub mod chromatic;
pub mod cycles;
pub mod graph;
pub mod oracle;
pub mod parametric;
pub mod potential;
pub mod rational;

pub use chromatic::{
    arc_inequality_check, chi_c_exact, circular_distance, color_by_orientation,
    cycle_length_window_check, decide_r, extract_breaker, kd_coloring_from_circular,
    verify_coloring, ArcViolation, BreakerWitness, ChiC, CircularColoring, Decision,
    InfeasibleReason, KdColoring, OrientationOutcome, SearchOptions, VerificationReport,
    WindowCheck,
};
pub use cycles::{
    collect_dicycles, cycle_breaks, cycle_cost, enumerate_dicycles, max_ratio_exhaustive, tau,
    traversal_split, CycleFunctionals, DangerFilter, MaxRatio, RatioValue, TraversalSplit,
};
pub use graph::{
    breaker_complement, breaker_from_orientation, derive_symmetric, BreakerFunction, Dicycle,
    Dipath, Orientation, SimpleGraph, Vertex, WeightedSymmetricDigraph,
};
pub use parametric::max_ratio_parametric;
pub use potential::{
    construct_coloring, ComponentSearch, ConstructionOutcome, PotentialTree, ReducedWeights,
};
pub use rational::{format_rational, mod_r, parse_rational, rat, Rational};

/// Errors shared by every layer of the library.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("vertex count must be positive")]
    EmptyVertexSet,
    #[error("vertex {0} out of range 1..={1}")]
    VertexOutOfRange(Vertex, u32),
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge pair {{{0}, {1}}}")]
    DuplicatePair(Vertex, Vertex),
    #[error("arc weight for {0} -> {1} must be positive, got {2}")]
    NonPositiveWeight(Vertex, Vertex, String),
    #[error("no arc {0} -> {1} in the digraph")]
    MissingArc(Vertex, Vertex),
    #[error("L(G,c) is undefined: the digraph has no arcs")]
    NoArcs,
    #[error("breaker/orientation covers {found} edge pairs, digraph has {expected}")]
    DomainMismatch { expected: usize, found: usize },
    #[error("modulus must be positive, got {0}")]
    NonPositiveModulus(String),
    #[error("color {value} for vertex {vertex} is outside [0, {modulus})")]
    ColorOutOfRange {
        vertex: Vertex,
        value: String,
        modulus: String,
    },
    #[error("coloring does not assign a color to vertex {0}")]
    MissingColor(Vertex),
    #[error("coloring is not a valid circular coloring ({violations} violated arcs)")]
    InvalidColoring { violations: usize },
    #[error("r = {r} is below L(G,c) = {l}: the 2-dicycle on {{{u}, {v}}} is infeasible")]
    BelowPairBound {
        r: String,
        l: String,
        u: Vertex,
        v: Vertex,
    },
    #[error("vertex set {{{0:?}}} is not connected in the underlying graph")]
    DisconnectedComponent(Vec<Vertex>),
    #[error("{what} cap of {cap} exceeded; raise the cap or use a cheaper procedure")]
    CapExceeded { what: &'static str, cap: u64 },
    #[error("r = {r} is not equal to k/d = {k}/{d}")]
    ModulusMismatch { r: String, k: u32, d: u32 },
    #[error("invalid (k, d): need k >= 2d >= 1, got k = {0}, d = {1}")]
    BadKd(u32, u32),
    #[error("tolerance must be positive, got {0}")]
    NonPositiveTolerance(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Resource-cap errors are reported separately from input errors by
    /// callers that distinguish "too big" from "malformed".
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}
