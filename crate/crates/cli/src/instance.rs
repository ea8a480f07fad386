//! Line-oriented file formats: instances, breaker/orientation files,
//! and coloring documents. Parsing reports the offending line; the
//! canonical serialization drops comments and fixes the edge order, so
//! equal instances always digest identically.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use circ_core::{
    format_rational, parse_rational, BreakerFunction, CircularColoring, Orientation, Rational,
    Vertex, WeightedSymmetricDigraph,
};

use crate::CliError;

/// A parsed instance: the digraph plus whether it came from the
/// unit-weight `cg` form (some commands only accept that form).
#[derive(Debug, Clone)]
pub struct InstanceFile {
    pub digraph: WeightedSymmetricDigraph,
    pub unit: bool,
    pub comments: Vec<String>,
}

fn malformed(path: &Path, line: usize, what: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.to_path_buf(),
        line,
        what: what.into(),
    }
}

pub fn read_instance(path: &PathBuf) -> Result<InstanceFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.clone(), e))?;
    parse_instance(&text, path)
}

pub fn parse_instance(text: &str, path: &Path) -> Result<InstanceFile, CliError> {
    let mut header: Option<(bool, u32, usize)> = None;
    let mut comments = Vec::new();
    let mut pairs: Vec<(Vertex, Vertex, Rational, Rational)> = Vec::new();

    for (no, raw) in text.lines().enumerate() {
        let no = no + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "c" => comments.push(line[1..].trim_start().to_string()),
            "p" => {
                if header.is_some() {
                    return Err(malformed(path, no, "second problem line"));
                }
                let [_, kind, n, m] = fields[..] else {
                    return Err(malformed(path, no, "problem line needs `p <cwsd|cg> <n> <m>`"));
                };
                let unit = match kind {
                    "cwsd" => false,
                    "cg" => true,
                    other => return Err(malformed(path, no, format!("unknown format `{other}`"))),
                };
                let n: u32 = n
                    .parse()
                    .map_err(|_| malformed(path, no, format!("bad vertex count `{n}`")))?;
                let m: usize = m
                    .parse()
                    .map_err(|_| malformed(path, no, format!("bad edge count `{m}`")))?;
                header = Some((unit, n, m));
            }
            "e" => {
                let Some((unit, n, _)) = header else {
                    return Err(malformed(path, no, "edge before problem line"));
                };
                let (u, v, rest) = match fields[..] {
                    [_, u, v] => (u, v, None),
                    [_, u, v, cuv, cvu] => (u, v, Some((cuv, cvu))),
                    _ => {
                        return Err(malformed(
                            path,
                            no,
                            "edge line needs `e <u> <v>` or `e <u> <v> <c_uv> <c_vu>`",
                        ))
                    }
                };
                let u: Vertex = u
                    .parse()
                    .map_err(|_| malformed(path, no, format!("bad vertex `{u}`")))?;
                let v: Vertex = v
                    .parse()
                    .map_err(|_| malformed(path, no, format!("bad vertex `{v}`")))?;
                if u == 0 || u > n || v == 0 || v > n {
                    return Err(malformed(path, no, format!("vertex outside 1..={n}")));
                }
                if u == v {
                    return Err(malformed(path, no, "self-loop"));
                }
                let key = if u < v { (u, v) } else { (v, u) };
                if pairs.iter().any(|p| (p.0, p.1) == key) {
                    return Err(malformed(path, no, format!("duplicate pair {u} {v}")));
                }
                let (cuv, cvu) = match (unit, rest) {
                    (true, None) => (Rational::from_integer(1.into()), Rational::from_integer(1.into())),
                    (true, Some(_)) => {
                        return Err(malformed(path, no, "unit-weight edges take no weights"))
                    }
                    (false, Some((a, b))) => {
                        let a = parse_rational(a)
                            .map_err(|e| malformed(path, no, format!("bad weight: {e}")))?;
                        let b = parse_rational(b)
                            .map_err(|e| malformed(path, no, format!("bad weight: {e}")))?;
                        (a, b)
                    }
                    (false, None) => {
                        return Err(malformed(path, no, "weighted edges need both weights"))
                    }
                };
                if !(cuv > Rational::from_integer(0.into())
                    && cvu > Rational::from_integer(0.into()))
                {
                    return Err(malformed(path, no, "nonpositive weight"));
                }
                // Store in the direction written; normalize below.
                let (a, b) = if u < v { (u, v) } else { (v, u) };
                let (ca, cb) = if u < v { (cuv, cvu) } else { (cvu, cuv) };
                pairs.push((a, b, ca, cb));
            }
            other => return Err(malformed(path, no, format!("unknown line type `{other}`"))),
        }
    }

    let Some((unit, n, m)) = header else {
        return Err(malformed(path, text.lines().count().max(1), "missing problem line"));
    };
    if pairs.len() != m {
        return Err(malformed(
            path,
            text.lines().count().max(1),
            format!("problem line promises {m} edges, found {}", pairs.len()),
        ));
    }
    let digraph = WeightedSymmetricDigraph::new(n, pairs).map_err(CliError::Core)?;
    Ok(InstanceFile {
        digraph,
        unit,
        comments,
    })
}

/// Canonical form: problem line, then edges sorted by endpoints, with
/// reduced rational weights. Comments are deliberately excluded so the
/// digest depends only on the mathematical content.
pub fn serialize_instance(inst: &InstanceFile) -> String {
    let g = &inst.digraph;
    let mut out = String::new();
    let kind = if inst.unit { "cg" } else { "cwsd" };
    writeln!(out, "p {kind} {} {}", g.vertex_count(), g.pair_count()).unwrap();
    for p in g.pairs() {
        if inst.unit {
            writeln!(out, "e {} {}", p.u, p.v).unwrap();
        } else {
            writeln!(
                out,
                "e {} {} {} {}",
                p.u,
                p.v,
                format_rational(&p.c_uv),
                format_rational(&p.c_vu)
            )
            .unwrap();
        }
    }
    out
}

pub fn instance_digest(inst: &InstanceFile) -> String {
    let mut hasher = Sha256::new();
    hasher.update(serialize_instance(inst).as_bytes());
    format!("sha256:{:x}", hasher.finalize())
}

/// Reads a `t <u> <v>` file as a breaker function for `g`: each line
/// sets `T(u -> v) = 1`, and every edge pair must appear exactly once.
pub fn read_breaker(
    path: &PathBuf,
    g: &WeightedSymmetricDigraph,
) -> Result<BreakerFunction, CliError> {
    let directed = read_directed_pairs(path, g)?;
    let mut bits = vec![None; g.pair_count()];
    for (no, x, y) in directed {
        let (i, forward) = g.pair_index(x, y).expect("validated above");
        if bits[i].is_some() {
            return Err(malformed(path, no, format!("pair {x} {y} set twice")));
        }
        bits[i] = Some(forward);
    }
    match bits.iter().position(Option::is_none) {
        None => Ok(BreakerFunction::new(
            bits.into_iter().map(Option::unwrap).collect(),
        )),
        Some(i) => {
            let p = &g.pairs()[i];
            Err(CliError::Input(format!(
                "{}: no line for edge pair {} {}",
                path.display(),
                p.u,
                p.v
            )))
        }
    }
}

/// Reads the same `t <u> <v>` format as an orientation: each line
/// directs edge `{u, v}` from `u` to `v`.
pub fn read_orientation(
    path: &PathBuf,
    g: &WeightedSymmetricDigraph,
) -> Result<Orientation, CliError> {
    let t = read_breaker(path, g)?;
    Ok(t.to_orientation())
}

fn read_directed_pairs(
    path: &PathBuf,
    g: &WeightedSymmetricDigraph,
) -> Result<Vec<(usize, Vertex, Vertex)>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.clone(), e))?;
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let no = no + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [tag, u, v] = fields[..] else {
            return Err(malformed(path, no, "expected `t <u> <v>`"));
        };
        if tag != "t" {
            return Err(malformed(path, no, format!("unknown line type `{tag}`")));
        }
        let u: Vertex = u
            .parse()
            .map_err(|_| malformed(path, no, format!("bad vertex `{u}`")))?;
        let v: Vertex = v
            .parse()
            .map_err(|_| malformed(path, no, format!("bad vertex `{v}`")))?;
        if g.pair_index(u, v).is_none() {
            return Err(malformed(path, no, format!("no edge pair {u} {v}")));
        }
        out.push((no, u, v));
    }
    Ok(out)
}

/// Reads a coloring document: JSON with a rational `r` and a `colors`
/// object mapping vertex ids to rational strings.
pub fn read_coloring(path: &PathBuf) -> Result<CircularColoring, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.clone(), e))?;
    let doc: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| malformed(path, e.line(), format!("bad JSON: {e}")))?;
    let bad = |what: &str| CliError::Input(format!("{}: {what}", path.display()));
    let obj = doc.as_object().ok_or_else(|| bad("expected an object"))?;
    let r = obj
        .get("r")
        .and_then(|v| v.as_str())
        .ok_or_else(|| bad("missing string field `r`"))?;
    let r = parse_rational(r).map_err(CliError::Core)?;
    let colors_obj = obj
        .get("colors")
        .and_then(|v| v.as_object())
        .ok_or_else(|| bad("missing object field `colors`"))?;
    let mut colors = BTreeMap::new();
    for (key, value) in colors_obj {
        let v: Vertex = key
            .parse()
            .map_err(|_| bad(&format!("bad vertex id `{key}`")))?;
        let s = value
            .as_str()
            .ok_or_else(|| bad(&format!("color of `{key}` must be a string")))?;
        colors.insert(v, parse_rational(s).map_err(CliError::Core)?);
    }
    CircularColoring::new(r, colors).map_err(CliError::Core)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<InstanceFile, CliError> {
        parse_instance(text, Path::new("test.in"))
    }

    #[test]
    fn parses_weighted_and_unit_instances() {
        let inst = parse("p cwsd 2 1\ne 1 2 3/2 1/2\n").unwrap();
        assert!(!inst.unit);
        assert_eq!(inst.digraph.pair_count(), 1);
        assert_eq!(
            inst.digraph.arc_weight(1, 2),
            Some(&circ_core::rat(3, 2))
        );
        assert_eq!(
            inst.digraph.arc_weight(2, 1),
            Some(&circ_core::rat(1, 2))
        );

        let inst = parse("c triangle\np cg 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
        assert!(inst.unit);
        assert_eq!(inst.comments, vec!["triangle"]);
        assert_eq!(inst.digraph.arc_weight(3, 1), Some(&circ_core::rat(1, 1)));
    }

    #[test]
    fn reversed_edge_direction_keeps_weight_sides() {
        // `e 2 1 a b` assigns a to the arc 2 -> 1.
        let inst = parse("p cwsd 2 1\ne 2 1 3/2 1/2\n").unwrap();
        assert_eq!(inst.digraph.arc_weight(2, 1), Some(&circ_core::rat(3, 2)));
        assert_eq!(inst.digraph.arc_weight(1, 2), Some(&circ_core::rat(1, 2)));
    }

    #[test]
    fn rejects_malformed_lines_with_positions() {
        let line_of = |text: &str| match parse(text) {
            Err(CliError::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(line_of("p cwsd 2 1\ne 1 2 0 1\n"), 2);
        assert_eq!(line_of("p cg 2 1\ne 1 2\ne 2 1\n"), 3);
        assert_eq!(line_of("p cg 2 1\ne 1 3\n"), 2);
        assert_eq!(line_of("p cg 2 1\ne 1 1\n"), 2);
        assert_eq!(line_of("e 1 2\n"), 1);
        assert_eq!(line_of("p cg 2 2\ne 1 2\n"), 2);
        assert_eq!(line_of("p cg 2 1\ne 1 2 1 1\n"), 2);
        assert_eq!(line_of("p cwsd 2 1\ne 1 2\n"), 2);
        assert_eq!(line_of("p what 2 1\ne 1 2\n"), 1);
        assert_eq!(line_of(""), 1);
    }

    #[test]
    fn canonical_serialization_round_trips_and_digests() {
        // Same instance written in two different orders and directions.
        let a = parse("p cwsd 3 2\ne 2 3 1 2\ne 2 1 5 1/3\n").unwrap();
        let b = parse("c noise\np cwsd 3 2\ne 1 2 1/3 5\ne 3 2 2 1\n").unwrap();
        assert_eq!(serialize_instance(&a), serialize_instance(&b));
        assert_eq!(instance_digest(&a), instance_digest(&b));

        let again = parse(&serialize_instance(&a)).unwrap();
        assert_eq!(again.digraph, a.digraph);
        assert_eq!(again.unit, a.unit);
        assert_eq!(
            serialize_instance(&a),
            "p cwsd 3 2\ne 1 2 1/3 5\ne 2 3 1 2\n"
        );
    }

    #[test]
    fn breaker_files_cover_each_pair_once() {
        let inst = parse("p cg 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
        let dir = tempfile::tempdir().unwrap();
        let write = |name: &str, text: &str| {
            let p = dir.path().join(name);
            std::fs::write(&p, text).unwrap();
            p
        };
        let t = read_breaker(&write("ok.t", "c note\nt 1 2\nt 3 2\nt 1 3\n"), &inst.digraph)
            .unwrap();
        // Pairs (1,2),(1,3),(2,3): forward, forward, backward.
        assert_eq!(t.index(), 0b011);

        assert!(matches!(
            read_breaker(&write("dup.t", "t 1 2\nt 2 1\nt 1 3\n"), &inst.digraph),
            Err(CliError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            read_breaker(&write("short.t", "t 1 2\n"), &inst.digraph),
            Err(CliError::Input(_))
        ));
        assert!(matches!(
            read_breaker(&write("stray.t", "t 1 2\nt 2 3\nt 2 4\n"), &inst.digraph),
            Err(CliError::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn coloring_documents_parse_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("phi.json");
        std::fs::write(&p, r#"{"r": "5/2", "colors": {"1": "0", "2": "3/2"}}"#).unwrap();
        let c = read_coloring(&p).unwrap();
        assert_eq!(c.r(), &circ_core::rat(5, 2));
        assert_eq!(c.color(2), Some(&circ_core::rat(3, 2)));

        std::fs::write(&p, r#"{"r": "5/2", "colors": {"1": "3"}}"#).unwrap();
        assert!(matches!(
            read_coloring(&p),
            Err(CliError::Core(circ_core::Error::ColorOutOfRange { .. }))
        ));
        std::fs::write(&p, "{").unwrap();
        assert!(matches!(read_coloring(&p), Err(CliError::Parse { .. })));
    }
}
