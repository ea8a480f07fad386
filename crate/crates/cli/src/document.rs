//! Result documents. serde_json maps keep sorted keys, and every
//! rational is serialized as a reduced string, so identical results
//! always produce byte-identical output.

use serde_json::{json, Map, Value};

use circ_core::{
    format_rational, ArcViolation, BreakerFunction, BreakerWitness, CircularColoring, DangerFilter,
    Dicycle, KdColoring, Rational, RatioValue, VerificationReport, WeightedSymmetricDigraph,
};

use crate::instance::{instance_digest, InstanceFile};

pub fn rational(q: &Rational) -> Value {
    json!(format_rational(q))
}

pub fn ratio(rv: &RatioValue) -> Value {
    match rv {
        RatioValue::Infinite => json!("infinite"),
        RatioValue::Finite(q) => rational(q),
    }
}

pub fn breaker(g: &WeightedSymmetricDigraph, t: &BreakerFunction) -> Value {
    let arcs: Vec<Value> = t
        .forward_arcs(g)
        .into_iter()
        .map(|(u, v)| json!([u, v]))
        .collect();
    json!({
        "index": t.index().to_string(),
        "arcs": arcs,
    })
}

/// Same shape as a coloring input file, so emitted colorings can be fed
/// straight back through `--coloring`.
pub fn coloring(c: &CircularColoring) -> Value {
    let colors: Map<String, Value> = c
        .colors()
        .iter()
        .map(|(v, q)| (v.to_string(), rational(q)))
        .collect();
    json!({
        "r": rational(c.r()),
        "colors": colors,
    })
}

pub fn kd_coloring(kd: &KdColoring) -> Value {
    let values: Map<String, Value> = kd
        .values
        .iter()
        .map(|(v, c)| (v.to_string(), json!(c)))
        .collect();
    json!({
        "k": kd.k,
        "d": kd.d,
        "values": values,
    })
}

pub struct CycleDetail<'a> {
    pub breaker: Option<&'a BreakerFunction>,
    pub filter: Option<&'a DangerFilter>,
}

pub fn cycle(
    g: &WeightedSymmetricDigraph,
    c: &Dicycle,
    detail: &CycleDetail,
) -> Result<Value, circ_core::Error> {
    let cost = circ_core::cycle_cost(g, c)?;
    let mut doc = Map::new();
    doc.insert("vertices".into(), json!(c.vertices()));
    doc.insert("cost".into(), rational(&cost));
    if let Some(f) = detail.filter {
        doc.insert("residue".into(), rational(&f.residue(&cost)));
    }
    if let Some(t) = detail.breaker {
        let breaks = circ_core::cycle_breaks(g, t, c)?;
        doc.insert("breaks".into(), json!(breaks));
        let value = if breaks == 0 {
            RatioValue::Infinite
        } else {
            RatioValue::Finite(cost / Rational::from_integer(breaks.into()))
        };
        doc.insert("ratio".into(), ratio(&value));
    }
    Ok(Value::Object(doc))
}

pub fn breaker_witnesses(
    g: &WeightedSymmetricDigraph,
    witnesses: &[BreakerWitness],
) -> Result<Value, circ_core::Error> {
    let mut out = Vec::with_capacity(witnesses.len());
    for w in witnesses {
        let detail = CycleDetail {
            breaker: Some(&w.breaker),
            filter: None,
        };
        out.push(json!({
            "breaker": breaker(g, &w.breaker),
            "cycle": cycle(g, &w.cycle, &detail)?,
            "ratio": ratio(&w.ratio),
        }));
    }
    Ok(Value::Array(out))
}

pub fn violations(report: &VerificationReport) -> Value {
    let list: Vec<Value> = report
        .violations
        .iter()
        .map(|v: &ArcViolation| {
            json!({
                "arc": [v.tail, v.head],
                "required": rational(&v.required),
                "gap": rational(&v.gap),
            })
        })
        .collect();
    json!({
        "arcs_checked": report.arcs_checked,
        "violations": list,
    })
}

/// Wraps a command's body in the common envelope. Body keys merge at
/// the top level; the map keeps everything sorted.
pub fn envelope(
    command: &str,
    inst: &InstanceFile,
    parameters: Value,
    body: Map<String, Value>,
) -> Value {
    let mut doc = Map::new();
    doc.insert("command".into(), json!(command));
    let mut about = Map::new();
    about.insert("digest".into(), json!(instance_digest(inst)));
    about.insert("vertices".into(), json!(inst.digraph.vertex_count()));
    about.insert("pairs".into(), json!(inst.digraph.pair_count()));
    about.insert("unit".into(), json!(inst.unit));
    if let Some(name) = inst.comments.first() {
        about.insert("name".into(), json!(name));
    }
    doc.insert("instance".into(), Value::Object(about));
    if !parameters.is_null() {
        doc.insert("parameters".into(), parameters);
    }
    for (k, v) in body {
        doc.insert(k, v);
    }
    Value::Object(doc)
}
