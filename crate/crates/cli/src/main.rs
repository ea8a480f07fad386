//! `circ`: exact circular coloring toolkit over line-oriented instance
//! files. Every command prints either a short human summary or, with
//! `--json`, a canonical machine-readable document. Exit codes: 0 for
//! feasible/valid, 1 for infeasible/invalid (a real answer, not a
//! failure), 2 for input errors, 3 for exceeded resource caps.

mod document;
mod instance;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use circ_core::oracle;
use circ_core::{
    chi_c_exact, collect_dicycles, color_by_orientation, construct_coloring,
    cycle_length_window_check, decide_r, extract_breaker, kd_coloring_from_circular,
    max_ratio_exhaustive, max_ratio_parametric, parse_rational, rat, verify_coloring, ChiC,
    CircularColoring, DangerFilter, Decision, Error, InfeasibleReason, MaxRatio, OrientationOutcome,
    Rational, SearchOptions, WindowCheck,
};

use document as doc;
use instance::{read_breaker, read_coloring, read_instance, read_orientation, InstanceFile};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] Error),
    #[error("{}: {}", .0.display(), .1)]
    Io(PathBuf, std::io::Error),
    #[error("{}:{line}: {what}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        what: String,
    },
    #[error("{0}")]
    Input(String),
}

fn exit_code(err: &CliError) -> i32 {
    match err {
        CliError::Core(e) if e.is_cap_exceeded() => 3,
        CliError::Core(
            Error::InvalidColoring { .. }
            | Error::BelowPairBound { .. }
            | Error::ColorOutOfRange { .. },
        ) => 1,
        _ => 2,
    }
}

#[derive(Parser)]
#[command(name = "circ", version, about = "Exact circular colorings of weighted symmetric digraphs")]
struct Cli {
    /// Print the canonical JSON document instead of a summary.
    #[arg(long, global = true)]
    json: bool,
    /// Abort with exit 3 if more dicycles would be enumerated.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_cycles: u64,
    /// Abort with exit 3 if more breakers would be swept.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    max_breakers: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact circular chromatic number with an optimal breaker and coloring.
    ChiC { instance: PathBuf },
    /// Decide whether a circular r-coloring exists.
    Decide {
        #[arg(short)]
        r: String,
        instance: PathBuf,
    },
    /// Construct and verify the coloring for a given breaker or orientation.
    Color {
        #[arg(short)]
        r: String,
        #[arg(long)]
        breaker: Option<PathBuf>,
        #[arg(long)]
        orientation: Option<PathBuf>,
        instance: PathBuf,
    },
    /// Check a coloring document arc by arc.
    Verify {
        #[arg(short)]
        r: String,
        #[arg(long)]
        coloring: PathBuf,
        instance: PathBuf,
    },
    /// Recover the breaker induced by a valid coloring.
    ExtractBreaker {
        #[arg(short)]
        r: String,
        #[arg(long)]
        coloring: PathBuf,
        instance: PathBuf,
    },
    /// Enumerate elementary dicycles, optionally filtered or annotated.
    Cycles {
        /// Keep only cycles whose cost falls in the danger window at r.
        #[arg(long)]
        filter_r: Option<String>,
        /// Annotate each cycle with breaks and ratio under this breaker.
        #[arg(long)]
        breaker: Option<PathBuf>,
        instance: PathBuf,
    },
    /// Maximum cycle ratio under a breaker.
    MaxRatio {
        #[arg(long)]
        breaker: PathBuf,
        /// Binary-search solver instead of full enumeration.
        #[arg(long)]
        parametric: bool,
        /// Stopping tolerance for the parametric search (result stays exact).
        #[arg(long, requires = "parametric")]
        tol: Option<String>,
        instance: PathBuf,
    },
    /// Round a circular k/d-coloring to an integer (k, d)-coloring.
    KdColor {
        #[arg(short)]
        k: u32,
        #[arg(short)]
        d: u32,
        #[arg(long)]
        coloring: PathBuf,
        instance: PathBuf,
    },
    /// Color a unit graph at r from an orientation, if every dangerous
    /// cycle passes the traversal test.
    CheckCor2 {
        #[arg(short)]
        r: String,
        #[arg(long)]
        orientation: PathBuf,
        instance: PathBuf,
    },
    /// Color a unit graph at r with any orientation, if no cycle length
    /// falls in the danger window.
    CheckCor4 {
        #[arg(short)]
        r: String,
        instance: PathBuf,
    },
    /// Compare the breaker-sweep chromatic number against the
    /// backtracking brute force.
    CrossCheck { instance: PathBuf },
}

struct Outcome {
    document: Value,
    summary: String,
    code: i32,
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let text = if cli.json {
                serde_json::to_string_pretty(&out.document).unwrap()
            } else {
                out.summary
            };
            // A consumer hanging up early (broken pipe) is not an error.
            use std::io::Write;
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            std::process::exit(out.code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let opts = SearchOptions {
        max_cycles: cli.max_cycles,
        max_breakers: cli.max_breakers,
        ..SearchOptions::default()
    };
    match &cli.command {
        Command::ChiC { instance } => chi_c_cmd(instance, &opts),
        Command::Decide { r, instance } => decide_cmd(r, instance, &opts),
        Command::Color {
            r,
            breaker,
            orientation,
            instance,
        } => color_cmd(r, breaker.as_ref(), orientation.as_ref(), instance),
        Command::Verify {
            r,
            coloring,
            instance,
        } => verify_cmd(r, coloring, instance),
        Command::ExtractBreaker {
            r,
            coloring,
            instance,
        } => extract_cmd(r, coloring, instance),
        Command::Cycles {
            filter_r,
            breaker,
            instance,
        } => cycles_cmd(filter_r.as_ref(), breaker.as_ref(), instance, &opts),
        Command::MaxRatio {
            breaker,
            parametric,
            tol,
            instance,
        } => max_ratio_cmd(breaker, *parametric, tol.as_ref(), instance, &opts),
        Command::KdColor {
            k,
            d,
            coloring,
            instance,
        } => kd_color_cmd(*k, *d, coloring, instance),
        Command::CheckCor2 {
            r,
            orientation,
            instance,
        } => cor2_cmd(r, orientation, instance, &opts),
        Command::CheckCor4 { r, instance } => cor4_cmd(r, instance, &opts),
        Command::CrossCheck { instance } => cross_check_cmd(instance, &opts),
    }
}

fn modulus(text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(CliError::Core)
}

fn require_unit(inst: &InstanceFile, cmd: &str) -> Result<(), CliError> {
    if inst.unit {
        Ok(())
    } else {
        Err(CliError::Input(format!(
            "{cmd} requires a unit-weight instance (p cg)"
        )))
    }
}

fn chi_c_cmd(path: &PathBuf, opts: &SearchOptions) -> Result<Outcome, CliError> {
    let inst = read_instance(path)?;
    let g = &inst.digraph;
    let mut body = Map::new();
    let (summary, code) = match chi_c_exact(g, opts)? {
        ChiC::Degenerate => {
            body.insert("verdict".into(), json!("degenerate"));
            body.insert("value".into(), json!("0"));
            ("chi_c degenerate: no arcs, reported as 0".to_string(), 0)
        }
        ChiC::Finite {
            value,
            breaker,
            coloring,
        } => {
            body.insert("verdict".into(), json!("finite"));
            body.insert("value".into(), doc::rational(&value));
            body.insert("breaker".into(), doc::breaker(g, &breaker));
            body.insert("coloring".into(), doc::coloring(&coloring));
            (
                format!(
                    "chi_c = {} (breaker index {}, coloring verified)",
                    circ_core::format_rational(&value),
                    breaker.index()
                ),
                0,
            )
        }
    };
    Ok(Outcome {
        document: doc::envelope("chi-c", &inst, Value::Null, body),
        summary,
        code,
    })
}

fn decide_cmd(r: &str, path: &PathBuf, opts: &SearchOptions) -> Result<Outcome, CliError> {
    let inst = read_instance(path)?;
    let g = &inst.digraph;
    let r = modulus(r)?;
    let params = json!({ "r": doc::rational(&r) });
    let mut body = Map::new();
    let (summary, code) = match decide_r(g, &r, opts)? {
        Decision::Feasible { breaker, coloring } => {
            body.insert("verdict".into(), json!("feasible"));
            body.insert("breaker".into(), doc::breaker(g, &breaker));
            body.insert("coloring".into(), doc::coloring(&coloring));
            (
                format!(
                    "feasible: circular {}-coloring found (breaker index {}, verified)",
                    circ_core::format_rational(&r),
                    breaker.index()
                ),
                0,
            )
        }
        Decision::Infeasible { reason } => {
            body.insert("verdict".into(), json!("infeasible"));
            let summary = match &reason {
                InfeasibleReason::PairBound { l, u, v } => {
                    body.insert(
                        "reason".into(),
                        json!({
                            "type": "pair-bound",
                            "l": doc::rational(l),
                            "pair": [u, v],
                        }),
                    );
                    format!(
                        "infeasible: r below the heaviest pair bound L = {}",
                        circ_core::format_rational(l)
                    )
                }
                InfeasibleReason::BreakersExhausted { tried, witnesses } => {
                    body.insert(
                        "reason".into(),
                        json!({ "type": "breakers-exhausted", "tried": tried }),
                    );
                    body.insert(
                        "witnesses".into(),
                        doc::breaker_witnesses(g, witnesses).map_err(CliError::Core)?,
                    );
                    format!(
                        "infeasible: all {tried} breakers leave a dangerous cycle over r \
                         ({} witnesses)",
                        witnesses.len()
                    )
                }
            };
            (summary, 1)
        }
    };
    Ok(Outcome {
        document: doc::envelope("decide", &inst, params, body),
        summary,
        code,
    })
}

fn color_cmd(
    r: &str,
    breaker: Option<&PathBuf>,
    orientation: Option<&PathBuf>,
    path: &PathBuf,
) -> Result<Outcome, CliError> {
    let inst = read_instance(path)?;
    let g = &inst.digraph;
    let r = modulus(r)?;
    let t = match (breaker, orientation) {
        (Some(b), None) => read_breaker(b, g)?,
        (None, Some(o)) => {
            let omega = read_orientation(o, g)?;
            circ_core::breaker_from_orientation(g, &omega).map_err(CliError::Core)?
        }
        _ => {
            return Err(CliError::Input(
                "color needs exactly one of --breaker or --orientation".into(),
            ))
        }
    };
    let params = json!({ "r": doc::rational(&r) });
    let mut body = Map::new();
    body.insert("breaker".into(), doc::breaker(g, &t));
    let (summary, code) = match construct_coloring(g, &t, &r) {
        Ok(outcome) => {
            let coloring =
                CircularColoring::new(r.clone(), outcome.colors).map_err(CliError::Core)?;
            let report = verify_coloring(g, &coloring).map_err(CliError::Core)?;
            body.insert("coloring".into(), doc::coloring(&coloring));
            body.insert("verification".into(), doc::violations(&report));
            if report.is_valid() {
                body.insert("verdict".into(), json!("valid"));
                ("constructed coloring is valid".to_string(), 0)
            } else {
                body.insert("verdict".into(), json!("invalid"));
                (
                    format!(
                        "constructed coloring violates {} arc(s): this breaker does not \
                         certify r",
                        report.violations.len()
                    ),
                    1,
                )
            }
        }
        Err(Error::BelowPairBound { l, u, v, .. }) => {
            body.insert("verdict".into(), json!("infeasible"));
            body.insert(
                "reason".into(),
                json!({ "type": "pair-bound", "l": l.clone(), "pair": [u, v] }),
            );
            (format!("infeasible: r below the pair bound L = {l}"), 1)
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Outcome {
        document: doc::envelope("color", &inst, params, body),
        summary,
        code,
    })
}

fn verify_cmd(r: &str, coloring: &PathBuf, path: &PathBuf) -> Result<Outcome, CliError> {
    let inst = read_instance(path)?;
    let g = &inst.digraph;
    let r = modulus(r)?;
    let c = read_coloring(coloring)?;
    if *c.r() != r {
        return Err(CliError::Input(format!(
            "coloring document has r = {}, command asked for r = {}",
            circ_core::format_rational(c.r()),
            circ_core::format_rational(&r)
        )));
    }
    let report = verify_coloring(g, &c).map_err(CliError::Core)?;
    let params = json!({ "r": doc::rational(&r) });
    let mut body = Map::new();
    body.insert("verification".into(), doc::violations(&report));
    let (summary, code) = if report.is_valid() {
        body.insert("verdict".into(), json!("valid"));
        (
            format!("valid circular coloring ({} arcs checked)", report.arcs_checked),
            0,
        )
    } else {
        body.insert("verdict".into(), json!("invalid"));
        (
            format!("invalid: {} arc(s) violated", report.violations.len()),
            1,
        )
    };
    Ok(Outcome {
        document: doc::envelope("verify", &inst, params, body),
        summary,
        code,
    })
}

fn extract_cmd(r: &str, coloring: &PathBuf, path: &PathBuf) -> Result<Outcome, CliError> {
    let inst = read_instance(path)?;
    let g = &inst.digraph;
    let r = modulus(r)?;
    let c = read_coloring(coloring)?;
    if *c.r() != r {
        return Err(CliError::Input(format!(
            "coloring document has r = {}, command asked for r = {}",
            circ_core::format_rational(c.r()),
            circ_core::format_rational(&r)
        )));
    }
    let params = json!({ "r": doc::rational(&r) });
    let mut body = Map::new();
    let (summary, code) = match extract_breaker(g, &c) {
        Ok(t) => {
            let holds = circ_core::arc_inequality_check(g, &c, &t)
                .map_err(CliError::Core)?
                .is_empty();
            body.insert("verdict".into(), json!("extracted"));
            body.insert("breaker".into(), doc::breaker(g, &t));
            body.insert("arc_inequality_holds".into(), json!(holds));
            (
                format!("breaker index {} extracted from the coloring", t.index()),
                0,
            )
        }
        Err(Error::InvalidColoring { violations }) => {
            body.insert("verdict".into(), json!("invalid"));
            body.insert("violations".into(), json!(violations));
            (
                format!("coloring is invalid ({violations} arc violations); nothing to extract"),
                1,
            )
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Outcome {
        document: doc::envelope("extract-breaker", &inst, params, body),
        summary,
        code,
    })
}

fn cycles_cmd(
    filter_r: Option<&String>,
    breaker: Option<&PathBuf>,
    path: &PathBuf,
    opts: &SearchOptions,
) -> Result<Outcome, CliError> {
    let inst = read_instance(path)?;
    let g = &inst.digraph;
    let t = breaker.map(|b| read_breaker(b, g)).transpose()?;
    let filter = match filter_r {
        Some(s) if g.pair_count() > 0 => {
            Some(DangerFilter::for_digraph(g, modulus(s)?).map_err(CliError::Core)?)
        }
        Some(s) => {
            modulus(s)?;
            None
        }
        None => None,
    };
    let detail = doc::CycleDetail {
        breaker: t.as_ref(),
        filter: filter.as_ref(),
    };
    let mut listed = Vec::new();
    for c in collect_dicycles(g, opts.max_cycles).map_err(CliError::Core)? {
        let cost = circ_core::cycle_cost(g, &c).map_err(CliError::Core)?;
        if filter.as_ref().is_some_and(|f| !f.admits(&cost)) {
            continue;
        }
        listed.push(doc::cycle(g, &c, &detail).map_err(CliError::Core)?);
    }
    let mut params = Map::new();
    if let Some(s) = filter_r {
        params.insert("filter_r".into(), doc::rational(&modulus(s)?));
    }
    let params = if params.is_empty() {
        Value::Null
    } else {
        Value::Object(params)
    };
    let count = listed.len();
    let mut body = Map::new();
    body.insert("count".into(), json!(count));
    body.insert("cycles".into(), Value::Array(listed));
    let what = if filter_r.is_some() {
        "dangerous dicycles"
    } else {
        "dicycles"
    };
    Ok(Outcome {
        document: doc::envelope("cycles", &inst, params, body),
        summary: format!("{count} {what}"),
        code: 0,
    })
}

fn max_ratio_cmd(
    breaker: &PathBuf,
    parametric: bool,
    tol: Option<&String>,
    path: &PathBuf,
    opts: &SearchOptions,
) -> Result<Outcome, CliError> {
    let inst = read_instance(path)?;
    let g = &inst.digraph;
    let t = read_breaker(breaker, g)?;
    let result = if parametric {
        let tol = match tol {
            Some(s) => modulus(s)?,
            None => rat(1, 1_000_000),
        };
        max_ratio_parametric(g, &t, &tol).map_err(CliError::Core)?
    } else {
        max_ratio_exhaustive(g, &t, None, opts.max_cycles).map_err(CliError::Core)?
    };
    let method = if parametric { "parametric" } else { "exhaustive" };
    let params = json!({ "method": method });
    let mut body = Map::new();
    body.insert("breaker".into(), doc::breaker(g, &t));
    let summary = match &result {
        MaxRatio::Empty => {
            body.insert("verdict".into(), json!("empty-maximum"));
            "no dicycles: empty maximum".to_string()
        }
        MaxRatio::Attained { ratio, witness } => {
            let detail = doc::CycleDetail {
                breaker: Some(&t),
                filter: None,
            };
            body.insert("verdict".into(), json!("attained"));
            body.insert("ratio".into(), doc::ratio(ratio));
            body.insert(
                "witness".into(),
                doc::cycle(g, witness, &detail).map_err(CliError::Core)?,
            );
            match ratio {
                circ_core::RatioValue::Infinite => format!(
                    "maximum ratio infinite ({method}): witness cycle has no breaks"
                ),
                circ_core::RatioValue::Finite(q) => format!(
                    "maximum ratio {} ({method})",
                    circ_core::format_rational(q)
                ),
            }
        }
    };
    Ok(Outcome {
        document: doc::envelope("max-ratio", &inst, params, body),
        summary,
        code: 0,
    })
}

fn kd_color_cmd(k: u32, d: u32, coloring: &PathBuf, path: &PathBuf) -> Result<Outcome, CliError> {
    let inst = read_instance(path)?;
    require_unit(&inst, "kd-color")?;
    let graph = inst.digraph.underlying_graph();
    let c = read_coloring(coloring)?;
    let kd = kd_coloring_from_circular(&graph, &c, k, d).map_err(CliError::Core)?;
    let params = json!({ "k": k, "d": d });
    let mut body = Map::new();
    body.insert("verdict".into(), json!("valid"));
    body.insert("kd_coloring".into(), doc::kd_coloring(&kd));
    Ok(Outcome {
        document: doc::envelope("kd-color", &inst, params, body),
        summary: format!("({k}, {d})-coloring obtained and checked"),
        code: 0,
    })
}

fn cor2_cmd(
    r: &str,
    orientation: &PathBuf,
    path: &PathBuf,
    opts: &SearchOptions,
) -> Result<Outcome, CliError> {
    let inst = read_instance(path)?;
    require_unit(&inst, "check-cor2")?;
    let g = &inst.digraph;
    let graph = g.underlying_graph();
    let omega = read_orientation(orientation, g)?;
    let r = modulus(r)?;
    let params = json!({ "r": doc::rational(&r) });
    let mut body = Map::new();
    let (summary, code) = match color_by_orientation(&graph, &omega, &r, opts) {
        Ok(OrientationOutcome::Colored { breaker, coloring }) => {
            body.insert("verdict".into(), json!("colored"));
            body.insert("breaker".into(), doc::breaker(g, &breaker));
            body.insert("coloring".into(), doc::coloring(&coloring));
            ("orientation colors the graph (coloring verified)".to_string(), 0)
        }
        Ok(OrientationOutcome::Blocked { cycle, tau }) => {
            let detail = doc::CycleDetail {
                breaker: None,
                filter: None,
            };
            body.insert("verdict".into(), json!("hypothesis-failed"));
            body.insert(
                "witness".into(),
                doc::cycle(g, &cycle, &detail).map_err(CliError::Core)?,
            );
            body.insert("tau".into(), doc::ratio(&tau));
            ("hypothesis fails: a dangerous cycle exceeds r".to_string(), 1)
        }
        Err(Error::BelowPairBound { l, .. }) => {
            body.insert("verdict".into(), json!("hypothesis-failed"));
            body.insert("reason".into(), json!({ "type": "pair-bound", "l": l }));
            ("hypothesis fails: r is below 2".to_string(), 1)
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Outcome {
        document: doc::envelope("check-cor2", &inst, params, body),
        summary,
        code,
    })
}

fn cor4_cmd(r: &str, path: &PathBuf, opts: &SearchOptions) -> Result<Outcome, CliError> {
    let inst = read_instance(path)?;
    require_unit(&inst, "check-cor4")?;
    let g = &inst.digraph;
    let graph = g.underlying_graph();
    let r = modulus(r)?;
    let params = json!({ "r": doc::rational(&r) });
    let mut body = Map::new();
    let (summary, code) = match cycle_length_window_check(&graph, &r, opts) {
        Ok(WindowCheck::Vacuous { breaker, coloring }) => {
            body.insert("verdict".into(), json!("feasible"));
            body.insert("breaker".into(), doc::breaker(g, &breaker));
            body.insert("coloring".into(), doc::coloring(&coloring));
            (
                "no cycle length in the window: any orientation colors (coloring verified)"
                    .to_string(),
                0,
            )
        }
        Ok(WindowCheck::Occupied { cycle, residue }) => {
            let detail = doc::CycleDetail {
                breaker: None,
                filter: None,
            };
            body.insert("verdict".into(), json!("not-applicable"));
            body.insert(
                "witness".into(),
                doc::cycle(g, &cycle, &detail).map_err(CliError::Core)?,
            );
            body.insert("residue".into(), doc::rational(&residue));
            ("not applicable: a cycle length falls in the window".to_string(), 1)
        }
        Err(Error::BelowPairBound { l, .. }) => {
            body.insert("verdict".into(), json!("not-applicable"));
            body.insert("reason".into(), json!({ "type": "pair-bound", "l": l }));
            ("not applicable: r is below 2".to_string(), 1)
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Outcome {
        document: doc::envelope("check-cor4", &inst, params, body),
        summary,
        code,
    })
}

fn cross_check_cmd(path: &PathBuf, opts: &SearchOptions) -> Result<Outcome, CliError> {
    let inst = read_instance(path)?;
    require_unit(&inst, "cross-check")?;
    let graph = inst.digraph.underlying_graph();
    let report = oracle::cross_check(&graph, opts).map_err(CliError::Core)?;
    let mut body = Map::new();
    let solver_doc = match &report.solver {
        ChiC::Degenerate => json!({ "verdict": "degenerate", "value": "0" }),
        ChiC::Finite { value, breaker, .. } => json!({
            "value": doc::rational(value),
            "breaker_index": breaker.index().to_string(),
        }),
    };
    body.insert("solver".into(), solver_doc);
    body.insert("brute_force".into(), doc::rational(&report.brute_force));
    let (summary, code) = if report.agree {
        body.insert("verdict".into(), json!("agree"));
        (
            format!(
                "both routes give chi_c = {}",
                circ_core::format_rational(&report.solver.value())
            ),
            0,
        )
    } else {
        body.insert("verdict".into(), json!("disagree"));
        (
            format!(
                "routes disagree: solver {} vs brute force {}",
                circ_core::format_rational(&report.solver.value()),
                circ_core::format_rational(&report.brute_force)
            ),
            1,
        )
    };
    Ok(Outcome {
        document: doc::envelope("cross-check", &inst, Value::Null, body),
        summary,
        code,
    })
}
