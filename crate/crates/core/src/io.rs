//! Line-oriented plain-text formats for graphs, flows, and reports, designed
//! so every certificate is auditable by eye.
//!
//! Graph files: a `v <vertex_count>` line, then one `e <id> <u> <v> <+|->`
//! line per edge with ids ascending from 0. Flow files: a `group <spec>`
//! line, then one `f <edge_id> <du> <dv> <value>` line per edge, where `du`
//! and `dv` are the half-edge directions (`out`/`in`) at the edge's two ends
//! and the value is a bare integer (the integers) or a tuple `(c1,…,cr)`
//! (finite products). `#` starts a comment; blank lines are ignored.
//! Serialization is bit-exact: `parse(serialize(x)) = x`.

use std::fmt::Write as _;

use crate::classify::{Certificate, FlowClass, Verdict};
use crate::error::{Error, Result};
use crate::flows::{Flow, HalfDir, Orientation, VerifyReport};
use crate::graph::{Parity, Sign, SignedMultigraph};
use crate::groups::{GroupElement, GroupSpec};
use crate::oracle::SweepRow;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Significant lines of a text input: comments stripped, blanks skipped,
/// paired with 1-based line numbers and split into tokens.
fn significant_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

fn parse_number<T: std::str::FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| parse_err(line, format!("bad {what}: {token:?}")))
}

// ----- graphs -------------------------------------------------------------------

/// Parses the graph text format. Errors carry the 1-based line number.
pub fn parse_graph(text: &str) -> Result<SignedMultigraph> {
    let mut vertex_count: Option<usize> = None;
    let mut edges: Vec<(usize, usize, Sign)> = Vec::new();
    for (lineno, tokens) in significant_lines(text) {
        match tokens[0] {
            "v" => {
                if vertex_count.is_some() {
                    return Err(parse_err(lineno, "duplicate `v` line"));
                }
                if tokens.len() != 2 {
                    return Err(parse_err(lineno, "expected `v <vertex_count>`"));
                }
                vertex_count = Some(parse_number(lineno, tokens[1], "vertex count")?);
            }
            "e" => {
                let n = vertex_count
                    .ok_or_else(|| parse_err(lineno, "edge line before the `v` line"))?;
                if tokens.len() != 5 {
                    return Err(parse_err(lineno, "expected `e <id> <u> <v> <+|->`"));
                }
                let id: usize = parse_number(lineno, tokens[1], "edge id")?;
                if id != edges.len() {
                    return Err(parse_err(
                        lineno,
                        format!("edge ids must ascend from 0: expected {}, got {id}", edges.len()),
                    ));
                }
                let u: usize = parse_number(lineno, tokens[2], "vertex")?;
                let v: usize = parse_number(lineno, tokens[3], "vertex")?;
                if u >= n || v >= n {
                    return Err(parse_err(
                        lineno,
                        format!("edge ({u}, {v}) exceeds the vertex count {n}"),
                    ));
                }
                let sign = match tokens[4] {
                    "+" => Sign::Positive,
                    "-" => Sign::Negative,
                    other => return Err(parse_err(lineno, format!("bad sign {other:?}"))),
                };
                edges.push((u, v, sign));
            }
            other => {
                return Err(parse_err(lineno, format!("unknown directive {other:?}")));
            }
        }
    }
    let n = vertex_count.ok_or_else(|| parse_err(1, "missing `v <vertex_count>` line"))?;
    SignedMultigraph::new(n, edges)
}

/// Renders a graph in the text format, edges in ascending id order.
pub fn serialize_graph(g: &SignedMultigraph) -> String {
    let mut out = String::new();
    writeln!(out, "v {}", g.vertex_count()).expect("string write");
    for e in 0..g.edge_count() {
        let (u, v) = g.endpoints(e);
        writeln!(out, "e {e} {u} {v} {}", g.sign(e).as_char()).expect("string write");
    }
    out
}

// ----- flows --------------------------------------------------------------------

fn dir_token(d: HalfDir) -> &'static str {
    match d {
        HalfDir::Out => "out",
        HalfDir::In => "in",
    }
}

fn parse_dir(line: usize, token: &str) -> Result<HalfDir> {
    match token {
        "out" => Ok(HalfDir::Out),
        "in" => Ok(HalfDir::In),
        other => Err(parse_err(line, format!("bad half-edge direction {other:?}"))),
    }
}

/// Parses the flow text format against the graph the flow lives on. Every
/// edge must get exactly one `f` line, and each line's half-edge directions
/// must be compatible with the edge's sign.
pub fn parse_flow(text: &str, g: &SignedMultigraph) -> Result<Flow> {
    let m = g.edge_count();
    let mut group: Option<GroupSpec> = None;
    let mut dirs: Vec<Option<(HalfDir, HalfDir)>> = vec![None; m];
    let mut values: Vec<Option<GroupElement>> = vec![None; m];
    for (lineno, tokens) in significant_lines(text) {
        match tokens[0] {
            "group" => {
                if group.is_some() {
                    return Err(parse_err(lineno, "duplicate `group` line"));
                }
                if tokens.len() != 2 {
                    return Err(parse_err(lineno, "expected `group <spec>`"));
                }
                let spec: GroupSpec = tokens[1]
                    .parse()
                    .map_err(|e: Error| parse_err(lineno, e.to_string()))?;
                group = Some(spec);
            }
            "f" => {
                let spec = group
                    .as_ref()
                    .ok_or_else(|| parse_err(lineno, "flow line before the `group` line"))?;
                if tokens.len() < 5 {
                    return Err(parse_err(
                        lineno,
                        "expected `f <edge_id> <out|in> <out|in> <value>`",
                    ));
                }
                let id: usize = parse_number(lineno, tokens[1], "edge id")?;
                if id >= m {
                    return Err(parse_err(
                        lineno,
                        format!("dangling edge id {id}: the graph has {m} edges"),
                    ));
                }
                if dirs[id].is_some() {
                    return Err(parse_err(lineno, format!("duplicate flow line for edge {id}")));
                }
                let du = parse_dir(lineno, tokens[2])?;
                let dv = parse_dir(lineno, tokens[3])?;
                let compatible = match g.sign(id) {
                    Sign::Positive => du != dv,
                    Sign::Negative => du == dv,
                };
                if !compatible {
                    return Err(parse_err(
                        lineno,
                        format!(
                            "orientation incompatible with the {} sign of edge {id}",
                            g.sign(id).as_char()
                        ),
                    ));
                }
                let value = spec
                    .parse_element(&tokens[4..].join(" "))
                    .map_err(|e| parse_err(lineno, e.to_string()))?;
                dirs[id] = Some((du, dv));
                values[id] = Some(value);
            }
            other => {
                return Err(parse_err(lineno, format!("unknown directive {other:?}")));
            }
        }
    }
    let spec = group.ok_or_else(|| parse_err(1, "missing `group <spec>` line"))?;
    let mut full_dirs = Vec::with_capacity(m);
    let mut full_values = Vec::with_capacity(m);
    for e in 0..m {
        let Some(d) = dirs[e] else {
            return Err(crate::error::invalid(format!("edge {e} has no flow line")));
        };
        full_dirs.push(d);
        full_values.push(values[e].take().expect("set together with dirs"));
    }
    Flow::new(spec, Orientation::new(full_dirs), full_values)
}

/// Renders a flow in the text format, edges in ascending id order.
pub fn serialize_flow(f: &Flow) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "group {}", f.group()).expect("string write");
    for e in 0..f.orientation().len() {
        let (du, dv) = f.orientation().dirs(e);
        let value = f.group().format_element(f.value(e))?;
        writeln!(out, "f {e} {} {} {value}", dir_token(du), dir_token(dv))
            .expect("string write");
    }
    Ok(out)
}

// ----- reports ------------------------------------------------------------------

fn parity_token(p: Parity) -> &'static str {
    match p {
        Parity::Even => "even",
        Parity::Odd => "odd",
    }
}

fn verdict_token(v: Option<u32>) -> String {
    match v {
        None => "none".into(),
        Some(k) => k.to_string(),
    }
}

fn edge_list(edges: &std::collections::BTreeSet<usize>) -> String {
    edges
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Renders the `flow-number:` verdict line and the structural witness lines:
/// the witness edge for `none`, the triple's part edge lists and common
/// vertex for 3, the cover's half edge lists for 4.
pub fn classification_summary(class: &FlowClass) -> String {
    let mut out = String::new();
    writeln!(out, "flow-number: {}", verdict_token(class.verdict.flow_number()))
        .expect("string write");
    if let Verdict::NotAdmissible { witness_edge } = class.verdict {
        writeln!(out, "witness-edge: {witness_edge}").expect("string write");
    }
    match &class.certificate {
        Some(Certificate::Three { triple, .. }) => {
            for (i, part) in triple.parts.iter().enumerate() {
                writeln!(out, "part-{}: {}", i + 1, edge_list(part)).expect("string write");
            }
            if let Some(v) = triple.common_vertex {
                writeln!(out, "common-vertex: {v}").expect("string write");
            }
        }
        Some(Certificate::Four { cover, .. }) => {
            for (i, half) in cover.halves.iter().enumerate() {
                writeln!(out, "half-{}: {}", i + 1, edge_list(half)).expect("string write");
            }
        }
        _ => {}
    }
    out
}

/// The full classification report: the summary, then (when a certificate
/// exists) a blank line and the certifying flow in the flow file format.
pub fn classification_report(class: &FlowClass) -> Result<String> {
    let mut out = classification_summary(class);
    if let Some(cert) = &class.certificate {
        out.push('\n');
        out.push_str(&serialize_flow(cert.flow())?);
    }
    Ok(out)
}

/// Renders a verification outcome, one check per line.
pub fn render_verify_report(report: &VerifyReport) -> String {
    let mut out = String::new();
    if report.kirchhoff_ok {
        writeln!(out, "kirchhoff: ok").expect("string write");
    } else {
        let vs = report
            .violating_vertices
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(out, "kirchhoff: violated at {vs}").expect("string write");
    }
    if report.zero_edges.is_empty() {
        writeln!(out, "zero-edges: none").expect("string write");
    } else {
        let es = report
            .zero_edges
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(out, "zero-edges: {es}").expect("string write");
    }
    if let Some(k) = report.max_abs {
        writeln!(out, "max-abs: {k}").expect("string write");
    }
    writeln!(
        out,
        "nowhere-zero-flow: {}",
        if report.is_nowhere_zero_flow() { "yes" } else { "no" }
    )
    .expect("string write");
    out
}

/// Renders sweep rows as CSV with a header line.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("graph-index,edges,parity,classifier-verdict,oracle-verdict\n");
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            row.index,
            row.edge_count,
            parity_token(row.negative_parity),
            verdict_token(row.classifier_verdict),
            verdict_token(row.oracle_verdict),
        )
        .expect("string write");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{construct_flow, flow_number};
    use crate::generators;
    use crate::oracle::{enumerate_graphs, EnumSpec};

    #[test]
    fn graph_examples_from_the_format_notes() {
        let g = parse_graph("v 1\ne 0 0 0 -\n").unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.sign(0), Sign::Negative);

        let err = parse_graph("v 2\ne 0 0 5 +\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected a parse error, got {other:?}"),
        }

        let commented = "# a loop\nv 1\n\ne 0 0 0 -  # the loop itself\n";
        assert_eq!(parse_graph(commented).unwrap(), g);
    }

    #[test]
    fn graph_round_trips_bit_exactly() {
        let spec = EnumSpec::new(2, 3, false, false).unwrap();
        for g in enumerate_graphs(&spec) {
            let text = serialize_graph(&g);
            assert_eq!(parse_graph(&text).unwrap(), g);
            assert_eq!(serialize_graph(&parse_graph(&text).unwrap()), text);
        }
        let p = generators::phi4_prototype();
        assert_eq!(parse_graph(&serialize_graph(&p)).unwrap(), p);
    }

    #[test]
    fn graph_parse_rejections_name_the_line() {
        for (text, bad_line) in [
            ("e 0 0 0 +\nv 1\n", 1),        // edge before v
            ("v 1\nv 1\n", 2),              // duplicate v
            ("v 1\ne 1 0 0 +\n", 2),        // id does not start at 0
            ("v 2\ne 0 0 1 +\ne 0 0 1 -\n", 3), // id repeats
            ("v 1\ne 0 0 0 *\n", 2),        // bad sign
            ("v 1\nq 0\n", 2),              // unknown directive
            ("v one\n", 1),                 // bad number
        ] {
            match parse_graph(text).unwrap_err() {
                Error::Parse { line, .. } => assert_eq!(line, bad_line, "input {text:?}"),
                other => panic!("expected a parse error for {text:?}, got {other:?}"),
            }
        }
        assert!(matches!(parse_graph("# only comments\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn flow_examples_and_round_trips() {
        let loop1 = parse_graph("v 1\ne 0 0 0 -\n").unwrap();
        let f = parse_flow("group Z\nf 0 out out 1\n", &loop1).unwrap();
        assert_eq!(f.value(0).as_integer(), Some(1));

        // Constructed certificates round-trip bit-exactly.
        let digon = generators::neg_digon();
        let two = construct_flow(&digon, Verdict::Two).unwrap();
        let text = serialize_flow(&two).unwrap();
        let back = parse_flow(&text, &digon).unwrap();
        assert_eq!(back, two);
        assert_eq!(serialize_flow(&back).unwrap(), text);

        // Tuple-valued flows, with and without spaces after commas.
        let z24 = GroupSpec::cyclic(vec![2, 4]).unwrap();
        let f = parse_flow("group Z2xZ4\nf 0 in in (1,3)\nf 1 in in (1, 1)\n", &digon).unwrap();
        assert_eq!(f.group(), &z24);
        assert_eq!(f.value(1).coords(), &[1, 1]);
        let text = serialize_flow(&f).unwrap();
        assert_eq!(parse_flow(&text, &digon).unwrap(), f);
    }

    #[test]
    fn flow_parse_rejections() {
        let digon = generators::neg_digon();
        for (text, bad_line) in [
            ("f 0 out out 1\n", 1),                          // flow before group
            ("group Z\ngroup Z\n", 2),                       // duplicate group
            ("group Q\n", 1),                                // bad spec
            ("group Z\nf 9 out out 1\n", 2),                 // dangling edge id
            ("group Z\nf 0 out in 1\n", 2),                  // incompatible with -
            ("group Z\nf 0 north out 1\n", 2),               // bad direction
            ("group Z\nf 0 out out 1\nf 0 in in 1\n", 3),    // duplicate edge
            ("group Z2\nf 0 out out (1,2)\n", 2),            // wrong value shape
        ] {
            match parse_flow(text, &digon).unwrap_err() {
                Error::Parse { line, .. } => assert_eq!(line, bad_line, "input {text:?}"),
                other => panic!("expected a parse error for {text:?}, got {other:?}"),
            }
        }
        // A missing edge line is a structural error, not a line error.
        assert!(matches!(
            parse_flow("group Z\nf 0 out out 1\n", &digon),
            Err(Error::InvalidArgument(_))
        ));
        // Positive edges need one out and one in.
        let pos = parse_graph("v 2\ne 0 0 1 +\ne 1 0 1 +\n").unwrap();
        assert!(parse_flow("group Z\nf 0 out out 1\nf 1 in out 1\n", &pos).is_err());
    }

    #[test]
    fn classification_reports_embed_a_parseable_flow() {
        let bouquet = generators::bouquet(3).unwrap();
        let class = flow_number(&bouquet).unwrap();
        let report = classification_report(&class).unwrap();
        assert!(report.starts_with("flow-number: 3\n"));
        assert!(report.contains("part-1: "));
        assert!(report.contains("common-vertex: 0"));
        let flow_part = &report[report.find("group ").unwrap()..];
        let f = parse_flow(flow_part, &bouquet).unwrap();
        assert!(f.verify(&bouquet).unwrap().is_nowhere_zero_flow());

        let loop1 = generators::neg_loop();
        let report = classification_report(&flow_number(&loop1).unwrap()).unwrap();
        assert_eq!(report, "flow-number: none\nwitness-edge: 0\n");

        let phi4 = generators::phi4_prototype();
        let report = classification_report(&flow_number(&phi4).unwrap()).unwrap();
        assert!(report.starts_with("flow-number: 4\n"));
        assert!(report.contains("half-1: "));
        assert!(report.contains("half-2: "));
    }

    #[test]
    fn verify_report_and_csv_render() {
        let digon = generators::neg_digon();
        let two = construct_flow(&digon, Verdict::Two).unwrap();
        let rendered = render_verify_report(&two.verify(&digon).unwrap());
        assert!(rendered.contains("kirchhoff: ok\n"));
        assert!(rendered.contains("zero-edges: none\n"));
        assert!(rendered.contains("max-abs: 1\n"));
        assert!(rendered.ends_with("nowhere-zero-flow: yes\n"));

        let spec = EnumSpec::new(1, 2, true, false).unwrap();
        let rows = crate::oracle::sweep(&spec, 6).unwrap();
        let csv = sweep_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "graph-index,edges,parity,classifier-verdict,oracle-verdict");
        assert_eq!(lines.len(), 1 + rows.len());
        assert_eq!(lines[1], "0,1,even,2,2");
        assert_eq!(lines[2], "1,1,odd,none,none");
    }
}
