//! Edge-list and graph6 readers and writers.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::incidence::Orientation;

/// Largest vertex count accepted from an edge list.
pub const MAX_EDGELIST_ORDER: usize = 1 << 20;

/// A parsed edge list.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeList {
    pub graph: Graph,
    /// Arcs as written: first token is the tail.
    pub orientation: Orientation,
    /// Vertex names when the file used non-integer labels, in first-appearance order.
    pub names: Option<Vec<String>>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses one edge per line (`u v`), with `#` comments and an optional
/// `vertices N` header. Integer labels are used verbatim; if any label is
/// not an integer, all labels are names numbered by first appearance.
pub fn parse_edgelist(text: &str) -> Result<EdgeList> {
    let mut header: Option<(usize, usize)> = None;
    let mut pairs: Vec<(usize, &str, &str)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens[0] == "vertices" {
            if header.is_some() {
                return Err(parse_err(line_no, "repeated `vertices` header"));
            }
            let [_, count] = tokens[..] else {
                return Err(parse_err(line_no, "header must be `vertices N`"));
            };
            let count = count
                .parse::<usize>()
                .ok()
                .filter(|&c| c <= MAX_EDGELIST_ORDER)
                .ok_or_else(|| parse_err(line_no, format!("bad vertex count `{count}`")))?;
            header = Some((line_no, count));
            continue;
        }
        let [u, v] = tokens[..] else {
            return Err(parse_err(line_no, format!("expected two tokens, got {}", tokens.len())));
        };
        pairs.push((line_no, u, v));
    }

    let numeric = pairs.iter().all(|(_, u, v)| u.parse::<usize>().is_ok() && v.parse::<usize>().is_ok());
    let mut arcs: Vec<(usize, usize, usize)> = Vec::with_capacity(pairs.len());
    let mut names: Option<Vec<String>> = None;
    if numeric {
        for &(line_no, u, v) in &pairs {
            let (u, v) = (u.parse::<usize>().unwrap(), v.parse::<usize>().unwrap());
            if u.max(v) >= MAX_EDGELIST_ORDER {
                return Err(parse_err(line_no, format!("vertex label {} is too large", u.max(v))));
            }
            arcs.push((line_no, u, v));
        }
    } else {
        let mut ids: HashMap<&str, usize> = HashMap::new();
        let mut order: Vec<String> = Vec::new();
        for &(line_no, u, v) in &pairs {
            let mut ends = [0usize; 2];
            for (slot, s) in ends.iter_mut().zip([u, v]) {
                *slot = *ids.entry(s).or_insert_with(|| {
                    order.push(s.to_string());
                    order.len() - 1
                });
            }
            arcs.push((line_no, ends[0], ends[1]));
        }
        names = Some(order);
    }

    let used = arcs.iter().map(|&(_, u, v)| u.max(v) + 1).max().unwrap_or(0);
    let n = match header {
        Some((line_no, count)) if count < used => {
            return Err(parse_err(line_no, format!("header declares {count} vertices but edges use {used}")));
        }
        Some((_, count)) => count,
        None => used,
    };
    if let Some(order) = names.as_mut() {
        for extra in order.len()..n {
            order.push(format!("_{extra}"));
        }
    }

    let mut g = Graph::empty(n);
    for &(line_no, u, v) in &arcs {
        g.add_edge(u, v).map_err(|e| match e {
            Error::SelfLoop(_) => parse_err(line_no, "self-loop"),
            Error::DuplicateEdge(..) => parse_err(line_no, "duplicate edge"),
            other => parse_err(line_no, other.to_string()),
        })?;
    }
    let orientation = Orientation::from_arcs(&g, arcs.iter().map(|&(_, u, v)| (u, v)).collect())?;
    Ok(EdgeList { graph: g, orientation, names })
}

/// Writes a `vertices N` header followed by one `tail head` line per edge.
pub fn emit_edgelist(g: &Graph, o: &Orientation) -> String {
    let mut out = format!("vertices {}\n", g.n());
    for &(t, h) in o.arcs() {
        writeln!(out, "{t} {h}").unwrap();
    }
    out
}

fn graph6_header(bytes: &[u8]) -> Result<(usize, usize)> {
    let bad = |msg: &str| Error::Graph6(msg.to_string());
    let val = |b: u8| -> Result<u64> {
        if (63..=126).contains(&b) {
            Ok((b - 63) as u64)
        } else {
            Err(Error::Graph6(format!("byte {b:#04x} outside the printable range 63..=126")))
        }
    };
    let first = *bytes.first().ok_or_else(|| bad("empty string"))?;
    if first != 126 {
        return Ok((val(first)? as usize, 1));
    }
    if bytes.get(1) == Some(&126) {
        if bytes.len() < 8 {
            return Err(bad("truncated 8-byte length"));
        }
        let n = bytes[2..8].iter().try_fold(0u64, |acc, &b| Ok::<_, Error>((acc << 6) | val(b)?))?;
        if n < 258048 {
            return Err(bad("non-minimal length encoding"));
        }
        Ok((usize::try_from(n).map_err(|_| bad("order too large"))?, 8))
    } else {
        if bytes.len() < 4 {
            return Err(bad("truncated 4-byte length"));
        }
        let n = bytes[1..4].iter().try_fold(0u64, |acc, &b| Ok::<_, Error>((acc << 6) | val(b)?))?;
        if n < 63 {
            return Err(bad("non-minimal length encoding"));
        }
        Ok((n as usize, 4))
    }
}

/// The vertex count encoded in a graph6 string, without decoding the edges.
pub fn graph6_order(text: &str) -> Result<usize> {
    let s = text.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    Ok(graph6_header(s.as_bytes())?.0)
}

/// Decodes one graph6 string. Edges come out in lexicographic order.
/// The data length must match the order exactly and padding bits must be 0.
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let s = text.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    let (n, skip) = graph6_header(bytes)?;
    let data = &bytes[skip..];
    let bits = (n as u128) * (n.saturating_sub(1) as u128) / 2;
    let need = bits.div_ceil(6);
    if data.len() as u128 != need {
        return Err(Error::Graph6(format!("expected {need} data bytes for {n} vertices, got {}", data.len())));
    }
    let bits = bits as usize;
    let mut edges = Vec::new();
    let mut k = 0usize;
    'outer: for v in 1..n {
        for u in 0..v {
            let b = data[k / 6];
            if !(63..=126).contains(&b) {
                return Err(Error::Graph6(format!("byte {b:#04x} outside the printable range 63..=126")));
            }
            if ((b - 63) >> (5 - k % 6)) & 1 == 1 {
                edges.push((u, v));
            }
            k += 1;
            if k == bits {
                break 'outer;
            }
        }
    }
    if let Some(&last) = data.last() {
        if !(63..=126).contains(&last) {
            return Err(Error::Graph6(format!("byte {last:#04x} outside the printable range 63..=126")));
        }
        let pad = need as usize * 6 - bits;
        if pad > 0 && (last - 63) & ((1u8 << pad) - 1) != 0 {
            return Err(Error::Graph6("nonzero padding bits".into()));
        }
    }
    edges.sort_unstable();
    Graph::from_edges(n, &edges)
}

/// One result per non-empty line; blank lines are skipped and reported as
/// warnings by line number.
pub fn parse_graph6_lines(text: &str) -> (Vec<(usize, Result<Graph>)>, Vec<String>) {
    let mut out = Vec::new();
    let mut warnings = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            warnings.push(format!("line {}: empty line skipped", i + 1));
            continue;
        }
        out.push((i + 1, parse_graph6(line)));
    }
    (out, warnings)
}

/// Encodes a graph in graph6. Edge order is not recorded.
pub fn encode_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n < 63 {
        out.push(n as u8 + 63);
    } else if n < 258048 {
        out.push(126);
        for sh in [12, 6, 0] {
            out.push(((n >> sh) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for sh in [30, 24, 18, 12, 6, 0] {
            out.push(((n as u64 >> sh) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut k = 0usize;
    for v in 1..n {
        for u in 0..v {
            acc = (acc << 1) | g.has_edge(u, v) as u8;
            k += 1;
            if k % 6 == 0 {
                out.push(acc + 63);
                acc = 0;
            }
        }
    }
    if k % 6 != 0 {
        out.push((acc << (6 - k % 6)) + 63);
    }
    String::from_utf8(out).expect("graph6 is ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;
    use crate::helmholtzian::build_h_direct;

    #[test]
    fn edgelist_basics() {
        let el = parse_edgelist("0 1\n1 2").unwrap();
        assert_eq!(el.graph, named::path(3));
        assert_eq!(el.orientation.arcs(), &[(0, 1), (1, 2)]);
        assert!(el.names.is_none());

        let el = parse_edgelist("# comment\nvertices 4\n\n2 0\n").unwrap();
        assert_eq!((el.graph.n(), el.graph.m()), (4, 1));
        assert_eq!(el.orientation.arcs(), &[(2, 0)]);

        let el = parse_edgelist("a b\nb c\nc a").unwrap();
        assert_eq!(el.names.as_deref().unwrap(), ["a", "b", "c"]);
        assert_eq!(el.orientation.arcs(), &[(0, 1), (1, 2), (2, 0)]);
    }

    #[test]
    fn edgelist_errors_carry_lines() {
        assert_eq!(parse_edgelist("0 1\n0 1"), Err(Error::Parse { line: 2, msg: "duplicate edge".into() }));
        assert_eq!(parse_edgelist("0 1\n1 0"), Err(Error::Parse { line: 2, msg: "duplicate edge".into() }));
        assert_eq!(parse_edgelist("\n3 3"), Err(Error::Parse { line: 2, msg: "self-loop".into() }));
        assert!(matches!(parse_edgelist("0 1 2"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edgelist("vertices 2\n0 5"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edgelist("vertices x"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edgelist("0 99999999999"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn worked_example_file() {
        let text: String = named::WORKED_EXAMPLE_ARCS.iter().map(|(t, h)| format!("{t} {h}\n")).collect();
        let el = parse_edgelist(&text).unwrap();
        let h = build_h_direct(&el.graph, &el.orientation).unwrap();
        assert_eq!(h.matrix().to_rows(), named::WORKED_EXAMPLE_H.iter().map(|r| r.to_vec()).collect::<Vec<_>>());
    }

    #[test]
    fn edgelist_round_trip() {
        let el = parse_edgelist("vertices 6\n3 1\n0 2\n2 3\n4 0").unwrap();
        let again = parse_edgelist(&emit_edgelist(&el.graph, &el.orientation)).unwrap();
        assert_eq!(again.graph, el.graph);
        assert_eq!(again.orientation, el.orientation);
    }

    #[test]
    fn graph6_examples() {
        assert_eq!(parse_graph6("Bw").unwrap(), named::complete(3));
        let g = parse_graph6("D?{").unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edges(), &[(0, 4), (1, 4), (2, 4), (3, 4)]);
        assert_eq!(parse_graph6("@").unwrap().n(), 1);
        assert_eq!(parse_graph6(">>graph6<<A_").unwrap(), named::path(2));
        for bad in ["", "Bw?", "B", "Bx", "D?", "~", "~??~", "C\u{7f}"] {
            assert!(parse_graph6(bad).is_err(), "{bad:?}");
        }
        let (rows, warnings) = parse_graph6_lines("Bw\n\nA_\n");
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].0, 3);
        assert_eq!(warnings, ["line 2: empty line skipped"]);
    }

    #[test]
    fn graph6_round_trip() {
        for g in [named::complete(7), named::cycle(9), named::star(70), Graph::empty(0), named::worked_example()] {
            let s = encode_graph6(&g);
            let back = parse_graph6(&s).unwrap();
            assert_eq!(back.n(), g.n());
            let mut want = g.edges().to_vec();
            want.sort_unstable();
            assert_eq!(back.edges(), &want[..]);
        }
        assert_eq!(encode_graph6(&named::complete(3)), "Bw");
    }
}
