//! Plain-text multigraph format, colour files, and DOT export.
//!
//! The graph format follows the DIMACS habit for line types: `c` lines
//! are comments, a single `p mgraph <vertices> <edges>` header, then
//! one `e <u> <v>` line per edge with 0-based endpoints. Parallel `e`
//! lines encode parallel edges; loops are rejected.

use crate::budget::{Error, Result};
use crate::graph::Multigraph;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| parse_err(line, format!("{what} is not a number: {tok:?}")))
}

/// Parses the `p mgraph` text format.
pub fn parse_multigraph(text: &str) -> Result<Multigraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "p" => {
                if header.is_some() {
                    return Err(parse_err(lineno, "duplicate problem line"));
                }
                if toks.len() != 4 || toks[1] != "mgraph" {
                    return Err(parse_err(lineno, "expected: p mgraph <vertices> <edges>"));
                }
                let n = parse_usize(toks[2], lineno, "vertex count")?;
                let m = parse_usize(toks[3], lineno, "edge count")?;
                header = Some((n, m));
            }
            "e" => {
                let (n, m) = header
                    .ok_or_else(|| parse_err(lineno, "edge before the problem line"))?;
                if toks.len() != 3 {
                    return Err(parse_err(lineno, "expected: e <u> <v>"));
                }
                let u = parse_usize(toks[1], lineno, "endpoint")?;
                let v = parse_usize(toks[2], lineno, "endpoint")?;
                if u >= n || v >= n {
                    return Err(parse_err(
                        lineno,
                        format!("endpoint out of range 0..{n}"),
                    ));
                }
                if u == v {
                    return Err(parse_err(lineno, format!("loop at vertex {u}")));
                }
                if edges.len() == m {
                    return Err(parse_err(lineno, format!("more than {m} edges")));
                }
                edges.push((u, v));
            }
            other => {
                return Err(parse_err(lineno, format!("unknown line type {other:?}")));
            }
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(1, "missing problem line"))?;
    if edges.len() != m {
        return Err(parse_err(
            1,
            format!("header announces {m} edges, found {}", edges.len()),
        ));
    }
    Multigraph::new(n, &edges)
}

/// Serializes a multigraph in the `p mgraph` format, edges in id order.
pub fn write_multigraph(g: &Multigraph) -> String {
    let mut out = format!("p mgraph {} {}\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}

/// Parses a colour file: one `<edge> <colour>` pair per line, edge
/// indices 0-based and colours 1-based, every edge listed exactly once.
pub fn parse_colouring(text: &str, edge_count: usize) -> Result<Vec<usize>> {
    let mut colours: Vec<Option<usize>> = vec![None; edge_count];
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(parse_err(lineno, "expected: <edge> <colour>"));
        }
        let e = parse_usize(toks[0], lineno, "edge index")?;
        let colour = parse_usize(toks[1], lineno, "colour")?;
        if e >= edge_count {
            return Err(parse_err(
                lineno,
                format!("edge index out of range 0..{edge_count}"),
            ));
        }
        if colour == 0 {
            return Err(parse_err(lineno, "colours start at 1"));
        }
        if colours[e].is_some() {
            return Err(parse_err(lineno, format!("edge {e} coloured twice")));
        }
        colours[e] = Some(colour);
    }
    colours
        .into_iter()
        .enumerate()
        .map(|(e, c)| c.ok_or_else(|| parse_err(1, format!("edge {e} is uncoloured"))))
        .collect()
}

/// Serializes a colouring as parsed by [`parse_colouring`].
pub fn write_colouring(colours: &[usize]) -> String {
    let mut out = String::new();
    for (e, &c) in colours.iter().enumerate() {
        out.push_str(&format!("{e} {c}\n"));
    }
    out
}

/// DOT export; an optional colouring labels the edges.
pub fn to_dot(g: &Multigraph, colours: Option<&[usize]>) -> String {
    let mut out = String::from("graph {\n");
    for v in 0..g.vertex_count() {
        out.push_str(&format!("  v{v};\n"));
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        match colours {
            Some(cs) => out.push_str(&format!("  v{u} -- v{v} [label=\"{}\"];\n", cs[e])),
            None => out.push_str(&format!("  v{u} -- v{v};\n")),
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let text = "c a digon plus a pendant edge\np mgraph 3 3\ne 0 1\ne 1 0\ne 1 2\n";
        let g = parse_multigraph(text).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 0), (1, 2)]);
        let again = parse_multigraph(&write_multigraph(&g)).unwrap();
        assert_eq!(again.edges(), g.edges());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "p mgraph 2 1\ne 0 2\n";
        match parse_multigraph(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        let loopy = "p mgraph 2 1\n\nc pad\ne 1 1\n";
        match parse_multigraph(loopy) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_multigraph("e 0 1\n").is_err());
        assert!(parse_multigraph("p mgraph 2 2\ne 0 1\n").is_err());
    }

    #[test]
    fn colour_files() {
        let colours = parse_colouring("1 5\n0 1\nc pad\n2 1\n", 3).unwrap();
        assert_eq!(colours, vec![1, 5, 1]);
        let text = write_colouring(&colours);
        assert_eq!(parse_colouring(&text, 3).unwrap(), colours);
        assert!(parse_colouring("0 1\n", 2).is_err());
        assert!(parse_colouring("0 1\n0 2\n", 1).is_err());
        assert!(parse_colouring("0 0\n", 1).is_err());
        assert!(parse_colouring("1 1\n", 1).is_err());
    }

    #[test]
    fn dot_mentions_every_edge() {
        let g = parse_multigraph("p mgraph 2 2\ne 0 1\ne 0 1\n").unwrap();
        let dot = to_dot(&g, Some(&[1, 2]));
        assert_eq!(dot.matches("v0 -- v1").count(), 2);
        assert!(dot.contains("label=\"2\""));
    }
}
