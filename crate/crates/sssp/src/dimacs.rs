//! DIMACS shortest-path format: `c` comments, one `p sp <n> <m>` header,
//! `a <u> <v> <w>` arcs with 1-based vertex ids.

use thiserror::Error;

use crate::graph::{build_graph, Graph, GraphError};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: arc before the problem line")]
    ArcBeforeHeader { line: usize },
    #[error("line {line}: duplicate problem line")]
    DuplicateHeader { line: usize },
    #[error("missing problem line")]
    MissingHeader,
    #[error("header declares {declared} arcs, found {found}")]
    CountMismatch { declared: usize, found: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn malformed(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Malformed {
        line,
        msg: msg.into(),
    }
}

pub fn parse_dimacs(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(u32, u32, f64)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut fields = raw.split_whitespace();
        match fields.next() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(ParseError::DuplicateHeader { line });
                }
                if fields.next() != Some("sp") {
                    return Err(malformed(line, "expected 'p sp <n> <m>'"));
                }
                let n: usize = next_num(&mut fields, line, "vertex count")?;
                let m: usize = next_num(&mut fields, line, "arc count")?;
                if fields.next().is_some() {
                    return Err(malformed(line, "trailing fields on problem line"));
                }
                header = Some((n, m));
                edges.reserve(m);
            }
            Some("a") => {
                let Some((n, _)) = header else {
                    return Err(ParseError::ArcBeforeHeader { line });
                };
                let u: u64 = next_num(&mut fields, line, "tail vertex")?;
                let v: u64 = next_num(&mut fields, line, "head vertex")?;
                let w: f64 = next_num(&mut fields, line, "weight")?;
                if fields.next().is_some() {
                    return Err(malformed(line, "trailing fields on arc line"));
                }
                for (name, id) in [("tail", u), ("head", v)] {
                    if id < 1 || id > n as u64 {
                        return Err(malformed(line, format!("{name} vertex {id} out of 1..={n}")));
                    }
                }
                edges.push((u as u32 - 1, v as u32 - 1, w));
            }
            Some(tok) => {
                return Err(malformed(line, format!("unknown record type {tok:?}")));
            }
        }
    }

    let Some((n, m)) = header else {
        return Err(ParseError::MissingHeader);
    };
    if edges.len() != m {
        return Err(ParseError::CountMismatch {
            declared: m,
            found: edges.len(),
        });
    }
    Ok(build_graph(n, &edges)?)
}

fn next_num<T: std::str::FromStr>(
    fields: &mut std::str::SplitWhitespace,
    line: usize,
    what: &str,
) -> Result<T, ParseError> {
    let tok = fields
        .next()
        .ok_or_else(|| malformed(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| malformed(line, format!("bad {what} {tok:?}")))
}

pub fn write_dimacs(g: &Graph) -> String {
    let mut out = String::new();
    out.push_str(&format!("p sp {} {}\n", g.vertex_count(), g.edge_count()));
    for e in 0..g.edge_count() {
        let edge = g.edge(e as u32);
        out.push_str(&format!(
            "a {} {} {}\n",
            edge.from + 1,
            edge.to + 1,
            edge.weight
        ));
    }
    out
}

/// One line per vertex: `<1-based id> <distance|inf>`, distances via
/// Display so the text round-trips bit-exactly.
pub fn write_distances(distances: &[f64]) -> String {
    let mut out = String::new();
    for (i, &d) in distances.iter().enumerate() {
        if d.is_infinite() {
            out.push_str(&format!("{} inf\n", i + 1));
        } else {
            out.push_str(&format!("{} {d}\n", i + 1));
        }
    }
    out
}

pub fn parse_distances(text: &str) -> Result<Vec<f64>, ParseError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let mut fields = raw.split_whitespace();
        let id: usize = next_num(&mut fields, line, "vertex id")?;
        if id != out.len() + 1 {
            return Err(malformed(
                line,
                format!("expected vertex id {}, got {id}", out.len() + 1),
            ));
        }
        let tok = fields
            .next()
            .ok_or_else(|| malformed(line, "missing distance"))?;
        if fields.next().is_some() {
            return Err(malformed(line, "trailing fields on distance line"));
        }
        if tok == "inf" {
            out.push(f64::INFINITY);
        } else {
            out.push(
                tok.parse()
                    .map_err(|_| malformed(line, format!("bad distance {tok:?}")))?,
            );
        }
    }
    Ok(out)
}
