//! Edge-list text format.
//!
//! ```text
//! # n=5
//! 0 1
//! 1 2
//! ```
//!
//! The `# n=` header is optional (without it `n` is one past the largest
//! id). Other `#` lines are comments. Repeated and reversed pairs collapse.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use stripspan_core::Graph;

use crate::Error;

pub fn parse_edge_list(text: &str) -> Result<Graph, Error> {
    let mut declared = None;
    let mut edges = Vec::new();
    let mut top = 0usize;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(n) = rest.trim().strip_prefix("n=") {
                let n = n.trim().parse().map_err(|_| Error::Parse {
                    line: i + 1,
                    msg: format!("bad vertex count '{}'", n.trim()),
                })?;
                declared = Some(n);
            }
            continue;
        }
        let mut parts = line.split_whitespace();
        let mut id = || -> Result<usize, Error> {
            let tok = parts.next().ok_or(Error::Parse { line: i + 1, msg: "expected 'u v'".into() })?;
            tok.parse()
                .map_err(|_| Error::Parse { line: i + 1, msg: format!("bad vertex id '{tok}'") })
        };
        let (u, v) = (id()?, id()?);
        if parts.next().is_some() {
            return Err(Error::Parse { line: i + 1, msg: "trailing tokens".into() });
        }
        top = top.max(u + 1).max(v + 1);
        edges.push((u, v));
    }
    let n = declared.unwrap_or(top);
    Ok(Graph::from_edges(n, edges)?)
}

pub fn format_edge_list(g: &Graph) -> String {
    let mut s = format!("# n={}\n", g.n());
    for &(u, v) in g.edges() {
        writeln!(s, "{u} {v}").unwrap();
    }
    s
}

pub fn read_graph(path: &Path) -> Result<Graph, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text)
}

pub fn write_graph(path: &Path, g: &Graph) -> Result<(), Error> {
    fs::write(path, format_edge_list(g)).map_err(|e| Error::io(path, e))
}
