//! Edge-list text format.
//!
//! ```text
//! # meta: family=sierpinski level=2 boundary=open
//! M 15
//! 0 1
//! 0 2
//! ```
//!
//! The first non-comment line is `M <num_nodes>`, every following line an
//! edge `i j`. Lines starting with `#` are ignored except for the optional
//! `# meta:` line, which restores [`GraphMeta`]. Saved edges have `i < j`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{Boundary, Family, Graph, GraphMeta};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    pub allow_disconnected: bool,
}

pub fn write_graph(g: &Graph) -> String {
    let meta = g.meta();
    let mut out = format!(
        "# meta: family={} level={} boundary={}",
        meta.family, meta.level_or_extent, meta.boundary
    );
    if let Some(nu) = meta.nu {
        let _ = write!(out, " nu={nu}");
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "M {}", g.num_nodes());
    for &(a, b) in g.edges() {
        let _ = writeln!(out, "{a} {b}");
    }
    out
}

pub fn save_graph(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, write_graph(g)).map_err(|e| Error::io(path, e))
}

pub fn load_graph(path: impl AsRef<Path>, opts: LoadOptions) -> Result<Graph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_graph(&text, opts)
}

fn parse_meta(rest: &str, line: usize) -> Result<GraphMeta> {
    let perr = |msg: String| Error::Parse { line, msg };
    let mut meta = GraphMeta::custom();
    for field in rest.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| perr(format!("malformed meta field '{field}'")))?;
        match key {
            "family" => meta.family = value.parse::<Family>().map_err(|e| perr(e.to_string()))?,
            "level" => {
                meta.level_or_extent = value
                    .parse()
                    .map_err(|_| perr(format!("bad level '{value}'")))?
            }
            "boundary" => {
                meta.boundary = value.parse::<Boundary>().map_err(|e| perr(e.to_string()))?
            }
            "nu" => {
                meta.nu = Some(
                    value
                        .parse()
                        .map_err(|_| perr(format!("bad nu '{value}'")))?,
                )
            }
            // Unknown keys are tolerated for forward compatibility.
            _ => {}
        }
    }
    Ok(meta)
}

pub fn parse_graph(text: &str, opts: LoadOptions) -> Result<Graph> {
    let mut meta = None;
    let mut num_nodes: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(rest) = comment.trim_start().strip_prefix("meta:") {
                meta = Some(parse_meta(rest, line)?);
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let (first, second) = (fields.next(), fields.next());
        if fields.next().is_some() {
            return Err(Error::Parse {
                line,
                msg: format!("expected two fields, got '{trimmed}'"),
            });
        }
        match num_nodes {
            None => {
                let count = match (first, second) {
                    (Some("M"), Some(n)) => n.parse::<usize>().ok(),
                    _ => None,
                };
                let count = count.ok_or_else(|| Error::Parse {
                    line,
                    msg: format!("expected header 'M <num_nodes>', got '{trimmed}'"),
                })?;
                if count == 0 {
                    return Err(Error::Parse {
                        line,
                        msg: "graph needs at least one node".into(),
                    });
                }
                num_nodes = Some((count, line));
            }
            Some((m, _)) => {
                let parse = |s: Option<&str>| s.and_then(|s| s.parse::<usize>().ok());
                let (a, b) = match (parse(first), parse(second)) {
                    (Some(a), Some(b)) => (a, b),
                    _ => {
                        return Err(Error::Parse {
                            line,
                            msg: format!("expected edge 'i j', got '{trimmed}'"),
                        })
                    }
                };
                if a == b {
                    return Err(Error::SelfLoop(a));
                }
                if a >= m || b >= m {
                    return Err(Error::Parse {
                        line,
                        msg: format!("node index out of range for M = {m}"),
                    });
                }
                if !seen.insert((a.min(b), a.max(b))) {
                    return Err(Error::DuplicateEdge(a.min(b), a.max(b)));
                }
                edges.push((a, b));
            }
        }
    }

    let (m, _) = num_nodes.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        msg: "missing 'M <num_nodes>' header".into(),
    })?;
    let meta = meta.unwrap_or_else(GraphMeta::custom);
    if opts.allow_disconnected {
        Graph::new_unchecked_connectivity(m, edges, meta)
    } else {
        Graph::new(m, edges, meta)
    }
}
