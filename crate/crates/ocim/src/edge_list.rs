//! Whitespace-separated edge lists: one `u v` or `u v p` line per edge.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use ocim_core::{Graph, NodeId, ProbVector};

use crate::error::{Error, Result};

/// A graph read from text, with the original node labels and, when every
/// line carries one, the edge probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeList {
    pub graph: Graph,
    pub labels: Vec<String>,
    pub probs: Option<ProbVector>,
}

impl EdgeList {
    /// Parses edge-list text. Labels become dense ids in first-appearance
    /// order and edge ids follow line order.
    pub fn parse(text: &str) -> Result<Self> {
        let mut ids: HashMap<&str, NodeId> = HashMap::new();
        let mut labels: Vec<String> = Vec::new();
        let mut edges = Vec::new();
        let mut probs = Vec::new();
        let mut with_p: Option<bool> = None;

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if tokens.len() < 2 || tokens.len() > 3 {
                return Err(Error::Format {
                    line,
                    msg: format!("expected `u v` or `u v p`, found {} tokens", tokens.len()),
                });
            }
            let has_p = tokens.len() == 3;
            if *with_p.get_or_insert(has_p) != has_p {
                return Err(Error::Format {
                    line,
                    msg: "either every edge line carries a probability or none does".into(),
                });
            }
            let u = intern(&mut ids, &mut labels, tokens[0]);
            let v = intern(&mut ids, &mut labels, tokens[1]);
            edges.push((u, v));
            if has_p {
                let p: f64 = tokens[2].parse().map_err(|_| Error::Format {
                    line,
                    msg: format!("`{}` is not a number", tokens[2]),
                })?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::Range { line, value: p });
                }
                probs.push(p);
            }
        }
        let graph = Graph::new(labels.len(), edges)?;
        let probs = match with_p {
            Some(true) => Some(ProbVector::new(probs)?),
            _ => None,
        };
        Ok(EdgeList {
            graph,
            labels,
            probs,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Format { line, msg } => {
                Error::config(format!("{}:{line}: {msg}", path.display()))
            }
            Error::Range { line, value } => Error::config(format!(
                "{}:{line}: probability {value} outside [0, 1]",
                path.display()
            )),
            other => other,
        })
    }

    /// Text that parses back to an identical edge list. Probabilities use
    /// the shortest representation that round-trips exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (e, &(u, v)) in self.graph.edges().iter().enumerate() {
            let _ = write!(out, "{} {}", self.labels[u.index()], self.labels[v.index()]);
            if let Some(p) = &self.probs {
                let _ = write!(out, " {}", p.as_slice()[e]);
            }
            out.push('\n');
        }
        out
    }

    pub fn node(&self, label: &str) -> Option<NodeId> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(NodeId::from)
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v.index()]
    }

    /// Resolves a comma-separated list of labels; an empty string is the empty set.
    pub fn nodes(&self, list: &str) -> Result<Vec<NodeId>> {
        list.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                self.node(s)
                    .ok_or_else(|| Error::config(format!("unknown node `{s}`")))
            })
            .collect()
    }
}

fn intern<'a>(
    ids: &mut HashMap<&'a str, NodeId>,
    labels: &mut Vec<String>,
    label: &'a str,
) -> NodeId {
    *ids.entry(label).or_insert_with(|| {
        labels.push(label.to_owned());
        NodeId::from(labels.len() - 1)
    })
}
