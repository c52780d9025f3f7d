//! Directed graphs with indexed edges.
//!
//! Nodes and edges are dense indices. Every edge is one base arm of the
//! bandit problem, so parallel edges are kept as distinct arms and self-loops
//! are stored (they never activate anything new).

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{argument, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(transparent)
)]
pub struct NodeId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(transparent)
)]
pub struct EdgeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(i as u32)
    }
}

impl From<usize> for EdgeId {
    fn from(i: usize) -> Self {
        EdgeId(i as u32)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// Immutable directed multigraph with compressed out- and in-adjacency.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<(NodeId, NodeId)>,
    out_offsets: Vec<usize>,
    out_list: Vec<EdgeId>,
    in_offsets: Vec<usize>,
    in_list: Vec<EdgeId>,
}

impl Graph {
    /// Builds a graph over `node_count` nodes. Edge ids follow the order of `edges`.
    pub fn new(node_count: usize, edges: Vec<(NodeId, NodeId)>) -> Result<Self> {
        if node_count > u32::MAX as usize || edges.len() > u32::MAX as usize {
            return Err(argument("graph too large for 32-bit indices"));
        }
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u.index() >= node_count || v.index() >= node_count {
                return Err(argument(format!(
                    "edge {i} ({u}, {v}) references a node outside [0, {node_count})"
                )));
            }
        }
        let (out_offsets, out_list) = compress(node_count, edges.iter().map(|e| e.0));
        let (in_offsets, in_list) = compress(node_count, edges.iter().map(|e| e.1));
        Ok(Graph {
            node_count,
            edges,
            out_offsets,
            out_list,
            in_offsets,
            in_list,
        })
    }

    /// Convenience constructor from raw index pairs.
    pub fn from_pairs(node_count: usize, pairs: &[(u32, u32)]) -> Result<Self> {
        Self::new(
            node_count,
            pairs.iter().map(|&(u, v)| (NodeId(u), NodeId(v))).collect(),
        )
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.node_count as u32).map(NodeId)
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    #[inline]
    pub fn endpoints(&self, e: EdgeId) -> (NodeId, NodeId) {
        self.edges[e.index()]
    }

    #[inline]
    pub fn source(&self, e: EdgeId) -> NodeId {
        self.edges[e.index()].0
    }

    #[inline]
    pub fn target(&self, e: EdgeId) -> NodeId {
        self.edges[e.index()].1
    }

    #[inline]
    pub fn out_edges(&self, u: NodeId) -> &[EdgeId] {
        let i = u.index();
        &self.out_list[self.out_offsets[i]..self.out_offsets[i + 1]]
    }

    #[inline]
    pub fn in_edges(&self, v: NodeId) -> &[EdgeId] {
        let i = v.index();
        &self.in_list[self.in_offsets[i]..self.in_offsets[i + 1]]
    }

    pub fn out_degree(&self, u: NodeId) -> usize {
        self.out_edges(u).len()
    }

    pub fn in_degree(&self, v: NodeId) -> usize {
        self.in_edges(v).len()
    }

    pub fn contains(&self, u: NodeId) -> bool {
        u.index() < self.node_count
    }

    pub(crate) fn check_nodes(&self, nodes: &[NodeId], what: &str) -> Result<()> {
        match nodes.iter().find(|u| !self.contains(**u)) {
            Some(u) => Err(argument(format!(
                "{what} contains node {u}, graph has {} nodes",
                self.node_count
            ))),
            None => Ok(()),
        }
    }

    /// Nodes reachable from `seeds` along directed edges, seeds included.
    pub fn reachable_nodes(&self, seeds: &[NodeId]) -> Result<Vec<bool>> {
        self.check_nodes(seeds, "seed set")?;
        let mut seen = vec![false; self.node_count];
        let mut queue = VecDeque::new();
        for &s in seeds {
            if !seen[s.index()] {
                seen[s.index()] = true;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &e in self.out_edges(u) {
                let v = self.target(e);
                if !seen[v.index()] {
                    seen[v.index()] = true;
                    queue.push_back(v);
                }
            }
        }
        Ok(seen)
    }

    /// Edges whose source is reachable from `seeds`, in ascending id order.
    pub fn reachable_edges_from(&self, seeds: &[NodeId]) -> Result<Vec<EdgeId>> {
        let seen = self.reachable_nodes(seeds)?;
        Ok((0..self.edges.len())
            .map(EdgeId::from)
            .filter(|&e| seen[self.source(e).index()])
            .collect())
    }

    /// Largest reachable-set size over all start nodes (the start node counts).
    /// This is the smoothness constant of the triggering-probability bound.
    pub fn max_reach(&self) -> usize {
        let mut best = 0;
        let mut stamp = vec![usize::MAX; self.node_count];
        let mut stack = Vec::new();
        for root in 0..self.node_count {
            stamp[root] = root;
            stack.push(NodeId::from(root));
            let mut count = 0;
            while let Some(u) = stack.pop() {
                count += 1;
                for &e in self.out_edges(u) {
                    let v = self.target(e).index();
                    if stamp[v] != root {
                        stamp[v] = root;
                        stack.push(NodeId::from(v));
                    }
                }
            }
            best = best.max(count);
        }
        best
    }

    /// For a graph whose edges all run from a source side to a sink side,
    /// returns `is_sink[v]` (true when `v` has an in-edge). Returns `None`
    /// when some node has both in- and out-edges.
    pub fn bipartite_sinks(&self) -> Option<Vec<bool>> {
        let is_sink: Vec<bool> = (0..self.node_count)
            .map(|v| self.in_offsets[v + 1] > self.in_offsets[v])
            .collect();
        if self.edges.iter().any(|&(u, _)| is_sink[u.index()]) {
            None
        } else {
            Some(is_sink)
        }
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartite_sinks().is_some()
    }
}

fn compress(
    node_count: usize,
    keys: impl Iterator<Item = NodeId> + Clone,
) -> (Vec<usize>, Vec<EdgeId>) {
    let mut offsets = vec![0usize; node_count + 1];
    for k in keys.clone() {
        offsets[k.index() + 1] += 1;
    }
    for i in 0..node_count {
        offsets[i + 1] += offsets[i];
    }
    let mut cursor = offsets.clone();
    let mut list = vec![EdgeId(0); offsets[node_count]];
    for (e, k) in keys.enumerate() {
        list[cursor[k.index()]] = EdgeId::from(e);
        cursor[k.index()] += 1;
    }
    (offsets, list)
}
