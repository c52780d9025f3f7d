//! Competitive independent cascade with dominance tie-breaking.
//!
//! Propagation runs in synchronous steps. Seeds activate at step 0; a node
//! activated at step `s - 1` tries each inactive out-neighbour across live
//! edges at step `s`. A node reached by both items in the same step, or
//! seeded by both, adopts the item favoured by the [`TieRule`]. Each edge has
//! one live/blocked outcome shared by both items.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::mem;

use rand::Rng;

use crate::error::{argument, Result};
use crate::graph::{EdgeId, Graph, NodeId};
use crate::probs::ProbVector;

/// Which item a node adopts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Item {
    A,
    B,
}

/// Dominance rule applied to same-step arrivals and to nodes seeded by both items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TieRule {
    AOverB,
    BOverA,
}

impl TieRule {
    pub fn winner(self) -> Item {
        match self {
            TieRule::AOverB => Item::A,
            TieRule::BOverA => Item::B,
        }
    }

    pub fn flipped(self) -> TieRule {
        match self {
            TieRule::AOverB => TieRule::BOverA,
            TieRule::BOverA => TieRule::AOverB,
        }
    }
}

/// Seed sets of both items plus the follower's budget.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Action {
    pub seeds_a: Vec<NodeId>,
    pub seeds_b: Vec<NodeId>,
    pub budget: usize,
}

impl Action {
    /// Sorts and deduplicates both seed sets.
    pub fn new(mut seeds_a: Vec<NodeId>, mut seeds_b: Vec<NodeId>, budget: usize) -> Self {
        seeds_a.sort_unstable();
        seeds_a.dedup();
        seeds_b.sort_unstable();
        seeds_b.dedup();
        Action {
            seeds_a,
            seeds_b,
            budget,
        }
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.seeds_a.len() > self.budget {
            return Err(argument(format!(
                "{} A-seeds exceed the budget k = {}",
                self.seeds_a.len(),
                self.budget
            )));
        }
        g.check_nodes(&self.seeds_a, "A seed set")?;
        g.check_nodes(&self.seeds_b, "B seed set")
    }
}

/// One realisation of every edge's Bernoulli outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiveEdgeMask(Vec<bool>);

impl LiveEdgeMask {
    pub fn new(bits: Vec<bool>) -> Self {
        LiveEdgeMask(bits)
    }

    pub fn uniform(m: usize, live: bool) -> Self {
        LiveEdgeMask(vec![live; m])
    }

    /// Low `m` bits of `bits`; bit `i` is edge `i`.
    pub fn from_bits(m: usize, bits: u64) -> Self {
        LiveEdgeMask((0..m).map(|i| (bits >> i) & 1 == 1).collect())
    }

    /// Each edge is live independently with probability `probs[e]`.
    ///
    /// Draws one uniform per edge and compares it against the mean, so two
    /// calls with identically seeded streams couple the masks edge by edge.
    pub fn sample<R: Rng + ?Sized>(probs: &ProbVector, rng: &mut R) -> Self {
        LiveEdgeMask(
            probs
                .as_slice()
                .iter()
                .map(|&p| rng.random::<f64>() < p)
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn is_live(&self, e: EdgeId) -> bool {
        self.0[e.index()]
    }

    pub fn live_fraction(&self) -> f64 {
        self.0.iter().filter(|b| **b).count() as f64 / self.0.len().max(1) as f64
    }
}

/// Everything observed after one propagation.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PropagationOutcome {
    pub activated_a: Vec<NodeId>,
    pub activated_b: Vec<NodeId>,
    /// Out-edges of every activated node, ascending.
    pub triggered: Vec<EdgeId>,
    /// Outcome of each triggered edge, aligned with `triggered`.
    pub observations: Vec<u8>,
    pub reward: usize,
}

impl PropagationOutcome {
    pub fn observed(&self) -> impl Iterator<Item = (EdgeId, u8)> + '_ {
        self.triggered
            .iter()
            .copied()
            .zip(self.observations.iter().copied())
    }
}

const NONE: u8 = 0;
const BIT_A: u8 = 1;
const BIT_B: u8 = 2;

/// Reusable propagation workspace. Allocation happens once per graph, so
/// Monte-Carlo and enumeration loops only pay for the cascade itself.
#[derive(Debug, Clone)]
pub struct Cascade<'g> {
    graph: &'g Graph,
    status: Vec<u8>,
    pending: Vec<u8>,
    activated: Vec<NodeId>,
    frontier: Vec<NodeId>,
    next: Vec<NodeId>,
    count_a: usize,
}

impl<'g> Cascade<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        let n = graph.node_count();
        Cascade {
            graph,
            status: vec![NONE; n],
            pending: vec![NONE; n],
            activated: Vec::new(),
            frontier: Vec::new(),
            next: Vec::new(),
            count_a: 0,
        }
    }

    /// Runs one cascade and returns the number of A-activated nodes.
    /// `live` is queried only for edges that reach a still-inactive node.
    /// Seed ids must be valid for the graph.
    pub fn run<F>(
        &mut self,
        seeds_a: &[NodeId],
        seeds_b: &[NodeId],
        rule: TieRule,
        mut live: F,
    ) -> usize
    where
        F: FnMut(EdgeId) -> bool,
    {
        for &v in &self.activated {
            self.status[v.index()] = NONE;
        }
        self.activated.clear();
        self.frontier.clear();
        self.next.clear();
        self.count_a = 0;

        for &s in seeds_a {
            self.mark(s, BIT_A);
        }
        for &s in seeds_b {
            self.mark(s, BIT_B);
        }
        let seeds = mem::take(&mut self.next);
        self.settle(&seeds, rule);
        self.frontier = seeds;

        let g = self.graph;
        while !self.frontier.is_empty() {
            let mut next = mem::take(&mut self.next);
            next.clear();
            for &u in &self.frontier {
                let item = self.status[u.index()];
                for &e in g.out_edges(u) {
                    let v = g.target(e);
                    if self.status[v.index()] == NONE && live(e) {
                        if self.pending[v.index()] == NONE {
                            next.push(v);
                        }
                        self.pending[v.index()] |= item;
                    }
                }
            }
            self.settle(&next, rule);
            self.next = mem::replace(&mut self.frontier, next);
        }
        self.count_a
    }

    fn mark(&mut self, s: NodeId, bit: u8) {
        if self.pending[s.index()] == NONE {
            self.next.push(s);
        }
        self.pending[s.index()] |= bit;
    }

    fn settle(&mut self, nodes: &[NodeId], rule: TieRule) {
        for &v in nodes.iter() {
            let bits = mem::replace(&mut self.pending[v.index()], NONE);
            let adopted = match bits {
                BIT_A => BIT_A,
                BIT_B => BIT_B,
                _ => match rule.winner() {
                    Item::A => BIT_A,
                    Item::B => BIT_B,
                },
            };
            self.status[v.index()] = adopted;
            if adopted == BIT_A {
                self.count_a += 1;
            }
            self.activated.push(v);
        }
    }

    /// Nodes activated by the last run, in activation order.
    pub fn activated(&self) -> &[NodeId] {
        &self.activated
    }

    /// Item adopted by `v` in the last run.
    pub fn adopted(&self, v: NodeId) -> Option<Item> {
        match self.status[v.index()] {
            BIT_A => Some(Item::A),
            BIT_B => Some(Item::B),
            _ => None,
        }
    }

    /// Out-edges of every node activated by the last run (unsorted).
    pub fn for_each_triggered(&self, mut f: impl FnMut(EdgeId)) {
        for &u in &self.activated {
            for &e in self.graph.out_edges(u) {
                f(e);
            }
        }
    }
}

/// Deterministic propagation of `action` over a fixed live-edge mask.
pub fn propagate(
    g: &Graph,
    mask: &LiveEdgeMask,
    action: &Action,
    rule: TieRule,
) -> Result<PropagationOutcome> {
    if mask.len() != g.edge_count() {
        return Err(argument(format!(
            "mask has {} bits, graph has {} edges",
            mask.len(),
            g.edge_count()
        )));
    }
    action.validate(g)?;
    let mut cascade = Cascade::new(g);
    let reward = cascade.run(&action.seeds_a, &action.seeds_b, rule, |e| mask.is_live(e));

    let mut activated_a = Vec::new();
    let mut activated_b = Vec::new();
    for &v in cascade.activated() {
        match cascade.adopted(v) {
            Some(Item::A) => activated_a.push(v),
            Some(Item::B) => activated_b.push(v),
            None => {}
        }
    }
    activated_a.sort_unstable();
    activated_b.sort_unstable();

    let mut triggered = Vec::new();
    cascade.for_each_triggered(|e| triggered.push(e));
    triggered.sort_unstable();
    let observations = triggered.iter().map(|&e| mask.is_live(e) as u8).collect();

    Ok(PropagationOutcome {
        activated_a,
        activated_b,
        triggered,
        observations,
        reward,
    })
}
