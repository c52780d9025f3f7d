//! Influence-spread evaluation: Monte-Carlo, exact enumeration over live-edge
//! graphs, and the closed form available on two-layer (bipartite) graphs.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::diffusion::{Action, Cascade, Item, LiveEdgeMask, TieRule};
use crate::error::{argument, Error, Result};
use crate::graph::{EdgeId, Graph, NodeId};
use crate::probs::ProbVector;

/// Largest edge count accepted by exact enumeration by default (2^20 masks).
pub const ENUMERATION_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpreadEstimate {
    pub mean: f64,
    pub stderr: f64,
}

/// How an oracle or the harness evaluates `r_S(mu)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Evaluation {
    /// Sum over all `2^m` live-edge graphs; requires `m <= ENUMERATION_LIMIT`.
    Exact,
    /// Mean over a fixed number of sampled live-edge graphs.
    MonteCarlo { samples: usize },
    /// Closed form for graphs whose edges all leave in-degree-zero nodes.
    Bipartite,
}

impl Evaluation {
    /// Closed form on bipartite graphs, enumeration on small ones, sampling otherwise.
    pub fn auto(g: &Graph, exact_up_to: usize, samples: usize) -> Self {
        if g.is_bipartite() {
            Evaluation::Bipartite
        } else if g.edge_count() <= exact_up_to {
            Evaluation::Exact
        } else {
            Evaluation::MonteCarlo { samples }
        }
    }
}

/// Monte-Carlo estimate of the A-spread with its standard error.
pub fn estimate_spread<R: Rng + ?Sized>(
    g: &Graph,
    probs: &ProbVector,
    action: &Action,
    rule: TieRule,
    n_samples: usize,
    rng: &mut R,
) -> Result<SpreadEstimate> {
    check_inputs(g, probs, action, n_samples)?;
    let mut cascade = Cascade::new(g);
    let p = probs.as_slice();
    let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
    for _ in 0..n_samples {
        let mask = LiveEdgeMask::sample(probs, rng);
        debug_assert_eq!(mask.len(), p.len());
        let x = cascade.run(&action.seeds_a, &action.seeds_b, rule, |e| mask.is_live(e)) as f64;
        sum += x;
        sum_sq += x * x;
    }
    let n = n_samples as f64;
    let mean = sum / n;
    let stderr = if n_samples > 1 {
        let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        libm::sqrt(var / n)
    } else {
        0.0
    };
    Ok(SpreadEstimate { mean, stderr })
}

/// Fraction of sampled cascades in which `edge` is triggered.
pub fn estimate_trigger_prob<R: Rng + ?Sized>(
    g: &Graph,
    probs: &ProbVector,
    action: &Action,
    rule: TieRule,
    edge: EdgeId,
    n_samples: usize,
    rng: &mut R,
) -> Result<f64> {
    check_inputs(g, probs, action, n_samples)?;
    if edge.index() >= g.edge_count() {
        return Err(argument(format!("edge {edge} not in graph")));
    }
    let source = g.source(edge);
    let mut cascade = Cascade::new(g);
    let mut hits = 0usize;
    for _ in 0..n_samples {
        let mask = LiveEdgeMask::sample(probs, rng);
        cascade.run(&action.seeds_a, &action.seeds_b, rule, |e| mask.is_live(e));
        hits += cascade.adopted(source).is_some() as usize;
    }
    Ok(hits as f64 / n_samples as f64)
}

/// Exact spread and per-edge triggering probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactEvaluation {
    pub spread: f64,
    pub trigger_probs: Vec<f64>,
}

/// Exact `r_S(mu)` by summing over every live-edge graph.
pub fn exact_spread(g: &Graph, probs: &ProbVector, action: &Action, rule: TieRule) -> Result<f64> {
    exact_spread_with_limit(g, probs, action, rule, ENUMERATION_LIMIT)
}

pub fn exact_spread_with_limit(
    g: &Graph,
    probs: &ProbVector,
    action: &Action,
    rule: TieRule,
    limit: usize,
) -> Result<f64> {
    check_inputs(g, probs, action, 1)?;
    check_enumerable(g, limit)?;
    let weights = mask_weights(probs);
    let mut cascade = Cascade::new(g);
    Ok(enumerate(
        &mut cascade,
        &weights,
        &action.seeds_a,
        &action.seeds_b,
        rule,
    ))
}

/// Exact spread together with the probability that each edge is triggered.
pub fn exact_evaluation(
    g: &Graph,
    probs: &ProbVector,
    action: &Action,
    rule: TieRule,
) -> Result<ExactEvaluation> {
    check_inputs(g, probs, action, 1)?;
    check_enumerable(g, ENUMERATION_LIMIT)?;
    let weights = mask_weights(probs);
    let mut cascade = Cascade::new(g);
    let mut spread = 0.0;
    let mut trigger_probs = vec![0.0; g.edge_count()];
    for (bits, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let a = cascade.run(&action.seeds_a, &action.seeds_b, rule, |e| {
            (bits >> e.index()) & 1 == 1
        });
        spread += w * a as f64;
        cascade.for_each_triggered(|e| trigger_probs[e.index()] += w);
    }
    Ok(ExactEvaluation {
        spread,
        trigger_probs,
    })
}

/// Closed-form spread on a graph whose edges all leave in-degree-zero nodes.
///
/// Every non-seed node can only be reached at step 1, so it adopts A with
/// probability `1 - q_A` under A>B and `(1 - q_A) q_B` under B>A, where
/// `q_X` is the probability that no edge from an X-seed into it is live.
pub fn bipartite_spread(
    g: &Graph,
    probs: &ProbVector,
    action: &Action,
    rule: TieRule,
) -> Result<f64> {
    check_inputs(g, probs, action, 1)?;
    let mut scratch = BipartiteScratch::new(g)?;
    Ok(scratch.value(g, probs.as_slice(), &action.seeds_a, &action.seeds_b, rule))
}

fn check_inputs(g: &Graph, probs: &ProbVector, action: &Action, n_samples: usize) -> Result<()> {
    probs.check_len(g)?;
    action.validate(g)?;
    if n_samples == 0 {
        return Err(argument("sample count must be at least 1"));
    }
    Ok(())
}

fn check_enumerable(g: &Graph, limit: usize) -> Result<()> {
    // the weight table holds 2^m doubles
    let limit = limit.min(26);
    if g.edge_count() > limit {
        return Err(Error::Capacity {
            what: "edge count for exact enumeration",
            got: g.edge_count(),
            limit,
        });
    }
    Ok(())
}

/// `Pr(L)` for every mask `L`, bit `i` set when edge `i` is live.
pub(crate) fn mask_weights(probs: &ProbVector) -> Vec<f64> {
    let mut w = Vec::with_capacity(1 << probs.len());
    w.push(1.0);
    for &p in probs.as_slice() {
        let half = w.len();
        for j in 0..half {
            let base = w[j];
            w.push(base * p);
            w[j] = base * (1.0 - p);
        }
    }
    w
}

/// A-count for every live-edge mask; `m` must be enumerable.
pub(crate) fn mask_rewards(
    g: &Graph,
    action: &Action,
    rule: TieRule,
    limit: usize,
) -> Result<Vec<u32>> {
    action.validate(g)?;
    check_enumerable(g, limit)?;
    let mut cascade = Cascade::new(g);
    Ok((0..1usize << g.edge_count())
        .map(|bits| {
            cascade.run(&action.seeds_a, &action.seeds_b, rule, |e| {
                (bits >> e.index()) & 1 == 1
            }) as u32
        })
        .collect())
}

fn enumerate(
    cascade: &mut Cascade<'_>,
    weights: &[f64],
    seeds_a: &[NodeId],
    seeds_b: &[NodeId],
    rule: TieRule,
) -> f64 {
    let mut total = 0.0;
    for (bits, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let a = cascade.run(seeds_a, seeds_b, rule, |e| (bits >> e.index()) & 1 == 1);
        total += w * a as f64;
    }
    total
}

#[derive(Debug, Clone)]
struct BipartiteScratch {
    seed_bits: Vec<u8>,
    miss_a: Vec<f64>,
    miss_b: Vec<f64>,
    touched: Vec<usize>,
}

impl BipartiteScratch {
    fn new(g: &Graph) -> Result<Self> {
        if !g.is_bipartite() {
            return Err(argument("closed-form evaluation needs a bipartite graph"));
        }
        let n = g.node_count();
        Ok(BipartiteScratch {
            seed_bits: vec![0; n],
            miss_a: vec![1.0; n],
            miss_b: vec![1.0; n],
            touched: Vec::new(),
        })
    }

    fn value(
        &mut self,
        g: &Graph,
        p: &[f64],
        seeds_a: &[NodeId],
        seeds_b: &[NodeId],
        rule: TieRule,
    ) -> f64 {
        for &s in seeds_a {
            self.seed_bits[s.index()] |= 1;
        }
        for &s in seeds_b {
            self.seed_bits[s.index()] |= 2;
        }
        let mut total = 0.0;
        for &s in seeds_a.iter().chain(seeds_b) {
            let bits = self.seed_bits[s.index()];
            if bits & 4 != 0 {
                continue;
            }
            self.seed_bits[s.index()] |= 4;
            let item = match bits & 3 {
                1 => Item::A,
                2 => Item::B,
                _ => rule.winner(),
            };
            if item == Item::A {
                total += 1.0;
            }
            for &e in g.out_edges(s) {
                let v = g.target(e).index();
                if self.seed_bits[v] & 8 == 0 {
                    self.seed_bits[v] |= 8;
                    self.touched.push(v);
                }
                let miss = match item {
                    Item::A => &mut self.miss_a[v],
                    Item::B => &mut self.miss_b[v],
                };
                *miss *= 1.0 - p[e.index()];
            }
        }
        for &v in &self.touched {
            // seeds are settled at step 0
            if self.seed_bits[v] & 3 == 0 {
                let reached_a = 1.0 - self.miss_a[v];
                total += match rule {
                    TieRule::AOverB => reached_a,
                    TieRule::BOverA => reached_a * self.miss_b[v],
                };
            }
            self.miss_a[v] = 1.0;
            self.miss_b[v] = 1.0;
            self.seed_bits[v] &= !8;
        }
        self.touched.clear();
        for &s in seeds_a.iter().chain(seeds_b) {
            self.seed_bits[s.index()] = 0;
        }
        total
    }
}

/// Evaluates many candidate seed sets against one probability vector.
///
/// In Monte-Carlo mode every candidate is scored on the same batch of
/// live-edge masks until [`SpreadEvaluator::resample`] draws a new batch.
#[derive(Debug, Clone)]
pub struct SpreadEvaluator<'g> {
    graph: &'g Graph,
    probs: ProbVector,
    rule: TieRule,
    mode: Evaluation,
    cascade: Cascade<'g>,
    masks: Vec<LiveEdgeMask>,
    weights: Vec<f64>,
    bipartite: Option<BipartiteScratch>,
}

impl<'g> SpreadEvaluator<'g> {
    pub fn new(
        graph: &'g Graph,
        probs: &ProbVector,
        rule: TieRule,
        mode: Evaluation,
    ) -> Result<Self> {
        probs.check_len(graph)?;
        let mut weights = Vec::new();
        let mut bipartite = None;
        match mode {
            Evaluation::Exact => {
                check_enumerable(graph, ENUMERATION_LIMIT)?;
                weights = mask_weights(probs);
            }
            Evaluation::MonteCarlo { samples } => {
                if samples == 0 {
                    return Err(argument("sample count must be at least 1"));
                }
            }
            Evaluation::Bipartite => bipartite = Some(BipartiteScratch::new(graph)?),
        }
        Ok(SpreadEvaluator {
            graph,
            probs: probs.clone(),
            rule,
            mode,
            cascade: Cascade::new(graph),
            masks: Vec::new(),
            weights,
            bipartite,
        })
    }

    pub fn mode(&self) -> Evaluation {
        self.mode
    }

    pub fn probs(&self) -> &ProbVector {
        &self.probs
    }

    /// Draws a fresh batch of masks (Monte-Carlo mode only).
    pub fn resample<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        if let Evaluation::MonteCarlo { samples } = self.mode {
            self.masks.clear();
            for _ in 0..samples {
                self.masks.push(LiveEdgeMask::sample(&self.probs, rng));
            }
        }
    }

    /// Spread of `(seeds_a, seeds_b)`. Seeds must be valid node ids.
    ///
    /// # Panics
    /// In Monte-Carlo mode, if no batch has been drawn yet.
    pub fn value(&mut self, seeds_a: &[NodeId], seeds_b: &[NodeId]) -> f64 {
        match self.mode {
            Evaluation::Exact => enumerate(
                &mut self.cascade,
                &self.weights,
                seeds_a,
                seeds_b,
                self.rule,
            ),
            Evaluation::MonteCarlo { .. } => {
                assert!(!self.masks.is_empty(), "resample before evaluating");
                let mut total = 0usize;
                for mask in &self.masks {
                    total += self
                        .cascade
                        .run(seeds_a, seeds_b, self.rule, |e| mask.is_live(e));
                }
                total as f64 / self.masks.len() as f64
            }
            Evaluation::Bipartite => {
                let scratch = self.bipartite.as_mut().expect("bipartite scratch");
                scratch.value(
                    self.graph,
                    self.probs.as_slice(),
                    seeds_a,
                    seeds_b,
                    self.rule,
                )
            }
        }
    }
}

/// One-shot evaluation of an action under `mode`.
pub fn evaluate<R: Rng + ?Sized>(
    g: &Graph,
    probs: &ProbVector,
    action: &Action,
    rule: TieRule,
    mode: Evaluation,
    rng: &mut R,
) -> Result<f64> {
    action.validate(g)?;
    let mut eval = SpreadEvaluator::new(g, probs, rule, mode)?;
    eval.resample(rng);
    Ok(eval.value(&action.seeds_a, &action.seeds_b))
}
