//! Offline seed-selection oracles.
//!
//! [`greedy_seed_select`] solves the fixed-probability problem. The OFU
//! oracles solve the joint problem over seed sets and edge probabilities
//! constrained to confidence intervals. Since the spread is affine in each
//! edge probability, the optimum sits at interval endpoints, so each OFU
//! oracle picks an endpoint per edge and then runs the greedy oracle.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diffusion::{Action, TieRule};
use crate::error::{argument, Error, Result};
use crate::graph::{EdgeId, Graph, NodeId};
use crate::probs::{IntervalVector, ProbVector};
use crate::spread::{mask_rewards, mask_weights, Evaluation, SpreadEvaluator, ENUMERATION_LIMIT};

/// Default cap on the number of enumerated B-reachable edges.
pub const DEFAULT_MAX_ENUM_EDGES: usize = 12;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OracleResult {
    pub seeds_a: Vec<NodeId>,
    pub mu_used: ProbVector,
    pub estimated_value: f64,
}

/// Budget, tie rule and spread evaluation shared by every oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleParams {
    pub k: usize,
    pub rule: TieRule,
    pub eval: Evaluation,
}

impl OracleParams {
    pub fn new(k: usize, rule: TieRule, eval: Evaluation) -> Self {
        OracleParams { k, rule, eval }
    }
}

#[inline]
fn improves(candidate: f64, best: f64) -> bool {
    candidate > best + 1e-12 * best.abs().max(1.0)
}

fn check_budget(g: &Graph, k: usize) -> Result<()> {
    if k == 0 {
        return Err(argument("budget k must be at least 1"));
    }
    if k > g.node_count() {
        return Err(argument(alloc::format!(
            "budget k = {k} exceeds the node count {}",
            g.node_count()
        )));
    }
    Ok(())
}

/// Greedy marginal-gain seed selection for a fixed probability vector.
///
/// Each step scores every remaining node on a shared batch of live-edge masks
/// (fresh per step) and keeps the best, lowest id on ties. The reported value
/// is scored on a separate batch drawn before the first step, so runs with
/// the same stream report non-decreasing values as `k` grows.
pub fn greedy_seed_select<R: Rng + ?Sized>(
    g: &Graph,
    probs: &ProbVector,
    seeds_b: &[NodeId],
    params: OracleParams,
    rng: &mut R,
) -> Result<OracleResult> {
    check_budget(g, params.k)?;
    g.check_nodes(seeds_b, "B seed set")?;
    let mut scorer = SpreadEvaluator::new(g, probs, params.rule, params.eval)?;
    scorer.resample(rng);
    let mut stepper = match params.eval {
        Evaluation::MonteCarlo { .. } => Some(scorer.clone()),
        _ => None,
    };

    let mut chosen = vec![false; g.node_count()];
    let mut selected: Vec<NodeId> = Vec::with_capacity(params.k);
    for _ in 0..params.k {
        let eval = match stepper.as_mut() {
            Some(s) => {
                s.resample(rng);
                s
            }
            None => &mut scorer,
        };
        let mut best: Option<(NodeId, f64)> = None;
        selected.push(NodeId(0));
        for v in g.nodes() {
            if chosen[v.index()] {
                continue;
            }
            *selected.last_mut().unwrap() = v;
            let value = eval.value(&selected, seeds_b);
            if best.is_none_or(|(_, b)| improves(value, b)) {
                best = Some((v, value));
            }
        }
        let (v, _) = best.expect("k <= n leaves a candidate");
        *selected.last_mut().unwrap() = v;
        chosen[v.index()] = true;
    }
    selected.sort_unstable();
    let estimated_value = scorer.value(&selected, seeds_b);
    Ok(OracleResult {
        seeds_a: selected,
        mu_used: probs.clone(),
        estimated_value,
    })
}

/// Best size-`k` seed set by exhaustive search (lexicographically first on ties).
pub fn exhaustive_seed_select<R: Rng + ?Sized>(
    g: &Graph,
    probs: &ProbVector,
    seeds_b: &[NodeId],
    params: OracleParams,
    rng: &mut R,
) -> Result<OracleResult> {
    check_budget(g, params.k)?;
    g.check_nodes(seeds_b, "B seed set")?;
    let mut eval = SpreadEvaluator::new(g, probs, params.rule, params.eval)?;
    eval.resample(rng);
    let n = g.node_count();
    let k = params.k;
    let mut idx: Vec<usize> = (0..k).collect();
    let mut set: Vec<NodeId> = idx.iter().map(|&i| NodeId::from(i)).collect();
    let mut best = (set.clone(), f64::NEG_INFINITY);
    loop {
        for (slot, &i) in set.iter_mut().zip(&idx) {
            *slot = NodeId::from(i);
        }
        let value = eval.value(&set, seeds_b);
        if improves(value, best.1) || best.1 == f64::NEG_INFINITY {
            best = (set.clone(), value);
        }
        // next combination in lexicographic order
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    Ok(OracleResult {
        seeds_a: best.0,
        mu_used: probs.clone(),
        estimated_value: best.1,
    })
}

/// Bipartite OFU oracle.
///
/// Under A>B the competitor can never take a node from A, so every edge takes
/// its upper bound. Under B>A the competitor's out-edges take their lower
/// bound and all other edges their upper bound.
pub fn ofu_bipartite<R: Rng + ?Sized>(
    g: &Graph,
    intervals: &IntervalVector,
    seeds_b: &[NodeId],
    params: OracleParams,
    rng: &mut R,
) -> Result<OracleResult> {
    intervals.check_len(g)?;
    g.check_nodes(seeds_b, "B seed set")?;
    let sinks = g
        .bipartite_sinks()
        .ok_or_else(|| argument("graph is not bipartite: some node has both in- and out-edges"))?;
    if let Some(b) = seeds_b.iter().find(|b| sinks[b.index()]) {
        return Err(argument(alloc::format!(
            "B seed {b} is on the sink side of the bipartite graph"
        )));
    }
    let mu = competitor_lower_bounds(g, intervals, seeds_b, params.rule);
    greedy_seed_select(g, &mu, seeds_b, params, rng)
}

/// Heuristic OFU oracle for general graphs: lower bounds on the competitor's
/// direct out-edges under B>A, upper bounds everywhere else.
pub fn ofu_general_heuristic<R: Rng + ?Sized>(
    g: &Graph,
    intervals: &IntervalVector,
    seeds_b: &[NodeId],
    params: OracleParams,
    rng: &mut R,
) -> Result<OracleResult> {
    intervals.check_len(g)?;
    g.check_nodes(seeds_b, "B seed set")?;
    let mu = competitor_lower_bounds(g, intervals, seeds_b, params.rule);
    greedy_seed_select(g, &mu, seeds_b, params, rng)
}

fn competitor_lower_bounds(
    g: &Graph,
    intervals: &IntervalVector,
    seeds_b: &[NodeId],
    rule: TieRule,
) -> ProbVector {
    let mut mu = intervals.upper_bounds().into_vec();
    if rule == TieRule::BOverA {
        for &b in seeds_b {
            for &e in g.out_edges(b) {
                mu[e.index()] = intervals.lower(e);
            }
        }
    }
    ProbVector::from_unchecked(mu)
}

/// Boundary-enumeration OFU oracle.
///
/// Edges the competitor cannot reach sit at their upper bound. Every
/// combination of endpoints for the reachable edges with a non-degenerate
/// interval is tried with the greedy oracle; all corners share one random
/// stream seed, so Monte-Carlo scores are coupled across corners. The
/// highest-value corner wins, the smallest corner index on ties (bit `j` set
/// means the `j`-th enumerated edge takes its upper bound).
pub fn ofu_boundary_enum<R: Rng + ?Sized>(
    g: &Graph,
    intervals: &IntervalVector,
    seeds_b: &[NodeId],
    params: OracleParams,
    max_enum_edges: usize,
    rng: &mut R,
) -> Result<OracleResult> {
    intervals.check_len(g)?;
    let free = free_reachable_edges(g, intervals, seeds_b)?;
    if free.len() > max_enum_edges {
        return Err(Error::Capacity {
            what: "competitor-reachable edges to enumerate",
            got: free.len(),
            limit: max_enum_edges,
        });
    }
    let base_seed: u64 = rng.random();
    let mut mu = intervals.upper_bounds().into_vec();
    let mut best: Option<OracleResult> = None;
    for corner in 0u64..(1u64 << free.len()) {
        for (j, &e) in free.iter().enumerate() {
            mu[e.index()] = if (corner >> j) & 1 == 1 {
                intervals.upper(e)
            } else {
                intervals.lower(e)
            };
        }
        let mut corner_rng = ChaCha8Rng::seed_from_u64(base_seed);
        let probs = ProbVector::from_unchecked(mu.clone());
        let result = greedy_seed_select(g, &probs, seeds_b, params, &mut corner_rng)?;
        if best
            .as_ref()
            .is_none_or(|b| improves(result.estimated_value, b.estimated_value))
        {
            best = Some(result);
        }
    }
    Ok(best.expect("at least one corner"))
}

fn free_reachable_edges(
    g: &Graph,
    intervals: &IntervalVector,
    seeds_b: &[NodeId],
) -> Result<Vec<EdgeId>> {
    Ok(g.reachable_edges_from(seeds_b)?
        .into_iter()
        .filter(|&e| intervals.lower(e) < intervals.upper(e))
        .collect())
}

/// Interval-constrained oracle used by the OFU learner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum OfuOracle {
    Bipartite,
    BoundaryEnumeration {
        max_edges: usize,
    },
    Heuristic,
    /// Bipartite when applicable, else boundary enumeration when the
    /// competitor reaches at most `max_edges` free edges, else the heuristic
    /// (or a capacity error when `fallback` is off).
    Auto {
        max_edges: usize,
        fallback: bool,
    },
}

impl Default for OfuOracle {
    fn default() -> Self {
        OfuOracle::Auto {
            max_edges: DEFAULT_MAX_ENUM_EDGES,
            fallback: true,
        }
    }
}

impl OfuOracle {
    pub fn select<R: Rng + ?Sized>(
        &self,
        g: &Graph,
        intervals: &IntervalVector,
        seeds_b: &[NodeId],
        params: OracleParams,
        rng: &mut R,
    ) -> Result<OracleResult> {
        match *self {
            OfuOracle::Bipartite => ofu_bipartite(g, intervals, seeds_b, params, rng),
            OfuOracle::BoundaryEnumeration { max_edges } => {
                ofu_boundary_enum(g, intervals, seeds_b, params, max_edges, rng)
            }
            OfuOracle::Heuristic => ofu_general_heuristic(g, intervals, seeds_b, params, rng),
            OfuOracle::Auto {
                max_edges,
                fallback,
            } => {
                if let Some(sinks) = g.bipartite_sinks() {
                    if seeds_b.iter().all(|b| g.contains(*b) && !sinks[b.index()]) {
                        return ofu_bipartite(g, intervals, seeds_b, params, rng);
                    }
                }
                match ofu_boundary_enum(g, intervals, seeds_b, params, max_edges, rng) {
                    Err(Error::Capacity { .. }) if fallback => {
                        ofu_general_heuristic(g, intervals, seeds_b, params, rng)
                    }
                    other => other,
                }
            }
        }
    }
}

/// Exact `max_{mu in intervals} r_S(mu)` for a fixed action, by evaluating
/// every endpoint combination of the edges with non-degenerate intervals.
/// Returns the maximum and the first maximising corner.
pub fn interval_max_spread(
    g: &Graph,
    intervals: &IntervalVector,
    action: &Action,
    rule: TieRule,
    max_free_edges: usize,
) -> Result<(f64, ProbVector)> {
    intervals.check_len(g)?;
    let rewards = mask_rewards(g, action, rule, ENUMERATION_LIMIT)?;
    let free: Vec<EdgeId> = (0..g.edge_count())
        .map(EdgeId::from)
        .filter(|&e| intervals.lower(e) < intervals.upper(e))
        .collect();
    if free.len() > max_free_edges {
        return Err(Error::Capacity {
            what: "edges with free intervals",
            got: free.len(),
            limit: max_free_edges,
        });
    }
    let mut mu = intervals.upper_bounds().into_vec();
    let mut best = (f64::NEG_INFINITY, ProbVector::from_unchecked(mu.clone()));
    for corner in 0u64..(1u64 << free.len()) {
        for (j, &e) in free.iter().enumerate() {
            mu[e.index()] = if (corner >> j) & 1 == 1 {
                intervals.upper(e)
            } else {
                intervals.lower(e)
            };
        }
        let probs = ProbVector::from_unchecked(mu.clone());
        let value: f64 = mask_weights(&probs)
            .iter()
            .zip(&rewards)
            .map(|(w, &r)| w * r as f64)
            .sum();
        if value > best.0 {
            best = (value, probs);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;

    fn ids(v: &[u32]) -> Vec<NodeId> {
        v.iter().map(|&i| NodeId(i)).collect()
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(42)
    }

    fn exact(k: usize, rule: TieRule) -> OracleParams {
        OracleParams::new(k, rule, Evaluation::Exact)
    }

    // l1=0, l2=1, r1=2, r2=3, r3=4
    fn coverage() -> Graph {
        Graph::from_pairs(5, &[(0, 2), (0, 3), (1, 2), (1, 3), (1, 4)]).unwrap()
    }

    #[test]
    fn greedy_prefers_dominant_coverage() {
        let g = coverage();
        let p = ProbVector::constant(5, 1.0).unwrap();
        let r = greedy_seed_select(&g, &p, &[], exact(1, TieRule::AOverB), &mut rng()).unwrap();
        assert_eq!(r.seeds_a, ids(&[1]));
        assert_eq!(r.estimated_value, 4.0);
        let mc = OracleParams::new(1, TieRule::AOverB, Evaluation::MonteCarlo { samples: 50 });
        assert_eq!(
            greedy_seed_select(&g, &p, &[], mc, &mut rng())
                .unwrap()
                .seeds_a,
            ids(&[1])
        );
    }

    #[test]
    fn greedy_ties_take_lowest_id() {
        let g = coverage();
        let p = ProbVector::constant(5, 0.0).unwrap();
        let r = greedy_seed_select(&g, &p, &[], exact(1, TieRule::AOverB), &mut rng()).unwrap();
        assert_eq!((r.seeds_a, r.estimated_value), (ids(&[0]), 1.0));
    }

    #[test]
    fn greedy_avoids_dominated_overlap() {
        // path 1->2->3 as nodes 0->1->2, competitor seeds node 0, B>A
        let g = Graph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        let p = ProbVector::constant(2, 1.0).unwrap();
        let r =
            greedy_seed_select(&g, &p, &ids(&[0]), exact(1, TieRule::BOverA), &mut rng()).unwrap();
        assert_eq!(r.seeds_a, ids(&[1]));
        assert_eq!(r.estimated_value, 2.0);
    }

    #[test]
    fn greedy_budget_errors() {
        let g = coverage();
        let p = ProbVector::constant(5, 1.0).unwrap();
        assert!(greedy_seed_select(&g, &p, &[], exact(6, TieRule::AOverB), &mut rng()).is_err());
        assert!(greedy_seed_select(&g, &p, &[], exact(0, TieRule::AOverB), &mut rng()).is_err());
    }

    #[test]
    fn exhaustive_saturated_budget_takes_everything() {
        let g = coverage();
        let p = ProbVector::constant(5, 0.5).unwrap();
        let r = exhaustive_seed_select(&g, &p, &[], exact(5, TieRule::AOverB), &mut rng()).unwrap();
        assert_eq!(r.seeds_a, ids(&[0, 1, 2, 3, 4]));
        assert_eq!(r.estimated_value, 5.0);
    }

    #[test]
    fn bipartite_assignments_follow_rule() {
        let g = coverage();
        let c = IntervalVector::new(vec![0.2, 0.3, 0.3, 0.3, 0.3], vec![0.8, 0.7, 0.7, 0.7, 0.7])
            .unwrap();
        let r = ofu_bipartite(&g, &c, &ids(&[0]), exact(1, TieRule::BOverA), &mut rng()).unwrap();
        assert_eq!(r.mu_used.as_slice(), &[0.2, 0.3, 0.7, 0.7, 0.7]);

        let c = IntervalVector::new(vec![0.3; 5], vec![0.7; 5]).unwrap();
        let r = ofu_bipartite(&g, &c, &ids(&[0]), exact(1, TieRule::AOverB), &mut rng()).unwrap();
        assert_eq!(r.mu_used.as_slice(), &[0.7; 5]);
    }

    #[test]
    fn bipartite_rejects_general_graphs_and_sink_seeds() {
        let path = Graph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        let c = IntervalVector::full(2);
        assert!(ofu_bipartite(&path, &c, &[], exact(1, TieRule::BOverA), &mut rng()).is_err());
        let g = coverage();
        let c = IntervalVector::full(5);
        assert!(ofu_bipartite(&g, &c, &ids(&[3]), exact(1, TieRule::BOverA), &mut rng()).is_err());
    }

    #[test]
    fn zero_width_intervals_reduce_to_greedy() {
        let g = coverage();
        let p = ProbVector::new(vec![0.9, 0.4, 0.5, 0.6, 0.2]).unwrap();
        let c = IntervalVector::point(&p);
        let params = exact(2, TieRule::BOverA);
        let plain = greedy_seed_select(&g, &p, &ids(&[0]), params, &mut rng()).unwrap();
        let ofu = ofu_bipartite(&g, &c, &ids(&[0]), params, &mut rng()).unwrap();
        assert_eq!(plain, ofu);
    }

    #[test]
    fn heuristic_star_assignment() {
        // b=0 -> v1=1, v2=2; v1 -> 3; v2 -> 4
        let g = Graph::from_pairs(5, &[(0, 1), (0, 2), (1, 3), (2, 4)]).unwrap();
        let c = IntervalVector::new(vec![0.1, 0.1, 0.2, 0.2], vec![0.9, 0.9, 0.6, 0.6]).unwrap();
        let r = ofu_general_heuristic(&g, &c, &ids(&[0]), exact(1, TieRule::BOverA), &mut rng())
            .unwrap();
        assert_eq!(r.mu_used.as_slice(), &[0.1, 0.1, 0.6, 0.6]);
        let r = ofu_general_heuristic(&g, &c, &[], exact(1, TieRule::BOverA), &mut rng()).unwrap();
        assert_eq!(r.mu_used.as_slice(), &[0.9, 0.9, 0.6, 0.6]);
    }

    #[test]
    fn boundary_enum_crossing_fixture() {
        // a=0 x=1 v=2 b=3: a->x [1,1], x->v [0.3,0.9], b->v [0.1,0.7]
        // A wins v only if x->v is live and b->v is blocked: 2 + p (1 - q)
        let g = Graph::from_pairs(4, &[(0, 1), (1, 2), (3, 2)]).unwrap();
        let c = IntervalVector::new(vec![1.0, 0.3, 0.1], vec![1.0, 0.9, 0.7]).unwrap();
        let r = ofu_boundary_enum(
            &g,
            &c,
            &ids(&[3]),
            exact(1, TieRule::BOverA),
            12,
            &mut rng(),
        )
        .unwrap();
        assert_eq!(r.seeds_a, ids(&[0]));
        assert_eq!(r.mu_used.as_slice(), &[1.0, 0.9, 0.1]);
        assert!((r.estimated_value - 2.81).abs() < 1e-12);

        assert!(matches!(
            ofu_boundary_enum(&g, &c, &ids(&[3]), exact(1, TieRule::BOverA), 0, &mut rng()),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn boundary_enum_without_reachable_edges_is_upper_greedy() {
        let g = coverage();
        let c = IntervalVector::new(vec![0.1; 5], vec![0.6; 5]).unwrap();
        let r = ofu_boundary_enum(&g, &c, &[], exact(1, TieRule::BOverA), 12, &mut rng()).unwrap();
        let up = greedy_seed_select(
            &g,
            &c.upper_bounds(),
            &[],
            exact(1, TieRule::BOverA),
            &mut rng(),
        )
        .unwrap();
        assert_eq!(r, up);
    }

    #[test]
    fn auto_falls_back_when_enumeration_is_too_large() {
        let g = Graph::from_pairs(4, &[(0, 1), (1, 2), (3, 2), (2, 0)]).unwrap();
        let c = IntervalVector::new(vec![0.2; 4], vec![0.8; 4]).unwrap();
        let params = exact(1, TieRule::BOverA);
        let auto = OfuOracle::Auto {
            max_edges: 1,
            fallback: true,
        };
        let heur = ofu_general_heuristic(&g, &c, &ids(&[3]), params, &mut rng()).unwrap();
        assert_eq!(
            auto.select(&g, &c, &ids(&[3]), params, &mut rng()).unwrap(),
            heur
        );
        let strict = OfuOracle::Auto {
            max_edges: 1,
            fallback: false,
        };
        assert!(strict
            .select(&g, &c, &ids(&[3]), params, &mut rng())
            .is_err());
    }

    #[test]
    fn interval_max_matches_corner_formula() {
        let g = Graph::from_pairs(4, &[(0, 1), (1, 2), (3, 2)]).unwrap();
        let c = IntervalVector::new(vec![1.0, 0.3, 0.1], vec![1.0, 0.9, 0.7]).unwrap();
        let a = Action::new(ids(&[0]), ids(&[3]), 1);
        let (v, mu) = interval_max_spread(&g, &c, &a, TieRule::AOverB, 12).unwrap();
        assert!((v - 2.81).abs() < 1e-12);
        assert_eq!(mu.as_slice(), &[1.0, 0.9, 0.1]);
    }
}
