use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::diffusion::Action;
use crate::error::{argument, Result};
use crate::graph::{Graph, NodeId};
use crate::oracles::{greedy_seed_select, OfuOracle, OracleParams};

use super::state::BanditState;

/// Branch taken by an epsilon-greedy round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Branch {
    Explore,
    Exploit,
}

fn action(seeds_a: Vec<NodeId>, seeds_b: &[NodeId], k: usize) -> Action {
    Action::new(seeds_a, seeds_b.to_vec(), k)
}

/// Greedy on one posterior draw per edge.
pub fn ts_round<R: Rng + ?Sized>(
    state: &BanditState,
    g: &Graph,
    seeds_b: &[NodeId],
    params: OracleParams,
    rng: &mut R,
) -> Result<Action> {
    let theta = state.sample_means(rng);
    let chosen = greedy_seed_select(g, &theta, seeds_b, params, rng)?;
    Ok(action(chosen.seeds_a, seeds_b, params.k))
}

/// Interval oracle on the current confidence intervals.
pub fn ofu_round<R: Rng + ?Sized>(
    state: &BanditState,
    g: &Graph,
    seeds_b: &[NodeId],
    params: OracleParams,
    oracle: &OfuOracle,
    alpha_rho: f64,
    rng: &mut R,
) -> Result<Action> {
    let intervals = state.confidence_intervals(alpha_rho);
    let chosen = oracle.select(g, &intervals, seeds_b, params, rng)?;
    Ok(action(chosen.seeds_a, seeds_b, params.k))
}

/// Greedy on the upper confidence bounds of every edge.
pub fn cucb_round<R: Rng + ?Sized>(
    state: &BanditState,
    g: &Graph,
    seeds_b: &[NodeId],
    params: OracleParams,
    alpha_rho: f64,
    rng: &mut R,
) -> Result<Action> {
    let upper = state.upper_confidence(alpha_rho);
    let chosen = greedy_seed_select(g, &upper, seeds_b, params, rng)?;
    Ok(action(chosen.seeds_a, seeds_b, params.k))
}

/// `k` distinct nodes drawn uniformly, returned sorted.
pub fn uniform_seed_set<R: Rng + ?Sized>(g: &Graph, k: usize, rng: &mut R) -> Result<Vec<NodeId>> {
    if k > g.node_count() {
        return Err(argument(alloc::format!(
            "budget {k} exceeds node count {}",
            g.node_count()
        )));
    }
    let mut nodes: Vec<NodeId> = g.nodes().collect();
    let (chosen, _) = nodes.partial_shuffle(rng, k);
    let mut chosen = chosen.to_vec();
    chosen.sort_unstable();
    Ok(chosen)
}

/// Uniform random seeds with probability `epsilon`, else greedy on the
/// empirical means.
pub fn epsilon_greedy_round<R: Rng + ?Sized>(
    state: &BanditState,
    g: &Graph,
    seeds_b: &[NodeId],
    params: OracleParams,
    epsilon: f64,
    rng: &mut R,
) -> Result<(Action, Branch)> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(argument(alloc::format!(
            "epsilon must lie in [0, 1], got {epsilon}"
        )));
    }
    if rng.random::<f64>() < epsilon {
        let seeds = uniform_seed_set(g, params.k, rng)?;
        return Ok((action(seeds, seeds_b, params.k), Branch::Explore));
    }
    let chosen = greedy_seed_select(g, &state.empirical_means(), seeds_b, params, rng)?;
    Ok((action(chosen.seeds_a, seeds_b, params.k), Branch::Exploit))
}
