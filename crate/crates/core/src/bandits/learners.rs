use alloc::vec::Vec;

use rand::RngCore;

use crate::diffusion::{Action, PropagationOutcome};
use crate::error::{argument, Result};
use crate::graph::{Graph, NodeId};
use crate::oracles::{greedy_seed_select, OfuOracle, OracleParams};
use crate::probs::ProbVector;

use super::etc::etc_schedule;
use super::rounds::{
    cucb_round, epsilon_greedy_round, ofu_round, ts_round, uniform_seed_set, Branch,
};
use super::state::{ArmPosterior, BanditState, FeedbackScope};

/// An online seed-selection policy.
///
/// The true edge means are never visible through this interface; a learner
/// only sees the graph, the competitor's seeds, and the semi-bandit outcome
/// of its own actions.
pub trait Learner {
    fn name(&self) -> &'static str;

    fn select(&mut self, g: &Graph, seeds_b: &[NodeId], rng: &mut dyn RngCore) -> Result<Action>;

    /// Ingests the outcome of the action returned by the preceding `select`
    /// and advances the round counter.
    fn observe(&mut self, g: &Graph, action: &Action, outcome: &PropagationOutcome) -> Result<()>;
}

/// Posterior sampling with the greedy oracle.
#[derive(Debug, Clone)]
pub struct ThompsonSampling {
    state: BanditState,
    params: OracleParams,
}

impl ThompsonSampling {
    pub fn new(priors: Vec<ArmPosterior>, params: OracleParams) -> Self {
        ThompsonSampling {
            state: BanditState::with_posteriors(priors, 0.0),
            params,
        }
    }

    pub fn state(&self) -> &BanditState {
        &self.state
    }
}

impl Learner for ThompsonSampling {
    fn name(&self) -> &'static str {
        "ocim-ts"
    }

    fn select(&mut self, g: &Graph, seeds_b: &[NodeId], rng: &mut dyn RngCore) -> Result<Action> {
        ts_round(&self.state, g, seeds_b, self.params, rng)
    }

    fn observe(
        &mut self,
        _g: &Graph,
        _action: &Action,
        outcome: &PropagationOutcome,
    ) -> Result<()> {
        self.state.posterior_update(outcome)?;
        self.state.advance();
        Ok(())
    }
}

/// Optimism over confidence intervals with an interval oracle.
#[derive(Debug, Clone)]
pub struct OcimOfu {
    state: BanditState,
    params: OracleParams,
    oracle: OfuOracle,
    alpha_rho: f64,
}

impl OcimOfu {
    pub fn new(m: usize, params: OracleParams, oracle: OfuOracle, alpha_rho: f64) -> Self {
        OcimOfu {
            state: BanditState::new(m, ArmPosterior::uniform(), 1.0),
            params,
            oracle,
            alpha_rho,
        }
    }

    pub fn state(&self) -> &BanditState {
        &self.state
    }
}

impl Learner for OcimOfu {
    fn name(&self) -> &'static str {
        "ocim-ofu"
    }

    fn select(&mut self, g: &Graph, seeds_b: &[NodeId], rng: &mut dyn RngCore) -> Result<Action> {
        ofu_round(
            &self.state,
            g,
            seeds_b,
            self.params,
            &self.oracle,
            self.alpha_rho,
            rng,
        )
    }

    fn observe(
        &mut self,
        _g: &Graph,
        _action: &Action,
        outcome: &PropagationOutcome,
    ) -> Result<()> {
        self.state.stats_update(outcome, &FeedbackScope::FullTau)?;
        self.state.advance();
        Ok(())
    }
}

/// Explore-then-commit: a fixed round-robin exploration phase on direct
/// out-edge feedback, then greedy on the frozen empirical means.
#[derive(Debug, Clone)]
pub struct OcimEtc {
    state: BanditState,
    params: OracleParams,
    schedule: Vec<Vec<NodeId>>,
    visits: u64,
    played: usize,
    committed: Option<ProbVector>,
}

impl OcimEtc {
    pub fn new(g: &Graph, params: OracleParams, visits: u64) -> Result<Self> {
        Ok(OcimEtc {
            state: BanditState::new(g.edge_count(), ArmPosterior::uniform(), 0.0),
            params,
            schedule: etc_schedule(g.node_count(), params.k, visits)?,
            visits,
            played: 0,
            committed: None,
        })
    }

    pub fn state(&self) -> &BanditState {
        &self.state
    }

    pub fn visits(&self) -> u64 {
        self.visits
    }

    pub fn exploration_rounds(&self) -> usize {
        self.schedule.len()
    }

    /// True while the next `select` belongs to the exploration phase.
    pub fn is_exploring(&self) -> bool {
        self.played < self.schedule.len()
    }
}

impl Learner for OcimEtc {
    fn name(&self) -> &'static str {
        "ocim-etc"
    }

    fn select(&mut self, g: &Graph, seeds_b: &[NodeId], rng: &mut dyn RngCore) -> Result<Action> {
        if let Some(seeds) = self.schedule.get(self.played) {
            return Ok(Action::new(seeds.clone(), seeds_b.to_vec(), self.params.k));
        }
        let means = self
            .committed
            .get_or_insert_with(|| self.state.empirical_means());
        let chosen = greedy_seed_select(g, means, seeds_b, self.params, rng)?;
        Ok(Action::new(chosen.seeds_a, seeds_b.to_vec(), self.params.k))
    }

    fn observe(&mut self, g: &Graph, action: &Action, outcome: &PropagationOutcome) -> Result<()> {
        if self.is_exploring() {
            let scope = FeedbackScope::direct(g, action, self.params.rule);
            self.state.stats_update(outcome, &scope)?;
        }
        self.played += 1;
        self.state.advance();
        Ok(())
    }
}

/// Greedy on empirical means with uniform exploration at rate `epsilon`.
/// With `epsilon = 0` this is the pure empirical-mean policy.
#[derive(Debug, Clone)]
pub struct EpsilonGreedy {
    state: BanditState,
    params: OracleParams,
    epsilon: f64,
    last_branch: Option<Branch>,
    explorations: u64,
}

impl EpsilonGreedy {
    pub fn new(m: usize, params: OracleParams, epsilon: f64, init_mean: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(argument(alloc::format!(
                "epsilon must lie in [0, 1], got {epsilon}"
            )));
        }
        Ok(EpsilonGreedy {
            state: BanditState::new(m, ArmPosterior::uniform(), init_mean),
            params,
            epsilon,
            last_branch: None,
            explorations: 0,
        })
    }

    pub fn state(&self) -> &BanditState {
        &self.state
    }

    pub fn last_branch(&self) -> Option<Branch> {
        self.last_branch
    }

    pub fn explorations(&self) -> u64 {
        self.explorations
    }
}

impl Learner for EpsilonGreedy {
    fn name(&self) -> &'static str {
        if self.epsilon == 0.0 {
            "emp"
        } else {
            "eps-greedy"
        }
    }

    fn select(&mut self, g: &Graph, seeds_b: &[NodeId], rng: &mut dyn RngCore) -> Result<Action> {
        let (action, branch) =
            epsilon_greedy_round(&self.state, g, seeds_b, self.params, self.epsilon, rng)?;
        if branch == Branch::Explore {
            self.explorations += 1;
        }
        self.last_branch = Some(branch);
        Ok(action)
    }

    fn observe(
        &mut self,
        _g: &Graph,
        _action: &Action,
        outcome: &PropagationOutcome,
    ) -> Result<()> {
        self.state.stats_update(outcome, &FeedbackScope::FullTau)?;
        self.state.advance();
        Ok(())
    }
}

/// Upper confidence bounds fed to the greedy oracle; sound only when the
/// spread is monotone in the edge means.
#[derive(Debug, Clone)]
pub struct Cucb {
    state: BanditState,
    params: OracleParams,
    alpha_rho: f64,
}

impl Cucb {
    pub fn new(m: usize, params: OracleParams, alpha_rho: f64) -> Self {
        Cucb {
            state: BanditState::new(m, ArmPosterior::uniform(), 1.0),
            params,
            alpha_rho,
        }
    }

    pub fn state(&self) -> &BanditState {
        &self.state
    }
}

impl Learner for Cucb {
    fn name(&self) -> &'static str {
        "cucb"
    }

    fn select(&mut self, g: &Graph, seeds_b: &[NodeId], rng: &mut dyn RngCore) -> Result<Action> {
        cucb_round(&self.state, g, seeds_b, self.params, self.alpha_rho, rng)
    }

    fn observe(
        &mut self,
        _g: &Graph,
        _action: &Action,
        outcome: &PropagationOutcome,
    ) -> Result<()> {
        self.state.stats_update(outcome, &FeedbackScope::FullTau)?;
        self.state.advance();
        Ok(())
    }
}

/// Greedy on a fixed mean vector supplied up front; ignores feedback.
#[derive(Debug, Clone)]
pub struct KnownMeans {
    probs: ProbVector,
    params: OracleParams,
}

impl KnownMeans {
    pub fn new(probs: ProbVector, params: OracleParams) -> Self {
        KnownMeans { probs, params }
    }
}

impl Learner for KnownMeans {
    fn name(&self) -> &'static str {
        "known-means"
    }

    fn select(&mut self, g: &Graph, seeds_b: &[NodeId], rng: &mut dyn RngCore) -> Result<Action> {
        let chosen = greedy_seed_select(g, &self.probs, seeds_b, self.params, rng)?;
        Ok(Action::new(chosen.seeds_a, seeds_b.to_vec(), self.params.k))
    }

    fn observe(
        &mut self,
        _g: &Graph,
        _action: &Action,
        _outcome: &PropagationOutcome,
    ) -> Result<()> {
        Ok(())
    }
}

/// A fresh uniform size-`k` seed set every round; ignores feedback.
#[derive(Debug, Clone, Copy)]
pub struct UniformRandom {
    k: usize,
}

impl UniformRandom {
    pub fn new(k: usize) -> Self {
        UniformRandom { k }
    }
}

impl Learner for UniformRandom {
    fn name(&self) -> &'static str {
        "uniform-random"
    }

    fn select(&mut self, g: &Graph, seeds_b: &[NodeId], rng: &mut dyn RngCore) -> Result<Action> {
        let seeds = uniform_seed_set(g, self.k, rng)?;
        Ok(Action::new(seeds, seeds_b.to_vec(), self.k))
    }

    fn observe(
        &mut self,
        _g: &Graph,
        _action: &Action,
        _outcome: &PropagationOutcome,
    ) -> Result<()> {
        Ok(())
    }
}
