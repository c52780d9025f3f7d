//! Regret experiments: competitor policies, baselines, repetitions.
//!
//! Every repetition owns its learner, its state, and four ChaCha streams
//! keyed by (instance, repetition, role), so results do not depend on the
//! number of worker threads or on scheduling order.

use std::collections::HashMap;
use std::sync::Mutex;

use ocim_core::bandits::{
    ArmPosterior, Cucb, EpsilonGreedy, KnownMeans, Learner, OcimEtc, OcimOfu, ThompsonSampling,
    UniformRandom,
};
use ocim_core::oracles::{exhaustive_seed_select, greedy_seed_select};
use ocim_core::{
    propagate, Evaluation, Graph, LiveEdgeMask, NodeId, OfuOracle, OracleParams, ProbVector,
    SpreadEvaluator, TieRule,
};
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::trace::{RegretTrace, TraceMeta, TraceRow};

/// Beta prior weights are kept this far inside (0, 1).
pub const PRIOR_WEIGHT_CLAMP: f64 = 1e-3;

const ROLE_ENV: u64 = 0;
const ROLE_LEARNER: u64 = 1;
const ROLE_COMPETITOR: u64 = 2;
const ROLE_EVAL: u64 = 3;
const ROLE_INSTANCE: u64 = 4;
const ROLE_BASELINE: u64 = 5;

/// Independent stream for one (instance, repetition, role) triple.
pub fn substream(master: u64, instance: u64, rep: u64, role: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream((instance << 40) | (rep << 8) | role);
    rng
}

/// How the competitor picks `S_B` each round.
#[derive(Debug, Clone, PartialEq)]
pub enum CompetitorPolicy {
    None,
    /// A fresh uniform subset of `pool` (all nodes when `None`) each round.
    Random {
        budget: usize,
        pool: Option<Vec<NodeId>>,
    },
    /// Non-competitive greedy on the true means, computed once.
    Im {
        budget: usize,
    },
    Fixed(Vec<NodeId>),
}

/// Stateful competitor for one repetition.
#[derive(Debug, Clone)]
pub struct Competitor {
    policy: CompetitorPolicy,
    cached: Option<Vec<NodeId>>,
}

impl Competitor {
    pub fn new(policy: CompetitorPolicy) -> Self {
        Competitor {
            policy,
            cached: None,
        }
    }

    pub fn step(
        &mut self,
        g: &Graph,
        true_mu: &ProbVector,
        rule: TieRule,
        eval: Evaluation,
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<NodeId>> {
        match &self.policy {
            CompetitorPolicy::None => Ok(Vec::new()),
            CompetitorPolicy::Fixed(nodes) => {
                let mut nodes = nodes.clone();
                nodes.sort_unstable();
                nodes.dedup();
                Ok(nodes)
            }
            CompetitorPolicy::Random { budget, pool } => {
                let all: Vec<NodeId>;
                let pool = match pool {
                    Some(p) => p.as_slice(),
                    None => {
                        all = g.nodes().collect();
                        &all
                    }
                };
                if *budget > pool.len() {
                    return Err(Error::config(format!(
                        "competitor budget {budget} exceeds its pool of {} nodes",
                        pool.len()
                    )));
                }
                let mut chosen: Vec<NodeId> = pool.choose_multiple(rng, *budget).copied().collect();
                chosen.sort_unstable();
                Ok(chosen)
            }
            CompetitorPolicy::Im { budget } => {
                if let Some(seeds) = &self.cached {
                    return Ok(seeds.clone());
                }
                if *budget > g.node_count() {
                    return Err(Error::config(format!(
                        "competitor budget {budget} exceeds node count {}",
                        g.node_count()
                    )));
                }
                let params = OracleParams::new(*budget, rule, eval);
                let seeds = greedy_seed_select(g, true_mu, &[], params, rng)?.seeds_a;
                self.cached = Some(seeds.clone());
                Ok(seeds)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineMode {
    Greedy,
    Exhaustive,
}

/// `alpha * beta * opt(S_B)`, where `opt` is the value of the selected
/// seed set at the true means.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Baseline {
    pub mode: BaselineMode,
    pub alpha: f64,
    pub beta: f64,
}

impl Default for Baseline {
    fn default() -> Self {
        Baseline {
            mode: BaselineMode::Greedy,
            alpha: 1.0 - 1.0 / std::f64::consts::E,
            beta: 1.0,
        }
    }
}

/// Prior handed to Thompson sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PriorSpec {
    Uniform,
    /// `Beta(s w, s (1 - w))` around the reference weights `w`.
    Informative {
        strength: f64,
    },
}

impl PriorSpec {
    pub fn posteriors(&self, weights: &ProbVector) -> Result<Vec<ArmPosterior>> {
        match *self {
            PriorSpec::Uniform => Ok(vec![ArmPosterior::uniform(); weights.len()]),
            PriorSpec::Informative { strength } => weights
                .as_slice()
                .iter()
                .map(|&w| {
                    let w = w.clamp(PRIOR_WEIGHT_CLAMP, 1.0 - PRIOR_WEIGHT_CLAMP);
                    Ok(ArmPosterior::new(strength * w, strength * (1.0 - w))?)
                })
                .collect(),
        }
    }

    /// One mean vector drawn from the prior.
    pub fn sample(&self, weights: &ProbVector, rng: &mut ChaCha8Rng) -> Result<ProbVector> {
        let draws = self
            .posteriors(weights)?
            .iter()
            .map(|p| {
                Beta::new(p.a(), p.b())
                    .expect("validated")
                    .sample(rng)
                    .clamp(0.0, 1.0)
            })
            .collect();
        Ok(ProbVector::new(draws)?)
    }
}

/// Learner family and hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgorithmSpec {
    Ts {
        prior: PriorSpec,
    },
    Ofu {
        oracle: OfuOracle,
        alpha_rho: f64,
    },
    Etc {
        visits: u64,
    },
    EpsilonGreedy {
        epsilon: f64,
    },
    Cucb {
        alpha_rho: f64,
    },
    /// Greedy on the true means; a self-comparison control.
    KnownMeans,
    UniformRandom,
}

impl AlgorithmSpec {
    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmSpec::Ts { .. } => "ocim-ts",
            AlgorithmSpec::Ofu { .. } => "ocim-ofu",
            AlgorithmSpec::Etc { .. } => "ocim-etc",
            AlgorithmSpec::EpsilonGreedy { epsilon } if *epsilon == 0.0 => "emp",
            AlgorithmSpec::EpsilonGreedy { .. } => "eps-greedy",
            AlgorithmSpec::Cucb { .. } => "cucb",
            AlgorithmSpec::KnownMeans => "known-means",
            AlgorithmSpec::UniformRandom => "uniform-random",
        }
    }

    /// `weights` are the prior centre for TS and the plugged-in means for
    /// the known-means control; other learners ignore them.
    fn build(
        &self,
        g: &Graph,
        weights: &ProbVector,
        params: OracleParams,
    ) -> Result<Box<dyn Learner + Send>> {
        let m = g.edge_count();
        Ok(match *self {
            AlgorithmSpec::Ts { prior } => {
                Box::new(ThompsonSampling::new(prior.posteriors(weights)?, params))
            }
            AlgorithmSpec::Ofu { oracle, alpha_rho } => {
                Box::new(OcimOfu::new(m, params, oracle, alpha_rho))
            }
            AlgorithmSpec::Etc { visits } => Box::new(OcimEtc::new(g, params, visits)?),
            AlgorithmSpec::EpsilonGreedy { epsilon } => {
                Box::new(EpsilonGreedy::new(m, params, epsilon, 0.0)?)
            }
            AlgorithmSpec::Cucb { alpha_rho } => Box::new(Cucb::new(m, params, alpha_rho)),
            AlgorithmSpec::KnownMeans => Box::new(KnownMeans::new(weights.clone(), params)),
            AlgorithmSpec::UniformRandom => Box::new(UniformRandom::new(params.k)),
        })
    }

    /// Length of the exploration phase, for learners that have one.
    pub fn exploration_rounds(&self, g: &Graph, k: usize) -> Option<u64> {
        match *self {
            AlgorithmSpec::Etc { visits } => {
                Some((g.node_count() as u64 * visits).div_ceil(k as u64))
            }
            _ => None,
        }
    }
}

/// A fully resolved experiment.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub graph: Graph,
    pub true_mu: ProbVector,
    /// Means used for the baseline; the true means when `None`.
    pub baseline_mu: Option<ProbVector>,
    pub rule: TieRule,
    pub k: usize,
    pub algorithm: AlgorithmSpec,
    /// Evaluation inside the learners' and competitor's oracles.
    pub oracle_eval: Evaluation,
    /// Evaluation of per-round expected rewards and baselines.
    pub reward_eval: Evaluation,
    pub competitor: CompetitorPolicy,
    pub baseline: Baseline,
    pub horizon: u64,
    pub repetitions: usize,
    pub seed: u64,
    /// Recorded in every trace's metadata.
    pub config_hash: String,
}

impl Experiment {
    /// A frequentist experiment with default settings around `graph` and `true_mu`.
    pub fn new(graph: Graph, true_mu: ProbVector, algorithm: AlgorithmSpec, k: usize) -> Self {
        let eval = Evaluation::auto(&graph, 12, 2000);
        let oracle_eval = Evaluation::auto(&graph, 10, 200);
        Experiment {
            graph,
            true_mu,
            baseline_mu: None,
            rule: TieRule::BOverA,
            k,
            algorithm,
            oracle_eval,
            reward_eval: eval,
            competitor: CompetitorPolicy::None,
            baseline: Baseline::default(),
            horizon: 100,
            repetitions: 1,
            seed: 0,
            config_hash: String::new(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::config("run.horizon must be at least 1"));
        }
        if self.repetitions == 0 {
            return Err(Error::config("run.repetitions must be at least 1"));
        }
        if self.k == 0 || self.k > self.graph.node_count() {
            return Err(Error::config(format!(
                "algorithm.budget must lie in 1..={}, got {}",
                self.graph.node_count(),
                self.k
            )));
        }
        if self.true_mu.len() != self.graph.edge_count() {
            return Err(Error::config(format!(
                "{} edge means for {} edges",
                self.true_mu.len(),
                self.graph.edge_count()
            )));
        }
        Ok(())
    }
}

/// Baseline values keyed by competitor seed set; shared by repetitions that
/// use the same means.
#[derive(Debug, Default)]
pub struct BaselineCache {
    values: Mutex<HashMap<Vec<NodeId>, f64>>,
}

impl BaselineCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.values.lock().expect("poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `alpha * beta * opt` for this context. The value depends only on the
    /// context and the master seed, so concurrent fills agree.
    pub fn value(&self, exp: &Experiment, mu: &ProbVector, seeds_b: &[NodeId]) -> Result<f64> {
        if let Some(&v) = self.values.lock().expect("poisoned").get(seeds_b) {
            return Ok(v);
        }
        let v = baseline_opt(exp, mu, seeds_b)?;
        self.values
            .lock()
            .expect("poisoned")
            .insert(seeds_b.to_vec(), v);
        Ok(v)
    }
}

/// `alpha * beta` times the value at `mu` of the baseline oracle's seed set.
pub fn baseline_opt(exp: &Experiment, mu: &ProbVector, seeds_b: &[NodeId]) -> Result<f64> {
    let g = &exp.graph;
    let params = OracleParams::new(exp.k, exp.rule, exp.oracle_eval);
    let mut rng = substream(exp.seed, 0, 0, ROLE_BASELINE);
    let chosen = match exp.baseline.mode {
        BaselineMode::Greedy => greedy_seed_select(g, mu, seeds_b, params, &mut rng)?,
        BaselineMode::Exhaustive => exhaustive_seed_select(g, mu, seeds_b, params, &mut rng)?,
    };
    let mut eval = SpreadEvaluator::new(g, mu, exp.rule, exp.reward_eval)?;
    eval.resample(&mut rng);
    Ok(exp.baseline.alpha * exp.baseline.beta * eval.value(&chosen.seeds_a, seeds_b))
}

fn run_repetition(
    exp: &Experiment,
    true_mu: &ProbVector,
    learner_weights: &ProbVector,
    baseline_mu: &ProbVector,
    cache: &BaselineCache,
    instance: Option<usize>,
    rep: usize,
) -> Result<RegretTrace> {
    let g = &exp.graph;
    let inst = instance.map_or(0, |i| i as u64 + 1);
    let rep64 = rep as u64;
    let mut env_rng = substream(exp.seed, inst, rep64, ROLE_ENV);
    let mut learner_rng = substream(exp.seed, inst, rep64, ROLE_LEARNER);
    let mut competitor_rng = substream(exp.seed, inst, rep64, ROLE_COMPETITOR);
    let mut eval_rng = substream(exp.seed, inst, rep64, ROLE_EVAL);

    let params = OracleParams::new(exp.k, exp.rule, exp.oracle_eval);
    let mut learner = exp.algorithm.build(g, learner_weights, params)?;
    let mut competitor = Competitor::new(exp.competitor.clone());
    let mut reward_eval = SpreadEvaluator::new(g, true_mu, exp.rule, exp.reward_eval)?;

    let mut rows = Vec::with_capacity(exp.horizon as usize);
    let mut cum_regret = 0.0;
    for round in 1..=exp.horizon {
        let seeds_b =
            competitor.step(g, true_mu, exp.rule, exp.oracle_eval, &mut competitor_rng)?;
        let action = learner.select(g, &seeds_b, &mut learner_rng)?;
        let mask = LiveEdgeMask::sample(true_mu, &mut env_rng);
        let outcome = propagate(g, &mask, &action, exp.rule)?;
        learner.observe(g, &action, &outcome)?;

        // common evaluation masks per (repetition, round) across algorithms
        eval_rng.set_word_pos(round as u128 * (1 << 32));
        reward_eval.resample(&mut eval_rng);
        let reward = reward_eval.value(&action.seeds_a, &action.seeds_b);
        let baseline = cache.value(exp, baseline_mu, &seeds_b)?;
        cum_regret += baseline - reward;
        rows.push(TraceRow {
            round,
            baseline,
            reward,
            cum_regret,
        });
    }
    Ok(RegretTrace {
        meta: TraceMeta {
            algorithm: learner.name().to_owned(),
            repetition: rep,
            instance,
            seed: exp.seed,
            config_hash: exp.config_hash.clone(),
            exploration_rounds: exp.algorithm.exploration_rounds(g, exp.k),
        },
        rows,
    })
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::config(format!("cannot start {jobs} workers: {e}")))
}

/// One trace per repetition. `jobs = 0` uses every core; any value gives
/// identical traces.
pub fn run_experiment(exp: &Experiment, jobs: usize) -> Result<Vec<RegretTrace>> {
    exp.validate()?;
    let baseline_mu = exp.baseline_mu.as_ref().unwrap_or(&exp.true_mu);
    let cache = BaselineCache::new();
    pool(jobs)?.install(|| {
        (0..exp.repetitions)
            .into_par_iter()
            .map(|rep| {
                run_repetition(
                    exp,
                    &exp.true_mu,
                    &exp.true_mu,
                    baseline_mu,
                    &cache,
                    None,
                    rep,
                )
            })
            .collect()
    })
}

/// Bayesian regret estimate: `instances` mean vectors are drawn from the
/// prior centred on `exp.true_mu`, and each runs `exp.repetitions` times
/// with that draw as the truth. Traces are ordered by instance, then
/// repetition.
pub fn bayesian_sweep(
    exp: &Experiment,
    prior: PriorSpec,
    instances: usize,
    jobs: usize,
) -> Result<Vec<RegretTrace>> {
    exp.validate()?;
    if instances == 0 {
        return Err(Error::config(
            "run.bayesian_instances must be at least 1 for a sweep",
        ));
    }
    let draws: Vec<ProbVector> = (0..instances)
        .map(|i| {
            prior.sample(
                &exp.true_mu,
                &mut substream(exp.seed, i as u64 + 1, 0, ROLE_INSTANCE),
            )
        })
        .collect::<Result<_>>()?;
    let caches: Vec<BaselineCache> = (0..instances).map(|_| BaselineCache::new()).collect();
    let jobs_list: Vec<(usize, usize)> = (0..instances)
        .flat_map(|i| (0..exp.repetitions).map(move |r| (i, r)))
        .collect();
    pool(jobs)?.install(|| {
        jobs_list
            .par_iter()
            .map(|&(i, rep)| {
                let truth = &draws[i];
                let weights = match exp.algorithm {
                    AlgorithmSpec::KnownMeans => truth,
                    _ => &exp.true_mu,
                };
                run_repetition(exp, truth, weights, truth, &caches[i], Some(i), rep)
            })
            .collect()
    })
}

/// Mean cumulative regret per round across traces of equal length.
pub fn mean_cum_regret(traces: &[RegretTrace]) -> Vec<f64> {
    let Some(first) = traces.first() else {
        return Vec::new();
    };
    (0..first.rows.len())
        .map(|t| traces.iter().map(|tr| tr.rows[t].cum_regret).sum::<f64>() / traces.len() as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn star() -> (Graph, ProbVector) {
        let g = Graph::from_pairs(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let p = ProbVector::constant(4, 0.5).unwrap();
        (g, p)
    }

    #[test]
    fn known_means_has_no_regret_at_full_discount() {
        let el = fixtures::bipartite();
        let mu = el.probs.clone().unwrap();
        let mut exp = Experiment::new(el.graph, mu, AlgorithmSpec::KnownMeans, 2);
        exp.baseline.alpha = 1.0;
        exp.horizon = 50;
        exp.competitor = CompetitorPolicy::Random {
            budget: 2,
            pool: None,
        };
        let tr = &run_experiment(&exp, 1).unwrap()[0];
        assert!(tr.rows.last().unwrap().cum_regret.abs() < 1e-9);
    }

    #[test]
    fn zero_means_earn_k_per_round() {
        let (g, _) = star();
        let mu = ProbVector::constant(4, 0.0).unwrap();
        let mut exp = Experiment::new(
            g,
            mu,
            AlgorithmSpec::Ofu {
                oracle: OfuOracle::default(),
                alpha_rho: 1.0,
            },
            2,
        );
        exp.competitor = CompetitorPolicy::Fixed(vec![NodeId(4)]);
        exp.baseline.alpha = 1.0;
        exp.horizon = 30;
        let tr = &run_experiment(&exp, 1).unwrap()[0];
        for row in &tr.rows {
            assert_eq!(row.reward, 2.0);
            assert_eq!(row.baseline, 2.0);
        }
    }

    #[test]
    fn regret_telescopes() {
        let (g, p) = star();
        let mut exp = Experiment::new(g, p, AlgorithmSpec::EpsilonGreedy { epsilon: 0.2 }, 1);
        exp.horizon = 40;
        exp.competitor = CompetitorPolicy::Random {
            budget: 1,
            pool: None,
        };
        let tr = &run_experiment(&exp, 1).unwrap()[0];
        let mut prev = 0.0;
        for row in &tr.rows {
            assert!((row.cum_regret - prev - (row.baseline - row.reward)).abs() < 1e-12);
            prev = row.cum_regret;
        }
    }

    #[test]
    fn traces_do_not_depend_on_worker_count() {
        let el = fixtures::bipartite();
        let mu = el.probs.clone().unwrap();
        let mut exp = Experiment::new(
            el.graph,
            mu,
            AlgorithmSpec::Ts {
                prior: PriorSpec::Uniform,
            },
            2,
        );
        exp.horizon = 20;
        exp.repetitions = 4;
        exp.competitor = CompetitorPolicy::Random {
            budget: 2,
            pool: None,
        };
        assert_eq!(
            run_experiment(&exp, 1).unwrap(),
            run_experiment(&exp, 3).unwrap()
        );
    }

    #[test]
    fn learner_never_sees_the_baseline_means() {
        let el = fixtures::bipartite();
        let mu = el.probs.clone().unwrap();
        let mut exp = Experiment::new(
            el.graph,
            mu,
            AlgorithmSpec::Ofu {
                oracle: OfuOracle::default(),
                alpha_rho: 1.0,
            },
            2,
        );
        exp.horizon = 30;
        exp.competitor = CompetitorPolicy::Random {
            budget: 2,
            pool: None,
        };
        let honest = run_experiment(&exp, 1).unwrap();
        exp.baseline_mu = Some(ProbVector::constant(17, 0.9).unwrap());
        let skewed = run_experiment(&exp, 1).unwrap();
        let rewards = |t: &[RegretTrace]| t[0].rows.iter().map(|r| r.reward).collect::<Vec<_>>();
        assert_eq!(rewards(&honest), rewards(&skewed));
        assert_ne!(honest[0].rows[0].baseline, skewed[0].rows[0].baseline);
    }

    #[test]
    fn competitor_policies() {
        let (g, p) = star();
        let mut rng = substream(1, 0, 0, ROLE_COMPETITOR);
        let mut im = Competitor::new(CompetitorPolicy::Im { budget: 1 });
        assert_eq!(
            im.step(&g, &p, TieRule::AOverB, Evaluation::Exact, &mut rng)
                .unwrap(),
            [NodeId(0)]
        );
        let mut fixed = Competitor::new(CompetitorPolicy::Fixed(vec![NodeId(3)]));
        for _ in 0..3 {
            assert_eq!(
                fixed
                    .step(&g, &p, TieRule::AOverB, Evaluation::Exact, &mut rng)
                    .unwrap(),
                [NodeId(3)]
            );
        }
        let mut too_many = Competitor::new(CompetitorPolicy::Random {
            budget: 6,
            pool: None,
        });
        assert!(too_many
            .step(&g, &p, TieRule::AOverB, Evaluation::Exact, &mut rng)
            .unwrap_err()
            .is_config());
    }

    #[test]
    fn random_competitor_inclusion_frequency() {
        let (g, p) = star();
        let mut rng = substream(2, 0, 0, ROLE_COMPETITOR);
        let mut rd = Competitor::new(CompetitorPolicy::Random {
            budget: 2,
            pool: None,
        });
        let rounds = 10_000;
        let mut hits = [0u32; 5];
        for _ in 0..rounds {
            for v in rd
                .step(&g, &p, TieRule::AOverB, Evaluation::Exact, &mut rng)
                .unwrap()
            {
                hits[v.index()] += 1;
            }
        }
        let q: f64 = 2.0 / 5.0;
        let sigma = (rounds as f64 * q * (1.0 - q)).sqrt();
        for h in hits {
            assert!(
                (h as f64 - rounds as f64 * q).abs() < 3.0 * sigma,
                "{hits:?}"
            );
        }
    }

    #[test]
    fn baseline_is_cached_per_context() {
        let (g, p) = star();
        let mut exp = Experiment::new(g, p, AlgorithmSpec::UniformRandom, 1);
        exp.competitor = CompetitorPolicy::Fixed(vec![NodeId(2)]);
        exp.horizon = 25;
        let cache = BaselineCache::new();
        let mu = exp.true_mu.clone();
        run_repetition(&exp, &mu, &mu, &mu, &cache, None, 0).unwrap();
        assert_eq!(cache.len(), 1);
    }

    #[test]
    fn saturated_budget_baseline_is_spread_of_everything() {
        let (g, p) = star();
        let mut exp = Experiment::new(g, p.clone(), AlgorithmSpec::UniformRandom, 5);
        exp.baseline.alpha = 1.0;
        assert_eq!(baseline_opt(&exp, &p, &[]).unwrap(), 5.0);
    }

    #[test]
    fn informative_prior_means() {
        let w = ProbVector::new(vec![0.2, 0.7, 1.0]).unwrap();
        let prior = PriorSpec::Informative { strength: 5.0 };
        let mut rng = substream(3, 0, 0, ROLE_INSTANCE);
        let n = 20_000;
        let mut sums = [0.0; 3];
        for _ in 0..n {
            for (s, x) in sums
                .iter_mut()
                .zip(prior.sample(&w, &mut rng).unwrap().as_slice())
            {
                *s += x;
            }
        }
        for (i, &target) in [0.2, 0.7, 1.0 - PRIOR_WEIGHT_CLAMP].iter().enumerate() {
            let var = target * (1.0 - target) / 6.0;
            let se = (var / n as f64).sqrt();
            assert!(
                (sums[i] / n as f64 - target).abs() < 3.0 * se + 1e-12,
                "{i}"
            );
        }
    }

    #[test]
    fn concentrated_prior_matches_frequentist_run() {
        let el = fixtures::bipartite();
        let mu = el.probs.clone().unwrap();
        let mut exp = Experiment::new(el.graph, mu, AlgorithmSpec::KnownMeans, 2);
        exp.horizon = 20;
        exp.competitor = CompetitorPolicy::Fixed(vec![NodeId(0)]);
        let freq = mean_cum_regret(&run_experiment(&exp, 1).unwrap());
        let bayes = bayesian_sweep(&exp, PriorSpec::Informative { strength: 1e6 }, 1, 1).unwrap();
        let bayes = mean_cum_regret(&bayes);
        let last = freq.len() - 1;
        assert!(
            (freq[last] - bayes[last]).abs() < 0.05 * exp.horizon as f64,
            "{} {}",
            freq[last],
            bayes[last]
        );
    }

    #[test]
    fn ofu_regret_is_concave_on_a_four_node_bipartite_graph() {
        let g = Graph::from_pairs(4, &[(0, 2), (0, 3), (1, 3)]).unwrap();
        let mu = ProbVector::new(vec![0.6, 0.3, 0.5]).unwrap();
        let mut exp = Experiment::new(
            g,
            mu,
            AlgorithmSpec::Ofu {
                oracle: OfuOracle::default(),
                alpha_rho: 1.0,
            },
            1,
        );
        exp.competitor = CompetitorPolicy::Random {
            budget: 1,
            pool: None,
        };
        exp.baseline = Baseline {
            mode: BaselineMode::Exhaustive,
            alpha: 1.0,
            beta: 1.0,
        };
        exp.oracle_eval = Evaluation::Bipartite;
        exp.reward_eval = Evaluation::Bipartite;
        exp.horizon = 2000;
        exp.repetitions = 5;
        let mean = mean_cum_regret(&run_experiment(&exp, 0).unwrap());
        assert!(mean[1999] < 1.9 * mean[999], "{} vs {}", mean[1999], mean[999]);
        assert!(mean[1999] > 0.0);
    }

    #[test]
    fn sweep_produces_instances_times_repetitions() {
        let (g, p) = star();
        let mut exp = Experiment::new(
            g,
            p,
            AlgorithmSpec::Ts {
                prior: PriorSpec::Informative { strength: 5.0 },
            },
            1,
        );
        exp.horizon = 5;
        exp.repetitions = 3;
        let traces = bayesian_sweep(&exp, PriorSpec::Informative { strength: 5.0 }, 2, 2).unwrap();
        assert_eq!(traces.len(), 6);
        assert_eq!(traces[4].meta.instance, Some(1));
        assert_eq!(traces[4].meta.repetition, 1);
    }
}
