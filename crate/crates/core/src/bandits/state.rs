use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Beta, Distribution};

use crate::diffusion::{Action, PropagationOutcome, TieRule};
use crate::error::{argument, Error, Result};
use crate::graph::Graph;
use crate::probs::{IntervalVector, ProbVector};

/// Beta posterior over one edge mean.
///
/// Observations are kept as integer counts on top of the prior, so the
/// parameters equal `a0 + successes` and `b0 + failures` exactly.
#[derive(Debug, Clone, Copy)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ArmPosterior {
    a0: f64,
    b0: f64,
    successes: u64,
    failures: u64,
}

impl ArmPosterior {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(argument(format!(
                "Beta parameters must be positive, got ({a}, {b})"
            )));
        }
        Ok(ArmPosterior {
            a0: a,
            b0: b,
            successes: 0,
            failures: 0,
        })
    }

    pub fn uniform() -> Self {
        ArmPosterior {
            a0: 1.0,
            b0: 1.0,
            successes: 0,
            failures: 0,
        }
    }

    pub fn a(&self) -> f64 {
        self.a0 + self.successes as f64
    }

    pub fn b(&self) -> f64 {
        self.b0 + self.failures as f64
    }

    pub fn mean(&self) -> f64 {
        self.a() / (self.a() + self.b())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let beta = Beta::new(self.a(), self.b()).expect("validated parameters");
        beta.sample(rng).clamp(0.0, 1.0)
    }

    fn observe(&mut self, x: u8) {
        if x == 1 {
            self.successes += 1;
        } else {
            self.failures += 1;
        }
    }
}

impl PartialEq for ArmPosterior {
    fn eq(&self, other: &Self) -> bool {
        self.a() == other.a() && self.b() == other.b()
    }
}

/// Observation count and empirical mean of one edge.
///
/// The mean is kept as `successes / count`, the closed form of the streaming
/// update `mu += (x - mu) / count`, so it is exact to rounding after any
/// number of updates. Before the first observation it holds the algorithm's
/// initial value.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ArmStats {
    count: u64,
    successes: u64,
    mu_hat: f64,
}

impl ArmStats {
    pub fn new(init_mean: f64) -> Self {
        ArmStats {
            count: 0,
            successes: 0,
            mu_hat: init_mean,
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mu_hat(&self) -> f64 {
        self.mu_hat
    }

    fn observe(&mut self, x: u8) {
        self.count += 1;
        self.successes += x as u64;
        self.mu_hat = self.successes as f64 / self.count as f64;
    }
}

/// `alpha_rho * sqrt(3 ln t / (2 count))`, infinite before the first observation.
pub fn confidence_radius(t: u64, count: u64, alpha_rho: f64) -> f64 {
    debug_assert!(t >= 1);
    if count == 0 {
        return f64::INFINITY;
    }
    alpha_rho * libm::sqrt(3.0 * libm::log(t as f64) / (2.0 * count as f64))
}

/// Which triggered edges feed the empirical means.
#[derive(Debug, Clone, PartialEq)]
pub enum FeedbackScope {
    /// Every triggered edge.
    FullTau,
    /// Only edges flagged here (direct out-edges of the seeds).
    DirectOnly(Vec<bool>),
}

impl FeedbackScope {
    /// Direct out-edges of the A-seeds, plus those of the B-seeds under B>A,
    /// where a B-seed can never be explored as an A-seed.
    pub fn direct(g: &Graph, action: &Action, rule: TieRule) -> Self {
        let mut flags = vec![false; g.edge_count()];
        let b_seeds: &[_] = if rule == TieRule::BOverA {
            &action.seeds_b
        } else {
            &[]
        };
        for &u in action.seeds_a.iter().chain(b_seeds) {
            for &e in g.out_edges(u) {
                flags[e.index()] = true;
            }
        }
        FeedbackScope::DirectOnly(flags)
    }
}

/// Per-edge posteriors, empirical statistics, and the 1-based round index.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BanditState {
    posteriors: Vec<ArmPosterior>,
    stats: Vec<ArmStats>,
    round: u64,
}

impl BanditState {
    pub fn new(m: usize, prior: ArmPosterior, init_mean: f64) -> Self {
        Self::with_posteriors(vec![prior; m], init_mean)
    }

    pub fn with_posteriors(posteriors: Vec<ArmPosterior>, init_mean: f64) -> Self {
        let m = posteriors.len();
        BanditState {
            posteriors,
            stats: vec![ArmStats::new(init_mean); m],
            round: 1,
        }
    }

    pub fn arm_count(&self) -> usize {
        self.stats.len()
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn advance(&mut self) {
        self.round += 1;
    }

    pub fn posteriors(&self) -> &[ArmPosterior] {
        &self.posteriors
    }

    pub fn stats(&self) -> &[ArmStats] {
        &self.stats
    }

    fn check_outcome(&self, outcome: &PropagationOutcome) -> Result<()> {
        if outcome.triggered.len() != outcome.observations.len() {
            return Err(Error::Data(format!(
                "{} triggered edges but {} observations",
                outcome.triggered.len(),
                outcome.observations.len()
            )));
        }
        for (e, x) in outcome.observed() {
            if e.index() >= self.stats.len() {
                return Err(Error::Data(format!("observation for unknown edge {e}")));
            }
            if x > 1 {
                return Err(Error::Data(format!(
                    "edge {e} observed value {x}, expected 0 or 1"
                )));
            }
        }
        Ok(())
    }

    /// `a += x, b += 1 - x` for every triggered edge; nothing else changes.
    pub fn posterior_update(&mut self, outcome: &PropagationOutcome) -> Result<()> {
        self.check_outcome(outcome)?;
        for (e, x) in outcome.observed() {
            self.posteriors[e.index()].observe(x);
        }
        Ok(())
    }

    /// Count and empirical-mean update for the in-scope triggered edges.
    pub fn stats_update(
        &mut self,
        outcome: &PropagationOutcome,
        scope: &FeedbackScope,
    ) -> Result<()> {
        self.check_outcome(outcome)?;
        for (e, x) in outcome.observed() {
            if let FeedbackScope::DirectOnly(flags) = scope {
                if !flags.get(e.index()).copied().unwrap_or(false) {
                    continue;
                }
            }
            self.stats[e.index()].observe(x);
        }
        Ok(())
    }

    /// One independent draw from every posterior.
    pub fn sample_means<R: Rng + ?Sized>(&self, rng: &mut R) -> ProbVector {
        ProbVector::from_unchecked(self.posteriors.iter().map(|p| p.sample(rng)).collect())
    }

    pub fn empirical_means(&self) -> ProbVector {
        ProbVector::from_unchecked(
            self.stats
                .iter()
                .map(|s| s.mu_hat.clamp(0.0, 1.0))
                .collect(),
        )
    }

    /// `[(mu_hat - rho)^{0+}, (mu_hat + rho)^{1-}]` at the current round.
    pub fn confidence_intervals(&self, alpha_rho: f64) -> IntervalVector {
        let (lower, upper) = self
            .stats
            .iter()
            .map(|s| {
                let rho = confidence_radius(self.round, s.count, alpha_rho);
                ((s.mu_hat - rho).max(0.0), (s.mu_hat + rho).min(1.0))
            })
            .unzip();
        IntervalVector::new(lower, upper).expect("clipped intervals are valid")
    }

    /// `min(mu_hat + rho, 1)` at the current round.
    pub fn upper_confidence(&self, alpha_rho: f64) -> ProbVector {
        ProbVector::from_unchecked(
            self.stats
                .iter()
                .map(|s| (s.mu_hat + confidence_radius(self.round, s.count, alpha_rho)).min(1.0))
                .collect(),
        )
    }
}
