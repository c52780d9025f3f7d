//! Online learners over edge arms.
//!
//! All learners share [`BanditState`] and its two update paths (Beta
//! posteriors and empirical means). The per-round functions are pure given
//! the state and a random stream; the [`Learner`] implementations wrap them
//! with the bookkeeping of each algorithm.

mod etc;
mod learners;
mod rounds;
mod state;

pub use etc::{etc_choose_n, etc_schedule, EtcMode};
pub use learners::{
    Cucb, EpsilonGreedy, KnownMeans, Learner, OcimEtc, OcimOfu, ThompsonSampling, UniformRandom,
};
pub use rounds::{cucb_round, epsilon_greedy_round, ofu_round, ts_round, uniform_seed_set, Branch};
pub use state::{confidence_radius, ArmPosterior, ArmStats, BanditState, FeedbackScope};
