use alloc::format;
use alloc::vec::Vec;

use crate::error::{argument, Result};
use crate::graph::NodeId;

/// How the exploration length is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum EtcMode {
    /// Gap-dependent length; needs a positive minimum gap.
    Dependent { delta_min: f64 },
    /// Gap-free length of order `T^{2/3} (ln T)^{1/3}`.
    Independent,
}

/// Per-node exploration count for a horizon of `horizon` rounds, rounded up
/// and at least 1.
pub fn etc_choose_n(
    mode: EtcMode,
    c_tilde: f64,
    m: usize,
    n: usize,
    k: usize,
    horizon: f64,
) -> Result<u64> {
    if horizon.is_nan() || horizon < 2.0 {
        return Err(argument(format!(
            "horizon must be at least 2, got {horizon}"
        )));
    }
    if c_tilde.is_nan() || c_tilde <= 0.0 || m == 0 || n == 0 || k == 0 {
        return Err(argument(format!(
            "exploration length needs positive C, m, n, k (got {c_tilde}, {m}, {n}, {k})"
        )));
    }
    let (c, m, n, k) = (c_tilde, m as f64, n as f64, k as f64);
    let raw = match mode {
        EtcMode::Independent => {
            libm::pow(c * m * k, 2.0 / 3.0)
                * libm::pow(n, -4.0 / 3.0)
                * libm::pow(horizon, 2.0 / 3.0)
                * libm::cbrt(libm::log(horizon))
        }
        EtcMode::Dependent { delta_min } => {
            if delta_min.is_nan() || delta_min <= 0.0 {
                return Err(argument(format!(
                    "minimum gap must be positive, got {delta_min}"
                )));
            }
            let d2 = delta_min * delta_min;
            2.0 * c * c * m * m / d2 * libm::log(k * horizon * d2 / (c * c * c * m))
        }
    };
    let n_visits = libm::ceil(raw);
    Ok(if n_visits.is_finite() && n_visits > 1.0 {
        n_visits as u64
    } else {
        1
    })
}

/// Exploration rounds: nodes are visited in cyclic id order, `k` per round,
/// until every node has been a seed `visits` times. The last round is padded
/// with the lowest ids not already in it.
pub fn etc_schedule(n: usize, k: usize, visits: u64) -> Result<Vec<Vec<NodeId>>> {
    if k == 0 || visits == 0 {
        return Err(argument(format!(
            "budget and visit count must be positive (got {k}, {visits})"
        )));
    }
    if k > n {
        return Err(argument(format!("budget {k} exceeds node count {n}")));
    }
    let total = n as u64 * visits;
    let rounds = total.div_ceil(k as u64);
    let mut out = Vec::with_capacity(rounds as usize);
    for r in 0..rounds {
        let start = r * k as u64;
        let end = (start + k as u64).min(total);
        let mut round: Vec<NodeId> = (start..end)
            .map(|i| NodeId::from((i % n as u64) as usize))
            .collect();
        let mut pad = 0u32;
        while round.len() < k {
            if !round.contains(&NodeId(pad)) {
                round.push(NodeId(pad));
            }
            pad += 1;
        }
        round.sort_unstable();
        out.push(round);
    }
    Ok(out)
}
