//! Built-in self-checks run by `ocim verify`.

use ocim_core::spread::{estimate_spread, exact_evaluation, exact_spread};
use ocim_core::{propagate, Action, Graph, LiveEdgeMask, NodeId, ProbVector, TieRule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fixtures;

pub const CHECKS: &[&str] = &["nonmono", "contested", "mc-exact", "tpm", "tau"];

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Test hooks that deliberately break a check.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tamper {
    /// Propagate contested-node runs under the opposite tie rule.
    pub flip_tie_rule: bool,
}

/// Runs one named check, or all of them when `selector` is `None`.
pub fn run(selector: Option<&str>, tamper: Tamper) -> Result<Vec<CheckReport>> {
    let names: Vec<&'static str> = match selector {
        None | Some("all") => CHECKS.to_vec(),
        Some(s) => vec![*CHECKS.iter().find(|&&c| c == s).ok_or_else(|| {
            Error::config(format!(
                "unknown check `{s}` (known: {})",
                CHECKS.join(", ")
            ))
        })?],
    };
    names
        .into_iter()
        .map(|name| {
            let outcome = match name {
                "nonmono" => nonmono(),
                "contested" => contested(tamper),
                "mc-exact" => mc_exact(),
                "tpm" => tpm(),
                "tau" => tau(),
                _ => unreachable!("names come from CHECKS"),
            }?;
            let (passed, detail) = match outcome {
                Ok(detail) => (true, detail),
                Err(detail) => (false, detail),
            };
            Ok(CheckReport {
                name,
                passed,
                detail,
            })
        })
        .collect()
}

type Outcome = Result<std::result::Result<String, String>>;

/// Random graph with `2..=max_n` nodes and `1..=max_m` edges, random means,
/// and random seed sets (A non-empty).
pub fn random_instance(
    rng: &mut ChaCha8Rng,
    max_n: usize,
    max_m: usize,
) -> (Graph, ProbVector, Action) {
    let n = rng.random_range(2..=max_n);
    let m = rng.random_range(1..=max_m);
    let pairs: Vec<(u32, u32)> = (0..m)
        .map(|_| (rng.random_range(0..n as u32), rng.random_range(0..n as u32)))
        .collect();
    let g = Graph::from_pairs(n, &pairs).expect("endpoints in range");
    let probs =
        ProbVector::new((0..m).map(|_| rng.random::<f64>()).collect()).expect("unit interval");
    let pick = |rng: &mut ChaCha8Rng, p: f64| -> Vec<NodeId> {
        (0..n as u32)
            .filter(|_| rng.random_bool(p))
            .map(NodeId)
            .collect()
    };
    let mut seeds_a = pick(rng, 0.3);
    if seeds_a.is_empty() {
        seeds_a.push(NodeId(rng.random_range(0..n as u32)));
    }
    let seeds_b = pick(rng, 0.3);
    let k = seeds_a.len();
    (g, probs, Action::new(seeds_a, seeds_b, k))
}

fn nonmono() -> Outcome {
    let grid = [0.0, 0.5, 1.0];
    for rule in [TieRule::AOverB, TieRule::BOverA] {
        for mu1 in grid {
            for mu2 in grid {
                let el = fixtures::crossing(mu1, mu2);
                let action = Action::new(vec![NodeId(0)], vec![NodeId(3)], 1);
                let v = exact_spread(
                    &el.graph,
                    el.probs.as_ref().expect("fixture has means"),
                    &action,
                    rule,
                )?;
                let expected = 2.0 + mu1 * (1.0 - mu2);
                if (v - expected).abs() > 1e-9 {
                    return Ok(Err(format!(
                        "{rule:?} mu=({mu1}, {mu2}): {v} != {expected}"
                    )));
                }
            }
        }
    }
    let action = Action::new(vec![NodeId(0)], vec![NodeId(3)], 1);
    let at = |mu2| {
        let el = fixtures::crossing(0.5, mu2);
        exact_spread(
            &el.graph,
            el.probs.as_ref().expect("fixture has means"),
            &action,
            TieRule::AOverB,
        )
    };
    let (low, high) = (at(0.0)?, at(1.0)?);
    if high < low {
        Ok(Ok(format!(
            "spread falls from {low} to {high} as the competitor edge strengthens"
        )))
    } else {
        Ok(Err(format!("spread did not fall: {low} -> {high}")))
    }
}

fn contested(tamper: Tamper) -> Outcome {
    // a=0 -> v=2 <- b=1, both certain: v is reached by both items at step 1
    let g = Graph::from_pairs(3, &[(0, 2), (1, 2)])?;
    let mask = LiveEdgeMask::uniform(2, true);
    let action = Action::new(vec![NodeId(0)], vec![NodeId(1)], 1);
    for (rule, expected) in [(TieRule::AOverB, 2), (TieRule::BOverA, 1)] {
        let applied = if tamper.flip_tie_rule {
            rule.flipped()
        } else {
            rule
        };
        let out = propagate(&g, &mask, &action, applied)?;
        if out.reward != expected {
            return Ok(Err(format!(
                "{rule:?}: A activated {} nodes, expected {expected}",
                out.reward
            )));
        }
    }
    let shared = Action::new(vec![NodeId(0)], vec![NodeId(0)], 1);
    let out = propagate(
        &g,
        &LiveEdgeMask::uniform(2, false),
        &shared,
        TieRule::BOverA,
    )?;
    if out.reward != 0 {
        return Ok(Err("a shared seed must go to the dominant item".into()));
    }
    Ok(Ok("simultaneous arrivals follow the tie rule".into()))
}

fn mc_exact() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let trials = 20;
    let mut misses = 0;
    for i in 0..trials {
        let (g, p, a) = random_instance(&mut rng, 6, 10);
        let rule = if i % 2 == 0 {
            TieRule::AOverB
        } else {
            TieRule::BOverA
        };
        let exact = exact_spread(&g, &p, &a, rule)?;
        let est = estimate_spread(&g, &p, &a, rule, 20_000, &mut rng)?;
        if (est.mean - exact).abs() > 4.0 * est.stderr.max(1e-12) {
            misses += 1;
        }
    }
    if misses <= 1 {
        Ok(Ok(format!(
            "{}/{trials} sampled estimates within 4 standard errors",
            trials - misses
        )))
    } else {
        Ok(Err(format!(
            "{misses}/{trials} sampled estimates outside 4 standard errors"
        )))
    }
}

fn tpm() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e7);
    let trials = 40;
    for _ in 0..trials {
        let (g, p, a) = random_instance(&mut rng, 6, 8);
        let q = ProbVector::new((0..g.edge_count()).map(|_| rng.random::<f64>()).collect())?;
        let rule = if rng.random_bool(0.5) {
            TieRule::AOverB
        } else {
            TieRule::BOverA
        };
        let at_p = exact_evaluation(&g, &p, &a, rule)?;
        let at_q = exact_spread(&g, &q, &a, rule)?;
        let c = g.max_reach() as f64;
        let bound: f64 = c * at_p
            .trigger_probs
            .iter()
            .zip(p.as_slice().iter().zip(q.as_slice()))
            .map(|(t, (x, y))| t * (x - y).abs())
            .sum::<f64>();
        if (at_p.spread - at_q).abs() > bound + 1e-12 {
            return Ok(Err(format!("|{} - {at_q}| exceeds {bound}", at_p.spread)));
        }
    }
    Ok(Ok(format!(
        "smoothness bound held on {trials} random instances"
    )))
}

fn tau() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a0);
    for _ in 0..200 {
        let (g, p, a) = random_instance(&mut rng, 8, 14);
        let mask = LiveEdgeMask::sample(&p, &mut rng);
        let rule = if rng.random_bool(0.5) {
            TieRule::AOverB
        } else {
            TieRule::BOverA
        };
        let out = propagate(&g, &mask, &a, rule)?;
        if out
            .activated_a
            .iter()
            .any(|v| out.activated_b.binary_search(v).is_ok())
        {
            return Ok(Err("a node adopted both items".into()));
        }
        let mut expected: Vec<_> = out
            .activated_a
            .iter()
            .chain(&out.activated_b)
            .flat_map(|&v| g.out_edges(v).iter().copied())
            .collect();
        expected.sort_unstable();
        if out.triggered != expected {
            return Ok(Err(
                "triggered set differs from the out-edges of activated nodes".into(),
            ));
        }
        if out.observed().any(|(e, x)| (x == 1) != mask.is_live(e)) {
            return Ok(Err("observations differ from the live-edge graph".into()));
        }
    }
    Ok(Ok(
        "triggered sets match the out-edges of activated nodes".into()
    ))
}
