//! Independent reference implementations used to cross-check the library.
//! Deliberately naive: plain vectors, no shared code with `ocim-core`.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const NONE: u8 = 0;
pub const A: u8 = 1;
pub const B: u8 = 2;

/// Small instance in plain data form.
#[derive(Debug, Clone)]
pub struct Instance {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub probs: Vec<f64>,
    pub seeds_a: Vec<usize>,
    pub seeds_b: Vec<usize>,
}

/// Final adoption per node on one live-edge graph.
pub fn cascade(
    n: usize,
    edges: &[(usize, usize)],
    live: &[bool],
    a: &[usize],
    b: &[usize],
    a_wins: bool,
) -> Vec<u8> {
    let mut state = vec![NONE; n];
    let mut fresh = vec![false; n];
    for v in 0..n {
        let (in_a, in_b) = (a.contains(&v), b.contains(&v));
        state[v] = match (in_a, in_b) {
            (true, true) => {
                if a_wins {
                    A
                } else {
                    B
                }
            }
            (true, false) => A,
            (false, true) => B,
            _ => NONE,
        };
        fresh[v] = state[v] != NONE;
    }
    loop {
        let mut reached_a = vec![false; n];
        let mut reached_b = vec![false; n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            if fresh[u] && live[e] && state[v] == NONE {
                if state[u] == A {
                    reached_a[v] = true;
                } else {
                    reached_b[v] = true;
                }
            }
        }
        let mut any = false;
        for v in 0..n {
            fresh[v] = false;
            let adopted = match (reached_a[v], reached_b[v]) {
                (true, true) => {
                    if a_wins {
                        A
                    } else {
                        B
                    }
                }
                (true, false) => A,
                (false, true) => B,
                _ => continue,
            };
            state[v] = adopted;
            fresh[v] = true;
            any = true;
        }
        if !any {
            return state;
        }
    }
}

/// Expected A-count and per-edge trigger probabilities by summing over
/// every live-edge graph with its product probability.
pub fn exact(inst: &Instance, a_wins: bool) -> (f64, Vec<f64>) {
    let m = inst.edges.len();
    let mut spread = 0.0;
    let mut trig = vec![0.0; m];
    for mask in 0u64..(1 << m) {
        let live: Vec<bool> = (0..m).map(|e| mask >> e & 1 == 1).collect();
        let w: f64 = (0..m)
            .map(|e| {
                if live[e] {
                    inst.probs[e]
                } else {
                    1.0 - inst.probs[e]
                }
            })
            .product();
        if w == 0.0 {
            continue;
        }
        let state = cascade(
            inst.n,
            &inst.edges,
            &live,
            &inst.seeds_a,
            &inst.seeds_b,
            a_wins,
        );
        spread += w * state.iter().filter(|&&s| s == A).count() as f64;
        for (e, &(u, _)) in inst.edges.iter().enumerate() {
            if state[u] != NONE {
                trig[e] += w;
            }
        }
    }
    (spread, trig)
}

/// A-count on every live-edge graph, indexed by bitmask.
pub fn mask_rewards(inst: &Instance, a_wins: bool) -> Vec<f64> {
    let m = inst.edges.len();
    (0u64..(1 << m))
        .map(|mask| {
            let live: Vec<bool> = (0..m).map(|e| mask >> e & 1 == 1).collect();
            let state = cascade(
                inst.n,
                &inst.edges,
                &live,
                &inst.seeds_a,
                &inst.seeds_b,
                a_wins,
            );
            state.iter().filter(|&&s| s == A).count() as f64
        })
        .collect()
}

/// Largest closure size over all nodes, by Floyd-Warshall style closure.
#[allow(clippy::needless_range_loop)]
pub fn max_reach(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut r = vec![vec![false; n]; n];
    for (v, row) in r.iter_mut().enumerate() {
        row[v] = true;
    }
    for &(u, v) in edges {
        r[u][v] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r.iter()
        .map(|row| row.iter().filter(|&&x| x).count())
        .max()
        .unwrap_or(0)
}

pub fn random_instance(rng: &mut ChaCha8Rng, max_n: usize, max_m: usize) -> Instance {
    let n = rng.random_range(2..=max_n);
    let m = rng.random_range(1..=max_m);
    let edges = (0..m)
        .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
        .collect();
    let probs = (0..m).map(|_| rng.random::<f64>()).collect();
    let mut seeds_a: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.3)).collect();
    if seeds_a.is_empty() {
        seeds_a.push(rng.random_range(0..n));
    }
    let seeds_b = (0..n).filter(|_| rng.random_bool(0.3)).collect();
    Instance {
        n,
        edges,
        probs,
        seeds_a,
        seeds_b,
    }
}

/// Every size-`k` subset of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
