//! Seeded instance generators. Same seed, same instance, on every platform.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cover::ClubCover;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::sat::{validate_5dsat, CnfFormula, Literal};

/// Name of the generator recorded alongside experiment results.
pub const RNG_NAME: &str = "ChaCha8Rng";

/// Attempts per instance before [`gen_random_5dsat`] gives up.
pub const MAX_REJECTION_ATTEMPTS: usize = 100_000;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi `G(n, p)`.
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidInput(format!(
            "edge probability {p} not in [0, 1]"
        )));
    }
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// A graph with a known cover by `k` 2-clubs: `k` random centers, every
/// other vertex joined to one random center, plus sparse noise edges among
/// the non-centers. Returns the graph and the planted cover (the closed
/// neighborhoods of the centers restricted to their own stars).
pub fn gen_planted_clubs(n: usize, k: usize, seed: u64) -> Result<(Graph, ClubCover)> {
    if k == 0 || k > n {
        return Err(Error::InvalidInput(format!(
            "need 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    let mut r = rng(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut r);
    let centers: Vec<usize> = order[..k].to_vec();
    let rest = &order[k..];

    let mut stars: Vec<VertexSet> = centers.iter().map(|&c| VertexSet::from([c])).collect();
    let mut edges = Vec::new();
    for &v in rest {
        let c = r.random_range(0..k);
        stars[c].insert(v);
        edges.push((centers[c].min(v), centers[c].max(v)));
    }
    for (a, &u) in rest.iter().enumerate() {
        for &v in &rest[a + 1..] {
            if r.random_bool(0.1) {
                edges.push((u.min(v), u.max(v)));
            }
        }
    }
    let g = Graph::from_edges(n, &edges)?;
    let mut cover = ClubCover::new(2, stars);
    cover.centers = Some(centers);
    Ok((g, cover))
}

fn random_clause(r: &mut ChaCha8Rng, vars: &[u32], width: usize) -> Vec<Literal> {
    vars.choose_multiple(r, width)
        .map(|&v| Literal {
            var: v,
            positive: r.random_bool(0.5),
        })
        .collect()
}

/// Random 3-CNF over `q >= 3` variables with `p` clauses, each on three
/// distinct variables.
pub fn gen_random_3sat(q: usize, p: usize, seed: u64) -> Result<CnfFormula> {
    if q < 3 {
        return Err(Error::InvalidInput(format!(
            "3-CNF needs at least 3 variables, got {q}"
        )));
    }
    let mut r = rng(seed);
    let vars: Vec<u32> = (1..=q as u32).collect();
    let clauses = (0..p).map(|_| random_clause(&mut r, &vars, 3)).collect();
    CnfFormula::new(q, clauses)
}

/// Random well-formed 5-Double-Sat instance by rejection sampling: clauses
/// on five distinct variables with both polarities present, and every
/// variable occurring in both polarities somewhere.
pub fn gen_random_5dsat(q: usize, p: usize, seed: u64) -> Result<CnfFormula> {
    if q < 5 || p == 0 {
        return Err(Error::InvalidInput(format!(
            "5-Double-Sat needs q >= 5 and p >= 1, got q = {q}, p = {p}"
        )));
    }
    // every variable needs two of the 5p literal slots
    if 2 * q > 5 * p {
        return Err(Error::InvalidInput(format!(
            "{p} clauses cannot mention all {q} variables in both polarities"
        )));
    }
    let mut r = rng(seed);
    let vars: Vec<u32> = (1..=q as u32).collect();
    for _ in 0..MAX_REJECTION_ATTEMPTS {
        let clauses: Vec<Vec<Literal>> = (0..p)
            .map(|_| loop {
                let c = random_clause(&mut r, &vars, 5);
                if c.iter().any(|l| l.positive) && c.iter().any(|l| !l.positive) {
                    break c;
                }
            })
            .collect();
        let f = CnfFormula::new(q, clauses)?;
        if validate_5dsat(&f).is_ok() {
            return Ok(f);
        }
    }
    Err(Error::InvalidInput(format!(
        "no valid instance with q = {q}, p = {p} after {MAX_REJECTION_ATTEMPTS} attempts"
    )))
}
