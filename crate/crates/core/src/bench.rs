//! Greedy-versus-exact experiments on random graphs, run on scoped worker
//! threads and reported as JSON lines.

use std::sync::mpsc;
use std::time::Instant;

use serde::Serialize;

use crate::cover::{greedy_club_cover, validate_cover};
use crate::error::{Error, Result};
use crate::gen::{gen_gnp, RNG_NAME};
use crate::graph::Graph;
use crate::io::digest_graph;
use crate::oracles::{max_exact_n, min_s_club_cover_exact};

/// One solver run on one instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub digest: String,
    pub solver: String,
    pub s: usize,
    pub n: usize,
    pub m: usize,
    pub cover_size: usize,
    /// Exact optimum when the instance is within the exact-solver cap.
    pub exact_optimum: Option<usize>,
    /// `cover_size / exact_optimum`.
    pub ratio: Option<f64>,
    /// Seconds.
    pub wall_time: f64,
    pub seed: u64,
    pub rng: String,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub p: f64,
    pub seeds: std::ops::Range<u64>,
    /// Also solve exactly when `n` is within the cap.
    pub exact: bool,
    pub threads: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![10, 15, 20],
            p: 0.2,
            seeds: 0..10,
            exact: true,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

/// Greedy (and optionally exact) reports for one graph.
pub fn run_instance(g: &Graph, seed: u64, exact: bool) -> Result<Vec<ExperimentReport>> {
    let digest = digest_graph(g);
    let t = Instant::now();
    let greedy = greedy_club_cover(g);
    let greedy_time = t.elapsed().as_secs_f64();
    if let Some(v) = validate_cover(g, &greedy).first() {
        return Err(Error::Invariant(format!(
            "greedy produced an infeasible cover: {v}"
        )));
    }

    let mut optimum = None;
    let mut reports = Vec::new();
    if exact && g.n() <= max_exact_n() {
        let t = Instant::now();
        let opt = min_s_club_cover_exact(g, 2)?;
        let exact_time = t.elapsed().as_secs_f64();
        optimum = Some(opt.len());
        reports.push(ExperimentReport {
            digest: digest.clone(),
            solver: "exact".into(),
            s: 2,
            n: g.n(),
            m: g.edge_count(),
            cover_size: opt.len(),
            exact_optimum: optimum,
            ratio: ratio(opt.len(), optimum),
            wall_time: exact_time,
            seed,
            rng: RNG_NAME.into(),
        });
    }
    reports.insert(
        0,
        ExperimentReport {
            digest,
            solver: "greedy".into(),
            s: 2,
            n: g.n(),
            m: g.edge_count(),
            cover_size: greedy.len(),
            exact_optimum: optimum,
            ratio: ratio(greedy.len(), optimum),
            wall_time: greedy_time,
            seed,
            rng: RNG_NAME.into(),
        },
    );
    Ok(reports)
}

fn ratio(size: usize, opt: Option<usize>) -> Option<f64> {
    opt.filter(|&o| o > 0).map(|o| size as f64 / o as f64)
}

/// Runs every `(size, seed)` job, spread over `threads` workers. Reports are
/// returned in job order regardless of scheduling.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<ExperimentReport>> {
    let jobs: Vec<(usize, u64)> = cfg
        .sizes
        .iter()
        .flat_map(|&n| cfg.seeds.clone().map(move |s| (n, s)))
        .collect();
    let threads = cfg.threads.max(1).min(jobs.len().max(1));
    let (tx, rx) = mpsc::channel();
    std::thread::scope(|scope| {
        for w in 0..threads {
            let tx = tx.clone();
            let jobs = &jobs;
            scope.spawn(move || {
                for (k, &(n, seed)) in jobs.iter().enumerate().skip(w).step_by(threads) {
                    let out =
                        gen_gnp(n, cfg.p, seed).and_then(|g| run_instance(&g, seed, cfg.exact));
                    if tx.send((k, out)).is_err() {
                        return;
                    }
                }
            });
        }
    });
    drop(tx);
    let mut results: Vec<(usize, Result<Vec<ExperimentReport>>)> = rx.into_iter().collect();
    results.sort_by_key(|(k, _)| *k);
    let mut reports = Vec::new();
    for (_, r) in results {
        reports.extend(r?);
    }
    Ok(reports)
}

pub fn to_json_lines(reports: &[ExperimentReport]) -> String {
    reports.iter().map(|r| r.to_json() + "\n").collect()
}
