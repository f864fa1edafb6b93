//! Exact solvers for desk-scale instances. These are the ground truth every
//! other module is checked against.
//!
//! Graph oracles work on `u64` bitmasks, so no graph oracle ever accepts
//! more than 64 vertices; the configurable cap (default
//! [`DEFAULT_MAX_EXACT_N`], env `CLUBCOVER_MAX_EXACT_N`) is usually lower.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::cover::ClubCover;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::sat::{Assignment, CnfFormula, Literal};

pub const DEFAULT_MAX_EXACT_N: usize = 32;
/// Enumerating *every* s-club is output-exponential; it stays a subset scan.
pub const SUBSET_SCAN_MAX_N: usize = 22;
pub const MAX_SAT_VARS: usize = 40;
/// Plain truth-table enumeration.
pub const MAX_TRUTH_TABLE_VARS: usize = 24;
pub const MAX_EXACT_ENV: &str = "CLUBCOVER_MAX_EXACT_N";

/// Current graph-oracle cap.
pub fn max_exact_n() -> usize {
    std::env::var(MAX_EXACT_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map_or(DEFAULT_MAX_EXACT_N, |v| v.min(64))
}

fn check_cap(size: usize, cap: usize) -> Result<()> {
    if size > cap {
        return Err(Error::TooLarge { size, cap });
    }
    Ok(())
}

/// A partition of a host graph into cliques.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliquePartition {
    pub parts: Vec<VertexSet>,
}

impl CliquePartition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Checks disjointness, coverage of `0..n`, non-empty parts and
    /// clique-ness. Returns a description of the first problem found.
    pub fn check(&self, g: &Graph) -> std::result::Result<(), String> {
        let mut seen = vec![false; g.n()];
        for (k, part) in self.parts.iter().enumerate() {
            if part.is_empty() {
                return Err(format!("part {k} is empty"));
            }
            for &v in part {
                if v >= g.n() {
                    return Err(format!("part {k} has out-of-range vertex {v}"));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(format!("vertex {v} appears in more than one part"));
                }
            }
            if !g.is_clique(part).expect("range checked") {
                return Err(format!("part {k} is not a clique"));
            }
        }
        match seen.iter().position(|&s| !s) {
            Some(v) => Err(format!("vertex {v} is in no part")),
            None => Ok(()),
        }
    }
}

// ---------------------------------------------------------------------------
// bitmask helpers

type Mask = u64;

fn bit(v: usize) -> Mask {
    1 << v
}

fn full_mask(n: usize) -> Mask {
    if n == 64 {
        !0
    } else {
        (1 << n) - 1
    }
}

fn members(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

fn to_set(m: Mask) -> VertexSet {
    members(m).collect()
}

fn to_mask(s: &VertexSet) -> Mask {
    s.iter().fold(0, |m, &v| m | bit(v))
}

/// Closed-neighborhood masks.
fn closed_masks(g: &Graph) -> Vec<Mask> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(bit(v), |m, &w| m | bit(w)))
        .collect()
}

/// Vertices of `within` reachable from `v` in at most `s` steps inside `within`.
fn ball_in(closed: &[Mask], within: Mask, v: usize, s: usize) -> Mask {
    let mut reach = bit(v);
    for _ in 0..s {
        let next = members(reach).fold(reach, |m, u| m | closed[u]) & within;
        if next == reach {
            break;
        }
        reach = next;
    }
    reach
}

/// A pair of `set` members at induced distance greater than `s`.
fn far_pair_mask(closed: &[Mask], set: Mask, s: usize) -> Option<(usize, usize)> {
    for v in members(set) {
        let missing = set & !ball_in(closed, set, v, s);
        if missing != 0 {
            return Some((v, missing.trailing_zeros() as usize));
        }
    }
    None
}

fn is_club_mask(closed: &[Mask], set: Mask, s: usize) -> bool {
    set != 0 && far_pair_mask(closed, set, s).is_none()
}

fn graph_oracle_prelude(g: &Graph, s: usize) -> Result<Vec<Mask>> {
    check_cap(g.n(), max_exact_n())?;
    if s == 0 {
        return Err(Error::InvalidInput("club parameter s must be >= 1".into()));
    }
    Ok(closed_masks(g))
}

// ---------------------------------------------------------------------------
// s-clubs

/// All inclusion-maximal s-clubs, as masks, sorted descending by size then
/// value.
///
/// Branches on a pair at induced distance greater than `s`: no s-club inside
/// the current set can hold both ends, so one of them is dropped. Every
/// s-club survives in some branch and every leaf is an s-club, so the
/// maximal leaves are exactly the maximal s-clubs.
fn maximal_club_masks(closed: &[Mask], n: usize, s: usize) -> Vec<Mask> {
    let mut stack = vec![full_mask(n)];
    let mut seen: HashSet<Mask> = HashSet::new();
    let mut leaves = Vec::new();
    while let Some(set) = stack.pop() {
        if set == 0 || !seen.insert(set) {
            continue;
        }
        match far_pair_mask(closed, set, s) {
            None => leaves.push(set),
            Some((u, w)) => {
                stack.push(set & !bit(u));
                stack.push(set & !bit(w));
            }
        }
    }
    keep_maximal(leaves)
}

fn keep_maximal(mut sets: Vec<Mask>) -> Vec<Mask> {
    sets.sort_unstable_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(b.cmp(a)));
    sets.dedup();
    let mut kept: Vec<Mask> = Vec::new();
    for m in sets {
        if !kept.iter().any(|&k| m & !k == 0) {
            kept.push(m);
        }
    }
    kept
}

fn all_club_masks(closed: &[Mask], n: usize, s: usize) -> Vec<Mask> {
    (1..=full_mask(n))
        .filter(|&m| is_club_mask(closed, m, s))
        .collect()
}

/// Enumerates non-empty s-clubs. With `maximal_only` the result holds the
/// inclusion-maximal ones; otherwise every s-club (subset scan, at most
/// [`SUBSET_SCAN_MAX_N`] vertices). Output is sorted.
pub fn enumerate_s_clubs(g: &Graph, s: usize, maximal_only: bool) -> Result<Vec<VertexSet>> {
    let closed = graph_oracle_prelude(g, s)?;
    let masks = if maximal_only {
        maximal_club_masks(&closed, g.n(), s)
    } else {
        check_cap(g.n(), SUBSET_SCAN_MAX_N)?;
        all_club_masks(&closed, g.n(), s)
    };
    let mut out: Vec<VertexSet> = masks.into_iter().map(to_set).collect();
    out.sort();
    Ok(out)
}

// ---------------------------------------------------------------------------
// exact set cover

struct SetCover<'a> {
    candidates: &'a [Mask],
    // candidate indices per element
    containing: Vec<Vec<usize>>,
    full: Mask,
    best: Option<Vec<usize>>,
    // only covers strictly smaller than this are of interest
    ceiling: usize,
    // the search stops as soon as a cover this small is known
    good_enough: usize,
}

impl<'a> SetCover<'a> {
    fn new(candidates: &'a [Mask], n: usize) -> Self {
        let mut containing = vec![Vec::new(); n];
        for (i, &c) in candidates.iter().enumerate() {
            for v in members(c) {
                containing[v].push(i);
            }
        }
        SetCover {
            candidates,
            containing,
            full: full_mask(n),
            best: None,
            ceiling: usize::MAX,
            good_enough: 0,
        }
    }

    fn bound(&self) -> usize {
        self.best.as_ref().map_or(self.ceiling, Vec::len)
    }

    fn done(&self) -> bool {
        self.best
            .as_ref()
            .is_some_and(|b| b.len() <= self.good_enough)
    }

    /// Lower bound on the sets still needed: uncovered vertices whose
    /// candidate unions are pairwise disjoint each need their own set.
    fn lower_bound(&self, covered: Mask) -> usize {
        let mut used: Mask = 0;
        let mut count = 0;
        for v in members(self.full & !covered) {
            let reach = self.containing[v]
                .iter()
                .fold(0, |m, &i| m | self.candidates[i]);
            if reach & used == 0 {
                count += 1;
                used |= reach;
            }
        }
        count
    }

    fn search(&mut self, covered: Mask, chosen: &mut Vec<usize>) {
        if self.done() {
            return;
        }
        if covered == self.full {
            if chosen.len() < self.bound() {
                self.best = Some(chosen.clone());
            }
            return;
        }
        if chosen.len() + self.lower_bound(covered) >= self.bound() {
            return;
        }
        // branch on the uncovered vertex with the fewest options
        let v = members(self.full & !covered)
            .min_by_key(|&v| self.containing[v].len())
            .expect("something uncovered");
        let mut options = self.containing[v].clone();
        options.sort_by_key(|&i| std::cmp::Reverse((self.candidates[i] & !covered).count_ones()));
        for i in options {
            chosen.push(i);
            self.search(covered | self.candidates[i], chosen);
            chosen.pop();
        }
    }

    /// Without `limit`: a minimum cover. With `limit`: some cover of at most
    /// `limit` sets, if one exists.
    fn solve(mut self, limit: Option<usize>) -> Option<Vec<usize>> {
        match limit {
            Some(limit) => {
                self.ceiling = limit.saturating_add(1);
                self.good_enough = limit;
            }
            None => {
                self.best = Some(self.greedy());
                self.good_enough = self.lower_bound(0);
            }
        }
        self.search(0, &mut Vec::new());
        self.best
    }

    fn greedy(&self) -> Vec<usize> {
        let mut covered = 0;
        let mut picked = Vec::new();
        while covered != self.full {
            let (i, _) = self
                .candidates
                .iter()
                .enumerate()
                .max_by_key(|(_, &c)| (c & !covered).count_ones())
                .expect("candidates cover every vertex");
            covered |= self.candidates[i];
            picked.push(i);
        }
        picked
    }
}

fn cover_from_masks(s: usize, candidates: &[Mask], picked: &[usize]) -> ClubCover {
    ClubCover::new(s, picked.iter().map(|&i| to_set(candidates[i])).collect())
}

/// A minimum s-club cover. Candidates are the maximal s-clubs: any club
/// extends to a maximal one without losing coverage.
pub fn min_s_club_cover_exact(g: &Graph, s: usize) -> Result<ClubCover> {
    let closed = graph_oracle_prelude(g, s)?;
    if g.n() == 0 {
        return Ok(ClubCover::new(s, Vec::new()));
    }
    let candidates = maximal_club_masks(&closed, g.n(), s);
    let picked = SetCover::new(&candidates, g.n())
        .solve(None)
        .expect("singletons make every graph coverable");
    Ok(cover_from_masks(s, &candidates, &picked))
}

/// A cover by at most `h` s-clubs, if one exists.
pub fn has_h_cover(g: &Graph, s: usize, h: usize) -> Result<Option<ClubCover>> {
    let closed = graph_oracle_prelude(g, s)?;
    if g.n() == 0 {
        return Ok(Some(ClubCover::new(s, Vec::new())));
    }
    if h == 0 {
        return Ok(None);
    }
    let full = full_mask(g.n());
    if is_club_mask(&closed, full, s) {
        return Ok(Some(ClubCover::new(s, vec![g.vertices()])));
    }
    let candidates = maximal_club_masks(&closed, g.n(), s);
    Ok(SetCover::new(&candidates, g.n())
        .solve(Some(h))
        .map(|picked| cover_from_masks(s, &candidates, &picked)))
}

/// Minimum s-club cover using *every* s-club as a candidate (subset scan).
/// Slow; exists to confirm that restricting to maximal clubs loses nothing.
pub fn min_s_club_cover_all_candidates(g: &Graph, s: usize) -> Result<ClubCover> {
    let closed = graph_oracle_prelude(g, s)?;
    check_cap(g.n(), SUBSET_SCAN_MAX_N)?;
    if g.n() == 0 {
        return Ok(ClubCover::new(s, Vec::new()));
    }
    let candidates = all_club_masks(&closed, g.n(), s);
    let picked = SetCover::new(&candidates, g.n())
        .solve(None)
        .expect("singletons make every graph coverable");
    Ok(cover_from_masks(s, &candidates, &picked))
}

// ---------------------------------------------------------------------------
// clique partition

struct CliqueSearch<'a> {
    adj: &'a [Mask],
    n: usize,
    best: Vec<Mask>,
}

impl CliqueSearch<'_> {
    fn search(&mut self, v: usize, parts: &mut Vec<Mask>) {
        if parts.len() >= self.best.len() {
            return;
        }
        if v == self.n {
            self.best = parts.clone();
            return;
        }
        for k in 0..parts.len() {
            if parts[k] & !self.adj[v] == 0 {
                parts[k] |= bit(v);
                self.search(v + 1, parts);
                parts[k] &= !bit(v);
            }
        }
        parts.push(bit(v));
        self.search(v + 1, parts);
        parts.pop();
    }
}

/// Minimum partition into cliques (branch and bound over vertex order:
/// each vertex joins a compatible part or opens a new one).
pub fn min_clique_partition_exact(g: &Graph) -> Result<CliquePartition> {
    check_cap(g.n(), max_exact_n())?;
    let adj: Vec<Mask> = closed_masks(g)
        .into_iter()
        .enumerate()
        .map(|(v, m)| m & !bit(v))
        .collect();
    let mut search = CliqueSearch {
        adj: &adj,
        n: g.n(),
        best: (0..g.n()).map(bit).collect(),
    };
    // starts from the all-singletons partition; only strictly smaller ones replace it
    search.search(0, &mut Vec::new());
    Ok(CliquePartition {
        parts: search.best.into_iter().map(to_set).collect(),
    })
}

// ---------------------------------------------------------------------------
// dominating set

fn dominate(
    closed: &[Mask],
    full: Mask,
    covered: Mask,
    budget: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    if covered == full {
        return true;
    }
    if budget == 0 {
        return false;
    }
    let v = members(full & !covered)
        .min_by_key(|&v| closed[v].count_ones())
        .expect("something undominated");
    // some vertex of N[v] must be chosen
    for u in members(closed[v]) {
        chosen.push(u);
        if dominate(closed, full, covered | closed[u], budget - 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// A minimum dominating set, by iterative deepening on its size.
pub fn min_dominating_set_exact(g: &Graph) -> Result<VertexSet> {
    check_cap(g.n(), max_exact_n())?;
    let closed = closed_masks(g);
    let full = full_mask(g.n());
    for k in 0..=g.n() {
        let mut chosen = Vec::new();
        if dominate(&closed, full, 0, k, &mut chosen) {
            return Ok(chosen.into_iter().collect());
        }
    }
    unreachable!("the whole vertex set dominates")
}

/// Domination number of `G[set]`.
pub fn domination_number_of(g: &Graph, set: &VertexSet) -> Result<usize> {
    let (sub, _) = g.induced_subgraph(set)?;
    Ok(min_dominating_set_exact(&sub)?.len())
}

// ---------------------------------------------------------------------------
// SAT

/// Backtracking search with unit propagation over plain CNF clauses given as
/// (variable index, polarity) pairs. Exact: explores every branch the
/// propagation does not refute.
struct Dpll<'a> {
    clauses: &'a [Vec<(usize, bool)>],
    occurs: Vec<Vec<usize>>,
    values: Vec<Option<bool>>,
    trail: Vec<usize>,
}

impl<'a> Dpll<'a> {
    fn new(num_vars: usize, clauses: &'a [Vec<(usize, bool)>]) -> Self {
        let mut occurs = vec![Vec::new(); num_vars];
        for (c, clause) in clauses.iter().enumerate() {
            for &(v, _) in clause {
                occurs[v].push(c);
            }
        }
        Dpll {
            clauses,
            occurs,
            values: vec![None; num_vars],
            trail: Vec::new(),
        }
    }

    fn assign(&mut self, v: usize, value: bool) {
        self.values[v] = Some(value);
        self.trail.push(v);
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let v = self.trail.pop().expect("non-empty trail");
            self.values[v] = None;
        }
    }

    /// Propagates units triggered by the trail from `from`. `false` on conflict.
    fn propagate(&mut self, mut from: usize) -> bool {
        while from < self.trail.len() {
            let v = self.trail[from];
            from += 1;
            for i in 0..self.occurs[v].len() {
                let c = self.occurs[v][i];
                let mut unassigned = None;
                let mut open = 0;
                let mut satisfied = false;
                for &(u, pol) in &self.clauses[c] {
                    match self.values[u] {
                        Some(x) if x == pol => {
                            satisfied = true;
                            break;
                        }
                        Some(_) => {}
                        None => {
                            open += 1;
                            unassigned = Some((u, pol));
                        }
                    }
                }
                if satisfied {
                    continue;
                }
                match (open, unassigned) {
                    (0, _) => return false,
                    (1, Some((u, pol))) => self.assign(u, pol),
                    _ => {}
                }
            }
        }
        true
    }

    fn solve(&mut self) -> bool {
        // empty clauses and initial units
        for c in self.clauses {
            if c.is_empty() {
                return false;
            }
        }
        let start = self.trail.len();
        for c in self.clauses {
            if let [(v, pol)] = c[..] {
                match self.values[v] {
                    Some(x) if x != pol => return false,
                    Some(_) => {}
                    None => self.assign(v, pol),
                }
            }
        }
        if !self.propagate(start) {
            return false;
        }
        self.branch()
    }

    fn branch(&mut self) -> bool {
        let Some(v) = self.values.iter().position(Option::is_none) else {
            return true;
        };
        for value in [true, false] {
            let mark = self.trail.len();
            self.assign(v, value);
            if self.propagate(mark) && self.branch() {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }
}

fn run_dpll(num_vars: usize, clauses: Vec<Vec<(usize, bool)>>) -> Option<Assignment> {
    let mut dpll = Dpll::new(num_vars, &clauses);
    dpll.solve()
        .then(|| Assignment::new(dpll.values.iter().map(|v| v.unwrap_or(false)).collect()))
}

fn lit_pair(l: &Literal) -> (usize, bool) {
    (l.var as usize - 1, l.positive)
}

/// A satisfying assignment, if any.
pub fn sat_brute(f: &CnfFormula) -> Result<Option<Assignment>> {
    check_cap(f.num_vars, MAX_SAT_VARS)?;
    let clauses = f
        .clauses
        .iter()
        .map(|c| c.iter().map(lit_pair).collect())
        .collect();
    Ok(run_dpll(f.num_vars, clauses))
}

/// An assignment double-satisfying every clause, if any. A clause is
/// double-satisfied iff its positive literals contain a true one and its
/// negative literals contain a satisfied one, so each clause splits into two
/// ordinary clauses.
pub fn double_sat_brute(f: &CnfFormula) -> Result<Option<Assignment>> {
    check_cap(f.num_vars, MAX_SAT_VARS)?;
    let mut clauses = Vec::with_capacity(2 * f.clauses.len());
    for c in &f.clauses {
        for side in [true, false] {
            clauses.push(
                c.iter()
                    .filter(|l| l.positive == side)
                    .map(lit_pair)
                    .collect(),
            );
        }
    }
    Ok(run_dpll(f.num_vars, clauses))
}

/// Truth-table enumeration of all `2^q` assignments; the first one (in
/// binary counting order, x1 as the low bit) accepted by `accept` is returned.
pub fn truth_table_search(
    f: &CnfFormula,
    accept: impl Fn(&CnfFormula, &Assignment) -> bool,
) -> Result<Option<Assignment>> {
    check_cap(f.num_vars, MAX_TRUTH_TABLE_VARS)?;
    for bits in 0u64..(1u64 << f.num_vars) {
        let a = Assignment::new((0..f.num_vars).map(|i| bits >> i & 1 == 1).collect());
        if accept(f, &a) {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

/// Maximal s-clubs as a deduplicated family, convenient for callers that
/// only need the sets.
pub fn maximal_s_clubs(g: &Graph, s: usize) -> Result<BTreeSet<VertexSet>> {
    Ok(enumerate_s_clubs(g, s, true)?.into_iter().collect())
}

#[doc(hidden)]
pub fn mask_of(s: &VertexSet) -> u64 {
    to_mask(s)
}
