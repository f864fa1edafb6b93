//! Graph constructions used to transfer hardness to s-club cover, with the
//! solution mappings in both directions.
//!
//! * `cp-cover2`: clique partition to 2-club cover. One vertex `w_i` per
//!   source vertex and one `w_{i,j}` per source edge; `w_i` is adjacent to the
//!   pair vertices of its incident edges and two pair vertices are adjacent
//!   when their edges share an endpoint.
//! * `dsat5-cover32`: 5-Double-Sat to a cover by two 3-clubs.
//! * `cp-cover3-pendant`: clique partition to 3-club cover by hanging a
//!   pendant vertex off every source vertex.
//!
//! Vertex ids are assigned in a fixed canonical order so that outputs are
//! reproducible byte for byte.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cover::{validate_cover, ClubCover};
use crate::error::{Error, Result};
use crate::graph::{Dist, Graph, VertexSet};
use crate::io::{digest_formula, digest_graph};
use crate::oracles::CliquePartition;
use crate::sat::{
    has_two_variable_double_cover, normalize_single_polarity, validate_5dsat, Assignment,
    CnfFormula, FiveDSatInstance, Literal,
};

/// Semantic name of a constructed vertex. Indices are 0-based in memory and
/// 1-based in text (`w:1` is source vertex 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexLabel {
    W(usize),
    /// Source edge `{i, j}` with `i < j`.
    WPair(usize, usize),
    R,
    RPrime,
    RT,
    RPrimeT,
    RStarT,
    RF,
    RPrimeF,
    XT1(usize),
    XT2(usize),
    XF(usize),
    VC(usize),
    Y,
    Y1,
    Y2,
    U(usize),
    Pendant(usize),
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use VertexLabel::*;
        match *self {
            W(i) => write!(f, "w:{}", i + 1),
            WPair(i, j) => write!(f, "wp:{},{}", i + 1, j + 1),
            R => f.write_str("r"),
            RPrime => f.write_str("rp"),
            RT => f.write_str("rt"),
            RPrimeT => f.write_str("rpt"),
            RStarT => f.write_str("rst"),
            RF => f.write_str("rf"),
            RPrimeF => f.write_str("rpf"),
            XT1(i) => write!(f, "xt1:{}", i + 1),
            XT2(i) => write!(f, "xt2:{}", i + 1),
            XF(i) => write!(f, "xf:{}", i + 1),
            VC(j) => write!(f, "vc:{}", j + 1),
            Y => f.write_str("y"),
            Y1 => f.write_str("y1"),
            Y2 => f.write_str("y2"),
            U(i) => write!(f, "u:{}", i + 1),
            Pendant(i) => write!(f, "pend:{}", i + 1),
        }
    }
}

impl FromStr for VertexLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use VertexLabel::*;
        let bad = || Error::InvalidInput(format!("unknown vertex label {s:?}"));
        let index = |x: &str| -> Result<usize> {
            match x.trim().parse::<usize>() {
                Ok(k) if k >= 1 => Ok(k - 1),
                _ => Err(bad()),
            }
        };
        let label = match s.split_once(':') {
            None => match s {
                "r" => R,
                "rp" => RPrime,
                "rt" => RT,
                "rpt" => RPrimeT,
                "rst" => RStarT,
                "rf" => RF,
                "rpf" => RPrimeF,
                "y" => Y,
                "y1" => Y1,
                "y2" => Y2,
                _ => return Err(bad()),
            },
            Some(("wp", rest)) => {
                let (a, b) = rest.split_once(',').ok_or_else(bad)?;
                let (i, j) = (index(a)?, index(b)?);
                if i >= j {
                    return Err(bad());
                }
                WPair(i, j)
            }
            Some((kind, rest)) => {
                let k = index(rest)?;
                match kind {
                    "w" => W(k),
                    "xt1" => XT1(k),
                    "xt2" => XT2(k),
                    "xf" => XF(k),
                    "vc" => VC(k),
                    "u" => U(k),
                    "pend" => Pendant(k),
                    _ => return Err(bad()),
                }
            }
        };
        Ok(label)
    }
}

/// Which construction produced a [`LabeledGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Construction {
    #[serde(rename = "cp-cover2")]
    CliquePartitionToCover2,
    #[serde(rename = "dsat5-cover32")]
    DoubleSatToCover32,
    #[serde(rename = "cp-cover3-pendant")]
    CliquePartitionToCover3Pendant,
}

impl Construction {
    pub fn name(self) -> &'static str {
        match self {
            Construction::CliquePartitionToCover2 => "cp-cover2",
            Construction::DoubleSatToCover32 => "dsat5-cover32",
            Construction::CliquePartitionToCover3Pendant => "cp-cover3-pendant",
        }
    }

    /// Infers the construction from the kinds of labels present.
    pub fn infer(labels: &[VertexLabel]) -> Option<Construction> {
        use VertexLabel::*;
        let first = labels.first()?;
        Some(match first {
            W(_) | WPair(..) => Construction::CliquePartitionToCover2,
            U(_) | Pendant(_) => Construction::CliquePartitionToCover3Pendant,
            _ => Construction::DoubleSatToCover32,
        })
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cp-cover2" => Ok(Construction::CliquePartitionToCover2),
            "dsat5-cover32" => Ok(Construction::DoubleSatToCover32),
            "cp-cover3-pendant" => Ok(Construction::CliquePartitionToCover3Pendant),
            _ => Err(Error::InvalidInput(format!("unknown construction {s:?}"))),
        }
    }
}

/// A constructed graph whose vertices carry [`VertexLabel`]s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    pub graph: Graph,
    labels: Vec<VertexLabel>,
    index: HashMap<VertexLabel, usize>,
    pub construction: Construction,
    /// Digest of the canonical text of the source instance.
    pub source_digest: String,
}

impl LabeledGraph {
    /// Assembles a labeled graph, checking that labels are in bijection with
    /// the vertices and consistent with `construction`.
    pub fn new(
        graph: Graph,
        labels: Vec<VertexLabel>,
        construction: Construction,
        source_digest: String,
    ) -> Result<Self> {
        if labels.len() != graph.n() {
            return Err(Error::InvalidInput(format!(
                "{} labels for {} vertices",
                labels.len(),
                graph.n()
            )));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (v, &l) in labels.iter().enumerate() {
            if index.insert(l, v).is_some() {
                return Err(Error::InvalidInput(format!("label {l} used twice")));
            }
        }
        if let Some(l) = labels
            .iter()
            .find(|&&l| Construction::infer(&[l]) != Some(construction))
        {
            return Err(Error::InvalidInput(format!(
                "label {l} does not belong to construction {construction}"
            )));
        }
        Ok(LabeledGraph {
            graph,
            labels,
            index,
            construction,
            source_digest,
        })
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> VertexLabel {
        self.labels[v]
    }

    pub fn vertex(&self, label: VertexLabel) -> Option<usize> {
        self.index.get(&label).copied()
    }

    fn v(&self, label: VertexLabel) -> Result<usize> {
        self.vertex(label).ok_or_else(|| {
            Error::Invariant(format!("label {label} missing from {}", self.construction))
        })
    }

    fn expect_construction(&self, c: Construction) -> Result<()> {
        if self.construction != c {
            return Err(Error::Provenance(format!(
                "expected a {c} graph, got {}",
                self.construction
            )));
        }
        Ok(())
    }

    /// Source graph of a clique-partition construction, read back from the
    /// labels and edges.
    pub fn source_graph(&self) -> Result<Graph> {
        use VertexLabel::*;
        match self.construction {
            Construction::CliquePartitionToCover2 => {
                let n = self.labels.iter().filter(|l| matches!(l, W(_))).count();
                let edges: Vec<_> = self
                    .labels
                    .iter()
                    .filter_map(|l| match *l {
                        WPair(i, j) => Some((i, j)),
                        _ => None,
                    })
                    .collect();
                Graph::from_edges(n, &edges)
            }
            Construction::CliquePartitionToCover3Pendant => {
                let n = self.labels.len() / 2;
                let mut edges = Vec::new();
                for (a, b) in self.graph.edges() {
                    if let (U(i), U(j)) = (self.labels[a], self.labels[b]) {
                        edges.push((i.min(j), i.max(j)));
                    }
                }
                Graph::from_edges(n, &edges)
            }
            Construction::DoubleSatToCover32 => Err(Error::Provenance(
                "a dsat5-cover32 graph has a formula as its source".into(),
            )),
        }
    }

    /// Source formula of a `dsat5-cover32` graph, literals ordered by
    /// variable within each clause.
    pub fn source_formula(&self) -> Result<CnfFormula> {
        use VertexLabel::*;
        self.expect_construction(Construction::DoubleSatToCover32)?;
        let q = self.labels.iter().filter(|l| matches!(l, XF(_))).count();
        let p = self.labels.iter().filter(|l| matches!(l, VC(_))).count();
        let mut clauses = Vec::with_capacity(p);
        for j in 0..p {
            let vc = self.v(VC(j))?;
            let mut clause = Vec::new();
            for &u in self.graph.neighbors(vc) {
                match self.labels[u] {
                    XT1(i) => clause.push(Literal::pos(i as u32 + 1)),
                    XF(i) => clause.push(Literal::neg(i as u32 + 1)),
                    _ => {}
                }
            }
            clause.sort_by_key(|l| (l.var, !l.positive));
            clauses.push(clause);
        }
        CnfFormula::new(q, clauses)
    }

    /// Rebuilds the construction from the recovered source and compares.
    pub fn check_structure(&self) -> Result<()> {
        let rebuilt = match self.construction {
            Construction::CliquePartitionToCover2 => reduce_cp_to_cover2(&self.source_graph()?),
            Construction::CliquePartitionToCover3Pendant => {
                reduce_cp_to_cover3_pendant(&self.source_graph()?)
            }
            Construction::DoubleSatToCover32 => {
                let f = self.source_formula()?;
                let inst = validate_5dsat(&f)
                    .map_err(|v| Error::Invariant(format!("recovered formula invalid: {v}")))?;
                build_dsat_graph(&inst)
            }
        };
        if rebuilt.labels != self.labels || rebuilt.graph != self.graph {
            return Err(Error::Invariant(format!(
                "graph does not follow the {} edge rules",
                self.construction
            )));
        }
        Ok(())
    }

    fn set_of(&self, labels: impl IntoIterator<Item = VertexLabel>) -> Result<VertexSet> {
        labels.into_iter().map(|l| self.v(l)).collect()
    }
}

fn check_source_digest(lg: &LabeledGraph, digest: String) -> Result<()> {
    if lg.source_digest != digest {
        return Err(Error::Provenance(format!(
            "source digest {digest} does not match the graph's {}",
            lg.source_digest
        )));
    }
    Ok(())
}

fn assemble(
    labels: Vec<VertexLabel>,
    edges: BTreeSet<(VertexLabel, VertexLabel)>,
    construction: Construction,
    digest: String,
) -> LabeledGraph {
    let index: HashMap<VertexLabel, usize> =
        labels.iter().enumerate().map(|(v, &l)| (l, v)).collect();
    let edge_ids: BTreeSet<(usize, usize)> = edges
        .into_iter()
        .map(|(a, b)| {
            let (x, y) = (index[&a], index[&b]);
            (x.min(y), x.max(y))
        })
        .collect();
    let graph = Graph::from_edge_set(labels.len(), &edge_ids).expect("constructions are simple");
    LabeledGraph::new(graph, labels, construction, digest)
        .expect("construction labels are bijective")
}

/// Keeps each source vertex in the first set that contains it; empty sets
/// are dropped.
fn disjointify(sets: Vec<VertexSet>, n: usize) -> Result<CliquePartition> {
    let mut taken = vec![false; n];
    let mut parts = Vec::new();
    for set in sets {
        let part: VertexSet = set
            .into_iter()
            .filter(|&v| !std::mem::replace(&mut taken[v], true))
            .collect();
        if !part.is_empty() {
            parts.push(part);
        }
    }
    if let Some(v) = taken.iter().position(|&t| !t) {
        return Err(Error::Invariant(format!(
            "source vertex {v} left uncovered"
        )));
    }
    Ok(CliquePartition { parts })
}

fn check_partition(partition: &CliquePartition, gp: &Graph) -> Result<()> {
    partition
        .check(gp)
        .map_err(|e| Error::InvalidInput(format!("not a clique partition: {e}")))
}

fn require_valid_cover(g: &Graph, cover: &ClubCover, s: usize) -> Result<()> {
    let as_s = ClubCover::new(s, cover.sets.clone());
    if let Some(v) = validate_cover(g, &as_s).first() {
        return Err(Error::InvalidInput(format!(
            "not a valid {s}-club cover: {v}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// clique partition -> 2-club cover

/// Vertices: `W(i)` in vertex order, then `WPair(i, j)` in lexicographic
/// order.
pub fn reduce_cp_to_cover2(gp: &Graph) -> LabeledGraph {
    use VertexLabel::*;
    let pairs: Vec<(usize, usize)> = gp.edges().collect();
    let mut labels: Vec<VertexLabel> = (0..gp.n()).map(W).collect();
    labels.extend(pairs.iter().map(|&(i, j)| WPair(i, j)));

    let mut edges = BTreeSet::new();
    for &(i, j) in &pairs {
        edges.insert((W(i), WPair(i, j)));
        edges.insert((W(j), WPair(i, j)));
    }
    // pair vertices sharing an endpoint
    for v in 0..gp.n() {
        let incident: Vec<VertexLabel> = gp
            .neighbors(v)
            .iter()
            .map(|&u| WPair(v.min(u), v.max(u)))
            .collect();
        for (a, &x) in incident.iter().enumerate() {
            for &y in &incident[a + 1..] {
                edges.insert((x.min(y), x.max(y)));
            }
        }
    }
    assemble(
        labels,
        edges,
        Construction::CliquePartitionToCover2,
        digest_graph(gp),
    )
}

/// One 2-club per part: its `W` vertices plus every `WPair(i, j)` whose
/// smaller endpoint `i` lies in the part.
pub fn map_cliques_to_clubs2(partition: &CliquePartition, lg: &LabeledGraph) -> Result<ClubCover> {
    use VertexLabel::*;
    lg.expect_construction(Construction::CliquePartitionToCover2)?;
    let gp = lg.source_graph()?;
    check_partition(partition, &gp)?;
    let sets = partition
        .parts
        .iter()
        .map(|part| {
            let ws = part.iter().map(|&i| W(i));
            let pairs = gp
                .edges()
                .filter(|(i, _)| part.contains(i))
                .map(|(i, j)| WPair(i, j));
            lg.set_of(ws.chain(pairs))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClubCover::new(2, sets))
}

/// Reads a clique partition of `gp` off a 2-club cover of its image: each
/// club contributes the source vertices of its `W` members.
pub fn map_clubs2_to_cliques(
    cover: &ClubCover,
    lg: &LabeledGraph,
    gp: &Graph,
) -> Result<CliquePartition> {
    lg.expect_construction(Construction::CliquePartitionToCover2)?;
    check_source_digest(lg, digest_graph(gp))?;
    require_valid_cover(&lg.graph, cover, 2)?;
    let sets = source_sets(cover, lg, |l| match l {
        VertexLabel::W(i) => Some(i),
        _ => None,
    });
    for set in &sets {
        if !gp.is_clique(set)? {
            return Err(Error::Invariant(format!(
                "club maps to non-clique {set:?}; W vertices of non-adjacent sources are at distance >= 3"
            )));
        }
    }
    disjointify(sets, gp.n())
}

fn source_sets(
    cover: &ClubCover,
    lg: &LabeledGraph,
    pick: impl Fn(VertexLabel) -> Option<usize>,
) -> Vec<VertexSet> {
    cover
        .sets
        .iter()
        .map(|club| club.iter().filter_map(|&v| pick(lg.label(v))).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// 5-Double-Sat -> two 3-clubs

/// Normalizes, validates and gate-checks a formula for
/// [`reduce_5dsat_to_cover3`]. Every failed assumption is an error; nothing
/// is repaired.
pub fn prepare_5dsat(f: &CnfFormula) -> Result<FiveDSatInstance> {
    let (_, forced) = normalize_single_polarity(f);
    if !forced.is_empty() {
        let list: Vec<String> = forced
            .iter()
            .map(|(v, b)| format!("x{v}={}", if *b { "true" } else { "false" }))
            .collect();
        return Err(Error::Precondition(format!(
            "variables occur in one polarity only and would be forced: {}",
            list.join(", ")
        )));
    }
    let inst = validate_5dsat(f)
        .map_err(|v| Error::Precondition(format!("not a 5-Double-Sat instance: {v}")))?;
    check_two_variable_gate(&inst)?;
    Ok(inst)
}

fn check_two_variable_gate(inst: &FiveDSatInstance) -> Result<()> {
    if let Some(w) = has_two_variable_double_cover(inst.formula()) {
        return Err(Error::Precondition(format!(
            "every clause is double-satisfied by fixing at most two variables ({w:?})"
        )));
    }
    Ok(())
}

/// Builds the two-3-club instance. Vertex order: `r, r', r_T, r'_T, r*_T,
/// r_F, r'_F`, then `(xt1, xt2, xf)` per variable, then one vertex per
/// clause, then `y, y1, y2`; `3q + p + 10` vertices in total.
pub fn reduce_5dsat_to_cover3(inst: &FiveDSatInstance) -> Result<LabeledGraph> {
    let (_, forced) = normalize_single_polarity(inst.formula());
    if !forced.is_empty() {
        return Err(Error::Precondition(
            "instance has single-polarity variables".into(),
        ));
    }
    check_two_variable_gate(inst)?;
    Ok(build_dsat_graph(inst))
}

fn build_dsat_graph(inst: &FiveDSatInstance) -> LabeledGraph {
    use VertexLabel::*;
    let f = inst.formula();
    let (q, p) = (f.num_vars, f.clauses.len());
    let mut labels = vec![R, RPrime, RT, RPrimeT, RStarT, RF, RPrimeF];
    for i in 0..q {
        labels.extend([XT1(i), XT2(i), XF(i)]);
    }
    labels.extend((0..p).map(VC));
    labels.extend([Y, Y1, Y2]);

    let mut edges = BTreeSet::new();
    let mut add = |a: VertexLabel, b: VertexLabel| {
        edges.insert((a.min(b), a.max(b)));
    };
    add(R, RPrime);
    add(RPrime, RT);
    add(RPrime, RStarT);
    add(RPrime, RF);
    for i in 0..q {
        add(RT, XT1(i));
        add(RF, XF(i));
        add(RPrimeT, XT1(i));
        add(RPrimeF, XF(i));
        add(XT1(i), XT2(i));
        add(RStarT, XT2(i));
        add(Y1, XT2(i));
        for j in (0..q).filter(|&j| j != i) {
            add(XT2(i), XF(j));
        }
    }
    for (j, clause) in f.clauses.iter().enumerate() {
        for l in clause {
            let i = l.var as usize - 1;
            add(if l.positive { XT1(i) } else { XF(i) }, VC(j));
        }
        add(VC(j), Y);
    }
    add(Y, Y2);
    add(Y1, Y2);
    add(Y1, RPrimeT);
    add(Y1, RPrimeF);

    assemble(
        labels,
        edges,
        Construction::DoubleSatToCover32,
        digest_formula(f),
    )
}

/// The two 3-clubs induced by a double-satisfying assignment:
/// `V1 = {r, r', r_T, r*_T, r_F} ∪ {xt1, xt2 of false vars} ∪ {xf of true vars}`
/// and `V2` = everything else plus nothing shared.
pub fn map_assignment_to_clubs3(
    inst: &FiveDSatInstance,
    a: &Assignment,
    lg: &LabeledGraph,
) -> Result<ClubCover> {
    use VertexLabel::*;
    lg.expect_construction(Construction::DoubleSatToCover32)?;
    check_source_digest(lg, digest_formula(inst.formula()))?;
    if !inst.formula().is_double_satisfied_by(a)? {
        return Err(Error::Precondition(
            "assignment does not double-satisfy the instance".into(),
        ));
    }
    let mut v1 = vec![R, RPrime, RT, RStarT, RF];
    let mut v2 = vec![RPrimeT, RPrimeF, Y, Y1, Y2];
    for i in 0..inst.num_vars() {
        let value = a.get(i as u32 + 1).expect("length checked");
        let (t_side, f_side) = if value {
            (&mut v2, &mut v1)
        } else {
            (&mut v1, &mut v2)
        };
        t_side.extend([XT1(i), XT2(i)]);
        f_side.push(XF(i));
    }
    v2.extend((0..inst.num_clauses()).map(VC));
    Ok(ClubCover::new(3, vec![lg.set_of(v1)?, lg.set_of(v2)?]))
}

/// Truth assignment from a cover by two 3-clubs: the club holding `y` is
/// `V2`, and `x_i` is true iff `xt1:i` lies in it.
pub fn map_clubs3_to_assignment(cover: &ClubCover, lg: &LabeledGraph) -> Result<Assignment> {
    use VertexLabel::*;
    lg.expect_construction(Construction::DoubleSatToCover32)?;
    if cover.len() != 2 {
        return Err(Error::InvalidInput(format!(
            "expected a cover by two 3-clubs, got {} sets",
            cover.len()
        )));
    }
    require_valid_cover(&lg.graph, cover, 3)?;
    let y = lg.v(Y)?;
    let v2 = match (cover.sets[0].contains(&y), cover.sets[1].contains(&y)) {
        (true, true) => {
            return Err(Error::Invariant(
                "both clubs contain y, so r is within distance 3 of y".into(),
            ))
        }
        (true, false) => &cover.sets[0],
        (false, true) => &cover.sets[1],
        (false, false) => unreachable!("valid cover covers y"),
    };
    let f = lg.source_formula()?;
    let mut values = Vec::with_capacity(f.num_vars);
    for i in 0..f.num_vars {
        let t = v2.contains(&lg.v(XT1(i))?);
        let fv = v2.contains(&lg.v(XF(i))?);
        match (t, fv) {
            (true, false) => values.push(true),
            (false, true) => values.push(false),
            _ => {
                return Err(Error::Invariant(format!(
                    "exactly one of xt1:{0}, xf:{0} must share a club with y",
                    i + 1
                )))
            }
        }
    }
    let a = Assignment::new(values);
    if !f.is_double_satisfied_by(&a)? {
        return Err(Error::Invariant(
            "extracted assignment does not double-satisfy the source".into(),
        ));
    }
    Ok(a)
}

// ---------------------------------------------------------------------------
// clique partition -> 3-club cover (pendants)

/// Vertices: `U(i)` mirroring the source, then one `Pendant(i)` per source
/// vertex attached to `U(i)`.
pub fn reduce_cp_to_cover3_pendant(gp: &Graph) -> LabeledGraph {
    use VertexLabel::*;
    let n = gp.n();
    let labels: Vec<VertexLabel> = (0..n).map(U).chain((0..n).map(Pendant)).collect();
    let mut edges: BTreeSet<_> = (0..n).map(|i| (U(i), Pendant(i))).collect();
    edges.extend(gp.edges().map(|(i, j)| (U(i), U(j))));
    assemble(
        labels,
        edges,
        Construction::CliquePartitionToCover3Pendant,
        digest_graph(gp),
    )
}

/// One 3-club per part: the part's `U` vertices with their pendants.
pub fn map_cliques_to_clubs3(partition: &CliquePartition, lg: &LabeledGraph) -> Result<ClubCover> {
    use VertexLabel::*;
    lg.expect_construction(Construction::CliquePartitionToCover3Pendant)?;
    check_partition(partition, &lg.source_graph()?)?;
    let sets = partition
        .parts
        .iter()
        .map(|part| lg.set_of(part.iter().flat_map(|&i| [U(i), Pendant(i)])))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClubCover::new(3, sets))
}

/// Reads a clique partition off a 3-club cover of the pendant image: each
/// club contributes the sources of its pendant members.
pub fn map_clubs3_to_cliques(
    cover: &ClubCover,
    lg: &LabeledGraph,
    gp: &Graph,
) -> Result<CliquePartition> {
    lg.expect_construction(Construction::CliquePartitionToCover3Pendant)?;
    check_source_digest(lg, digest_graph(gp))?;
    require_valid_cover(&lg.graph, cover, 3)?;
    let sets = source_sets(cover, lg, |l| match l {
        VertexLabel::Pendant(i) => Some(i),
        _ => None,
    });
    for set in &sets {
        if !gp.is_clique(set)? {
            return Err(Error::Invariant(format!(
                "club maps to non-clique {set:?}; two pendants in a 3-club need adjacent anchors"
            )));
        }
    }
    disjointify(sets, gp.n())
}

// ---------------------------------------------------------------------------
// structural checks

/// Outcome of one structural property check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl LemmaCheck {
    fn new(name: &str, holds: bool, detail: impl Into<String>) -> Self {
        LemmaCheck {
            name: name.to_string(),
            holds,
            detail: detail.into(),
        }
    }
}

/// Runs every structural property of the construction that produced `lg`.
pub fn check_lemmas(lg: &LabeledGraph) -> Vec<LemmaCheck> {
    let mut out = vec![match lg.check_structure() {
        Ok(()) => LemmaCheck::new("edge rules", true, "graph matches its rebuilt construction"),
        Err(e) => LemmaCheck::new("edge rules", false, e.to_string()),
    }];
    match lg.construction {
        Construction::CliquePartitionToCover2 => check_cover2_lemmas(lg, &mut out),
        Construction::DoubleSatToCover32 => check_cover32_lemmas(lg, &mut out),
        Construction::CliquePartitionToCover3Pendant => check_pendant_lemmas(lg, &mut out),
    }
    out
}

/// `d(W(i), W(j)) = 2` for source edges, `>= 3` otherwise.
pub fn cover2_distance_law(lg: &LabeledGraph) -> Result<std::result::Result<(), String>> {
    use VertexLabel::*;
    let gp = lg.source_graph()?;
    for i in 0..gp.n() {
        let dist = lg.graph.bfs_distances(lg.v(W(i))?)?;
        for j in (0..gp.n()).filter(|&j| j != i) {
            let d = dist[lg.v(W(j))?];
            let ok = if gp.has_edge(i, j) {
                d == Dist::Finite(2)
            } else {
                !d.within(2)
            };
            if !ok {
                return Ok(Err(format!(
                    "d(w:{}, w:{}) = {d}, source adjacency {}",
                    i + 1,
                    j + 1,
                    gp.has_edge(i, j)
                )));
            }
        }
    }
    Ok(Ok(()))
}

fn check_cover2_lemmas(lg: &LabeledGraph, out: &mut Vec<LemmaCheck>) {
    let Ok(gp) = lg.source_graph() else {
        out.push(LemmaCheck::new(
            "source",
            false,
            "cannot recover source graph",
        ));
        return;
    };
    let expected = gp.n() + gp.edge_count();
    out.push(LemmaCheck::new(
        "vertex count |V| = |Vp| + |Ep|",
        lg.graph.n() == expected,
        format!("{} vs {expected}", lg.graph.n()),
    ));
    out.push(match cover2_distance_law(lg) {
        Ok(Ok(())) => LemmaCheck::new("distance law", true, "all W pairs"),
        Ok(Err(e)) => LemmaCheck::new("distance law", false, e),
        Err(e) => LemmaCheck::new("distance law", false, e.to_string()),
    });
}

fn far(lg: &LabeledGraph, a: VertexLabel, b: VertexLabel) -> Result<(bool, Dist)> {
    let d = lg.graph.distance(lg.v(a)?, lg.v(b)?)?;
    Ok((!d.within(3), d))
}

/// Distance assertions of the two-3-club construction, one entry per named
/// property.
pub fn cover32_distance_checks(lg: &LabeledGraph) -> Result<Vec<LemmaCheck>> {
    use VertexLabel::*;
    let f = lg.source_formula()?;
    let (q, p) = (f.num_vars, f.clauses.len());
    let mut out = Vec::new();
    let pair = |name: &str, a, b| -> Result<LemmaCheck> {
        let (ok, d) = far(lg, a, b)?;
        Ok(LemmaCheck::new(name, ok, format!("distance {d}")))
    };
    out.push(pair("d(r', y) > 3", RPrime, Y)?);
    out.push(pair("d(r, y) > 3", R, Y)?);
    let mut worst = None;
    for j in 0..p {
        let (ok, d) = far(lg, R, VC(j))?;
        if !ok {
            worst = Some(format!("vc:{} at distance {d}", j + 1));
            break;
        }
    }
    out.push(LemmaCheck::new(
        "d(r, vc:j) > 3 for all j",
        worst.is_none(),
        worst.unwrap_or_else(|| format!("{p} clause vertices")),
    ));
    out.push(pair("d(r, r'_F) > 3", R, RPrimeF)?);
    out.push(pair("d(r, r'_T) > 3", R, RPrimeT)?);

    let ball: VertexSet = lg.graph.ball(lg.v(R)?, 2)?;
    let expected = lg.set_of([R, RPrime, RStarT, RT, RF])?;
    out.push(LemmaCheck::new(
        "N^2[r] = {r, r', r*_T, r_T, r_F}",
        ball == expected,
        format!("{} vertices within distance 2", ball.len()),
    ));

    let mut worst = None;
    for i in 0..q {
        let (ok, d) = far(lg, XT1(i), XF(i))?;
        if !ok {
            worst = Some(format!("x{} at distance {d}", i + 1));
            break;
        }
    }
    out.push(LemmaCheck::new(
        "d(xt1:i, xf:i) > 3 for all i",
        worst.is_none(),
        worst.unwrap_or_else(|| format!("{q} variables")),
    ));
    Ok(out)
}

fn check_cover32_lemmas(lg: &LabeledGraph, out: &mut Vec<LemmaCheck>) {
    let Ok(f) = lg.source_formula() else {
        out.push(LemmaCheck::new(
            "source",
            false,
            "cannot recover source formula",
        ));
        return;
    };
    let expected = 3 * f.num_vars + f.clauses.len() + 10;
    out.push(LemmaCheck::new(
        "vertex count |V| = 3q + p + 10",
        lg.graph.n() == expected,
        format!("{} vs {expected}", lg.graph.n()),
    ));
    match cover32_distance_checks(lg) {
        Ok(checks) => out.extend(checks),
        Err(e) => out.push(LemmaCheck::new("distances", false, e.to_string())),
    }
}

fn check_pendant_lemmas(lg: &LabeledGraph, out: &mut Vec<LemmaCheck>) {
    use VertexLabel::*;
    let n = lg.labels.iter().filter(|l| matches!(l, Pendant(_))).count();
    out.push(LemmaCheck::new(
        "vertex count |V| = 2|Vp|",
        lg.graph.n() == 2 * n,
        format!("{} vs {}", lg.graph.n(), 2 * n),
    ));
    let bad = (0..n).find(|&i| match (lg.vertex(Pendant(i)), lg.vertex(U(i))) {
        (Some(w), Some(u)) => lg.graph.neighbors(w) != [u],
        _ => true,
    });
    out.push(LemmaCheck::new(
        "N(pend:i) = {u:i}",
        bad.is_none(),
        bad.map_or_else(
            || format!("{n} pendants"),
            |i| format!("pend:{} fails", i + 1),
        ),
    ));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::validate_cover;
    use crate::gen::{gen_gnp, gen_random_5dsat};
    use crate::oracles::{
        double_sat_brute, has_h_cover, min_clique_partition_exact, min_s_club_cover_exact,
    };

    fn set(xs: &[usize]) -> VertexSet {
        xs.iter().copied().collect()
    }

    fn labels_of(lg: &LabeledGraph, set: &VertexSet) -> Vec<String> {
        set.iter().map(|&v| lg.label(v).to_string()).collect()
    }

    #[test]
    fn label_text_round_trips() {
        use VertexLabel::*;
        let all = [
            W(0),
            WPair(0, 3),
            R,
            RPrime,
            RT,
            RPrimeT,
            RStarT,
            RF,
            RPrimeF,
            XT1(1),
            XT2(1),
            XF(1),
            VC(0),
            Y,
            Y1,
            Y2,
            U(2),
            Pendant(2),
        ];
        let text: Vec<String> = all.iter().map(ToString::to_string).collect();
        assert_eq!(
            text.join(" "),
            "w:1 wp:1,4 r rp rt rpt rst rf rpf xt1:2 xt2:2 xf:2 vc:1 y y1 y2 u:3 pend:3"
        );
        for l in all {
            assert_eq!(l.to_string().parse::<VertexLabel>().unwrap(), l);
        }
        for bad in ["w:0", "wp:2,1", "q", "xt1:", "vc:x"] {
            assert!(bad.parse::<VertexLabel>().is_err(), "{bad}");
        }
    }

    #[test]
    fn cover2_image_of_triangle() {
        let lg = reduce_cp_to_cover2(&Graph::complete(3));
        assert_eq!(lg.graph.n(), 6);
        assert_eq!(lg.graph.edge_count(), 9);
        assert_eq!(
            lg.labels()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>(),
            ["w:1", "w:2", "w:3", "wp:1,2", "wp:1,3", "wp:2,3"]
        );
        assert_eq!(lg.graph.diameter(), Dist::Finite(2));
        lg.check_structure().unwrap();
    }

    #[test]
    fn cover2_image_of_edge_and_edgeless() {
        let lg = reduce_cp_to_cover2(&Graph::path(2));
        // w1 - w12 - w2
        assert_eq!(lg.graph, Graph::from_edges(3, &[(0, 2), (1, 2)]).unwrap());
        let lg = reduce_cp_to_cover2(&Graph::empty(4));
        assert_eq!((lg.graph.n(), lg.graph.edge_count()), (4, 0));
    }

    #[test]
    fn cover2_forward_mapping() {
        let k3 = Graph::complete(3);
        let lg = reduce_cp_to_cover2(&k3);
        let one = CliquePartition {
            parts: vec![k3.vertices()],
        };
        let c = map_cliques_to_clubs2(&one, &lg).unwrap();
        assert_eq!(c.sets, vec![lg.graph.vertices()]);
        assert!(validate_cover(&lg.graph, &c).is_empty());

        let edge = Graph::path(2);
        let lg = reduce_cp_to_cover2(&edge);
        let c = map_cliques_to_clubs2(
            &CliquePartition {
                parts: vec![set(&[0, 1])],
            },
            &lg,
        )
        .unwrap();
        assert_eq!(labels_of(&lg, &c.sets[0]), ["w:1", "w:2", "wp:1,2"]);

        // singletons on K3: w1 with both its pairs, w2 with wp:2,3, w3 alone
        let lg = reduce_cp_to_cover2(&k3);
        let singles = CliquePartition {
            parts: vec![set(&[0]), set(&[1]), set(&[2])],
        };
        let c = map_cliques_to_clubs2(&singles, &lg).unwrap();
        let text: Vec<Vec<String>> = c.sets.iter().map(|s| labels_of(&lg, s)).collect();
        assert_eq!(
            text,
            vec![
                vec!["w:1", "wp:1,2", "wp:1,3"],
                vec!["w:2", "wp:2,3"],
                vec!["w:3"]
            ]
        );
        assert!(validate_cover(&lg.graph, &c).is_empty());
    }

    #[test]
    fn cover2_rejects_bad_inputs() {
        let p3 = Graph::path(3);
        let lg = reduce_cp_to_cover2(&p3);
        let not_clique = CliquePartition {
            parts: vec![set(&[0, 2]), set(&[1])],
        };
        assert!(map_cliques_to_clubs2(&not_clique, &lg).is_err());
        let other = Graph::complete(3);
        let cover = ClubCover::new(2, vec![lg.graph.vertices()]);
        assert!(matches!(
            map_clubs2_to_cliques(&cover, &lg, &other),
            Err(Error::Provenance(_))
        ));
        let pendant = reduce_cp_to_cover3_pendant(&p3);
        assert!(matches!(
            map_cliques_to_clubs2(&not_clique, &pendant),
            Err(Error::Provenance(_))
        ));
    }

    #[test]
    fn cover2_backward_mapping() {
        let k3 = Graph::complete(3);
        let lg = reduce_cp_to_cover2(&k3);
        let cover = ClubCover::new(2, vec![lg.graph.vertices()]);
        let p = map_clubs2_to_cliques(&cover, &lg, &k3).unwrap();
        assert_eq!(p.parts, vec![k3.vertices()]);
    }

    #[test]
    fn cover2_round_trips_small_graphs() {
        for seed in 0..60 {
            let gp = gen_gnp(1 + seed as usize % 6, 0.5, seed).unwrap();
            let lg = reduce_cp_to_cover2(&gp);
            assert!(cover2_distance_law(&lg).unwrap().is_ok());
            let opt = min_clique_partition_exact(&gp).unwrap();
            let clubs = map_cliques_to_clubs2(&opt, &lg).unwrap();
            assert!(validate_cover(&lg.graph, &clubs).is_empty());
            let exact = min_s_club_cover_exact(&lg.graph, 2).unwrap();
            assert_eq!(exact.len(), opt.len(), "seed {seed}");
            let back = map_clubs2_to_cliques(&exact, &lg, &gp).unwrap();
            back.check(&gp).unwrap();
            assert!(back.len() <= exact.len());
            if opt.len() <= 3 {
                let w = has_h_cover(&lg.graph, 2, 3).unwrap().unwrap();
                assert!(map_clubs2_to_cliques(&w, &lg, &gp).unwrap().len() <= 3);
            }
        }
    }

    fn sample_dsat() -> FiveDSatInstance {
        let f = CnfFormula::from_dimacs(
            5,
            &[&[1, 2, 3, -4, -5], &[-1, -2, -3, 4, 5], &[1, -2, 3, -4, 5]],
        )
        .unwrap();
        prepare_5dsat(&f).unwrap()
    }

    #[test]
    fn cover32_vertex_count_and_order() {
        let inst = sample_dsat();
        let lg = reduce_5dsat_to_cover3(&inst).unwrap();
        assert_eq!(lg.graph.n(), 3 * 5 + 3 + 10);
        let text: Vec<String> = lg
            .labels()
            .iter()
            .take(10)
            .map(ToString::to_string)
            .collect();
        assert_eq!(
            text,
            ["r", "rp", "rt", "rpt", "rst", "rf", "rpf", "xt1:1", "xt2:1", "xf:1"]
        );
        assert_eq!(lg.label(lg.graph.n() - 1), VertexLabel::Y2);
        lg.check_structure().unwrap();
        assert_eq!(lg.source_formula().unwrap().clauses.len(), 3);

        let f = CnfFormula::from_dimacs(5, &[&[1, 2, 3, 4, -5], &[-1, -2, -3, -4, 5]]).unwrap();
        let lg = reduce_5dsat_to_cover3(&prepare_5dsat(&f).unwrap()).unwrap();
        assert_eq!(lg.graph.n(), 27);
    }

    #[test]
    fn cover32_structural_lemmas() {
        let lg = reduce_5dsat_to_cover3(&sample_dsat()).unwrap();
        for check in check_lemmas(&lg) {
            assert!(check.holds, "{check:?}");
        }
    }

    #[test]
    fn cover32_mappings() {
        let inst = sample_dsat();
        let lg = reduce_5dsat_to_cover3(&inst).unwrap();
        let a = double_sat_brute(inst.formula()).unwrap().unwrap();
        let cover = map_assignment_to_clubs3(&inst, &a, &lg).unwrap();
        assert_eq!(cover.len(), 2);
        assert!(validate_cover(&lg.graph, &cover).is_empty());
        let r = lg.vertex(VertexLabel::R).unwrap();
        let y1 = lg.vertex(VertexLabel::Y1).unwrap();
        assert!(cover.sets[0].contains(&r) && cover.sets[1].contains(&y1));
        for i in 0..5 {
            let t = cover.sets[1].contains(&lg.vertex(VertexLabel::XT1(i)).unwrap());
            let f = cover.sets[1].contains(&lg.vertex(VertexLabel::XF(i)).unwrap());
            assert!(t ^ f);
        }
        let back = map_clubs3_to_assignment(&cover, &lg).unwrap();
        assert_eq!(back, a);

        let w = has_h_cover(&lg.graph, 3, 2).unwrap().unwrap();
        let b = map_clubs3_to_assignment(&w, &lg).unwrap();
        assert!(inst.formula().is_double_satisfied_by(&b).unwrap());

        let bad = Assignment::all(5, true);
        assert!(map_assignment_to_clubs3(&inst, &bad, &lg).is_err());
    }

    #[test]
    fn prepare_reports_failed_assumptions() {
        let one_sided = CnfFormula::from_dimacs(5, &[&[1, 2, 3, 4, -5]]).unwrap();
        assert!(matches!(
            prepare_5dsat(&one_sided),
            Err(Error::Precondition(_))
        ));
        let short = CnfFormula::from_dimacs(4, &[&[1, 2, -3, -4], &[-1, -2, 3, 4]]).unwrap();
        assert!(matches!(prepare_5dsat(&short), Err(Error::Precondition(_))));
    }

    #[test]
    fn pendant_image_examples() {
        let lg = reduce_cp_to_cover3_pendant(&Graph::path(2));
        assert_eq!((lg.graph.n(), lg.graph.edge_count()), (4, 3));
        assert_eq!(lg.graph.diameter(), Dist::Finite(3));
        let lg1 = reduce_cp_to_cover3_pendant(&Graph::empty(1));
        assert_eq!(lg1.graph, Graph::path(2));

        let part = CliquePartition {
            parts: vec![set(&[0, 1])],
        };
        let c = map_cliques_to_clubs3(&part, &lg).unwrap();
        assert_eq!(c.sets, vec![lg.graph.vertices()]);
        let back = map_clubs3_to_cliques(&c, &lg, &Graph::path(2)).unwrap();
        assert_eq!(back.parts, part.parts);

        let single = map_cliques_to_clubs3(
            &CliquePartition {
                parts: vec![set(&[0])],
            },
            &lg1,
        )
        .unwrap();
        assert_eq!(labels_of(&lg1, &single.sets[0]), ["u:1", "pend:1"]);
        for check in check_lemmas(&lg) {
            assert!(check.holds, "{check:?}");
        }
    }

    #[test]
    fn pendant_c5() {
        let c5 = Graph::cycle(5);
        let lg = reduce_cp_to_cover3_pendant(&c5);
        let opt = min_clique_partition_exact(&c5).unwrap();
        let clubs = map_cliques_to_clubs3(&opt, &lg).unwrap();
        assert_eq!(clubs.len(), 3);
        assert!(validate_cover(&lg.graph, &clubs).is_empty());
        let exact = min_s_club_cover_exact(&lg.graph, 3).unwrap();
        assert_eq!(exact.len(), 3);
        let back = map_clubs3_to_cliques(&exact, &lg, &c5).unwrap();
        back.check(&c5).unwrap();
        assert_eq!(back.len(), 3);
    }

    #[test]
    fn generated_dsat_instances_pass_lemmas() {
        for seed in 0..20 {
            let f = gen_random_5dsat(5 + seed as usize % 2, 3 + seed as usize % 2, seed).unwrap();
            let inst = prepare_5dsat(&f).unwrap();
            let lg = reduce_5dsat_to_cover3(&inst).unwrap();
            for check in check_lemmas(&lg) {
                assert!(check.holds, "seed {seed}: {check:?}");
            }
        }
    }
}
