//! Text formats. Every vertex and variable number in a file is 1-based;
//! everything in memory is 0-based.
//!
//! * graphs: `p edge n m` header then `e u v` lines, `c` comments
//! * formulas: DIMACS CNF (`p cnf q p`, clauses terminated by `0`)
//! * covers: JSON `{"s": 2, "sets": [[1,2],[2,3]], "centers": [2,3]}`
//! * clique partitions: JSON `{"parts": [[1,2],[3]]}`
//! * assignments: a single `v 1 -2 3 0` line
//! * labels: `index<TAB>label` per vertex, with optional `# construction:`
//!   and `# source:` header lines

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cover::ClubCover;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::oracles::CliquePartition;
use crate::reductions::{Construction, LabeledGraph, VertexLabel};
use crate::sat::{Assignment, CnfFormula, Literal};

/// Hex characters kept from a SHA-256 digest.
pub const DIGEST_HEX_LEN: usize = 16;

pub fn digest_text(text: &str) -> String {
    let hash = Sha256::digest(text.as_bytes());
    let mut hex = String::with_capacity(64);
    for b in hash.iter() {
        write!(hex, "{b:02x}").unwrap();
    }
    hex.truncate(DIGEST_HEX_LEN);
    hex
}

pub fn digest_graph(g: &Graph) -> String {
    digest_text(&emit_graph(g))
}

/// Digest of a formula up to literal order within clauses.
pub fn digest_formula(f: &CnfFormula) -> String {
    let mut canon = f.clone();
    for c in &mut canon.clauses {
        c.sort_by_key(|l| (l.var, !l.positive));
    }
    digest_text(&emit_cnf(&canon))
}

fn data_lines(text: &str, comment: char) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(move |(_, l)| !l.is_empty() && !l.starts_with(comment))
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("bad {what} {tok:?}")))
}

// ---------------------------------------------------------------------------
// graphs

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = BTreeSet::new();
    let mut last_line = 0;
    for (line, content) in data_lines(text, 'c') {
        last_line = line;
        let mut toks = content.split_whitespace();
        match toks.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(Error::parse(line, "second header"));
                }
                if toks.next() != Some("edge") {
                    return Err(Error::parse(line, "expected `p edge n m`"));
                }
                let n = parse_num(toks.next(), line, "vertex count")?;
                let m = parse_num(toks.next(), line, "edge count")?;
                header = Some((n, m));
            }
            Some("e") => {
                let (n, _) =
                    header.ok_or_else(|| Error::parse(line, "edge before `p edge` header"))?;
                let u: usize = parse_num(toks.next(), line, "endpoint")?;
                let v: usize = parse_num(toks.next(), line, "endpoint")?;
                for x in [u, v] {
                    if x == 0 || x > n {
                        return Err(Error::parse(line, format!("vertex {x} not in 1..={n}")));
                    }
                }
                if u == v {
                    return Err(Error::parse(line, format!("self-loop on {u}")));
                }
                let e = (u.min(v) - 1, u.max(v) - 1);
                if !edges.insert(e) {
                    return Err(Error::parse(line, format!("duplicate edge {u} {v}")));
                }
            }
            Some(t) => return Err(Error::parse(line, format!("unexpected token {t:?}"))),
            None => unreachable!("blank lines are skipped"),
        }
        if toks.next().is_some() {
            return Err(Error::parse(line, "trailing tokens"));
        }
    }
    let (n, m) =
        header.ok_or_else(|| Error::parse(last_line.max(1), "missing `p edge n m` header"))?;
    if edges.len() != m {
        return Err(Error::parse(
            last_line.max(1),
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    Graph::from_edge_set(n, &edges)
}

/// Canonical text: header then edges `u < v` in lexicographic order.
pub fn emit_graph(g: &Graph) -> String {
    let mut s = format!("p edge {} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        writeln!(s, "e {} {}", u + 1, v + 1).unwrap();
    }
    s
}

// ---------------------------------------------------------------------------
// formulas

pub fn parse_cnf(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut last_line = 0;
    for (line, content) in data_lines(text, 'c') {
        last_line = line;
        if content.starts_with('%') {
            break;
        }
        if let Some(rest) = content.strip_prefix('p') {
            if header.is_some() {
                return Err(Error::parse(line, "second header"));
            }
            let mut toks = rest.split_whitespace();
            if toks.next() != Some("cnf") {
                return Err(Error::parse(line, "expected `p cnf vars clauses`"));
            }
            let q = parse_num(toks.next(), line, "variable count")?;
            let p = parse_num(toks.next(), line, "clause count")?;
            header = Some((q, p));
            continue;
        }
        let (q, _) = header.ok_or_else(|| Error::parse(line, "clause before `p cnf` header"))?;
        for tok in content.split_whitespace() {
            let x: i64 = parse_num(Some(tok), line, "literal")?;
            if x == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            if x.unsigned_abs() as usize > q {
                return Err(Error::parse(
                    line,
                    format!("literal {x} exceeds {q} variables"),
                ));
            }
            current.push(Literal::from_dimacs(x)?);
        }
    }
    let (q, p) = header.ok_or_else(|| Error::parse(last_line.max(1), "missing `p cnf` header"))?;
    if !current.is_empty() {
        return Err(Error::parse(
            last_line,
            "last clause is not terminated by 0",
        ));
    }
    if clauses.len() != p {
        return Err(Error::parse(
            last_line.max(1),
            format!("header declares {p} clauses, found {}", clauses.len()),
        ));
    }
    CnfFormula::new(q, clauses)
}

pub fn emit_cnf(f: &CnfFormula) -> String {
    let mut s = format!("p cnf {} {}\n", f.num_vars, f.clauses.len());
    for c in &f.clauses {
        for l in c {
            write!(s, "{} ", l.to_dimacs()).unwrap();
        }
        s.push_str("0\n");
    }
    s
}

// ---------------------------------------------------------------------------
// assignments

pub fn parse_assignment(text: &str, num_vars: usize) -> Result<Assignment> {
    let mut values: Vec<Option<bool>> = vec![None; num_vars];
    let mut terminated = false;
    for (line, content) in data_lines(text, 'c') {
        let mut toks = content.split_whitespace();
        if toks.next() != Some("v") {
            return Err(Error::parse(line, "expected a `v ... 0` line"));
        }
        for tok in toks {
            if terminated {
                return Err(Error::parse(line, "literals after terminating 0"));
            }
            let x: i64 = parse_num(Some(tok), line, "literal")?;
            if x == 0 {
                terminated = true;
                continue;
            }
            let var = x.unsigned_abs() as usize;
            if var > num_vars {
                return Err(Error::parse(
                    line,
                    format!("variable {var} exceeds {num_vars}"),
                ));
            }
            if values[var - 1].replace(x > 0).is_some() {
                return Err(Error::parse(line, format!("variable {var} assigned twice")));
            }
        }
    }
    if !terminated {
        return Err(Error::parse(1, "assignment is not terminated by 0"));
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| Error::InvalidInput(format!("variable {} unassigned", i + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Assignment::new(values))
}

pub fn emit_assignment(a: &Assignment) -> String {
    let mut s = String::from("v");
    for (i, &b) in a.values().iter().enumerate() {
        let x = i as i64 + 1;
        write!(s, " {}", if b { x } else { -x }).unwrap();
    }
    s.push_str(" 0\n");
    s
}

// ---------------------------------------------------------------------------
// covers and partitions (JSON, 1-based)

#[derive(Serialize, Deserialize)]
struct CoverFile {
    s: usize,
    sets: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    centers: Option<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct PartitionFile {
    parts: Vec<Vec<usize>>,
}

fn json_err(e: serde_json::Error) -> Error {
    Error::parse(e.line(), e.to_string())
}

fn to_zero_based(xs: &[usize], what: &str) -> Result<VertexSet> {
    xs.iter()
        .map(|&x| {
            x.checked_sub(1).ok_or_else(|| {
                Error::InvalidInput(format!("{what} uses vertex 0; files are 1-indexed"))
            })
        })
        .collect()
}

fn to_one_based(set: &VertexSet) -> Vec<usize> {
    set.iter().map(|v| v + 1).collect()
}

pub fn parse_cover(text: &str) -> Result<ClubCover> {
    let file: CoverFile = serde_json::from_str(text).map_err(json_err)?;
    let sets = file
        .sets
        .iter()
        .map(|s| to_zero_based(s, "cover"))
        .collect::<Result<Vec<_>>>()?;
    let centers = file
        .centers
        .map(|cs| {
            cs.iter()
                .map(|&c| {
                    c.checked_sub(1).ok_or_else(|| {
                        Error::InvalidInput("centers use vertex 0; files are 1-indexed".into())
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    Ok(ClubCover {
        s: file.s,
        sets,
        centers,
    })
}

pub fn emit_cover(c: &ClubCover) -> String {
    let file = CoverFile {
        s: c.s,
        sets: c.sets.iter().map(to_one_based).collect(),
        centers: c
            .centers
            .as_ref()
            .map(|cs| cs.iter().map(|v| v + 1).collect()),
    };
    serde_json::to_string(&file).expect("plain data serializes") + "\n"
}

pub fn parse_partition(text: &str) -> Result<CliquePartition> {
    let file: PartitionFile = serde_json::from_str(text).map_err(json_err)?;
    let parts = file
        .parts
        .iter()
        .map(|p| to_zero_based(p, "partition"))
        .collect::<Result<Vec<_>>>()?;
    Ok(CliquePartition { parts })
}

pub fn emit_partition(p: &CliquePartition) -> String {
    let file = PartitionFile {
        parts: p.parts.iter().map(to_one_based).collect(),
    };
    serde_json::to_string(&file).expect("plain data serializes") + "\n"
}

// ---------------------------------------------------------------------------
// labels sidecar

pub fn emit_labels(lg: &LabeledGraph) -> String {
    let mut s = format!(
        "# construction: {}\n# source: {}\n",
        lg.construction, lg.source_digest
    );
    for (v, l) in lg.labels().iter().enumerate() {
        writeln!(s, "{}\t{l}", v + 1).unwrap();
    }
    s
}

/// Parsed labels file: labels in vertex order plus the optional header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelsFile {
    pub labels: Vec<VertexLabel>,
    pub construction: Option<Construction>,
    pub source_digest: Option<String>,
}

pub fn parse_labels(text: &str) -> Result<LabelsFile> {
    let mut out = LabelsFile {
        labels: Vec::new(),
        construction: None,
        source_digest: None,
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.trim();
        if content.is_empty() {
            continue;
        }
        if let Some(meta) = content.strip_prefix('#') {
            if let Some((key, value)) = meta.split_once(':') {
                match key.trim() {
                    "construction" => out.construction = Some(value.trim().parse()?),
                    "source" => out.source_digest = Some(value.trim().to_string()),
                    _ => {}
                }
            }
            continue;
        }
        let (idx, label) = content
            .split_once('\t')
            .ok_or_else(|| Error::parse(line, "expected `index<TAB>label`"))?;
        let idx: usize = parse_num(Some(idx.trim()), line, "index")?;
        if idx != out.labels.len() + 1 {
            return Err(Error::parse(
                line,
                format!("expected index {}, got {idx}", out.labels.len() + 1),
            ));
        }
        let label = label
            .trim()
            .parse()
            .map_err(|e: Error| Error::parse(line, e.to_string()))?;
        out.labels.push(label);
    }
    Ok(out)
}

/// Joins a graph file and its labels sidecar. A header in the sidecar must
/// agree with the labels; without one the construction is inferred and the
/// digest left empty.
pub fn load_labeled_graph(graph_text: &str, labels_text: &str) -> Result<LabeledGraph> {
    let g = parse_graph(graph_text)?;
    let file = parse_labels(labels_text)?;
    let construction = match (file.construction, Construction::infer(&file.labels)) {
        (Some(c), _) => c,
        (None, Some(c)) => c,
        (None, None) => return Err(Error::InvalidInput("labels file is empty".into())),
    };
    LabeledGraph::new(
        g,
        file.labels,
        construction,
        file.source_digest.unwrap_or_default(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::{reduce_cp_to_cover2, reduce_cp_to_cover3_pendant};
    use proptest::prelude::*;

    #[test]
    fn graph_round_trip_and_comments() {
        let text = "c a path\np edge 3 2\ne 2 1\n\ne 2 3\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g, Graph::path(3));
        assert_eq!(emit_graph(&g), "p edge 3 2\ne 1 2\ne 2 3\n");
        assert_eq!(parse_graph("p edge 0 0\n").unwrap().n(), 0);
    }

    #[test]
    fn graph_errors_carry_line_numbers() {
        let cases = [
            ("p edge 3 1\ne 1 1\n", 2, "self-loop"),
            ("p edge 3 2\ne 1 2\ne 2 1\n", 3, "duplicate"),
            ("p edge 3 1\ne 1 4\n", 2, "not in"),
            ("p edge 3 1\ne 0 1\n", 2, "not in"),
            ("p edge 3 2\ne 1 2\n", 2, "declares"),
            ("e 1 2\n", 1, "header"),
            ("c only\n", 1, "header"),
            ("p edge 3 1\ne 1 x\n", 2, "bad endpoint"),
        ];
        for (text, line, needle) in cases {
            match parse_graph(text) {
                Err(Error::Parse { line: l, msg }) => {
                    assert_eq!(l, line, "{text:?}");
                    assert!(msg.contains(needle), "{msg}");
                }
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn cnf_round_trip() {
        let text = "c x\np cnf 3 2\n1 -2 0\n2 3\n-1 0\n";
        let f = parse_cnf(text).unwrap();
        assert_eq!(
            f,
            CnfFormula::from_dimacs(3, &[&[1, -2], &[2, 3, -1]]).unwrap()
        );
        assert_eq!(emit_cnf(&f), "p cnf 3 2\n1 -2 0\n2 3 -1 0\n");
        assert_eq!(parse_cnf(&emit_cnf(&f)).unwrap(), f);
    }

    #[test]
    fn cnf_errors() {
        assert!(matches!(
            parse_cnf("p cnf 2 1\n1 -2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_cnf("p cnf 2 2\n1 -2 0\n").is_err());
        assert!(parse_cnf("p cnf 2 1\n1 3 0\n").is_err());
        assert!(parse_cnf("1 0\n").is_err());
    }

    #[test]
    fn digest_ignores_literal_order() {
        let a = CnfFormula::from_dimacs(3, &[&[1, -2, 3]]).unwrap();
        let b = CnfFormula::from_dimacs(3, &[&[3, 1, -2]]).unwrap();
        assert_eq!(digest_formula(&a), digest_formula(&b));
        let c = CnfFormula::from_dimacs(3, &[&[1, 2, 3]]).unwrap();
        assert_ne!(digest_formula(&a), digest_formula(&c));
        assert_eq!(digest_graph(&Graph::path(3)).len(), DIGEST_HEX_LEN);
    }

    #[test]
    fn assignment_round_trip() {
        let a = Assignment::new(vec![true, false, true]);
        assert_eq!(emit_assignment(&a), "v 1 -2 3 0\n");
        assert_eq!(parse_assignment("v 1 -2\nv 3 0\n", 3).unwrap(), a);
        assert!(parse_assignment("v 1 -2 0\n", 3).is_err());
        assert!(parse_assignment("v 1 -2 3\n", 3).is_err());
        assert!(parse_assignment("v 1 -1 2 3 0\n", 3).is_err());
    }

    #[test]
    fn cover_json_is_one_based() {
        let mut c = ClubCover::new(2, vec![[0, 1].into(), [1, 2].into()]);
        c.centers = Some(vec![0, 1]);
        let text = emit_cover(&c);
        assert_eq!(text, "{\"s\":2,\"sets\":[[1,2],[2,3]],\"centers\":[1,2]}\n");
        assert_eq!(parse_cover(&text).unwrap(), c);
        assert!(parse_cover("{\"s\":2,\"sets\":[[0,1]]}").is_err());
        let plain = parse_cover("{\"s\":3,\"sets\":[[1]]}").unwrap();
        assert_eq!(plain.centers, None);
    }

    #[test]
    fn partition_json_round_trip() {
        let p = CliquePartition {
            parts: vec![[0, 2].into(), [1].into()],
        };
        let text = emit_partition(&p);
        assert_eq!(text, "{\"parts\":[[1,3],[2]]}\n");
        assert_eq!(parse_partition(&text).unwrap(), p);
    }

    #[test]
    fn labels_round_trip() {
        let gp = Graph::path(3);
        for lg in [reduce_cp_to_cover2(&gp), reduce_cp_to_cover3_pendant(&gp)] {
            let text = emit_labels(&lg);
            let back = load_labeled_graph(&emit_graph(&lg.graph), &text).unwrap();
            assert_eq!(back, lg);
            // header-free sidecar still loads, with the construction inferred
            let bare: String = text
                .lines()
                .filter(|l| !l.starts_with('#'))
                .map(|l| format!("{l}\n"))
                .collect();
            let back = load_labeled_graph(&emit_graph(&lg.graph), &bare).unwrap();
            assert_eq!(back.construction, lg.construction);
        }
        assert!(parse_labels("2\tw:1\n").is_err());
        assert!(parse_labels("1\tbogus\n").is_err());
    }

    proptest! {
        #[test]
        fn graph_text_round_trips(n in 0usize..12, p in 0.0f64..1.0, seed in any::<u64>()) {
            let g = crate::gen::gen_gnp(n, p, seed).unwrap();
            let text = emit_graph(&g);
            prop_assert_eq!(parse_graph(&text).unwrap(), g);
        }
    }
}
