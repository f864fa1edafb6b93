//! Greedy 2-club cover, cover validation and the approximation bounds of the
//! greedy algorithm.
//!
//! The greedy picks, among *all* vertices, one whose closed neighborhood
//! contains the most uncovered vertices, adds that neighborhood as a club and
//! repeats until everything is covered. Ties go to the smallest vertex id.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Dist, Graph, VertexSet};

/// A collection of s-clubs meant to cover a host graph. Sets may overlap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClubCover {
    pub s: usize,
    pub sets: Vec<VertexSet>,
    /// Center of each set when every set is a closed neighborhood.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub centers: Option<Vec<usize>>,
}

impl ClubCover {
    pub fn new(s: usize, sets: Vec<VertexSet>) -> Self {
        ClubCover {
            s,
            sets,
            centers: None,
        }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// One reason a [`ClubCover`] is not a feasible cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    EmptySet {
        set: usize,
    },
    OutOfRange {
        set: usize,
        vertex: usize,
    },
    /// `u` and `w` are farther than `s` apart inside the set.
    NotClub {
        set: usize,
        u: usize,
        w: usize,
        distance: Dist,
    },
    Uncovered {
        vertex: usize,
    },
    CenterMismatch {
        set: usize,
        center: usize,
    },
    CenterCount {
        sets: usize,
        centers: usize,
    },
    BadParameter {
        s: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptySet { set } => write!(f, "set {set} is empty"),
            Violation::OutOfRange { set, vertex } => {
                write!(f, "set {set} contains out-of-range vertex {vertex}")
            }
            Violation::NotClub {
                set,
                u,
                w,
                distance,
            } => write!(
                f,
                "set {set} is not a club: vertices {u} and {w} are at induced distance {distance}"
            ),
            Violation::Uncovered { vertex } => write!(f, "vertex {vertex} is not covered"),
            Violation::CenterMismatch { set, center } => {
                write!(
                    f,
                    "set {set} is not the closed neighborhood of center {center}"
                )
            }
            Violation::CenterCount { sets, centers } => {
                write!(f, "{sets} sets but {centers} centers")
            }
            Violation::BadParameter { s } => write!(f, "club parameter s = {s} must be >= 1"),
        }
    }
}

/// Checks that `cover` is a feasible s-club cover of `g`. An empty report
/// means feasible.
pub fn validate_cover(g: &Graph, cover: &ClubCover) -> Vec<Violation> {
    let mut out = Vec::new();
    if cover.s == 0 {
        out.push(Violation::BadParameter { s: 0 });
    }
    let mut covered = vec![false; g.n()];
    for (k, set) in cover.sets.iter().enumerate() {
        if set.is_empty() {
            out.push(Violation::EmptySet { set: k });
            continue;
        }
        if let Some(&v) = set.iter().find(|&&v| v >= g.n()) {
            out.push(Violation::OutOfRange { set: k, vertex: v });
            continue;
        }
        for &v in set {
            covered[v] = true;
        }
        if cover.s > 0 {
            if let Some((u, w, distance)) = g.far_pair(set, cover.s).expect("range checked") {
                out.push(Violation::NotClub {
                    set: k,
                    u,
                    w,
                    distance,
                });
            }
        }
    }
    out.extend(
        covered
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(vertex, _)| Violation::Uncovered { vertex }),
    );
    if let Some(centers) = &cover.centers {
        if centers.len() != cover.sets.len() {
            out.push(Violation::CenterCount {
                sets: cover.sets.len(),
                centers: centers.len(),
            });
        } else {
            for (k, (&c, set)) in centers.iter().zip(&cover.sets).enumerate() {
                if g.closed_neighborhood(c).ok().as_ref() != Some(set) {
                    out.push(Violation::CenterMismatch { set: k, center: c });
                }
            }
        }
    }
    out
}

/// Greedy 2-club cover by closed neighborhoods. The empty graph yields an
/// empty cover.
pub fn greedy_club_cover(g: &Graph) -> ClubCover {
    let n = g.n();
    let mut uncovered = vec![true; n];
    let mut remaining = n;
    // gain[v] = |N[v] ∩ uncovered|
    let mut gain: Vec<usize> = (0..n).map(|v| g.degree(v) + 1).collect();
    let mut sets = Vec::new();
    let mut centers = Vec::new();

    while remaining > 0 {
        // first maximum wins, so ties go to the smallest id
        let (center, _) =
            gain.iter().enumerate().fold(
                (0, 0),
                |best, (v, &gv)| if gv > best.1 { (v, gv) } else { best },
            );
        let club = g.closed_neighborhood(center).expect("center in range");
        for &u in &club {
            if uncovered[u] {
                uncovered[u] = false;
                remaining -= 1;
                gain[u] -= 1;
                for &w in g.neighbors(u) {
                    gain[w] -= 1;
                }
            }
        }
        sets.push(club);
        centers.push(center);
    }

    ClubCover {
        s: 2,
        sets,
        centers: Some(centers),
    }
}

/// Closed neighborhoods of a dominating set, as a 2-club cover.
pub fn cover_from_dominating_set(g: &Graph, dominating: &VertexSet) -> Result<ClubCover> {
    if let Some(v) = g.first_undominated(dominating)? {
        return Err(Error::NotDominating(v));
    }
    let centers: Vec<usize> = dominating.iter().copied().collect();
    let sets = centers
        .iter()
        .map(|&c| g.closed_neighborhood(c))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClubCover {
        s: 2,
        sets,
        centers: Some(centers),
    })
}

/// Stated guarantee of the greedy: `2 sqrt(n) log2(n)^{3/2}`.
pub fn greedy_factor_bound(n: usize) -> f64 {
    let n = n as f64;
    2.0 * n.sqrt() * n.log2().powf(1.5)
}

/// The tighter factor the analysis actually derives:
/// `2 sqrt(n) sqrt(ln n) log2(n)`. Never exceeds [`greedy_factor_bound`].
pub fn proof_factor_bound(n: usize) -> f64 {
    let n = n as f64;
    2.0 * n.sqrt() * n.ln().sqrt() * n.log2()
}

/// Upper bound `1 + sqrt(n + ln n)` on the domination number of any 2-club
/// with `n` vertices.
pub fn dominating_set_size_bound(n: usize) -> f64 {
    let n = n as f64;
    1.0 + (n + n.ln()).sqrt()
}

/// Classic greedy set-cover guarantee `ln n + 1` for the dominating set
/// formed by the greedy centers.
pub fn greedy_domination_factor(n: usize) -> f64 {
    (n as f64).ln() + 1.0
}
