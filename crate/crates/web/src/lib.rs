//! Browser bindings for the demo page in `www/`.
//!
//! Each export takes and returns plain strings (graph text in, JSON out) so
//! the page needs no glue beyond `wasm-bindgen`. The `*_json` functions hold
//! the logic and are what the native tests exercise.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use clubcover::cover::{
    dominating_set_size_bound, greedy_club_cover, greedy_domination_factor, greedy_factor_bound,
    proof_factor_bound, validate_cover,
};
use clubcover::gen::gen_gnp;
use clubcover::io::{emit_graph, parse_graph};
use clubcover::oracles::min_s_club_cover_exact;
use clubcover::reductions::{reduce_cp_to_cover2, reduce_cp_to_cover3_pendant};
use clubcover::Graph;

/// Largest graph the page will solve exactly; keeps the tab responsive.
pub const DEMO_EXACT_MAX_N: usize = 24;

#[derive(Serialize)]
struct GraphView {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl GraphView {
    fn of(g: &Graph) -> Self {
        GraphView {
            n: g.n(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

#[derive(Serialize)]
struct CoverView {
    graph: GraphView,
    sets: Vec<Vec<usize>>,
    centers: Vec<usize>,
    feasible: bool,
    exact: Option<usize>,
    bound: f64,
}

#[derive(Serialize)]
struct ImageView {
    construction: &'static str,
    source: GraphView,
    image: GraphView,
    labels: Vec<String>,
    text: String,
}

#[derive(Serialize)]
struct Bounds {
    n: usize,
    greedy_factor: f64,
    proof_factor: f64,
    dominating_set_size: f64,
    domination_factor: f64,
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

/// Greedy 2-club cover of a graph given in text form, with the exact
/// optimum when the graph is small enough. Vertices are 0-based in the JSON.
pub fn greedy_cover_json(graph_text: &str) -> Result<String, String> {
    let g = parse_graph(graph_text).map_err(|e| e.to_string())?;
    let cover = greedy_club_cover(&g);
    let exact = if g.n() <= DEMO_EXACT_MAX_N {
        Some(
            min_s_club_cover_exact(&g, 2)
                .map_err(|e| e.to_string())?
                .len(),
        )
    } else {
        None
    };
    Ok(to_json(&CoverView {
        graph: GraphView::of(&g),
        feasible: validate_cover(&g, &cover).is_empty(),
        sets: cover
            .sets
            .iter()
            .map(|s| s.iter().copied().collect())
            .collect(),
        centers: cover.centers.unwrap_or_default(),
        exact,
        bound: greedy_factor_bound(g.n()),
    }))
}

pub fn random_graph_text(n: usize, p: f64, seed: u64) -> Result<String, String> {
    gen_gnp(n, p, seed)
        .map(|g| emit_graph(&g))
        .map_err(|e| e.to_string())
}

/// Image of a graph under `cp-cover2` or `cp-cover3-pendant`.
pub fn reduction_image_json(construction: &str, graph_text: &str) -> Result<String, String> {
    let gp = parse_graph(graph_text).map_err(|e| e.to_string())?;
    let (name, lg) = match construction {
        "cp-cover2" => ("cp-cover2", reduce_cp_to_cover2(&gp)),
        "cp-cover3-pendant" => ("cp-cover3-pendant", reduce_cp_to_cover3_pendant(&gp)),
        other => return Err(format!("unknown construction {other:?}")),
    };
    Ok(to_json(&ImageView {
        construction: name,
        source: GraphView::of(&gp),
        image: GraphView::of(&lg.graph),
        labels: lg.labels().iter().map(ToString::to_string).collect(),
        text: emit_graph(&lg.graph),
    }))
}

pub fn bounds_json(n: usize) -> String {
    to_json(&Bounds {
        n,
        greedy_factor: greedy_factor_bound(n),
        proof_factor: proof_factor_bound(n),
        dominating_set_size: dominating_set_size_bound(n),
        domination_factor: greedy_domination_factor(n),
    })
}

#[wasm_bindgen]
pub fn greedy_cover(graph_text: &str) -> Result<String, JsError> {
    greedy_cover_json(graph_text).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<String, JsError> {
    random_graph_text(n, p, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn reduction_image(construction: &str, graph_text: &str) -> Result<String, JsError> {
    reduction_image_json(construction, graph_text).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn bounds(n: usize) -> String {
    bounds_json(n)
}
