use proptest::prelude::*;

use clubcover::cover::validate_cover;
use clubcover::gen::{gen_gnp, gen_random_5dsat};
use clubcover::io::{emit_cover, emit_graph, emit_labels, load_labeled_graph, parse_cover};
use clubcover::oracles::{
    double_sat_brute, has_h_cover, min_clique_partition_exact, min_s_club_cover_exact,
};
use clubcover::reductions::{
    check_lemmas, map_assignment_to_clubs3, map_cliques_to_clubs2, map_cliques_to_clubs3,
    map_clubs2_to_cliques, map_clubs3_to_assignment, map_clubs3_to_cliques, prepare_5dsat,
    reduce_5dsat_to_cover3, reduce_cp_to_cover2, reduce_cp_to_cover3_pendant, LabeledGraph,
};
use clubcover::{Error, Graph};

fn without_last_edge(lg: &LabeledGraph) -> LabeledGraph {
    let edges: Vec<_> = lg.graph.edges().collect();
    let g = Graph::from_edges(lg.graph.n(), &edges[..edges.len() - 1]).unwrap();
    LabeledGraph::new(
        g,
        lg.labels().to_vec(),
        lg.construction,
        lg.source_digest.clone(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cover2_round_trip(n in 1usize..7, p in 0.0f64..1.0, seed in any::<u64>()) {
        let gp = gen_gnp(n, p, seed).unwrap();
        let lg = reduce_cp_to_cover2(&gp);
        prop_assert!(check_lemmas(&lg).iter().all(|c| c.holds));

        let opt = min_clique_partition_exact(&gp).unwrap();
        let clubs = map_cliques_to_clubs2(&opt, &lg).unwrap();
        prop_assert!(validate_cover(&lg.graph, &clubs).is_empty());
        let back = map_clubs2_to_cliques(&clubs, &lg, &gp).unwrap();
        prop_assert!(back.check(&gp).is_ok());
        prop_assert_eq!(back.len(), opt.len());
    }

    #[test]
    fn pendant_round_trip(n in 1usize..8, p in 0.0f64..1.0, seed in any::<u64>()) {
        let gp = gen_gnp(n, p, seed).unwrap();
        let lg = reduce_cp_to_cover3_pendant(&gp);
        prop_assert!(check_lemmas(&lg).iter().all(|c| c.holds));
        let cover = min_s_club_cover_exact(&lg.graph, 3).unwrap();
        let back = map_clubs3_to_cliques(&cover, &lg, &gp).unwrap();
        prop_assert!(back.check(&gp).is_ok());
        let fwd = map_cliques_to_clubs3(&back, &lg).unwrap();
        prop_assert!(validate_cover(&lg.graph, &fwd).is_empty());
        prop_assert_eq!(fwd.len(), cover.len());
    }

    #[test]
    fn labeled_graphs_survive_text(n in 1usize..8, p in 0.0f64..1.0, seed in any::<u64>()) {
        let gp = gen_gnp(n, p, seed).unwrap();
        for lg in [reduce_cp_to_cover2(&gp), reduce_cp_to_cover3_pendant(&gp)] {
            let back = load_labeled_graph(&emit_graph(&lg.graph), &emit_labels(&lg)).unwrap();
            prop_assert_eq!(&back, &lg);
            prop_assert_eq!(back.source_graph().unwrap(), gp.clone());
        }
    }

    #[test]
    fn covers_survive_json(n in 1usize..20, p in 0.0f64..1.0, seed in any::<u64>()) {
        let g = gen_gnp(n, p, seed).unwrap();
        let c = clubcover::greedy_club_cover(&g);
        prop_assert_eq!(parse_cover(&emit_cover(&c)).unwrap(), c);
    }
}

#[test]
fn dsat_round_trips() {
    for seed in 0..15 {
        let f = gen_random_5dsat(5, 2 + seed as usize % 2, seed).unwrap();
        let inst = prepare_5dsat(&f).unwrap();
        let lg = reduce_5dsat_to_cover3(&inst).unwrap();
        let back = load_labeled_graph(&emit_graph(&lg.graph), &emit_labels(&lg)).unwrap();
        assert_eq!(back, lg);
        match (
            double_sat_brute(&f).unwrap(),
            has_h_cover(&lg.graph, 3, 2).unwrap(),
        ) {
            (Some(a), Some(w)) => {
                let c = map_assignment_to_clubs3(&inst, &a, &lg).unwrap();
                assert_eq!(map_clubs3_to_assignment(&c, &lg).unwrap(), a);
                let b = map_clubs3_to_assignment(&w, &lg).unwrap();
                assert!(f.is_double_satisfied_by(&b).unwrap());
            }
            (None, None) => {}
            (a, w) => panic!("seed {seed}: assignment {a:?}, cover {w:?}"),
        }
    }
}

#[test]
fn tampered_images_fail_checks() {
    let gp = Graph::cycle(4);
    for lg in [reduce_cp_to_cover2(&gp), reduce_cp_to_cover3_pendant(&gp)] {
        let bad = without_last_edge(&lg);
        let checks = check_lemmas(&bad);
        assert!(checks.iter().any(|c| !c.holds), "{checks:?}");
    }
    let f = gen_random_5dsat(5, 2, 0).unwrap();
    let lg = reduce_5dsat_to_cover3(&prepare_5dsat(&f).unwrap()).unwrap();
    assert!(check_lemmas(&without_last_edge(&lg))
        .iter()
        .any(|c| !c.holds));
}

#[test]
fn mismatched_sources_are_provenance_errors() {
    let lg = reduce_cp_to_cover3_pendant(&Graph::path(3));
    let cover = min_s_club_cover_exact(&lg.graph, 3).unwrap();
    let err = map_clubs3_to_cliques(&cover, &lg, &Graph::complete(3)).unwrap_err();
    assert!(matches!(err, Error::Provenance(_)));
}
