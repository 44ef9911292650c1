use crate::*;
use checkers::check_wra;

#[test]
fn graph_parsing_and_triangles() {
    let g = UndirectedGraph::from_edge_list("# a triangle\n1 2\n2 3\n1 3\n").unwrap();
    assert_eq!(g.num_nodes(), 3);
    assert_eq!(g.num_edges(), 3);
    assert!(g.has_triangle());
    let p = UndirectedGraph::from_edge_list("1 2\n2 3\n3 4\n").unwrap();
    assert!(!p.has_triangle());
    assert!(UndirectedGraph::from_edge_list("0 1\n").is_err());
    assert!(UndirectedGraph::from_edge_list("1\n").is_err());
}

#[test]
fn reduction_size_formula() {
    let g = UndirectedGraph::from_edge_list("1 2\n2 3\n1 3\n4 1\n").unwrap();
    let x = gen_triangle_reduction(&g);
    assert_eq!(x.num_events(), 3 * g.num_nodes() + 13 * g.num_edges());
}

#[test]
fn reduction_decides_triangles() {
    let tri = UndirectedGraph::from_edge_list("1 2\n2 3\n1 3\n").unwrap();
    assert!(!check_wra(&gen_triangle_reduction(&tri)).consistent);
    let path = UndirectedGraph::from_edge_list("1 2\n2 3\n3 4\n4 1\n").unwrap();
    assert!(check_wra(&gen_triangle_reduction(&path)).consistent);
}

#[test]
fn reduction_matches_brute_force_on_small_graphs() {
    // All graphs on 4 nodes (2^6 edge subsets).
    for mask in 0u32..(1 << 6) {
        let mut g = UndirectedGraph::new(4);
        let mut bit = 0;
        for u in 0..4 {
            for v in (u + 1)..4 {
                if mask & (1 << bit) != 0 {
                    g.add_edge(u, v);
                }
                bit += 1;
            }
        }
        let x = gen_triangle_reduction(&g);
        assert_eq!(
            check_wra(&x).consistent,
            !g.has_triangle(),
            "mask {mask:#b}"
        );
    }
}

#[test]
fn random_is_deterministic_and_valid() {
    let params = GenParams {
        events: 60,
        threads: 4,
        locs: 3,
        rmw_prob: 0.3,
        fence_prob: 0.1,
        seed: 42,
        max_writes_per_loc: Some(5),
    };
    let a = gen_random(&params);
    let b = gen_random(&params);
    assert_eq!(canon(&a), canon(&b));
    assert_eq!(a.num_events(), 60);
    for loc in 0..a.num_locs() {
        let name = a.loc_name(loc);
        if name.starts_with('x') {
            assert!(a.writes_on(loc).len() <= 5, "cap exceeded on {name}");
        }
    }
    let c = gen_random(&GenParams { seed: 43, ..params });
    assert_ne!(canon(&a), canon(&c));
}

/// Order-stable projection of an execution for equality checks.
fn canon(x: &exec_core::PartialExecution) -> String {
    let mut out = String::new();
    for t in 0..x.num_threads() {
        for e in x.thread(t) {
            let loc = e.loc.map(|l| x.loc_name(l)).unwrap_or("-");
            out.push_str(&format!("{t}:{:?}:{}:{loc}:{} ", e.op, e.ord.as_str(), e.id));
        }
    }
    let mut rf: Vec<_> = x.rf().iter().map(|(&r, &w)| (r, w)).collect();
    rf.sort_unstable();
    out.push_str(&format!("{rf:?}"));
    out
}

#[test]
fn litmus_names_all_build() {
    for name in LITMUS_NAMES {
        let x = gen_litmus(name).unwrap();
        assert!(x.num_events() >= 4, "{name}");
    }
    assert!(gen_litmus("nope").is_none());
    let fig5 = gen_litmus("fig5").unwrap();
    assert_eq!(fig5.num_threads(), 4);
    assert_eq!(fig5.num_events(), 7);
}

#[test]
fn presets_build_and_are_ra_consistent() {
    for name in PRESET_NAMES {
        let x = gen_preset(name, 64, 3).unwrap();
        let lo = if *name == "no-write-satur" { 32 } else { 40 };
        assert!(x.num_events() >= lo, "{name}: {}", x.num_events());
        assert!(x.num_events() <= 70, "{name}: {}", x.num_events());
        assert!(checkers::check_ra(&x).consistent, "{name} should be RA-consistent");
    }
    assert!(gen_preset("nope", 64, 3).is_none());
}
