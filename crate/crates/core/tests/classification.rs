use spin_atlas_core::{
    build_connection_graph, enumerate_classes, predict_group, spin_group_at, verify_class, Budget, ConnectionGraph,
    GraphClass, GroupVerdict, Method, Vertex,
};

fn v(s: &str) -> Vertex {
    s.parse().unwrap()
}

fn all_match(genera: std::ops::RangeInclusive<usize>, order: usize) {
    for g in genera {
        for gc in enumerate_classes(g, Some(order)) {
            let report = verify_class(&gc, &Budget::default()).unwrap();
            for vr in &report.vertices {
                assert!(vr.matches(), "{gc} at {}: {} vs {}", vr.vertex, vr.group.verdict, vr.group.predicted);
            }
        }
    }
}

#[test]
fn prediction_examples() {
    let one = ConnectionGraph::new(1, [0, 1]);
    assert!(one.vertices().iter().all(|&x| predict_group(&one, x) == GroupVerdict::Trivial));
    let cg = build_connection_graph(&GraphClass::new(4, 3, 0, vec![0, 0, 1]).unwrap());
    assert_eq!(predict_group(&cg, v("P")), GroupVerdict::Symmetric(3));
    assert_eq!(predict_group(&cg, v("P3")), GroupVerdict::Symmetric(4));
    let full = ConnectionGraph::new(5, 0..=5);
    assert!(full.vertices().iter().all(|&x| predict_group(&full, x) == GroupVerdict::Symmetric(6)));
}

#[test]
fn order_two_groups_at_named_vertices() {
    let b = Budget::default();
    let a = ConnectionGraph::new(2, [2]);
    assert_eq!(spin_group_at(&a, v("P2"), &b).unwrap().verdict, GroupVerdict::C3);
    assert_eq!(spin_group_at(&a, v("~P2"), &b).unwrap().verdict, GroupVerdict::C3);
    assert_eq!(spin_group_at(&a, v("P1"), &b).unwrap().verdict, GroupVerdict::Trivial);
    let bb = ConnectionGraph::new(2, [1, 2]);
    assert_eq!(spin_group_at(&bb, v("~P1"), &b).unwrap().verdict, GroupVerdict::Symmetric(3));
    assert_eq!(spin_group_at(&bb, v("P"), &b).unwrap().verdict, GroupVerdict::Trivial);
    let eight = ConnectionGraph::new(3, [2, 3]);
    assert_eq!(spin_group_at(&eight, v("P2"), &b).unwrap().verdict, GroupVerdict::Symmetric(4));
}

#[test]
fn low_orders_are_trivial() {
    for g in 2..=8 {
        for gc in enumerate_classes(g, None).into_iter().filter(|c| c.order() <= 1) {
            let report = verify_class(&gc, &Budget::default()).unwrap();
            assert!(report.vertices.iter().all(|r| r.group.verdict == GroupVerdict::Trivial), "{gc}");
        }
    }
}

#[test]
fn order_two_classes_match() {
    all_match(3..=8, 2);
}

#[test]
fn order_three_classes_match() {
    all_match(4..=8, 3);
}

#[test]
fn order_four_and_five_classes_match() {
    all_match(5..=7, 4);
    all_match(6..=7, 5);
}

#[test]
fn named_classes_match() {
    for (g, r, i, p) in
        [(3, 2, 0, vec![0, 1]), (4, 3, 0, vec![0, 0, 1]), (6, 3, 0, vec![1, 0, 0]), (6, 4, 0, vec![0, 0, 0, 2])]
    {
        let gc = GraphClass::new(g, r, i, p).unwrap();
        assert!(verify_class(&gc, &Budget::default()).unwrap().match_all(), "{gc}");
    }
    let gc = GraphClass::new(6, 4, 0, vec![0, 0, 0, 2]).unwrap();
    let t = spin_atlas_core::Transport::new(&build_connection_graph(&gc)).unwrap();
    for x in t.graph().vertices() {
        let sg = spin_atlas_core::group::spin_group_with(&t, x, &Budget::default()).unwrap();
        let want = if x.class == 4 { 5 } else { 4 };
        assert_eq!(sg.verdict, GroupVerdict::Symmetric(want), "{x}");
    }
}

#[test]
fn witnesses_evaluate_to_their_permutations() {
    for cg in [ConnectionGraph::new(2, [2]), ConnectionGraph::new(3, [2, 3]), ConnectionGraph::new(4, [4])] {
        let t = spin_atlas_core::Transport::new(&cg).unwrap();
        for x in cg.vertices() {
            let b = Budget { exhaustive: true, ..Budget::default() };
            let sg = spin_atlas_core::group::spin_group_with(&t, x, &b).unwrap();
            assert!(!sg.over_generated);
            for w in &sg.witnesses {
                assert_eq!(t.evaluate(&w.chain).unwrap(), w.perm, "{}", w.chain);
            }
        }
    }
}

#[test]
fn exact_and_bounded_methods_agree() {
    let bounded = Budget { method: Method::Bounded, ..Budget::default() };
    for cg in [
        ConnectionGraph::new(2, [2]),
        ConnectionGraph::new(2, [1, 2]),
        ConnectionGraph::new(2, [0, 1, 2]),
        ConnectionGraph::new(3, [3]),
        ConnectionGraph::new(3, [2, 3]),
    ] {
        for x in cg.vertices() {
            let e = spin_group_at(&cg, x, &Budget::default()).unwrap();
            let b = spin_group_at(&cg, x, &bounded).unwrap();
            assert_eq!(e.verdict, b.verdict, "{x}");
        }
    }
}
