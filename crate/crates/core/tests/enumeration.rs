use std::collections::BTreeSet;

use spin_atlas_core::face::all_cells;
use spin_atlas_core::{
    cells_containing, enumerate_chains, enumerate_classes, enumerate_faces, face_kind, k_tuple, ConnectionGraph,
    FaceKind, Vertex,
};

/// Classes by brute force over nondecreasing k-tuples with `k_0 = i + 1`
/// and `i + k_1 + .. + k_r = g`.
fn classes_by_k(genus: usize, order: usize) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    fn rec(k: &mut Vec<usize>, left: usize, order: usize, out: &mut BTreeSet<Vec<usize>>) {
        if k.len() == order + 1 {
            if left == 0 {
                out.insert(k.clone());
            }
            return;
        }
        let lo = *k.last().unwrap();
        for next in lo..=left {
            k.push(next);
            rec(k, left - next, order, out);
            k.pop();
        }
    }
    for k0 in 1..=genus + 1 {
        let i = k0 - 1;
        if i > genus {
            break;
        }
        rec(&mut vec![k0], genus - i, order, &mut out);
    }
    if order == 0 {
        out.retain(|k| k[0] - 1 == genus);
    }
    out
}

#[test]
fn class_lists_agree_with_brute_force() {
    for g in 2..=10 {
        for r in 0..g {
            let fast: BTreeSet<Vec<usize>> = enumerate_classes(g, Some(r)).iter().map(k_tuple).collect();
            assert_eq!(fast, classes_by_k(g, r), "g={g} r={r}");
        }
    }
}

#[test]
fn small_genus_class_lists() {
    let ip = |g, r| -> Vec<(usize, Vec<usize>)> {
        enumerate_classes(g, Some(r)).iter().map(|c| (c.i(), c.p().to_vec())).collect()
    };
    assert_eq!(ip(2, 1), vec![(0, vec![1])]);
    assert_eq!(ip(3, 1), vec![(0, vec![2]), (1, vec![0])]);
    assert_eq!(ip(4, 1), vec![(0, vec![3]), (1, vec![1])]);
    assert_eq!(ip(5, 1), vec![(0, vec![4]), (1, vec![2]), (2, vec![0])]);
    assert_eq!(ip(2, 2), vec![]);
    assert_eq!(ip(3, 2), vec![(0, vec![0, 1])]);
    assert_eq!(ip(4, 2), vec![(0, vec![0, 2]), (0, vec![1, 0])]);
    assert_eq!(ip(5, 2), vec![(0, vec![0, 3]), (0, vec![1, 1]), (1, vec![0, 0])]);
    let k: Vec<Vec<usize>> = enumerate_classes(5, Some(1)).iter().map(k_tuple).collect();
    assert_eq!(k, vec![vec![1, 5], vec![2, 4], vec![3, 3]]);
}

#[test]
fn face_and_cell_counts() {
    let basic3 = ConnectionGraph::basic(3);
    let faces = enumerate_faces(&basic3);
    assert_eq!(faces.len(), 6);
    assert!(faces.iter().all(|f| face_kind(f) == FaceKind::Standard));
    assert_eq!(enumerate_faces(&ConnectionGraph::new(2, [2])).len(), 2);
    assert_eq!(enumerate_faces(&ConnectionGraph::new(2, [1, 2])).len(), 5);
    assert_eq!(enumerate_faces(&ConnectionGraph::basic(2)).len(), 0);
    assert_eq!(all_cells(4).len(), 5);
}

/// Counts chains by trying every face and cell at every step.
fn brute_force_chain_count(cg: &ConnectionGraph, v: Vertex, max_steps: usize) -> usize {
    let faces = enumerate_faces(cg);
    fn rec(cg: &ConnectionGraph, faces: &[spin_atlas_core::Face], start: Vertex, cur: Vertex, left: usize) -> usize {
        if left == 0 {
            return 0;
        }
        let mut n = 0;
        for f in faces.iter().filter(|f| f.contains(cur)) {
            let cells = cells_containing(cg, f).len();
            for w in f.cycle().into_iter().filter(|&w| w != cur) {
                let here = usize::from(w == start);
                n += cells * (here + rec(cg, faces, start, w, left - 1));
            }
        }
        n
    }
    rec(cg, &faces, v, v, max_steps)
}

#[test]
fn chain_enumeration_counts() {
    let a = ConnectionGraph::new(2, [2]);
    let p: Vertex = "P".parse().unwrap();
    assert_eq!(enumerate_chains(&a, p, 2).len(), 3);
    for (cg, steps) in [(a.clone(), 4), (ConnectionGraph::new(2, [1, 2]), 3), (ConnectionGraph::new(3, [3]), 3)] {
        for v in cg.vertices() {
            let chains = enumerate_chains(&cg, v, steps);
            assert_eq!(chains.len(), brute_force_chain_count(&cg, v, steps), "{v}");
            let distinct: BTreeSet<_> = chains.iter().collect();
            assert_eq!(distinct.len(), chains.len());
        }
    }
}
