use std::path::PathBuf;

use spin_atlas_core::face::{all_cells, synthesize_face_map};
use spin_atlas_core::tables::{FaceTables, HEADER};
use spin_atlas_core::{cells_containing, enumerate_faces, face_kind, Cell, ConnectionGraph, FaceKind};

fn shipped_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/face_maps.v1.txt")
}

#[test]
fn shipped_tables_equal_synthesized() {
    let synth = FaceTables::synthesize();
    if std::env::var_os("SPIN_ATLAS_BLESS").is_some() {
        std::fs::write(shipped_path(), synth.render()).unwrap();
    }
    let shipped = std::fs::read_to_string(shipped_path()).unwrap();
    assert_eq!(shipped, synth.render());
    assert_eq!(*FaceTables::builtin(), synth);
}

#[test]
fn render_parse_round_trip_is_bit_exact() {
    let t = FaceTables::synthesize();
    let text = t.render();
    let back = FaceTables::parse(&text).unwrap();
    assert_eq!(back, t);
    assert_eq!(back.render(), text);
}

#[test]
fn parse_rejects_malformed_input() {
    assert!(FaceTables::parse("").is_err());
    assert!(FaceTables::parse("spin-atlas-face-maps v0\n").is_err());
    let line = "order=2 pattern=2 face=P,P1,~P2,P2 from=P to=P1 map=1>2,2>0";
    assert!(FaceTables::parse(&format!("{HEADER}\n{line}\n")).is_ok());
    assert!(FaceTables::parse(&format!("{HEADER}\n{line}\n{line}\n")).is_err());
    assert!(FaceTables::parse(&format!("{HEADER}\norder=2 pattern=2 face=P1,P,~P2,P2 from=P to=P1 map=1>2\n")).is_err());
    assert!(
        FaceTables::parse(&format!("{HEADER}\norder=2 pattern=2 face=P,P1,~P2,P2 from=P to=P1 map=1>2,2>2\n")).is_err()
    );
    assert!(FaceTables::parse(&format!("{HEADER}\norder=2 face=P,P1,~P2,P2 from=P to=P1 map=-\n")).is_err());
}

#[test]
fn builtin_tables_cover_every_graph_up_to_order_six() {
    let t = FaceTables::builtin();
    for r in 1..=6usize {
        for bits in 0u32..(1 << (r + 1)) {
            let cg = ConnectionGraph::new(r, (0..=r).filter(|&c| bits >> c & 1 == 1));
            t.coverage(&cg).unwrap();
        }
    }
}

fn graphs() -> Vec<ConnectionGraph> {
    let mut out = Vec::new();
    for r in 1..=5usize {
        for bits in 0u32..(1 << (r + 1)) {
            out.push(ConnectionGraph::new(r, (0..=r).filter(|&c| bits >> c & 1 == 1)));
        }
    }
    out
}

#[test]
fn lookup_agrees_with_role_rules_at_every_order() {
    let t = FaceTables::builtin();
    for cg in graphs() {
        for face in enumerate_faces(&cg) {
            for cell in cells_containing(&cg, &face) {
                for u in face.cycle() {
                    for v in face.cycle() {
                        if u != v {
                            assert_eq!(
                                t.face_map(&cg, &cell, &face, u, v).unwrap(),
                                synthesize_face_map(&cg, &cell, &face, u, v).unwrap()
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn face_map_invariants() {
    let t = FaceTables::builtin();
    for cg in graphs() {
        let r = cg.order();
        for face in enumerate_faces(&cg) {
            let c = face.cycle();
            for cell in cells_containing(&cg, &face) {
                let m = |u, v| t.face_map(&cg, &cell, &face, u, v).unwrap();
                for u in c {
                    for v in c {
                        if u == v {
                            continue;
                        }
                        let fwd = m(u, v);
                        assert_eq!(fwd.inverse(), m(v, u));
                        let dom = fwd.domain();
                        assert!(dom.iter().all(|x| cg.label_set(u).contains(x)));
                        assert!(fwd.image().iter().all(|x| cg.label_set(v).contains(x)));
                        assert!(
                            dom.len()
                                >= r.min(cg.epsilon_degree(u))
                                    - usize::from(
                                        r == 2
                                            && face_kind(&face) != FaceKind::Standard
                                            && cg.epsilon_degree(u) != cg.epsilon_degree(v)
                                    )
                        );
                        for x in 0..=r {
                            if !cell.contains_class(x) {
                                assert_eq!(fwd.get(x), Some(x));
                            }
                        }
                        let full = |w| cg.epsilon_degree(w) == r + 1;
                        if full(u) && full(v) {
                            assert_eq!(fwd.len(), r + 1, "total between full vertices");
                        }
                        if face_kind(&face) == FaceKind::TwoPair {
                            assert_eq!(fwd.len(), r + 1);
                        }
                        let conj = t.face_map(&cg, &cell, &face.conjugate(), u.conjugate(), v.conjugate()).unwrap();
                        assert_eq!(conj, fwd);
                    }
                }
                for s in 0..4 {
                    let around = m(c[s], c[(s + 1) % 4])
                        .then(&m(c[(s + 1) % 4], c[(s + 2) % 4]))
                        .then(&m(c[(s + 2) % 4], c[(s + 3) % 4]))
                        .then(&m(c[(s + 3) % 4], c[s]));
                    assert!(around.is_identity(), "{face} in {cell}");
                }
            }
        }
    }
}

#[test]
fn standard_faces_restrict_to_bijections_of_double_hat_sets() {
    for cg in graphs().into_iter().filter(|g| g.order() >= 3) {
        for face in enumerate_faces(&cg).into_iter().filter(|f| face_kind(f) == FaceKind::Standard) {
            for cell in cells_containing(&cg, &face) {
                for u in face.cycle() {
                    for v in face.cycle() {
                        if u == v {
                            continue;
                        }
                        let inner = |w: spin_atlas_core::Vertex| -> Vec<usize> {
                            cell.classes().iter().copied().filter(|&x| x != w.class).collect()
                        };
                        let m = spin_atlas_core::face_map(&cg, &cell, &face, u, v).unwrap();
                        let mut img: Vec<usize> = inner(u).iter().map(|&x| m.get(x).unwrap()).collect();
                        img.sort();
                        assert_eq!(img, inner(v));
                    }
                }
            }
        }
    }
}

#[test]
fn cells_of_s4_and_cell_counts_by_kind() {
    assert_eq!(all_cells(4).len(), 5);
    for r in 4..=6usize {
        let cg = ConnectionGraph::new(r, 0..=r);
        for face in enumerate_faces(&cg) {
            let n = cells_containing(&cg, &face).len();
            let expect = match face_kind(&face) {
                FaceKind::Standard => 1,
                FaceKind::OnePair => r - 2,
                FaceKind::TwoPair => (r - 1) * (r - 2) / 2,
            };
            assert_eq!(n, expect, "{face}");
        }
    }
    assert_eq!(
        cells_containing(&ConnectionGraph::basic(3), &enumerate_faces(&ConnectionGraph::basic(3))[0]),
        vec![Cell::whole(3)]
    );
}
