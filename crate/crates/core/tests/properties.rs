use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spin_atlas_core::{
    closure, face::all_cells, face_kind, spin_group_with, Budget, ConnectionGraph, FaceKind, Permutation, SpinChain,
    Transport,
};

type Cache = Mutex<HashMap<(usize, u32), Arc<Transport>>>;

fn transport(order: usize, mask: u32) -> Arc<Transport> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&(order, mask)) {
        return t.clone();
    }
    let cg = ConnectionGraph::new(order, (0..=order).filter(|&c| mask >> c & 1 == 1));
    let t = Arc::new(Transport::new(&cg).unwrap());
    cache.lock().unwrap().insert((order, mask), t.clone());
    t
}

fn config() -> Config {
    Config { cases: 256, rng_seed: RngSeed::Fixed(0x5a17), failure_persistence: None, ..Config::default() }
}

fn graph_strategy() -> impl Strategy<Value = (usize, u32)> {
    (2usize..=4).prop_flat_map(|r| (Just(r), 0u32..(1 << (r + 1))))
}

fn sample(t: &Transport, vertex: usize, seed: u64, walk: usize) -> Option<SpinChain> {
    let vs = t.graph().vertices();
    let v = vs[vertex % vs.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    t.random_loop(&mut rng, v, walk)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn reversed_loop_gives_inverse((r, mask) in graph_strategy(), vertex in 0usize..12, seed: u64, walk in 1usize..6) {
        let t = transport(r, mask);
        let Some(c) = sample(&t, vertex, seed, walk) else { return Ok(()) };
        let fwd = t.is_admissible(&c).unwrap().admissible;
        let back = t.is_admissible(&c.reverse()).unwrap().admissible;
        prop_assert_eq!(fwd, back);
        prop_assert_eq!(t.evaluate(&c.reverse()).unwrap(), t.evaluate(&c).unwrap().inverse());
    }

    #[test]
    fn conjugate_chain_gives_same_permutation((r, mask) in graph_strategy(), vertex in 0usize..12, seed: u64, walk in 1usize..6) {
        let t = transport(r, mask);
        let Some(c) = sample(&t, vertex, seed, walk) else { return Ok(()) };
        let conj = c.conjugate();
        prop_assert_eq!(t.is_admissible(&conj).unwrap(), t.is_admissible(&c).unwrap());
        prop_assert_eq!(t.evaluate(&conj).unwrap(), t.evaluate(&c).unwrap());
    }

    #[test]
    fn inadmissible_chains_evaluate_to_identity((r, mask) in graph_strategy(), vertex in 0usize..12, seed: u64, walk in 1usize..8) {
        let t = transport(r, mask);
        let Some(c) = sample(&t, vertex, seed, walk) else { return Ok(()) };
        if !t.is_admissible(&c).unwrap().admissible {
            prop_assert!(t.evaluate(&c).unwrap().is_identity());
        }
    }

    #[test]
    fn fully_chorded_chains_are_admissible(r in 2usize..=4, vertex in 0usize..12, seed: u64, walk in 1usize..8) {
        let t = transport(r, (1 << (r + 1)) - 1);
        let Some(c) = sample(&t, vertex, seed, walk) else { return Ok(()) };
        prop_assert!(t.is_admissible(&c).unwrap().admissible);
    }

    #[test]
    fn equal_degree_loops_are_admissible((r, mask) in graph_strategy(), vertex in 0usize..12, seed: u64, walk in 1usize..8) {
        let t = transport(r, mask);
        let Some(c) = sample(&t, vertex, seed, walk) else { return Ok(()) };
        let cg = t.graph();
        let d = cg.epsilon_degree(c.start);
        if c.vertices().iter().all(|&w| cg.epsilon_degree(w) == d) {
            prop_assert!(t.is_admissible(&c).unwrap().admissible);
        }
    }

    /// At a vertex of degree `r` the composite of two admissible loops is
    /// admissible and evaluates to the product.
    #[test]
    fn concatenation_multiplies((r, mask) in graph_strategy(), vertex in 0usize..12, seed: u64, walk in 1usize..5) {
        let t = transport(r, mask);
        let cg = t.graph();
        let low: Vec<_> = cg.vertices().into_iter().filter(|&w| cg.epsilon_degree(w) == r).collect();
        prop_assume!(!low.is_empty());
        let v = low[vertex % low.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(a) = t.random_loop(&mut rng, v, walk) else { return Ok(()) };
        let Some(b) = t.random_loop(&mut rng, v, walk) else { return Ok(()) };
        if !(t.is_admissible(&a).unwrap().admissible && t.is_admissible(&b).unwrap().admissible) {
            return Ok(());
        }
        let ab = a.concat(&b).unwrap();
        prop_assert!(t.is_admissible(&ab).unwrap().admissible);
        prop_assert_eq!(t.evaluate(&ab).unwrap(), t.evaluate(&a).unwrap().then(&t.evaluate(&b).unwrap()));
    }

    #[test]
    fn face_maps_compose_to_identity_around_a_face((r, mask) in graph_strategy(), pick: usize, shift in 0usize..4) {
        let t = transport(r, mask);
        let faces = t.faces();
        prop_assume!(!faces.is_empty());
        let face = faces[pick % faces.len()];
        let cg = t.graph();
        for cell in spin_atlas_core::cells_containing(cg, &face) {
            let cyc = face.cycle();
            let mut total: Option<spin_atlas_core::LabelMap> = None;
            for k in 0..4 {
                let (u, v) = (cyc[(k + shift) % 4], cyc[(k + shift + 1) % 4]);
                let m = t.tables().face_map(cg, &cell, &face, u, v).unwrap();
                total = Some(match total { None => m, Some(acc) => acc.then(&m) });
            }
            let total = total.unwrap();
            prop_assert!(total.is_identity());
            prop_assert!(total.len() >= r);
        }
    }
}

#[test]
fn conjugate_vertices_share_verdicts() {
    for r in 2..=4usize {
        for mask in 0u32..(1 << (r + 1)) {
            let t = transport(r, mask);
            for v in t.graph().vertices().into_iter().filter(|v| !v.tilded) {
                let a = spin_group_with(&t, v, &Budget::default()).unwrap();
                let b = spin_group_with(&t, v.conjugate(), &Budget::default()).unwrap();
                assert_eq!(a.verdict, b.verdict, "r={r} mask={mask:b} {v}");
            }
        }
    }
}

/// Permutations from loops of standard faces inside one cell form a group
/// of order 3 made of even permutations.
#[test]
fn basic_chains_in_a_cell_give_a3() {
    for r in 3..=4usize {
        for mask in 0u32..(1 << (r + 1)) {
            let t = transport(r, mask);
            let cg = t.graph();
            for cell in all_cells(r) {
                for v in cg.vertices().into_iter().filter(|v| cell.contains_class(v.class)) {
                    let mut gens = HashSet::new();
                    let mut stack = vec![SpinChain::new(v, Vec::new())];
                    while let Some(c) = stack.pop() {
                        let at = c.steps.last().map_or(v, |s| s.next);
                        for o in t.options(at) {
                            if o.step.cell != cell || face_kind(&o.step.face) != FaceKind::Standard {
                                continue;
                            }
                            let mut next = c.clone();
                            next.steps.push(o.step.clone());
                            if o.step.next == v {
                                gens.insert(t.evaluate(&next).unwrap());
                            } else if next.len() < 4 {
                                stack.push(next);
                            }
                        }
                    }
                    let gens: Vec<Permutation> = gens.into_iter().collect();
                    let g = closure(&gens, cg.epsilon_degree(v), 1000).unwrap();
                    assert_eq!(g.order(), 3, "r={r} mask={mask:b} cell={cell} {v}");
                    assert!(g.elements().iter().all(Permutation::is_even));
                }
            }
        }
    }
}

fn brute_force_order(gens: &[Permutation], n: usize) -> usize {
    let mut set: HashSet<Vec<usize>> = HashSet::from([(0..n).collect()]);
    set.extend(gens.iter().map(Permutation::images));
    loop {
        let cur: Vec<Vec<usize>> = set.iter().cloned().collect();
        let mut grown = false;
        for a in &cur {
            for b in &cur {
                let ab: Vec<usize> = a.iter().map(|&x| b[x]).collect();
                grown |= set.insert(ab);
            }
        }
        if !grown {
            return set.len();
        }
    }
}

#[test]
fn closure_agrees_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=5usize);
        let k = rng.gen_range(0..=3usize);
        let gens: Vec<Permutation> = (0..k)
            .map(|_| {
                let mut img: Vec<usize> = (0..n).collect();
                for i in (1..n).rev() {
                    img.swap(i, rng.gen_range(0..=i));
                }
                Permutation::from_images(img).unwrap()
            })
            .collect();
        let g = closure(&gens, n, 1000).unwrap();
        assert_eq!(g.order() as usize, brute_force_order(&gens, n), "{gens:?}");
        assert_eq!(120 % g.order(), 0);
    }
}
