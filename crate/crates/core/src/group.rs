//! Spin groups: closure, recognition, prediction and verification.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::chain::{extend, SpinChain, Step, Transport};
use crate::face::FaceError;
use crate::graph::{build_connection_graph, ClassIndex, ConnectionGraph, GraphClass, Vertex};
use crate::perm::{factorial, LabelMap, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("could not recognize the group generated on {n} points")]
    Unrecognized { n: usize },
    #[error("bounded chain search exceeded {limit} states")]
    StateLimit { limit: usize },
    #[error(transparent)]
    Face(#[from] FaceError),
}

/// A permutation group given by generators and its full element list.
#[derive(Clone, Debug)]
pub struct PermGroup {
    n: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashSet<Permutation>,
}

impl PermGroup {
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Elements in breadth-first discovery order, identity first.
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains(p)
    }

    /// Adds a generator and closes again.
    fn extend_with(&mut self, g: Permutation, cap: usize) -> Result<(), GroupError> {
        self.generators.push(g);
        self.close(cap)
    }

    fn close(&mut self, cap: usize) -> Result<(), GroupError> {
        let mut i = 0;
        while i < self.elements.len() {
            for gen in &self.generators {
                let y = self.elements[i].then(gen);
                if self.index.insert(y.clone()) {
                    self.elements.push(y);
                    if self.elements.len() > cap {
                        return Err(GroupError::CapExceeded { cap });
                    }
                }
            }
            i += 1;
        }
        Ok(())
    }

    fn trivial(n: usize) -> PermGroup {
        let id = Permutation::identity(n);
        PermGroup { n, generators: Vec::new(), elements: vec![id.clone()], index: HashSet::from([id]) }
    }
}

/// The group generated by `gens` on `n` points, by breadth-first products.
pub fn closure(gens: &[Permutation], n: usize, cap: usize) -> Result<PermGroup, GroupError> {
    let mut g = PermGroup::trivial(n);
    g.generators = gens.to_vec();
    g.close(cap)?;
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupVerdict {
    Trivial,
    C2,
    C3,
    Alternating(usize),
    Symmetric(usize),
    Other(u64),
}

impl GroupVerdict {
    pub fn order(&self) -> u64 {
        match *self {
            GroupVerdict::Trivial => 1,
            GroupVerdict::C2 => 2,
            GroupVerdict::C3 => 3,
            GroupVerdict::Alternating(n) => factorial(n) / 2,
            GroupVerdict::Symmetric(n) => factorial(n),
            GroupVerdict::Other(o) => o,
        }
    }
}

impl fmt::Display for GroupVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupVerdict::Trivial => f.write_str("Trivial"),
            GroupVerdict::C2 => f.write_str("C2"),
            GroupVerdict::C3 => f.write_str("C3"),
            GroupVerdict::Alternating(n) => write!(f, "A{n}"),
            GroupVerdict::Symmetric(n) => write!(f, "S{n}"),
            GroupVerdict::Other(o) => write!(f, "Other({o})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown group verdict `{0}`")]
pub struct VerdictParseError(pub String);

impl FromStr for GroupVerdict {
    type Err = VerdictParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || VerdictParseError(s.to_string());
        match s {
            "Trivial" => return Ok(GroupVerdict::Trivial),
            "C2" => return Ok(GroupVerdict::C2),
            "C3" => return Ok(GroupVerdict::C3),
            _ => {}
        }
        if let Some(inner) = s.strip_prefix("Other(").and_then(|x| x.strip_suffix(')')) {
            return inner.parse().map(GroupVerdict::Other).map_err(|_| bad());
        }
        let parse_n = |x: &str| x.parse::<usize>().ok().filter(|_| !x.starts_with('+'));
        if let Some(n) = s.strip_prefix('A').and_then(parse_n) {
            return Ok(GroupVerdict::Alternating(n));
        }
        if let Some(n) = s.strip_prefix('S').and_then(parse_n) {
            return Ok(GroupVerdict::Symmetric(n));
        }
        Err(bad())
    }
}

/// Verdict by order and parity.
pub fn recognize(group: &PermGroup) -> GroupVerdict {
    verdict_from(group.order(), group.degree(), group.elements().iter().all(Permutation::is_even))
}

fn verdict_from(order: u64, n: usize, all_even: bool) -> GroupVerdict {
    match order {
        1 => GroupVerdict::Trivial,
        2 => GroupVerdict::C2,
        3 => GroupVerdict::C3,
        o if o == factorial(n) => GroupVerdict::Symmetric(n),
        o if n >= 2 && o == factorial(n) / 2 && all_even => GroupVerdict::Alternating(n),
        o => GroupVerdict::Other(o),
    }
}

/// How a verdict was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Recognition {
    /// Full element list.
    Closure,
    /// Primitive group containing a 3-cycle or a transposition.
    Jordan,
}

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

fn orbit_count(gens: &[Permutation], n: usize) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    for g in gens {
        for i in 0..n {
            let (a, b) = (find(&mut parent, i), find(&mut parent, g.apply(i)));
            if a != b {
                parent[a] = b;
            }
        }
    }
    (0..n).filter(|&i| find(&mut parent, i) == i).count()
}

/// For a transitive group: whether no nontrivial block contains 0.
fn is_primitive(gens: &[Permutation], n: usize) -> bool {
    for b in 1..n {
        let mut parent: Vec<usize> = (0..n).collect();
        let mut queue = VecDeque::from([(0usize, b)]);
        parent[b] = 0;
        while let Some((x, y)) = queue.pop_front() {
            for g in gens {
                let (gx, gy) = (g.apply(x), g.apply(y));
                let (a, c) = (find(&mut parent, gx), find(&mut parent, gy));
                if a != c {
                    parent[c] = a;
                    queue.push_back((gx, gy));
                }
            }
        }
        let root = find(&mut parent, 0);
        let size = (0..n).filter(|&i| find(&mut parent, i) == root).count();
        if size < n {
            return false;
        }
    }
    true
}

/// A power of `p` that is a single cycle of length `len`, if one exists.
fn isolate_cycle(p: &Permutation, len: usize) -> Option<Permutation> {
    let lens: Vec<usize> = p.cycles().iter().map(Vec::len).collect();
    if lens.iter().filter(|&&l| l == len).count() != 1 {
        return None;
    }
    let other = lens.iter().filter(|&&l| l != len).fold(1u64, |acc, &l| crate::perm::lcm(acc, l as u64));
    if other % len as u64 == 0 {
        return None;
    }
    Some(p.pow(other))
}

/// Jordan's theorem: a primitive group containing a transposition is
/// symmetric, one containing a 3-cycle is alternating or symmetric.
fn jordan(gens: &[Permutation], n: usize) -> Option<GroupVerdict> {
    if n < 3 || gens.is_empty() || orbit_count(gens, n) != 1 || !is_primitive(gens, n) {
        return None;
    }
    let all_even = gens.iter().all(Permutation::is_even);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut word = Permutation::identity(n);
    let mut candidates: Vec<Permutation> = gens.to_vec();
    for _ in 0..4000 {
        word = word.then(&gens[rng.gen_range(0..gens.len())]);
        candidates.push(word.clone());
    }
    if candidates.iter().any(|c| isolate_cycle(c, 2).is_some()) {
        return Some(GroupVerdict::Symmetric(n));
    }
    if candidates.iter().any(|c| isolate_cycle(c, 3).is_some()) {
        return Some(if all_even { GroupVerdict::Alternating(n) } else { GroupVerdict::Symmetric(n) });
    }
    None
}

/// Recognizes the group generated by `gens`: by closure when `n!` fits under
/// `cap`, otherwise by Jordan's theorem, falling back to a capped closure.
pub fn recognize_generators(
    gens: &[Permutation],
    n: usize,
    cap: usize,
) -> Result<(GroupVerdict, Recognition), GroupError> {
    if factorial(n.min(20)) > cap as u64 {
        if let Some(v) = jordan(gens, n) {
            return Ok((v, Recognition::Jordan));
        }
    }
    match closure(gens, n, cap) {
        Ok(g) => Ok((recognize(&g), Recognition::Closure)),
        Err(GroupError::CapExceeded { .. }) if factorial(n.min(20)) > cap as u64 => Err(GroupError::Unrecognized { n }),
        Err(e) => Err(e),
    }
}

/// The classification of spin groups as a function of the connection graph.
pub fn predict_group(cg: &ConnectionGraph, v: Vertex) -> GroupVerdict {
    let r = cg.order();
    match r {
        0 | 1 => GroupVerdict::Trivial,
        2 => {
            if !cg.is_connected(v.class) {
                GroupVerdict::Trivial
            } else if cg.connected_pairs().len() == 1 {
                GroupVerdict::C3
            } else {
                GroupVerdict::Symmetric(3)
            }
        }
        _ => GroupVerdict::Symmetric(cg.epsilon_degree(v)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Schreier generators of the groupoid of carried label sets; covers
    /// chains of every length.
    Exact,
    /// Chains of at most `max_steps` steps, widened to 8 when the predicted
    /// group is not reached.
    Bounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_steps: usize,
    pub closure_cap: usize,
    pub exhaustive: bool,
    pub method: Method,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_steps: 6, closure_cap: 400_000, exhaustive: false, method: Method::Exact }
    }
}

const STATE_LIMIT: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub chain: SpinChain,
    pub perm: Permutation,
}

#[derive(Clone, Debug)]
pub struct SpinGroup {
    pub vertex: Vertex,
    pub labels: Vec<ClassIndex>,
    pub verdict: GroupVerdict,
    pub order: u64,
    pub predicted: GroupVerdict,
    pub recognition: Recognition,
    /// Generators that enlarged the group, in the order they were folded in.
    pub witnesses: Vec<Witness>,
    /// Distinct candidate permutations produced by the search.
    pub candidates: usize,
    /// Longest step count among the chains searched.
    pub steps_used: usize,
    /// Exhaustive mode only: the computed group is larger than predicted.
    pub over_generated: bool,
}

impl SpinGroup {
    pub fn matches(&self) -> bool {
        self.verdict == self.predicted
    }
}

fn mask_of(labels: impl IntoIterator<Item = ClassIndex>) -> u64 {
    labels.into_iter().fold(0u64, |m, c| m | 1 << c)
}

/// Distinct `(next, map)` moves leaving each vertex, with one representative step.
fn moves(t: &Transport, u: Vertex) -> Vec<(Step, u64, LabelMap)> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for o in t.options(u) {
        if seen.insert((o.step.next, o.map.clone())) {
            out.push((o.step.clone(), mask_of(o.map.domain()), o.map.clone()));
        }
    }
    out
}

struct Node {
    vertex: Vertex,
    mask: u64,
    /// Start label to current label.
    transport: Vec<(ClassIndex, ClassIndex)>,
    parent: Option<(usize, Step)>,
}

fn path_to(nodes: &[Node], mut i: usize) -> Vec<Step> {
    let mut steps = Vec::new();
    while let Some((p, s)) = &nodes[i].parent {
        steps.push(s.clone());
        i = *p;
    }
    steps.reverse();
    steps
}

/// Candidate generators at `v` with witness chains, over chains of any length.
fn holonomy_candidates(t: &Transport, v: Vertex) -> Vec<Witness> {
    let cg = t.graph();
    let r = cg.order();
    let labels = cg.label_set(v);
    let n = labels.len();
    let deg = cg.epsilon_degree(v);
    let allowed = |w: Vertex| r != 2 || cg.epsilon_degree(w) == deg;
    let move_table: HashMap<Vertex, Vec<(Step, u64, LabelMap)>> =
        cg.vertices().into_iter().filter(|&w| allowed(w)).map(|w| (w, moves(t, w))).collect();

    let mut starts = vec![labels.clone()];
    if n == r + 1 {
        for skip in 0..n {
            starts.push(labels.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &l)| l).collect());
        }
    }

    let mut found: HashMap<Permutation, SpinChain> = HashMap::new();
    let mut offer = |perm: Permutation, chain: SpinChain| {
        if perm.is_identity() {
            return;
        }
        match found.get(&perm) {
            Some(old) if (old.len(), old) <= (chain.len(), &chain) => {}
            _ => {
                found.insert(perm, chain);
            }
        }
    };

    let mut nodes: Vec<Node> = Vec::new();
    let mut index: HashMap<(Vertex, u64), usize> = HashMap::new();
    for s0 in starts {
        let key = (v, mask_of(s0.iter().copied()));
        if index.contains_key(&key) {
            continue;
        }
        let root = nodes.len();
        index.insert(key, root);
        nodes.push(Node { vertex: v, mask: key.1, transport: s0.iter().map(|&l| (l, l)).collect(), parent: None });
        let mut queue = VecDeque::from([root]);
        let mut component = vec![root];
        while let Some(x) = queue.pop_front() {
            let (xv, xmask) = (nodes[x].vertex, nodes[x].mask);
            for (step, dom, map) in &move_table[&xv] {
                if xmask & !dom != 0 || !move_table.contains_key(&step.next) {
                    continue;
                }
                let moved: Vec<(ClassIndex, ClassIndex)> = nodes[x]
                    .transport
                    .iter()
                    .map(|&(a, b)| (a, map.get(b).expect("carried label in domain")))
                    .collect();
                let ykey = (step.next, mask_of(moved.iter().map(|p| p.1)));
                match index.get(&ykey) {
                    None => {
                        let y = nodes.len();
                        index.insert(ykey, y);
                        nodes.push(Node {
                            vertex: step.next,
                            mask: ykey.1,
                            transport: moved,
                            parent: Some((x, step.clone())),
                        });
                        queue.push_back(y);
                        component.push(y);
                    }
                    Some(&y) => {
                        // Schreier generator: around the tree to x, across, back from y.
                        let back: HashMap<ClassIndex, ClassIndex> =
                            nodes[y].transport.iter().map(|&(a, b)| (b, a)).collect();
                        let h: Vec<(ClassIndex, ClassIndex)> = moved.iter().map(|&(a, c)| (a, back[&c])).collect();
                        if h.iter().all(|&(a, b)| a == b) {
                            continue;
                        }
                        let mut steps = path_to(&nodes, x);
                        steps.push(step.clone());
                        steps.extend(SpinChain::new(v, path_to(&nodes, y)).reverse().steps);
                        offer(extend(&labels, &h), SpinChain::new(v, steps));
                    }
                }
            }
        }
        for &x in &component[1..] {
            if nodes[x].vertex == v {
                let perm = extend(&labels, &nodes[x].transport);
                offer(perm, SpinChain::new(v, path_to(&nodes, x)));
            }
        }
    }
    let mut out: Vec<Witness> = found.into_iter().map(|(perm, chain)| Witness { chain, perm }).collect();
    out.sort_by(|a, b| (a.chain.len(), &a.perm, &a.chain).cmp(&(b.chain.len(), &b.perm, &b.chain)));
    out
}

/// Candidate generators from all chains of at most `max_steps` steps.
fn bounded_candidates(t: &Transport, v: Vertex, max_steps: usize) -> Result<Vec<Witness>, GroupError> {
    let cg = t.graph();
    let r = cg.order();
    let labels = cg.label_set(v);
    let deg = cg.epsilon_degree(v);
    let mut parents: Vec<(usize, Step)> = Vec::new();
    type Carried = Vec<(ClassIndex, ClassIndex)>;
    let mut seen: HashSet<(Vertex, Carried)> = HashSet::new();
    let start: Carried = labels.iter().map(|&l| (l, l)).collect();
    seen.insert((v, start.clone()));
    let mut layer: Vec<(usize, Vertex, Carried)> = vec![(usize::MAX, v, start)];
    let mut found: HashMap<Permutation, SpinChain> = HashMap::new();
    let move_table: HashMap<Vertex, Vec<(Step, u64, LabelMap)>> =
        cg.vertices().into_iter().map(|w| (w, moves(t, w))).collect();
    let chain_of = |parents: &[(usize, Step)], mut i: usize| {
        let mut steps = Vec::new();
        while i != usize::MAX {
            steps.push(parents[i].1.clone());
            i = parents[i].0;
        }
        steps.reverse();
        SpinChain::new(v, steps)
    };
    for _ in 0..max_steps {
        let mut next_layer = Vec::new();
        for (pid, w, carried) in &layer {
            for (step, _, map) in &move_table[w] {
                if r == 2 && cg.epsilon_degree(step.next) != deg {
                    continue;
                }
                let moved: Vec<(ClassIndex, ClassIndex)> =
                    carried.iter().filter_map(|&(a, b)| map.get(b).map(|c| (a, c))).collect();
                if moved.len() < r {
                    continue;
                }
                let key = (step.next, moved);
                if seen.contains(&key) {
                    continue;
                }
                parents.push((*pid, step.clone()));
                let id = parents.len() - 1;
                if step.next == v {
                    let perm = extend(&labels, &key.1);
                    if !perm.is_identity() && !found.contains_key(&perm) {
                        found.insert(perm, chain_of(&parents, id));
                    }
                }
                seen.insert(key.clone());
                if seen.len() > STATE_LIMIT {
                    return Err(GroupError::StateLimit { limit: STATE_LIMIT });
                }
                next_layer.push((id, key.0, key.1));
            }
        }
        layer = next_layer;
    }
    let mut out: Vec<Witness> = found.into_iter().map(|(perm, chain)| Witness { chain, perm }).collect();
    out.sort_by(|a, b| (a.chain.len(), &a.perm, &a.chain).cmp(&(b.chain.len(), &b.perm, &b.chain)));
    Ok(out)
}

struct Folded {
    verdict: GroupVerdict,
    order: u64,
    recognition: Recognition,
    witnesses: Vec<Witness>,
}

fn fold(cands: &[Witness], n: usize, cap: usize, stop_at: Option<GroupVerdict>) -> Result<Folded, GroupError> {
    if factorial(n.min(20)) > cap as u64 {
        let gens: Vec<Permutation> = cands.iter().map(|w| w.perm.clone()).collect();
        if gens.is_empty() {
            return Ok(Folded {
                verdict: GroupVerdict::Trivial,
                order: 1,
                recognition: Recognition::Closure,
                witnesses: Vec::new(),
            });
        }
        let (verdict, recognition) = recognize_generators(&gens, n, cap)?;
        // Shortest prefix that already gives the full verdict.
        let mut witnesses = cands.to_vec();
        if recognition == Recognition::Jordan {
            if let Some(k) = (1..=gens.len()).find(|&k| jordan(&gens[..k], n) == Some(verdict)) {
                witnesses.truncate(k);
            }
        }
        return Ok(Folded { verdict, order: verdict.order(), recognition, witnesses });
    }
    let mut group = PermGroup::trivial(n);
    let mut witnesses = Vec::new();
    for w in cands {
        if let Some(target) = stop_at {
            if recognize(&group) == target {
                break;
            }
        }
        if !group.contains(&w.perm) {
            group.extend_with(w.perm.clone(), cap)?;
            witnesses.push(w.clone());
        }
    }
    Ok(Folded { verdict: recognize(&group), order: group.order(), recognition: Recognition::Closure, witnesses })
}

/// The spin group at `v`.
pub fn spin_group_with(t: &Transport, v: Vertex, budget: &Budget) -> Result<SpinGroup, GroupError> {
    let cg = t.graph();
    let labels = cg.label_set(v);
    let n = labels.len();
    let predicted = predict_group(cg, v);
    let full = GroupVerdict::Symmetric(n);
    let (cands, steps_used, folded) = match budget.method {
        Method::Exact => {
            let cands = holonomy_candidates(t, v);
            let stop = (!budget.exhaustive).then_some(full);
            let folded = fold(&cands, n, budget.closure_cap, stop)?;
            let steps = cands.iter().map(|w| w.chain.len()).max().unwrap_or(0);
            (cands, steps, folded)
        }
        Method::Bounded => {
            let stop = (!budget.exhaustive).then_some(predicted);
            let mut steps = budget.max_steps.max(2);
            loop {
                let cands = bounded_candidates(t, v, steps)?;
                let folded = fold(&cands, n, budget.closure_cap, stop)?;
                if folded.verdict == predicted || steps >= 8 {
                    break (cands, steps, folded);
                }
                steps = 8;
            }
        }
    };
    let over_generated = budget.exhaustive && folded.order > predicted.order();
    Ok(SpinGroup {
        vertex: v,
        labels,
        verdict: folded.verdict,
        order: folded.order,
        predicted,
        recognition: folded.recognition,
        witnesses: folded.witnesses,
        candidates: cands.len(),
        steps_used,
        over_generated,
    })
}

/// The spin group at `v`, using the built-in face-map tables.
pub fn spin_group_at(cg: &ConnectionGraph, v: Vertex, budget: &Budget) -> Result<SpinGroup, GroupError> {
    let t = Transport::new(cg)?;
    spin_group_with(&t, v, budget)
}

#[derive(Clone, Debug)]
pub struct VertexReport {
    pub vertex: Vertex,
    pub degree: usize,
    pub group: SpinGroup,
}

impl VertexReport {
    pub fn matches(&self) -> bool {
        self.group.matches() && !self.group.over_generated
    }
}

#[derive(Clone, Debug)]
pub struct ClassReport {
    pub class: GraphClass,
    pub graph: ConnectionGraph,
    pub vertices: Vec<VertexReport>,
}

impl ClassReport {
    pub fn match_all(&self) -> bool {
        self.vertices.iter().all(VertexReport::matches)
    }
}

/// Computes and checks the spin group of every vertex of the class.
pub fn verify_class_with(t: &Transport, gc: &GraphClass, budget: &Budget) -> Result<ClassReport, GroupError> {
    let cg = t.graph().clone();
    let vertices = cg
        .vertices()
        .into_iter()
        .map(|v| Ok(VertexReport { vertex: v, degree: cg.epsilon_degree(v), group: spin_group_with(t, v, budget)? }))
        .collect::<Result<Vec<_>, GroupError>>()?;
    Ok(ClassReport { class: gc.clone(), graph: cg, vertices })
}

pub fn verify_class(gc: &GraphClass, budget: &Budget) -> Result<ClassReport, GroupError> {
    let t = Transport::new(&build_connection_graph(gc))?;
    verify_class_with(&t, gc, budget)
}
