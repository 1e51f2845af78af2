//! Spin chains: based loops with a face and a cell per step.
//!
//! A chain is admissible when the composite of its face maps stays defined on
//! at least `r` labels of the start vertex. A composite on exactly `r` of the
//! `r + 1` labels of a full-degree vertex extends to a permutation by sending
//! the missing label to the missing image. At order 2 every loop vertex must
//! also share the start vertex's degree.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::face::{cells_containing, enumerate_faces, face_kind, face_with_vertices, Cell, Face, FaceError, FaceKind};
use crate::graph::{ClassIndex, ConnectionGraph, Vertex};
use crate::perm::{LabelMap, Permutation};
use crate::tables::FaceTables;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub cell: Cell,
    pub face: Face,
    pub next: Vertex,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinChain {
    pub start: Vertex,
    pub steps: Vec<Step>,
}

impl SpinChain {
    pub fn new(start: Vertex, steps: Vec<Step>) -> Self {
        SpinChain { start, steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The loop `start, next_1, .., next_N`.
    pub fn vertices(&self) -> Vec<Vertex> {
        std::iter::once(self.start).chain(self.steps.iter().map(|s| s.next)).collect()
    }

    /// The same loop traversed backwards.
    pub fn reverse(&self) -> SpinChain {
        let vs = self.vertices();
        let n = self.steps.len();
        let steps = (0..n)
            .map(|k| {
                let src = &self.steps[n - 1 - k];
                Step { cell: src.cell.clone(), face: src.face, next: vs[n - 1 - k] }
            })
            .collect();
        SpinChain { start: self.start, steps }
    }

    /// `self` followed by `other`; both must start at the same vertex.
    pub fn concat(&self, other: &SpinChain) -> Option<SpinChain> {
        (self.start == other.start).then(|| {
            let mut steps = self.steps.clone();
            steps.extend(other.steps.iter().cloned());
            SpinChain { start: self.start, steps }
        })
    }

    /// The chain with every vertex and face conjugated.
    pub fn conjugate(&self) -> SpinChain {
        SpinChain {
            start: self.start.conjugate(),
            steps: self
                .steps
                .iter()
                .map(|s| Step { cell: s.cell.clone(), face: s.face.conjugate(), next: s.next.conjugate() })
                .collect(),
        }
    }

    /// Parses the `Display` form `P -[P P1 ~P2 P2]-> P1 -[..]-> P`.
    /// A step may name its cell after a bar, `-[P P1 ~P3 P2 | 0,1,2,3]->`;
    /// without one the cell must be unique. Face vertices may be listed in
    /// any order.
    pub fn parse(cg: &ConnectionGraph, text: &str) -> Result<SpinChain, ChainParseError> {
        let err = |m: &str| ChainParseError(format!("{m} in `{text}`"));
        let mut rest = text.trim();
        let (head, tail) = rest.split_once("-[").ok_or_else(|| err("missing step"))?;
        let start: Vertex = head.trim().parse().map_err(|_| err("bad start vertex"))?;
        rest = tail;
        let mut steps = Vec::new();
        loop {
            let (inner, after) = rest.split_once("]->").ok_or_else(|| err("unterminated step"))?;
            let (face_txt, cell_txt) = match inner.split_once('|') {
                Some((f, c)) => (f, Some(c)),
                None => (inner, None),
            };
            let vs = face_txt
                .split_whitespace()
                .map(|s| s.parse::<Vertex>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| err("bad face vertex"))?;
            let face = face_with_vertices(cg, &vs).ok_or_else(|| err("no such face"))?;
            let cell = match cell_txt {
                Some(c) => Cell::new(
                    c.split(',')
                        .map(|x| x.trim().parse::<ClassIndex>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| err("bad cell"))?,
                ),
                None => {
                    let cells = cells_containing(cg, &face);
                    if cells.len() != 1 {
                        return Err(err("cell is ambiguous"));
                    }
                    cells[0].clone()
                }
            };
            let (next_txt, more) = match after.split_once("-[") {
                Some((n, m)) => (n, Some(m)),
                None => (after, None),
            };
            let next: Vertex = next_txt.trim().parse().map_err(|_| err("bad vertex"))?;
            steps.push(Step { cell, face, next });
            match more {
                Some(m) => rest = m,
                None => break,
            }
        }
        Ok(SpinChain { start, steps })
    }
}

impl fmt::Display for SpinChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.start)?;
        for s in &self.steps {
            if s.cell.classes().len() == 4 {
                write!(f, " -[{} | {}]-> {}", s.face, s.cell, s.next)?;
            } else {
                write!(f, " -[{}]-> {}", s.face, s.next)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse chain: {0}")]
pub struct ChainParseError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("step {index}: {vertex} is not on face {face}")]
    StepNotOnFace { index: usize, vertex: String, face: String },
    #[error("step {index}: face {face} is not in cell {cell}")]
    FaceNotInCell { index: usize, face: String, cell: String },
    #[error("step {index}: {face} is not a face of the graph")]
    NotAFace { index: usize, face: String },
    #[error("step {index}: cell {cell} is not a cell of the graph")]
    BadCell { index: usize, cell: String },
    #[error("step {index} stays at {vertex}")]
    DegenerateStep { index: usize, vertex: String },
    #[error("loop does not return to {0}")]
    LoopNotClosed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reason {
    /// Every composition is defined.
    Composable,
    /// The composite lost too many labels at the failing step.
    DomainMismatch,
    /// Order 2 only: the failing step reaches a vertex of another degree.
    DegreeMismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AdmissibilityVerdict {
    pub admissible: bool,
    pub failing_step: Option<usize>,
    pub reason: Reason,
}

/// A step option leaving a vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepOption {
    pub step: Step,
    pub map: LabelMap,
}

/// A connection graph together with its faces, cells and face maps.
#[derive(Clone, Debug)]
pub struct Transport {
    cg: ConnectionGraph,
    tables: Arc<FaceTables>,
    faces: Vec<Face>,
    options: HashMap<Vertex, Vec<StepOption>>,
}

impl Transport {
    pub fn new(cg: &ConnectionGraph) -> Result<Transport, FaceError> {
        Transport::with_tables(cg, FaceTables::builtin())
    }

    pub fn with_tables(cg: &ConnectionGraph, tables: Arc<FaceTables>) -> Result<Transport, FaceError> {
        let faces = enumerate_faces(cg);
        let mut options: HashMap<Vertex, Vec<StepOption>> =
            cg.vertices().into_iter().map(|v| (v, Vec::new())).collect();
        for face in &faces {
            for cell in cells_containing(cg, face) {
                for u in face.cycle() {
                    for v in face.cycle() {
                        if u == v {
                            continue;
                        }
                        let map = tables.face_map(cg, &cell, face, u, v)?;
                        options
                            .get_mut(&u)
                            .expect("face vertex in graph")
                            .push(StepOption { step: Step { cell: cell.clone(), face: *face, next: v }, map });
                    }
                }
            }
        }
        for opts in options.values_mut() {
            opts.sort_by(|a, b| a.step.cmp(&b.step));
        }
        Ok(Transport { cg: cg.clone(), tables, faces, options })
    }

    pub fn graph(&self) -> &ConnectionGraph {
        &self.cg
    }

    pub fn tables(&self) -> &Arc<FaceTables> {
        &self.tables
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Step options leaving `v`, sorted by `(face, cell, next)` order of [`Step`].
    pub fn options(&self, v: Vertex) -> &[StepOption] {
        self.options.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn step_map(&self, from: Vertex, step: &Step) -> Result<LabelMap, FaceError> {
        if let Some(opt) = self.options(from).iter().find(|o| o.step == *step) {
            return Ok(opt.map.clone());
        }
        self.tables.face_map(&self.cg, &step.cell, &step.face, from, step.next)
    }

    pub fn validate_structure(&self, chain: &SpinChain) -> Result<(), ChainError> {
        let cg = &self.cg;
        let mut cur = chain.start;
        if !cg.contains(cur) {
            return Err(ChainError::LoopNotClosed(cur.to_string()));
        }
        for (index, s) in chain.steps.iter().enumerate() {
            if !s.face.is_cycle_of(cg) {
                return Err(ChainError::NotAFace { index, face: s.face.to_string() });
            }
            if !s.cell.fits(cg.order()) {
                return Err(ChainError::BadCell { index, cell: s.cell.to_string() });
            }
            if !s.cell.contains_face(&s.face) {
                return Err(ChainError::FaceNotInCell { index, face: s.face.to_string(), cell: s.cell.to_string() });
            }
            for w in [cur, s.next] {
                if !s.face.contains(w) {
                    return Err(ChainError::StepNotOnFace { index, vertex: w.to_string(), face: s.face.to_string() });
                }
            }
            if s.next == cur {
                return Err(ChainError::DegenerateStep { index, vertex: cur.to_string() });
            }
            cur = s.next;
        }
        if chain.steps.is_empty() || cur != chain.start {
            return Err(ChainError::LoopNotClosed(chain.start.to_string()));
        }
        Ok(())
    }

    /// Verdict and, when admissible, the permutation of the start labels.
    fn run(&self, chain: &SpinChain) -> Result<(AdmissibilityVerdict, Option<Permutation>), ChainError> {
        self.validate_structure(chain)?;
        let cg = &self.cg;
        let r = cg.order();
        let labels = cg.label_set(chain.start);
        let start_deg = cg.epsilon_degree(chain.start);
        let mut carried: Vec<(ClassIndex, ClassIndex)> = labels.iter().map(|&l| (l, l)).collect();
        let mut cur = chain.start;
        for (k, s) in chain.steps.iter().enumerate() {
            if r == 2 && cg.epsilon_degree(s.next) != start_deg {
                let v =
                    AdmissibilityVerdict { admissible: false, failing_step: Some(k), reason: Reason::DegreeMismatch };
                return Ok((v, None));
            }
            let map = self.step_map(cur, s).expect("validated step has a map");
            carried = carried.into_iter().filter_map(|(a, b)| map.get(b).map(|c| (a, c))).collect();
            if carried.len() < r {
                let v =
                    AdmissibilityVerdict { admissible: false, failing_step: Some(k), reason: Reason::DomainMismatch };
                return Ok((v, None));
            }
            cur = s.next;
        }
        let verdict = AdmissibilityVerdict { admissible: true, failing_step: None, reason: Reason::Composable };
        Ok((verdict, Some(extend(&labels, &carried))))
    }

    pub fn is_admissible(&self, chain: &SpinChain) -> Result<AdmissibilityVerdict, ChainError> {
        self.run(chain).map(|(v, _)| v)
    }

    /// The permutation of `label_set(start)` produced by the chain; the
    /// identity when the chain is not admissible.
    pub fn evaluate(&self, chain: &SpinChain) -> Result<Permutation, ChainError> {
        let (_, p) = self.run(chain)?;
        Ok(p.unwrap_or_else(|| Permutation::identity(self.cg.epsilon_degree(chain.start))))
    }

    /// Every structurally valid chain at `v` with at most `max_steps` steps,
    /// in depth-first order of step options.
    pub fn chains(&self, v: Vertex, max_steps: usize) -> ChainIter<'_> {
        ChainIter { t: self, start: v, max_steps, path: Vec::new(), stack: vec![0] }
    }

    pub fn is_basic(&self, chain: &SpinChain) -> bool {
        chain.steps.iter().all(|s| face_kind(&s.face) == FaceKind::Standard)
    }

    /// A random walk of `walk` steps from `start`, closed by a shortest
    /// return path. `None` if `start` has no step options.
    pub fn random_loop<R: Rng + ?Sized>(&self, rng: &mut R, start: Vertex, walk: usize) -> Option<SpinChain> {
        let mut steps = Vec::new();
        let mut cur = start;
        for _ in 0..walk.max(1) {
            let opts = self.options(cur);
            if opts.is_empty() {
                return None;
            }
            let o = &opts[rng.gen_range(0..opts.len())];
            steps.push(o.step.clone());
            cur = o.step.next;
        }
        if cur != start {
            steps.extend(self.shortest_path(cur, start)?);
        }
        Some(SpinChain { start, steps })
    }

    fn shortest_path(&self, from: Vertex, to: Vertex) -> Option<Vec<Step>> {
        let mut prev: HashMap<Vertex, (Vertex, Step)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                let mut path = Vec::new();
                let mut x = to;
                while x != from {
                    let (p, s) = prev[&x].clone();
                    path.push(s);
                    x = p;
                }
                path.reverse();
                return Some(path);
            }
            for o in self.options(u) {
                let w = o.step.next;
                if w != from && !prev.contains_key(&w) {
                    prev.insert(w, (u, o.step.clone()));
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

/// Extends a composite defined on all but at most one label to a permutation
/// of positions in `labels`.
pub(crate) fn extend(labels: &[ClassIndex], carried: &[(ClassIndex, ClassIndex)]) -> Permutation {
    let pos = |c: ClassIndex| labels.iter().position(|&l| l == c).expect("label of start vertex");
    let n = labels.len();
    let mut images = vec![usize::MAX; n];
    let mut hit = vec![false; n];
    for &(a, b) in carried {
        images[pos(a)] = pos(b);
        hit[pos(b)] = true;
    }
    if let Some(src) = images.iter().position(|&x| x == usize::MAX) {
        let dst = hit.iter().position(|&h| !h).expect("one free image");
        images[src] = dst;
    }
    Permutation::from_images(images).expect("extended composite is a bijection")
}

/// Lazy depth-first enumeration of chains at a vertex.
pub struct ChainIter<'a> {
    t: &'a Transport,
    start: Vertex,
    max_steps: usize,
    path: Vec<Step>,
    stack: Vec<usize>,
}

impl Iterator for ChainIter<'_> {
    type Item = SpinChain;

    fn next(&mut self) -> Option<SpinChain> {
        loop {
            let depth = self.path.len();
            let cur = self.path.last().map(|s| s.next).unwrap_or(self.start);
            let idx = *self.stack.last()?;
            let opts = self.t.options(cur);
            if depth >= self.max_steps || idx >= opts.len() {
                self.stack.pop();
                self.path.pop()?;
                continue;
            }
            *self.stack.last_mut().expect("nonempty") += 1;
            let step = opts[idx].step.clone();
            let closes = step.next == self.start;
            self.path.push(step);
            self.stack.push(0);
            if closes {
                return Some(SpinChain { start: self.start, steps: self.path.clone() });
            }
        }
    }
}

fn builtin_transport(cg: &ConnectionGraph) -> Transport {
    Transport::new(cg).expect("built-in tables cover every graph")
}

pub fn validate_structure(cg: &ConnectionGraph, chain: &SpinChain) -> Result<(), ChainError> {
    builtin_transport(cg).validate_structure(chain)
}

pub fn is_admissible(cg: &ConnectionGraph, chain: &SpinChain) -> Result<AdmissibilityVerdict, ChainError> {
    builtin_transport(cg).is_admissible(chain)
}

pub fn evaluate(cg: &ConnectionGraph, chain: &SpinChain) -> Result<Permutation, ChainError> {
    builtin_transport(cg).evaluate(chain)
}

/// Owned variant of [`Transport::chains`].
pub fn enumerate_chains(cg: &ConnectionGraph, v: Vertex, max_steps: usize) -> Vec<SpinChain> {
    builtin_transport(cg).chains(v, max_steps).collect()
}

pub fn is_basic(chain: &SpinChain) -> bool {
    chain.steps.iter().all(|s| face_kind(&s.face) == FaceKind::Standard)
}
