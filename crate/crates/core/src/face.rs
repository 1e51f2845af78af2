//! Quadrilateral faces, standard 3-cells and the label bijections they induce.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::graph::{ClassIndex, ConnectionGraph, Vertex};
use crate::perm::LabelMap;

/// A 4-cycle of a connection graph, stored as its least rotation or reflection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    cycle: [Vertex; 4],
}

impl Face {
    /// Canonical form of the cycle `a b c d`. Does not check adjacency.
    pub fn new(cycle: [Vertex; 4]) -> Self {
        let mut best = cycle;
        for start in 0..4 {
            for dir in [1usize, 3] {
                let cand = [
                    cycle[start],
                    cycle[(start + dir) % 4],
                    cycle[(start + 2 * dir) % 4],
                    cycle[(start + 3 * dir) % 4],
                ];
                if cand < best {
                    best = cand;
                }
            }
        }
        Face { cycle: best }
    }

    pub fn cycle(&self) -> [Vertex; 4] {
        self.cycle
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.cycle.contains(&v)
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.cycle.iter().position(|&w| w == v)
    }

    pub fn classes(&self) -> BTreeSet<ClassIndex> {
        self.cycle.iter().map(|v| v.class).collect()
    }

    pub fn vertex_set(&self) -> BTreeSet<Vertex> {
        self.cycle.iter().copied().collect()
    }

    /// The face `F'` obtained by conjugating every vertex.
    pub fn conjugate(&self) -> Face {
        Face::new(self.cycle.map(Vertex::conjugate))
    }

    pub fn is_cycle_of(&self, cg: &ConnectionGraph) -> bool {
        let distinct = self.vertex_set().len() == 4;
        distinct && (0..4).all(|i| cg.adjacent(self.cycle[i], self.cycle[(i + 1) % 4]))
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.cycle;
        write!(f, "{a} {b} {c} {d}")
    }
}

/// Number of conjugate pairs among the four vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaceKind {
    Standard,
    OnePair,
    TwoPair,
}

pub fn face_kind(face: &Face) -> FaceKind {
    let c = face.cycle();
    let pairs = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| c[i].conjugate() == c[j]).count();
    match pairs {
        0 => FaceKind::Standard,
        1 => FaceKind::OnePair,
        _ => FaceKind::TwoPair,
    }
}

/// All 4-cycles of the graph, sorted.
pub fn enumerate_faces(cg: &ConnectionGraph) -> Vec<Face> {
    let mut out = BTreeSet::new();
    for a in cg.vertices() {
        for b in cg.neighbors(a) {
            for c in cg.neighbors(b) {
                if c == a {
                    continue;
                }
                for d in cg.neighbors(c) {
                    if d != a && d != b && cg.adjacent(d, a) {
                        out.insert(Face::new([a, b, c, d]));
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// The face of `cg` with the given vertex set, if any.
pub fn face_with_vertices(cg: &ConnectionGraph, vertices: &[Vertex]) -> Option<Face> {
    let set: BTreeSet<Vertex> = vertices.iter().copied().collect();
    if set.len() != 4 || vertices.len() != 4 {
        return None;
    }
    enumerate_faces(cg).into_iter().find(|f| f.vertex_set() == set)
}

/// A standard 3-cell: four conjugate-pair classes. At order `r <= 3` the
/// single cell is the whole class set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    classes: Vec<ClassIndex>,
}

impl Cell {
    /// Sorts and deduplicates the classes.
    pub fn new(classes: impl IntoIterator<Item = ClassIndex>) -> Self {
        let set: BTreeSet<ClassIndex> = classes.into_iter().collect();
        Cell { classes: set.into_iter().collect() }
    }

    pub fn whole(order: usize) -> Self {
        Cell::new(0..=order)
    }

    pub fn classes(&self) -> &[ClassIndex] {
        &self.classes
    }

    pub fn contains_class(&self, c: ClassIndex) -> bool {
        self.classes.binary_search(&c).is_ok()
    }

    pub fn contains_face(&self, face: &Face) -> bool {
        face.classes().iter().all(|&c| self.contains_class(c))
    }

    /// Whether this is a valid cell of a graph of the given order.
    pub fn fits(&self, order: usize) -> bool {
        if order <= 3 {
            *self == Cell::whole(order)
        } else {
            self.classes.len() == 4 && self.classes.iter().all(|&c| c <= order)
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.classes.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Cells containing the face, sorted.
pub fn cells_containing(cg: &ConnectionGraph, face: &Face) -> Vec<Cell> {
    let r = cg.order();
    if r <= 3 {
        return vec![Cell::whole(r)];
    }
    let fixed: Vec<ClassIndex> = face.classes().into_iter().collect();
    let free: Vec<ClassIndex> = (0..=r).filter(|c| !fixed.contains(c)).collect();
    let need = 4 - fixed.len();
    let mut out = Vec::new();
    choose(&free, need, 0, &mut Vec::new(), &mut |extra| {
        out.push(Cell::new(fixed.iter().chain(extra.iter()).copied()));
    });
    out.sort();
    out
}

fn choose(pool: &[usize], k: usize, from: usize, acc: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    if acc.len() == k {
        emit(acc);
        return;
    }
    for idx in from..pool.len() {
        acc.push(pool[idx]);
        choose(pool, k, idx + 1, acc, emit);
        acc.pop();
    }
}

/// All 4-element class subsets of an order-`r` graph.
pub fn all_cells(order: usize) -> Vec<Cell> {
    if order <= 3 {
        return vec![Cell::whole(order)];
    }
    let pool: Vec<usize> = (0..=order).collect();
    let mut out = Vec::new();
    choose(&pool, 4, 0, &mut Vec::new(), &mut |c| out.push(Cell::new(c.iter().copied())));
    out
}

/// An order-3 graph isomorphic to the restriction of a graph to a cell.
///
/// Local class `j` is global class `classes[j]`. When the least cell class
/// is not 0, its two vertices swap tildes so that adjacency is preserved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedCell {
    pub graph: ConnectionGraph,
    pub classes: [ClassIndex; 4],
    pub flip_base: bool,
}

impl DecoratedCell {
    pub fn to_local(&self, v: Vertex) -> Option<Vertex> {
        let j = self.classes.iter().position(|&c| c == v.class)?;
        Some(Vertex::new(j, v.tilded ^ (j == 0 && self.flip_base)))
    }

    pub fn to_global(&self, v: Vertex) -> Vertex {
        Vertex::new(self.classes[v.class], v.tilded ^ (v.class == 0 && self.flip_base))
    }

    pub fn local_face(&self, face: &Face) -> Option<Face> {
        let c = face.cycle();
        Some(Face::new([self.to_local(c[0])?, self.to_local(c[1])?, self.to_local(c[2])?, self.to_local(c[3])?]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FaceError {
    #[error("cell {0} is not a 4-class cell of this graph")]
    BadCell(String),
    #[error("face {face} is not contained in cell {cell}")]
    FaceNotInCell { face: String, cell: String },
    #[error("face {0} is not a face of this graph")]
    NotAFace(String),
    #[error("{vertex} is not a vertex of face {face}")]
    VertexNotOnFace { vertex: String, face: String },
    #[error("face maps need two distinct vertices, got {0} twice")]
    SameVertex(String),
    #[error("no table entry for {0}")]
    MissingEntry(String),
}

/// Restriction of `cg` to a 4-class cell, renamed to order 3.
pub fn decorated_cell(cg: &ConnectionGraph, cell: &Cell) -> Result<DecoratedCell, FaceError> {
    let cls = cell.classes();
    if cls.len() != 4 || cls.iter().any(|&c| c > cg.order()) {
        return Err(FaceError::BadCell(cell.to_string()));
    }
    let classes = [cls[0], cls[1], cls[2], cls[3]];
    let graph = ConnectionGraph::new(3, (0..4).filter(|&j| cg.is_connected(classes[j])));
    Ok(DecoratedCell { graph, classes, flip_base: classes[0] != 0 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Role {
    Succ,
    Pred,
    Third,
    Extra,
    Fixed(ClassIndex),
}

/// Role of each label of `q` relative to the face and cell.
fn roles(cg: &ConnectionGraph, cell: &Cell, face: &Face, q: Vertex) -> Vec<(Role, ClassIndex)> {
    let c = face.cycle();
    let i = face.position(q).expect("vertex on face");
    let r = cg.order();
    let face_classes = face.classes();
    let spare: Vec<ClassIndex> = cell.classes().iter().copied().filter(|x| !face_classes.contains(x)).collect();
    let full = cg.epsilon_degree(q) == r + 1;
    let mut out = vec![(Role::Succ, c[(i + 1) % 4].class), (Role::Pred, c[(i + 3) % 4].class)];
    let mut extra = None;
    match face_kind(face) {
        FaceKind::Standard => {
            out.push((Role::Third, c[(i + 2) % 4].class));
            if full {
                extra = Some(q.class);
            }
        }
        FaceKind::OnePair => {
            let s = spare.first().copied();
            if face.contains(q.conjugate()) {
                out.push((Role::Third, c[(i + 2) % 4].class));
                extra = s;
            } else if full {
                out.push((Role::Third, q.class));
                extra = s;
            } else if let Some(s) = s {
                out.push((Role::Third, s));
            }
        }
        FaceKind::TwoPair => {
            out.extend(spare.iter().map(|&m| (Role::Fixed(m), m)));
        }
    }
    if let Some(e) = extra {
        out.push((Role::Extra, e));
    }
    out.extend((0..=r).filter(|&m| !cell.contains_class(m)).map(|m| (Role::Fixed(m), m)));
    out
}

/// Face map derived from label roles: a label of `u` goes to the label of `v`
/// that plays the same role on the face.
///
/// This is the generator of the shipped tables; lookups go through
/// [`crate::tables::FaceTables`].
pub fn synthesize_face_map(
    cg: &ConnectionGraph,
    cell: &Cell,
    face: &Face,
    u: Vertex,
    v: Vertex,
) -> Result<LabelMap, FaceError> {
    check_map_args(cg, cell, face, u, v)?;
    let ru = roles(cg, cell, face, u);
    let rv = roles(cg, cell, face, v);
    let pairs = ru.iter().filter_map(|(role, a)| rv.iter().find(|(r2, _)| r2 == role).map(|(_, b)| (*a, *b))).collect();
    Ok(LabelMap::from_pairs(pairs).expect("roles are injective"))
}

pub(crate) fn check_map_args(
    cg: &ConnectionGraph,
    cell: &Cell,
    face: &Face,
    u: Vertex,
    v: Vertex,
) -> Result<(), FaceError> {
    if !cell.fits(cg.order()) {
        return Err(FaceError::BadCell(cell.to_string()));
    }
    if !face.is_cycle_of(cg) {
        return Err(FaceError::NotAFace(face.to_string()));
    }
    if !cell.contains_face(face) {
        return Err(FaceError::FaceNotInCell { face: face.to_string(), cell: cell.to_string() });
    }
    for w in [u, v] {
        if !face.contains(w) {
            return Err(FaceError::VertexNotOnFace { vertex: w.to_string(), face: face.to_string() });
        }
    }
    if u == v {
        return Err(FaceError::SameVertex(u.to_string()));
    }
    Ok(())
}

/// The face map `u -> v` from the built-in tables.
pub fn face_map(cg: &ConnectionGraph, cell: &Cell, face: &Face, u: Vertex, v: Vertex) -> Result<LabelMap, FaceError> {
    crate::tables::FaceTables::builtin().face_map(cg, cell, face, u, v)
}
