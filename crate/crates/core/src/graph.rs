//! Class parameters, vertices and connection graphs.
//!
//! A graph of order `r` has `2r + 2` vertices: one pair `Q`, `~Q` for every
//! class `0..=r`. Class 0 is the head `P`, class `l` is `P_l`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Index of a conjugate-pair class, `0..=r`.
pub type ClassIndex = usize;

/// A vertex of a connection graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub class: ClassIndex,
    pub tilded: bool,
}

impl Vertex {
    pub const fn new(class: ClassIndex, tilded: bool) -> Self {
        Vertex { class, tilded }
    }

    /// Image under the hyperelliptic involution.
    pub const fn conjugate(self) -> Self {
        Vertex { class: self.class, tilded: !self.tilded }
    }

    /// Bipartition side in the basic graph.
    pub const fn side(self) -> bool {
        self.tilded ^ (self.class == 0)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tilded {
            f.write_str("~")?;
        }
        if self.class == 0 {
            f.write_str("P")
        } else {
            write!(f, "P{}", self.class)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed vertex name `{0}`")]
pub struct VertexParseError(pub String);

impl FromStr for Vertex {
    type Err = VertexParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let (tilded, rest) = match t.strip_prefix('~') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let digits = rest.strip_prefix('P').ok_or_else(|| VertexParseError(s.to_string()))?;
        let class = if digits.is_empty() {
            0
        } else {
            let c: ClassIndex = digits.parse().map_err(|_| VertexParseError(s.to_string()))?;
            if c == 0 || digits.starts_with('0') {
                return Err(VertexParseError(s.to_string()));
            }
            c
        };
        Ok(Vertex { class, tilded })
    }
}

/// Violated class invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(usize),
    #[error("order must satisfy r < genus, got r = {order} at genus {genus}")]
    OrderTooLarge { genus: usize, order: usize },
    #[error("p must have exactly r = {order} entries, got {len}")]
    WrongLength { order: usize, len: usize },
    #[error("parameters give genus {computed}, not {genus}")]
    GenusMismatch { genus: usize, computed: usize },
}

/// The isomorphism class `S_{i,p_1..p_r}(g)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphClass {
    genus: usize,
    order: usize,
    i: usize,
    p: Vec<usize>,
}

impl GraphClass {
    pub fn new(genus: usize, order: usize, i: usize, p: Vec<usize>) -> Result<Self, ClassError> {
        if genus < 2 {
            return Err(ClassError::GenusTooSmall(genus));
        }
        if order >= genus {
            return Err(ClassError::OrderTooLarge { genus, order });
        }
        if p.len() != order {
            return Err(ClassError::WrongLength { order, len: p.len() });
        }
        let computed = genus_of(order, i, &p);
        if computed != genus {
            return Err(ClassError::GenusMismatch { genus, computed });
        }
        Ok(GraphClass { genus, order, i, p })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn p(&self) -> &[usize] {
        &self.p
    }
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S_{{{}", self.i)?;
        for x in &self.p {
            write!(f, ",{x}")?;
        }
        write!(f, "}}(g={})", self.genus)
    }
}

/// Head multiplicities `(k_0, .., k_r)`.
pub fn k_tuple(gc: &GraphClass) -> Vec<usize> {
    let mut k = Vec::with_capacity(gc.order + 1);
    let mut acc = gc.i + 1;
    k.push(acc);
    for &pl in &gc.p {
        acc += pl;
        k.push(acc);
    }
    k
}

/// Genus of the class with parameters `(i, p)` at order `r = p.len()`.
///
/// Equals `i + k_1 + .. + k_r`.
pub fn genus_of(order: usize, i: usize, p: &[usize]) -> usize {
    debug_assert_eq!(order, p.len());
    let r = order;
    let weighted: usize = p.iter().enumerate().map(|(idx, &pl)| (r - idx) * pl).sum();
    (r + 1) * (i + 1) - 1 + weighted
}

/// All classes of the given genus, sorted by `(order, i, p)`.
pub fn enumerate_classes(genus: usize, order: Option<usize>) -> Vec<GraphClass> {
    if genus < 2 {
        return Vec::new();
    }
    let orders: Vec<usize> = match order {
        Some(r) if r < genus => vec![r],
        Some(_) => Vec::new(),
        None => (0..genus).collect(),
    };
    let mut out = Vec::new();
    for r in orders {
        // genus = (r+1)(i+1) - 1 + sum (r+1-l) p_l
        let mut i = 0;
        while (r + 1) * (i + 1) - 1 <= genus {
            let rest = genus + 1 - (r + 1) * (i + 1);
            let mut p = vec![0; r];
            collect_p(r, 0, rest, &mut p, &mut |p| {
                out.push(GraphClass { genus, order: r, i, p: p.to_vec() });
            });
            i += 1;
        }
    }
    out.sort();
    out
}

fn collect_p(r: usize, idx: usize, rest: usize, p: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    if idx == r {
        if rest == 0 {
            emit(p);
        }
        return;
    }
    let weight = r - idx;
    for v in 0..=rest / weight {
        p[idx] = v;
        collect_p(r, idx + 1, rest - v * weight, p, emit);
    }
    p[idx] = 0;
}

/// Classes `l` with `k_l = k_0`. Class 0 is always a head.
pub fn heads(gc: &GraphClass) -> BTreeSet<ClassIndex> {
    let k = k_tuple(gc);
    (0..k.len()).filter(|&l| k[l] == k[0]).collect()
}

/// Basic graph of order `r` plus one chord per connected conjugate pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConnectionGraph {
    order: usize,
    connected: Vec<bool>,
}

impl ConnectionGraph {
    /// Panics if a connected class exceeds `order`.
    pub fn new(order: usize, connected: impl IntoIterator<Item = ClassIndex>) -> Self {
        let mut flags = vec![false; order + 1];
        for c in connected {
            assert!(c <= order, "class {c} out of range for order {order}");
            flags[c] = true;
        }
        ConnectionGraph { order, connected: flags }
    }

    /// The undecorated graph `S(r)`.
    pub fn basic(order: usize) -> Self {
        Self::new(order, std::iter::empty())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_connected(&self, class: ClassIndex) -> bool {
        self.connected.get(class).copied().unwrap_or(false)
    }

    pub fn connected_pairs(&self) -> BTreeSet<ClassIndex> {
        (0..=self.order).filter(|&c| self.connected[c]).collect()
    }

    /// Vertices sorted as `P, ~P, P1, ~P1, ..`.
    pub fn vertices(&self) -> Vec<Vertex> {
        (0..=self.order).flat_map(|c| [Vertex::new(c, false), Vertex::new(c, true)]).collect()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.class <= self.order
    }

    pub fn is_basic_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.contains(u) && self.contains(v) && u.side() != v.side() && u.conjugate() != v
    }

    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        if !self.contains(u) || !self.contains(v) {
            return false;
        }
        if u.conjugate() == v {
            return self.connected[u.class];
        }
        self.is_basic_edge(u, v)
    }

    pub fn neighbors(&self, u: Vertex) -> Vec<Vertex> {
        self.vertices().into_iter().filter(|&v| self.adjacent(u, v)).collect()
    }

    /// Undirected edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let vs = self.vertices();
        let mut out = Vec::new();
        for (a, &u) in vs.iter().enumerate() {
            for &v in &vs[a + 1..] {
                if self.adjacent(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Size of the label set at `v`: `r`, or `r + 1` when its pair is connected.
    pub fn epsilon_degree(&self, v: Vertex) -> usize {
        self.order + usize::from(self.is_connected(v.class))
    }

    /// Ordered labels of `v`: the other classes ascending, then the own class
    /// when the pair is connected.
    pub fn label_set(&self, v: Vertex) -> Vec<ClassIndex> {
        let mut out: Vec<ClassIndex> = (0..=self.order).filter(|&c| c != v.class).collect();
        if self.is_connected(v.class) {
            out.push(v.class);
        }
        out
    }

    /// Conjugation applied to a vertex list.
    pub fn conjugate_all(vs: &[Vertex]) -> Vec<Vertex> {
        vs.iter().map(|v| v.conjugate()).collect()
    }
}

/// Connection graph of a class: pair `l` is connected iff `k_l >= 2`.
pub fn build_connection_graph(gc: &GraphClass) -> ConnectionGraph {
    let k = k_tuple(gc);
    ConnectionGraph::new(gc.order, (0..k.len()).filter(|&l| k[l] >= 2))
}

/// Multiplicity data of the full graph at order `r <= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiplicities {
    /// Straight edges `(u, v, m)` with `u < v` and `m >= 1`.
    pub straight: Vec<(Vertex, Vertex, usize)>,
    /// Directed arc edges `(from, to, m)` with `m >= 1`.
    pub arcs: Vec<(Vertex, Vertex, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("edge multiplicities are only available for order r <= 2, got r = {0}")]
pub struct MultiplicityUnsupported(pub usize);

/// Edge labels of the full spin graph for `r <= 2`.
pub fn edge_multiplicities_r_le_2(gc: &GraphClass) -> Result<Multiplicities, MultiplicityUnsupported> {
    let r = gc.order;
    if r > 2 {
        return Err(MultiplicityUnsupported(r));
    }
    let k = k_tuple(gc);
    let v = |c: usize, t: bool| Vertex::new(c, t);
    let mut straight = Vec::new();
    let mut arcs = Vec::new();
    for (l, &kl) in k.iter().enumerate() {
        if kl >= 2 {
            straight.push((v(l, false), v(l, true), kl - 1));
        }
    }
    match r {
        0 => {}
        1 => {
            let p1 = gc.p[0];
            straight.push((v(0, false), v(1, false), k[0]));
            straight.push((v(0, true), v(1, true), k[0]));
            arcs.push((v(1, false), v(0, false), p1));
            arcs.push((v(1, true), v(0, true), p1));
        }
        _ => {
            let (p1, p2) = (gc.p[0], gc.p[1]);
            straight.push((v(0, false), v(1, false), k[0]));
            straight.push((v(0, false), v(2, false), k[0]));
            straight.push((v(0, true), v(1, true), k[0]));
            straight.push((v(0, true), v(2, true), k[0]));
            straight.push((v(1, false), v(2, true), k[1]));
            straight.push((v(2, false), v(1, true), k[1]));
            arcs.push((v(2, false), v(0, false), p1));
            arcs.push((v(1, false), v(0, false), p1 + p2));
            arcs.push((v(1, true), v(0, true), p1 + p2));
            arcs.push((v(2, true), v(0, true), p1));
            arcs.push((v(1, true), v(2, false), p2));
            arcs.push((v(1, false), v(2, true), p2));
        }
    }
    let norm = |(a, b, m): (Vertex, Vertex, usize)| if a <= b { (a, b, m) } else { (b, a, m) };
    let mut straight: Vec<_> = straight.into_iter().map(norm).filter(|e| e.2 > 0).collect();
    straight.sort();
    let mut arcs: Vec<_> = arcs.into_iter().filter(|e| e.2 > 0).collect();
    arcs.sort();
    Ok(Multiplicities { straight, arcs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gc(g: usize, r: usize, i: usize, p: &[usize]) -> GraphClass {
        GraphClass::new(g, r, i, p.to_vec()).unwrap()
    }

    #[test]
    fn k_tuples() {
        assert_eq!(k_tuple(&gc(3, 2, 0, &[0, 1])), vec![1, 1, 2]);
        assert_eq!(k_tuple(&gc(5, 2, 1, &[0, 0])), vec![2, 2, 2]);
    }

    #[test]
    fn genus_formula_low_orders() {
        assert_eq!(genus_of(1, 2, &[0]), 5);
        assert_eq!(genus_of(3, 0, &[0, 0, 1]), 4);
        assert_eq!(genus_of(4, 0, &[0, 0, 0, 0]), 4);
        for i in 0..4 {
            for p1 in 0..4 {
                assert_eq!(genus_of(1, i, &[p1]), 2 * i + p1 + 1);
                for p2 in 0..4 {
                    assert_eq!(genus_of(2, i, &[p1, p2]), 3 * i + 2 * p1 + p2 + 2);
                    for p3 in 0..3 {
                        assert_eq!(genus_of(3, i, &[p1, p2, p3]), 4 * i + 3 * p1 + 2 * p2 + p3 + 3);
                    }
                }
            }
        }
    }

    #[test]
    fn vertex_names_round_trip() {
        for c in 0..12 {
            for t in [false, true] {
                let v = Vertex::new(c, t);
                assert_eq!(v.to_string().parse::<Vertex>().unwrap(), v);
            }
        }
        assert!("Q".parse::<Vertex>().is_err());
        assert!("P0".parse::<Vertex>().is_err());
        assert!("P01".parse::<Vertex>().is_err());
    }

    #[test]
    fn one_chord_order_two_adjacency() {
        let cg = build_connection_graph(&gc(3, 2, 0, &[0, 1]));
        assert_eq!(cg.connected_pairs(), BTreeSet::from([2]));
        assert_eq!(cg.edges().len(), 7);
        let p = Vertex::new(0, false);
        assert_eq!(cg.epsilon_degree(p), 2);
        assert_eq!(cg.label_set(p), vec![1, 2]);
        assert_eq!(cg.label_set(Vertex::new(2, true)), vec![0, 1, 2]);
    }

    #[test]
    fn invalid_classes() {
        assert_eq!(GraphClass::new(1, 0, 1, vec![]), Err(ClassError::GenusTooSmall(1)));
        assert!(matches!(GraphClass::new(3, 3, 0, vec![0, 0, 0]), Err(ClassError::OrderTooLarge { .. })));
        assert!(matches!(GraphClass::new(3, 2, 0, vec![0]), Err(ClassError::WrongLength { .. })));
        assert!(matches!(GraphClass::new(3, 2, 0, vec![0, 0]), Err(ClassError::GenusMismatch { .. })));
    }
}
