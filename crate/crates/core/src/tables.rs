//! Face-map tables and their text format.
//!
//! Entries are keyed by order (1..=3), connection pattern, face and ordered
//! vertex pair. Larger orders reach the order-3 entries through
//! [`decorated_cell`]; labels of classes outside the cell map to themselves.
//!
//! ```text
//! spin-atlas-face-maps v1
//! order=2 pattern=2 face=P,P1,~P2,P2 from=P to=P1 map=1>2,2>0
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::face::{
    cells_containing, check_map_args, decorated_cell, enumerate_faces, synthesize_face_map, Cell, Face, FaceError,
};
use crate::graph::{ClassIndex, ConnectionGraph, Vertex};
use crate::perm::LabelMap;

pub const HEADER: &str = "spin-atlas-face-maps v1";

const BUILTIN: &str = include_str!("../data/face_maps.v1.txt");

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TableKey {
    pub order: usize,
    pub pattern: Vec<ClassIndex>,
    pub face: Face,
    pub from: Vertex,
    pub to: Vertex,
}

#[derive(Debug, Error)]
pub enum TableError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn parse_err(line: usize, msg: impl Into<String>) -> TableError {
    TableError::Parse { line, msg: msg.into() }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FaceTables {
    entries: BTreeMap<TableKey, LabelMap>,
}

impl FaceTables {
    /// Tables shipped with the library.
    pub fn builtin() -> Arc<FaceTables> {
        static CELL: OnceLock<Arc<FaceTables>> = OnceLock::new();
        CELL.get_or_init(|| Arc::new(FaceTables::parse(BUILTIN).expect("shipped face-map tables parse"))).clone()
    }

    /// Tables generated from the label-role rules for every order `1..=3`
    /// and every connection pattern.
    pub fn synthesize() -> FaceTables {
        let mut entries = BTreeMap::new();
        for order in 1..=3usize {
            for bits in 0u32..(1 << (order + 1)) {
                let pattern: Vec<ClassIndex> = (0..=order).filter(|&c| bits >> c & 1 == 1).collect();
                let cg = ConnectionGraph::new(order, pattern.iter().copied());
                let cell = Cell::whole(order);
                for face in enumerate_faces(&cg) {
                    for from in face.cycle() {
                        for to in face.cycle() {
                            if from == to {
                                continue;
                            }
                            let map = synthesize_face_map(&cg, &cell, &face, from, to).expect("valid face");
                            let key = TableKey { order, pattern: pattern.clone(), face, from, to };
                            entries.insert(key, map);
                        }
                    }
                }
            }
        }
        FaceTables { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &TableKey) -> Option<&LabelMap> {
        self.entries.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TableKey, &LabelMap)> {
        self.entries.iter()
    }

    pub fn load(path: &Path) -> Result<FaceTables, TableError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| TableError::Io { path: path.display().to_string(), source })?;
        FaceTables::parse(&text)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(HEADER);
        out.push('\n');
        for (k, m) in &self.entries {
            let [a, b, c, d] = k.face.cycle();
            let _ = writeln!(
                out,
                "order={} pattern={} face={a},{b},{c},{d} from={} to={} map={}",
                k.order,
                join_or_dash(k.pattern.iter().map(ToString::to_string)),
                k.from,
                k.to,
                join_or_dash(m.pairs().iter().map(|(x, y)| format!("{x}>{y}"))),
            );
        }
        out
    }

    pub fn parse(text: &str) -> Result<FaceTables, TableError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h == HEADER => {}
            _ => return Err(parse_err(1, format!("expected header `{HEADER}`"))),
        }
        let mut entries = BTreeMap::new();
        for (idx, line) in lines {
            let n = idx + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<(&str, &str)> = line
                .split(' ')
                .map(|kv| kv.split_once('=').ok_or_else(|| parse_err(n, format!("bad field `{kv}`"))))
                .collect::<Result<_, _>>()?;
            let names: Vec<&str> = fields.iter().map(|f| f.0).collect();
            if names != ["order", "pattern", "face", "from", "to", "map"] {
                return Err(parse_err(n, "fields must be order, pattern, face, from, to, map"));
            }
            let order: usize = fields[0].1.parse().map_err(|_| parse_err(n, "bad order"))?;
            let pattern = split_dash(fields[1].1)
                .map(|s| s.parse::<ClassIndex>().map_err(|_| parse_err(n, "bad pattern")))
                .collect::<Result<Vec<_>, _>>()?;
            let vs = fields[2]
                .1
                .split(',')
                .map(|s| s.parse::<Vertex>().map_err(|e| parse_err(n, e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            if vs.len() != 4 {
                return Err(parse_err(n, "face needs 4 vertices"));
            }
            let face = Face::new([vs[0], vs[1], vs[2], vs[3]]);
            if face.cycle() != [vs[0], vs[1], vs[2], vs[3]] {
                return Err(parse_err(n, "face not in canonical form"));
            }
            let from: Vertex =
                fields[3].1.parse().map_err(|e: crate::graph::VertexParseError| parse_err(n, e.to_string()))?;
            let to: Vertex =
                fields[4].1.parse().map_err(|e: crate::graph::VertexParseError| parse_err(n, e.to_string()))?;
            let pairs = split_dash(fields[5].1)
                .map(|s| {
                    let (a, b) = s.split_once('>').ok_or_else(|| parse_err(n, "bad map pair"))?;
                    let a = a.parse().map_err(|_| parse_err(n, "bad map label"))?;
                    let b = b.parse().map_err(|_| parse_err(n, "bad map label"))?;
                    Ok((a, b))
                })
                .collect::<Result<Vec<_>, TableError>>()?;
            let map = LabelMap::from_pairs(pairs).ok_or_else(|| parse_err(n, "map is not injective"))?;
            let key = TableKey { order, pattern, face, from, to };
            if entries.insert(key, map).is_some() {
                return Err(parse_err(n, "duplicate entry"));
            }
        }
        Ok(FaceTables { entries })
    }

    /// Face map `u -> v` for `face` inside `cell`.
    pub fn face_map(
        &self,
        cg: &ConnectionGraph,
        cell: &Cell,
        face: &Face,
        u: Vertex,
        v: Vertex,
    ) -> Result<LabelMap, FaceError> {
        check_map_args(cg, cell, face, u, v)?;
        let r = cg.order();
        if r <= 3 {
            let key =
                TableKey { order: r, pattern: cg.connected_pairs().into_iter().collect(), face: *face, from: u, to: v };
            return self.get(&key).cloned().ok_or_else(|| FaceError::MissingEntry(describe(&key)));
        }
        let d = decorated_cell(cg, cell)?;
        let local = |w: Vertex| d.to_local(w).expect("vertex in cell");
        let key = TableKey {
            order: 3,
            pattern: d.graph.connected_pairs().into_iter().collect(),
            face: d.local_face(face).expect("face in cell"),
            from: local(u),
            to: local(v),
        };
        let inner = self.get(&key).ok_or_else(|| FaceError::MissingEntry(describe(&key)))?;
        let mut pairs: Vec<(ClassIndex, ClassIndex)> =
            inner.pairs().iter().map(|&(a, b)| (d.classes[a], d.classes[b])).collect();
        pairs.extend((0..=r).filter(|&m| !cell.contains_class(m)).map(|m| (m, m)));
        Ok(LabelMap::from_pairs(pairs).expect("cell labels and outside labels are disjoint"))
    }

    /// Number of table entries a graph of this order and pattern reads.
    pub fn coverage(&self, cg: &ConnectionGraph) -> Result<usize, FaceError> {
        let mut count = 0;
        for face in enumerate_faces(cg) {
            for cell in cells_containing(cg, &face) {
                for u in face.cycle() {
                    for v in face.cycle() {
                        if u != v {
                            self.face_map(cg, &cell, &face, u, v)?;
                            count += 1;
                        }
                    }
                }
            }
        }
        Ok(count)
    }
}

fn describe(k: &TableKey) -> String {
    format!("order {} pattern {:?} face {} {}->{}", k.order, k.pattern, k.face, k.from, k.to)
}

fn join_or_dash(parts: impl Iterator<Item = String>) -> String {
    let v: Vec<String> = parts.collect();
    if v.is_empty() {
        "-".to_string()
    } else {
        v.join(",")
    }
}

fn split_dash(s: &str) -> impl Iterator<Item = &str> {
    let s = if s == "-" { "" } else { s };
    s.split(',').filter(|p| !p.is_empty())
}
