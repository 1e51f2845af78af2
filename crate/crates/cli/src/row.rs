use spin_atlas_core::group::ClassReport;
use spin_atlas_core::{heads, k_tuple, ClassIndex, GroupVerdict, Vertex};

use crate::record::{join_list, parse_list, split_list, Record, RecordError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexEntry {
    pub vertex: Vertex,
    pub degree: usize,
    pub predicted: GroupVerdict,
    pub computed: GroupVerdict,
}

/// One class of the atlas with its per-vertex verdicts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtlasRow {
    pub genus: usize,
    pub order: usize,
    pub i: usize,
    pub p: Vec<usize>,
    pub k: Vec<usize>,
    pub connected: Vec<ClassIndex>,
    pub heads: Vec<ClassIndex>,
    pub vertices: Vec<VertexEntry>,
    pub matches: bool,
}

impl AtlasRow {
    pub fn from_report(report: &ClassReport) -> AtlasRow {
        let gc = &report.class;
        let vertices: Vec<VertexEntry> = report
            .vertices
            .iter()
            .map(|v| VertexEntry {
                vertex: v.vertex,
                degree: v.degree,
                predicted: v.group.predicted,
                computed: v.group.verdict,
            })
            .collect();
        AtlasRow {
            genus: gc.genus(),
            order: gc.order(),
            i: gc.i(),
            p: gc.p().to_vec(),
            k: k_tuple(gc),
            connected: report.graph.connected_pairs().into_iter().collect(),
            heads: heads(gc).into_iter().collect(),
            matches: report.match_all(),
            vertices,
        }
    }

    pub fn to_record(&self) -> Record {
        let per = |f: &dyn Fn(&VertexEntry) -> String| {
            join_list(self.vertices.iter().map(|v| format!("{}:{}", v.vertex, f(v))))
        };
        Record::new()
            .with("kind", "row")
            .with("genus", self.genus)
            .with("order", self.order)
            .with("i", self.i)
            .with("p", join_list(&self.p))
            .with("k", join_list(&self.k))
            .with("connected", join_list(&self.connected))
            .with("heads", join_list(&self.heads))
            .with("degrees", per(&|v| v.degree.to_string()))
            .with("predicted", per(&|v| v.predicted.to_string()))
            .with("computed", per(&|v| v.computed.to_string()))
            .with("match", self.matches)
    }

    pub fn from_record(r: &Record) -> Result<AtlasRow, RecordError> {
        let bad = |m: &str| RecordError(m.to_string());
        if r.get("kind")? != "row" {
            return Err(bad("not a row record"));
        }
        let num = |k: &str| r.get(k)?.parse::<usize>().map_err(|_| bad(k));
        let per_vertex = |k: &str| -> Result<Vec<(Vertex, String)>, RecordError> {
            split_list(r.get(k)?)
                .into_iter()
                .map(|item| {
                    let (v, x) = item.rsplit_once(':').ok_or_else(|| bad(k))?;
                    Ok((v.parse().map_err(|_| bad(k))?, x.to_string()))
                })
                .collect()
        };
        let degrees = per_vertex("degrees")?;
        let predicted = per_vertex("predicted")?;
        let computed = per_vertex("computed")?;
        if degrees.len() != predicted.len() || degrees.len() != computed.len() {
            return Err(bad("per-vertex lists differ in length"));
        }
        let mut vertices = Vec::new();
        for ((d, p), c) in degrees.iter().zip(&predicted).zip(&computed) {
            if d.0 != p.0 || d.0 != c.0 {
                return Err(bad("per-vertex lists disagree on vertices"));
            }
            vertices.push(VertexEntry {
                vertex: d.0,
                degree: d.1.parse().map_err(|_| bad("degrees"))?,
                predicted: p.1.parse().map_err(|_| bad("predicted"))?,
                computed: c.1.parse().map_err(|_| bad("computed"))?,
            });
        }
        let matches: bool = r.get("match")?.parse().map_err(|_| bad("match"))?;
        if matches != vertices.iter().all(|v| v.predicted == v.computed) {
            return Err(bad("match flag disagrees with verdicts"));
        }
        Ok(AtlasRow {
            genus: num("genus")?,
            order: num("order")?,
            i: num("i")?,
            p: parse_list(r.get("p")?)?,
            k: parse_list(r.get("k")?)?,
            connected: parse_list(r.get("connected")?)?,
            heads: parse_list(r.get("heads")?)?,
            vertices,
            matches,
        })
    }

    /// Columns of the text table.
    pub fn text_cells(&self) -> [String; 7] {
        let verdicts: Vec<String> = self
            .vertices
            .iter()
            .filter(|v| !v.vertex.tilded)
            .map(|v| {
                let shown = if v.predicted == v.computed {
                    v.computed.to_string()
                } else {
                    format!("{}!={}", v.computed, v.predicted)
                };
                format!("{}:{}:{}", v.vertex, v.degree, shown)
            })
            .collect();
        [
            self.genus.to_string(),
            self.order.to_string(),
            format!("({};{})", self.i, join_list(&self.p)),
            join_list(&self.k),
            join_list(&self.connected),
            verdicts.join(" "),
            if self.matches { "ok" } else { "MISMATCH" }.to_string(),
        ]
    }
}

pub const TEXT_HEADER: [&str; 7] = ["genus", "r", "(i;p)", "k", "connected", "vertex:degree:group", "match"];

/// Left-aligned columns separated by two spaces, trailing blanks trimmed.
pub fn render_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut width = vec![0; cols];
    for (c, h) in header.iter().enumerate() {
        width[c] = h.len();
    }
    for row in rows {
        for (c, cell) in row.iter().enumerate() {
            width[c] = width[c].max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (c, cell) in cells.iter().enumerate() {
            s.push_str(cell);
            if c + 1 < cols {
                s.push_str(&" ".repeat(width[c] - cell.len() + 2));
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(header.to_vec());
    for row in rows {
        line(row.iter().map(String::as_str).collect());
    }
    out
}
