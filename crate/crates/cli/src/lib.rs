//! Command-line front end for the spin atlas engine.

pub mod dot;
pub mod record;
pub mod row;

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use spin_atlas_core::group::ClassReport;
use spin_atlas_core::{
    build_connection_graph, enumerate_classes, k_tuple, spin_group_with, verify_class_with, Budget, ClassError,
    FaceTables, GraphClass, GroupError, Method, Transport, Vertex,
};
use thiserror::Error;

use record::{join_list, Record};
use row::{render_table, AtlasRow, TEXT_HEADER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "spin-atlas", version, about = "Spin groups of exceptional spin graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// One row per class of a genus.
    Atlas {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        order: Option<usize>,
        #[command(flatten)]
        opts: Options,
    },
    /// Spin groups and witness chains at every vertex of a class.
    Classify {
        #[arg(short = 'g', long)]
        genus: usize,
        #[arg(short = 'r', long)]
        order: usize,
        #[arg(short = 'i')]
        i: Option<usize>,
        #[arg(short = 'p', value_delimiter = ',')]
        p: Option<Vec<usize>>,
        #[arg(long)]
        vertex: Option<String>,
        #[command(flatten)]
        opts: Options,
    },
    /// Checks computed groups against the classification.
    Verify {
        /// `N` or `A..B`.
        #[arg(long)]
        genus: String,
        #[arg(long, value_delimiter = ',')]
        orders: Option<Vec<usize>>,
        #[command(flatten)]
        opts: Options,
    },
    /// Graphviz text of a class.
    ExportDot {
        #[arg(short = 'g', long)]
        genus: usize,
        #[arg(short = 'r', long)]
        order: usize,
        #[arg(short = 'i')]
        i: usize,
        /// Defaults to all zeros.
        #[arg(short = 'p', value_delimiter = ',')]
        p: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value_t = DotKind::Connection)]
        kind: DotKind,
    },
    /// Face-map tables generated from the label-role rules.
    Tables,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DotKind {
    Connection,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Records,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exact,
    Bounded,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, default_value_t = 6)]
    pub max_steps: usize,
    #[arg(long, default_value_t = 400_000)]
    pub closure_cap: usize,
    #[arg(long, env = "SPIN_ATLAS_TABLES")]
    pub tables: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long, default_value_t = 12)]
    pub max_genus: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    pub method: MethodArg,
}

impl Options {
    fn budget(&self) -> Budget {
        Budget {
            max_steps: self.max_steps,
            closure_cap: self.closure_cap,
            exhaustive: self.exhaustive,
            method: match self.method {
                MethodArg::Exact => Method::Exact,
                MethodArg::Bounded => Method::Bounded,
            },
        }
    }

    fn load_tables(&self) -> Result<Arc<FaceTables>, CliError> {
        match &self.tables {
            Some(path) => FaceTables::load(path).map(Arc::new).map_err(|e| CliError::Usage(e.to_string())),
            None => Ok(FaceTables::builtin()),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid class: {0}")]
    InvalidClass(#[from] ClassError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("full export is only available for order r <= 2, got r = {0}")]
    FullExportUnsupported(usize),
}

/// Captured result of a command.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses `N` or `A..B`.
pub fn parse_genus_range(s: &str) -> Result<RangeInclusive<usize>, CliError> {
    let bad = || CliError::Usage(format!("malformed genus range `{s}`, expected N or A..B"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?),
        None => {
            let n = s.parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn check_genus(genus: usize, max: usize) -> Result<(), CliError> {
    if genus < 2 {
        return Err(CliError::Usage(format!("genus must be at least 2, got {genus}")));
    }
    if genus > max {
        return Err(CliError::Usage(format!("genus {genus} exceeds --max-genus {max}")));
    }
    Ok(())
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| CliError::Usage(e.to_string()))
}

/// Verifies every class, in parallel, returning reports in input order.
fn reports(classes: &[GraphClass], opts: &Options) -> Result<Vec<ClassReport>, CliError> {
    let tables = opts.load_tables()?;
    let budget = opts.budget();
    pool(opts.jobs)?.install(|| {
        classes
            .par_iter()
            .map(|gc| {
                let t =
                    Transport::with_tables(&build_connection_graph(gc), tables.clone()).map_err(GroupError::from)?;
                Ok(verify_class_with(&t, gc, &budget)?)
            })
            .collect()
    })
}

fn render_rows(rows: &[AtlasRow], format: Format) -> String {
    match format {
        Format::Records => rows.iter().map(|r| format!("{}\n", r.to_record())).collect(),
        Format::Text => {
            let cells: Vec<Vec<String>> = rows.iter().map(|r| r.text_cells().to_vec()).collect();
            render_table(&TEXT_HEADER, &cells)
        }
    }
}

fn atlas(genus: usize, order: Option<usize>, opts: &Options) -> Result<Outcome, CliError> {
    check_genus(genus, opts.max_genus)?;
    let classes = enumerate_classes(genus, order);
    let rows: Vec<AtlasRow> = reports(&classes, opts)?.iter().map(AtlasRow::from_report).collect();
    Ok(Outcome { stdout: render_rows(&rows, opts.format), ..Outcome::default() })
}

fn select_classes(
    genus: usize,
    order: usize,
    i: Option<usize>,
    p: Option<Vec<usize>>,
) -> Result<Vec<GraphClass>, CliError> {
    match (i, p) {
        (Some(i), Some(p)) => Ok(vec![GraphClass::new(genus, order, i, p)?]),
        (Some(i), None) if order == 0 => Ok(vec![GraphClass::new(genus, 0, i, Vec::new())?]),
        (i, p) => {
            let all: Vec<GraphClass> = enumerate_classes(genus, Some(order))
                .into_iter()
                .filter(|c| i.is_none_or(|i| c.i() == i) && p.as_ref().is_none_or(|p| c.p() == p.as_slice()))
                .collect();
            if all.is_empty() {
                GraphClass::new(genus, order, i.unwrap_or(0), p.unwrap_or_else(|| vec![0; order]))?;
                return Err(CliError::Usage(format!("no class of genus {genus} and order {order} matches")));
            }
            Ok(all)
        }
    }
}

fn classify(
    genus: usize,
    order: usize,
    i: Option<usize>,
    p: Option<Vec<usize>>,
    vertex: Option<String>,
    opts: &Options,
) -> Result<Outcome, CliError> {
    check_genus(genus, opts.max_genus)?;
    let classes = select_classes(genus, order, i, p)?;
    let vertex: Option<Vertex> = vertex
        .map(|s| s.parse().map_err(|e: spin_atlas_core::graph::VertexParseError| CliError::Usage(e.to_string())))
        .transpose()?;
    let tables = opts.load_tables()?;
    let budget = opts.budget();
    let mut out = String::new();
    let mut all_ok = true;
    for gc in &classes {
        let cg = build_connection_graph(gc);
        let t = Transport::with_tables(&cg, tables.clone()).map_err(GroupError::from)?;
        let targets: Vec<Vertex> = match vertex {
            Some(v) if cg.contains(v) => vec![v],
            Some(v) => return Err(CliError::Usage(format!("{v} is not a vertex of an order-{order} graph"))),
            None => cg.vertices(),
        };
        let groups = pool(opts.jobs)?
            .install(|| targets.par_iter().map(|&v| spin_group_with(&t, v, &budget)).collect::<Result<Vec<_>, _>>())?;
        match opts.format {
            Format::Text => {
                let _ = writeln!(
                    out,
                    "class {gc} k={} connected={}",
                    join_list(k_tuple(gc)),
                    join_list(cg.connected_pairs())
                );
            }
            Format::Records => {
                let rec = Record::new()
                    .with("kind", "class")
                    .with("genus", gc.genus())
                    .with("order", gc.order())
                    .with("i", gc.i())
                    .with("p", join_list(gc.p()))
                    .with("k", join_list(k_tuple(gc)))
                    .with("connected", join_list(cg.connected_pairs()));
                let _ = writeln!(out, "{rec}");
            }
        }
        for sg in &groups {
            let ok = sg.matches() && !sg.over_generated;
            all_ok &= ok;
            let degree = sg.labels.len();
            match opts.format {
                Format::Text => {
                    let _ = writeln!(
                        out,
                        "{} degree={degree} labels={} predicted={} computed={} order={} {}",
                        sg.vertex,
                        join_list(&sg.labels),
                        sg.predicted,
                        sg.verdict,
                        sg.order,
                        if ok { "ok" } else { "MISMATCH" }
                    );
                    for w in &sg.witnesses {
                        let _ = writeln!(out, "  {}  {}", w.perm.to_cycle_string(&sg.labels), w.chain);
                    }
                }
                Format::Records => {
                    let rec = Record::new()
                        .with("kind", "vertex")
                        .with("vertex", sg.vertex)
                        .with("degree", degree)
                        .with("labels", join_list(&sg.labels))
                        .with("predicted", sg.predicted)
                        .with("computed", sg.verdict)
                        .with("order", sg.order)
                        .with("match", ok);
                    let _ = writeln!(out, "{rec}");
                    for w in &sg.witnesses {
                        let rec = Record::new()
                            .with("kind", "witness")
                            .with("vertex", sg.vertex)
                            .with("perm", w.perm.to_cycle_string(&sg.labels))
                            .with("chain", &w.chain);
                        let _ = writeln!(out, "{rec}");
                    }
                }
            }
        }
    }
    Ok(Outcome { stdout: out, stderr: String::new(), code: if all_ok { EXIT_OK } else { EXIT_MISMATCH } })
}

fn verify(genus: &str, orders: Option<Vec<usize>>, opts: &Options) -> Result<Outcome, CliError> {
    let range = parse_genus_range(genus)?;
    check_genus(*range.start(), opts.max_genus)?;
    check_genus(*range.end(), opts.max_genus)?;
    let classes: Vec<GraphClass> = range
        .flat_map(|g| enumerate_classes(g, None))
        .filter(|c| orders.as_ref().is_none_or(|o| o.contains(&c.order())))
        .collect();
    let rows: Vec<AtlasRow> = reports(&classes, opts)?.iter().map(AtlasRow::from_report).collect();
    let mismatched: Vec<&AtlasRow> = rows.iter().filter(|r| !r.matches).collect();
    let vertices: usize = rows.iter().map(|r| r.vertices.len()).sum();
    let mut out = render_rows(&rows, opts.format);
    let mut err = String::new();
    for r in &mismatched {
        for v in r.vertices.iter().filter(|v| v.predicted != v.computed) {
            let _ = writeln!(
                err,
                "mismatch: g={} r={} i={} p={} at {}: computed {} predicted {}",
                r.genus,
                r.order,
                r.i,
                join_list(&r.p),
                v.vertex,
                v.computed,
                v.predicted
            );
        }
    }
    let summary = Record::new()
        .with("kind", "summary")
        .with("classes", rows.len())
        .with("vertices", vertices)
        .with("mismatches", mismatched.len());
    let _ = writeln!(out, "{summary}");
    let code = if mismatched.is_empty() { EXIT_OK } else { EXIT_MISMATCH };
    Ok(Outcome { stdout: out, stderr: err, code })
}

fn export_dot(genus: usize, order: usize, i: usize, p: Option<Vec<usize>>, kind: DotKind) -> Result<Outcome, CliError> {
    let gc = GraphClass::new(genus, order, i, p.unwrap_or_else(|| vec![0; order]))?;
    let stdout = match kind {
        DotKind::Connection => dot::connection_dot(&gc),
        DotKind::Full => dot::full_dot(&gc).map_err(|e| CliError::FullExportUnsupported(e.0))?,
    };
    Ok(Outcome { stdout, ..Outcome::default() })
}

pub fn execute(cli: Cli) -> Outcome {
    let result = match cli.command {
        Command::Atlas { genus, order, opts } => atlas(genus, order, &opts),
        Command::Classify { genus, order, i, p, vertex, opts } => classify(genus, order, i, p, vertex, &opts),
        Command::Verify { genus, orders, opts } => verify(&genus, orders, &opts),
        Command::ExportDot { genus, order, i, p, kind } => export_dot(genus, order, i, p, kind),
        Command::Tables => Ok(Outcome { stdout: FaceTables::synthesize().render(), ..Outcome::default() }),
    };
    result.unwrap_or_else(|e| Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: EXIT_USAGE })
}

/// Parses arguments (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, code }
            } else {
                Outcome { stdout: text, stderr: String::new(), code }
            }
        }
    }
}
