//! Connection graphs, face maps, spin chains and spin groups of exceptional
//! spin graphs on hyperelliptic surfaces.

pub mod chain;
pub mod face;
pub mod graph;
pub mod group;
pub mod perm;
pub mod tables;

pub use chain::{
    enumerate_chains, evaluate, is_admissible, is_basic, validate_structure, AdmissibilityVerdict, ChainError, Reason,
    SpinChain, Step, Transport,
};
pub use face::{
    cells_containing, decorated_cell, enumerate_faces, face_kind, face_map, face_with_vertices, Cell, Face, FaceError,
    FaceKind,
};
pub use graph::{
    build_connection_graph, edge_multiplicities_r_le_2, enumerate_classes, genus_of, heads, k_tuple, ClassError,
    ClassIndex, ConnectionGraph, GraphClass, Vertex,
};
pub use group::{
    closure, predict_group, recognize, spin_group_at, spin_group_with, verify_class, verify_class_with, Budget,
    ClassReport, GroupError, GroupVerdict, Method, PermGroup, SpinGroup, VertexReport,
};
pub use perm::{LabelMap, Permutation};
pub use tables::FaceTables;
