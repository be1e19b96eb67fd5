//! Cellulations of the sphere, their dual graphs, the angle conditions on
//! dual circuits and paths, and the cone triangulation used by the solver.

mod catalog;
mod cellulation;
mod checks;
mod cone;

pub use catalog::{canonical_code, polyhedral_catalog};
pub use cellulation::{build_cellulation, Cellulation, DualGraph};
pub use checks::{
    check_all, check_circuits, check_simple_paths, check_vertex_sums, cycle_is_elementary,
    Admissibility, CircuitVerdict, PathVerdict, Witness, TOL_ANGLE,
};
pub use cone::{cone_triangulation, ConeTriangulation, EdgeSlot, InteriorFace, TriEdge};
