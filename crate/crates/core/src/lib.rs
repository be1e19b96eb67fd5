//! Hyperideal hyperbolic polyhedra from their dihedral angles.
//!
//! The crate realizes convex polyhedra of the projective model whose
//! vertices lie on or beyond the sphere at infinity, given the combinatorics
//! and the exterior dihedral angles. The realization maximizes the total
//! volume of a cone triangulation over its angle assignments; the maximizer
//! glues to the polyhedron. Circle configurations on the sphere are derived
//! from the realized face planes and the polar planes of the vertices.
#![no_std]
#![cfg_attr(test, allow(unused_imports))]

extern crate alloc;

pub mod circles;
pub mod combinatorics;
pub mod error;
pub mod lp;
pub mod mink;
pub mod plane;
pub mod quad;
pub mod regular;
pub mod simplex;
pub mod solver;
pub mod volume;

pub use error::{Error, Result};
pub use nalgebra;
