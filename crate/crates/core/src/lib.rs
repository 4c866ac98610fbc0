//! Inversive distance circle packings on closed triangulated surfaces.
//!
//! A packing assigns a radius to every vertex and an inversive distance
//! `I > 1` to every edge of a labelled Δ-complex. This crate provides the
//! Euclidean geometry of such packings, weighted Delaunay edge flips driven by
//! a Ptolemy-type update of inversive distances, an equivalent hyperbolic
//! description used to test whether two packings belong to the same class, and
//! a discrete Ricci flow with surgery that solves the prescribed curvature
//! problem.

// Guards are written `!(x > 0.0)` on purpose so that NaN is rejected too,
// and formula functions take their variables by name.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments)]

pub mod delaunay;
pub mod error;
pub mod fixtures;
pub mod flow;
pub mod hyperbolic;
pub mod io;
pub mod mesh;
pub mod packing;
pub mod sampling;
pub mod selftest;

pub use error::{Error, Result};
pub use mesh::{Hinge, MeshError, Triangulation};
pub use packing::{BoundaryMode, HingeData, Packing, TriangleGeometry};
