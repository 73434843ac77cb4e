//! Exact computations for semi-free circle actions on toric six-manifolds.
//!
//! Everything is done over the integers and rationals: labeled polytopes,
//! their reduced spaces as Delzant polygons, the lattices of those polygons,
//! and the fixed point data of a circle acting through a subtorus.

pub mod affine;
pub mod circle_action;
pub mod error;
pub mod exceptional;
pub mod fixed_point_data;
pub mod fixtures;
pub mod glue_homology;
pub mod linalg;
pub mod morse_wall;
pub mod polytope;
pub mod reduced_space;

pub use error::{Error, Result};
