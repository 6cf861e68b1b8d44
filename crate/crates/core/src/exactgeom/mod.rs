//! Exact rational linear algebra and convex geometry.
//!
//! Everything here is exact: vertex enumeration solves every `d`-subset of the
//! constraints, volumes come from a pulling triangulation of the boundary from the
//! lexicographically first vertex, and centroids are volume-weighted simplex centroids.

pub mod cone;
pub mod linalg;
pub mod polytope;
pub mod rational;

pub use cone::{cut_cone, dual_cone, simplicial_subdivision, PolyCone};
pub use polytope::{centroid, polytope_volume, simplex_volume, vertex_enumerate, Halfspace, Polytope, VolumeReport};
pub use rational::{fmt_rational, frac, parse_rational, rat, to_f64, RVector, Rational};
