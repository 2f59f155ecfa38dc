//! Decide and quantify where planar IFS attractors meet lines.
//!
//! - [`geom2d`]: convex polygons, lines, interval sets.
//! - [`ifs`]: contractions, addresses, level enumeration, similarity dimension.
//! - [`hull`]: certified inner and outer convex-hull bounds.
//! - [`intersect`]: chain certification, pruned line covers, approximate intersections.
//! - [`measure`]: level-`L` invariant measure and shadow profiles.
//! - [`document`]: the TOML description format for an IFS.

pub mod document;
pub mod fixtures;
pub mod geom2d;
pub mod hull;
pub mod ifs;
pub mod intersect;
pub mod measure;

pub use document::{dump_normalized, DocumentError, IfsDocument};
pub use geom2d::{Affine2, ConvexPoly, Degeneracy, Interval, IntervalSet, Line, Mat2, Point2};
pub use hull::{hull_pair, inner_hull, outer_hull, HullPair};
pub use ifs::{Address, Contraction, Ifs, IfsError};
pub use intersect::{
    angular_hits, chain_certify, hyperdense_directional_test, line_intersect, proliferate, verify_witness, Cover,
    IntersectError, OpenRegion, Verdict,
};
pub use measure::{invariance_residual, nu_level, shadow_profile, MeasureError, Region, ShadowProfile};
