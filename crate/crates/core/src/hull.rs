//! Certified convex-hull bounds for attractors.
//!
//! The outer bound starts from a polygon covering the invariant ball and
//! takes `Conv(H(·))` `m` times; every step stays a superset of the
//! attractor hull because `H` maps the ball into itself. The inner bound is
//! `Conv(H^m(P))` for the fixed-point set `P`, whose vertices are genuine
//! attractor points. `Conv(H(Conv S)) = Conv(H(S))`, so each level only
//! needs the previous hull's vertices.

use crate::geom2d::{convex_hull, poly_hausdorff, poly_offset_outward, ConvexPoly, Point2, GEOM_TOL};
use crate::ifs::{invariant_ball, Ifs};

pub const DEFAULT_HULL_LEVEL: usize = 8;

/// Vertex cap for outer hulls; larger hulls are decimated outward.
pub const MAX_HULL_VERTICES: usize = 256;

fn hutchinson_hull(ifs: &Ifs, poly: &ConvexPoly) -> ConvexPoly {
    let pts: Vec<Point2> = ifs
        .maps()
        .iter()
        .flat_map(|m| poly.vertices().iter().map(move |&v| m.apply(v)))
        .collect();
    convex_hull(&pts).expect("images of a non-empty finite set")
}

/// Convex polygon containing the attractor hull.
pub fn outer_hull(ifs: &Ifs, m: usize) -> ConvexPoly {
    let ball = invariant_ball(ifs);
    let mut poly = poly_offset_outward(&ConvexPoly::point(ball.center), ball.radius)
        .expect("radius is finite and non-negative");
    for _ in 0..m {
        poly = hutchinson_hull(ifs, &poly).decimated_outward(MAX_HULL_VERTICES);
    }
    poly
}

/// Convex polygon inside the attractor hull, spanned by `T_a(p_k)`, `|a| = m`.
pub fn inner_hull(ifs: &Ifs, m: usize) -> ConvexPoly {
    let mut poly = convex_hull(&ifs.fixed_points()).expect("at least one fixed point");
    for _ in 0..m {
        poly = hutchinson_hull(ifs, &poly);
    }
    poly
}

#[derive(Debug, Clone, PartialEq)]
pub struct HullPair {
    pub outer: ConvexPoly,
    pub inner: ConvexPoly,
    pub level: usize,
    /// `lambda_max^m * r` with `r` the invariant-ball radius.
    pub error_bound: f64,
    /// Hausdorff distance between `outer` and `inner`.
    pub measured_gap: f64,
}

impl HullPair {
    /// Every inner vertex lies in the outer hull.
    pub fn is_sandwiched(&self) -> bool {
        self.inner.vertices().iter().all(|&v| self.outer.contains(v, GEOM_TOL))
    }
}

pub fn hull_pair(ifs: &Ifs, m: usize) -> HullPair {
    let outer = outer_hull(ifs, m);
    let inner = inner_hull(ifs, m);
    let radius = invariant_ball(ifs).radius;
    let error_bound = ifs.lambda_max().powi(m as i32) * radius;
    let measured_gap = poly_hausdorff(&outer, &inner);
    HullPair { outer, inner, level: m, error_bound, measured_gap }
}
