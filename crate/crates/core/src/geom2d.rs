//! Planar geometry kernel.
//!
//! Convex polygons here are closed sets. Predicates share one absolute
//! tolerance, [`GEOM_TOL`], which assumes coordinates of order one.
//! Polygons may be degenerate (a single point or a segment); every predicate
//! handles those cases directly instead of inflating them.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

/// Absolute tolerance for containment and incidence predicates.
pub const GEOM_TOL: f64 = 1e-9;

/// Sine threshold under which a hull vertex is treated as collinear with
/// its neighbours and dropped.
const COLLINEAR_SIN: f64 = 1e-12;

/// Number of directions used to approximate a disk by a circumscribed polygon.
/// `1 / cos(pi / 24) - 1 < 0.0087`, inside the 1% overshoot budget.
const OFFSET_SIDES: usize = 24;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("empty point set")]
    EmptyPointSet,
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("offset radius must be non-negative, got {0}")]
    NegativeRadius(f64),
    #[error("line coefficients ({0}, {1}) do not define a normal direction")]
    DegenerateLine(f64, f64),
    #[error("zero-length direction vector")]
    ZeroDirection,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at angle `theta` from the positive x axis.
    #[inline]
    pub fn from_angle(theta: f64) -> Self {
        Self::new(theta.cos(), theta.sin())
    }

    #[inline]
    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    /// Counter-clockwise quarter turn.
    #[inline]
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn normalized(self) -> Result<Point2, GeomError> {
        let n = self.norm();
        if !n.is_finite() {
            return Err(GeomError::NonFinite);
        }
        if n == 0.0 {
            return Err(GeomError::ZeroDirection);
        }
        Ok(self / n)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn div(self, s: f64) -> Point2 {
        Point2::new(self.x / s, self.y / s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    #[inline]
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Row-major 2x2 matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    #[inline]
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    /// `scale * R(theta)`.
    pub fn scaled_rotation(scale: f64, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(scale * c, -scale * s, scale * s, scale * c)
    }

    #[inline]
    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    #[inline]
    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a, self.c, self.b, self.d)
    }

    #[inline]
    pub fn apply(&self, v: Point2) -> Point2 {
        Point2::new(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)
    }

    #[inline]
    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        Some(Mat2::new(self.d / det, -self.b / det, -self.c / det, self.a / det))
    }

    /// Largest singular value, from the closed-form eigenvalues of `MᵀM`.
    pub fn spectral_norm(&self) -> f64 {
        let p = self.a * self.a + self.c * self.c;
        let q = self.a * self.b + self.c * self.d;
        let r = self.b * self.b + self.d * self.d;
        let half_diff = 0.5 * (p - r);
        let top = 0.5 * (p + r) + half_diff.hypot(q);
        top.max(0.0).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }
}

/// Affine map `z -> m z + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine2 {
    pub m: Mat2,
    pub t: Point2,
}

impl Affine2 {
    pub const IDENTITY: Affine2 = Affine2 { m: Mat2::IDENTITY, t: Point2::ORIGIN };

    #[inline]
    pub fn apply(&self, z: Point2) -> Point2 {
        self.m.apply(z) + self.t
    }

    /// `self ∘ other`.
    #[inline]
    pub fn compose(&self, other: &Affine2) -> Affine2 {
        Affine2 { m: self.m.mul(&other.m), t: self.m.apply(other.t) + self.t }
    }

    pub fn inverse(&self) -> Option<Affine2> {
        let mi = self.m.inverse()?;
        Some(Affine2 { m: mi, t: -mi.apply(self.t) })
    }
}

/// The line `{ z : normal · z = offset }` with a unit normal.
///
/// It is parametrized as `anchor + t * direction`, where the anchor is the
/// foot of the perpendicular from the origin and the direction is the normal
/// turned a quarter counter-clockwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    normal: Point2,
    offset: f64,
}

impl Line {
    /// Line `a x + b y = c`, normalized so that `a² + b² = 1`.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Line, GeomError> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        let n = a.hypot(b);
        if n == 0.0 {
            return Err(GeomError::DegenerateLine(a, b));
        }
        Ok(Line { normal: Point2::new(a / n, b / n), offset: c / n })
    }

    /// Line through `point` running along `direction`.
    pub fn through(point: Point2, direction: Point2) -> Result<Line, GeomError> {
        if !point.is_finite() {
            return Err(GeomError::NonFinite);
        }
        let d = direction.normalized()?;
        let normal = -d.perp();
        Ok(Line { normal, offset: normal.dot(point) })
    }

    /// Line through two distinct points.
    pub fn through_points(p: Point2, q: Point2) -> Result<Line, GeomError> {
        Line::through(p, q - p)
    }

    #[inline]
    pub fn normal(&self) -> Point2 {
        self.normal
    }

    #[inline]
    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// `(a, b, c)` with `a x + b y = c` and `a² + b² = 1`.
    pub fn coefficients(&self) -> (f64, f64, f64) {
        (self.normal.x, self.normal.y, self.offset)
    }

    #[inline]
    pub fn anchor(&self) -> Point2 {
        self.normal * self.offset
    }

    #[inline]
    pub fn direction(&self) -> Point2 {
        self.normal.perp()
    }

    #[inline]
    pub fn point_at(&self, t: f64) -> Point2 {
        self.anchor() + self.direction() * t
    }

    /// Parameter of the orthogonal projection of `p` onto the line.
    #[inline]
    pub fn param_of(&self, p: Point2) -> f64 {
        self.direction().dot(p)
    }

    #[inline]
    pub fn signed_distance(&self, p: Point2) -> f64 {
        self.normal.dot(p) - self.offset
    }

    /// Image of the line under an invertible affine map.
    pub fn mapped(&self, map: &Affine2) -> Result<Line, GeomError> {
        let a = map.apply(self.anchor());
        let d = map.m.apply(self.direction());
        Line::through(a, d)
    }

    /// Smallest angle between the (unsigned) line direction and `v`, in `[0, pi/2]`.
    pub fn angle_to(&self, v: Point2) -> f64 {
        let d = self.direction();
        d.cross(v).abs().atan2(d.dot(v).abs())
    }
}

/// Closed interval `[lo, hi]` of line parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    /// Interval spanning both endpoints, whatever their order.
    pub fn new(a: f64, b: f64) -> Self {
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    #[inline]
    pub fn point(t: f64) -> Self {
        Self { lo: t, hi: t }
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    #[inline]
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    #[inline]
    pub fn contains(&self, t: f64, slack: f64) -> bool {
        t >= self.lo - slack && t <= self.hi + slack
    }

    #[inline]
    pub fn overlaps(&self, other: &Interval, slack: f64) -> bool {
        self.lo <= other.hi + slack && other.lo <= self.hi + slack
    }
}

/// Sorted union of pairwise disjoint closed intervals.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Normalizes arbitrary intervals: sorts them and merges any that
    /// overlap or touch.
    pub fn from_intervals<I: IntoIterator<Item = Interval>>(items: I) -> Self {
        let mut items: Vec<Interval> = items.into_iter().collect();
        items.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
        let mut merged: Vec<Interval> = Vec::with_capacity(items.len());
        for iv in items {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
                _ => merged.push(iv),
            }
        }
        Self { intervals: merged }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn total_length(&self) -> f64 {
        self.intervals.iter().map(Interval::length).sum()
    }

    pub fn contains(&self, t: f64, slack: f64) -> bool {
        // first interval whose upper end reaches t - slack
        let idx = self.intervals.partition_point(|iv| iv.hi + slack < t);
        self.intervals.get(idx).is_some_and(|iv| iv.contains(t, slack))
    }

    /// Maximal sub-intervals of `span` not covered by the set.
    pub fn gaps_within(&self, span: Interval) -> Vec<Interval> {
        let mut gaps = Vec::new();
        let mut cursor = span.lo;
        for iv in &self.intervals {
            if iv.hi < cursor {
                continue;
            }
            if iv.lo > span.hi {
                break;
            }
            if iv.lo > cursor {
                gaps.push(Interval::new(cursor, iv.lo));
            }
            cursor = cursor.max(iv.hi);
        }
        if cursor < span.hi {
            gaps.push(Interval::new(cursor, span.hi));
        }
        gaps
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    Point,
    Segment,
    Full,
}

/// Closed convex polygon with counter-clockwise vertices.
///
/// A `Point` polygon has one vertex, a `Segment` has its two endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPoly {
    vertices: Vec<Point2>,
    kind: Degeneracy,
}

impl ConvexPoly {
    pub fn point(p: Point2) -> Self {
        Self { vertices: vec![p], kind: Degeneracy::Point }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn degeneracy(&self) -> Degeneracy {
        self.kind
    }

    /// Image under an affine map. Orientation is restored when the map
    /// reverses it; convexity is preserved by any affine map.
    pub fn transformed(&self, map: &Affine2) -> ConvexPoly {
        let mut vertices: Vec<Point2> = self.vertices.iter().map(|&v| map.apply(v)).collect();
        if map.m.det() < 0.0 && self.kind == Degeneracy::Full {
            vertices.reverse();
        }
        ConvexPoly { vertices, kind: self.kind }
    }

    fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        let count = match self.kind {
            Degeneracy::Point => 0,
            Degeneracy::Segment => 1,
            Degeneracy::Full => n,
        };
        (0..count).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        if self.kind != Degeneracy::Full {
            return 0.0;
        }
        0.5 * self.edges().map(|(a, b)| a.cross(b)).sum::<f64>()
    }

    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for (i, &a) in self.vertices.iter().enumerate() {
            for &b in &self.vertices[i + 1..] {
                best = best.max(a.distance(b));
            }
        }
        best
    }

    /// Mean of the vertices; an interior point for full polygons.
    pub fn vertex_mean(&self) -> Point2 {
        let sum = self.vertices.iter().fold(Point2::ORIGIN, |acc, &v| acc + v);
        sum / self.vertices.len() as f64
    }

    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        match self.kind {
            Degeneracy::Point => self.vertices[0].distance(p) <= tol,
            Degeneracy::Segment => segment_distance(p, self.vertices[0], self.vertices[1]) <= tol,
            Degeneracy::Full => self.edges().all(|(a, b)| {
                let e = b - a;
                e.cross(p - a) >= -tol * e.norm()
            }),
        }
    }

    /// Euclidean distance from `p` to the polygon (zero inside).
    pub fn distance_to(&self, p: Point2) -> f64 {
        match self.kind {
            Degeneracy::Point => self.vertices[0].distance(p),
            Degeneracy::Segment => segment_distance(p, self.vertices[0], self.vertices[1]),
            Degeneracy::Full => {
                if self.contains(p, 0.0) {
                    0.0
                } else {
                    self.edges().map(|(a, b)| segment_distance(p, a, b)).fold(f64::INFINITY, f64::min)
                }
            }
        }
    }

    /// Reduces a full polygon to at most `max_vertices` vertices, only ever
    /// growing it. Each step deletes the edge whose neighbouring edges, when
    /// extended to meet, add the least area.
    pub fn decimated_outward(&self, max_vertices: usize) -> ConvexPoly {
        let max_vertices = max_vertices.max(3);
        if self.kind != Degeneracy::Full || self.vertices.len() <= max_vertices {
            return self.clone();
        }
        let mut v = self.vertices.clone();
        while v.len() > max_vertices {
            let n = v.len();
            let mut best: Option<(f64, usize, Point2)> = None;
            for i in 0..n {
                let prev = v[(i + n - 1) % n];
                let a = v[i];
                let b = v[(i + 1) % n];
                let next = v[(i + 2) % n];
                let d1 = a - prev;
                let d2 = next - b;
                let denom = d1.cross(d2);
                if denom <= 0.0 {
                    continue;
                }
                let t = (b - a).cross(d2) / denom;
                let w = a + d1 * t;
                let added = 0.5 * (w - a).cross(b - a).abs();
                if best.is_none_or(|(cost, _, _)| added < cost) {
                    best = Some((added, i, w));
                }
            }
            let Some((_, i, w)) = best else { break };
            let j = (i + 1) % n;
            v[i] = w;
            v.remove(j);
        }
        ConvexPoly { vertices: v, kind: Degeneracy::Full }
    }
}

fn segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let e = b - a;
    let len2 = e.dot(e);
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(e) / len2).clamp(0.0, 1.0);
    p.distance(a + e * t)
}

/// Andrew's monotone chain. Near-collinear vertices are dropped, so a full
/// result is strictly convex.
pub fn convex_hull(points: &[Point2]) -> Result<ConvexPoly, GeomError> {
    if points.is_empty() {
        return Err(GeomError::EmptyPointSet);
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(GeomError::NonFinite);
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() == 1 {
        return Ok(ConvexPoly::point(pts[0]));
    }

    let keeps_turn = |o: Point2, a: Point2, b: Point2| {
        let (u, w) = (a - o, b - o);
        u.cross(w) > COLLINEAR_SIN * u.norm() * w.norm()
    };
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && !keeps_turn(hull[hull.len() - 2], hull[hull.len() - 1], p) {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && !keeps_turn(hull[hull.len() - 2], hull[hull.len() - 1], p) {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();

    let kind = if hull.len() <= 2 { Degeneracy::Segment } else { Degeneracy::Full };
    if kind == Degeneracy::Segment {
        hull = vec![pts[0], pts[pts.len() - 1]];
    }
    Ok(ConvexPoly { vertices: hull, kind })
}

/// Parameter interval of `line ∩ poly`, or `None` when they are disjoint.
pub fn line_poly_chord(line: &Line, poly: &ConvexPoly) -> Option<Interval> {
    let verts = poly.vertices();
    let dist: Vec<f64> = verts.iter().map(|&v| line.signed_distance(v)).collect();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut take = |t: f64| {
        lo = lo.min(t);
        hi = hi.max(t);
    };
    for (v, s) in verts.iter().zip(&dist) {
        if s.abs() <= GEOM_TOL {
            take(line.param_of(*v));
        }
    }
    let n = verts.len();
    let edge_count = match poly.degeneracy() {
        Degeneracy::Point => 0,
        Degeneracy::Segment => 1,
        Degeneracy::Full => n,
    };
    for i in 0..edge_count {
        let j = (i + 1) % n;
        let (si, sj) = (dist[i], dist[j]);
        if (si > GEOM_TOL && sj < -GEOM_TOL) || (si < -GEOM_TOL && sj > GEOM_TOL) {
            let crossing = verts[i] + (verts[j] - verts[i]) * (si / (si - sj));
            take(line.param_of(crossing));
        }
    }
    (lo <= hi).then(|| Interval::new(lo, hi))
}

/// Projection of a polygon onto a unit direction.
pub fn project_poly(poly: &ConvexPoly, direction: Point2) -> Interval {
    let (lo, hi) = poly
        .vertices()
        .iter()
        .map(|v| v.dot(direction))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s), hi.max(s)));
    Interval { lo, hi }
}

fn candidate_axes(poly: &ConvexPoly, out: &mut Vec<Point2>) {
    for (a, b) in poly.edges() {
        if let Ok(d) = (b - a).normalized() {
            out.push(-d.perp());
            if poly.degeneracy() == Degeneracy::Segment {
                out.push(d);
            }
        }
    }
}

/// A line strictly separating the two polygons, if one exists beyond
/// [`GEOM_TOL`]. Among the candidate axes the widest gap is chosen and the
/// line runs through its middle.
pub fn separating_line(p1: &ConvexPoly, p2: &ConvexPoly) -> Option<Line> {
    let mut axes = Vec::new();
    candidate_axes(p1, &mut axes);
    candidate_axes(p2, &mut axes);
    if let Ok(d) = (p2.vertex_mean() - p1.vertex_mean()).normalized() {
        axes.push(d);
    }
    let mut best: Option<(f64, Point2, f64)> = None;
    for axis in axes {
        let i1 = project_poly(p1, axis);
        let i2 = project_poly(p2, axis);
        let (gap, mid) = if i2.lo - i1.hi >= i1.lo - i2.hi {
            (i2.lo - i1.hi, 0.5 * (i1.hi + i2.lo))
        } else {
            (i1.lo - i2.hi, 0.5 * (i2.hi + i1.lo))
        };
        if gap > GEOM_TOL && best.is_none_or(|(g, _, _)| gap > g) {
            best = Some((gap, axis, mid));
        }
    }
    best.map(|(_, axis, mid)| Line { normal: axis, offset: mid })
}

/// Closed-set intersection test; touching at a single point counts.
pub fn polys_intersect(p1: &ConvexPoly, p2: &ConvexPoly) -> bool {
    separating_line(p1, p2).is_none()
}

/// Polygon containing the Minkowski sum of `poly` with the disk of radius
/// `r`, overshooting it by less than `0.01 * r`.
pub fn poly_offset_outward(poly: &ConvexPoly, r: f64) -> Result<ConvexPoly, GeomError> {
    if !r.is_finite() {
        return Err(GeomError::NonFinite);
    }
    if r < 0.0 {
        return Err(GeomError::NegativeRadius(r));
    }
    if r == 0.0 {
        return Ok(poly.clone());
    }
    let reach = r / (PI / OFFSET_SIDES as f64).cos();
    let step = 2.0 * PI / OFFSET_SIDES as f64;
    let ring: Vec<Point2> = (0..OFFSET_SIDES)
        .map(|j| Point2::from_angle((j as f64 + 0.5) * step) * reach)
        .collect();
    let pts: Vec<Point2> = poly.vertices().iter().flat_map(|&v| ring.iter().map(move |&u| v + u)).collect();
    convex_hull(&pts)
}

/// Hausdorff distance between two convex polygons. The distance to a convex
/// set is convex, so its maximum over a polygon sits at a vertex.
pub fn poly_hausdorff(p1: &ConvexPoly, p2: &ConvexPoly) -> f64 {
    let one_way = |a: &ConvexPoly, b: &ConvexPoly| {
        a.vertices().iter().map(|&v| b.distance_to(v)).fold(0.0, f64::max)
    };
    one_way(p1, p2).max(one_way(p2, p1))
}
