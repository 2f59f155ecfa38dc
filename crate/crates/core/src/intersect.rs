//! Hyperdensity certificates, line covers and approximate intersections.
//!
//! Negative facts are always certified against outer hulls and positive
//! facts against inner hulls, so a verdict never claims more than the
//! hull bounds support.

use std::f64::consts::{PI, TAU};

use thiserror::Error;

use crate::geom2d::{
    line_poly_chord, project_poly, separating_line, ConvexPoly, GeomError, Interval, IntervalSet, Line, Point2,
    GEOM_TOL,
};
use crate::hull::{hull_pair, HullPair};
use crate::ifs::{cloud_at_level, compose_address, invariant_ball, Address, Ifs, IfsError};

/// Points closer than this are treated as the same point.
pub const DISTINCT_TOL: f64 = 1e-14;

/// Longest rotation period checked when looking for a finite angular orbit.
pub const MAX_ROTATION_PERIOD: u64 = 10_000;

/// Upper limit on the indices scanned by [`angular_hits`].
pub const ANGULAR_SCAN_LIMIT: u64 = 10_000_000;

const PERIOD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntersectError {
    #[error("epsilon must be positive and finite, got {0}")]
    BadEpsilon(f64),
    #[error("at least 4 directions are required, got {0}")]
    TooFewDirections(usize),
    #[error("node budget of {budget} exceeded; partial cover is unusable")]
    BudgetExceeded { budget: u64, partial: Box<Cover> },
    #[error("no interior witness: f = {point} is not strictly inside the region")]
    NoInteriorWitness { point: Point2 },
    #[error("attractor is a single point")]
    SinglePoint,
    #[error("count must be at least 1")]
    ZeroCount,
    #[error("map {map} is not a similitude")]
    NotSimilitude { map: usize },
    #[error("f = {point} is not on the line (distance {distance:e})")]
    OffLine { point: Point2, distance: f64 },
    #[error("rational rotation: finite angular orbit of period {period}")]
    RationalRotation { period: u64 },
    #[error("no further hits within {limit} iterations")]
    ScanLimit { limit: u64 },
    #[error(transparent)]
    Ifs(#[from] IfsError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndeterminateReason {
    /// Every tested direction was covered by the inner pieces.
    HyperdenseOnTestedDirections { directions: usize },
    /// Neither a connectivity certificate nor a witness line was found.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    CertifiedChain,
    /// `witness` meets the inner hull and misses every outer piece.
    CertifiedNotHyperdense { witness: Line },
    Indeterminate(IndeterminateReason),
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        !matches!(self, Verdict::Indeterminate(_))
    }
}

fn pieces(ifs: &Ifs, poly: &ConvexPoly) -> Vec<ConvexPoly> {
    ifs.maps().iter().map(|m| poly.transformed(&m.as_affine())).collect()
}

/// Checks a non-hyperdensity certificate: the line crosses the inner hull
/// and misses every `T_k(outer)`.
pub fn verify_witness(ifs: &Ifs, hulls: &HullPair, line: &Line) -> bool {
    line_poly_chord(line, &hulls.inner).is_some()
        && pieces(ifs, &hulls.outer).iter().all(|p| line_poly_chord(line, p).is_none())
}

/// Connected components of the touching graph, as lists of piece indices.
fn components(polys: &[ConvexPoly]) -> Vec<Vec<usize>> {
    let n = polys.len();
    let mut label = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut comp = vec![start];
        label[start] = id;
        let mut head = 0;
        while head < comp.len() {
            let i = comp[head];
            head += 1;
            for j in 0..n {
                if label[j] == usize::MAX && separating_line(&polys[i], &polys[j]).is_none() {
                    label[j] = id;
                    comp.push(j);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Decides whether `H(C_F)` is certifiably connected (a chain fractal) or
/// certifiably not hyperdense, using hulls of level `m`.
pub fn chain_certify(ifs: &Ifs, m: usize) -> Verdict {
    let hulls = hull_pair(ifs, m);
    chain_certify_with(ifs, &hulls)
}

pub fn chain_certify_with(ifs: &Ifs, hulls: &HullPair) -> Verdict {
    if components(&pieces(ifs, &hulls.inner)).len() == 1 {
        return Verdict::CertifiedChain;
    }
    let outer = pieces(ifs, &hulls.outer);
    let comps = components(&outer);
    if comps.len() > 1 {
        let mut best: Option<(f64, Line)> = None;
        for (ci, a) in comps.iter().enumerate() {
            for b in &comps[ci + 1..] {
                for &i in a {
                    for &j in b {
                        let Some(line) = separating_line(&outer[i], &outer[j]) else { continue };
                        if !verify_witness(ifs, hulls, &line) {
                            continue;
                        }
                        let clearance = outer
                            .iter()
                            .flat_map(|p| p.vertices().iter().map(|&v| line.signed_distance(v).abs()))
                            .fold(f64::INFINITY, f64::min);
                        if best.is_none_or(|(c, _)| clearance > c) {
                            best = Some((clearance, line));
                        }
                    }
                }
            }
        }
        if let Some((_, witness)) = best {
            return Verdict::CertifiedNotHyperdense { witness };
        }
    }
    Verdict::Indeterminate(IndeterminateReason::Inconclusive)
}

/// The widest uncovered offset of `inner` hull projection along `u`, as a
/// witness line through the middle of the gap.
fn projection_gap(ifs: &Ifs, hulls: &HullPair, outer: &[ConvexPoly], u: Point2) -> Option<(f64, Line)> {
    let span = project_poly(&hulls.inner, u);
    let covered = IntervalSet::from_intervals(outer.iter().map(|p| project_poly(p, u)));
    covered
        .gaps_within(span)
        .into_iter()
        .filter(|g| g.length() > 2.0 * GEOM_TOL)
        .map(|g| (g.length(), Line::new(u.x, u.y, g.midpoint()).expect("unit normal")))
        .filter(|(_, line)| verify_witness(ifs, hulls, line))
        .max_by(|a, b| a.0.total_cmp(&b.0))
}

/// Projection test over `directions` evenly spaced normals in `[0, pi)`.
///
/// An uncovered offset of the inner-hull projection by the outer pieces
/// gives a certified witness. Otherwise the result is indeterminate, with a
/// note when the inner pieces covered the inner-hull projection along every
/// tested normal.
pub fn hyperdense_directional_test(ifs: &Ifs, m: usize, directions: usize) -> Result<Verdict, IntersectError> {
    let hulls = hull_pair(ifs, m);
    hyperdense_directional_test_with(ifs, &hulls, directions)
}

pub fn hyperdense_directional_test_with(
    ifs: &Ifs,
    hulls: &HullPair,
    directions: usize,
) -> Result<Verdict, IntersectError> {
    if directions < 4 {
        return Err(IntersectError::TooFewDirections(directions));
    }
    let outer = pieces(ifs, &hulls.outer);
    let inner = pieces(ifs, &hulls.inner);
    let mut best: Option<(f64, Line)> = None;
    let mut all_covered = true;
    for i in 0..directions {
        let u = Point2::from_angle(i as f64 * PI / directions as f64);
        if let Some((w, line)) = projection_gap(ifs, hulls, &outer, u) {
            if best.is_none_or(|(bw, _)| w > bw) {
                best = Some((w, line));
            }
        }
        let span = project_poly(&hulls.inner, u);
        let covered = IntervalSet::from_intervals(inner.iter().map(|p| project_poly(p, u)));
        if covered.gaps_within(span).iter().any(|g| g.length() > GEOM_TOL) {
            all_covered = false;
        }
    }
    Ok(match best {
        Some((_, witness)) => Verdict::CertifiedNotHyperdense { witness },
        None if all_covered => Verdict::Indeterminate(IndeterminateReason::HyperdenseOnTestedDirections { directions }),
        None => Verdict::Indeterminate(IndeterminateReason::Inconclusive),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverPiece {
    pub interval: Interval,
    pub address: Address,
}

/// Output of [`line_intersect`]: chords of small outer-hull images that
/// together contain every attractor point on the line.
#[derive(Debug, Clone, PartialEq)]
pub struct Cover {
    pub line: Line,
    pub epsilon: f64,
    /// Raw pieces in depth-first (lexicographic) order.
    pub pieces: Vec<CoverPiece>,
    pub nodes_expanded: u64,
    set: IntervalSet,
}

impl Cover {
    fn new(line: Line, epsilon: f64, pieces: Vec<CoverPiece>, nodes_expanded: u64) -> Self {
        let set = IntervalSet::from_intervals(pieces.iter().map(|p| p.interval));
        Self { line, epsilon, pieces, nodes_expanded, set }
    }

    /// Normalized union of the piece intervals.
    pub fn interval_set(&self) -> &IntervalSet {
        &self.set
    }

    pub fn total_length(&self) -> f64 {
        self.set.total_length()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }
}

/// Depth-first pruned traversal of the address tree.
///
/// A node `a` is pruned when the line misses `T_a(outer)` and emitted once
/// `‖M_a‖₂ · diam(outer) < epsilon`. Every intersecting child is explored.
/// The number of visited nodes is capped by the IFS budget.
pub fn line_intersect(ifs: &Ifs, hulls: &HullPair, line: &Line, epsilon: f64) -> Result<Cover, IntersectError> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(IntersectError::BadEpsilon(epsilon));
    }
    let diam = hulls.outer.diameter();
    let budget = ifs.budget();
    let mut pieces = Vec::new();
    let mut nodes = 0u64;
    let mut stack = vec![(Vec::<usize>::new(), crate::geom2d::Affine2::IDENTITY)];
    while let Some((digits, map)) = stack.pop() {
        if nodes >= budget {
            let partial = Cover::new(*line, epsilon, pieces, nodes);
            return Err(IntersectError::BudgetExceeded { budget, partial: Box::new(partial) });
        }
        nodes += 1;
        let image = hulls.outer.transformed(&map);
        let Some(chord) = line_poly_chord(line, &image) else { continue };
        if map.m.spectral_norm() * diam < epsilon {
            pieces.push(CoverPiece { interval: chord, address: Address::new(digits) });
            continue;
        }
        for k in (1..=ifs.len()).rev() {
            let mut child = digits.clone();
            child.push(k);
            stack.push((child, map.compose(&ifs.maps()[k - 1].as_affine())));
        }
    }
    Ok(Cover::new(*line, epsilon, pieces, nodes))
}

/// Open region used by [`proliferate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpenRegion {
    Disk { center: Point2, radius: f64 },
    /// Points at distance less than `half_width` from the line.
    Slab { line: Line, half_width: f64 },
}

impl OpenRegion {
    /// Distance from `z` to the boundary, negative outside.
    pub fn depth(&self, z: Point2) -> f64 {
        match self {
            OpenRegion::Disk { center, radius } => radius - z.distance(*center),
            OpenRegion::Slab { line, half_width } => half_width - line.signed_distance(z).abs(),
        }
    }

    pub fn contains(&self, z: Point2) -> bool {
        self.depth(z) > 0.0
    }
}

/// A fixed point distinct from `p`, if the IFS has one.
fn other_fixed_point(ifs: &Ifs, p: Point2) -> Option<Point2> {
    ifs.fixed_points().into_iter().find(|q| q.distance(p) > DISTINCT_TOL)
}

/// `m` distinct attractor points inside `region`, near `f = T_a(p_1)`.
///
/// With `T = T_1`, every `T_a ∘ T^k(x)` for `x` in the attractor lies
/// within `‖M_a‖₂ · lambda_T^k · 2r` of `f`, where `r` is the invariant-ball
/// radius. The least `k` that puts this below the depth of `f` is used, and
/// `x` ranges over address points of increasing level seeded at another
/// fixed point.
pub fn proliferate(ifs: &Ifs, a: &Address, region: &OpenRegion, m: usize) -> Result<Vec<Point2>, IntersectError> {
    if m == 0 {
        return Err(IntersectError::ZeroCount);
    }
    let composed = compose_address(ifs, a)?;
    let map_t = ifs.map(1)?;
    let p = map_t.fixed();
    let f = composed.affine.apply(p);
    let depth = region.depth(f);
    if !(depth > 0.0) {
        return Err(IntersectError::NoInteriorWitness { point: f });
    }
    let q = other_fixed_point(ifs, p).ok_or(IntersectError::SinglePoint)?;

    let scale = composed.affine.m.spectral_norm();
    let reach = 2.0 * invariant_ball(ifs).radius;
    let lambda = map_t.norm();
    let mut k = 0usize;
    let mut bound = scale * reach;
    while bound >= depth {
        bound *= lambda;
        k += 1;
    }
    let mut outer = composed.affine;
    let t_affine = map_t.as_affine();
    for _ in 0..k {
        outer = outer.compose(&t_affine);
    }

    let mut found: Vec<Point2> = Vec::with_capacity(m);
    for level in 0.. {
        let cloud = cloud_at_level(ifs, q, level)?;
        for x in cloud {
            let z = outer.apply(x);
            if !region.contains(z) || z.distance(f) <= DISTINCT_TOL {
                continue;
            }
            if found.iter().all(|w| w.distance(z) > DISTINCT_TOL) {
                found.push(z);
                if found.len() == m {
                    return Ok(found);
                }
            }
        }
    }
    unreachable!("the level loop ends through the budget error")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularHit {
    pub k: u64,
    pub point: Point2,
    /// `∠(L, point - f)`.
    pub angle: f64,
}

/// Least `P <= MAX_ROTATION_PERIOD` with `P theta ≡ 0 (mod 2 pi)`.
fn rotation_period(theta: f64) -> Option<u64> {
    (1..=MAX_ROTATION_PERIOD).find(|&p| {
        let r = (p as f64 * theta).rem_euclid(TAU);
        r < PERIOD_TOL || TAU - r < PERIOD_TOL
    })
}

/// The first `m` indices `k` for which `T_a ∘ T_t^k(q)` lies within angle
/// `epsilon` of `line` as seen from `f = T_a(p_t)`.
///
/// In the frame `T_a^{-1}(L)` the iterates `T_t^k(q) - p_t` turn by the
/// rotation angle `theta` each step, so a hit is
/// `((k theta + alpha) - beta) mod 2 pi < epsilon`, where `alpha` is the
/// angle of `q - p_t` and `beta` that of the back-mapped line direction
/// oriented towards `q`. Hits whose image angle exceeds `epsilon` are not
/// reported.
pub fn angular_hits(
    ifs: &Ifs,
    t: usize,
    a: &Address,
    line: &Line,
    epsilon: f64,
    m: usize,
) -> Result<Vec<AngularHit>, IntersectError> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(IntersectError::BadEpsilon(epsilon));
    }
    if m == 0 {
        return Err(IntersectError::ZeroCount);
    }
    let map_t = ifs.map(t)?;
    let sim = map_t.similitude_params().ok_or(IntersectError::NotSimilitude { map: t })?;
    let composed = compose_address(ifs, a)?;
    let p = map_t.fixed();
    let f = composed.affine.apply(p);
    let distance = line.signed_distance(f).abs();
    if distance > GEOM_TOL {
        return Err(IntersectError::OffLine { point: f, distance });
    }
    let q = other_fixed_point(ifs, p).ok_or(IntersectError::SinglePoint)?;
    let inv = composed.affine.m.inverse().ok_or(IfsError::NonInvertible { map: t })?;
    let mut back = inv.apply(line.direction()).normalized()?;
    if back.dot(q - p) < 0.0 {
        back = -back;
    }
    let alpha = (q - p).angle();
    let beta = back.angle();
    let theta = sim.angle;
    let radius = (q - p).norm();
    let period = rotation_period(theta);

    let mut hits = Vec::with_capacity(m);
    for k in 1..=ANGULAR_SCAN_LIMIT {
        let phase = k as f64 * theta + alpha;
        if (phase - beta).rem_euclid(TAU) < epsilon {
            let dir = Point2::from_angle(phase);
            let angle = line.angle_to(composed.affine.m.apply(dir));
            if angle < epsilon {
                let local = p + dir * (radius * sim.ratio.powf(k as f64));
                hits.push(AngularHit { k, point: composed.affine.apply(local), angle });
                if hits.len() == m {
                    return Ok(hits);
                }
            }
        }
        if let Some(period) = period {
            if k == period && hits.is_empty() {
                return Err(IntersectError::RationalRotation { period });
            }
        }
    }
    Err(IntersectError::ScanLimit { limit: ANGULAR_SCAN_LIMIT })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geom2d::Mat2;
    use crate::ifs::{points_at_level, Contraction};
    use proptest::prelude::*;

    fn line(a: f64, b: f64, c: f64) -> Line {
        Line::new(a, b, c).unwrap()
    }

    #[test]
    fn sierpinski_is_a_chain() {
        assert_eq!(chain_certify(&fixtures::sierpinski(), 8), Verdict::CertifiedChain);
    }

    #[test]
    fn cantor_witness_is_the_mid_line() {
        let ifs = fixtures::cantor_pair();
        let Verdict::CertifiedNotHyperdense { witness } = chain_certify(&ifs, 8) else { panic!() };
        let (a, b, c) = witness.coefficients();
        let s = a.signum();
        assert!((a * s - 1.0).abs() < 1e-9 && b.abs() < 1e-9 && (c * s - 0.5).abs() < 1e-9);
        assert!(verify_witness(&ifs, &hull_pair(&ifs, 8), &witness));
    }

    #[test]
    fn single_map_is_a_chain() {
        let ifs = Ifs::new(vec![Contraction::similitude(Point2::new(1.0, 2.0), 0.5, 0.0)], None).unwrap();
        assert_eq!(chain_certify(&ifs, 8), Verdict::CertifiedChain);
        assert_eq!(
            hyperdense_directional_test(&ifs, 8, 16).unwrap(),
            Verdict::Indeterminate(IndeterminateReason::HyperdenseOnTestedDirections { directions: 16 })
        );
    }

    #[test]
    fn directional_examples() {
        let cantor = fixtures::cantor_pair();
        let Verdict::CertifiedNotHyperdense { witness } = hyperdense_directional_test(&cantor, 8, 64).unwrap() else {
            panic!()
        };
        let n = witness.normal();
        assert!((n.x.abs() - 1.0).abs() < 1e-12);
        assert!((witness.offset() * n.x.signum() - 0.5).abs() < 1e-3);

        // oracle: union of the three sub-triangle projections is the
        // triangle projection for every direction
        assert_eq!(
            hyperdense_directional_test(&fixtures::sierpinski(), 8, 64).unwrap(),
            Verdict::Indeterminate(IndeterminateReason::HyperdenseOnTestedDirections { directions: 64 })
        );
        assert_eq!(
            hyperdense_directional_test(&cantor, 8, 3),
            Err(IntersectError::TooFewDirections(3))
        );
    }

    #[test]
    fn witness_rejected_when_it_hits_a_piece() {
        let ifs = fixtures::cantor_pair();
        let hulls = hull_pair(&ifs, 8);
        assert!(!verify_witness(&ifs, &hulls, &line(1.0, 0.0, 0.2)));
        assert!(!verify_witness(&ifs, &hulls, &line(1.0, 0.0, 3.0)));
    }

    #[test]
    fn sierpinski_base_edge() {
        let ifs = fixtures::sierpinski();
        let cover = line_intersect(&ifs, &hull_pair(&ifs, 8), &line(0.0, 1.0, 0.0), 0.01).unwrap();
        assert!((cover.total_length() - 1.0).abs() < 0.02);
        assert!(cover.pieces.iter().all(|p| p.interval.length() < 0.01));
    }

    #[test]
    fn cantor_covers() {
        let ifs = fixtures::cantor_pair();
        let hulls = hull_pair(&ifs, 8);
        assert!(line_intersect(&ifs, &hulls, &line(1.0, 0.0, 0.5), 1e-3).unwrap().is_empty());
        let third = line(1.0, 0.0, 1.0 / 3.0);
        let cover = line_intersect(&ifs, &hulls, &third, 1e-3).unwrap();
        assert!(cover.interval_set().contains(third.param_of(Point2::new(1.0 / 3.0, 0.0)), 1e-12));
    }

    #[test]
    fn far_line_expands_only_the_root() {
        let ifs = fixtures::sierpinski();
        let cover = line_intersect(&ifs, &hull_pair(&ifs, 8), &line(0.0, 1.0, 5.0), 0.01).unwrap();
        assert!(cover.is_empty());
        assert_eq!(cover.nodes_expanded, 1);
    }

    #[test]
    fn cover_errors() {
        let ifs = fixtures::sierpinski();
        let hulls = hull_pair(&ifs, 8);
        assert_eq!(
            line_intersect(&ifs, &hulls, &line(0.0, 1.0, 0.0), 0.0),
            Err(IntersectError::BadEpsilon(0.0))
        );
        let small = ifs.clone().with_budget(50);
        match line_intersect(&small, &hulls, &line(0.0, 1.0, 0.0), 1e-3) {
            Err(IntersectError::BudgetExceeded { budget: 50, partial }) => assert_eq!(partial.nodes_expanded, 50),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cover_shrinks_with_epsilon() {
        let lines = [line(0.0, 1.0, 0.2), line(1.0, 1.0, 0.7), line(1.0, 0.0, 0.4)];
        for ifs in fixtures::all() {
            let hulls = hull_pair(&ifs, 8);
            for l in &lines {
                let lengths: Vec<f64> = [0.1, 0.05, 0.01]
                    .iter()
                    .map(|&e| line_intersect(&ifs, &hulls, l, e).unwrap().total_length())
                    .collect();
                assert!(lengths[1] <= lengths[0] + 1e-12 && lengths[2] <= lengths[1] + 1e-12, "{lengths:?}");
            }
        }
    }

    #[test]
    fn proliferate_examples() {
        let s = fixtures::sierpinski();
        let disk = OpenRegion::Disk { center: Point2::ORIGIN, radius: 0.1 };
        let pts = proliferate(&s, &Address::root(), &disk, 5).unwrap();
        assert_eq!(pts.len(), 5);
        assert!(pts.iter().all(|p| p.norm() < 0.1 && p.norm() > 0.0));

        let one = proliferate(&s, &Address::root(), &OpenRegion::Disk { center: Point2::ORIGIN, radius: 1e-6 }, 1)
            .unwrap();
        assert!(one[0].norm() < 1e-6 && one[0] != Point2::ORIGIN);

        let c = fixtures::cantor_pair();
        let slab = OpenRegion::Slab { line: line(1.0, 0.0, 0.0), half_width: 0.05 };
        let pts = proliferate(&c, &Address::root(), &slab, 8).unwrap();
        assert!(pts.iter().all(|p| p.x.abs() < 0.05 && p.y == 0.0));
    }

    #[test]
    fn proliferate_errors() {
        let s = fixtures::sierpinski();
        let far = OpenRegion::Disk { center: Point2::new(3.0, 0.0), radius: 0.5 };
        assert!(matches!(proliferate(&s, &Address::root(), &far, 3), Err(IntersectError::NoInteriorWitness { .. })));
        let single = Ifs::new(vec![Contraction::similitude(Point2::ORIGIN, 0.5, 0.0)], None).unwrap();
        let disk = OpenRegion::Disk { center: Point2::ORIGIN, radius: 0.5 };
        assert_eq!(proliferate(&single, &Address::root(), &disk, 3), Err(IntersectError::SinglePoint));
    }

    #[test]
    fn angular_first_indices() {
        // oracle: brute-force residues of k mod 2 pi
        let scan = |eps: f64| (1..=100u64).find(|&k| (k as f64).rem_euclid(TAU) < eps).unwrap();
        assert_eq!(scan(0.1), 44);
        assert_eq!(scan(0.2), 19);
        let ifs = fixtures::spiral_pair();
        let x_axis = line(0.0, 1.0, 0.0);
        for (eps, expected) in [(0.1, 44), (0.2, 19)] {
            let hits = angular_hits(&ifs, 1, &Address::root(), &x_axis, eps, 3).unwrap();
            assert_eq!(hits[0].k, expected);
            assert!(hits.iter().all(|h| h.angle < eps));
            assert!(hits.windows(2).all(|w| w[0].k < w[1].k));
        }
    }

    #[test]
    fn quarter_turn_is_rational() {
        let ifs = fixtures::quarter_turn_pair();
        let tilted = Line::through(Point2::ORIGIN, Point2::from_angle(0.3)).unwrap();
        assert_eq!(
            angular_hits(&ifs, 1, &Address::root(), &tilted, 0.1, 1),
            Err(IntersectError::RationalRotation { period: 4 })
        );
        let hits = angular_hits(&ifs, 1, &Address::root(), &line(0.0, 1.0, 0.0), 0.1, 3).unwrap();
        assert_eq!(hits.iter().map(|h| h.k).collect::<Vec<_>>(), vec![4, 8, 12]);
    }

    #[test]
    fn angular_errors() {
        let ifs = fixtures::spiral_pair();
        assert!(matches!(
            angular_hits(&ifs, 1, &Address::root(), &line(0.0, 1.0, 1.0), 0.1, 1),
            Err(IntersectError::OffLine { .. })
        ));
        assert!(matches!(
            angular_hits(&fixtures::shear_pair(), 1, &Address::root(), &line(0.0, 1.0, 0.0), 0.1, 1),
            Err(IntersectError::NotSimilitude { map: 1 })
        ));
    }

    #[test]
    fn angular_hits_through_an_address() {
        let ifs = fixtures::spiral_pair();
        let a = Address::new(vec![2, 1]);
        let f = crate::ifs::apply_address(&ifs, &a, Point2::ORIGIN).unwrap();
        let l = Line::through(f, Point2::new(1.0, 2.0)).unwrap();
        let hits = angular_hits(&ifs, 1, &a, &l, 0.05, 4).unwrap();
        for h in hits {
            assert!(h.angle < 0.05);
            if h.point.distance(f) > 1e-9 {
                assert!(l.angle_to(h.point - f) < 0.05 + 1e-6);
            }
        }
    }

    fn fixture_strategy() -> impl Strategy<Value = Ifs> {
        (0usize..4).prop_map(|i| match i {
            0 => fixtures::sierpinski(),
            1 => fixtures::cantor_pair(),
            2 => fixtures::spiral_pair(),
            _ => fixtures::shear_pair(),
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn cover_contains_points_on_the_line(ifs in fixture_strategy(), pick in 0usize..4096, phi in 0.0f64..PI) {
            let hulls = hull_pair(&ifs, 8);
            let pts = points_at_level(&ifs, ifs.fixed_points()[0], 8).unwrap();
            let through = pts[pick % pts.len()].1;
            let l = Line::through(through, Point2::from_angle(phi)).unwrap();
            let cover = line_intersect(&ifs, &hulls, &l, 1e-2).unwrap();
            for (_, p) in &pts {
                if l.signed_distance(*p).abs() <= 1e-12 {
                    prop_assert!(cover.interval_set().contains(l.param_of(*p), 1e-9));
                }
            }
        }

        #[test]
        fn witnesses_always_verify(ratio in 0.05f64..0.45, m in 2usize..9) {
            let ifs = fixtures::cantor_with_ratio(ratio);
            let hulls = hull_pair(&ifs, m);
            if let Verdict::CertifiedNotHyperdense { witness } = chain_certify_with(&ifs, &hulls) {
                prop_assert!(verify_witness(&ifs, &hulls, &witness));
            }
            if let Verdict::CertifiedNotHyperdense { witness } = hyperdense_directional_test_with(&ifs, &hulls, 16).unwrap() {
                prop_assert!(verify_witness(&ifs, &hulls, &witness));
            }
        }

        #[test]
        fn proliferated_points_are_inside_and_distinct(ifs in fixture_strategy(), digits in prop::collection::vec(1usize..3, 0..4), radius in 1e-3f64..0.3, m in 1usize..40) {
            let a = Address::new(digits);
            let f = crate::ifs::apply_address(&ifs, &a, ifs.fixed_points()[0]).unwrap();
            let region = OpenRegion::Disk { center: f, radius };
            let pts = proliferate(&ifs, &a, &region, m).unwrap();
            prop_assert_eq!(pts.len(), m);
            for (i, p) in pts.iter().enumerate() {
                prop_assert!(region.contains(*p));
                for q in &pts[i + 1..] {
                    prop_assert!(p.distance(*q) > DISTINCT_TOL);
                }
            }
        }
    }

    #[test]
    fn chord_of_map_images_is_consistent() {
        let m = Mat2::new(0.5, 0.1, -0.1, 0.4);
        let ifs = Ifs::new(
            vec![Contraction::affine(Point2::ORIGIN, m), Contraction::affine(Point2::new(1.0, 0.0), m)],
            Some(vec![0.5, 0.5]),
        )
        .unwrap();
        let hulls = hull_pair(&ifs, 6);
        let cover = line_intersect(&ifs, &hulls, &line(0.0, 1.0, 0.0), 0.05).unwrap();
        for piece in &cover.pieces {
            let map = compose_address(&ifs, &piece.address).unwrap();
            assert!(line_poly_chord(&cover.line, &hulls.outer.transformed(&map.affine)).is_some());
        }
    }
}
