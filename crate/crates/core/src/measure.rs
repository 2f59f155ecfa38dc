//! Level-`L` invariant measure and shadow profiles.
//!
//! `nu_L(S)` is the total weight of the addresses `a` with `|a| = L` whose
//! point `T_a(seed)` lies in `S`. Sums always run in lexicographic address
//! order, so results are bit-reproducible.

use std::f64::consts::FRAC_PI_2;
use std::str::FromStr;

use thiserror::Error;

use crate::geom2d::{convex_hull, project_poly, Affine2, ConvexPoly, GeomError, Line, Point2};
use crate::hull::{outer_hull, DEFAULT_HULL_LEVEL};
use crate::ifs::{for_each_address, Ifs, IfsError};

/// Slack for closed-set containment.
pub const CONTAIN_TOL: f64 = 1e-12;

/// Half side of the square used as the whole plane.
pub const PLANE_HALF_SIDE: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("slab half-width must be positive, got {0}")]
    BadHalfWidth(f64),
    #[error("sector half-angle must lie in (0, pi/2], got {0}")]
    BadHalfAngle(f64),
    #[error("preimage not shape-closed: map {map} is not a similitude")]
    NotShapeClosed { map: usize },
    #[error("non-invertible map {map}")]
    NonInvertible { map: usize },
    #[error("invariance residual needs level L >= 1")]
    LevelZero,
    #[error("ray spacing is zero; the fixed points coincide")]
    ZeroSpacing,
    #[error("region: {0}")]
    BadRegion(String),
    #[error(transparent)]
    Ifs(#[from] IfsError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Closed planar region.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    /// `normal · z <= offset` with a unit normal.
    HalfPlane { normal: Point2, offset: f64 },
    Convex(ConvexPoly),
    /// Points within `half_width` of the line.
    Slab { line: Line, half_width: f64 },
    /// Points `z` with `∠(line, z - apex) <= half_angle`, and the apex.
    Sector { apex: Point2, line: Line, half_angle: f64 },
}

impl Region {
    /// Half-plane `a x + b y <= c`.
    pub fn half_plane(a: f64, b: f64, c: f64) -> Result<Region, MeasureError> {
        let line = Line::new(a, b, c)?;
        Ok(Region::HalfPlane { normal: line.normal(), offset: line.offset() })
    }

    pub fn slab(line: Line, half_width: f64) -> Result<Region, MeasureError> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(MeasureError::BadHalfWidth(half_width));
        }
        Ok(Region::Slab { line, half_width })
    }

    /// Sector with apex `apex` around the direction of `line`.
    pub fn sector(apex: Point2, line: Line, half_angle: f64) -> Result<Region, MeasureError> {
        if !(half_angle > 0.0 && half_angle <= FRAC_PI_2) {
            return Err(MeasureError::BadHalfAngle(half_angle));
        }
        Ok(Region::Sector { apex, line, half_angle })
    }

    /// The square `[-1e6, 1e6]²`, standing in for the plane.
    pub fn whole_plane() -> Region {
        let h = PLANE_HALF_SIDE;
        let pts = [Point2::new(-h, -h), Point2::new(h, -h), Point2::new(h, h), Point2::new(-h, h)];
        Region::Convex(convex_hull(&pts).expect("four corners"))
    }

    pub fn contains(&self, z: Point2) -> bool {
        match self {
            Region::HalfPlane { normal, offset } => normal.dot(z) <= offset + CONTAIN_TOL,
            Region::Convex(poly) => poly.contains(z, CONTAIN_TOL),
            Region::Slab { line, half_width } => line.signed_distance(z).abs() <= half_width + CONTAIN_TOL,
            Region::Sector { apex, line, half_angle } => {
                let v = z - *apex;
                v.norm() <= CONTAIN_TOL || line.angle_to(v) <= half_angle + CONTAIN_TOL
            }
        }
    }

    /// `{ z : map(z) ∈ self }` for map `index` (1-based, for errors only).
    fn preimage(&self, map: &Affine2, similitude: bool, index: usize) -> Result<Region, MeasureError> {
        let inv = map.inverse().ok_or(MeasureError::NonInvertible { map: index })?;
        // n · (M z + t) = (Mᵀ n) · z + n · t
        let pull = |normal: Point2, offset: f64| {
            let n = map.m.transpose().apply(normal);
            let len = n.norm();
            (n / len, (offset - normal.dot(map.t)) / len, len)
        };
        Ok(match self {
            Region::HalfPlane { normal, offset } => {
                let (n, c, _) = pull(*normal, *offset);
                Region::HalfPlane { normal: n, offset: c }
            }
            Region::Convex(poly) => Region::Convex(poly.transformed(&inv)),
            Region::Slab { line, half_width } => {
                let (n, c, len) = pull(line.normal(), line.offset());
                Region::Slab { line: Line::new(n.x, n.y, c)?, half_width: half_width / len }
            }
            Region::Sector { apex, line, half_angle } => {
                if !similitude {
                    return Err(MeasureError::NotShapeClosed { map: index });
                }
                let back = Line::through(inv.apply(*apex), inv.m.apply(line.direction()))?;
                Region::Sector { apex: inv.apply(*apex), line: back, half_angle: *half_angle }
            }
        })
    }
}

impl FromStr for Region {
    type Err = MeasureError;

    /// `halfplane a b c` | `slab a b c eps` | `poly x1 y1 x2 y2 ...` |
    /// `sector qx qy a b c eps`, where `a b c` is the line `a x + b y = c`.
    fn from_str(spec: &str) -> Result<Region, MeasureError> {
        let bad = |msg: String| MeasureError::BadRegion(msg);
        let tokens: Vec<&str> = spec.split_whitespace().collect();
        let Some((&kind, rest)) = tokens.split_first() else {
            return Err(bad("empty region".into()));
        };
        let v = rest
            .iter()
            .map(|t| t.parse::<f64>().map_err(|_| bad(format!("malformed number {t:?}"))))
            .collect::<Result<Vec<f64>, _>>()?;
        let arity = |n: usize| {
            if v.len() == n {
                Ok(())
            } else {
                Err(bad(format!("{kind} takes {n} numbers, got {}", v.len())))
            }
        };
        match kind {
            "halfplane" => {
                arity(3)?;
                Region::half_plane(v[0], v[1], v[2])
            }
            "slab" => {
                arity(4)?;
                Region::slab(Line::new(v[0], v[1], v[2])?, v[3])
            }
            "poly" => {
                if v.is_empty() || v.len() % 2 != 0 {
                    return Err(bad("poly takes a non-empty list of x y pairs".into()));
                }
                let pts: Vec<Point2> = v.chunks(2).map(|c| Point2::new(c[0], c[1])).collect();
                Ok(Region::Convex(convex_hull(&pts)?))
            }
            "sector" => {
                arity(6)?;
                Region::sector(Point2::new(v[0], v[1]), Line::new(v[2], v[3], v[4])?, v[5])
            }
            other => Err(bad(format!("unknown region kind {other:?}"))),
        }
    }
}

/// `nu_L(region)` for the points `T_a(seed)`, `|a| = level`.
///
/// Masses are summed per tree node, `nu(a) = sum_k w_k nu(a k)`, so a
/// node whose children all lie in the region contributes exactly
/// `w_1 + ... + w_n`.
pub fn nu_level(ifs: &Ifs, level: usize, region: &Region, seed: Point2) -> Result<f64, MeasureError> {
    ifs.check_budget(level)?;
    let maps: Vec<Affine2> = ifs.maps().iter().map(|m| m.as_affine()).collect();
    Ok(subtree_mass(&maps, ifs.weights(), level, &Affine2::IDENTITY, region, seed))
}

fn subtree_mass(maps: &[Affine2], weights: &[f64], remaining: usize, acc: &Affine2, region: &Region, seed: Point2) -> f64 {
    if remaining == 0 {
        return if region.contains(acc.apply(seed)) { 1.0 } else { 0.0 };
    }
    let mut mass = 0.0;
    for (map, w) in maps.iter().zip(weights) {
        mass += w * subtree_mass(maps, weights, remaining - 1, &acc.compose(map), region, seed);
    }
    mass
}

/// `|nu_L(S) - sum_k w_k nu_{L-1}(T_k^{-1}(S))|`.
pub fn invariance_residual(ifs: &Ifs, level: usize, region: &Region, seed: Point2) -> Result<f64, MeasureError> {
    if level == 0 {
        return Err(MeasureError::LevelZero);
    }
    let lhs = nu_level(ifs, level, region, seed)?;
    let mut rhs = 0.0;
    for (i, (m, w)) in ifs.maps().iter().zip(ifs.weights()).enumerate() {
        let pre = region.preimage(&m.as_affine(), m.similitude_params().is_some(), i + 1)?;
        rhs += w * nu_level(ifs, level - 1, &pre, seed)?;
    }
    Ok((lhs - rhs).abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShadowRay {
    /// Value of `u · z` along the ray.
    pub offset: f64,
    pub mass: f64,
}

/// Masses of parallel slabs tiling the projection of the outer hull.
#[derive(Debug, Clone, PartialEq)]
pub struct ShadowProfile {
    pub theta: f64,
    pub level: usize,
    pub spacing: f64,
    pub seed: Point2,
    pub rays: Vec<ShadowRay>,
}

impl ShadowProfile {
    pub fn total_mass(&self) -> f64 {
        self.rays.iter().map(|r| r.mass).sum()
    }

    /// Unit normal of the rays.
    pub fn normal(&self) -> Point2 {
        Point2::from_angle(self.theta)
    }
}

/// Shadow profile for rays with unit normal `(cos theta, sin theta)`, so
/// `theta = 0` gives vertical rays.
///
/// Slabs have width `lambda_min^L · diam(P)` and are centred on the middle
/// of the outer-hull projection. Each slab is half-open; a point within
/// [`CONTAIN_TOL`] of a shared edge gives half its weight to each side, so
/// the masses add up to the total mass.
pub fn shadow_profile(ifs: &Ifs, theta: f64, level: usize, seed: Point2) -> Result<ShadowProfile, MeasureError> {
    let spacing = ifs.lambda_min().powi(level as i32) * ifs.fixed_point_diameter();
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(MeasureError::ZeroSpacing);
    }
    ifs.check_budget(level)?;
    let u = Point2::from_angle(theta);
    let span = project_poly(&outer_hull(ifs, DEFAULT_HULL_LEVEL), u);
    let count = ((span.length() / spacing).ceil() as usize).max(1);
    let start = span.midpoint() - 0.5 * count as f64 * spacing;
    let mut masses = vec![0.0; count];
    for_each_address(ifs, level, |_, map, w| {
        let s = (u.dot(map.apply(seed)) - start) / spacing;
        let nearest = s.round();
        let edge = nearest as isize;
        if (s - nearest).abs() * spacing <= CONTAIN_TOL && edge > 0 && (edge as usize) < count {
            masses[edge as usize - 1] += 0.5 * w;
            masses[edge as usize] += 0.5 * w;
        } else {
            let bin = (s.floor().max(0.0) as usize).min(count - 1);
            masses[bin] += w;
        }
    })?;
    let rays = masses
        .into_iter()
        .enumerate()
        .map(|(i, mass)| ShadowRay { offset: start + (i as f64 + 0.5) * spacing, mass })
        .collect();
    Ok(ShadowProfile { theta, level, spacing, seed, rays })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::hull::{hull_pair, inner_hull};
    use crate::ifs::{points_at_level, Contraction};
    use proptest::prelude::*;

    fn cantor_equal() -> Ifs {
        let c = fixtures::cantor_pair();
        Ifs::new(c.maps().to_vec(), Some(vec![0.5, 0.5])).unwrap()
    }

    fn regions() -> Vec<Region> {
        let tri = crate::geom2d::convex_hull(&[
            Point2::new(0.1, -0.1),
            Point2::new(0.6, 0.0),
            Point2::new(0.3, 0.5),
        ])
        .unwrap();
        vec![
            Region::half_plane(1.0, 0.3, 0.45).unwrap(),
            Region::Convex(tri),
            Region::slab(Line::new(0.2, 1.0, 0.1).unwrap(), 0.15).unwrap(),
            Region::sector(Point2::new(0.2, 0.0), Line::new(1.0, -1.0, 0.2).unwrap(), 0.5).unwrap(),
        ]
    }

    #[test]
    fn whole_plane_has_unit_mass() {
        for ifs in fixtures::all() {
            for level in 0..=8 {
                let m = nu_level(&ifs, level, &Region::whole_plane(), ifs.fixed_points()[0]).unwrap();
                assert!((m - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cantor_exact_masses() {
        let ifs = cantor_equal();
        let p = ifs.fixed_points()[0];
        let left = Region::half_plane(1.0, 0.0, 1.0 / 3.0).unwrap();
        let mid = Region::slab(Line::new(1.0, 0.0, 0.5).unwrap(), 0.1).unwrap();
        for level in 1..=10 {
            assert_eq!(nu_level(&ifs, level, &left, p).unwrap(), 0.5);
            assert_eq!(nu_level(&ifs, level, &mid, p).unwrap(), 0.0);
        }
    }

    #[test]
    fn sierpinski_sub_triangle_mass() {
        let ifs = fixtures::sierpinski();
        let outer = hull_pair(&ifs, 8).outer;
        let piece = Region::Convex(outer.transformed(&ifs.maps()[0].as_affine()));
        let m = nu_level(&ifs, 6, &piece, ifs.fixed_points()[0]).unwrap();
        // oracle: prefix-1 addresses carry weight exactly 1/3
        let prefix: f64 = points_at_level(&ifs, ifs.fixed_points()[0], 6)
            .unwrap()
            .iter()
            .filter(|(a, _)| a.indices()[0] == 1)
            .map(|_| 3f64.powi(-6))
            .sum();
        assert!((prefix - 1.0 / 3.0).abs() < 1e-12);
        assert!((m - 1.0 / 3.0).abs() < 2e-2);
    }

    #[test]
    fn residual_examples() {
        let ifs = cantor_equal();
        let p = ifs.fixed_points()[0];
        let left = Region::half_plane(1.0, 0.0, 1.0 / 3.0).unwrap();
        assert_eq!(invariance_residual(&ifs, 4, &left, p).unwrap(), 0.0);
        let s = fixtures::sierpinski();
        let inner = Region::Convex(inner_hull(&s, 3));
        assert!(invariance_residual(&s, 3, &inner, s.fixed_points()[0]).unwrap() < 1e-12);
        assert_eq!(invariance_residual(&s, 0, &inner, Point2::ORIGIN), Err(MeasureError::LevelZero));
    }

    #[test]
    fn residual_grid() {
        for ifs in fixtures::all() {
            let seed = ifs.fixed_points()[0];
            for region in regions() {
                for level in 1..=5 {
                    assert!(invariance_residual(&ifs, level, &region, seed).unwrap() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn sector_needs_similitudes() {
        let ifs = fixtures::shear_pair();
        let sector = regions().pop().unwrap();
        assert!(matches!(
            invariance_residual(&ifs, 2, &sector, Point2::ORIGIN),
            Err(MeasureError::NotShapeClosed { map: 1 })
        ));
        let slab = regions()[2].clone();
        assert!(invariance_residual(&ifs, 3, &slab, Point2::ORIGIN).unwrap() < 1e-12);
    }

    #[test]
    fn region_grammar() {
        assert!(matches!("halfplane 1 0 0.334".parse(), Ok(Region::HalfPlane { .. })));
        assert!(matches!("slab 1 0 0.5 0.1".parse(), Ok(Region::Slab { .. })));
        assert!(matches!("poly 0 0 1 0 0 1".parse(), Ok(Region::Convex(_))));
        assert!(matches!("sector 0 0 0 1 0 0.2".parse(), Ok(Region::Sector { .. })));
        for bad in ["slab 1 0 0.5", "poly 0 0 1", "disk 0 0 1", "halfplane 1 x 0", "", "slab 1 0 0 -1"] {
            assert!(bad.parse::<Region>().is_err(), "{bad}");
        }
    }

    #[test]
    fn region_validation() {
        let l = Line::new(1.0, 0.0, 0.0).unwrap();
        assert_eq!(Region::slab(l, 0.0), Err(MeasureError::BadHalfWidth(0.0)));
        assert!(Region::sector(Point2::ORIGIN, l, 2.0).is_err());
        assert!(Region::sector(Point2::ORIGIN, l, FRAC_PI_2).is_ok());
        let sector = Region::sector(Point2::ORIGIN, Line::new(0.0, 1.0, 0.0).unwrap(), 0.1).unwrap();
        assert!(sector.contains(Point2::ORIGIN));
        assert!(sector.contains(Point2::new(-1.0, 0.05)));
        assert!(!sector.contains(Point2::new(1.0, 0.2)));
    }

    #[test]
    fn sierpinski_profile_is_symmetric() {
        let ifs = fixtures::sierpinski();
        let apex = ifs.fixed_points()[2];
        let prof = shadow_profile(&ifs, 0.0, 6, apex).unwrap();
        assert!((prof.total_mass() - 1.0).abs() < 1e-9);
        let n = prof.rays.len();
        for i in 0..n {
            let (a, b) = (prof.rays[i], prof.rays[n - 1 - i]);
            assert!((a.offset + b.offset - 1.0).abs() < 1e-9);
            assert!((a.mass - b.mass).abs() < 1e-12, "{i}: {} vs {}", a.mass, b.mass);
        }
    }

    #[test]
    fn cantor_profile_gap_and_total() {
        let ifs = fixtures::cantor_pair();
        let prof = shadow_profile(&ifs, 0.0, 5, ifs.fixed_points()[0]).unwrap();
        assert!((prof.total_mass() - 1.0).abs() < 1e-9);
        assert!((prof.spacing - 3f64.powi(-5)).abs() < 1e-15);
        for r in &prof.rays {
            if r.offset > 0.34 && r.offset < 0.66 {
                assert_eq!(r.mass, 0.0);
            }
        }
        assert!(prof.rays.windows(2).all(|w| (w[1].offset - w[0].offset - prof.spacing).abs() < 1e-12));
    }

    #[test]
    fn profile_needs_spread() {
        let single = Ifs::new(vec![Contraction::similitude(Point2::ORIGIN, 0.5, 0.0)], None).unwrap();
        assert_eq!(shadow_profile(&single, 0.0, 3, Point2::ORIGIN), Err(MeasureError::ZeroSpacing));
    }

    #[test]
    fn chain_shadow_has_no_empty_rays_over_the_inner_hull() {
        let ifs = fixtures::sierpinski();
        let inner = inner_hull(&ifs, 8);
        for theta in [0.0, 0.4, 1.3] {
            let prof = shadow_profile(&ifs, theta, 8, ifs.fixed_points()[0]).unwrap();
            let u = prof.normal();
            let span = project_poly(&inner, u);
            for r in &prof.rays {
                if r.offset > span.lo + prof.spacing && r.offset < span.hi - prof.spacing {
                    assert!(r.mass > 0.0, "theta {theta} offset {}", r.offset);
                }
            }
        }
    }

    #[test]
    fn half_plane_masses_settle() {
        let ifs = fixtures::sierpinski();
        let h = Region::half_plane(1.0, 0.2, 0.37).unwrap();
        let p = ifs.fixed_points()[0];
        let vals: Vec<f64> = (4..=11).map(|l| nu_level(&ifs, l, &h, p).unwrap()).collect();
        let diffs: Vec<f64> = vals.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        // upper envelope of the successive differences
        let env: Vec<f64> = (0..diffs.len()).map(|i| diffs[i..].iter().cloned().fold(0.0, f64::max)).collect();
        assert!(env.windows(2).all(|w| w[1] <= w[0]));
        assert!(*env.last().unwrap() < 1e-2);
        let c = cantor_equal();
        let left = Region::half_plane(1.0, 0.0, 0.5).unwrap();
        let a = nu_level(&c, 11, &left, c.fixed_points()[0]).unwrap();
        let b = nu_level(&c, 12, &left, c.fixed_points()[0]).unwrap();
        assert!((a - b).abs() < 1e-3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn mass_is_monotone_in_the_region(
            cx in 0.0f64..1.0, cy in 0.0f64..0.8, r1 in 0.05f64..0.5, grow in 0.0f64..0.5, level in 1usize..6
        ) {
            let ifs = fixtures::sierpinski();
            let disk = |r: f64| {
                let pts: Vec<Point2> = (0..16)
                    .map(|j| Point2::new(cx, cy) + Point2::from_angle(j as f64 * 0.3927) * r)
                    .collect();
                Region::Convex(crate::geom2d::convex_hull(&pts).unwrap())
            };
            let p = ifs.fixed_points()[0];
            let small = nu_level(&ifs, level, &disk(r1), p).unwrap();
            let large = nu_level(&ifs, level, &disk(r1 + grow), p).unwrap();
            prop_assert!(small <= large + 1e-12);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&small));
        }

        #[test]
        fn residual_vanishes_for_random_half_planes(phi in 0.0f64..6.3, c in -0.5f64..1.0, level in 1usize..6) {
            for ifs in fixtures::all() {
                let h = Region::half_plane(phi.cos(), phi.sin(), c).unwrap();
                prop_assert!(invariance_residual(&ifs, level, &h, ifs.fixed_points()[0]).unwrap() < 1e-12);
            }
        }

        #[test]
        fn profiles_partition_mass(theta in 0.0f64..3.2, level in 1usize..6) {
            for ifs in fixtures::all() {
                let prof = shadow_profile(&ifs, theta, level, ifs.fixed_points()[0]).unwrap();
                prop_assert!((prof.total_mass() - 1.0).abs() < 1e-9);
                prop_assert!(prof.rays.iter().all(|r| (0.0..=1.0 + 1e-12).contains(&r.mass)));
            }
        }
    }
}
