//! Iterated function systems of affine contractions.
//!
//! Addresses are stored with 1-based map indices, matching how they are
//! written in documents and on the command line. The address `(a1, ..., aL)`
//! selects `T_a1 ∘ ... ∘ T_aL`, so the last index is applied first.
//! Enumeration over all addresses of a level is always lexicographic with
//! index 1 first.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::geom2d::{Affine2, Mat2, Point2};

/// Default cap on the number of addresses (or tree nodes) a single
/// enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Allowed deviation of the weight sum from one before validation fails.
pub const WEIGHT_TOL: f64 = 1e-9;

const MIN_DET: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IfsError {
    #[error("an IFS needs at least one map")]
    NoMaps,
    #[error("non-finite parameter (map {map})")]
    NonFinite { map: usize },
    #[error("not contractive (map {map}): spectral norm {norm}")]
    NotContractive { map: usize, norm: f64 },
    #[error("non-invertible factor (map {map})")]
    NonInvertible { map: usize },
    #[error("weights not normalized: sum differs from 1 by {residual:e}")]
    WeightsNotNormalized { residual: f64 },
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("weight {value} of map {map} is outside [0, 1]")]
    WeightOutOfRange { map: usize, value: f64 },
    #[error("explicit weights are required when some map is not a similitude")]
    WeightsRequired,
    #[error("similarity dimension requires similitudes (map {map} is a general affine map)")]
    NotSimilitude { map: usize },
    #[error("address index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("malformed address {0:?}")]
    MalformedAddress(String),
    #[error("enumeration needs {required} addresses, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
}

/// Ratio and rotation of a similitude `lambda * R(theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Similitude {
    pub ratio: f64,
    pub angle: f64,
}

/// Affine map `z -> p + M (z - p)` with fixed point `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contraction {
    fixed: Point2,
    linear: Mat2,
    norm: f64,
    similitude: Option<Similitude>,
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t > PI {
        t - TAU
    } else {
        t
    }
}

impl Contraction {
    /// Similitude with ratio `ratio` and rotation `angle` about `fixed`.
    /// A negative ratio is folded into a half-turn.
    pub fn similitude(fixed: Point2, ratio: f64, angle: f64) -> Self {
        let (ratio, angle) = if ratio < 0.0 { (-ratio, angle + PI) } else { (ratio, angle) };
        let angle = wrap_angle(angle);
        Self {
            fixed,
            linear: Mat2::scaled_rotation(ratio, angle),
            norm: ratio,
            similitude: Some(Similitude { ratio, angle }),
        }
    }

    /// General affine map. Matrices of the form `[[a, -b], [b, a]]` are
    /// recognized as similitudes.
    pub fn affine(fixed: Point2, linear: Mat2) -> Self {
        let similitude = (linear.a == linear.d && linear.b == -linear.c && linear.is_finite())
            .then(|| Similitude { ratio: linear.a.hypot(linear.c), angle: linear.c.atan2(linear.a) })
            .filter(|s| s.ratio > 0.0);
        Self { fixed, linear, norm: linear.spectral_norm(), similitude }
    }

    #[inline]
    pub fn fixed(&self) -> Point2 {
        self.fixed
    }

    #[inline]
    pub fn linear(&self) -> Mat2 {
        self.linear
    }

    /// Spectral norm of the linear factor.
    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm
    }

    #[inline]
    pub fn similitude_params(&self) -> Option<Similitude> {
        self.similitude
    }

    #[inline]
    pub fn apply(&self, z: Point2) -> Point2 {
        self.fixed + self.linear.apply(z - self.fixed)
    }

    /// The same map as `z -> M z + t`.
    pub fn as_affine(&self) -> Affine2 {
        Affine2 { m: self.linear, t: self.fixed - self.linear.apply(self.fixed) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapReport {
    pub norm: f64,
    pub det: f64,
    pub contractive: bool,
    pub invertible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub maps: Vec<MapReport>,
    /// `sum(weights) - 1`, when weights were given.
    pub weight_residual: Option<f64>,
    pub errors: Vec<IfsError>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Checks contractivity, invertibility and weight normalization without
/// building an [`Ifs`].
pub fn validate(maps: &[Contraction], weights: Option<&[f64]>) -> ValidationReport {
    let mut errors = Vec::new();
    if maps.is_empty() {
        errors.push(IfsError::NoMaps);
    }
    let mut reports = Vec::with_capacity(maps.len());
    for (i, m) in maps.iter().enumerate() {
        let map = i + 1;
        let det = m.linear.det();
        let finite = m.linear.is_finite() && m.fixed.is_finite();
        let contractive = finite && m.norm < 1.0;
        let invertible = finite && det.abs() > MIN_DET;
        if !finite {
            errors.push(IfsError::NonFinite { map });
        } else {
            if !contractive {
                errors.push(IfsError::NotContractive { map, norm: m.norm });
            }
            if !invertible {
                errors.push(IfsError::NonInvertible { map });
            }
        }
        reports.push(MapReport { norm: m.norm, det, contractive, invertible });
    }
    let mut weight_residual = None;
    if let Some(w) = weights {
        if w.len() != maps.len() {
            errors.push(IfsError::WeightCount { expected: maps.len(), got: w.len() });
        }
        for (i, &value) in w.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                errors.push(IfsError::WeightOutOfRange { map: i + 1, value });
            }
        }
        let residual = w.iter().sum::<f64>() - 1.0;
        if residual.abs() > WEIGHT_TOL || !residual.is_finite() {
            errors.push(IfsError::WeightsNotNormalized { residual });
        }
        weight_residual = Some(residual);
    }
    ValidationReport { maps: reports, weight_residual, errors }
}

/// A validated IFS with normalized weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Ifs {
    maps: Vec<Contraction>,
    affines: Vec<Affine2>,
    weights: Vec<f64>,
    budget: u64,
}

impl Ifs {
    /// Validates the maps and weights. Without weights, an IFS of
    /// similitudes gets the natural weights `lambda_k^s`.
    pub fn new(maps: Vec<Contraction>, weights: Option<Vec<f64>>) -> Result<Ifs, IfsError> {
        let report = validate(&maps, weights.as_deref());
        if let Some(err) = report.errors.into_iter().next() {
            return Err(err);
        }
        let weights = match weights {
            Some(w) => {
                let sum: f64 = w.iter().sum();
                w.into_iter().map(|x| x / sum).collect()
            }
            None => {
                let ratios = similitude_ratios(&maps).map_err(|_| IfsError::WeightsRequired)?;
                solve_dimension(&ratios).1
            }
        };
        let affines = maps.iter().map(Contraction::as_affine).collect();
        Ok(Ifs { maps, affines, weights, budget: DEFAULT_BUDGET })
    }

    /// Overrides the enumeration budget.
    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn maps(&self) -> &[Contraction] {
        &self.maps
    }

    /// Map by 1-based index.
    pub fn map(&self, index: usize) -> Result<&Contraction, IfsError> {
        self.check_index(index)?;
        Ok(&self.maps[index - 1])
    }

    pub(crate) fn affine(&self, index: usize) -> &Affine2 {
        &self.affines[index - 1]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn fixed_points(&self) -> Vec<Point2> {
        self.maps.iter().map(Contraction::fixed).collect()
    }

    pub fn lambda_min(&self) -> f64 {
        self.maps.iter().map(Contraction::norm).fold(f64::INFINITY, f64::min)
    }

    pub fn lambda_max(&self) -> f64 {
        self.maps.iter().map(Contraction::norm).fold(0.0, f64::max)
    }

    /// Diameter of the fixed-point set.
    pub fn fixed_point_diameter(&self) -> f64 {
        let p = self.fixed_points();
        let mut best = 0.0f64;
        for (i, a) in p.iter().enumerate() {
            for b in &p[i + 1..] {
                best = best.max(a.distance(*b));
            }
        }
        best
    }

    pub fn all_similitudes(&self) -> bool {
        self.maps.iter().all(|m| m.similitude.is_some())
    }

    pub fn report(&self) -> ValidationReport {
        validate(&self.maps, Some(&self.weights))
    }

    fn check_index(&self, index: usize) -> Result<(), IfsError> {
        if index == 0 || index > self.maps.len() {
            return Err(IfsError::IndexOutOfRange { index, n: self.maps.len() });
        }
        Ok(())
    }

    /// Number of addresses at `level`, or an error if it exceeds the budget.
    pub fn check_budget(&self, level: usize) -> Result<u64, IfsError> {
        let required = (self.maps.len() as u128).checked_pow(level as u32).unwrap_or(u128::MAX);
        if required > self.budget as u128 {
            return Err(IfsError::BudgetExceeded { required, budget: self.budget });
        }
        Ok(required as u64)
    }
}

fn similitude_ratios(maps: &[Contraction]) -> Result<Vec<f64>, IfsError> {
    maps.iter()
        .enumerate()
        .map(|(i, m)| m.similitude.map(|s| s.ratio).ok_or(IfsError::NotSimilitude { map: i + 1 }))
        .collect()
}

/// Finite sequence of 1-based map indices; the empty address is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Address(Vec<usize>);

impl Address {
    pub fn root() -> Self {
        Self(Vec::new())
    }

    pub fn new(indices: Vec<usize>) -> Self {
        Self(indices)
    }

    /// The `rank`-th address of length `level` in lexicographic order.
    pub fn from_rank(mut rank: u64, n: usize, level: usize) -> Self {
        let mut digits = vec![0usize; level];
        for slot in digits.iter_mut().rev() {
            *slot = (rank % n as u64) as usize + 1;
            rank /= n as u64;
        }
        Self(digits)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, k: usize) -> Self {
        let mut v = self.0.clone();
        v.push(k);
        Self(v)
    }

    pub fn check(&self, ifs: &Ifs) -> Result<(), IfsError> {
        self.0.iter().try_for_each(|&i| ifs.check_index(i))
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("-")?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

impl FromStr for Address {
    type Err = IfsError;

    /// Parses `1-2-3`; `0` or the empty string is the identity address.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(Address::root());
        }
        s.split('-')
            .map(|part| match part.trim().parse::<usize>() {
                Ok(k) if k > 0 => Ok(k),
                _ => Err(IfsError::MalformedAddress(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Address)
    }
}

/// `T_a(z)`, applying the last index first.
pub fn apply_address(ifs: &Ifs, a: &Address, z: Point2) -> Result<Point2, IfsError> {
    a.check(ifs)?;
    Ok(a.indices().iter().rev().fold(z, |acc, &k| ifs.maps[k - 1].apply(acc)))
}

/// Affine form of `T_a` together with its contraction factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComposedMap {
    pub affine: Affine2,
    /// Product of the member spectral norms, an upper bound on `‖M_a‖₂`.
    pub factor: f64,
}

pub fn compose_address(ifs: &Ifs, a: &Address) -> Result<ComposedMap, IfsError> {
    a.check(ifs)?;
    let mut affine = Affine2::IDENTITY;
    let mut factor = 1.0;
    for &k in a.indices() {
        affine = affine.compose(ifs.affine(k));
        factor *= ifs.maps[k - 1].norm;
    }
    Ok(ComposedMap { affine, factor })
}

pub fn address_weight(ifs: &Ifs, a: &Address) -> Result<f64, IfsError> {
    a.check(ifs)?;
    Ok(a.indices().iter().map(|&k| ifs.weights[k - 1]).product())
}

/// Walks every address of length `level` in lexicographic order, handing
/// the callback the index digits, the composed affine map and the weight.
pub(crate) fn for_each_address<F>(ifs: &Ifs, level: usize, mut visit: F) -> Result<(), IfsError>
where
    F: FnMut(&[usize], &Affine2, f64),
{
    ifs.check_budget(level)?;
    let mut digits = Vec::with_capacity(level);
    walk(ifs, level, &Affine2::IDENTITY, 1.0, &mut digits, &mut visit);
    Ok(())
}

fn walk<F>(ifs: &Ifs, remaining: usize, acc: &Affine2, weight: f64, digits: &mut Vec<usize>, visit: &mut F)
where
    F: FnMut(&[usize], &Affine2, f64),
{
    if remaining == 0 {
        visit(digits, acc, weight);
        return;
    }
    for k in 1..=ifs.len() {
        let next = acc.compose(ifs.affine(k));
        digits.push(k);
        walk(ifs, remaining - 1, &next, weight * ifs.weights[k - 1], digits, visit);
        digits.pop();
    }
}

/// All `n^level` address points `T_a(seed)` in lexicographic address order.
pub fn points_at_level(ifs: &Ifs, seed: Point2, level: usize) -> Result<Vec<(Address, Point2)>, IfsError> {
    let mut out = Vec::new();
    for_each_address(ifs, level, |digits, map, _| out.push((Address(digits.to_vec()), map.apply(seed))))?;
    Ok(out)
}

/// Same points as [`points_at_level`] without the addresses.
pub fn cloud_at_level(ifs: &Ifs, seed: Point2, level: usize) -> Result<Vec<Point2>, IfsError> {
    let mut out = Vec::new();
    for_each_address(ifs, level, |_, map, _| out.push(map.apply(seed)))?;
    Ok(out)
}

/// Lexicographically least among the shortest addresses `a` with
/// `|T_a(seed) - target| <= tol`, searching lengths up to `max_len`.
pub fn shortest_address(ifs: &Ifs, seed: Point2, target: Point2, max_len: usize, tol: f64) -> Result<Option<Address>, IfsError> {
    for level in 0..=max_len {
        let mut found = None;
        for_each_address(ifs, level, |digits, map, _| {
            if found.is_none() && map.apply(seed).distance(target) <= tol {
                found = Some(Address(digits.to_vec()));
            }
        })?;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dimension {
    pub value: f64,
    /// `lambda_k^s`, normalized.
    pub natural_weights: Vec<f64>,
}

/// Bisection for `sum(r^s) = 1`. The left side is strictly decreasing in `s`.
fn solve_dimension(ratios: &[f64]) -> (f64, Vec<f64>) {
    let f = |s: f64| ratios.iter().map(|r| r.powf(s)).sum::<f64>() - 1.0;
    if ratios.len() == 1 {
        return (0.0, vec![1.0]);
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while f(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = if f(lo).abs() <= f(hi).abs() { lo } else { hi };
    if ratios.iter().all(|&r| r == ratios[0]) {
        return (s, vec![1.0 / ratios.len() as f64; ratios.len()]);
    }
    let raw: Vec<f64> = ratios.iter().map(|r| r.powf(s)).collect();
    let total: f64 = raw.iter().sum();
    (s, raw.into_iter().map(|w| w / total).collect())
}

/// Similarity dimension and the matching natural weights.
pub fn similarity_dimension(ifs: &Ifs) -> Result<Dimension, IfsError> {
    let ratios = similitude_ratios(&ifs.maps)?;
    let (value, natural_weights) = solve_dimension(&ratios);
    Ok(Dimension { value, natural_weights })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    pub center: Point2,
    pub radius: f64,
}

/// A ball mapped into itself by every map, hence containing the attractor.
/// Centered at the fixed-point centroid with radius
/// `max_k |T_k(c) - c| / (1 - ‖M_k‖)`.
pub fn invariant_ball(ifs: &Ifs) -> Ball {
    let fixed = ifs.fixed_points();
    let center = fixed.iter().fold(Point2::ORIGIN, |acc, &p| acc + p) / fixed.len() as f64;
    let radius = ifs
        .maps
        .iter()
        .map(|m| m.apply(center).distance(center) / (1.0 - m.norm))
        .fold(0.0, f64::max);
    Ball { center, radius }
}
