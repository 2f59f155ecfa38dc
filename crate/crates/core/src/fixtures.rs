//! Reference systems used across tests, examples and the bindings.

use std::f64::consts::FRAC_PI_2;

use crate::geom2d::{Mat2, Point2};
use crate::ifs::{Contraction, Ifs};

fn build(maps: Vec<Contraction>, weights: Option<Vec<f64>>) -> Ifs {
    Ifs::new(maps, weights).expect("fixture is valid")
}

/// Sierpiński triangle on `(0,0), (1,0), (1/2, √3/2)`, ratio 1/2, equal weights.
pub fn sierpinski() -> Ifs {
    let h = 3f64.sqrt() / 2.0;
    build(
        [Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.5, h)]
            .into_iter()
            .map(|p| Contraction::similitude(p, 0.5, 0.0))
            .collect(),
        None,
    )
}

/// Middle-thirds Cantor set on `[0, 1] × {0}`, equal weights.
pub fn cantor_pair() -> Ifs {
    cantor_with_ratio(1.0 / 3.0)
}

/// Two-map Cantor set with ratio `ratio` at `(0,0)` and `(1,0)`.
pub fn cantor_with_ratio(ratio: f64) -> Ifs {
    build(
        vec![
            Contraction::similitude(Point2::new(0.0, 0.0), ratio, 0.0),
            Contraction::similitude(Point2::new(1.0, 0.0), ratio, 0.0),
        ],
        None,
    )
}

/// Two similitudes with unequal ratios; the first rotates by one radian,
/// an irrational fraction of a turn. Natural weights.
pub fn spiral_pair() -> Ifs {
    build(
        vec![
            Contraction::similitude(Point2::new(0.0, 0.0), 0.6, 1.0),
            Contraction::similitude(Point2::new(1.0, 0.0), 0.45, 0.0),
        ],
        None,
    )
}

/// Like [`spiral_pair`] but the first map turns by a quarter turn.
pub fn quarter_turn_pair() -> Ifs {
    build(
        vec![
            Contraction::similitude(Point2::new(0.0, 0.0), 0.5, FRAC_PI_2),
            Contraction::similitude(Point2::new(1.0, 0.0), 0.5, 0.0),
        ],
        None,
    )
}

/// Two general affine maps (not similitudes) with explicit weights.
pub fn shear_pair() -> Ifs {
    build(
        vec![
            Contraction::affine(Point2::new(0.0, 0.0), Mat2::new(0.5, 0.2, 0.0, 0.4)),
            Contraction::affine(Point2::new(1.0, 0.5), Mat2::new(0.45, 0.0, -0.15, 0.5)),
        ],
        Some(vec![0.4, 0.6]),
    )
}

/// Sierpiński, Cantor pair and spiral pair.
pub fn all() -> Vec<Ifs> {
    vec![sierpinski(), cantor_pair(), spiral_pair()]
}
