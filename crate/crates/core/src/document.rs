//! TOML description of an IFS.
//!
//! ```toml
//! name = "sierpinski"
//! weights = [0.25, 0.25, 0.5]   # optional
//!
//! [[map]]
//! fixed = [0.0, 0.0]
//! lambda = 0.5
//! theta = 0.0                   # optional, radians
//!
//! [[map]]
//! fixed = [1.0, 0.0]
//! matrix = [[0.5, 0.1], [0.0, 0.4]]
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;
use toml::Spanned;

use crate::geom2d::{Mat2, Point2};
use crate::ifs::{validate, Contraction, Ifs, IfsError, ValidationReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DocumentError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] IfsError),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    name: Option<String>,
    weights: Option<Vec<f64>>,
    #[serde(default)]
    map: Vec<Spanned<RawMap>>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawMap {
    fixed: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<[[f64; 2]; 2]>,
}

#[derive(Debug, Serialize)]
struct OutDocument<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<&'a str>,
    weights: &'a [f64],
    map: Vec<RawMap>,
}

/// A parsed, not yet validated, IFS description.
#[derive(Debug, Clone, PartialEq)]
pub struct IfsDocument {
    pub name: Option<String>,
    pub maps: Vec<Contraction>,
    pub weights: Option<Vec<f64>>,
}

/// 1-based line and column of a byte offset.
fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn syntax(text: &str, offset: usize, message: impl Into<String>) -> DocumentError {
    let (line, column) = line_column(text, offset);
    DocumentError::Syntax { line, column, message: message.into() }
}

impl IfsDocument {
    pub fn parse(text: &str) -> Result<IfsDocument, DocumentError> {
        let raw: RawDocument = toml::from_str(text).map_err(|e| {
            let offset = e.span().map_or(0, |s| s.start);
            syntax(text, offset, e.message().trim().to_string())
        })?;
        let mut maps = Vec::with_capacity(raw.map.len());
        for record in &raw.map {
            let at = record.span().start;
            let r = record.get_ref();
            let fixed = Point2::new(r.fixed[0], r.fixed[1]);
            let map = match (r.lambda, r.theta, r.matrix) {
                (Some(lambda), theta, None) => Contraction::similitude(fixed, lambda, theta.unwrap_or(0.0)),
                (None, None, Some([[a, b], [c, d]])) => Contraction::affine(fixed, Mat2::new(a, b, c, d)),
                (None, Some(_), None) => return Err(syntax(text, at, "map with theta needs lambda")),
                (None, None, None) => return Err(syntax(text, at, "map needs either lambda or matrix")),
                _ => return Err(syntax(text, at, "map cannot have both lambda/theta and matrix")),
            };
            maps.push(map);
        }
        Ok(IfsDocument { name: raw.name, maps, weights: raw.weights })
    }

    pub fn validate(&self) -> ValidationReport {
        validate(&self.maps, self.weights.as_deref())
    }

    pub fn build(&self) -> Result<Ifs, IfsError> {
        Ifs::new(self.maps.clone(), self.weights.clone())
    }

    pub fn from_ifs(ifs: &Ifs, name: Option<String>) -> IfsDocument {
        IfsDocument { name, maps: ifs.maps().to_vec(), weights: Some(ifs.weights().to_vec()) }
    }
}

/// Serializes `ifs` with explicit weights. Similitudes are written as
/// `lambda`/`theta` with `theta` in `(-pi, pi]`, other maps as `matrix`.
pub fn dump_normalized(ifs: &Ifs, name: Option<&str>) -> String {
    let map = ifs
        .maps()
        .iter()
        .map(|m| {
            let p = m.fixed();
            match m.similitude_params() {
                Some(s) => RawMap { fixed: [p.x, p.y], lambda: Some(s.ratio), theta: Some(s.angle), matrix: None },
                None => {
                    let l = m.linear();
                    RawMap { fixed: [p.x, p.y], lambda: None, theta: None, matrix: Some([[l.a, l.b], [l.c, l.d]]) }
                }
            }
        })
        .collect();
    let doc = OutDocument { name, weights: ifs.weights(), map };
    toml::to_string(&doc).expect("plain numeric document")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const SIERPINSKI: &str = r#"
name = "sierpinski"

[[map]]
fixed = [0.0, 0.0]
lambda = 0.5

[[map]]
fixed = [1.0, 0.0]
lambda = 0.5

[[map]]
fixed = [0.5, 0.8660254037844386]
lambda = 0.5
theta = 0.0
"#;

    #[test]
    fn parses_similitudes_with_natural_weights() {
        let doc = IfsDocument::parse(SIERPINSKI).unwrap();
        assert_eq!(doc.name.as_deref(), Some("sierpinski"));
        let ifs = doc.build().unwrap();
        assert_eq!(ifs.len(), 3);
        assert!(ifs.weights().iter().all(|w| (w - 1.0 / 3.0).abs() < 1e-12));
    }

    #[test]
    fn parses_matrices_and_weights() {
        let text = "weights = [0.4, 0.6]\n[[map]]\nfixed = [0, 0]\nmatrix = [[0.5, 0.2], [0.0, 0.4]]\n[[map]]\nfixed = [1, 0.5]\nmatrix = [[0.45, 0], [-0.15, 0.5]]\n";
        let ifs = IfsDocument::parse(text).unwrap().build().unwrap();
        assert_eq!(ifs.weights(), &[0.4, 0.6]);
        assert_eq!(ifs.maps()[0].linear(), Mat2::new(0.5, 0.2, 0.0, 0.4));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = IfsDocument::parse("[[map]]\nfixed = [0.0, 0.0]\nlambda = 0.5.3\n").unwrap_err();
        let DocumentError::Syntax { line, .. } = err else { panic!("{err:?}") };
        assert_eq!(line, 3);
        let err = IfsDocument::parse("[[map]]\nfixed = [0.0, 0.0]\nlambda = \"half\"\n").unwrap_err();
        assert!(matches!(err, DocumentError::Syntax { line: 3, .. }), "{err:?}");
        let err = IfsDocument::parse("[[map]]\nfixed = [0.0, 0.0]\nscale = 0.5\n").unwrap_err();
        assert!(matches!(err, DocumentError::Syntax { .. }));
        let err = IfsDocument::parse("[[map]]\nfixed = [0.0, 0.0]\n\n[[map]]\nfixed = [1.0, 0.0]\n").unwrap_err();
        assert!(matches!(err, DocumentError::Syntax { line: 1, .. }), "{err:?}");
        let err = IfsDocument::parse("[[map]]\nfixed = [0, 0]\nlambda = 0.5\nmatrix = [[0.5, 0], [0, 0.5]]\n").unwrap_err();
        assert!(matches!(err, DocumentError::Syntax { .. }));
    }

    #[test]
    fn invalid_maps_are_reported() {
        let doc = IfsDocument::parse("[[map]]\nfixed = [0.0, 0.0]\nlambda = 1.1\n").unwrap();
        let report = doc.validate();
        assert!(!report.passed());
        assert!(report.errors[0].to_string().starts_with("not contractive (map 1)"));
        assert!(doc.build().is_err());
    }

    #[test]
    fn dump_round_trips() {
        for (ifs, name) in [
            (fixtures::sierpinski(), "s"),
            (fixtures::spiral_pair(), "spiral"),
            (fixtures::shear_pair(), "shear"),
            (fixtures::quarter_turn_pair(), "q"),
        ] {
            let text = dump_normalized(&ifs, Some(name));
            let back = IfsDocument::parse(&text).unwrap().build().unwrap();
            for (a, b) in ifs.maps().iter().zip(back.maps()) {
                assert_eq!(a.fixed(), b.fixed());
                let (la, lb) = (a.linear(), b.linear());
                for (x, y) in [(la.a, lb.a), (la.b, lb.b), (la.c, lb.c), (la.d, lb.d)] {
                    assert!((x - y).abs() <= 1e-15);
                }
            }
            assert_eq!(ifs.weights(), back.weights());
            assert_eq!(dump_normalized(&back, Some(name)), text);
        }
    }

    #[test]
    fn theta_is_wrapped_on_dump() {
        let text = "[[map]]\nfixed = [0, 0]\nlambda = 0.5\ntheta = 7.0\n[[map]]\nfixed = [1, 0]\nlambda = 0.5\n";
        let ifs = IfsDocument::parse(text).unwrap().build().unwrap();
        let dumped = dump_normalized(&ifs, None);
        let theta = ifs.maps()[0].similitude_params().unwrap().angle;
        assert!((theta - (7.0 - std::f64::consts::TAU)).abs() < 1e-15);
        assert!(dumped.contains(&format!("theta = {theta:?}")));
    }
}
