//! Window specification files.
//!
//! ```json
//! { "pieces": [
//!     { "interval": [0, 1], "kind": "poly", "coeffs": [1, 1] },
//!     { "interval": ["1", "2"], "kind": "sqrtpoly", "coeffs": [0, 2, -1] }
//! ] }
//! ```
//!
//! Intervals are half-open. Numbers are JSON numbers or strings holding a
//! decimal, a fraction `p/q`, or `inf`/`-inf` (which is rejected later as
//! unbounded support, but parses).

use serde::Deserialize;
use thiserror::Error;
use whframe::window::WindowError;
use whframe::{Piece, PiecewiseWindow};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("window spec is not valid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("piece {piece}: malformed number `{text}` in {field}")]
    MalformedNumber { piece: usize, field: &'static str, text: String },
    #[error("piece {piece}: unknown kind `{kind}` (expected `poly` or `sqrtpoly`)")]
    UnknownKind { piece: usize, kind: String },
    #[error(transparent)]
    Window(#[from] WindowError),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    pieces: Vec<SpecPiece>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecPiece {
    interval: [Number; 2],
    kind: String,
    coeffs: Vec<Number>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Number {
    Float(f64),
    Text(String),
}

impl Number {
    fn value(&self, piece: usize, field: &'static str) -> Result<f64, SpecError> {
        match self {
            Number::Float(v) => Ok(*v),
            Number::Text(t) => {
                parse_number(t).ok_or_else(|| SpecError::MalformedNumber { piece, field, text: t.clone() })
            }
        }
    }
}

/// Decimal, `p/q`, or a signed infinity.
pub fn parse_number(text: &str) -> Option<f64> {
    let t = text.trim();
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t.strip_prefix('+').unwrap_or(t)),
    };
    if body.eq_ignore_ascii_case("inf") || body.eq_ignore_ascii_case("infinity") {
        return Some(sign * f64::INFINITY);
    }
    if body.is_empty() || body.starts_with(['+', '-']) || body.eq_ignore_ascii_case("nan") {
        return None;
    }
    let v = match body.split_once('/') {
        Some((p, q)) => {
            let (p, q): (f64, f64) = (p.trim().parse().ok()?, q.trim().parse().ok()?);
            if q == 0.0 {
                return None;
            }
            p / q
        }
        None => body.parse().ok()?,
    };
    v.is_finite().then_some(sign * v)
}

pub fn parse_window_spec(text: &str) -> Result<PiecewiseWindow, SpecError> {
    let file: SpecFile = serde_json::from_str(text)?;
    let mut pieces = Vec::with_capacity(file.pieces.len());
    for (i, p) in file.pieces.iter().enumerate() {
        let lo = p.interval[0].value(i, "interval")?;
        let hi = p.interval[1].value(i, "interval")?;
        let coeffs = p.coeffs.iter().map(|c| c.value(i, "coeffs")).collect::<Result<Vec<_>, _>>()?;
        let piece = match p.kind.as_str() {
            "poly" => Piece::poly(lo, hi, coeffs),
            "sqrtpoly" => Piece::sqrt_poly(lo, hi, coeffs),
            other => return Err(SpecError::UnknownKind { piece: i, kind: other.to_string() }),
        };
        pieces.push(piece);
    }
    Ok(PiecewiseWindow::new(pieces)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(parse_number("1/4"), Some(0.25));
        assert_eq!(parse_number("-3/2"), Some(-1.5));
        assert_eq!(parse_number(" 2.5e1 "), Some(25.0));
        assert_eq!(parse_number("-inf"), Some(f64::NEG_INFINITY));
        assert_eq!(parse_number("1/0"), None);
        assert_eq!(parse_number("--1"), None);
        assert_eq!(parse_number("nan"), None);
        assert_eq!(parse_number("one"), None);
    }

    #[test]
    fn two_piece_window() {
        let w = parse_window_spec(
            r#"{"pieces": [
                {"interval": [0, 1], "kind": "poly", "coeffs": [1, 1]},
                {"interval": [1, 2], "kind": "poly", "coeffs": [0, "1/2"]}
            ]}"#,
        )
        .unwrap();
        assert_eq!(w, whframe::catalog::example_thm21());
    }

    #[test]
    fn overlap_names_both_pieces() {
        let err = parse_window_spec(
            r#"{"pieces": [
                {"interval": [0, 1], "kind": "poly", "coeffs": [1]},
                {"interval": [0.5, 2], "kind": "poly", "coeffs": [1]}
            ]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, SpecError::Window(WindowError::Overlap { first: 0, second: 1 })), "{err}");
    }

    #[test]
    fn negative_radicand() {
        // 4(x - 1/2)^2 - 1 vanishes at both ends and is -1 at the midpoint
        let err = parse_window_spec(r#"{"pieces": [{"interval": [0, 1], "kind": "sqrtpoly", "coeffs": [0, -4, 4]}]}"#)
            .unwrap_err();
        assert!(matches!(err, SpecError::Window(WindowError::NegativeRadicand { piece: 0, .. })), "{err}");
    }

    #[test]
    fn unbounded_and_malformed() {
        let err = parse_window_spec(r#"{"pieces": [{"interval": [0, "inf"], "kind": "poly", "coeffs": [1]}]}"#)
            .unwrap_err();
        assert!(matches!(err, SpecError::Window(WindowError::UnboundedSupport { piece: 0 })), "{err}");
        let err = parse_window_spec(r#"{"pieces": [{"interval": [0, 1], "kind": "poly", "coeffs": ["x"]}]}"#)
            .unwrap_err();
        assert!(matches!(err, SpecError::MalformedNumber { piece: 0, field: "coeffs", .. }), "{err}");
        let err = parse_window_spec(r#"{"pieces": [{"interval": [0, 1], "kind": "exp", "coeffs": [1]}]}"#)
            .unwrap_err();
        assert!(matches!(err, SpecError::UnknownKind { piece: 0, .. }), "{err}");
    }
}
