//! Piecewise-algebraic windows.
//!
//! A window is a finite list of pieces, each living on a half-open interval
//! `[lo, hi)`. A piece is either a polynomial or the square root of a
//! polynomial of degree at most two. Outside every piece the window is zero,
//! so every window has compact support.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly;

/// Relative distance under which a point is treated as sitting on a piece
/// boundary when one-sided limits are requested.
const SNAP_REL: f64 = 1e-11;

/// Relative slack allowed on a square-root radicand before it counts as
/// negative.
const RADICAND_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WindowError {
    #[error("piece {piece}: interval [{lo}, {hi}) is empty or reversed")]
    EmptyInterval { piece: usize, lo: f64, hi: f64 },
    #[error("piece {piece}: interval endpoints must be finite (unbounded support)")]
    UnboundedSupport { piece: usize },
    #[error("piece {piece}: non-finite value in {field}")]
    NonFinite { piece: usize, field: &'static str },
    #[error("piece {piece}: coefficient list is empty")]
    NoCoefficients { piece: usize },
    #[error("piece {piece}: square-root radicand has degree {degree}, at most 2 is supported")]
    SqrtDegree { piece: usize, degree: usize },
    #[error("piece {piece}: square-root radicand is negative ({value:e}) at x = {at}")]
    NegativeRadicand { piece: usize, at: f64, value: f64 },
    #[error("pieces {first} and {second} overlap")]
    Overlap { first: usize, second: usize },
    #[error("lattice parameters must be finite and positive (a = {a}, b = {b})")]
    InvalidLattice { a: f64, b: f64 },
}

/// Which one-sided limit to take at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "coeffs", rename_all = "lowercase")]
pub enum PieceKind {
    /// `c0 + c1 x + c2 x^2 + ...`
    #[serde(rename = "poly")]
    Polynomial(Vec<f64>),
    /// `sqrt(c0 + c1 x + c2 x^2)`
    #[serde(rename = "sqrtpoly")]
    SqrtPolynomial(Vec<f64>),
}

impl PieceKind {
    fn coeffs(&self) -> &[f64] {
        match self {
            PieceKind::Polynomial(c) | PieceKind::SqrtPolynomial(c) => c,
        }
    }

    fn map_coeffs(&self, f: impl FnOnce(&[f64]) -> Vec<f64>) -> PieceKind {
        match self {
            PieceKind::Polynomial(c) => PieceKind::Polynomial(f(c)),
            PieceKind::SqrtPolynomial(c) => PieceKind::SqrtPolynomial(f(c)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    #[serde(flatten)]
    pub kind: PieceKind,
}

impl Piece {
    pub fn poly(lo: f64, hi: f64, coeffs: impl Into<Vec<f64>>) -> Piece {
        Piece { lo, hi, kind: PieceKind::Polynomial(coeffs.into()) }
    }

    pub fn sqrt_poly(lo: f64, hi: f64, coeffs: impl Into<Vec<f64>>) -> Piece {
        Piece { lo, hi, kind: PieceKind::SqrtPolynomial(coeffs.into()) }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x < self.hi
    }

    /// The piece formula at `x`, ignoring the interval.
    pub fn formula(&self, x: f64) -> f64 {
        match &self.kind {
            PieceKind::Polynomial(c) => poly::eval(c, x),
            PieceKind::SqrtPolynomial(c) => {
                // radicands within rounding of zero are zero; otherwise a
                // root picks up sqrt(eps)-sized noise
                let q = poly::eval(c, x);
                let noise = 4.0 * f64::EPSILON * c.len() as f64 * poly::magnitude(c, x);
                if q <= noise { 0.0 } else { q.sqrt() }
            }
        }
    }

    /// The piece squared, which is always a polynomial.
    pub fn square(&self) -> Vec<f64> {
        match &self.kind {
            PieceKind::Polynomial(c) => poly::mul(c, c),
            PieceKind::SqrtPolynomial(c) => c.clone(),
        }
    }

    fn is_zero(&self) -> bool {
        poly::is_zero(self.kind.coeffs())
    }

    /// Interval endpoints where a square-root piece has a vanishing radicand,
    /// i.e. where the piece has an infinite derivative.
    fn radicand_roots(&self) -> Vec<f64> {
        let PieceKind::SqrtPolynomial(c) = &self.kind else {
            return Vec::new();
        };
        [self.lo, self.hi]
            .into_iter()
            .filter(|&x| {
                let scale = poly::magnitude(c, x).max(f64::MIN_POSITIVE);
                poly::eval(c, x).abs() <= 1e-10 * scale
            })
            .collect()
    }

    fn validate(&self, index: usize) -> Result<(), WindowError> {
        if self.lo.is_nan() || self.hi.is_nan() {
            return Err(WindowError::NonFinite { piece: index, field: "interval" });
        }
        if self.lo.is_infinite() || self.hi.is_infinite() {
            return Err(WindowError::UnboundedSupport { piece: index });
        }
        if !(self.lo < self.hi) {
            return Err(WindowError::EmptyInterval { piece: index, lo: self.lo, hi: self.hi });
        }
        let coeffs = self.kind.coeffs();
        if coeffs.is_empty() {
            return Err(WindowError::NoCoefficients { piece: index });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(WindowError::NonFinite { piece: index, field: "coeffs" });
        }
        if let PieceKind::SqrtPolynomial(c) = &self.kind {
            if c.len() > 3 {
                return Err(WindowError::SqrtDegree { piece: index, degree: c.len() - 1 });
            }
            let mut probes = vec![self.lo, 0.5 * (self.lo + self.hi), self.hi];
            if c.len() == 3 && c[2] != 0.0 {
                let vertex = -c[1] / (2.0 * c[2]);
                if self.lo < vertex && vertex < self.hi {
                    probes.push(vertex);
                }
            }
            for x in probes {
                let value = poly::eval(c, x);
                if value < -RADICAND_SLACK * poly::magnitude(c, x).max(1.0) {
                    return Err(WindowError::NegativeRadicand { piece: index, at: x, value });
                }
            }
        }
        Ok(())
    }
}

/// One-sided expansion returned by [`PiecewiseWindow::local_expansion`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LocalExpansion {
    pub value: f64,
    pub slope: f64,
    pub sqrt_coeff: f64,
}

/// A compactly supported window made of disjoint half-open pieces.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawWindow", into = "RawWindow")]
pub struct PiecewiseWindow {
    pieces: Vec<Piece>,
}

#[derive(Serialize, Deserialize)]
struct RawWindow {
    pieces: Vec<Piece>,
}

impl TryFrom<RawWindow> for PiecewiseWindow {
    type Error = WindowError;
    fn try_from(raw: RawWindow) -> Result<Self, Self::Error> {
        PiecewiseWindow::new(raw.pieces)
    }
}

impl From<PiecewiseWindow> for RawWindow {
    fn from(w: PiecewiseWindow) -> Self {
        RawWindow { pieces: w.pieces }
    }
}

impl PiecewiseWindow {
    /// Validates and sorts the pieces.
    pub fn new(pieces: Vec<Piece>) -> Result<Self, WindowError> {
        for (i, p) in pieces.iter().enumerate() {
            p.validate(i)?;
        }
        let mut order: Vec<usize> = (0..pieces.len()).collect();
        order.sort_by(|&i, &j| pieces[i].lo.total_cmp(&pieces[j].lo));
        for pair in order.windows(2) {
            let (i, j) = (pair[0], pair[1]);
            if pieces[j].lo < pieces[i].hi {
                let (first, second) = (i.min(j), i.max(j));
                return Err(WindowError::Overlap { first, second });
            }
        }
        let mut pieces = pieces;
        pieces.sort_by(|p, q| p.lo.total_cmp(&q.lo));
        Ok(PiecewiseWindow { pieces })
    }

    pub fn empty() -> Self {
        PiecewiseWindow::default()
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.iter().all(Piece::is_zero)
    }

    fn piece_index(&self, x: f64) -> Option<usize> {
        // pieces are sorted by lo and disjoint
        let idx = self.pieces.partition_point(|p| p.lo <= x);
        if idx == 0 {
            return None;
        }
        self.pieces[idx - 1].contains(x).then_some(idx - 1)
    }

    /// Value at `x` under the half-open convention.
    pub fn eval(&self, x: f64) -> f64 {
        self.piece_index(x).map_or(0.0, |i| self.pieces[i].formula(x))
    }

    /// One-sided limit at `x`.
    ///
    /// Points within a relative `1e-11` of a piece boundary are treated as
    /// lying on it, so limits stay correct when `x` is the rounded image of
    /// a boundary under a shift.
    pub fn eval_limit(&self, x: f64, side: Side) -> f64 {
        let tau = SNAP_REL * (1.0 + x.abs());
        let probe = match side {
            Side::Right => x + tau,
            Side::Left => x - tau,
        };
        match self.piece_index(probe) {
            Some(i) => {
                let p = &self.pieces[i];
                p.formula(x.clamp(p.lo, p.hi))
            }
            None => 0.0,
        }
    }

    /// Leading terms of the window on one side of `x`, in the distance
    /// `t = |y - x|` for `y` on that side:
    /// `w(y) ≈ value + slope · t + sqrt_coeff · √t`.
    ///
    /// `sqrt_coeff` is non-zero only where a square-root radicand has a simple
    /// root at `x`.
    pub fn local_expansion(&self, x: f64, side: Side) -> LocalExpansion {
        let tau = SNAP_REL * (1.0 + x.abs());
        let probe = match side {
            Side::Right => x + tau,
            Side::Left => x - tau,
        };
        let sign = match side {
            Side::Right => 1.0,
            Side::Left => -1.0,
        };
        let Some(i) = self.piece_index(probe) else {
            return LocalExpansion::default();
        };
        let p = &self.pieces[i];
        let x = x.clamp(p.lo, p.hi);
        match &p.kind {
            PieceKind::Polynomial(c) => LocalExpansion {
                value: poly::eval(c, x),
                slope: sign * poly::eval(&poly::derivative(c), x),
                sqrt_coeff: 0.0,
            },
            PieceKind::SqrtPolynomial(c) => {
                let q = poly::eval(c, x);
                let dq = poly::eval(&poly::derivative(c), x);
                let scale = poly::magnitude(c, x).max(f64::MIN_POSITIVE);
                if q > 1e-10 * scale {
                    let v = q.sqrt();
                    LocalExpansion { value: v, slope: sign * dq / (2.0 * v), sqrt_coeff: 0.0 }
                } else if dq.abs() > 1e-10 * scale {
                    LocalExpansion { value: 0.0, slope: 0.0, sqrt_coeff: dq.abs().sqrt() }
                } else {
                    // double root: the piece behaves like |y - x| · sqrt(c2)
                    let c2 = c.get(2).copied().unwrap_or(0.0).max(0.0);
                    LocalExpansion { value: 0.0, slope: c2.sqrt(), sqrt_coeff: 0.0 }
                }
            }
        }
    }

    /// `x -> w(x - t)`, with coefficients re-expanded around the new origin.
    pub fn translate(&self, t: f64) -> PiecewiseWindow {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                lo: p.lo + t,
                hi: p.hi + t,
                kind: p.kind.map_coeffs(|c| poly::shift(c, -t)),
            })
            .collect();
        PiecewiseWindow { pieces }
    }

    /// `x -> w(s x)` for `s > 0`.
    pub fn scale_argument(&self, s: f64) -> PiecewiseWindow {
        assert!(s > 0.0 && s.is_finite(), "scale factor must be positive");
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                lo: p.lo / s,
                hi: p.hi / s,
                kind: p.kind.map_coeffs(|c| poly::scale(c, s)),
            })
            .collect();
        PiecewiseWindow { pieces }
    }

    /// Minimal sorted list of disjoint half-open intervals carrying the window.
    pub fn support(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for p in self.pieces.iter().filter(|p| !p.is_zero()) {
            match out.last_mut() {
                Some(last) if p.lo <= last.1 => last.1 = last.1.max(p.hi),
                _ => out.push((p.lo, p.hi)),
            }
        }
        out
    }

    /// Smallest interval containing the support.
    pub fn support_hull(&self) -> Option<(f64, f64)> {
        let s = self.support();
        Some((s.first()?.0, s.last()?.1))
    }

    pub fn support_length(&self) -> f64 {
        self.support_hull().map_or(0.0, |(lo, hi)| hi - lo)
    }

    /// All piece endpoints, sorted and deduplicated.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self.pieces.iter().flat_map(|p| [p.lo, p.hi]).collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// Endpoints where a square-root piece has an infinite slope.
    pub fn sqrt_singularities(&self) -> Vec<f64> {
        self.pieces.iter().flat_map(Piece::radicand_roots).collect()
    }

    /// `∫ |w(x)|^2 dx`, integrated exactly piece by piece.
    pub fn l2_norm_sq(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| poly::integrate(&p.square(), p.lo, p.hi))
            .sum()
    }
}

/// Translation and modulation steps of a Gabor lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLattice")]
pub struct Lattice {
    a: f64,
    b: f64,
}

#[derive(Deserialize)]
struct RawLattice {
    a: f64,
    b: f64,
}

impl TryFrom<RawLattice> for Lattice {
    type Error = WindowError;
    fn try_from(raw: RawLattice) -> Result<Self, Self::Error> {
        Lattice::new(raw.a, raw.b)
    }
}

impl Lattice {
    pub fn new(a: f64, b: f64) -> Result<Lattice, WindowError> {
        if a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0 {
            Ok(Lattice { a, b })
        } else {
            Err(WindowError::InvalidLattice { a, b })
        }
    }

    /// Translation step.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Modulation step.
    pub fn b(&self) -> f64 {
        self.b
    }
}
