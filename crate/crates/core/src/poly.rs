//! Dense real polynomials in ascending-degree coefficient form.
//!
//! These helpers back the window pieces. Everything is exact up to floating
//! point rounding; no symbolic simplification is attempted.

/// Evaluates `c[0] + c[1] x + c[2] x^2 + ...` by Horner's rule.
pub fn eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Coefficients of `p(x + h)`.
pub fn shift(coeffs: &[f64], h: f64) -> Vec<f64> {
    let mut out = coeffs.to_vec();
    let d = out.len();
    if d < 2 || h == 0.0 {
        return out;
    }
    for i in 0..d - 1 {
        for j in (i..d - 1).rev() {
            out[j] += h * out[j + 1];
        }
    }
    out
}

/// Coefficients of `p(s x)`.
pub fn scale(coeffs: &[f64], s: f64) -> Vec<f64> {
    let mut factor = 1.0;
    coeffs
        .iter()
        .map(|&c| {
            let v = c * factor;
            factor *= s;
            v
        })
        .collect()
}

pub fn mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, &a) in p.iter().enumerate() {
        for (j, &b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

pub fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, &c)| c * j as f64)
        .collect()
}

/// Exact integral over `[lo, hi]`.
///
/// The polynomial is re-expanded around `lo` first so that intervals far
/// from the origin do not lose digits to cancellation.
pub fn integrate(coeffs: &[f64], lo: f64, hi: f64) -> f64 {
    let local = shift(coeffs, lo);
    let len = hi - lo;
    let mut power = len;
    let mut total = 0.0;
    for (j, &c) in local.iter().enumerate() {
        total += c * power / (j + 1) as f64;
        power *= len;
    }
    total
}

/// Sum of absolute term magnitudes at `x`; the natural rounding scale for
/// a Horner evaluation at that point.
pub fn magnitude(coeffs: &[f64], x: f64) -> f64 {
    let ax = x.abs();
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * ax + c.abs())
}

pub fn is_zero(coeffs: &[f64]) -> bool {
    coeffs.iter().all(|&c| c == 0.0)
}
