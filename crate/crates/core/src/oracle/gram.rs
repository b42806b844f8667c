//! Truncated Gram matrices and their spectra.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::system::{pair_spectrum, GaborSystem};
use super::OracleError;

/// Largest `|G_ij - conj(G_ji)|`, relative to `max(1, max |G_ij|)`, accepted
/// as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// `G_ij = <φ_j, φ_i>` over the atoms of `sys` in [`GaborSystem::labels`]
/// order, so that `c^H G c = ||Σ c_i φ_i||^2`.
///
/// Each entry is `e^{-2πi(m - m')b n'a} q_{n-n'}(m - m')` with
/// `q_δ(ℓ) = ∫ g(y) g(y - δa) e^{-2πiℓby} dy`; the integrals for `δ` and `-δ`
/// are computed separately, so Hermitian symmetry is a genuine check.
pub fn gram_matrix(sys: &GaborSystem) -> Result<DMatrix<Complex64>, OracleError> {
    let labels = sys.labels();
    let span = sys.n_range.1 - sys.n_range.0;
    let mm = sys.m_max as i64;
    let mut spectra: HashMap<i64, Vec<Complex64>> = HashMap::new();
    for delta in -span..=span {
        spectra.insert(delta, pair_spectrum(&sys.window, &sys.lattice, delta, -2 * mm, (4 * mm + 1) as usize)?);
    }
    let (a, b) = (sys.a(), sys.b());
    let size = labels.len();
    Ok(DMatrix::from_fn(size, size, |i, j| {
        let (m, n) = labels[i];
        let (mp, np) = labels[j];
        let q = spectra[&(n - np)][(m - mp + 2 * mm) as usize];
        Complex64::cis(-2.0 * PI * (m - mp) as f64 * b * np as f64 * a) * q
    }))
}

/// `c^H G c`.
pub fn quadratic_form(gram: &DMatrix<Complex64>, coeffs: &[Complex64]) -> f64 {
    let c = DVector::from_column_slice(coeffs);
    (c.adjoint() * gram * &c)[(0, 0)].re
}

fn hermitian_deviation(gram: &DMatrix<Complex64>) -> f64 {
    let mut dev = 0.0f64;
    for i in 0..gram.nrows() {
        for j in 0..=i {
            dev = dev.max((gram[(i, j)] - gram[(j, i)].conj()).norm());
        }
    }
    dev
}

/// `(λ_min, λ_max)` where `λ_min` is the smallest eigenvalue not below
/// `rank_tol · λ_max`; smaller ones are treated as null space.
pub fn eigen_extremes(gram: &DMatrix<Complex64>, rank_tol: f64) -> Result<(f64, f64), OracleError> {
    if !gram.is_square() || gram.is_empty() {
        return Err(OracleError::InvalidParameter { name: "gram", reason: "must be a non-empty square matrix" });
    }
    let scale = gram.iter().fold(1.0f64, |s, v| s.max(v.norm()));
    let deviation = hermitian_deviation(gram);
    if deviation > HERMITIAN_TOL * scale {
        return Err(OracleError::NonHermitian { deviation });
    }
    let sym = (gram + gram.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym).eigenvalues;
    let max = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let cut = rank_tol * max.max(0.0);
    let min = eig.iter().copied().filter(|&l| l >= cut).fold(f64::INFINITY, f64::min);
    Ok((if min.is_finite() { min } else { max }, max))
}

/// `max |G - I|`.
pub fn identity_deviation(gram: &DMatrix<Complex64>) -> f64 {
    let mut dev = 0.0f64;
    for ((i, j), v) in gram.iter().enumerate().map(|(k, v)| ((k % gram.nrows(), k / gram.nrows()), v)) {
        let target = if i == j { 1.0 } else { 0.0 };
        dev = dev.max((v - target).norm());
    }
    dev
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::window::Lattice;

    #[test]
    fn scaled_identities() {
        let id = DMatrix::<Complex64>::identity(11, 11);
        assert_eq!(eigen_extremes(&id, 1e-12).unwrap(), (1.0, 1.0));
        let two = &id * Complex64::new(2.0, 0.0);
        let (lo, hi) = eigen_extremes(&two, 1e-12).unwrap();
        assert!((lo - 2.0).abs() < 1e-14 && (hi - 2.0).abs() < 1e-14);
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let mut m = DMatrix::<Complex64>::identity(3, 3);
        m[(0, 1)] = Complex64::new(0.0, 1.0);
        assert!(matches!(eigen_extremes(&m, 1e-12), Err(OracleError::NonHermitian { .. })));
    }

    #[test]
    fn rank_deficiency_is_ignored() {
        let mut m = DMatrix::<Complex64>::identity(3, 3);
        m[(2, 2)] = Complex64::new(1e-15, 0.0);
        assert_eq!(eigen_extremes(&m, 1e-10).unwrap().0, 1.0);
    }

    #[test]
    fn box_gram_is_identity() {
        let sys = GaborSystem::square(catalog::indicator(0.0, 1.0), Lattice::new(1.0, 1.0).unwrap(), 5, 5).unwrap();
        let g = gram_matrix(&sys).unwrap();
        assert!(identity_deviation(&g) < 1e-12);
    }

    #[test]
    fn gram_reproduces_norms() {
        let sys = GaborSystem::square(catalog::example_thm21(), Lattice::new(1.0, 1.0).unwrap(), 2, 1).unwrap();
        let g = gram_matrix(&sys).unwrap();
        let labels = sys.labels();
        let coeffs: Vec<Complex64> = (0..labels.len()).map(|k| Complex64::new((k as f64).sin(), (k as f64 * 0.7).cos())).collect();
        let atoms = labels
            .iter()
            .zip(&coeffs)
            .map(|(&(m, n), &coeff)| crate::oracle::Atom { m, n, coeff })
            .collect();
        let f = crate::oracle::TestFunction::Atoms(crate::oracle::AtomCombination::new(atoms).unwrap());
        let r = f.render(&sys);
        let direct = crate::oracle::inner_product(&r, &r).unwrap().re;
        assert!((quadratic_form(&g, &coeffs) - direct).abs() < 1e-11 * direct);
    }
}
