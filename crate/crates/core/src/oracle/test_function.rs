//! Test functions fed to the oracle.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fourier::Local;
use super::system::GaborSystem;
use super::OracleError;
use crate::poly;
use crate::window::{Piece, PiecewiseWindow, Side};

/// One term `c · E_{mb} T_{na} g` of a finite atom combination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub m: i64,
    pub n: i64,
    pub coeff: Complex64,
}

/// `Σ_j c_j E_{m_j b} T_{n_j a} g`; the window and lattice come from the
/// system it is used with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomCombination {
    atoms: Vec<Atom>,
}

impl AtomCombination {
    pub fn new(atoms: Vec<Atom>) -> Result<Self, OracleError> {
        if atoms.iter().all(|a| a.coeff == Complex64::default()) {
            return Err(OracleError::ZeroTestFunction);
        }
        Ok(AtomCombination { atoms })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TestFunction {
    /// `e^{2πi·modulation·x} w(x)`.
    Piecewise { window: PiecewiseWindow, modulation: f64 },
    Atoms(AtomCombination),
}

impl TestFunction {
    pub fn piecewise(window: PiecewiseWindow) -> Self {
        TestFunction::Piecewise { window, modulation: 0.0 }
    }

    /// The same function multiplied by `e^{2πi·freq·x}`. Atom combinations
    /// only accept multiples of `b`, which keep them in the span.
    pub fn modulated(&self, freq: f64, sys: &GaborSystem) -> Result<TestFunction, OracleError> {
        match self {
            TestFunction::Piecewise { window, modulation } => Ok(TestFunction::Piecewise {
                window: window.clone(),
                modulation: modulation + freq,
            }),
            TestFunction::Atoms(combo) => {
                let steps = freq / sys.lattice.b();
                if (steps - steps.round()).abs() > 1e-12 {
                    return Err(OracleError::InvalidParameter {
                        name: "modulation",
                        reason: "atom combinations can only be shifted by multiples of b",
                    });
                }
                let atoms = combo
                    .atoms
                    .iter()
                    .map(|a| Atom { m: a.m + steps.round() as i64, ..*a })
                    .collect();
                Ok(TestFunction::Atoms(AtomCombination { atoms }))
            }
        }
    }

    /// Flattens the function into modulated, translated windows.
    pub fn render(&self, sys: &GaborSystem) -> Rendered {
        match self {
            TestFunction::Piecewise { window, modulation } => Rendered {
                components: vec![Component {
                    amp: Complex64::new(1.0, 0.0),
                    freq: *modulation,
                    window: window.clone(),
                }],
            },
            TestFunction::Atoms(combo) => {
                let (a, b) = (sys.lattice.a(), sys.lattice.b());
                Rendered {
                    components: combo
                        .atoms
                        .iter()
                        .filter(|at| at.coeff != Complex64::default())
                        .map(|at| Component {
                            amp: at.coeff,
                            freq: at.m as f64 * b,
                            window: sys.window.translate(at.n as f64 * a),
                        })
                        .collect(),
                }
            }
        }
    }
}

/// `amp · e^{2πi·freq·x} · window(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub amp: Complex64,
    pub freq: f64,
    pub window: PiecewiseWindow,
}

/// A test function as a sum of components.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub components: Vec<Component>,
}

impl Rendered {
    pub fn eval(&self, x: f64) -> Complex64 {
        self.components
            .iter()
            .map(|c| {
                let v = c.window.eval(x);
                if v == 0.0 {
                    Complex64::default()
                } else {
                    c.amp * Complex64::cis(2.0 * std::f64::consts::PI * c.freq * x) * v
                }
            })
            .sum()
    }

    pub fn support_hull(&self) -> Option<(f64, f64)> {
        self.components
            .iter()
            .filter_map(|c| c.window.support_hull())
            .reduce(|p, q| (p.0.min(q.0), p.1.max(q.1)))
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self.components.iter().flat_map(|c| c.window.breakpoints()).collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    pub fn singularities(&self) -> Vec<f64> {
        self.components.iter().flat_map(|c| c.window.sqrt_singularities()).collect()
    }

    pub fn max_abs_freq(&self) -> f64 {
        self.components.iter().fold(0.0, |m, c| m.max(c.freq.abs()))
    }

    /// Distinct modulation frequencies.
    pub fn frequencies(&self) -> Vec<f64> {
        let mut f: Vec<f64> = self.components.iter().map(|c| c.freq).collect();
        f.sort_by(f64::total_cmp);
        f.dedup();
        f
    }

    /// One-sided expansion of the unmodulated part at frequency `freq`:
    /// `Σ_{c : c.freq = freq} c.amp · c.window`.
    pub fn local(&self, freq: f64, x: f64, side: Side) -> Local {
        self.components
            .iter()
            .filter(|c| c.freq == freq)
            .fold(Local::default(), |acc, c| {
                acc.add(Local::real(c.window.local_expansion(x, side)).scale(c.amp))
            })
    }

    /// Restricts to components whose support meets `[lo, hi]`.
    pub fn restricted(&self, lo: f64, hi: f64) -> Rendered {
        Rendered {
            components: self
                .components
                .iter()
                .filter(|c| c.window.support_hull().is_some_and(|(l, h)| l < hi && lo < h))
                .cloned()
                .collect(),
        }
    }
}

/// Tent of height 1 on `[lo, hi]`, peaking at the midpoint.
pub fn tent(lo: f64, hi: f64) -> PiecewiseWindow {
    let mid = 0.5 * (lo + hi);
    let s = 1.0 / (mid - lo);
    PiecewiseWindow::new(vec![
        Piece::poly(lo, mid, [-lo * s, s]),
        Piece::poly(mid, hi, [hi * s, -s]),
    ])
    .expect("lo < hi")
}

/// `(1 - t^2)^4` with `t = (x - center)/radius`, a C^3 bump.
///
/// The coefficients are expanded around the origin and grow like
/// `(|center|/radius)^8`, so narrow bumps should sit near 0.
pub fn bump(center: f64, radius: f64) -> PiecewiseWindow {
    let base = [1.0, 0.0, -4.0, 0.0, 6.0, 0.0, -4.0, 0.0, 1.0];
    let coeffs = poly::shift(&poly::scale(&base, 1.0 / radius), -center);
    PiecewiseWindow::new(vec![Piece::poly(center - radius, center + radius, coeffs)])
        .expect("radius > 0")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tent_and_bump_shapes() {
        let t = tent(0.0, 2.0);
        assert_eq!(t.eval(1.0), 1.0);
        assert_eq!(t.eval(0.5), 0.5);
        assert!((t.eval(1.5) - 0.5).abs() < 1e-15);
        let b = bump(-0.01, 0.009);
        assert!((b.eval(-0.01) - 1.0).abs() < 1e-12);
        let x = -0.01 + 0.5 * 0.009;
        assert!((b.eval(x) - 0.75f64.powi(4)).abs() < 1e-12);
        assert_eq!(b.eval(0.0), 0.0);
    }

    #[test]
    fn zero_combination_is_rejected() {
        let atoms = vec![Atom { m: 0, n: 0, coeff: Complex64::default() }];
        assert_eq!(AtomCombination::new(atoms), Err(OracleError::ZeroTestFunction));
    }
}
