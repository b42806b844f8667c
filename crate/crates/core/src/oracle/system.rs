//! Finite sections of a Gabor system.

use num_complex::Complex64;

use super::fourier::fourier_range;
use super::quadrature::{composite, oscillatory_nodes};
use super::test_function::{Component, Rendered};
use super::OracleError;
use crate::window::{Lattice, PiecewiseWindow};

/// `{E_mb T_na g : |m| ≤ m_max, n_range.0 ≤ n ≤ n_range.1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaborSystem {
    pub window: PiecewiseWindow,
    pub lattice: Lattice,
    pub m_max: usize,
    pub n_range: (i64, i64),
}

impl GaborSystem {
    pub fn new(
        window: PiecewiseWindow,
        lattice: Lattice,
        m_max: usize,
        n_range: (i64, i64),
    ) -> Result<Self, OracleError> {
        if window.is_empty() {
            return Err(OracleError::InvalidParameter { name: "window", reason: "must not vanish identically" });
        }
        if n_range.0 > n_range.1 {
            return Err(OracleError::InvalidParameter { name: "n_range", reason: "lower end exceeds upper end" });
        }
        Ok(GaborSystem { window, lattice, m_max, n_range })
    }

    /// `|m| ≤ m_max`, `|n| ≤ n_max`.
    pub fn square(window: PiecewiseWindow, lattice: Lattice, m_max: usize, n_max: usize) -> Result<Self, OracleError> {
        let n = n_max as i64;
        GaborSystem::new(window, lattice, m_max, (-n, n))
    }

    /// The section whose translates are exactly those meeting `[lo, hi]`.
    pub fn covering(window: PiecewiseWindow, lattice: Lattice, m_max: usize, lo: f64, hi: f64) -> Result<Self, OracleError> {
        let probe = GaborSystem::new(window, lattice, m_max, (0, 0))?;
        let range = probe
            .overlapping_n(lo, hi)
            .ok_or(OracleError::InvalidParameter { name: "interval", reason: "no translate meets it" })?;
        Ok(GaborSystem { n_range: range, ..probe })
    }

    pub fn a(&self) -> f64 {
        self.lattice.a()
    }

    pub fn b(&self) -> f64 {
        self.lattice.b()
    }

    pub fn m_count(&self) -> usize {
        2 * self.m_max + 1
    }

    pub fn len(&self) -> usize {
        self.m_count() * (self.n_range.1 - self.n_range.0 + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Atom labels `(m, n)`, `n` outermost.
    pub fn labels(&self) -> Vec<(i64, i64)> {
        let mm = self.m_max as i64;
        (self.n_range.0..=self.n_range.1)
            .flat_map(|n| (-mm..=mm).map(move |m| (m, n)))
            .collect()
    }

    /// `E_mb T_na g` as a rendered function.
    pub fn atom(&self, m: i64, n: i64) -> Rendered {
        Rendered {
            components: vec![Component {
                amp: Complex64::new(1.0, 0.0),
                freq: m as f64 * self.b(),
                window: self.window.translate(n as f64 * self.a()),
            }],
        }
    }

    /// All `n` with `supp T_na g` meeting `(lo, hi)`, or `None` if there are
    /// none. Translates touching only at an endpoint may be included.
    pub fn overlapping_n(&self, lo: f64, hi: f64) -> Option<(i64, i64)> {
        let (g_lo, g_hi) = self.window.support_hull()?;
        let a = self.a();
        let first = ((lo - g_hi) / a).floor() as i64;
        let last = ((hi - g_lo) / a).ceil() as i64;
        (first <= last).then_some((first, last))
    }
}

/// `q_δ(ℓ) = ∫ g(y) g(y - δa) e^{-2πiℓby} dy` for `ℓ = ell_lo, ..., ell_lo + count - 1`.
pub fn pair_spectrum(
    window: &PiecewiseWindow,
    lattice: &Lattice,
    delta: i64,
    ell_lo: i64,
    count: usize,
) -> Result<Vec<Complex64>, OracleError> {
    let zero = vec![Complex64::default(); count];
    let shift = delta as f64 * lattice.a();
    let other = window.translate(shift);
    let (Some((l0, h0)), Some((l1, h1))) = (window.support_hull(), other.support_hull()) else {
        return Ok(zero);
    };
    let (lo, hi) = (l0.max(l1), h0.min(h1));
    if hi <= lo {
        return Ok(zero);
    }
    let mut cuts = window.breakpoints();
    cuts.extend(other.breakpoints());
    let mut singular = window.sqrt_singularities();
    singular.extend(other.sqrt_singularities());
    let freq = ell_lo.abs().max((ell_lo + count as i64 - 1).abs()) as f64 * lattice.b();
    let nodes = composite(lo, hi, &cuts, &singular, |len| oscillatory_nodes(freq, len))?;
    let values: Vec<Complex64> = nodes.iter().map(|n| (window.eval(n.x) * other.eval(n.x)).into()).collect();
    Ok(fourier_range(&nodes, &values, lattice.b(), ell_lo, count))
}
