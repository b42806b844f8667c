//! Gabor coefficients, their total energy, and the Walnut expansion of the
//! same quantity.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::fourier::{fourier_range, AsymptoticModel, EndpointTerm, Local};
use super::quadrature::{composite, oscillatory_nodes};
use super::system::{pair_spectrum, GaborSystem};
use super::test_function::{Rendered, TestFunction};
use super::{OracleError, OracleQuantity, OracleReport};
use crate::window::{PiecewiseWindow, Side};

/// `∫ f(x) conj(h(x)) dx`.
pub fn inner_product(f: &Rendered, h: &Rendered) -> Result<Complex64, OracleError> {
    let (Some((l0, h0)), Some((l1, h1))) = (f.support_hull(), h.support_hull()) else {
        return Ok(Complex64::default());
    };
    let (lo, hi) = (l0.max(l1), h0.min(h1));
    if hi <= lo {
        return Ok(Complex64::default());
    }
    let mut cuts = f.breakpoints();
    cuts.extend(h.breakpoints());
    let mut singular = f.singularities();
    singular.extend(h.singularities());
    let freq = f.max_abs_freq() + h.max_abs_freq();
    let nodes = composite(lo, hi, &cuts, &singular, |len| oscillatory_nodes(freq, len))?;
    Ok(nodes.iter().map(|n| n.w * f.eval(n.x) * h.eval(n.x).conj()).sum())
}

/// `<f, E_mb T_na g>`. Piecewise test functions are integrated directly;
/// atom combinations are expanded through the pair integrals of the window.
pub fn coefficient(f: &TestFunction, sys: &GaborSystem, m: i64, n: i64) -> Result<Complex64, OracleError> {
    match f {
        TestFunction::Piecewise { .. } => inner_product(&f.render(sys), &sys.atom(m, n)),
        TestFunction::Atoms(combo) => {
            let (a, b) = (sys.a(), sys.b());
            let mut total = Complex64::default();
            for at in combo.atoms() {
                if at.coeff == Complex64::default() {
                    continue;
                }
                let q = pair_spectrum(&sys.window, &sys.lattice, n - at.n, m - at.m, 1)?[0];
                let phase = Complex64::cis(-2.0 * PI * (m - at.m) as f64 * b * at.n as f64 * a);
                total += at.coeff * phase * q;
            }
            Ok(total)
        }
    }
}

/// Truncation controls for [`analysis_energy_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyConfig {
    /// Relative size below which the last shells must match the endpoint model.
    pub tail_tol: f64,
    pub m_start: usize,
    pub m_cap: usize,
    /// Largest relative tail bound accepted when the cap is reached.
    pub max_tail_rel: f64,
    /// The model tail is summed explicitly up to `q_factor · M` shells.
    pub q_factor: usize,
}

impl Default for EnergyConfig {
    fn default() -> Self {
        EnergyConfig { tail_tol: 1e-10, m_start: 64, m_cap: 4096, max_tail_rel: 1e-7, q_factor: 16 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyEstimate {
    /// `partial + tail_model`.
    pub energy: f64,
    /// `Σ |<f, E_mb T_na g>|^2` over `|m - center| ≤ m_max`.
    pub partial: f64,
    /// Model estimate of the shells beyond `m_max`.
    pub tail_model: f64,
    /// Bound on the error of `tail_model`, from the mismatch of the last
    /// computed shells against the model.
    pub tail_bound: f64,
    pub m_max: usize,
    pub converged: bool,
    pub nodes: usize,
}

impl EnergyEstimate {
    fn zero() -> Self {
        EnergyEstimate {
            energy: 0.0,
            partial: 0.0,
            tail_model: 0.0,
            tail_bound: 0.0,
            m_max: 0,
            converged: true,
            nodes: 0,
        }
    }
}

/// `Σ_{m,n} |<f, E_mb T_na g>|^2` with the default truncation and the given
/// shell tolerance.
pub fn analysis_energy(f: &TestFunction, sys: &GaborSystem, tail_tol: f64) -> Result<EnergyEstimate, OracleError> {
    if !(tail_tol > 0.0) {
        return Err(OracleError::InvalidParameter { name: "tail_tol", reason: "must be positive" });
    }
    analysis_energy_with(f, sys, &EnergyConfig { tail_tol, ..EnergyConfig::default() })
}

/// The product `f · T_na g` restricted to the overlap of the supports.
struct Slice {
    f: Rendered,
    g: PiecewiseWindow,
    lo: f64,
    hi: f64,
    cuts: Vec<f64>,
    singular: Vec<f64>,
    model: AsymptoticModel,
}

impl Slice {
    fn new(r: &Rendered, g: PiecewiseWindow, hull: (f64, f64)) -> Option<Slice> {
        let (gl, gh) = g.support_hull()?;
        let (lo, hi) = (hull.0.max(gl), hull.1.min(gh));
        if hi <= lo {
            return None;
        }
        let f = r.restricted(lo, hi);
        if f.components.is_empty() {
            return None;
        }
        let mut cuts = f.breakpoints();
        cuts.extend(g.breakpoints());
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * (1.0 + x.abs()));
        let mut singular = f.singularities();
        singular.extend(g.sqrt_singularities());

        let freqs = f.frequencies();
        let mut terms = Vec::new();
        for &x in cuts.iter().filter(|&&x| x >= lo - 1e-12 * (1.0 + lo.abs()) && x <= hi + 1e-12 * (1.0 + hi.abs())) {
            let gl = Local::real(g.local_expansion(x, Side::Left));
            let gr = Local::real(g.local_expansion(x, Side::Right));
            for &phi in &freqs {
                let left = f.local(phi, x, Side::Left).mul(gl);
                let right = f.local(phi, x, Side::Right).mul(gr);
                terms.extend(EndpointTerm::new(x, phi, left, right));
            }
        }
        Some(Slice { f, g, lo, hi, cuts, singular, model: AsymptoticModel { terms } })
    }
}

/// Coefficient energy summed over every translate meeting the support of
/// `f` and over `m` in growing symmetric windows around the dominant
/// frequency of `f`.
///
/// Each stage computes the shells `|m - center| ≤ M` by quadrature and adds
/// the endpoint-model estimate of the shells beyond `M`. The stage is
/// accepted once the last four computed shells agree with the model to
/// `tail_tol` relative to the total; their mismatch, times `M`, is reported
/// as `tail_bound`. Reaching `m_cap` without agreement is an error only if
/// `tail_bound` exceeds `max_tail_rel` of the total.
pub fn analysis_energy_with(f: &TestFunction, sys: &GaborSystem, cfg: &EnergyConfig) -> Result<EnergyEstimate, OracleError> {
    if cfg.m_start == 0 || cfg.m_cap < cfg.m_start {
        return Err(OracleError::InvalidParameter { name: "m_start", reason: "must lie in 1..=m_cap" });
    }
    let r = f.render(sys);
    let Some(hull) = r.support_hull() else {
        return Ok(EnergyEstimate::zero());
    };
    let Some((n0, n1)) = sys.overlapping_n(hull.0, hull.1) else {
        return Ok(EnergyEstimate::zero());
    };
    let (a, b) = (sys.a(), sys.b());
    let slices: Vec<Slice> = (n0..=n1)
        .filter_map(|n| Slice::new(&r, sys.window.translate(n as f64 * a), hull))
        .collect();
    if slices.is_empty() {
        return Ok(EnergyEstimate::zero());
    }

    let freqs = r.frequencies();
    let center = if freqs.len() == 1 { (freqs[0] / b).round() as i64 } else { 0 };
    let spread = freqs.iter().fold(0.0f64, |s, &p| s.max((p / b - center as f64).abs()));
    let max_phi = r.max_abs_freq();
    let mut m = cfg.m_start.max((4.0 * spread).ceil() as usize).max(4);

    loop {
        let count = 2 * m + 1;
        let m_lo = center - m as i64;
        let top = center.unsigned_abs() as f64 + m as f64;
        let mut shells = vec![0.0; m + 1];
        let mut model_shells = vec![0.0; m + 1];
        let mut tail = 0.0;
        let mut nodes_total = 0;
        for s in &slices {
            let nodes = composite(s.lo, s.hi, &s.cuts, &s.singular, |len| oscillatory_nodes(top * b + max_phi, len))?;
            nodes_total += nodes.len();
            let values: Vec<Complex64> = nodes.iter().map(|nd| s.f.eval(nd.x) * s.g.eval(nd.x)).collect();
            let coeffs = fourier_range(&nodes, &values, b, m_lo, count);
            for (k, c) in coeffs.iter().enumerate() {
                let q = k.abs_diff(m);
                shells[q] += c.norm_sqr();
                if q + 3 >= m {
                    model_shells[q] += s.model.value((m_lo + k as i64) as f64 * b).norm_sqr();
                }
            }
            tail += s.model.tail_energy(b, center, m, cfg.q_factor * m);
        }
        let partial: f64 = shells.iter().sum();
        let energy = partial + tail;
        let residual = (m - 3..=m).map(|q| (shells[q] - model_shells[q]).abs()).fold(0.0, f64::max);
        let tail_bound = residual * m as f64;
        let converged = residual <= cfg.tail_tol * energy;
        if converged || m >= cfg.m_cap {
            if !converged && tail_bound > cfg.max_tail_rel * energy {
                return Err(OracleError::NonConvergence { m_max: m, tail_bound });
            }
            return Ok(EnergyEstimate {
                energy,
                partial,
                tail_model: tail,
                tail_bound,
                m_max: m,
                converged,
                nodes: nodes_total,
            });
        }
        m = (2 * m).min(cfg.m_cap);
    }
}

/// The two sides of the Walnut expansion, each already divided by `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalnutTerms {
    /// `(1/b) ∫ |f|^2 G`.
    pub diagonal: f64,
    /// `(1/b) Σ_{k≠0} ∫ conj f(x) f(x - k/b) H_k(x) dx`.
    pub cross: f64,
    pub total: f64,
}

/// Right-hand side of the Walnut expansion of `Σ |<f, E_mb T_na g>|^2`.
pub fn walnut_rhs(f: &TestFunction, sys: &GaborSystem) -> Result<WalnutTerms, OracleError> {
    let zero = WalnutTerms { diagonal: 0.0, cross: 0.0, total: 0.0 };
    let r = f.render(sys);
    let (Some(hull), Some(g_hull)) = (r.support_hull(), sys.window.support_hull()) else {
        return Ok(zero);
    };
    let Some((n0, n1)) = sys.overlapping_n(hull.0, hull.1) else {
        return Ok(zero);
    };
    let (a, b) = (sys.a(), sys.b());
    let g = &sys.window;
    let len_f = hull.1 - hull.0;
    let len_g = g_hull.1 - g_hull.0;
    let k_max = (len_f.min(len_g) * b).ceil() as i64;
    let freq = 2.0 * r.max_abs_freq();
    let f_cuts = r.breakpoints();
    let f_sing = r.singularities();
    let g_cuts = g.breakpoints();
    let g_sing = g.sqrt_singularities();

    // Σ_n g(x - na) g(x - na - s) over the translates that can be non-zero at x
    let correlation = |x: f64, s: f64| -> f64 {
        let first = ((x - g_hull.1) / a).floor() as i64;
        let last = ((x - g_hull.0) / a).ceil() as i64;
        (first..=last)
            .map(|n| {
                let y = x - n as f64 * a;
                g.eval(y) * g.eval(y - s)
            })
            .sum()
    };

    let mut diagonal = 0.0;
    let mut cross = 0.0;
    for k in -k_max..=k_max {
        let s = k as f64 / b;
        let (lo, hi) = (hull.0.max(hull.0 + s), hull.1.min(hull.1 + s));
        if hi <= lo {
            continue;
        }
        let mut cuts = Vec::new();
        let mut singular = Vec::new();
        for shift in [0.0, s] {
            cuts.extend(f_cuts.iter().map(|p| p + shift));
            singular.extend(f_sing.iter().map(|p| p + shift));
            for n in n0..=n1 {
                let t = n as f64 * a + shift;
                cuts.extend(g_cuts.iter().map(|p| p + t));
                singular.extend(g_sing.iter().map(|p| p + t));
            }
        }
        let nodes = composite(lo, hi, &cuts, &singular, |len| oscillatory_nodes(freq, len).max(32))?;
        let value: Complex64 = nodes
            .iter()
            .map(|nd| {
                let fx = r.eval(nd.x);
                if fx == Complex64::default() {
                    return fx;
                }
                nd.w * fx.conj() * r.eval(nd.x - s) * correlation(nd.x, s)
            })
            .sum();
        if k == 0 {
            diagonal = value.re;
        } else {
            cross += value.re;
        }
    }
    Ok(WalnutTerms { diagonal: diagonal / b, cross: cross / b, total: (diagonal + cross) / b })
}

/// `|analysis_energy - walnut_rhs| / max(walnut_rhs, ε)`.
pub fn walnut_identity_check(f: &TestFunction, sys: &GaborSystem) -> Result<OracleReport, OracleError> {
    let energy = analysis_energy_with(f, sys, &EnergyConfig::default())?;
    let rhs = walnut_rhs(f, sys)?;
    let discrepancy = (energy.energy - rhs.total).abs() / rhs.total.max(f64::EPSILON);
    Ok(OracleReport::new(OracleQuantity::WalnutDiscrepancy, discrepancy)
        .with("analysis_energy", energy.energy)
        .with("walnut_rhs", rhs.total)
        .with("walnut_cross", rhs.cross)
        .with("m_max", energy.m_max as f64)
        .with("tail_model", energy.tail_model)
        .with("tail_bound", energy.tail_bound)
        .with("quadrature_nodes", energy.nodes as f64))
}
