//! Rayleigh ratios `Σ |<f, E_mb T_na g>|^2 / ||f||^2` of sample functions.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::energy::{analysis_energy_with, EnergyConfig};
use super::gram::{gram_matrix, quadratic_form};
use super::system::GaborSystem;
use super::test_function::{bump, Atom, AtomCombination, TestFunction};
use super::{OracleError, OracleQuantity, OracleReport};

/// Truncation used for random probes: one stage at `|m| ≤ 64` with the model
/// tail summed to `|m| ≤ 256`, accepted when the tail bound is within `1e-4`
/// relative.
pub fn probe_config() -> EnergyConfig {
    EnergyConfig { m_start: 64, m_cap: 64, max_tail_rel: 1e-4, q_factor: 4, ..EnergyConfig::default() }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeOutcome {
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub ratios: Vec<f64>,
    /// Trials dropped because `||f||^2` was numerically zero.
    pub skipped: usize,
}

impl ProbeOutcome {
    pub fn reports(&self, seed: u64) -> Vec<OracleReport> {
        [(self.min_ratio, 0.0), (self.max_ratio, 1.0)]
            .into_iter()
            .map(|(v, upper)| {
                OracleReport::new(OracleQuantity::RayleighRatio, v)
                    .with("upper", upper)
                    .with("trials", self.ratios.len() as f64)
                    .with("skipped", self.skipped as f64)
                    .with("seed", seed as f64)
            })
            .collect()
    }
}

/// Ratios for `trials` random elements of the span of `sys`, with standard
/// complex normal coefficients drawn from a generator seeded by `seed`.
pub fn frame_ratio_probe(sys: &GaborSystem, trials: usize, seed: u64) -> Result<ProbeOutcome, OracleError> {
    frame_ratio_probe_with(sys, trials, seed, &probe_config())
}

pub fn frame_ratio_probe_with(
    sys: &GaborSystem,
    trials: usize,
    seed: u64,
    cfg: &EnergyConfig,
) -> Result<ProbeOutcome, OracleError> {
    if trials == 0 {
        return Err(OracleError::InvalidParameter { name: "trials", reason: "must be at least 1" });
    }
    let gram = gram_matrix(sys)?;
    let labels = sys.labels();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ratios = Vec::with_capacity(trials);
    let mut skipped = 0;
    for _ in 0..trials {
        let coeffs: Vec<Complex64> = labels
            .iter()
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im)
            })
            .collect();
        let norm = quadratic_form(&gram, &coeffs);
        let scale: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if !(norm > 1e-12 * scale) {
            skipped += 1;
            continue;
        }
        let atoms = labels.iter().zip(&coeffs).map(|(&(m, n), &coeff)| Atom { m, n, coeff }).collect();
        let f = TestFunction::Atoms(AtomCombination::new(atoms)?);
        let energy = analysis_energy_with(&f, sys, cfg)?;
        ratios.push(energy.energy / norm);
    }
    let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max_ratio = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(ProbeOutcome { min_ratio, max_ratio, ratios, skipped })
}

/// Ratio for a narrow bump centred at `center`; for small `radius` it
/// approaches the periodization `G(center)/b` when cross terms vanish.
///
/// Shifting the bump and the window by the same amount leaves every
/// coefficient modulus unchanged, so the bump is built at the origin and the
/// window is moved by `-center`. A bump stored far from the origin loses
/// most of its digits to cancellation in the monomial coefficients.
///
/// The spectrum of the bump is about `1/radius` wide, so the shell cap grows
/// like `1/(b·radius)`.
pub fn bump_probe(sys: &GaborSystem, center: f64, radius: f64) -> Result<OracleReport, OracleError> {
    if !(radius > 0.0) {
        return Err(OracleError::InvalidParameter { name: "radius", reason: "must be positive" });
    }
    let sys = GaborSystem { window: sys.window.translate(-center), ..sys.clone() };
    let w = bump(0.0, radius);
    let norm = w.l2_norm_sq();
    let defaults = EnergyConfig::default();
    let needed = (4.0 / (sys.b() * radius)).min(1e6) as usize;
    let cfg = EnergyConfig { m_cap: defaults.m_cap.max(needed.next_power_of_two()), ..defaults };
    let energy = analysis_energy_with(&TestFunction::piecewise(w), &sys, &cfg)?;
    Ok(OracleReport::new(OracleQuantity::RayleighRatio, energy.energy / norm)
        .with("center", center)
        .with("radius", radius)
        .with("m_max", energy.m_max as f64)
        .with("tail_bound", energy.tail_bound))
}
