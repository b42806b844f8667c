//! Fourier samples `ĥ(mb) = ∫ h(x) e^{-2πimbx} dx` of a compactly supported
//! piecewise function, and an endpoint model of their decay.
//!
//! For `h = Σ_φ e^{2πiφx} u_φ(x)` with `u_φ` piecewise smooth, integration by
//! parts gives, at every breakpoint `x_s` and with `ω = 2π(ν - φ)`,
//!
//! ```text
//! û_φ(ω) ≈ e^{-iωx_s} [ A/(iω) + B/(iω)^2 + Γ(3/2) (κ_R (iω)^{-3/2} + κ_L (-iω)^{-3/2}) ]
//! ```
//!
//! where `A` is the jump of `u_φ`, `B` the sum of the one-sided slopes in the
//! distance variable, and `κ_R`, `κ_L` the coefficients of `√t` on either
//! side (non-zero at square-root edges). The model is used to sum the
//! coefficient energy beyond the last computed shell.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::quadrature::Node;

const GAMMA_3_2: f64 = 0.886_226_925_452_758;
/// `e^{3πi/4}` and `e^{-3πi/4}`.
const SQRT_ARG_POS: Complex64 = Complex64::new(-std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2);
const SQRT_ARG_NEG: Complex64 = Complex64::new(-std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2);

/// `Σ_i w_i v_i e^{-2πi m b x_i}` for `m = m_lo, m_lo + 1, ..., m_lo + count - 1`.
pub fn fourier_range(nodes: &[Node], values: &[Complex64], b: f64, m_lo: i64, count: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); count];
    for (node, &v) in nodes.iter().zip(values) {
        if v == Complex64::new(0.0, 0.0) {
            continue;
        }
        let theta = -2.0 * PI * b * node.x;
        let step = Complex64::cis(theta);
        // reseeding every 64 steps keeps the recurrence drift at rounding level
        let mut k = 0;
        while k < count {
            let mut phase = Complex64::cis(theta * (m_lo + k as i64) as f64) * (node.w * v);
            let end = (k + 64).min(count);
            for slot in &mut out[k..end] {
                *slot += phase;
                phase *= step;
            }
            k = end;
        }
    }
    out
}

/// One-sided expansion `value + slope·t + sqrt_coeff·√t` in the distance
/// `t` from a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Local {
    pub value: Complex64,
    pub slope: Complex64,
    pub sqrt_coeff: Complex64,
}

impl Local {
    pub fn real(e: crate::window::LocalExpansion) -> Local {
        Local {
            value: e.value.into(),
            slope: e.slope.into(),
            sqrt_coeff: e.sqrt_coeff.into(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value == Complex64::default()
            && self.slope == Complex64::default()
            && self.sqrt_coeff == Complex64::default()
    }

    pub fn scale(self, c: Complex64) -> Local {
        Local { value: self.value * c, slope: self.slope * c, sqrt_coeff: self.sqrt_coeff * c }
    }

    pub fn add(self, o: Local) -> Local {
        Local {
            value: self.value + o.value,
            slope: self.slope + o.slope,
            sqrt_coeff: self.sqrt_coeff + o.sqrt_coeff,
        }
    }

    /// Product, truncated after the `t` term.
    pub fn mul(self, o: Local) -> Local {
        Local {
            value: self.value * o.value,
            slope: self.value * o.slope + self.slope * o.value + self.sqrt_coeff * o.sqrt_coeff,
            sqrt_coeff: self.value * o.sqrt_coeff + self.sqrt_coeff * o.value,
        }
    }
}

/// Contribution of one breakpoint to the transform of one frequency group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointTerm {
    pub x: f64,
    pub freq: f64,
    jump: Complex64,
    slopes: Complex64,
    kappa_right: Complex64,
    kappa_left: Complex64,
    has_sqrt: bool,
}

impl EndpointTerm {
    /// `None` when both sides vanish.
    pub fn new(x: f64, freq: f64, left: Local, right: Local) -> Option<EndpointTerm> {
        let t = EndpointTerm {
            x,
            freq,
            jump: right.value - left.value,
            slopes: right.slope + left.slope,
            kappa_right: right.sqrt_coeff,
            kappa_left: left.sqrt_coeff,
            has_sqrt: right.sqrt_coeff != Complex64::default() || left.sqrt_coeff != Complex64::default(),
        };
        let zero = Complex64::default();
        (t.jump != zero || t.slopes != zero || t.kappa_right != zero || t.kappa_left != zero)
            .then_some(t)
    }

    /// Bracketed factor at angular frequency `omega ≠ 0`, without the phase.
    fn amplitude(&self, omega: f64) -> Complex64 {
        // jump/(iω) + slopes/(iω)^2 with 1/(iω) = -i/ω
        let r = 1.0 / omega;
        let r2 = r * r;
        let mut v = Complex64::new(
            r * self.jump.im - r2 * self.slopes.re,
            -r * self.jump.re - r2 * self.slopes.im,
        );
        if self.has_sqrt {
            // (iω)^{-3/2} and (-iω)^{-3/2} on the principal branch
            let root = omega.abs().powf(-1.5);
            let (right, left) = if omega > 0.0 { (SQRT_ARG_NEG, SQRT_ARG_POS) } else { (SQRT_ARG_POS, SQRT_ARG_NEG) };
            v += (self.kappa_right * right + self.kappa_left * left) * (GAMMA_3_2 * root);
        }
        v
    }
}

/// Endpoint model for `ĥ` built from all breakpoints of `h`.
#[derive(Debug, Clone, Default)]
pub struct AsymptoticModel {
    pub terms: Vec<EndpointTerm>,
}

impl AsymptoticModel {
    /// Model value at frequency `nu`; terms whose own frequency is within
    /// `1e-9` of `nu` are skipped.
    pub fn value(&self, nu: f64) -> Complex64 {
        self.terms
            .iter()
            .filter_map(|t| {
                let omega = 2.0 * PI * (nu - t.freq);
                (omega.abs() > 1e-9).then(|| Complex64::cis(-omega * t.x) * t.amplitude(omega))
            })
            .sum()
    }

    /// `Σ |model(mb)|^2` over `M < |m - center| ≤ q_max`, plus the
    /// non-oscillating part of the remainder beyond `q_max`.
    pub fn tail_energy(&self, b: f64, center: i64, m_max: usize, q_max: usize) -> f64 {
        if self.terms.is_empty() || q_max <= m_max {
            return 0.0;
        }
        let mut total = 0.0;
        for dir in [1i64, -1] {
            let m0 = center + dir * (m_max as i64 + 1);
            let count = q_max - m_max;
            // phases e^{-iω x} advance by e^{∓2πibx} per step in m
            let mut state: Vec<(Complex64, Complex64)> = self
                .terms
                .iter()
                .map(|t| {
                    let omega = 2.0 * PI * (m0 as f64 * b - t.freq);
                    (Complex64::cis(-omega * t.x), Complex64::cis(-2.0 * PI * b * dir as f64 * t.x))
                })
                .collect();
            for step in 0..count {
                let m = m0 + dir * step as i64;
                let mut v = Complex64::default();
                for (t, (phase, inc)) in self.terms.iter().zip(state.iter_mut()) {
                    let omega = 2.0 * PI * (m as f64 * b - t.freq);
                    if omega.abs() > 1e-9 {
                        v += *phase * t.amplitude(omega);
                    }
                    *phase *= *inc;
                }
                total += v.norm_sqr();
                if step % 256 == 255 {
                    // reseed against drift
                    for (t, (phase, _)) in self.terms.iter().zip(state.iter_mut()) {
                        let omega = 2.0 * PI * ((m + dir) as f64 * b - t.freq);
                        *phase = Complex64::cis(-omega * t.x);
                    }
                }
            }
        }
        total + self.remainder(b, center, q_max)
    }

    /// `Σ_{|m - center| > q} |model(mb)|^2` through order `1/q^3`, from the
    /// jump and slope parts of every pair of breakpoints. Pairs whose phases
    /// drift slowly in `m` decay like `1/q` and dominate.
    fn remainder(&self, b: f64, center: i64, q: usize) -> f64 {
        let mut xs: Vec<f64> = self.terms.iter().map(|t| t.x).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let slot = |x: f64| xs.partition_point(|&y| y < x);
        let mut tails = vec![None; xs.len() * xs.len()];
        let c = center as f64;
        let r = 2.0 * PI * b;
        let i = Complex64::new(0.0, 1.0);
        let mut total = 0.0;
        for s in &self.terms {
            // amplitude ≈ alpha/ω + beta/ω^2, with ω = r (j + e) and m = center + j
            let (al_s, be_s, e_s) = (-i * s.jump, -s.slopes, c - s.freq / b);
            for t in &self.terms {
                let (al_t, be_t, e_t) = (-i * t.jump, -t.slopes, c - t.freq / b);
                let delta = 2.0 * PI * b * (s.x - t.x);
                let [c2, s3, c4] = *tails[slot(s.x) * xs.len() + slot(t.x)]
                    .get_or_insert_with(|| trig_tails(delta.rem_euclid(2.0 * PI), q));
                // Σ_{|j| > q} e^{-ijΔ} j^{-k} is 2 c2, -2i s3, 2 c4 for k = 2, 3, 4
                let (k2, k3, k4) = (2.0 * c2, -2.0 * i * s3, 2.0 * c4);
                let jj = al_s * al_t.conj() / (r * r) * (k2 - (e_s + e_t) * k3 + (e_s * e_s + e_s * e_t + e_t * e_t) * k4);
                let js = al_s * be_t.conj() / (r * r * r) * (k3 - (e_s + 2.0 * e_t) * k4);
                let sj = be_s * al_t.conj() / (r * r * r) * (k3 - (2.0 * e_s + e_t) * k4);
                let ss = be_s * be_t.conj() / (r * r * r * r) * k4;
                let phase = Complex64::cis(2.0 * PI * (s.freq * s.x - t.freq * t.x) - c * delta);
                total += (phase * (jj + js + sj + ss)).re;
            }
        }
        total
    }
}

/// `Σ_{j > q}` of `cos(jθ)/j^2`, `sin(jθ)/j^3` and `cos(jθ)/j^4` for
/// `θ ∈ [0, 2π)`: closed forms of the full series minus the first `q` terms.
fn trig_tails(t: f64, q: usize) -> [f64; 3] {
    let (t2, p2) = (t * t, PI * PI);
    let mut tails = [
        p2 / 6.0 - PI * t / 2.0 + t2 / 4.0,
        p2 * t / 6.0 - PI * t2 / 4.0 + t * t2 / 12.0,
        p2 * p2 / 90.0 - p2 * t2 / 12.0 + PI * t * t2 / 12.0 - t2 * t2 / 48.0,
    ];
    for j in (1..=q).rev() {
        let (sin, cos) = (j as f64 * t).sin_cos();
        let inv = 1.0 / j as f64;
        let inv2 = inv * inv;
        tails[0] -= cos * inv2;
        tails[1] -= sin * inv2 * inv;
        tails[2] -= cos * inv2 * inv2;
    }
    tails
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::quadrature::composite;

    #[test]
    fn box_coefficients() {
        let nodes = composite(0.0, 1.0, &[], &[], |_| 64).unwrap();
        let values = vec![Complex64::new(1.0, 0.0); nodes.len()];
        let c = fourier_range(&nodes, &values, 1.0, -3, 7);
        assert!((c[3] - 1.0).norm() < 1e-15);
        for (k, v) in c.iter().enumerate() {
            if k != 3 {
                assert!(v.norm() < 1e-14, "m = {}", k as i64 - 3);
            }
        }
    }

    #[test]
    fn model_matches_ramp_transform() {
        // h(x) = x on [0, 1): ĥ(ν) = (e^{-iω}(1 + iω) - 1)/ω^2 exactly
        let left0 = Local::default();
        let right0 = Local { value: 0.0.into(), slope: 1.0.into(), sqrt_coeff: 0.0.into() };
        let left1 = Local { value: 1.0.into(), slope: (-1.0).into(), sqrt_coeff: 0.0.into() };
        let model = AsymptoticModel {
            terms: vec![
                EndpointTerm::new(0.0, 0.0, left0, right0).unwrap(),
                EndpointTerm::new(1.0, 0.0, left1, Local::default()).unwrap(),
            ],
        };
        for m in [3i64, -7, 40] {
            let omega = 2.0 * PI * m as f64;
            let i_omega = Complex64::new(0.0, omega);
            let exact = (Complex64::cis(-omega) * (1.0 + i_omega) - 1.0) / (omega * omega);
            assert!((model.value(m as f64) - exact).norm() < 1e-14, "m = {m}");
        }
    }

    #[test]
    fn model_captures_sqrt_edge() {
        // h(x) = sqrt(x) on [0, 1)
        let nodes = composite(0.0, 1.0, &[], &[0.0], |len| 10 + (4.0 * 400.0 * len) as usize).unwrap();
        let values: Vec<Complex64> = nodes.iter().map(|n| n.x.sqrt().into()).collect();
        let c = fourier_range(&nodes, &values, 1.0, 380, 21);
        let right0 = Local { sqrt_coeff: 1.0.into(), ..Local::default() };
        let left1 = Local { value: 1.0.into(), slope: (-0.5).into(), ..Local::default() };
        let model = AsymptoticModel {
            terms: vec![
                EndpointTerm::new(0.0, 0.0, Local::default(), right0).unwrap(),
                EndpointTerm::new(1.0, 0.0, left1, Local::default()).unwrap(),
            ],
        };
        for (k, v) in c.iter().enumerate() {
            let m = 380.0 + k as f64;
            let err = (model.value(m) - v).norm();
            // next terms are O(ω^{-5/2})
            assert!(err < 2.0 * (2.0 * PI * m).powf(-2.5), "m = {m}: {err}");
        }
    }

    #[test]
    fn tail_of_box_matches_closed_form() {
        // |ĥ(m)|^2 = 0 for m ≠ 0: the two jumps cancel exactly when b = 1
        let model = AsymptoticModel {
            terms: vec![
                EndpointTerm::new(0.0, 0.0, Local::default(), Local { value: 1.0.into(), ..Local::default() }).unwrap(),
                EndpointTerm::new(1.0, 0.0, Local { value: 1.0.into(), ..Local::default() }, Local::default()).unwrap(),
            ],
        };
        assert!(model.tail_energy(1.0, 0, 10, 200) < 1e-25);
        // with b = 1/2 odd frequencies survive: Σ_{m odd, |m|>10} 4/(π m)^2
        let head: f64 = (1..=9).step_by(2).map(|m| 1.0 / (m * m) as f64).sum();
        let exact = 8.0 / (PI * PI) * (PI * PI / 8.0 - head);
        let got = model.tail_energy(0.5, 0, 10, 4000);
        assert!((got - exact).abs() < 1e-5 * exact, "{got} vs {exact}");
    }

    #[test]
    fn trig_tails_match_direct_sums() {
        let n = 2_000_000;
        for t in [0.0, 1e-3, 0.3, 3.0, 6.2] {
            let q = 100;
            // beyond n the oscillating sums are below 1e-9; at t = 0 the
            // first one still needs its 1/n tail
            let mut direct = [if t == 0.0 { 1.0 / (n as f64 - 0.5) } else { 0.0 }, 0.0, 0.0];
            for j in (q + 1..n).rev() {
                let (sin, cos) = (j as f64 * t).sin_cos();
                let j = j as f64;
                direct[0] += cos / (j * j);
                direct[1] += sin / (j * j * j);
                direct[2] += cos / (j * j * j * j);
            }
            let tails = trig_tails(t, q);
            for (k, (u, v)) in tails.iter().zip(direct).enumerate() {
                assert!((u - v).abs() < 1e-9, "t = {t}, k = {k}: {u} vs {v}");
            }
        }
    }
}
