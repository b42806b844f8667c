//! Frame and Riesz criteria for `{E_mb T_na g}` and the wavelet analogue.
//!
//! Every checker returns a [`ConditionReport`]. Bounds are already divided by
//! `b` (or multiplied/divided by `a`) as the corresponding statement requires.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::periodization::{
    self, essential_extrema, zero_set, Extrema, LatticeTerms, PeriodizationError,
    PeriodizedSamples, ZeroSet,
};
use crate::window::{Lattice, PiecewiseWindow, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConditionId {
    #[serde(rename = "HW-1")]
    Hw1,
    #[serde(rename = "HW-4")]
    Hw4,
    #[serde(rename = "DSXW-5")]
    Dsxw5,
    #[serde(rename = "THM21")]
    Thm21,
    #[serde(rename = "COR22")]
    Cor22,
    #[serde(rename = "PROP23")]
    Prop23,
    #[serde(rename = "PROP24")]
    Prop24,
    #[serde(rename = "THM12-TRANSLATES")]
    Thm12Translates,
    #[serde(rename = "COR13-MODULATES")]
    Cor13Modulates,
    #[serde(rename = "THM25-WAVELET")]
    Thm25Wavelet,
}

impl ConditionId {
    pub const ALL: [ConditionId; 10] = [
        ConditionId::Hw1,
        ConditionId::Hw4,
        ConditionId::Dsxw5,
        ConditionId::Thm21,
        ConditionId::Cor22,
        ConditionId::Prop23,
        ConditionId::Prop24,
        ConditionId::Thm12Translates,
        ConditionId::Cor13Modulates,
        ConditionId::Thm25Wavelet,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionId::Hw1 => "HW-1",
            ConditionId::Hw4 => "HW-4",
            ConditionId::Dsxw5 => "DSXW-5",
            ConditionId::Thm21 => "THM21",
            ConditionId::Cor22 => "COR22",
            ConditionId::Prop23 => "PROP23",
            ConditionId::Prop24 => "PROP24",
            ConditionId::Thm12Translates => "THM12-TRANSLATES",
            ConditionId::Cor13Modulates => "COR13-MODULATES",
            ConditionId::Thm25Wavelet => "THM25-WAVELET",
        }
    }

    /// The space on which a `Satisfied` verdict gives frame bounds.
    pub fn target_space(self) -> TargetSpace {
        match self {
            ConditionId::Hw1 | ConditionId::Hw4 | ConditionId::Dsxw5 => TargetSpace::WholeL2,
            ConditionId::Thm21 | ConditionId::Cor22 => TargetSpace::L2MinusNG,
            _ => TargetSpace::SpanOnly,
        }
    }

    /// Checkers that read the window as a Fourier transform `ĝ`.
    pub fn is_spectral(self) -> bool {
        matches!(self, ConditionId::Thm12Translates | ConditionId::Thm25Wavelet)
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown condition id `{0}`")]
pub struct UnknownCondition(pub String);

impl FromStr for ConditionId {
    type Err = UnknownCondition;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ConditionId::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownCondition(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Satisfied,
    NotSatisfied,
    Inapplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TargetSpace {
    WholeL2,
    L2MinusNG,
    SpanOnly,
}

/// A number supporting a verdict, with the point where it was observed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: Option<f64>,
    pub side: Option<Side>,
    pub quantity: String,
    pub value: f64,
}

impl Witness {
    pub fn at(e: periodization::Extremum, quantity: &str) -> Witness {
        Witness { x: Some(e.x), side: Some(e.side), quantity: quantity.into(), value: e.value }
    }

    pub fn scalar(quantity: &str, value: f64) -> Witness {
        Witness { x: None, side: None, quantity: quantity.into(), value }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition_id: ConditionId,
    pub verdict: Verdict,
    pub lower_bound: Option<f64>,
    pub upper_bound: Option<f64>,
    pub target_space: TargetSpace,
    pub witnesses: Vec<Witness>,
    /// Which precondition failed, for `Inapplicable`.
    pub reason: Option<String>,
}

impl ConditionReport {
    fn new(condition_id: ConditionId, target_space: TargetSpace) -> Self {
        ConditionReport {
            condition_id,
            verdict: Verdict::NotSatisfied,
            lower_bound: None,
            upper_bound: None,
            target_space,
            witnesses: Vec::new(),
            reason: None,
        }
    }

    fn inapplicable(
        condition_id: ConditionId,
        target_space: TargetSpace,
        reason: String,
        witness: Witness,
    ) -> Self {
        ConditionReport {
            verdict: Verdict::Inapplicable,
            reason: Some(reason),
            witnesses: vec![witness],
            ..ConditionReport::new(condition_id, target_space)
        }
    }

    /// Sets the verdict from the lower bound; the upper bound is recorded in
    /// any case since it stays a valid Bessel-type bound.
    fn with_bounds(mut self, positive: bool, lower: f64, upper: f64) -> Self {
        let ok = positive && lower > 0.0 && upper.is_finite() && lower <= upper;
        self.verdict = if ok { Verdict::Satisfied } else { Verdict::NotSatisfied };
        self.lower_bound = ok.then_some(lower);
        self.upper_bound = upper.is_finite().then_some(upper);
        self
    }

    fn witness(mut self, w: Witness) -> Self {
        self.witnesses.push(w);
        self
    }

    /// `Inapplicable` report for a checker whose precondition failed before
    /// anything was computed.
    pub fn precondition_unmet(condition_id: ConditionId, reason: String) -> Self {
        ConditionReport {
            verdict: Verdict::Inapplicable,
            reason: Some(reason),
            ..ConditionReport::new(condition_id, condition_id.target_space())
        }
    }

    /// Value of the first witness with the given name.
    pub fn witness_value(&self, quantity: &str) -> Option<f64> {
        self.witnesses.iter().find(|w| w.quantity == quantity).map(|w| w.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RieszVerdict {
    pub is_frame_sequence: bool,
    pub is_riesz_sequence: bool,
    pub zero_set_measure: f64,
}

impl RieszVerdict {
    fn new(report: &ConditionReport, zeros: &ZeroSet, riesz_tol: f64) -> Self {
        let is_frame_sequence = report.verdict == Verdict::Satisfied;
        RieszVerdict {
            is_frame_sequence,
            is_riesz_sequence: is_frame_sequence && zeros.measure <= riesz_tol * zeros.period,
            zero_set_measure: zeros.measure,
        }
    }
}

/// Numerical knobs shared by all checkers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckSettings {
    /// Uniform samples per period, before boundary images are added.
    pub resolution: usize,
    /// Values at most `tol_zero · max` count as zero.
    pub tol_zero: f64,
    /// A zero set counts as null when its measure is at most `riesz_tol · period`.
    pub riesz_tol: f64,
    /// Relative slack when comparing against a claimed bound.
    pub bound_tol: f64,
}

impl Default for CheckSettings {
    fn default() -> Self {
        CheckSettings {
            resolution: periodization::DEFAULT_RESOLUTION,
            tol_zero: periodization::DEFAULT_TOL_ZERO,
            riesz_tol: 1e-9,
            bound_tol: 1e-9,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrameError {
    #[error(transparent)]
    Periodization(#[from] PeriodizationError),
    #[error("{name} must be {requirement}, got {value}")]
    InvalidParameter { name: &'static str, requirement: &'static str, value: f64 },
    #[error("{0}: the zero set covers the whole period, so the infimum is over an empty set")]
    EmptyDomain(ConditionId),
    #[error("spectral window support reaches 0 at {at}; infinitely many scales would contribute")]
    SupportTouchesZero { at: f64 },
    #[error("{0} needs a claimed upper bound")]
    MissingClaim(ConditionId),
}

fn extrema(
    id: ConditionId,
    p: &PeriodizedSamples,
    exclude: &ZeroSet,
) -> Result<Extrema, FrameError> {
    essential_extrema(p, exclude).map_err(|e| match e {
        PeriodizationError::EmptyDomain => FrameError::EmptyDomain(id),
        other => other.into(),
    })
}

fn is_positive(value: f64, scale: f64, tol_zero: f64) -> bool {
    value > tol_zero * scale
}

/// Lazily computed periodizations of one window on one lattice, shared by
/// all checkers.
pub struct Analysis<'w> {
    window: &'w PiecewiseWindow,
    lattice: Lattice,
    settings: CheckSettings,
    terms: OnceLock<Result<LatticeTerms, PeriodizationError>>,
    g_tilde: OnceLock<Result<PeriodizedSamples, PeriodizationError>>,
}

impl<'w> Analysis<'w> {
    pub fn new(window: &'w PiecewiseWindow, lattice: Lattice, settings: CheckSettings) -> Self {
        Analysis {
            window,
            lattice,
            settings,
            terms: OnceLock::new(),
            g_tilde: OnceLock::new(),
        }
    }

    pub fn window(&self) -> &PiecewiseWindow {
        self.window
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn settings(&self) -> &CheckSettings {
        &self.settings
    }

    /// `G`, `H_k` and the cross sums on a shared grid.
    pub fn terms(&self) -> Result<&LatticeTerms, FrameError> {
        self.terms
            .get_or_init(|| {
                LatticeTerms::sample(
                    self.window,
                    self.lattice.a(),
                    self.lattice.b(),
                    self.settings.resolution,
                )
            })
            .as_ref()
            .map_err(|e| e.clone().into())
    }

    pub fn g_tilde(&self) -> Result<&PeriodizedSamples, FrameError> {
        self.g_tilde
            .get_or_init(|| {
                periodization::compute_g_tilde(self.window, self.lattice.b(), self.settings.resolution)
            })
            .as_ref()
            .map_err(|e| e.clone().into())
    }

    fn g_zero_set(&self) -> Result<ZeroSet, FrameError> {
        Ok(zero_set(&self.terms()?.g, self.settings.tol_zero))
    }

    /// Runs one checker. `claimed_b` is only used by PROP24.
    pub fn run(&self, id: ConditionId, claimed_b: Option<f64>) -> Result<ConditionReport, FrameError> {
        match id {
            ConditionId::Hw1 => self.hw1(),
            ConditionId::Hw4 => self.hw4(),
            ConditionId::Dsxw5 => self.dsxw5(),
            ConditionId::Thm21 => self.thm21(),
            ConditionId::Cor22 => self.cor22(),
            ConditionId::Prop23 => self.prop23().map(|r| r.0),
            ConditionId::Prop24 => self.prop24(claimed_b.ok_or(FrameError::MissingClaim(id))?),
            ConditionId::Thm12Translates => self.thm12_translates().map(|r| r.0),
            ConditionId::Cor13Modulates => self.cor13_modulates().map(|r| r.0),
            ConditionId::Thm25Wavelet => self.thm25_wavelet(),
        }
    }

    /// `0 < A ≤ G ≤ B` a.e.
    pub fn hw1(&self) -> Result<ConditionReport, FrameError> {
        let id = ConditionId::Hw1;
        let g = &self.terms()?.g;
        let e = extrema(id, g, &ZeroSet::empty(g.period))?;
        let positive = is_positive(e.inf.value, g.max_abs(), self.settings.tol_zero);
        Ok(ConditionReport::new(id, TargetSpace::WholeL2)
            .with_bounds(positive, e.inf.value, e.sup_full.value)
            .witness(Witness::at(e.inf, "inf_G"))
            .witness(Witness::at(e.sup_full, "sup_G")))
    }

    /// `Σ_{k≠0} ||H_k||_∞ < ess inf G`.
    pub fn hw4(&self) -> Result<ConditionReport, FrameError> {
        let id = ConditionId::Hw4;
        let terms = self.terms()?;
        let full = ZeroSet::empty(terms.g.period);
        let e = extrema(id, &terms.g, &full)?;
        let mut s = 0.0;
        for h in &terms.hk {
            s += extrema(id, &h.samples.map(f64::abs), &full)?.sup_full.value;
        }
        let b = self.lattice.b();
        let (a_g, b_g) = (e.inf.value, e.sup_full.value);
        let positive = is_positive(a_g, terms.g.max_abs(), self.settings.tol_zero) && s < a_g;
        Ok(ConditionReport::new(id, TargetSpace::WholeL2)
            .with_bounds(positive, (a_g - s) / b, (b_g + s) / b)
            .witness(Witness::at(e.inf, "inf_G"))
            .witness(Witness::at(e.sup_full, "sup_G"))
            .witness(Witness::scalar("sum_sup_abs_H", s)))
    }

    /// `sup Σ_{k≠0} Σ_n |g(x - na) g(x - na - k/b)| = D < ess inf G`.
    pub fn dsxw5(&self) -> Result<ConditionReport, FrameError> {
        let id = ConditionId::Dsxw5;
        let terms = self.terms()?;
        let full = ZeroSet::empty(terms.g.period);
        let e = extrema(id, &terms.g, &full)?;
        let d = extrema(id, &terms.abs_cross, &full)?.sup_full;
        let b = self.lattice.b();
        let (a_g, b_g) = (e.inf.value, e.sup_full.value);
        let positive = is_positive(a_g, terms.g.max_abs(), self.settings.tol_zero) && d.value < a_g;
        Ok(ConditionReport::new(id, TargetSpace::WholeL2)
            .with_bounds(positive, (a_g - d.value) / b, (b_g + d.value) / b)
            .witness(Witness::at(e.inf, "inf_G"))
            .witness(Witness::at(e.sup_full, "sup_G"))
            .witness(Witness::at(d, "D")))
    }

    /// `A = inf_{[0,a) - N_G} (G - Σ_{k≠0}|H_k|)`, `B = sup_{[0,a)} (G + Σ_{k≠0}|H_k|)`.
    pub fn thm21(&self) -> Result<ConditionReport, FrameError> {
        let id = ConditionId::Thm21;
        let terms = self.terms()?;
        let zeros = self.g_zero_set()?;
        let lower = terms.g.zip_with(&terms.cross, |g, c| g - c)?;
        let upper = terms.g.zip_with(&terms.cross, |g, c| g + c)?;
        let a_val = extrema(id, &lower, &zeros)?.inf;
        let b_val = extrema(id, &upper, &ZeroSet::empty(zeros.period))?.sup_full;
        let b = self.lattice.b();
        let positive = is_positive(a_val.value, terms.g.max_abs(), self.settings.tol_zero);
        Ok(ConditionReport::new(id, TargetSpace::L2MinusNG)
            .with_bounds(positive, a_val.value / b, b_val.value / b)
            .witness(Witness::at(a_val, "A"))
            .witness(Witness::at(b_val, "B"))
            .witness(Witness::scalar("measure_N_G", zeros.measure)))
    }

    /// Support in an interval of length at most `1/b`; then `G` alone decides.
    pub fn cor22(&self) -> Result<ConditionReport, FrameError> {
        let id = ConditionId::Cor22;
        let b = self.lattice.b();
        let len = self.window.support_length();
        let limit = 1.0 / b;
        if len > limit * (1.0 + 1e-12) {
            return Ok(ConditionReport::inapplicable(
                id,
                TargetSpace::L2MinusNG,
                format!("support hull has length {len}, more than 1/b = {limit}"),
                Witness::scalar("support_length", len),
            ));
        }
        let g = &self.terms()?.g;
        let zeros = self.g_zero_set()?;
        let e = extrema(id, g, &zeros)?;
        let positive = is_positive(e.inf.value, g.max_abs(), self.settings.tol_zero);
        Ok(ConditionReport::new(id, TargetSpace::L2MinusNG)
            .with_bounds(positive, e.inf.value / b, e.sup.value / b)
            .witness(Witness::scalar("support_length", len))
            .witness(Witness::at(e.inf, "inf_G"))
            .witness(Witness::at(e.sup, "sup_G"))
            .witness(Witness::scalar("measure_N_G", zeros.measure)))
    }

    /// First `n ≠ 0` for which `supp g` and `supp T_na g` overlap in a set
    /// of positive length.
    fn translate_overlap(&self) -> Option<i64> {
        let support = self.window.support();
        let a = self.lattice.a();
        let len = self.window.support_length();
        let slack = 1e-12 * (1.0 + len);
        let n_max = (len / a).ceil() as i64;
        (1..=n_max).find(|&n| {
            let t = n as f64 * a;
            support.iter().any(|&(lo, hi)| {
                support
                    .iter()
                    .any(|&(lo2, hi2)| lo < hi2 + t - slack && lo2 + t < hi - slack)
            })
        })
    }

    /// Disjoint translates; then `G~` decides frame and Riesz sequence.
    pub fn prop23(&self) -> Result<(ConditionReport, RieszVerdict), FrameError> {
        let id = ConditionId::Prop23;
        if let Some(n) = self.translate_overlap() {
            let report = ConditionReport::inapplicable(
                id,
                TargetSpace::SpanOnly,
                format!("supp g and supp T_na g overlap for n = {n}"),
                Witness::scalar("overlapping_n", n as f64),
            );
            let riesz = RieszVerdict {
                is_frame_sequence: false,
                is_riesz_sequence: false,
                zero_set_measure: f64::NAN,
            };
            return Ok((report, riesz));
        }
        let gt = self.g_tilde()?;
        let zeros = zero_set(gt, self.settings.tol_zero);
        let e = extrema(id, gt, &zeros)?;
        let b = self.lattice.b();
        let positive = is_positive(e.inf.value, gt.max_abs(), self.settings.tol_zero);
        let report = ConditionReport::new(id, TargetSpace::SpanOnly)
            .with_bounds(positive, e.inf.value / b, e.sup.value / b)
            .witness(Witness::at(e.inf, "inf_G_tilde"))
            .witness(Witness::at(e.sup, "sup_G_tilde"))
            .witness(Witness::scalar("measure_N_G_tilde", zeros.measure));
        let riesz = RieszVerdict::new(&report, &zeros, self.settings.riesz_tol);
        Ok((report, riesz))
    }

    /// Necessary condition `ess sup G~ ≤ B` for a claimed upper bound `B`.
    pub fn prop24(&self, claimed_b: f64) -> Result<ConditionReport, FrameError> {
        let id = ConditionId::Prop24;
        if !(claimed_b.is_finite() && claimed_b > 0.0) {
            return Err(FrameError::InvalidParameter {
                name: "claimed_B",
                requirement: "finite and positive",
                value: claimed_b,
            });
        }
        let gt = self.g_tilde()?;
        let sup = extrema(id, gt, &ZeroSet::empty(gt.period))?.sup_full;
        let ok = sup.value <= claimed_b + self.settings.bound_tol * claimed_b.max(1.0);
        let mut report = ConditionReport::new(id, TargetSpace::SpanOnly)
            .witness(Witness::at(sup, "sup_G_tilde"))
            .witness(Witness::scalar("claimed_B", claimed_b));
        report.verdict = if ok { Verdict::Satisfied } else { Verdict::NotSatisfied };
        report.upper_bound = Some(claimed_b);
        Ok(report)
    }

    /// The window read as `ĝ`: `{T_na g}` via `Φ(x) = Σ_n |ĝ((x + n)/a)|^2`.
    pub fn thm12_translates(&self) -> Result<(ConditionReport, RieszVerdict), FrameError> {
        let id = ConditionId::Thm12Translates;
        let a = self.lattice.a();
        let stretched = self.window.scale_argument(1.0 / a);
        let phi = periodization::compute_g(&stretched, 1.0, self.settings.resolution)?;
        let zeros = zero_set(&phi, self.settings.tol_zero);
        let e = extrema(id, &phi, &zeros)?;
        let positive = is_positive(e.inf.value, phi.max_abs(), self.settings.tol_zero);
        let report = ConditionReport::new(id, TargetSpace::SpanOnly)
            .with_bounds(positive, e.inf.value / a, e.sup.value / a)
            .witness(Witness::at(e.inf, "inf_Phi"))
            .witness(Witness::at(e.sup, "sup_Phi"))
            .witness(Witness::scalar("measure_N_Phi", zeros.measure));
        let riesz = RieszVerdict::new(&report, &zeros, self.settings.riesz_tol);
        Ok((report, riesz))
    }

    /// `{E_{n/a} g}` via `G` on `R - N_G`.
    pub fn cor13_modulates(&self) -> Result<(ConditionReport, RieszVerdict), FrameError> {
        let id = ConditionId::Cor13Modulates;
        let a = self.lattice.a();
        let g = &self.terms()?.g;
        let zeros = self.g_zero_set()?;
        let e = extrema(id, g, &zeros)?;
        let positive = is_positive(e.inf.value, g.max_abs(), self.settings.tol_zero);
        let report = ConditionReport::new(id, TargetSpace::SpanOnly)
            .with_bounds(positive, a * e.inf.value, a * e.sup.value)
            .witness(Witness::at(e.inf, "inf_G"))
            .witness(Witness::at(e.sup, "sup_G"))
            .witness(Witness::scalar("measure_N_G", zeros.measure));
        let riesz = RieszVerdict::new(&report, &zeros, self.settings.riesz_tol);
        Ok((report, riesz))
    }

    /// The window read as `ĝ`: dyadic-type wavelet system with dilation `a`
    /// and translation `b`, sampled over one scale period `|γ| ∈ [1, a)`.
    pub fn thm25_wavelet(&self) -> Result<ConditionReport, FrameError> {
        let id = ConditionId::Thm25Wavelet;
        let (a, b) = (self.lattice.a(), self.lattice.b());
        if a <= 1.0 {
            return Err(FrameError::InvalidParameter {
                name: "a",
                requirement: "greater than 1 for the wavelet check",
                value: a,
            });
        }
        let support = self.window.support();
        if let Some(&(lo, hi)) = support.iter().find(|&&(lo, hi)| lo <= 0.0 && 0.0 <= hi) {
            let at = if lo == 0.0 || hi == 0.0 { 0.0 } else { lo };
            return Err(FrameError::SupportTouchesZero { at });
        }
        let Some(hull) = self.window.support_hull() else {
            return Err(FrameError::EmptyDomain(id));
        };

        let scales = WaveletScales::new(self.window, hull, a, b);
        let mut lower: Option<periodization::Extremum> = None;
        let mut upper: Option<periodization::Extremum> = None;
        let mut report = ConditionReport::new(id, TargetSpace::SpanOnly);
        let mut scale = 0.0f64;
        for sign in [1.0, -1.0] {
            let name = if sign > 0.0 { "measure_N_pos" } else { "measure_N_neg" };
            let (s0, c) = scales.sample(sign, self.settings.resolution)?;
            scale = scale.max(s0.max_abs());
            let zeros = zero_set(&s0, self.settings.tol_zero);
            report = report.witness(Witness::scalar(name, zeros.measure));
            let up = s0.zip_with(&c, |s, c| s + c)?;
            let sup = extrema(id, &up, &ZeroSet::empty(up.period))?.sup_full;
            if upper.is_none_or(|u| sup.value > u.value) {
                upper = Some(sup);
            }
            if zeros.covers_period() {
                continue;
            }
            let low = s0.zip_with(&c, |s, c| s - c)?;
            let inf = extrema(id, &low, &zeros)?.inf;
            if lower.is_none_or(|l| inf.value < l.value) {
                lower = Some(inf);
            }
        }
        let (Some(lower), Some(upper)) = (lower, upper) else {
            return Err(FrameError::EmptyDomain(id));
        };
        // report |γ| rather than the sampling offset
        let shift = |e: periodization::Extremum| periodization::Extremum { x: e.x + 1.0, ..e };
        let positive = is_positive(lower.value, scale, self.settings.tol_zero);
        let mut report = report.with_bounds(positive, lower.value / b, upper.value / b);
        report.witnesses.insert(0, Witness::at(shift(upper), "B"));
        report.witnesses.insert(0, Witness::at(shift(lower), "A"));
        Ok(report)
    }
}

/// Scale sums `Σ_n |ĝ(a^n γ)|^2` and `Σ_{k≠0} Σ_n |ĝ(a^n γ) ĝ(a^n γ + k/b)|`
/// for a spectral window supported away from 0.
struct WaveletScales<'w> {
    window: &'w PiecewiseWindow,
    hull: (f64, f64),
    a: f64,
    b: f64,
}

impl<'w> WaveletScales<'w> {
    fn new(window: &'w PiecewiseWindow, hull: (f64, f64), a: f64, b: f64) -> Self {
        WaveletScales { window, hull, a, b }
    }

    /// Range of `n` such that `a^n |γ|`, `|γ| ∈ [1, a]`, can meet the support
    /// on the side of `sign`.
    fn n_range(&self, sign: f64) -> Option<(i64, i64)> {
        let (lo, hi) = self
            .window
            .support()
            .iter()
            .map(|&(lo, hi)| if sign > 0.0 { (lo, hi) } else { (-hi, -lo) })
            .filter(|&(_, hi)| hi > 0.0)
            .fold(None, |acc: Option<(f64, f64)>, (lo, hi)| {
                let lo = lo.max(0.0);
                Some(acc.map_or((lo, hi), |(l, h)| (l.min(lo), h.max(hi))))
            })?;
        let log_a = |v: f64| v.ln() / self.a.ln();
        Some(((log_a(lo) - 1.0).floor() as i64 - 1, log_a(hi).ceil() as i64 + 1))
    }

    fn k_range(&self, y: f64) -> (i64, i64) {
        (
            ((self.hull.0 - y) * self.b).floor() as i64,
            ((self.hull.1 - y) * self.b).ceil() as i64,
        )
    }

    /// Samples both sums over `t = |γ| - 1 ∈ [0, a - 1)`.
    fn sample(
        &self,
        sign: f64,
        resolution: usize,
    ) -> Result<(PeriodizedSamples, PeriodizedSamples), PeriodizationError> {
        let period = self.a - 1.0;
        let Some(range) = self.n_range(sign) else {
            let zero = periodization::sample_periodic(period, 0.0, [], resolution, |_, _| 0.0)?;
            return Ok((zero.clone(), zero));
        };
        let breaks = self.window.breakpoints();
        let k_span = (self.window.support_length() * self.b).ceil() as i64 + 1;
        let mut images = Vec::new();
        for n in range.0..=range.1 {
            let scale = self.a.powi(n as i32);
            for k in -k_span..=k_span {
                for &p in &breaks {
                    let gamma = sign * (p - k as f64 / self.b) / scale;
                    if (1.0..=self.a).contains(&gamma) {
                        images.push(gamma - 1.0);
                    }
                }
            }
        }
        // moving t to the right moves γ away from 0, i.e. leftwards when γ < 0
        let eval = |y: f64, side: Side| {
            let side = if sign > 0.0 { side } else { side.flip() };
            self.window.eval_limit(y, side)
        };
        let s0 = periodization::sample_periodic(period, 0.0, images.iter().copied(), resolution, |t, side| {
            (range.0..=range.1)
                .map(|n| eval(sign * self.a.powi(n as i32) * (1.0 + t), side).powi(2))
                .sum()
        })?;
        let cross = periodization::sample_periodic(period, 0.0, images, resolution, |t, side| {
            let mut total = 0.0;
            for n in range.0..=range.1 {
                let y = sign * self.a.powi(n as i32) * (1.0 + t);
                let v = eval(y, side);
                if v == 0.0 {
                    continue;
                }
                let (k_lo, k_hi) = self.k_range(y);
                for k in (k_lo..=k_hi).filter(|&k| k != 0) {
                    total += (v * eval(y + k as f64 / self.b, side)).abs();
                }
            }
            total
        })?;
        Ok((s0, cross))
    }
}

fn lattice(a: f64, b: f64) -> Result<Lattice, FrameError> {
    Lattice::new(a, b).map_err(|_| {
        let (name, value) = if a.is_finite() && a > 0.0 { ("b", b) } else { ("a", a) };
        FrameError::InvalidParameter { name, requirement: "finite and positive", value }
    })
}

pub fn check_condition1(
    w: &PiecewiseWindow,
    a: f64,
    settings: &CheckSettings,
) -> Result<ConditionReport, FrameError> {
    // only G is needed; b = 1 keeps the lattice valid without adding work
    Analysis::new(w, lattice(a, 1.0)?, *settings).hw1()
}

pub fn check_condition4(
    w: &PiecewiseWindow,
    a: f64,
    b: f64,
    settings: &CheckSettings,
) -> Result<ConditionReport, FrameError> {
    Analysis::new(w, lattice(a, b)?, *settings).hw4()
}

pub fn check_condition5(
    w: &PiecewiseWindow,
    a: f64,
    b: f64,
    settings: &CheckSettings,
) -> Result<ConditionReport, FrameError> {
    Analysis::new(w, lattice(a, b)?, *settings).dsxw5()
}

pub fn theorem21_bounds(
    w: &PiecewiseWindow,
    a: f64,
    b: f64,
    settings: &CheckSettings,
) -> Result<ConditionReport, FrameError> {
    Analysis::new(w, lattice(a, b)?, *settings).thm21()
}

pub fn corollary22_check(
    w: &PiecewiseWindow,
    a: f64,
    b: f64,
    settings: &CheckSettings,
) -> Result<ConditionReport, FrameError> {
    Analysis::new(w, lattice(a, b)?, *settings).cor22()
}

pub fn prop23_check(
    w: &PiecewiseWindow,
    a: f64,
    b: f64,
    settings: &CheckSettings,
) -> Result<(ConditionReport, RieszVerdict), FrameError> {
    Analysis::new(w, lattice(a, b)?, *settings).prop23()
}

pub fn prop24_necessary(
    w: &PiecewiseWindow,
    b: f64,
    claimed_b: f64,
    settings: &CheckSettings,
) -> Result<ConditionReport, FrameError> {
    Analysis::new(w, lattice(1.0, b)?, *settings).prop24(claimed_b)
}

pub fn translates_frame_check(
    spectral: &PiecewiseWindow,
    a: f64,
    settings: &CheckSettings,
) -> Result<(ConditionReport, RieszVerdict), FrameError> {
    Analysis::new(spectral, lattice(a, 1.0)?, *settings).thm12_translates()
}

pub fn modulates_frame_check(
    w: &PiecewiseWindow,
    a: f64,
    settings: &CheckSettings,
) -> Result<(ConditionReport, RieszVerdict), FrameError> {
    Analysis::new(w, lattice(a, 1.0)?, *settings).cor13_modulates()
}

pub fn theorem25_wavelet(
    spectral: &PiecewiseWindow,
    a: f64,
    b: f64,
    settings: &CheckSettings,
) -> Result<ConditionReport, FrameError> {
    Analysis::new(spectral, lattice(a, b)?, *settings).thm25_wavelet()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{example_epsilon, example_orthonormal, example_thm21, indicator};
    use crate::window::Piece;
    use approx::assert_relative_eq;

    fn s() -> CheckSettings {
        CheckSettings::default()
    }

    fn ramp(hi: f64) -> PiecewiseWindow {
        PiecewiseWindow::new(vec![Piece::poly(0.0, hi, [0.0, 1.0])]).unwrap()
    }

    fn bounds(r: &ConditionReport) -> (f64, f64) {
        (r.lower_bound.unwrap(), r.upper_bound.unwrap())
    }

    #[test]
    fn ids_round_trip() {
        for id in ConditionId::ALL {
            assert_eq!(id.as_str().parse::<ConditionId>().unwrap(), id);
            let json = serde_json_like(id);
            assert_eq!(json, id.as_str());
        }
        assert!("HW-2".parse::<ConditionId>().is_err());
    }

    #[test]
    fn reports_use_the_id_target_space() {
        let w = indicator(1.0, 1.5);
        let an = Analysis::new(&w, Lattice::new(2.0, 1.0).unwrap(), s());
        for id in ConditionId::ALL {
            let r = an.run(id, Some(10.0)).unwrap();
            assert_eq!(r.target_space, id.target_space(), "{id}");
        }
        let r = ConditionReport::precondition_unmet(ConditionId::Prop24, "no claim".into());
        assert_eq!(r.verdict, Verdict::Inapplicable);
        assert_eq!(r.target_space, TargetSpace::SpanOnly);
    }

    // serde names must equal the display names
    fn serde_json_like(id: ConditionId) -> String {
        use serde::de::value::{Error, StrDeserializer};
        use serde::de::IntoDeserializer;
        let de: StrDeserializer<'_, Error> = id.as_str().into_deserializer();
        let back = ConditionId::deserialize(de).unwrap();
        back.as_str().to_string()
    }

    #[test]
    fn condition1_examples() {
        let r = check_condition1(&indicator(0.0, 1.0), 1.0, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Satisfied);
        assert_eq!(bounds(&r), (1.0, 1.0));

        let r = check_condition1(&example_thm21(), 1.0, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Satisfied);
        let (lo, hi) = bounds(&r);
        assert_relative_eq!(lo, 1.25, epsilon = 1e-12);
        assert_relative_eq!(hi, 5.0, epsilon = 1e-12);

        // time side of the ε-window: G = x^2 on [0, ε)
        let r = check_condition1(&example_epsilon(0.2, 0.3).unwrap(), 1.0, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::NotSatisfied);
        assert!(r.witness_value("inf_G").unwrap().abs() < 1e-12);
    }

    #[test]
    fn condition4_examples() {
        let r = check_condition4(&example_thm21(), 1.0, 1.0, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::NotSatisfied);
        assert_relative_eq!(r.witness_value("sum_sup_abs_H").unwrap(), 4.0, epsilon = 1e-12);
        assert_relative_eq!(r.witness_value("inf_G").unwrap(), 1.25, epsilon = 1e-12);

        let r = check_condition4(&indicator(0.0, 1.0), 1.0, 1.0, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Satisfied);
        assert_eq!(bounds(&r), (1.0, 1.0));

        let r = check_condition4(&example_orthonormal(), 2.0, 1.0, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::NotSatisfied);
    }

    #[test]
    fn condition5_examples() {
        let r = check_condition5(&example_thm21(), 1.0, 1.0, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::NotSatisfied);
        assert_relative_eq!(r.witness_value("D").unwrap(), 4.0, epsilon = 1e-12);

        let r = check_condition5(&indicator(0.0, 1.0), 1.0, 1.0, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Satisfied);
        assert_eq!(r.witness_value("D"), Some(0.0));
        assert_eq!(bounds(&r), (1.0, 1.0));
    }

    #[test]
    fn theorem21_examples() {
        let r = theorem21_bounds(&example_thm21(), 1.0, 1.0, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Satisfied);
        assert_eq!(r.target_space, TargetSpace::L2MinusNG);
        let (lo, hi) = bounds(&r);
        assert_relative_eq!(lo, 0.25, epsilon = 1e-12);
        assert_relative_eq!(hi, 9.0, epsilon = 1e-12);

        let r = theorem21_bounds(&indicator(0.0, 1.0), 1.0, 1.0, &s()).unwrap();
        assert_eq!(bounds(&r), (1.0, 1.0));

        let err = theorem21_bounds(&PiecewiseWindow::empty(), 1.0, 1.0, &s()).unwrap_err();
        assert_eq!(err, FrameError::EmptyDomain(ConditionId::Thm21));
    }

    #[test]
    fn corollary22_examples() {
        let r = corollary22_check(&indicator(0.0, 1.0), 1.0, 1.0, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Satisfied);
        assert_eq!(bounds(&r), (1.0, 1.0));

        let r = corollary22_check(&ramp(0.5), 1.0, 1.0, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::NotSatisfied);

        let r = corollary22_check(&example_thm21(), 1.0, 1.0, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Inapplicable);
        assert!(r.reason.is_some());
        assert_eq!(r.witness_value("support_length"), Some(2.0));
    }

    #[test]
    fn prop23_examples() {
        let b = 0.3;
        let (r, riesz) = prop23_check(&example_epsilon(0.2, b).unwrap(), 1.0, b, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Satisfied);
        let (lo, hi) = bounds(&r);
        assert_relative_eq!(lo, 1.0 / b, max_relative = 1e-12);
        assert_relative_eq!(hi, 1.0 / b, max_relative = 1e-12);
        assert!(riesz.is_frame_sequence && !riesz.is_riesz_sequence);
        assert_relative_eq!(riesz.zero_set_measure, 1.0 / b - 0.2, epsilon = 1e-9);

        let (r, riesz) = prop23_check(&example_orthonormal(), 2.0, 1.0, &s()).unwrap();
        let (lo, hi) = bounds(&r);
        assert_relative_eq!(lo, 1.0, epsilon = 1e-12);
        assert_relative_eq!(hi, 1.0, epsilon = 1e-12);
        assert!(riesz.is_riesz_sequence);

        let (r, riesz) = prop23_check(&example_thm21(), 1.0, 1.0, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Inapplicable);
        assert!(!riesz.is_frame_sequence);
    }

    #[test]
    fn prop24_examples() {
        let r = prop24_necessary(&example_orthonormal(), 1.0, 1.0, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Satisfied);

        let r = prop24_necessary(&indicator(0.0, 1.0), 1.0, 0.5, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::NotSatisfied);
        assert_eq!(r.witness_value("sup_G_tilde"), Some(1.0));

        let r = prop24_necessary(&example_thm21(), 1.0, 1.25, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::NotSatisfied);
        assert_relative_eq!(r.witness_value("sup_G_tilde").unwrap(), 5.0, epsilon = 1e-12);

        assert!(prop24_necessary(&example_thm21(), 1.0, 0.0, &s()).is_err());
    }

    #[test]
    fn translates_examples() {
        let (r, riesz) = translates_frame_check(&indicator(0.0, 1.0), 1.0, &s()).unwrap();
        assert_eq!(bounds(&r), (1.0, 1.0));
        assert!(riesz.is_riesz_sequence);

        let (r, riesz) = translates_frame_check(&indicator(0.0, 0.5), 1.0, &s()).unwrap();
        assert_eq!(bounds(&r), (1.0, 1.0));
        assert!(riesz.is_frame_sequence && !riesz.is_riesz_sequence);
        assert_relative_eq!(riesz.zero_set_measure, 0.5, epsilon = 1e-12);

        let (r, _) = translates_frame_check(&ramp(1.0), 1.0, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::NotSatisfied);
    }

    #[test]
    fn modulates_examples() {
        let (r, riesz) = modulates_frame_check(&indicator(0.0, 1.0), 1.0, &s()).unwrap();
        assert_eq!(bounds(&r), (1.0, 1.0));
        assert!(riesz.is_riesz_sequence);

        let (r, riesz) = modulates_frame_check(&example_thm21(), 1.0, &s()).unwrap();
        let (lo, hi) = bounds(&r);
        assert_relative_eq!(lo, 1.25, epsilon = 1e-12);
        assert_relative_eq!(hi, 5.0, epsilon = 1e-12);
        assert!(riesz.is_riesz_sequence);

        let (r, _) = modulates_frame_check(&ramp(1.0), 1.0, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::NotSatisfied);
    }

    /// Brute-force scale sums at a single `γ`, enumerating a wide box of
    /// `n` and `k` without any support arithmetic.
    fn brute_wavelet(w: &PiecewiseWindow, a: f64, b: f64, gamma: f64) -> (f64, f64) {
        let mut s0 = 0.0;
        let mut c = 0.0;
        for n in -30..=30 {
            let y = a.powi(n) * gamma;
            let v = w.eval(y);
            s0 += v * v;
            for k in -60..=60 {
                if k != 0 {
                    c += (v * w.eval(y + k as f64 / b)).abs();
                }
            }
        }
        (s0, c)
    }

    fn brute_bounds(w: &PiecewiseWindow, a: f64, b: f64) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for sign in [1.0, -1.0] {
            for i in 0..2000 {
                let gamma = sign * (1.0 + (a - 1.0) * (i as f64 + 0.5) / 2000.0);
                let (s0, c) = brute_wavelet(w, a, b, gamma);
                if s0 > 0.0 {
                    lo = lo.min(s0 - c);
                }
                hi = hi.max(s0 + c);
            }
        }
        (lo / b, hi / b)
    }

    #[test]
    fn wavelet_matches_brute_force() {
        let shannon = PiecewiseWindow::new(vec![
            Piece::poly(-2.0, -1.0, [1.0]),
            Piece::poly(1.0, 2.0, [1.0]),
        ])
        .unwrap();
        let cases = [
            (shannon, 2.0, 1.0),
            (indicator(1.0, 2.0), 2.0, 1.0),
            (indicator(1.0, 4.0), 2.0, 1.0),
            (indicator(1.0, 2.0), 2.0, 0.5),
        ];
        for (w, a, b) in cases {
            let r = theorem25_wavelet(&w, a, b, &s()).unwrap();
            let (lo, hi) = brute_bounds(&w, a, b);
            let a_val = r.witness_value("A").unwrap() / b;
            let b_val = r.upper_bound.unwrap();
            assert!((a_val - lo).abs() < 1e-12, "{w:?}: A {a_val} vs {lo}");
            assert!((b_val - hi).abs() < 1e-12, "{w:?}: B {b_val} vs {hi}");
        }
    }

    #[test]
    fn wavelet_single_band() {
        let r = theorem25_wavelet(&indicator(1.0, 2.0), 2.0, 1.0, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Satisfied);
        assert_eq!(bounds(&r), (1.0, 1.0));
        assert_eq!(r.witness_value("measure_N_pos"), Some(0.0));
        assert_eq!(r.witness_value("measure_N_neg"), Some(1.0));
    }

    #[test]
    fn wavelet_rejects_bad_input() {
        assert!(matches!(
            theorem25_wavelet(&indicator(-1.0, 1.0), 2.0, 1.0, &s()),
            Err(FrameError::SupportTouchesZero { .. })
        ));
        assert!(matches!(
            theorem25_wavelet(&indicator(0.0, 1.0), 2.0, 1.0, &s()),
            Err(FrameError::SupportTouchesZero { .. })
        ));
        assert!(theorem25_wavelet(&indicator(1.0, 2.0), 1.0, 1.0, &s()).is_err());
    }

    #[test]
    fn invalid_lattice_is_rejected() {
        assert!(matches!(
            check_condition4(&example_thm21(), 1.0, -1.0, &s()),
            Err(FrameError::InvalidParameter { name: "b", .. })
        ));
        assert!(check_condition1(&example_thm21(), 0.0, &s()).is_err());
    }

    #[test]
    fn satisfied_reports_are_consistent() {
        let windows = [indicator(0.0, 1.0), example_thm21(), example_orthonormal()];
        for w in &windows {
            for (a, b) in [(1.0, 1.0), (0.5, 0.75), (2.0, 1.0)] {
                let analysis = Analysis::new(w, Lattice::new(a, b).unwrap(), s());
                for id in ConditionId::ALL.into_iter().filter(|id| !id.is_spectral()) {
                    let Ok(r) = analysis.run(id, Some(10.0)) else { continue };
                    if r.verdict == Verdict::Satisfied && id != ConditionId::Prop24 {
                        let (lo, hi) = bounds(&r);
                        assert!(lo > 0.0 && lo <= hi, "{id} {lo} {hi}");
                    }
                    if r.verdict == Verdict::Inapplicable {
                        assert!(r.reason.is_some());
                    }
                }
            }
        }
    }

    #[test]
    fn uniform_bound_implies_pointwise_bound() {
        for (a, b) in [(1.0, 1.0), (0.5, 1.5), (0.75, 0.6)] {
            let w = example_thm21();
            let analysis = Analysis::new(&w, Lattice::new(a, b).unwrap(), s());
            let d5 = analysis.dsxw5().unwrap();
            let h4 = analysis.hw4().unwrap();
            let t = analysis.thm21().unwrap();
            for r in [&d5, &h4] {
                if r.verdict == Verdict::Satisfied {
                    assert_eq!(t.verdict, Verdict::Satisfied);
                    assert!(t.lower_bound.unwrap() >= r.lower_bound.unwrap() - 1e-12);
                    assert!(t.upper_bound.unwrap() <= r.upper_bound.unwrap() + 1e-12);
                }
            }
        }
    }

    #[test]
    fn short_support_makes_thm21_and_cor22_agree() {
        let w = PiecewiseWindow::new(vec![Piece::poly(0.2, 0.9, [1.0, -0.5, 0.25])]).unwrap();
        for (a, b) in [(0.5, 1.0), (0.7, 1.2), (1.0, 1.0)] {
            let analysis = Analysis::new(&w, Lattice::new(a, b).unwrap(), s());
            let t = analysis.thm21().unwrap();
            let c = analysis.cor22().unwrap();
            assert_eq!(t.verdict, c.verdict, "a = {a}, b = {b}");
            if t.verdict == Verdict::Satisfied {
                assert_relative_eq!(t.lower_bound.unwrap(), c.lower_bound.unwrap(), epsilon = 1e-12);
                assert_relative_eq!(t.upper_bound.unwrap(), c.upper_bound.unwrap(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn translation_by_a_changes_nothing() {
        let w = example_thm21();
        let (a, b) = (0.75, 0.8);
        let lattice = Lattice::new(a, b).unwrap();
        let moved = w.translate(3.0 * a);
        let base = Analysis::new(&w, lattice, s());
        let shifted = Analysis::new(&moved, lattice, s());
        for id in ConditionId::ALL.into_iter().filter(|id| !id.is_spectral()) {
            let (r1, r2) = (base.run(id, Some(12.0)).unwrap(), shifted.run(id, Some(12.0)).unwrap());
            assert_eq!(r1.verdict, r2.verdict, "{id}");
            for (u, v) in [(r1.lower_bound, r2.lower_bound), (r1.upper_bound, r2.upper_bound)] {
                match (u, v) {
                    (Some(u), Some(v)) => assert!((u - v).abs() <= 1e-10, "{id}: {u} vs {v}"),
                    (None, None) => {}
                    _ => panic!("{id}: bound presence differs"),
                }
            }
        }
    }
}
