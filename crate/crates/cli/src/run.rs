//! Executes an analysis request.

use std::path::PathBuf;

use thiserror::Error;
use whframe::catalog::Builtin;
use whframe::conditions::{Analysis, CheckSettings, FrameError};
use whframe::oracle::gram::{eigen_extremes, gram_matrix, identity_deviation};
use whframe::oracle::test_function::tent;
use whframe::oracle::{
    bump_probe, frame_ratio_probe, walnut_identity_check, GaborSystem, OracleError, OracleQuantity, OracleReport,
    TestFunction,
};
use whframe::window::WindowError;
use whframe::{ConditionId, ConditionReport, Lattice, PiecewiseWindow, Side, Verdict};

use crate::report::{
    AnalysisReport, ConditionEntry, Discrepancy, DiscrepancyKind, ReferenceCheck, RequestEcho, SCHEMA_VERSION,
};
use crate::spec::{parse_window_spec, SpecError};

#[derive(Debug, Clone, PartialEq)]
pub enum WindowSource {
    Builtin(Builtin),
    File(PathBuf),
}

/// Sizes of the finite sections used by the oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSizes {
    /// `|m|, |n| ≤ gram` for the Gram matrix.
    pub gram: usize,
    /// `|m|, |n| ≤ probe` for random span elements.
    pub probe: usize,
    pub trials: usize,
}

impl Default for OracleSizes {
    fn default() -> Self {
        OracleSizes { gram: 5, probe: 3, trials: 100 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisRequest {
    pub window_source: WindowSource,
    /// Defaults to the built-in lattice, or `a = b = 1` for files.
    pub lattice: Option<(f64, f64)>,
    pub checks: Vec<ConditionId>,
    /// The checks were requested one by one; unmet preconditions are errors.
    pub explicit: bool,
    pub oracle: bool,
    pub settings: CheckSettings,
    pub seed: u64,
    pub sizes: OracleSizes,
    pub claimed_b: Option<f64>,
}

impl AnalysisRequest {
    pub fn builtin(b: Builtin) -> Self {
        AnalysisRequest {
            window_source: WindowSource::Builtin(b),
            lattice: None,
            checks: ConditionId::ALL.to_vec(),
            explicit: false,
            oracle: false,
            settings: CheckSettings::default(),
            seed: 0,
            sizes: OracleSizes::default(),
            claimed_b: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid window spec: {0}")]
    Spec(#[from] SpecError),
    #[error("invalid lattice: {0}")]
    Lattice(WindowError),
    #[error("{id}: precondition unmet: {reason}")]
    Precondition { id: ConditionId, reason: String, report: Option<Box<AnalysisReport>> },
    #[error("oracle failed: {0}")]
    Oracle(#[from] OracleError),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Io { .. } | RunError::Spec(_) | RunError::Lattice(_) => 2,
            RunError::Precondition { .. } => 3,
            RunError::Oracle(_) => 4,
        }
    }
}

/// Checkers whose bounds are frame bounds of `{E_mb T_na g}` (on all of
/// `L^2`, on `L^2(R - N_G)`, or on the span), so oracle ratios must respect them.
const GABOR_BOUNDS: [ConditionId; 5] =
    [ConditionId::Hw4, ConditionId::Dsxw5, ConditionId::Thm21, ConditionId::Cor22, ConditionId::Prop23];

/// Sources for a PROP24 claim, in order of preference.
const CLAIM_SOURCES: [ConditionId; 3] = [ConditionId::Thm21, ConditionId::Cor22, ConditionId::Prop23];

const GRAM_TOL: f64 = 1e-6;
const RATIO_TOL: f64 = 1e-3;
const REFERENCE_TOL: f64 = 1e-6;

fn load_window(source: &WindowSource, lattice: &Lattice) -> Result<(PiecewiseWindow, String), RunError> {
    match source {
        WindowSource::Builtin(b) => Ok((b.window(lattice), b.name().to_string())),
        WindowSource::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| RunError::Io { path: path.clone(), source })?;
            Ok((parse_window_spec(&text)?, path.display().to_string()))
        }
    }
}

fn run_condition(an: &Analysis<'_>, id: ConditionId, claimed: Option<f64>) -> Result<ConditionEntry, FrameError> {
    let mut entry = match id {
        ConditionId::Prop23 => {
            let (report, rz) = an.prop23()?;
            ConditionEntry { report, riesz: Some(rz) }
        }
        ConditionId::Thm12Translates => {
            let (report, rz) = an.thm12_translates()?;
            ConditionEntry { report, riesz: Some(rz) }
        }
        ConditionId::Cor13Modulates => {
            let (report, rz) = an.cor13_modulates()?;
            ConditionEntry { report, riesz: Some(rz) }
        }
        _ => ConditionEntry { report: an.run(id, claimed)?, riesz: None },
    };
    if entry.report.verdict == Verdict::Inapplicable {
        entry.riesz = None;
    }
    Ok(entry)
}

/// Upper bound handed to PROP24: the user's claim, else the first
/// `Satisfied` upper bound among THM21, COR22, PROP23.
fn claim_for_prop24(an: &Analysis<'_>, done: &[ConditionEntry], user: Option<f64>) -> Option<f64> {
    if user.is_some() {
        return user;
    }
    CLAIM_SOURCES.iter().find_map(|&id| {
        let report = match done.iter().find(|e| e.report.condition_id == id) {
            Some(e) => e.report.clone(),
            None => an.run(id, None).ok()?,
        };
        (report.verdict == Verdict::Satisfied).then_some(report.upper_bound).flatten()
    })
}

pub fn run(request: &AnalysisRequest) -> Result<AnalysisReport, RunError> {
    let (a, b) = match (request.lattice, &request.window_source) {
        (Some(l), _) => l,
        (None, WindowSource::Builtin(bi)) => {
            let l = bi.default_lattice();
            (l.a(), l.b())
        }
        (None, WindowSource::File(_)) => (1.0, 1.0),
    };
    let lattice = Lattice::new(a, b).map_err(RunError::Lattice)?;
    let (window, name) = load_window(&request.window_source, &lattice)?;

    let mut checks: Vec<ConditionId> = Vec::new();
    for &id in &request.checks {
        if !checks.contains(&id) {
            checks.push(id);
        }
    }
    let an = Analysis::new(&window, lattice, request.settings);
    // PROP24 reads its claim from the others, so it runs last
    let mut order = checks.clone();
    order.sort_by_key(|&id| id == ConditionId::Prop24);
    let mut entries: Vec<ConditionEntry> = Vec::new();
    let mut unmet: Option<(ConditionId, String)> = None;
    for &id in &order {
        let claimed = if id == ConditionId::Prop24 { claim_for_prop24(&an, &entries, request.claimed_b) } else { None };
        let entry = match run_condition(&an, id, claimed) {
            Ok(e) => e,
            Err(err) => ConditionEntry { report: ConditionReport::precondition_unmet(id, err.to_string()), riesz: None },
        };
        if entry.report.verdict == Verdict::Inapplicable && unmet.is_none() {
            unmet = Some((id, entry.report.reason.clone().unwrap_or_default()));
        }
        entries.push(entry);
    }
    entries.sort_by_key(|e| checks.iter().position(|&c| c == e.report.condition_id));

    let oracle = if request.oracle { oracle_reports(&an, request)? } else { Vec::new() };

    let mut report = AnalysisReport {
        schema: SCHEMA_VERSION,
        version: env!("CARGO_PKG_VERSION").to_string(),
        request: RequestEcho {
            window: name,
            a,
            b,
            checks,
            oracle: request.oracle,
            resolution: request.settings.resolution,
            tol_zero: request.settings.tol_zero,
            seed: request.seed,
            trials: request.sizes.trials,
            claimed_b: request.claimed_b,
        },
        conditions: entries,
        oracle,
        references: Vec::new(),
        discrepancies: Vec::new(),
    };
    if let WindowSource::Builtin(bi) = request.window_source {
        report.references = reference_checks(bi, &lattice, &report);
    }
    report.discrepancies = discrepancies(&report);

    if request.explicit {
        if let Some((id, reason)) = unmet {
            return Err(RunError::Precondition { id, reason, report: Some(Box::new(report)) });
        }
    }
    Ok(report)
}

fn oracle_reports(an: &Analysis<'_>, request: &AnalysisRequest) -> Result<Vec<OracleReport>, RunError> {
    let window = an.window().clone();
    let lattice = an.lattice();
    let sizes = request.sizes;
    let mut out = Vec::new();

    if let Some((lo, hi)) = window.support_hull() {
        let sys = GaborSystem::square(window.clone(), lattice, sizes.gram, sizes.gram)?;
        out.push(walnut_identity_check(&TestFunction::piecewise(tent(lo, hi)), &sys)?.with("tent_lo", lo).with("tent_hi", hi));
    }

    let sys = GaborSystem::square(window.clone(), lattice, sizes.gram, sizes.gram)?;
    let gram = gram_matrix(&sys)?;
    let (lmin, lmax) = eigen_extremes(&gram, 1e-10)?;
    let size = sys.len() as f64;
    out.push(OracleReport::new(OracleQuantity::GramLambdaMin, lmin).with("atoms", size).with("rank_tol", 1e-10));
    out.push(OracleReport::new(OracleQuantity::GramLambdaMax, lmax).with("atoms", size));
    out.push(OracleReport::new(OracleQuantity::GramIdentityDeviation, identity_deviation(&gram)).with("atoms", size));

    let sys = GaborSystem::square(window.clone(), lattice, sizes.probe, sizes.probe)?;
    if sizes.trials > 0 {
        let probe = frame_ratio_probe(&sys, sizes.trials, request.seed)?;
        out.extend(probe.reports(request.seed));
    }

    // a narrow bump next to the peak of G, on the side where the peak is attained
    if let Ok(hw1) = an.hw1() {
        if let Some(peak) = hw1.witnesses.iter().find(|w| w.quantity == "sup_G") {
            if let (Some(x), Some(side)) = (peak.x, peak.side) {
                let step = 0.01 * lattice.a();
                let center = if side == Side::Left { x - step } else { x + step };
                let r = bump_probe(&sys, center, 0.9 * step)?;
                out.push(r.with("bump", 1.0));
            }
        }
    }
    Ok(out)
}

fn reference_checks(bi: Builtin, lattice: &Lattice, report: &AnalysisReport) -> Vec<ReferenceCheck> {
    if *lattice != bi.default_lattice() && bi != Builtin::ExampleEpsilon {
        return Vec::new();
    }
    bi.reference_values(lattice)
        .into_iter()
        .map(|rv| {
            let computed = report.condition(rv.condition).and_then(|e| match rv.quantity.as_str() {
                "lower_bound" => e.report.lower_bound,
                "upper_bound" => e.report.upper_bound,
                q => e.report.witness_value(q),
            });
            let agrees = computed.is_some_and(|c| (c - rv.value).abs() <= REFERENCE_TOL * rv.value.abs().max(1.0));
            ReferenceCheck { condition: rv.condition, quantity: rv.quantity, published: rv.value, computed, agrees }
        })
        .collect()
}

fn discrepancies(report: &AnalysisReport) -> Vec<Discrepancy> {
    let mut out = Vec::new();
    for rc in &report.references {
        if let (Some(c), false) = (rc.computed, rc.agrees) {
            out.push(Discrepancy {
                kind: DiscrepancyKind::ReferenceMismatch,
                condition: rc.condition,
                quantity: rc.quantity.clone(),
                expected: rc.published,
                observed: c,
                message: format!(
                    "{} {}: published {}, computed {}",
                    rc.condition,
                    rc.quantity,
                    crate::report::num(rc.published),
                    crate::report::num(c)
                ),
            });
        }
    }

    // (value, tolerance, label) of oracle evidence
    let mut above: Vec<(f64, f64, String)> = Vec::new();
    let mut below: Vec<(f64, String)> = Vec::new();
    for o in &report.oracle {
        match o.quantity {
            OracleQuantity::GramLambdaMax => above.push((o.value, GRAM_TOL, "Gram lambda_max".into())),
            OracleQuantity::RayleighRatio => {
                let label = if o.metadata.contains_key("bump") {
                    "bump Rayleigh ratio"
                } else if o.metadata.get("upper") == Some(&1.0) {
                    "max probe ratio"
                } else {
                    below.push((o.value, "min probe ratio".into()));
                    continue;
                };
                above.push((o.value, RATIO_TOL, label.into()));
            }
            _ => {}
        }
    }

    for e in &report.conditions {
        let r = &e.report;
        if !GABOR_BOUNDS.contains(&r.condition_id) || r.verdict != Verdict::Satisfied {
            continue;
        }
        if let Some(upper) = r.upper_bound {
            for (v, tol, label) in &above {
                if *v > upper + tol * upper.max(1.0) {
                    out.push(Discrepancy {
                        kind: DiscrepancyKind::OracleAboveUpperBound,
                        condition: r.condition_id,
                        quantity: "upper_bound".into(),
                        expected: upper,
                        observed: *v,
                        message: format!(
                            "{}: {label} {} exceeds upper bound {}",
                            r.condition_id,
                            crate::report::num(*v),
                            crate::report::num(upper)
                        ),
                    });
                }
            }
        }
        if let Some(lower) = r.lower_bound {
            for (v, label) in &below {
                if *v < lower - RATIO_TOL * lower.max(1.0) {
                    out.push(Discrepancy {
                        kind: DiscrepancyKind::OracleBelowLowerBound,
                        condition: r.condition_id,
                        quantity: "lower_bound".into(),
                        expected: lower,
                        observed: *v,
                        message: format!(
                            "{}: {label} {} is below lower bound {}",
                            r.condition_id,
                            crate::report::num(*v),
                            crate::report::num(lower)
                        ),
                    });
                }
            }
        }
    }

    for rc in report.references.iter().filter(|rc| rc.quantity == "upper_bound") {
        for (v, _, label) in above.iter().filter(|(_, tol, _)| *tol == RATIO_TOL) {
            if *v > rc.published + RATIO_TOL * rc.published.max(1.0) {
                out.push(Discrepancy {
                    kind: DiscrepancyKind::OracleAbovePublishedBound,
                    condition: rc.condition,
                    quantity: rc.quantity.clone(),
                    expected: rc.published,
                    observed: *v,
                    message: format!(
                        "{}: {label} {} exceeds the published upper bound {}",
                        rc.condition,
                        crate::report::num(*v),
                        crate::report::num(rc.published)
                    ),
                });
            }
        }
    }
    out
}
