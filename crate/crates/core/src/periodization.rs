//! Periodized power and correlation functions of a window.
//!
//! For a compactly supported window `g` and steps `a, b > 0`:
//!
//! * `G(x)  = Σ_n |g(x - na)|^2`, period `a`;
//! * `G~(x) = Σ_m |g(x + m/b)|^2`, period `1/b`;
//! * `H_k(x) = Σ_n g(x - na) g(x - na - k/b)`, period `a`.
//!
//! All sums are finite and their index ranges come from support arithmetic.
//! Functions are sampled on a uniform grid merged with every image of a
//! piece boundary, and one-sided limits are recorded at those images, so
//! essential extrema of these piecewise-continuous functions are read off the
//! samples without missing values attained only as limits.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::window::{PiecewiseWindow, Side};

pub const DEFAULT_RESOLUTION: usize = 4096;
pub const DEFAULT_TOL_ZERO: f64 = 1e-12;

/// Points of one period closer than this (relative to the period) are merged.
const MERGE_REL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PeriodizationError {
    #[error("{name} must be finite and positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("resolution must be at least 2")]
    Resolution,
    #[error("sample sets have different grids")]
    GridMismatch,
    #[error("exclusion set period {exclude} does not match sample period {samples}")]
    PeriodMismatch { samples: f64, exclude: f64 },
    #[error("the excluded set covers the whole period; extrema are undefined")]
    EmptyDomain,
}

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<(), PeriodizationError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(PeriodizationError::NonPositive { name, value })
    }
}

/// Left and right limits at a piece-boundary image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryLimit {
    pub index: usize,
    pub x: f64,
    pub left: f64,
    pub right: f64,
}

/// A periodic function sampled on one period `[0, period)`.
///
/// `values[i]` is the right limit at `grid[i]`; at boundary images the left
/// limit is stored in `boundary_limits`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodizedSamples {
    pub period: f64,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub boundary_limits: Vec<BoundaryLimit>,
}

impl PeriodizedSamples {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Left limit at grid point `i`.
    pub fn left(&self, i: usize) -> f64 {
        match self.boundary_limits.binary_search_by_key(&i, |b| b.index) {
            Ok(pos) => self.boundary_limits[pos].left,
            Err(_) => self.values[i],
        }
    }

    /// Largest magnitude among values and limits.
    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .chain(self.boundary_limits.iter().map(|b| &b.left))
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// End of cell `i`, i.e. the next grid point or the period.
    fn cell_end(&self, i: usize) -> f64 {
        self.grid.get(i + 1).copied().unwrap_or(self.period)
    }

    /// Value at `x` taken from the nearest sample at or before it. Only used
    /// for re-evaluation checks.
    pub fn sample_at(&self, x: f64) -> f64 {
        let x = x.rem_euclid(self.period);
        let i = self.grid.partition_point(|&g| g <= x).saturating_sub(1);
        self.values[i]
    }

    /// Pointwise combination of two sample sets sharing a grid.
    pub fn zip_with(
        &self,
        other: &PeriodizedSamples,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<PeriodizedSamples, PeriodizationError> {
        if self.grid != other.grid || self.period != other.period {
            return Err(PeriodizationError::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(&u, &v)| f(u, v)).collect();
        let boundary_limits = self
            .boundary_limits
            .iter()
            .zip(&other.boundary_limits)
            .map(|(p, q)| BoundaryLimit {
                index: p.index,
                x: p.x,
                left: f(p.left, q.left),
                right: f(p.right, q.right),
            })
            .collect();
        Ok(PeriodizedSamples {
            period: self.period,
            grid: self.grid.clone(),
            values,
            boundary_limits,
        })
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> PeriodizedSamples {
        PeriodizedSamples {
            period: self.period,
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
            boundary_limits: self
                .boundary_limits
                .iter()
                .map(|b| BoundaryLimit { left: f(b.left), right: f(b.right), ..*b })
                .collect(),
        }
    }
}

/// Reduces `breakpoints` modulo `period`, merges them with a uniform grid and
/// samples `f` (with one-sided limits at the breakpoints).
///
/// The uniform grid passes through `origin` (modulo the period) and always
/// contains 0. Anchoring it at a feature of the sampled function, such as
/// the left end of a window, makes the samples move along when the function
/// is translated.
pub fn sample_periodic<F>(
    period: f64,
    origin: f64,
    breakpoints: impl IntoIterator<Item = f64>,
    resolution: usize,
    f: F,
) -> Result<PeriodizedSamples, PeriodizationError>
where
    F: Fn(f64, Side) -> f64 + Sync,
{
    require_positive("period", period)?;
    if resolution < 2 {
        return Err(PeriodizationError::Resolution);
    }
    let merge = MERGE_REL * period;
    let mut breaks: Vec<f64> = breakpoints
        .into_iter()
        .filter(|p| p.is_finite())
        .map(|p| {
            let r = p.rem_euclid(period);
            if r > period - merge { 0.0 } else { r }
        })
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() <= merge);

    // (x, is_breakpoint)
    let step = period / resolution as f64;
    let mut offset = if origin.is_finite() { origin.rem_euclid(step) } else { 0.0 };
    if offset > step - merge {
        offset = 0.0;
    }
    let mut uniform = Vec::with_capacity(resolution + 1);
    if offset > merge {
        uniform.push(0.0);
    }
    uniform.extend((0..resolution).map(|i| offset + i as f64 * step));
    let mut points: Vec<(f64, bool)> = Vec::with_capacity(uniform.len() + breaks.len());
    let mut bi = 0;
    for u in uniform {
        while bi < breaks.len() && breaks[bi] < u - merge {
            points.push((breaks[bi], true));
            bi += 1;
        }
        if bi < breaks.len() && (breaks[bi] - u).abs() <= merge {
            points.push((breaks[bi], true));
            bi += 1;
        } else {
            points.push((u, false));
        }
    }
    points.extend(breaks[bi..].iter().map(|&p| (p, true)));

    let evaluated: Vec<(f64, Option<f64>)> = points
        .par_iter()
        .map(|&(x, is_break)| (f(x, Side::Right), is_break.then(|| f(x, Side::Left))))
        .collect();

    let grid: Vec<f64> = points.iter().map(|p| p.0).collect();
    let values: Vec<f64> = evaluated.iter().map(|e| e.0).collect();
    let boundary_limits = evaluated
        .iter()
        .enumerate()
        .filter_map(|(index, &(right, left))| {
            left.map(|left| BoundaryLimit { index, x: grid[index], left, right })
        })
        .collect();
    Ok(PeriodizedSamples { period, grid, values, boundary_limits })
}

/// Inclusive range of `n` for which `w(x - n·step)` can be non-zero for some
/// `x ∈ [0, period]`.
pub(crate) fn translate_range(hull: (f64, f64), step: f64, period: f64) -> (i64, i64) {
    let lo = ((0.0 - hull.1) / step).floor() as i64 - 1;
    let hi = ((period - hull.0) / step).ceil() as i64 + 1;
    (lo, hi)
}

/// Largest `|k|` for which `w` and `T_{k/b} w` can overlap.
pub(crate) fn max_shift_index(w: &PiecewiseWindow, b: f64) -> i64 {
    (w.support_length() * b).ceil() as i64
}

/// `Σ_n |w(x - n·step)|^2` as a one-sided limit.
pub(crate) fn power_sum(w: &PiecewiseWindow, step: f64, range: (i64, i64), x: f64, side: Side) -> f64 {
    (range.0..=range.1)
        .map(|n| w.eval_limit(x - n as f64 * step, side).powi(2))
        .sum()
}

/// `Σ_n w(x - na) w(x - na - shift)` as a one-sided limit.
pub(crate) fn correlation(
    w: &PiecewiseWindow,
    a: f64,
    shift: f64,
    range: (i64, i64),
    x: f64,
    side: Side,
) -> f64 {
    (range.0..=range.1)
        .map(|n| {
            let y = x - n as f64 * a;
            w.eval_limit(y, side) * w.eval_limit(y - shift, side)
        })
        .sum()
}

/// `Σ_n |w(x - na) w(x - na - shift)|` as a one-sided limit.
pub(crate) fn abs_correlation(
    w: &PiecewiseWindow,
    a: f64,
    shift: f64,
    range: (i64, i64),
    x: f64,
    side: Side,
) -> f64 {
    (range.0..=range.1)
        .map(|n| {
            let y = x - n as f64 * a;
            (w.eval_limit(y, side) * w.eval_limit(y - shift, side)).abs()
        })
        .sum()
}

fn power_periodization(
    w: &PiecewiseWindow,
    period: f64,
    resolution: usize,
) -> Result<PeriodizedSamples, PeriodizationError> {
    let Some(hull) = w.support_hull() else {
        return sample_periodic(period, 0.0, [], resolution, |_, _| 0.0);
    };
    let range = translate_range(hull, period, period);
    sample_periodic(period, hull.0, w.breakpoints(), resolution, |x, side| {
        power_sum(w, period, range, x, side)
    })
}

/// `G(x) = Σ_n |w(x - na)|^2` on `[0, a)`.
pub fn compute_g(
    w: &PiecewiseWindow,
    a: f64,
    resolution: usize,
) -> Result<PeriodizedSamples, PeriodizationError> {
    require_positive("a", a)?;
    power_periodization(w, a, resolution)
}

/// `G~(x) = Σ_m |w(x + m/b)|^2` on `[0, 1/b)`.
pub fn compute_g_tilde(
    w: &PiecewiseWindow,
    b: f64,
    resolution: usize,
) -> Result<PeriodizedSamples, PeriodizationError> {
    require_positive("b", b)?;
    power_periodization(w, 1.0 / b, resolution)
}

/// `H_k` sampled on one period of length `a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSamples {
    pub k: i64,
    pub samples: PeriodizedSamples,
}

/// Breakpoints shared by `G` and every `H_k`, `|k| <= k_max`.
pub(crate) fn lattice_breakpoints(w: &PiecewiseWindow, b: f64, k_max: i64) -> Vec<f64> {
    let base = w.breakpoints();
    (-k_max..=k_max)
        .flat_map(|k| base.iter().map(move |&p| p + k as f64 / b))
        .collect()
}

/// `H_k(x) = Σ_n w(x - na) w(x - na - k/b)` on `[0, a)`.
pub fn compute_hk(
    w: &PiecewiseWindow,
    a: f64,
    b: f64,
    k: i64,
    resolution: usize,
) -> Result<CorrelationSamples, PeriodizationError> {
    require_positive("a", a)?;
    require_positive("b", b)?;
    let breaks: Vec<f64> = w
        .breakpoints()
        .into_iter()
        .flat_map(|p| [p, p + k as f64 / b])
        .collect();
    let samples = match w.support_hull() {
        None => sample_periodic(a, 0.0, breaks, resolution, |_, _| 0.0)?,
        Some(hull) => {
            let range = translate_range(hull, a, a);
            let shift = k as f64 / b;
            sample_periodic(a, hull.0, breaks, resolution, |x, side| {
                correlation(w, a, shift, range, x, side)
            })?
        }
    };
    Ok(CorrelationSamples { k, samples })
}

/// `Σ_{k≠0} |H_k(x)|` on `[0, a)`.
pub fn cross_term_sum(
    w: &PiecewiseWindow,
    a: f64,
    b: f64,
    resolution: usize,
) -> Result<PeriodizedSamples, PeriodizationError> {
    Ok(LatticeTerms::sample(w, a, b, resolution)?.cross)
}

/// `G`, `H_k` and the two cross-term sums on one shared grid, so they can be
/// combined pointwise.
#[derive(Debug, Clone)]
pub struct LatticeTerms {
    pub g: PeriodizedSamples,
    /// `H_k` for every `k ≠ 0` whose translates can overlap.
    pub hk: Vec<CorrelationSamples>,
    /// `Σ_{k≠0} |H_k|`.
    pub cross: PeriodizedSamples,
    /// `Σ_{k≠0} Σ_n |g(x - na) g(x - na - k/b)|`.
    pub abs_cross: PeriodizedSamples,
}

impl LatticeTerms {
    pub fn sample(
        w: &PiecewiseWindow,
        a: f64,
        b: f64,
        resolution: usize,
    ) -> Result<LatticeTerms, PeriodizationError> {
        require_positive("a", a)?;
        require_positive("b", b)?;
        let k_max = max_shift_index(w, b);
        let breaks = lattice_breakpoints(w, b, k_max);
        let Some(hull) = w.support_hull() else {
            let zero = sample_periodic(a, 0.0, breaks, resolution, |_, _| 0.0)?;
            return Ok(LatticeTerms {
                g: zero.clone(),
                hk: Vec::new(),
                cross: zero.clone(),
                abs_cross: zero,
            });
        };
        let range = translate_range(hull, a, a);
        let g = sample_periodic(a, hull.0, breaks.iter().copied(), resolution, |x, side| {
            power_sum(w, a, range, x, side)
        })?;
        let ks: Vec<i64> = (-k_max..=k_max).filter(|&k| k != 0).collect();
        let hk = ks
            .iter()
            .map(|&k| {
                let shift = k as f64 / b;
                sample_periodic(a, hull.0, breaks.iter().copied(), resolution, |x, side| {
                    correlation(w, a, shift, range, x, side)
                })
                .map(|samples| CorrelationSamples { k, samples })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut cross = g.map(|_| 0.0);
        for h in &hk {
            cross = cross.zip_with(&h.samples, |acc, v| acc + v.abs())?;
        }
        let abs_cross = sample_periodic(a, hull.0, breaks.iter().copied(), resolution, |x, side| {
            ks.iter()
                .map(|&k| abs_correlation(w, a, k as f64 / b, range, x, side))
                .sum()
        })?;
        Ok(LatticeTerms { g, hk, cross, abs_cross })
    }
}

/// Subintervals of one period on which a sampled function vanishes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    pub period: f64,
    pub intervals: Vec<(f64, f64)>,
    pub measure: f64,
}

impl ZeroSet {
    pub fn empty(period: f64) -> ZeroSet {
        ZeroSet { period, intervals: Vec::new(), measure: 0.0 }
    }

    /// Whether `x` (reduced modulo the period) lies in the set.
    pub fn contains(&self, x: f64) -> bool {
        let x = x.rem_euclid(self.period);
        let i = self.intervals.partition_point(|iv| iv.0 <= x);
        i > 0 && x < self.intervals[i - 1].1
    }

    pub fn covers_period(&self) -> bool {
        self.measure >= self.period * (1.0 - MERGE_REL)
    }
}

/// Cells `[x_i, x_{i+1})` whose right value at `x_i` and left limit at
/// `x_{i+1}` both lie below `tol_zero · max|values|`. Cell endpoints are grid
/// points, so zero-set edges land exactly on boundary images.
pub fn zero_set(p: &PeriodizedSamples, tol_zero: f64) -> ZeroSet {
    let threshold = tol_zero.max(0.0) * p.max_abs();
    let n = p.len();
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    for i in 0..n {
        let end_left = if i + 1 < n { p.left(i + 1) } else { p.left(0) };
        if p.values[i].abs() <= threshold && end_left.abs() <= threshold {
            let (lo, hi) = (p.grid[i], p.cell_end(i));
            match intervals.last_mut() {
                Some(last) if last.1 == lo => last.1 = hi,
                _ => intervals.push((lo, hi)),
            }
        }
    }
    let measure = intervals.iter().fold(0.0, |acc, (lo, hi)| acc + (hi - lo));
    ZeroSet { period: p.period, intervals, measure }
}

/// An extreme value together with where it was found.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub value: f64,
    pub x: f64,
    pub side: Side,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extrema {
    /// Essential infimum outside the excluded set.
    pub inf: Extremum,
    /// Essential supremum outside the excluded set.
    pub sup: Extremum,
    /// Essential supremum over the whole period, ignoring the exclusion.
    pub sup_full: Extremum,
}

/// Essential infimum and supremum over grid values and one-sided limits.
///
/// A right value at `x_i` belongs to cell `i`, a left limit to cell `i - 1`;
/// a candidate is used only when its cell lies outside `exclude`.
pub fn essential_extrema(
    p: &PeriodizedSamples,
    exclude: &ZeroSet,
) -> Result<Extrema, PeriodizationError> {
    if (exclude.period - p.period).abs() > MERGE_REL * p.period {
        return Err(PeriodizationError::PeriodMismatch {
            samples: p.period,
            exclude: exclude.period,
        });
    }
    let n = p.len();
    let excluded: Vec<bool> = (0..n)
        .map(|i| exclude.contains(0.5 * (p.grid[i] + p.cell_end(i))))
        .collect();

    let mut inf: Option<Extremum> = None;
    let mut sup: Option<Extremum> = None;
    let mut sup_full: Option<Extremum> = None;
    let mut visit = |value: f64, x: f64, side: Side, allowed: bool| {
        let e = Extremum { value, x, side };
        if sup_full.is_none_or(|s| value > s.value) {
            sup_full = Some(e);
        }
        if allowed {
            if inf.is_none_or(|s| value < s.value) {
                inf = Some(e);
            }
            if sup.is_none_or(|s| value > s.value) {
                sup = Some(e);
            }
        }
    };
    let mut limits = p.boundary_limits.iter().peekable();
    for i in 0..n {
        visit(p.values[i], p.grid[i], Side::Right, !excluded[i]);
        let prev_cell = if i == 0 { n - 1 } else { i - 1 };
        match limits.peek() {
            Some(b) if b.index == i => {
                visit(b.left, p.grid[i], Side::Left, !excluded[prev_cell]);
                limits.next();
            }
            _ => {
                // continuous point: the value also closes the previous cell
                if excluded[i] && !excluded[prev_cell] {
                    visit(p.values[i], p.grid[i], Side::Left, true);
                }
            }
        }
    }
    match (inf, sup, sup_full) {
        (Some(inf), Some(sup), Some(sup_full)) => Ok(Extrema { inf, sup, sup_full }),
        _ => Err(PeriodizationError::EmptyDomain),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use approx::assert_relative_eq;

    const RES: usize = DEFAULT_RESOLUTION;

    fn value_at(p: &PeriodizedSamples, x: f64, side: Side) -> f64 {
        let i = p.grid.iter().position(|&g| (g - x).abs() < 1e-12).expect("grid point");
        match side {
            Side::Right => p.values[i],
            Side::Left => p.left(i),
        }
    }

    #[test]
    fn g_of_box_is_one() {
        let g = compute_g(&catalog::indicator(0.0, 1.0), 1.0, RES).unwrap();
        assert!(g.values.iter().all(|&v| v == 1.0));
        assert!(zero_set(&g, DEFAULT_TOL_ZERO).intervals.is_empty());
    }

    #[test]
    fn g_of_example_thm21() {
        let g = compute_g(&catalog::example_thm21(), 1.0, RES).unwrap();
        assert_relative_eq!(value_at(&g, 0.0, Side::Right), 1.25, epsilon = 1e-15);
        assert_relative_eq!(value_at(&g, 0.5, Side::Right), 2.8125, epsilon = 1e-15);
        // closed form 5/4 (1+x)^2 everywhere on the grid
        for (&x, &v) in g.grid.iter().zip(&g.values) {
            assert_relative_eq!(v, 1.25 * (1.0 + x).powi(2), max_relative = 1e-14);
        }
        assert_relative_eq!(value_at(&g, 0.0, Side::Left), 5.0, epsilon = 1e-14);
    }

    #[test]
    fn g_tilde_examples() {
        let gt = compute_g_tilde(&catalog::example_orthonormal(), 1.0, RES).unwrap();
        for &v in &gt.values {
            assert_relative_eq!(v, 1.0, epsilon = 1e-14);
        }
        let gt = compute_g_tilde(&catalog::indicator(0.0, 1.0), 1.0, RES).unwrap();
        assert!(gt.values.iter().all(|&v| v == 1.0));

        let b = 0.3;
        let gt = compute_g_tilde(&catalog::example_epsilon(0.2, b).unwrap(), b, RES).unwrap();
        for (&x, &v) in gt.grid.iter().zip(&gt.values) {
            if x > 0.2 + 1e-12 {
                assert_eq!(v, 0.0, "x = {x}");
            } else if x < 0.2 - 1e-12 {
                assert_relative_eq!(v, 1.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn hk_examples() {
        let w = catalog::example_thm21();
        let h1 = compute_hk(&w, 1.0, 1.0, 1, RES).unwrap();
        let hm1 = compute_hk(&w, 1.0, 1.0, -1, RES).unwrap();
        let sum = value_at(&h1.samples, 0.5, Side::Right).abs()
            + value_at(&hm1.samples, 0.5, Side::Right).abs();
        assert_relative_eq!(sum, 2.25, epsilon = 1e-14);

        let boxw = catalog::indicator(0.0, 1.0);
        let h = compute_hk(&boxw, 1.0, 1.0, 1, RES).unwrap();
        assert!(h.samples.values.iter().all(|&v| v == 0.0));
        assert!(h.samples.boundary_limits.iter().all(|l| l.left == 0.0));

        let h0 = compute_hk(&w, 1.0, 1.0, 0, RES).unwrap();
        let g = compute_g(&w, 1.0, RES).unwrap();
        assert_eq!(h0.samples.grid, g.grid);
        for (u, v) in h0.samples.values.iter().zip(&g.values) {
            assert_relative_eq!(u, v, epsilon = 1e-14);
        }
    }

    #[test]
    fn cross_term_sum_examples() {
        let s = cross_term_sum(&catalog::example_thm21(), 1.0, 1.0, RES).unwrap();
        assert_relative_eq!(value_at(&s, 0.0, Side::Right), 1.0, epsilon = 1e-14);
        // the 1^- limit is stored as the left limit at the wrapped point 0
        assert_relative_eq!(value_at(&s, 0.0, Side::Left), 4.0, epsilon = 1e-14);
        let s = cross_term_sum(&catalog::indicator(0.0, 1.0), 1.0, 1.0, RES).unwrap();
        assert_eq!(s.max_abs(), 0.0);
    }

    #[test]
    fn rejects_nonpositive_steps() {
        let w = catalog::example_thm21();
        assert!(compute_g(&w, 0.0, RES).is_err());
        assert!(compute_g_tilde(&w, -1.0, RES).is_err());
        assert!(compute_hk(&w, 1.0, 0.0, 1, RES).is_err());
        assert!(cross_term_sum(&w, -1.0, 1.0, RES).is_err());
    }

    #[test]
    fn zero_set_examples() {
        let b = 0.3;
        let gt = compute_g_tilde(&catalog::example_epsilon(0.2, b).unwrap(), b, RES).unwrap();
        let z = zero_set(&gt, DEFAULT_TOL_ZERO);
        assert_eq!(z.intervals.len(), 1);
        assert_relative_eq!(z.intervals[0].0, 0.2, epsilon = 1e-12);
        assert_relative_eq!(z.intervals[0].1, 1.0 / b, epsilon = 1e-12);
        assert_relative_eq!(z.measure, 1.0 / b - 0.2, epsilon = 1e-12);

        let zero = compute_g(&PiecewiseWindow::empty(), 1.5, 64).unwrap();
        let z = zero_set(&zero, DEFAULT_TOL_ZERO);
        assert_eq!(z.measure, 1.5);
        assert!(z.covers_period());
    }

    #[test]
    fn extrema_examples() {
        let g = compute_g(&catalog::example_thm21(), 1.0, RES).unwrap();
        let e = essential_extrema(&g, &ZeroSet::empty(1.0)).unwrap();
        assert_relative_eq!(e.inf.value, 1.25, epsilon = 1e-15);
        assert_relative_eq!(e.sup.value, 5.0, epsilon = 1e-14);
        assert_eq!(e.sup.side, Side::Left);

        let g = compute_g(&catalog::indicator(0.0, 1.0), 1.0, RES).unwrap();
        let e = essential_extrema(&g, &ZeroSet::empty(1.0)).unwrap();
        assert_eq!((e.inf.value, e.sup.value), (1.0, 1.0));

        // G = x^2 near 0 on the nonzero set: infimum 0, not attained
        let w = catalog::example_epsilon(0.2, 0.3).unwrap();
        let g = compute_g(&w, 1.0, RES).unwrap();
        let z = zero_set(&g, DEFAULT_TOL_ZERO);
        assert!(z.measure > 0.0);
        let e = essential_extrema(&g, &z).unwrap();
        assert!(e.inf.value.abs() < 1e-12);
        assert!(e.sup.value > 0.9);
    }

    #[test]
    fn extrema_errors() {
        let zero = compute_g(&PiecewiseWindow::empty(), 1.0, 64).unwrap();
        let z = zero_set(&zero, DEFAULT_TOL_ZERO);
        assert_eq!(essential_extrema(&zero, &z), Err(PeriodizationError::EmptyDomain));
        let g = compute_g(&catalog::example_thm21(), 1.0, 64).unwrap();
        assert!(matches!(
            essential_extrema(&g, &ZeroSet::empty(2.0)),
            Err(PeriodizationError::PeriodMismatch { .. })
        ));
    }

    #[test]
    fn periodicity_on_reevaluation() {
        let w = catalog::example_orthonormal();
        let a = 0.7;
        let g = compute_g(&w, a, 512).unwrap();
        let hull = w.support_hull().unwrap();
        let range = translate_range(hull, a, 3.0 * a);
        for (&x, &v) in g.grid.iter().zip(&g.values) {
            let shifted = power_sum(&w, a, range, x + a, Side::Right);
            assert!((shifted - v).abs() <= 1e-12, "x = {x}");
        }
    }
}
