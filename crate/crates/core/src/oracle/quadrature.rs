//! Composite Gauss–Legendre rules on panels between breakpoints.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;

use super::OracleError;

/// Nodes per chunk; a panel is split into as many chunks as it needs.
const CHUNK: usize = 32;

/// Panels needing more nodes than this are refused.
pub const NODE_BUDGET: usize = 1 << 18;

fn reference_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let rule = GaussLegendre::new(NonZeroUsize::new(CHUNK).expect("non-zero"));
        let mut pairs = rule.as_node_weight_pairs().to_vec();
        pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
        pairs
    })
}

/// A quadrature node and its weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub x: f64,
    pub w: f64,
}

/// Appends a rule on `[lo, hi]` with at least `min_nodes` nodes.
///
/// An endpoint flagged as a square-root singularity is removed by the
/// substitution `x = end ∓ u^2`, which turns `sqrt(x - end)` into a smooth
/// function of `u`; such panels get twice the nodes. With both ends singular
/// the panel is halved first.
pub fn push_panel(
    out: &mut Vec<Node>,
    lo: f64,
    hi: f64,
    min_nodes: usize,
    singular_lo: bool,
    singular_hi: bool,
) -> Result<(), OracleError> {
    if hi <= lo {
        return Ok(());
    }
    if min_nodes > NODE_BUDGET {
        return Err(OracleError::ResolutionInsufficient { needed: min_nodes, budget: NODE_BUDGET });
    }
    if singular_lo && singular_hi {
        let mid = 0.5 * (lo + hi);
        push_panel(out, lo, mid, min_nodes.div_ceil(2), true, false)?;
        return push_panel(out, mid, hi, min_nodes.div_ceil(2), false, true);
    }
    let rule = reference_rule();
    if singular_lo || singular_hi {
        let chunks = (2 * min_nodes).div_ceil(CHUNK).max(1);
        let u_max = (hi - lo).sqrt();
        let h = u_max / chunks as f64;
        for c in 0..chunks {
            let (u0, u1) = (c as f64 * h, (c + 1) as f64 * h);
            let (mid, half) = (0.5 * (u0 + u1), 0.5 * (u1 - u0));
            for &(t, wt) in rule {
                let u = mid + half * t;
                let w = wt * half * 2.0 * u;
                let x = if singular_lo { lo + u * u } else { hi - u * u };
                out.push(Node { x, w });
            }
        }
        return Ok(());
    }
    let chunks = min_nodes.div_ceil(CHUNK).max(1);
    let h = (hi - lo) / chunks as f64;
    for c in 0..chunks {
        let a = lo + c as f64 * h;
        let (mid, half) = (a + 0.5 * h, 0.5 * h);
        out.extend(rule.iter().map(|&(t, wt)| Node { x: mid + half * t, w: wt * half }));
    }
    Ok(())
}

/// Nodes for a composite rule over `[lo, hi]`, with panels cut at every
/// breakpoint inside. `nodes_for(len)` gives the node count for a panel of
/// length `len`.
pub fn composite(
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    singular: &[f64],
    nodes_for: impl Fn(f64) -> usize,
) -> Result<Vec<Node>, OracleError> {
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&p| lo < p && p < hi).collect();
    cuts.push(lo);
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    let merge = 1e-13 * (1.0 + lo.abs().max(hi.abs()));
    cuts.dedup_by(|a, b| (*a - *b).abs() <= merge);
    let near_singular = |x: f64| {
        let tol = 1e-10 * (1.0 + x.abs());
        singular.iter().any(|&s| (s - x).abs() <= tol)
    };
    let mut out = Vec::new();
    for pair in cuts.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        push_panel(&mut out, a, b, nodes_for(b - a), near_singular(a), near_singular(b))?;
    }
    Ok(out)
}

/// Node count for an integrand oscillating at most at `freq` cycles per unit
/// length over a panel of length `len`.
pub fn oscillatory_nodes(freq: f64, len: f64) -> usize {
    (10.0 + 4.0 * freq.abs() * len).ceil() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn integrate(nodes: &[Node], f: impl Fn(f64) -> f64) -> f64 {
        nodes.iter().map(|n| n.w * f(n.x)).sum()
    }

    #[test]
    fn polynomials_are_exact() {
        let nodes = composite(-1.0, 2.0, &[0.5], &[], |_| 10).unwrap();
        assert_relative_eq!(integrate(&nodes, |x| x.powi(7)), (2f64.powi(8) - 1.0) / 8.0, max_relative = 1e-14);
    }

    #[test]
    fn square_root_endpoints() {
        // ∫_0^1 sqrt(x) dx and ∫_0^1 sqrt(x (1 - x)) dx
        let nodes = composite(0.0, 1.0, &[], &[0.0], |_| 32).unwrap();
        assert_relative_eq!(integrate(&nodes, f64::sqrt), 2.0 / 3.0, max_relative = 1e-14);
        let nodes = composite(0.0, 1.0, &[], &[0.0, 1.0], |_| 32).unwrap();
        let exact = std::f64::consts::PI / 8.0;
        assert_relative_eq!(integrate(&nodes, |x| (x * (1.0 - x)).sqrt()), exact, max_relative = 1e-13);
    }

    #[test]
    fn oscillatory_integrand() {
        let freq = 300.0;
        let nodes = composite(0.0, 1.3, &[], &[], |len| oscillatory_nodes(freq, len)).unwrap();
        let w = 2.0 * std::f64::consts::PI * freq;
        let got = integrate(&nodes, |x| (w * x).cos());
        assert!((got - (w * 1.3).sin() / w).abs() < 1e-14);
    }

    #[test]
    fn budget_is_enforced() {
        let err = composite(0.0, 1.0, &[], &[], |_| NODE_BUDGET + 1).unwrap_err();
        assert!(matches!(err, OracleError::ResolutionInsufficient { .. }));
    }
}
