//! Composite Gauss–Legendre quadrature with global adaptive bisection.
//!
//! Panels are kept in a max-heap keyed by their local error estimate (the
//! difference between the one-panel rule and the sum over its two halves).
//! The worst panel is bisected until the summed error estimate drops under
//! `max(rel_tol * |I|, abs_tol)`. Processing order only depends on the
//! integrand values, so results are reproducible bit for bit.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};

/// Nodes per panel.
pub const PANEL_ORDER: usize = 32;

/// Node/weight pairs of an `n`-point Gauss–Legendre rule on [-1, 1].
pub fn legendre_rule(n: usize) -> Vec<(f64, f64)> {
    let mut pairs = GaussLegendre::new(n)
        .expect("Gauss-Legendre degree must be >= 2")
        .into_node_weight_pairs();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

fn panel_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule(PANEL_ORDER))
}

/// Applies a rule given on [-1, 1] to the interval [a, b].
pub fn apply_rule<F>(rule: &[(f64, f64)], a: f64, b: f64, f: &mut F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for &(x, w) in rule {
        acc += w * f(mid + half * x)?;
    }
    Ok(acc * half)
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Panels narrower than this are never split further.
    pub min_width: f64,
    pub max_panels: usize,
    /// Number of equal panels the interval is cut into before adapting.
    pub initial_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-15,
            min_width: 1e-8,
            max_panels: 20_000,
            initial_panels: 4,
        }
    }
}

impl QuadOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn evaluate_panel<F>(a: f64, b: f64, f: &mut F) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let rule = panel_rule();
    let m = 0.5 * (a + b);
    let whole = apply_rule(rule, a, b, f)?;
    let left = apply_rule(rule, a, m, f)?;
    let right = apply_rule(rule, m, b, f)?;
    let value = left + right;
    Ok(Panel {
        a,
        b,
        value,
        error: (whole - value).abs(),
    })
}

/// Adaptive integral of a fallible integrand over [a, b].
///
/// Returns [`Error::NoConvergence`] carrying the partial value when the
/// tolerance cannot be met within the panel budget or width floor.
pub fn integrate<F>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::InvalidParameter(format!(
            "quadrature bounds [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            panels: 0,
        });
    }
    let n0 = opts.initial_panels.max(1);
    let width = (b - a) / n0 as f64;
    let mut heap = BinaryHeap::with_capacity(2 * n0);
    for i in 0..n0 {
        let lo = a + width * i as f64;
        let hi = if i + 1 == n0 { b } else { lo + width };
        heap.push(evaluate_panel(lo, hi, &mut f)?);
    }

    loop {
        let (value, error) = totals(&heap);
        let target = (opts.rel_tol * value.abs()).max(opts.abs_tol);
        if error <= target {
            return Ok(Estimate {
                value,
                error,
                panels: heap.len(),
            });
        }
        let worst = heap.peek().expect("heap is never empty");
        if heap.len() >= opts.max_panels || worst.b - worst.a < 2.0 * opts.min_width {
            return Err(Error::NoConvergence {
                partial: value,
                error_estimate: error,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let m = 0.5 * (worst.a + worst.b);
        heap.push(evaluate_panel(worst.a, m, &mut f)?);
        heap.push(evaluate_panel(m, worst.b, &mut f)?);
    }
}

/// Infallible convenience wrapper around [`integrate`].
pub fn integrate_real<F>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    integrate(|x| Ok(f(x)), a, b, opts)
}

// Totals are recomputed in sorted-by-position order so the sum does not
// depend on heap layout.
fn totals(heap: &BinaryHeap<Panel>) -> (f64, f64) {
    let mut parts: Vec<(f64, f64, f64)> = heap.iter().map(|p| (p.a, p.value, p.error)).collect();
    parts.sort_by(|x, y| x.0.total_cmp(&y.0));
    let values: Vec<f64> = parts.iter().map(|p| p.1).collect();
    let errors: Vec<f64> = parts.iter().map(|p| p.2).collect();
    (pairwise_sum(&values), pairwise_sum(&errors))
}

/// Pairwise (cascade) summation; the reduction tree depends only on the
/// slice length.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if xs.len() <= BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact_on_one_panel() {
        let est = integrate_real(|x| x.powi(7) - 3.0 * x * x, 0.0, 2.0, &QuadOptions::default())
            .unwrap();
        assert!((est.value - (32.0 - 8.0)).abs() < 1e-12);
    }

    #[test]
    fn log_singularity_refines() {
        // ∫_0^1 ln x dx = -1
        let est = integrate_real(|x| x.ln(), 0.0, 1.0, &QuadOptions::with_rel_tol(1e-9)).unwrap();
        assert!((est.value + 1.0).abs() < 1e-8, "{est:?}");
        assert!(est.panels > 4);
    }

    #[test]
    fn non_integrable_reports_partial_value() {
        let err = integrate_real(|x| 1.0 / x, 0.0, 1.0, &QuadOptions::default()).unwrap_err();
        match err {
            Error::NoConvergence { partial, .. } => assert!(partial > 10.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn oscillatory() {
        let est =
            integrate_real(|x| (40.0 * x).sin().powi(2), 0.0, PI, &QuadOptions::default()).unwrap();
        assert!((est.value - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn errors_propagate() {
        let err = integrate(
            |x| if x > 0.5 { Err(Error::GapClosed { k: x }) } else { Ok(x) },
            0.0,
            1.0,
            &QuadOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::GapClosed { .. }));
    }

    #[test]
    fn pairwise_sum_matches_naive_on_integers() {
        let xs: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 500_500.0);
    }
}
