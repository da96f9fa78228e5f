//! Real-space form of the optimal circuit generator.
//!
//! The generator for the pair `(k, −k)` is proportional to `Δθ(k)`. Written
//! in real space it couples sites `j` and `j+n` with strength `ω_n`, where
//!
//! ```text
//! Δθ(k) = 2 Σ_{n≥1} ω_n sin(nk),   ω_n = (1/π) ∫_0^π Δθ(k) sin(nk) dk.
//! ```
//!
//! Within a phase `Δθ` vanishes at `k = 0` and `k = π` and the `ω_n` decay
//! fast, so the circuit is local. Across a transition `Δθ(π) = ±π/2`, the
//! odd extension jumps, `ω_n ~ 1/n`, and no finite range is uniformly
//! accurate.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::complexity::{AngleDifference, StatePair};
use crate::derivatives::fold_jumps;
use crate::error::Result;
use crate::quadrature::{apply_rule, legendre_rule, pairwise_sum, PANEL_ORDER};

pub const DEFAULT_N_MAX: usize = 4096;
/// Midpoint samples used to measure the reconstruction error.
pub const CHECK_POINTS: usize = 4096;
/// Relative improvement per doubling of `N` below which the error counts as
/// stalled.
pub const PLATEAU_IMPROVEMENT: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct SineSpectrum {
    /// `ω_1 … ω_{N_max}`.
    pub coefficients: Vec<f64>,
    pub n_max: usize,
    pub source: Option<StatePair>,
    /// `Δθ` at the check momenta `π(j + ½)/CHECK_POINTS`.
    pub check_values: Vec<f64>,
}

impl SineSpectrum {
    /// `ω_n` for `1 ≤ n ≤ N_max`.
    pub fn omega(&self, n: usize) -> f64 {
        self.coefficients[n - 1]
    }

    /// `2 Σ_{n≤N} ω_n sin(nk)`.
    pub fn partial_sum(&self, n: usize, k: f64) -> f64 {
        let terms: Vec<f64> = self.coefficients[..n]
            .iter()
            .enumerate()
            .map(|(i, w)| w * ((i + 1) as f64 * k).sin())
            .collect();
        2.0 * pairwise_sum(&terms)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    Finite(usize),
    NotAchievable,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailLaw {
    /// `|ω_n|` is below `C/n³` over the last decade.
    FastDecay,
    /// `n |ω_n|` is flat over the last decade; carries its mean.
    InverseN(f64),
    /// Neither criterion holds.
    Intermediate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalityReport {
    pub truncation_order: Truncation,
    /// Sup-norm reconstruction error for `N = 0 … N_max`.
    pub sup_error_curve: Vec<(usize, f64)>,
    pub tail_law: TailLaw,
}

fn check_point(j: usize) -> f64 {
    PI * (j as f64 + 0.5) / CHECK_POINTS as f64
}

/// Composite Gauss–Legendre mesh on `[0, π]` fine enough for `sin(N_max k)`,
/// split at `cuts` and refined where `Δθ` itself is poorly resolved.
fn build_mesh<P: AngleDifference + ?Sized>(
    profile: &P,
    n_max: usize,
    cuts: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let rule = legendre_rule(PANEL_ORDER);
    let mut edges = vec![0.0];
    edges.extend(cuts.iter().copied().filter(|&c| c > 0.0 && c < PI));
    edges.push(PI);
    // about eight radians of the fastest harmonic per panel
    let base_width = (8.0 / n_max.max(1) as f64).min(PI / 64.0);

    let mut panels = Vec::new();
    for w in edges.windows(2) {
        let count = ((w[1] - w[0]) / base_width).ceil().max(1.0) as usize;
        for i in 0..count {
            let a = w[0] + (w[1] - w[0]) * i as f64 / count as f64;
            let b = w[0] + (w[1] - w[0]) * (i + 1) as f64 / count as f64;
            panels.push((a, b, 0u32));
        }
    }

    let refined = panels
        .par_iter()
        .map(|&(a, b, _)| {
            let mut out = Vec::new();
            let mut stack = vec![(a, b, 0u32)];
            while let Some((a, b, depth)) = stack.pop() {
                let m = 0.5 * (a + b);
                let mut f = |k: f64| profile.signed_delta_theta(k);
                let whole = apply_rule(&rule, a, b, &mut f)?;
                let halves = apply_rule(&rule, a, m, &mut f)? + apply_rule(&rule, m, b, &mut f)?;
                if (whole - halves).abs() > 1e-14 * (b - a) && depth < 30 {
                    stack.push((m, b, depth + 1));
                    stack.push((a, m, depth + 1));
                } else {
                    out.push((a, b));
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut nodes = Vec::new();
    for (a, b) in refined.into_iter().flatten() {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        nodes.extend(rule.iter().map(|&(x, w)| (mid + half * x, w * half)));
    }
    Ok(nodes)
}

fn coefficients_on_mesh(mesh: &[(f64, f64)], values: &[f64], n_max: usize) -> Vec<f64> {
    (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let terms: Vec<f64> = mesh
                .iter()
                .zip(values)
                .map(|(&(k, w), &d)| w * d * (n as f64 * k).sin())
                .collect();
            pairwise_sum(&terms) / PI
        })
        .collect()
}

fn spectrum_with_cuts<P: AngleDifference + ?Sized>(
    profile: &P,
    n_max: usize,
    cuts: &[f64],
    source: Option<StatePair>,
) -> Result<SineSpectrum> {
    let mesh = build_mesh(profile, n_max, cuts)?;
    let values = mesh
        .par_iter()
        .map(|&(k, _)| profile.signed_delta_theta(k))
        .collect::<Result<Vec<_>>>()?;
    let check_values = (0..CHECK_POINTS)
        .into_par_iter()
        .map(|j| profile.signed_delta_theta(check_point(j)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SineSpectrum {
        coefficients: coefficients_on_mesh(&mesh, &values, n_max),
        n_max,
        source,
        check_values,
    })
}

/// Sine coefficients of the signed, folded `Δθ` of a state pair.
pub fn sine_coefficients(pair: &StatePair, n_max: usize) -> Result<SineSpectrum> {
    let cuts = fold_jumps(pair)?;
    spectrum_with_cuts(pair, n_max, &cuts, Some(pair.clone()))
}

/// Sine coefficients of an arbitrary profile on `(0, π)`.
pub fn sine_coefficients_of<P: AngleDifference + ?Sized>(profile: &P, n_max: usize) -> Result<SineSpectrum> {
    spectrum_with_cuts(profile, n_max, &[], None)
}

/// `sup_j |Δθ(k_j) − 2 Σ_{n≤N} ω_n sin(n k_j)|` for every `N = 0 … N_max`.
pub fn sup_errors(spectrum: &SineSpectrum) -> Vec<f64> {
    let n_max = spectrum.n_max;
    // per check point: running residual for each N; reduce with max
    let per_point: Vec<Vec<f64>> = (0..CHECK_POINTS)
        .into_par_iter()
        .map(|j| {
            let k = check_point(j);
            let mut residual = spectrum.check_values[j];
            let mut errs = Vec::with_capacity(n_max + 1);
            errs.push(residual.abs());
            for (i, w) in spectrum.coefficients.iter().enumerate() {
                residual -= 2.0 * w * ((i + 1) as f64 * k).sin();
                errs.push(residual.abs());
            }
            errs
        })
        .collect();
    (0..=n_max)
        .map(|n| per_point.iter().map(|e| e[n]).fold(0.0, f64::max))
        .collect()
}

fn order_from_curve(errors: &[f64], epsilon: f64) -> Truncation {
    let mut best = f64::INFINITY;
    let mut best_at_half = f64::INFINITY;
    for (n, &e) in errors.iter().enumerate() {
        best = best.min(e);
        if e <= epsilon {
            return Truncation::Finite(n);
        }
        if n >= 8 && n.is_power_of_two() {
            if best > (1.0 - PLATEAU_IMPROVEMENT) * best_at_half {
                return Truncation::NotAchievable;
            }
            best_at_half = best;
        } else if n == 4 {
            best_at_half = best;
        }
    }
    Truncation::NotAchievable
}

/// Smallest `N` whose partial sum is within `epsilon` of `Δθ` on the check
/// grid, or `NotAchievable` if the error stalls above `epsilon`.
pub fn truncation_order(spectrum: &SineSpectrum, epsilon: f64) -> Truncation {
    order_from_curve(&sup_errors(spectrum), epsilon)
}

/// Classifies the decay of `ω_n` over `n ∈ [N_max/10, N_max]`.
pub fn tail_law(spectrum: &SineSpectrum) -> TailLaw {
    let n_max = spectrum.n_max;
    let lo = (n_max / 10).max(1);
    let scale = spectrum
        .coefficients
        .iter()
        .fold(0.0f64, |m, w| m.max(w.abs()));
    if scale == 0.0 {
        return TailLaw::FastDecay;
    }
    let tail = &spectrum.coefficients[lo - 1..];
    let largest = tail.iter().fold(0.0f64, |m, w| m.max(w.abs()));
    if largest <= scale * (lo as f64).powi(-3) {
        return TailLaw::FastDecay;
    }
    let scaled: Vec<f64> = tail
        .iter()
        .enumerate()
        .map(|(i, w)| (lo + i) as f64 * w.abs())
        .collect();
    let mean = pairwise_sum(&scaled) / scaled.len() as f64;
    let (min, max) = scaled
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    if mean > 1e-6 * scale && (max - min) <= 0.1 * mean {
        TailLaw::InverseN(mean)
    } else {
        TailLaw::Intermediate
    }
}

pub fn locality_report(pair: &StatePair, n_max: usize, epsilon: f64) -> Result<LocalityReport> {
    let spectrum = sine_coefficients(pair, n_max)?;
    let errors = sup_errors(&spectrum);
    Ok(LocalityReport {
        truncation_order: order_from_curve(&errors, epsilon),
        sup_error_curve: errors.into_iter().enumerate().collect(),
        tail_law: tail_law(&spectrum),
    })
}
