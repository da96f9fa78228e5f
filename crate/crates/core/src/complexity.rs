//! Ground-state circuit complexity between a reference and a target chain.
//!
//! Each momentum pair contributes the squared Bogoliubov angle difference
//! `|Δθ_k|²`; the total is the sum over the antiperiodic grid.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{bogoliubov_angle, ModelParams};
use crate::quadrature::{integrate, pairwise_sum, QuadOptions};

/// Reference and target ground states of the same chain family and size.
#[derive(Debug, Clone, PartialEq)]
pub struct StatePair {
    reference: ModelParams,
    target: ModelParams,
}

impl StatePair {
    pub fn new(reference: ModelParams, target: ModelParams) -> Result<Self> {
        if reference.size() != target.size() {
            return Err(Error::InvalidParameter(format!(
                "reference L = {} but target L = {}",
                reference.size(),
                target.size()
            )));
        }
        if reference.chain() != target.chain() {
            return Err(Error::InvalidParameter(
                "reference and target belong to different chain families".into(),
            ));
        }
        Ok(Self { reference, target })
    }

    pub fn reference(&self) -> &ModelParams {
        &self.reference
    }
    pub fn target(&self) -> &ModelParams {
        &self.target
    }

    pub fn swapped(&self) -> Self {
        Self {
            reference: self.target.clone(),
            target: self.reference.clone(),
        }
    }

    pub fn with_target(&self, target: ModelParams) -> Result<Self> {
        Self::new(self.reference.clone(), target)
    }

    /// Signed, folded difference θ_R − θ_T at grid index `n`.
    pub fn signed_delta_at(&self, n: usize) -> Result<f64> {
        Ok(fold_angle(self.reference.angle_at(n)? - self.target.angle_at(n)?))
    }
}

/// Anything that yields a signed angle-difference profile on (0, π).
pub trait AngleDifference: Sync {
    fn signed_delta_theta(&self, k: f64) -> Result<f64>;
}

impl AngleDifference for StatePair {
    fn signed_delta_theta(&self, k: f64) -> Result<f64> {
        signed_delta_theta(self, k)
    }
}

/// Wraps a plain function as an angle-difference profile (synthetic
/// profiles in sweeps and tests).
#[derive(Debug, Clone, Copy)]
pub struct FnProfile<F>(pub F);

impl<F> AngleDifference for FnProfile<F>
where
    F: Fn(f64) -> f64 + Sync,
{
    fn signed_delta_theta(&self, k: f64) -> Result<f64> {
        Ok((self.0)(k))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityReport {
    pub total: f64,
    pub per_mode: Vec<f64>,
    /// `total / L`
    pub density: f64,
}

/// Maps a difference of two angles in (−π/2, π/2] back into (−π/2, π/2].
/// Angles are defined modulo π, so this picks the representative closest
/// to zero.
pub fn fold_angle(x: f64) -> f64 {
    if x > FRAC_PI_2 {
        x - PI
    } else if x <= -FRAC_PI_2 {
        x + PI
    } else {
        x
    }
}

pub fn signed_delta_theta(pair: &StatePair, k: f64) -> Result<f64> {
    let r = bogoliubov_angle(&pair.reference, k)?;
    let t = bogoliubov_angle(&pair.target, k)?;
    Ok(fold_angle(r - t))
}

/// `|Δθ_k| ∈ [0, π/2]`, equal to `arccos|⟨ψ_R|ψ_T⟩|` for the mode pair.
pub fn delta_theta(pair: &StatePair, k: f64) -> Result<f64> {
    Ok(signed_delta_theta(pair, k)?.abs())
}

pub fn pair_complexity(pair: &StatePair, k: f64) -> Result<f64> {
    let d = delta_theta(pair, k)?;
    Ok(d * d)
}

/// Single-arctangent expression for the short-range angle difference.
///
/// Only determines Δθ modulo π/2, so it cannot tell Δθ from Δθ ∓ π/2 once
/// `|Δθ| > π/4`; it is kept as an independent cross-check of the folded
/// two-angle route.
pub fn delta_theta_single_arctan(
    mu_r: f64,
    delta_r: f64,
    mu_t: f64,
    delta_t: f64,
    k: f64,
) -> f64 {
    let (s, c) = k.sin_cos();
    let num = s * (delta_r * mu_t - delta_t * mu_r + (delta_r - delta_t) * c);
    let den = (mu_r + c) * (mu_t + c) + delta_r * delta_t * s * s;
    0.5 * (num / den).atan()
}

pub fn total_complexity(pair: &StatePair) -> Result<ComplexityReport> {
    let modes = pair.reference.size() / 2;
    let per_mode = (0..modes)
        .into_par_iter()
        .map(|n| {
            let d = pair.signed_delta_at(n)?;
            Ok(d * d)
        })
        .collect::<Result<Vec<f64>>>()?;
    let total = pairwise_sum(&per_mode);
    Ok(ComplexityReport {
        total,
        density: total / pair.reference.size() as f64,
        per_mode,
    })
}

/// Thermodynamic-limit density `C/L = (1/2π) ∫_0^π |Δθ(k)|² dk`.
///
/// For long-range chains the finite-`L` pairing sum of the pair is evaluated
/// at arbitrary `k`, so the result still depends on `L` when `α < 1`.
pub fn density_limit(pair: &StatePair, rel_tol: f64) -> Result<f64> {
    density_limit_of(pair, rel_tol)
}

pub fn density_limit_of<P: AngleDifference + ?Sized>(profile: &P, rel_tol: f64) -> Result<f64> {
    let opts = QuadOptions::with_rel_tol(rel_tol);
    let est = integrate(
        |k| {
            let d = profile.signed_delta_theta(k)?;
            Ok(d * d)
        },
        0.0,
        PI,
        &opts,
    )?;
    Ok(est.value / (2.0 * PI))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sr(mu: f64, delta: f64, l: usize) -> ModelParams {
        ModelParams::short_range(mu, delta, l).unwrap()
    }

    #[test]
    fn pair_validation() {
        assert!(StatePair::new(sr(0.0, 1.0, 8), sr(0.0, 1.0, 10)).is_err());
        let lr = ModelParams::long_range(0.0, 1.0, 0.5, 8).unwrap();
        assert!(StatePair::new(sr(0.0, 1.0, 8), lr).is_err());
    }

    #[test]
    fn identical_states_have_zero_complexity() {
        let pair = StatePair::new(sr(0.3, 1.2, 100), sr(0.3, 1.2, 100)).unwrap();
        for &k in &[0.1, 1.0, 3.0] {
            assert_eq!(delta_theta(&pair, k).unwrap(), 0.0);
        }
        let rep = total_complexity(&pair).unwrap();
        assert_eq!(rep.total, 0.0);
        assert_eq!(density_limit(&pair, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn cross_phase_angle_reaches_half_pi_at_zone_edge() {
        let pair = StatePair::new(sr(0.0, 1.0, 8), sr(1.5, 1.0, 8)).unwrap();
        let d = delta_theta(&pair, PI - 1e-9).unwrap();
        assert!((d - FRAC_PI_2).abs() < 1e-8);
        // same phase: back to zero at the edge
        let pair = StatePair::new(sr(0.0, 1.0, 8), sr(0.5, 1.0, 8)).unwrap();
        assert!(delta_theta(&pair, PI - 1e-9).unwrap() < 1e-8);
    }

    #[test]
    fn vacuum_target_gives_half_momentum() {
        let pair = StatePair::new(sr(0.0, 1.0, 8), sr(f64::INFINITY, 1.0, 8)).unwrap();
        assert!((delta_theta(&pair, PI / 2.0).unwrap() - PI / 4.0).abs() < 1e-15);
        assert!((pair_complexity(&pair, PI / 2.0).unwrap() - PI * PI / 16.0).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_modes_reach_bound() {
        // θ_R = π/2 (filled), θ_T = 0 (empty)
        let pair = StatePair::new(
            sr(f64::NEG_INFINITY, 1.0, 8),
            sr(f64::INFINITY, 1.0, 8),
        )
        .unwrap();
        assert!((pair_complexity(&pair, 1.0).unwrap() - PI * PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn vacuum_density_closed_form() {
        // (1/2π)∫_0^π (k/2)² dk = π²/24
        let pair = StatePair::new(sr(0.0, 1.0, 8), sr(f64::INFINITY, 1.0, 8)).unwrap();
        let d = density_limit(&pair, 1e-12).unwrap();
        assert!((d - PI * PI / 24.0).abs() < 1e-12);
        // finite L Riemann sums approach it
        let big = StatePair::new(sr(0.0, 1.0, 20_000), sr(f64::INFINITY, 1.0, 20_000)).unwrap();
        let rep = total_complexity(&big).unwrap();
        assert!((rep.density - PI * PI / 24.0).abs() < 1e-6);
    }

    #[test]
    fn volume_law() {
        for &(mu_r, mu_t) in &[(0.0, 0.5), (0.0, 1.5), (-0.5, 2.0)] {
            let c = |l| {
                let pair = StatePair::new(sr(mu_r, 1.0, l), sr(mu_t, 1.0, l)).unwrap();
                total_complexity(&pair).unwrap().total
            };
            let ratio = c(1000) / c(500);
            assert!((ratio - 2.0).abs() < 0.01, "{ratio}");
        }
    }

    #[test]
    fn grid_sum_matches_quadrature() {
        let pair = StatePair::new(sr(0.0, 1.0, 2000), sr(0.5, 1.0, 2000)).unwrap();
        let grid = total_complexity(&pair).unwrap().density;
        let quad = density_limit(&pair, 1e-10).unwrap();
        assert!((grid - quad).abs() < 1e-3);
    }

    #[test]
    fn report_is_consistent() {
        let pair = StatePair::new(sr(-0.7, 0.4, 300), sr(1.9, -1.1, 300)).unwrap();
        let rep = total_complexity(&pair).unwrap();
        assert_eq!(rep.per_mode.len(), 150);
        let naive: f64 = rep.per_mode.iter().sum();
        assert!((naive - rep.total).abs() <= 1e-12 * rep.total);
        assert!(rep.per_mode.iter().all(|&c| (0.0..=PI * PI / 4.0).contains(&c)));
        assert_eq!(rep.density, rep.total / 300.0);
    }

    #[test]
    fn density_is_bounded_by_pi_squared_over_eight() {
        let pair = StatePair::new(
            sr(f64::NEG_INFINITY, 1.0, 8),
            sr(f64::INFINITY, 1.0, 8),
        )
        .unwrap();
        let d = density_limit(&pair, 1e-12).unwrap();
        assert!((d - PI * PI / 8.0).abs() < 1e-12);
    }

    #[test]
    fn single_arctan_form_agrees_below_quarter_pi() {
        let pair = StatePair::new(sr(0.2, 1.0, 8), sr(0.6, 1.3, 8)).unwrap();
        for i in 1..200 {
            let k = PI * i as f64 / 200.0;
            let folded = signed_delta_theta(&pair, k).unwrap();
            let single = delta_theta_single_arctan(0.2, 1.0, 0.6, 1.3, k);
            if folded.abs() < PI / 4.0 - 1e-6 {
                assert!((folded - single).abs() < 1e-12, "k={k}");
            } else {
                // differs by a multiple of π/2
                let r = (folded - single) / FRAC_PI_2;
                assert!((r - r.round()).abs() < 1e-9);
            }
        }
        // the single arctangent never exceeds π/4 in magnitude
        let cross = StatePair::new(sr(0.0, 1.0, 8), sr(1.5, 1.0, 8)).unwrap();
        let k = 3.1;
        assert!(delta_theta(&cross, k).unwrap() > PI / 4.0);
        assert!(delta_theta_single_arctan(0.0, 1.0, 1.5, 1.0, k).abs() <= PI / 4.0);
    }

    #[test]
    fn triangle_for_collinear_states() {
        let a = sr(0.0, 1.0, 8);
        let b = sr(0.3, 1.0, 8);
        let c = sr(0.6, 1.0, 8);
        let ab = StatePair::new(a.clone(), b.clone()).unwrap();
        let bc = StatePair::new(b, c.clone()).unwrap();
        let ac = StatePair::new(a, c).unwrap();
        for i in 1..500 {
            let k = PI * i as f64 / 500.0;
            let lhs = delta_theta(&ac, k).unwrap();
            let rhs = delta_theta(&ab, k).unwrap() + delta_theta(&bc, k).unwrap();
            assert!(lhs <= rhs + 1e-14);
        }
    }

    proptest! {
        #[test]
        fn symmetric_under_exchange(
            mu_r in -3.0..3.0f64, d_r in -2.0..2.0f64,
            mu_t in -3.0..3.0f64, d_t in -2.0..2.0f64,
        ) {
            let pair = StatePair::new(sr(mu_r, d_r, 64), sr(mu_t, d_t, 64)).unwrap();
            let fwd = total_complexity(&pair).unwrap();
            let back = total_complexity(&pair.swapped()).unwrap();
            prop_assert!((fwd.total - back.total).abs() <= 1e-12 * fwd.total.max(1e-300));
            prop_assert!(fwd.density <= PI * PI / 8.0);
        }
    }
}
