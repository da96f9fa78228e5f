//! Complexity growth after a sudden quench and its long-time steady state.
//!
//! Every momentum pair precesses independently under the post-quench
//! Hamiltonian. With `Δθ_k` the angle difference between the initial and
//! final ground states and `ε_k` the final dispersion,
//!
//! ```text
//! φ_k(t) = arccos √(1 − sin²(2Δθ_k) sin²(ε_k t)),   C(t) = Σ_k φ_k(t)².
//! ```
//!
//! The steady state replaces each `φ_k²` by its average over one period of
//! `ε_k t`, which is what an infinite-time average converges to when the
//! mode frequencies are incommensurate.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::complexity::fold_angle;
use crate::error::{Error, Result};
use crate::model::{bogoliubov_angle, dispersion, AngleProfile, ModelParams};
use crate::quadrature::{legendre_rule, pairwise_sum};

/// Nodes of the fixed rule used for per-mode phase averages.
pub const PHASE_AVERAGE_NODES: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct QuenchSetup {
    initial: ModelParams,
    final_: ModelParams,
}

impl QuenchSetup {
    pub fn new(initial: ModelParams, final_: ModelParams) -> Result<Self> {
        if initial.size() != final_.size() || initial.chain() != final_.chain() {
            return Err(Error::InvalidParameter(
                "initial and final Hamiltonians must share chain family and size".into(),
            ));
        }
        if !final_.mu().is_finite() {
            return Err(Error::InvalidParameter(
                "post-quench chemical potential must be finite".into(),
            ));
        }
        Ok(Self { initial, final_ })
    }

    pub fn initial(&self) -> &ModelParams {
        &self.initial
    }
    pub fn final_hamiltonian(&self) -> &ModelParams {
        &self.final_
    }
}

/// Per-mode data that fully determines the post-quench dynamics.
#[derive(Debug, Clone, PartialEq)]
pub struct QuenchProfile {
    /// Signed, folded `θ_i − θ_f` on the grid.
    pub delta_theta: AngleProfile,
    /// Post-quench dispersion on the grid.
    pub energy: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuenchSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// Phase-averaged `φ_k²` per grid momentum.
    pub per_mode_avg: Vec<f64>,
    pub steady_state: f64,
}

pub fn quench_profile(q: &QuenchSetup) -> Result<QuenchProfile> {
    let modes = q.initial.size() / 2;
    let delta = (0..modes)
        .map(|n| Ok(fold_angle(q.initial.angle_at(n)? - q.final_.angle_at(n)?)))
        .collect::<Result<Vec<_>>>()?;
    let energy = (0..modes).map(|n| q.final_.dispersion_at(n)).collect();
    Ok(QuenchProfile {
        delta_theta: AngleProfile {
            grid: q.initial.grid(),
            theta: delta,
        },
        energy,
    })
}

/// Signed angle difference at an arbitrary momentum.
pub fn delta_theta_at(q: &QuenchSetup, k: f64) -> Result<f64> {
    Ok(fold_angle(
        bogoliubov_angle(&q.initial, k)? - bogoliubov_angle(&q.final_, k)?,
    ))
}

#[inline]
fn clamp_unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// `φ` for a mode with angle difference `delta_theta` and energy `energy`.
pub fn phi_from(delta_theta: f64, energy: f64, t: f64) -> f64 {
    let s2 = (2.0 * delta_theta).sin().powi(2);
    let w2 = (energy * t).sin().powi(2);
    clamp_unit(1.0 - s2 * w2).sqrt().acos()
}

pub fn phi_mode(q: &QuenchSetup, k: f64, t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::InvalidParameter(format!("negative time {t}")));
    }
    let d = delta_theta_at(q, k)?;
    Ok(phi_from(d, dispersion(&q.final_, k), t))
}

/// Upper envelope of `φ_k(t)`, reached when `sin(ε_k t) = ±1`.
pub fn envelope_from(delta_theta: f64) -> f64 {
    clamp_unit(1.0 - (2.0 * delta_theta).sin().powi(2)).sqrt().acos()
}

pub fn max_envelope(q: &QuenchSetup, k: f64) -> Result<f64> {
    Ok(envelope_from(delta_theta_at(q, k)?))
}

fn half_period_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        // mapped to [0, π/2], weights normalised to average over the interval
        legendre_rule(PHASE_AVERAGE_NODES)
            .into_iter()
            .map(|(x, w)| (FRAC_PI_2 * 0.5 * (x + 1.0), 0.5 * w))
            .collect()
    })
}

// The integrand is symmetric about x = π/2 (it depends on sin² x), so the
// average over [0, π] equals the average over [0, π/2], where it is smooth
// even at sin²(2Δθ) = 1.
fn phase_average(delta_theta: f64, power: i32) -> f64 {
    let s2 = (2.0 * delta_theta).sin().powi(2);
    let terms: Vec<f64> = half_period_rule()
        .iter()
        .map(|&(x, w)| {
            let phi = clamp_unit(1.0 - s2 * x.sin().powi(2)).sqrt().acos();
            w * phi.powi(power)
        })
        .collect();
    pairwise_sum(&terms)
}

/// Phase average of `φ²`: `(1/π) ∫_0^π arccos²√(1 − sin²(2Δθ) sin²x) dx`.
pub fn mode_time_average(delta_theta: f64) -> f64 {
    phase_average(delta_theta, 2)
}

/// Phase average of `φ` itself. Equals π/4 when `sin²(2Δθ) = 1`.
pub fn mode_time_average_phi(delta_theta: f64) -> f64 {
    phase_average(delta_theta, 1)
}

/// Default sampling: 2000 uniform times over `[0, 40/ε_min]`.
pub fn default_times(q: &QuenchSetup) -> Vec<f64> {
    let min_gap = (0..q.final_.size() / 2)
        .map(|n| q.final_.dispersion_at(n))
        .fold(f64::INFINITY, f64::min);
    let t_max = 40.0 / min_gap;
    (0..2000).map(|i| t_max * i as f64 / 1999.0).collect()
}

pub fn complexity_timeseries(q: &QuenchSetup, times: &[f64]) -> Result<QuenchSeries> {
    if times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
        return Err(Error::InvalidParameter("times must be finite and non-negative".into()));
    }
    if times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("times must be strictly increasing".into()));
    }
    let profile = quench_profile(q)?;
    let dtheta = &profile.delta_theta.theta;
    let energy = &profile.energy;
    let values = times
        .par_iter()
        .map(|&t| {
            let terms: Vec<f64> = dtheta
                .iter()
                .zip(energy)
                .map(|(&d, &e)| phi_from(d, e, t).powi(2))
                .collect();
            pairwise_sum(&terms)
        })
        .collect();
    let per_mode_avg: Vec<f64> = dtheta.par_iter().map(|&d| mode_time_average(d)).collect();
    let steady_state = pairwise_sum(&per_mode_avg);
    Ok(QuenchSeries {
        times: times.to_vec(),
        values,
        per_mode_avg,
        steady_state,
    })
}

pub fn steady_state(q: &QuenchSetup) -> Result<f64> {
    let profile = quench_profile(q)?;
    let avgs: Vec<f64> = profile
        .delta_theta
        .theta
        .par_iter()
        .map(|&d| mode_time_average(d))
        .collect();
    Ok(pairwise_sum(&avgs))
}

/// Which post-quench parameter a steady-state scan varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuenchVar {
    Mu,
    Delta,
}

/// Steady-state complexity for each value of the swept final parameter;
/// the other final parameters are taken from `final_template`.
pub fn steady_state_scan(
    initial: &ModelParams,
    final_template: &ModelParams,
    var: QuenchVar,
    values: &[f64],
) -> Result<Vec<(f64, f64)>> {
    values
        .iter()
        .map(|&v| {
            let fin = match var {
                QuenchVar::Mu => final_template.with_mu(v)?,
                QuenchVar::Delta => final_template.with_delta(v)?,
            };
            let q = QuenchSetup::new(initial.clone(), fin)?;
            Ok((v, steady_state(&q)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn setup(mu_i: f64, mu_f: f64, l: usize) -> QuenchSetup {
        QuenchSetup::new(
            ModelParams::short_range(mu_i, 1.0, l).unwrap(),
            ModelParams::short_range(mu_f, 1.0, l).unwrap(),
        )
        .unwrap()
    }

    /// Midpoint rule with many points, independent of the Gauss rule.
    fn midpoint_average(delta_theta: f64, power: i32, n: usize) -> f64 {
        let s2 = (2.0 * delta_theta).sin().powi(2);
        (0..n)
            .map(|i| {
                let x = PI * (i as f64 + 0.5) / n as f64;
                clamp_unit(1.0 - s2 * x.sin().powi(2)).sqrt().acos().powi(power)
            })
            .sum::<f64>()
            / n as f64
    }

    #[test]
    fn no_quench_means_no_dynamics() {
        let q = setup(0.4, 0.4, 64);
        let prof = quench_profile(&q).unwrap();
        assert!(prof.delta_theta.theta.iter().all(|&d| d == 0.0));
        let series = complexity_timeseries(&q, &[0.0, 1.0, 17.0]).unwrap();
        assert!(series.values.iter().all(|&c| c == 0.0));
        assert_eq!(series.steady_state, 0.0);
    }

    #[test]
    fn energies_match_final_dispersion() {
        let q = setup(0.0, 2.0, 64);
        let prof = quench_profile(&q).unwrap();
        for (k, e) in prof.delta_theta.grid.points().iter().zip(&prof.energy) {
            assert!((e - dispersion(q.final_hamiltonian(), *k)).abs() < 1e-15);
        }
    }

    #[test]
    fn maximal_mode_across_transition() {
        // 1 + μ_f cos k = 0 at μ_f = 2 gives k* = 2π/3
        let q = setup(0.0, 2.0, 64);
        let ks = 2.0 * PI / 3.0;
        let d = delta_theta_at(&q, ks).unwrap();
        assert!(((2.0 * d).sin().powi(2) - 1.0).abs() < 1e-14);
        let e = dispersion(q.final_hamiltonian(), ks);
        let phi = phi_mode(&q, ks, FRAC_PI_2 / e).unwrap();
        assert!((phi - FRAC_PI_2).abs() < 1e-6);
        assert!((max_envelope(&q, ks).unwrap() - FRAC_PI_2).abs() < 1e-6);
    }

    #[test]
    fn phi_at_time_zero_vanishes() {
        let q = setup(0.0, 1.7, 64);
        for &k in &[0.2, 1.3, 2.9] {
            assert_eq!(phi_mode(&q, k, 0.0).unwrap(), 0.0);
        }
        assert!(phi_mode(&q, 1.0, -1.0).is_err());
    }

    #[test]
    fn envelope_matches_closed_form_for_unit_pairing() {
        for &mu_f in &[0.5, 2.0, 3.5] {
            let q = setup(0.0, mu_f, 64);
            for i in 1..100 {
                let k = PI * i as f64 / 100.0;
                let closed = ((1.0 + mu_f * k.cos()) / (mu_f * mu_f + 2.0 * mu_f * k.cos() + 1.0).sqrt())
                    .abs()
                    .min(1.0)
                    .acos();
                assert!((max_envelope(&q, k).unwrap() - closed).abs() < 1e-7, "μ_f={mu_f} k={k}");
            }
        }
    }

    #[test]
    fn envelope_stays_below_half_pi_before_transition() {
        let q = setup(0.0, 0.5, 64);
        let max = (1..2000)
            .map(|i| max_envelope(&q, PI * i as f64 / 2000.0).unwrap())
            .fold(0.0, f64::max);
        assert!(max < FRAC_PI_2 - 0.1);
    }

    #[test]
    fn phase_averages() {
        assert_eq!(mode_time_average(0.0), 0.0);
        let quarter = mode_time_average(PI / 4.0);
        // s² = 1: φ = min(x, π − x), so ⟨φ²⟩ = π²/12 and ⟨φ⟩ = π/4
        assert!((quarter - midpoint_average(PI / 4.0, 2, 16384)).abs() < 1e-8);
        assert!((quarter - PI * PI / 12.0).abs() < 1e-12);
        assert!((mode_time_average_phi(PI / 4.0) - PI / 4.0).abs() < 1e-12);
        // Δθ and π/2 − Δθ share sin²(2Δθ)
        assert!((mode_time_average(0.3) - mode_time_average(FRAC_PI_2 - 0.3)).abs() < 1e-14);
        for &d in &[0.05, 0.3, 0.7, 0.78] {
            assert!((mode_time_average(d) - midpoint_average(d, 2, 16384)).abs() < 1e-8);
            assert!((mode_time_average_phi(d) - midpoint_average(d, 1, 16384)).abs() < 1e-8);
        }
    }

    #[test]
    fn series_invariants() {
        let q = setup(0.0, 1.6, 200);
        let times: Vec<f64> = (0..400).map(|i| 0.25 * i as f64).collect();
        let s = complexity_timeseries(&q, &times).unwrap();
        assert_eq!(s.values[0], 0.0);
        let naive: f64 = s.per_mode_avg.iter().sum();
        assert!((naive - s.steady_state).abs() <= 1e-12 * s.steady_state);
        let prof = quench_profile(&q).unwrap();
        let bound: f64 = prof.delta_theta.theta.iter().map(|&d| envelope_from(d).powi(2)).sum();
        assert!(s.values.iter().all(|&c| c <= bound + 1e-12));
        // early growth
        assert!(s.values[1] > 0.0 && s.values[2] > s.values[1] && s.values[3] > s.values[2]);
    }

    #[test]
    fn rejects_bad_times() {
        let q = setup(0.0, 1.6, 8);
        assert!(complexity_timeseries(&q, &[0.0, 2.0, 1.0]).is_err());
        assert!(complexity_timeseries(&q, &[-1.0, 2.0]).is_err());
    }

    #[test]
    fn phi_bounded_by_envelope() {
        let q = setup(-0.3, 1.4, 64);
        for i in 1..50 {
            let k = PI * i as f64 / 50.0;
            let env = max_envelope(&q, k).unwrap();
            for j in 0..50 {
                let phi = phi_mode(&q, k, 0.37 * j as f64).unwrap();
                assert!(phi >= 0.0 && phi <= env + 1e-12 && env <= FRAC_PI_2);
            }
        }
    }

    #[test]
    fn default_times_resolve_slowest_mode() {
        let q = setup(0.0, 0.5, 100);
        let t = default_times(&q);
        assert_eq!(t.len(), 2000);
        assert_eq!(t[0], 0.0);
        let min_gap = quench_profile(&q).unwrap().energy.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((t[1999] - 40.0 / min_gap).abs() < 1e-9);
    }
}
