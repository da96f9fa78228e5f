//! Brute-force per-mode checks: explicit 2×2 BdG blocks, exact ground
//! states and time evolution, and the discretized Nielsen path cost.
//!
//! Nothing here is used by the production code paths; the functions exist
//! to cross-check the closed-form angle formulas.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::complexity::StatePair;
use crate::error::{Error, Result};
use crate::model::{ModelParams, GAP_TOLERANCE};
use crate::quench::QuenchSetup;

pub type State = [Complex64; 2];

const I: Complex64 = Complex64::new(0.0, 1.0);

/// BdG block in the basis {|0⟩, a†_k a†_{−k}|0⟩}:
///
/// ```text
/// [ −(μ + cos k)    −iΔ g(k) ]
/// [  iΔ g(k)        μ + cos k ]
/// ```
///
/// With this sign choice the ground state is `(cos θ, −i sin θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeHamiltonian {
    /// `μ + cos k`
    pub kinetic: f64,
    /// `Δ g(k)`
    pub pairing: f64,
}

impl ModeHamiltonian {
    pub fn new(p: &ModelParams, k: f64) -> Self {
        let (kinetic, pairing) = p.components(k);
        Self { kinetic, pairing }
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let x = Complex64::from(self.kinetic);
        let y = I * self.pairing;
        [[-x, -y], [y, x]]
    }

    pub fn energy(&self) -> f64 {
        self.kinetic.hypot(self.pairing)
    }

    fn is_gapless(&self) -> bool {
        self.kinetic.abs() < GAP_TOLERANCE && self.pairing.abs() < GAP_TOLERANCE
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let [[a, b], [_, d]] = self.matrix();
        // closed form for a Hermitian 2×2 block
        let mean = 0.5 * (a.re + d.re);
        let half = (0.5 * (a.re - d.re)).hypot(b.norm());
        [mean - half, mean + half]
    }

    /// Lowest eigenvector, normalized, first amplitude real and non-negative.
    /// When the first amplitude vanishes the second is `−i`.
    pub fn ground_state(&self) -> Result<State> {
        if self.is_gapless() {
            return Err(Error::GapClosed { k: f64::NAN });
        }
        let (x, y) = (self.kinetic, self.pairing);
        if x.is_infinite() {
            return Ok(if x > 0.0 { basis(0) } else { [Complex64::from(0.0), -I] });
        }
        let e = self.energy();
        // pick the eigen-equation row that avoids cancellation
        let v = if x > 0.0 {
            [Complex64::from(e + x), -I * y]
        } else {
            [I * y, Complex64::from(e - x)]
        };
        Ok(fix_phase(normalize(v)))
    }

    pub fn excited_state(&self) -> Result<State> {
        let [u, v] = self.ground_state()?;
        Ok([-v.conj(), u.conj()])
    }
}

fn basis(i: usize) -> State {
    let mut s = [Complex64::from(0.0); 2];
    s[i] = Complex64::from(1.0);
    s
}

fn normalize(v: State) -> State {
    let n = v[0].norm().hypot(v[1].norm());
    [v[0] / n, v[1] / n]
}

fn fix_phase(v: State) -> State {
    let r = v[0].norm();
    if r > 0.0 {
        let ph = v[0].conj() / r;
        [Complex64::from(r), v[1] * ph]
    } else {
        [Complex64::from(0.0), -I * v[1].norm()]
    }
}

pub fn inner(a: &State, b: &State) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

pub fn norm(a: &State) -> f64 {
    inner(a, a).re.sqrt()
}

fn angle_from_overlap(o: Complex64) -> f64 {
    o.norm().min(1.0).acos()
}

pub fn mode_ground_state(p: &ModelParams, k: f64) -> Result<State> {
    ModeHamiltonian::new(p, k)
        .ground_state()
        .map_err(|_| Error::GapClosed { k })
}

/// `arccos²|⟨ψ_R|ψ_T⟩|` from explicit eigenvectors.
pub fn overlap_complexity_check(pair: &StatePair, k: f64) -> Result<f64> {
    let r = mode_ground_state(pair.reference(), k)?;
    let t = mode_ground_state(pair.target(), k)?;
    Ok(angle_from_overlap(inner(&r, &t)).powi(2))
}

/// Initial ground state evolved for time `t` under the final block.
pub fn mode_evolution(q: &QuenchSetup, k: f64, t: f64) -> Result<State> {
    if t < 0.0 {
        return Err(Error::InvalidParameter(format!("negative time {t}")));
    }
    let psi0 = mode_ground_state(q.initial(), k)?;
    let h = ModeHamiltonian::new(q.final_hamiltonian(), k);
    if h.is_gapless() {
        return Ok(psi0);
    }
    let [lo, hi] = h.eigenvalues();
    let g = h.ground_state()?;
    let x = h.excited_state()?;
    let cg = inner(&g, &psi0) * Complex64::from_polar(1.0, -lo * t);
    let cx = inner(&x, &psi0) * Complex64::from_polar(1.0, -hi * t);
    Ok([cg * g[0] + cx * x[0], cg * g[1] + cx * x[1]])
}

/// `φ_k(t)` from the evolved state: `arccos|⟨ψ(0)|ψ(t)⟩|`.
pub fn evolution_angle(q: &QuenchSetup, k: f64, t: f64) -> Result<f64> {
    let psi0 = mode_ground_state(q.initial(), k)?;
    let psi = mode_evolution(q, k, t)?;
    Ok(angle_from_overlap(inner(&psi0, &psi)))
}

/// Discretized path through the single-pair unitary parametrization, sampled
/// at `s_j = j/M`, `j = 0..=M`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathParams {
    pub beta: Vec<f64>,
    pub phi1: Vec<f64>,
    pub phi2: Vec<f64>,
    pub omega: Vec<f64>,
    pub delta_theta: f64,
}

impl PathParams {
    pub fn from_fns(
        delta_theta: f64,
        segments: usize,
        beta: impl Fn(f64) -> f64,
        phi1: impl Fn(f64) -> f64,
        phi2: impl Fn(f64) -> f64,
        omega: impl Fn(f64) -> f64,
    ) -> Self {
        let s: Vec<f64> = (0..=segments).map(|j| j as f64 / segments as f64).collect();
        Self {
            beta: s.iter().map(|&s| beta(s)).collect(),
            phi1: s.iter().map(|&s| phi1(s)).collect(),
            phi2: s.iter().map(|&s| phi2(s)).collect(),
            omega: s.iter().map(|&s| omega(s)).collect(),
            delta_theta,
        }
    }

    /// The straight-line geodesic: only `ω` moves, linearly.
    pub fn geodesic(delta_theta: f64, segments: usize) -> Self {
        Self::from_fns(delta_theta, segments, |_| 0.0, |_| 0.0, |_| FRAC_PI_2, |s| s * delta_theta)
    }

    pub fn segments(&self) -> usize {
        self.omega.len().saturating_sub(1)
    }
}

const BOUNDARY_TOLERANCE: f64 = 1e-12;

fn check_boundaries(p: &PathParams) -> Result<()> {
    let m = p.segments();
    if m == 0
        || p.beta.len() != m + 1
        || p.phi1.len() != m + 1
        || p.phi2.len() != m + 1
    {
        return Err(Error::InvalidParameter(
            "path functions need equal lengths and at least one segment".into(),
        ));
    }
    let checks = [
        ("β(0)", p.beta[0], 0.0),
        ("φ₁(0)", p.phi1[0], 0.0),
        ("ω(0)", p.omega[0], 0.0),
        ("β(1)", p.beta[m], 0.0),
        ("φ₁(1)", p.phi1[m], 0.0),
        ("φ₂(1)", p.phi2[m], FRAC_PI_2),
        ("ω(1)", p.omega[m], p.delta_theta),
    ];
    for (name, got, want) in checks {
        if (got - want).abs().is_nan() || (got - want).abs() > BOUNDARY_TOLERANCE {
            return Err(Error::BoundaryViolation(format!("{name} = {got}, expected {want}")));
        }
    }
    Ok(())
}

/// `∫₀¹ β′² + ω′² + cos²ω φ₁′² + sin²ω φ₂′² ds`, with forward differences on
/// each segment and the `ω`-dependent weights averaged over its endpoints.
pub fn path_cost(path: &PathParams) -> Result<f64> {
    check_boundaries(path)?;
    let m = path.segments();
    let h = 1.0 / m as f64;
    let d = |f: &[f64], j: usize| (f[j + 1] - f[j]) / h;
    let terms: Vec<f64> = (0..m)
        .map(|j| {
            let (w0, w1) = (path.omega[j], path.omega[j + 1]);
            let c2 = 0.5 * (w0.cos().powi(2) + w1.cos().powi(2));
            let s2 = 0.5 * (w0.sin().powi(2) + w1.sin().powi(2));
            h * (d(&path.beta, j).powi(2)
                + d(&path.omega, j).powi(2)
                + c2 * d(&path.phi1, j).powi(2)
                + s2 * d(&path.phi2, j).powi(2))
        })
        .collect();
    Ok(crate::quadrature::pairwise_sum(&terms))
}

pub const PERTURBATION_HARMONICS: usize = 5;
pub const PERTURBATION_AMPLITUDE: f64 = 0.5;

/// Sine-series amplitudes for β, φ₁, φ₂, ω, in that order.
pub type Perturbation = [[f64; PERTURBATION_HARMONICS]; 4];

fn sine_series(a: &[f64; PERTURBATION_HARMONICS], s: f64) -> f64 {
    a.iter()
        .enumerate()
        .map(|(j, c)| c * ((j + 1) as f64 * PI * s).sin())
        .sum()
}

/// Geodesic plus a sine-series deformation of every function. Endpoint
/// samples are pinned exactly.
pub fn perturbed_path(delta_theta: f64, segments: usize, amps: &Perturbation) -> PathParams {
    let mut p = PathParams::from_fns(
        delta_theta,
        segments,
        |s| sine_series(&amps[0], s),
        |s| sine_series(&amps[1], s),
        |s| FRAC_PI_2 + sine_series(&amps[2], s),
        |s| s * delta_theta + sine_series(&amps[3], s),
    );
    for f in [&mut p.beta, &mut p.phi1, &mut p.omega] {
        f[0] = 0.0;
    }
    p.beta[segments] = 0.0;
    p.phi1[segments] = 0.0;
    p.phi2[0] = FRAC_PI_2;
    p.phi2[segments] = FRAC_PI_2;
    p.omega[segments] = delta_theta;
    p
}

/// Minimum cost over `trials` random deformations of the geodesic, with
/// every amplitude at most [`PERTURBATION_AMPLITUDE`]. Trial `i`
/// draws from stream `i` of a ChaCha generator seeded with `seed`, so the
/// result does not depend on scheduling.
pub fn geodesic_minimality_probe(delta_theta: f64, trials: usize, segments: usize, seed: u64) -> Result<f64> {
    if trials < 100 || segments < 64 {
        return Err(Error::InvalidParameter(
            "probe needs at least 100 trials and 64 segments".into(),
        ));
    }
    let costs = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            // overall size log-uniform over four decades, so deformations
            // close to the geodesic are sampled as well as large ones
            let size = 10f64.powf(-4.0 * rng.random::<f64>());
            let mut amps = [[0.0; PERTURBATION_HARMONICS]; 4];
            for a in amps.iter_mut().flatten() {
                *a = size * rng.random_range(-PERTURBATION_AMPLITUDE..=PERTURBATION_AMPLITUDE);
            }
            path_cost(&perturbed_path(delta_theta, segments, &amps))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(costs.into_iter().fold(f64::INFINITY, f64::min))
}
