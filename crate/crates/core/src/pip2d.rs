//! Continuum p+ip superconductor in two dimensions.
//!
//! `ε(k) = k²/2m − μ`, `|Δ(k)| = |Δ| |k|`, and `tan 2θ_k = |Δ(k)|/ε(k)`.
//! Everything depends on `|k|` only, so areal densities reduce to radial
//! integrals `(1/2π) ∫_0^Λ k f(k) dk`.

use std::f64::consts::PI;

use crate::complexity::fold_angle;
use crate::error::{Error, Result};
use crate::model::GAP_TOLERANCE;
use crate::quadrature::{integrate, QuadOptions};

pub const MIN_RESOLUTION: usize = 64;
pub const DEFAULT_RESOLUTION: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pip2dParams {
    mu: f64,
    delta: f64,
    mass: f64,
    cutoff: f64,
    resolution: usize,
}

/// `20 √(2m · max(|μ|, Δ²m, 1))`; an infinite `μ` is ignored.
pub fn default_cutoff(mu: f64, delta: f64, mass: f64) -> f64 {
    let mu = if mu.is_finite() { mu.abs() } else { 0.0 };
    20.0 * (2.0 * mass * mu.max(delta * delta * mass).max(1.0)).sqrt()
}

impl Pip2dParams {
    /// Parameters with the default cutoff and resolution.
    pub fn new(mu: f64, delta: f64, mass: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
        }
        if mu.is_nan() || !delta.is_finite() {
            return Err(Error::InvalidParameter(format!("μ={mu}, Δ={delta}")));
        }
        Ok(Self {
            mu,
            delta,
            mass,
            cutoff: default_cutoff(mu, delta, mass),
            resolution: DEFAULT_RESOLUTION,
        })
    }

    pub fn with_cutoff(self, cutoff: f64) -> Result<Self> {
        if !(cutoff > 0.0 && cutoff.is_finite()) {
            return Err(Error::InvalidParameter(format!("cutoff must be positive, got {cutoff}")));
        }
        Ok(Self { cutoff, ..self })
    }

    /// Number of initial radial panels.
    pub fn with_resolution(self, resolution: usize) -> Result<Self> {
        if resolution < MIN_RESOLUTION {
            return Err(Error::InvalidParameter(format!(
                "resolution must be at least {MIN_RESOLUTION}, got {resolution}"
            )));
        }
        Ok(Self { resolution, ..self })
    }

    pub fn with_mu(self, mu: f64) -> Result<Self> {
        if mu.is_nan() {
            return Err(Error::InvalidParameter("μ is NaN".into()));
        }
        Ok(Self { mu, ..self })
    }

    /// Empty state (`μ → −∞`, θ ≡ 0) sharing mass, cutoff and resolution.
    pub fn vacuum(&self) -> Self {
        Self {
            mu: f64::NEG_INFINITY,
            ..*self
        }
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn mass(&self) -> f64 {
        self.mass
    }
    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }
    pub fn resolution(&self) -> usize {
        self.resolution
    }

    fn components(&self, k: f64) -> (f64, f64) {
        (k * k / (2.0 * self.mass) - self.mu, self.delta.abs() * k)
    }
}

/// Bogoliubov angle at radial momentum `k ≥ 0`.
pub fn angle_radial(p: &Pip2dParams, k: f64) -> Result<f64> {
    let (e, d) = p.components(k);
    if e.abs() < GAP_TOLERANCE && d.abs() < GAP_TOLERANCE {
        return Err(Error::GapClosed { k });
    }
    Ok(0.5 * d.atan2(e))
}

pub fn angle2d(p: &Pip2dParams, kx: f64, ky: f64) -> Result<f64> {
    angle_radial(p, kx.hypot(ky))
}

/// `E(k) = √(ε² + |Δ(k)|²)`.
pub fn energy2d(p: &Pip2dParams, kx: f64, ky: f64) -> f64 {
    let (e, d) = p.components(kx.hypot(ky));
    e.hypot(d)
}

fn radial_density<F>(p: &Pip2dParams, rel_tol: f64, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let opts = QuadOptions {
        initial_panels: p.resolution,
        ..QuadOptions::with_rel_tol(rel_tol)
    };
    let scale = 1.0 / (2.0 * PI);
    match integrate(|k| Ok(k * f(k)?), 0.0, p.cutoff, &opts) {
        Ok(e) => Ok(e.value * scale),
        Err(Error::NoConvergence { partial, error_estimate }) => Err(Error::NoConvergence {
            partial: partial * scale,
            error_estimate: error_estimate * scale,
        }),
        Err(e) => Err(e),
    }
}

/// Complexity per unit area, `(1/(2π)²) ∫_{|k|≤Λ} |Δθ(k)|² d²k`.
pub fn complexity2d(reference: &Pip2dParams, target: &Pip2dParams) -> Result<f64> {
    complexity2d_tol(reference, target, 1e-12)
}

pub fn complexity2d_tol(reference: &Pip2dParams, target: &Pip2dParams, rel_tol: f64) -> Result<f64> {
    if reference.mass != target.mass
        || reference.cutoff != target.cutoff
        || reference.resolution != target.resolution
    {
        return Err(Error::InvalidParameter(
            "reference and target must share mass, cutoff and resolution".into(),
        ));
    }
    radial_density(target, rel_tol, |k| {
        let d = fold_angle(angle_radial(reference, k)? - angle_radial(target, k)?);
        Ok(d * d)
    })
}

/// `∂(C/L²)/∂μ_T` against the empty reference:
/// `(1/2π) ∫_0^Λ k θ_T |Δ(k)| / E(k)² dk`.
pub fn susceptibility2d(target: &Pip2dParams, rel_tol: f64) -> Result<f64> {
    radial_density(target, rel_tol, |k| {
        let theta = angle_radial(target, k)?;
        let (e, d) = target.components(k);
        Ok(theta * d / (e * e + d * d))
    })
}
