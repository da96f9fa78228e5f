//! Kitaev chain parameters, the antiperiodic momentum grid, and the
//! per-mode Bogoliubov data (dispersion, pairing function, angle).
//!
//! Energies are in units of the hopping amplitude, which is fixed to 1.
//! A chemical potential of `+inf` (`-inf`) is accepted and represents the
//! empty (filled) product state, whose Bogoliubov angle is identically 0
//! (π/2).

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Below this magnitude an atan2 argument counts as zero.
pub const GAP_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Chain {
    /// Nearest-neighbour pairing, `Δ sin k`.
    ShortRange,
    /// Pairing decaying as `1/d^alpha` with the ring distance `d = min(l, L-l)`.
    LongRange { alpha: f64 },
}

#[derive(Debug)]
struct LongRangeTable {
    /// `1/d_l^alpha` for `l = 1..L-1`.
    weights: Vec<f64>,
    /// Pairing function on the antiperiodic grid.
    on_grid: Vec<f64>,
}

impl LongRangeTable {
    fn new(alpha: f64, l: usize) -> Self {
        let weights: Vec<f64> = (1..l)
            .map(|ell| {
                let d = ell.min(l - ell) as f64;
                d.powf(-alpha)
            })
            .collect();
        let on_grid = (0..l / 2)
            .into_par_iter()
            .map(|n| long_range_sum(&weights, grid_point(n, l)))
            .collect();
        Self { weights, on_grid }
    }
}

fn long_range_sum(weights: &[f64], k: f64) -> f64 {
    weights
        .iter()
        .enumerate()
        .map(|(i, w)| (k * (i + 1) as f64).sin() * w)
        .sum()
}

#[inline]
fn grid_point(n: usize, l: usize) -> f64 {
    PI * (2 * n + 1) as f64 / l as f64
}

/// Parameters of a (short- or long-range) Kitaev chain.
#[derive(Debug, Clone)]
pub struct ModelParams {
    chain: Chain,
    mu: f64,
    delta: f64,
    l: usize,
    table: Option<Arc<LongRangeTable>>,
}

impl PartialEq for ModelParams {
    fn eq(&self, other: &Self) -> bool {
        self.chain == other.chain
            && self.mu == other.mu
            && self.delta == other.delta
            && self.l == other.l
    }
}

fn check_size(l: usize) -> Result<()> {
    if l < 4 || !l.is_multiple_of(2) {
        return Err(Error::InvalidSize(l));
    }
    Ok(())
}

fn check_mu(mu: f64) -> Result<()> {
    if mu.is_nan() {
        return Err(Error::InvalidParameter("mu is NaN".into()));
    }
    Ok(())
}

fn check_delta(delta: f64) -> Result<()> {
    if !delta.is_finite() {
        return Err(Error::InvalidParameter(format!("delta = {delta}")));
    }
    Ok(())
}

impl ModelParams {
    pub fn short_range(mu: f64, delta: f64, l: usize) -> Result<Self> {
        check_size(l)?;
        check_mu(mu)?;
        check_delta(delta)?;
        Ok(Self {
            chain: Chain::ShortRange,
            mu,
            delta,
            l,
            table: None,
        })
    }

    pub fn long_range(mu: f64, delta: f64, alpha: f64, l: usize) -> Result<Self> {
        check_size(l)?;
        check_mu(mu)?;
        check_delta(delta)?;
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha = {alpha}")));
        }
        Ok(Self {
            chain: Chain::LongRange { alpha },
            mu,
            delta,
            l,
            table: Some(Arc::new(LongRangeTable::new(alpha, l))),
        })
    }

    pub fn new(chain: Chain, mu: f64, delta: f64, l: usize) -> Result<Self> {
        match chain {
            Chain::ShortRange => Self::short_range(mu, delta, l),
            Chain::LongRange { alpha } => Self::long_range(mu, delta, alpha, l),
        }
    }

    pub fn chain(&self) -> Chain {
        self.chain
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn size(&self) -> usize {
        self.l
    }

    /// Same chain and size with a different chemical potential. The
    /// long-range pairing table is shared, not recomputed.
    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        check_mu(mu)?;
        Ok(Self { mu, ..self.clone() })
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        check_delta(delta)?;
        Ok(Self {
            delta,
            ..self.clone()
        })
    }

    pub fn grid(&self) -> MomentumGrid {
        MomentumGrid::for_valid_size(self.l)
    }

    /// Pairing function at the `n`-th grid momentum.
    pub fn pairing_at(&self, n: usize) -> f64 {
        match &self.table {
            Some(t) => t.on_grid[n],
            None => grid_point(n, self.l).sin(),
        }
    }

    /// Kinetic and pairing components `(μ + cos k, Δ g(k))` at grid index `n`.
    pub fn components_at(&self, n: usize) -> (f64, f64) {
        let k = grid_point(n, self.l);
        (self.mu + k.cos(), self.delta * self.pairing_at(n))
    }

    pub fn components(&self, k: f64) -> (f64, f64) {
        (self.mu + k.cos(), self.delta * pairing_function(self, k))
    }

    pub fn angle_at(&self, n: usize) -> Result<f64> {
        let (x, y) = self.components_at(n);
        angle_from_components(x, y, grid_point(n, self.l))
    }

    pub fn dispersion_at(&self, n: usize) -> f64 {
        let (x, y) = self.components_at(n);
        x.hypot(y)
    }
}

/// Antiperiodic momenta `k_n = 2π(n + 1/2)/L`, `n = 0..L/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumGrid {
    points: Vec<f64>,
}

impl MomentumGrid {
    fn for_valid_size(l: usize) -> Self {
        Self {
            points: (0..l / 2).map(|n| grid_point(n, l)).collect(),
        }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngleProfile {
    pub grid: MomentumGrid,
    pub theta: Vec<f64>,
}

pub fn build_grid(l: usize) -> Result<MomentumGrid> {
    check_size(l)?;
    Ok(MomentumGrid::for_valid_size(l))
}

/// `sin k` for the short-range chain, `Σ_{l=1}^{L-1} sin(kl)/d_l^α` for the
/// long-range one. Valid at any `k`, not only on the grid.
pub fn pairing_function(p: &ModelParams, k: f64) -> f64 {
    match &p.table {
        Some(t) => long_range_sum(&t.weights, k),
        None => k.sin(),
    }
}

pub fn dispersion(p: &ModelParams, k: f64) -> f64 {
    let (x, y) = p.components(k);
    x.hypot(y)
}

/// Half the two-argument arctangent, so θ ∈ (−π/2, π/2].
pub(crate) fn angle_from_components(x: f64, y: f64, k: f64) -> Result<f64> {
    if x.abs() < GAP_TOLERANCE && y.abs() < GAP_TOLERANCE {
        return Err(Error::GapClosed { k });
    }
    Ok(0.5 * y.atan2(x))
}

pub fn bogoliubov_angle(p: &ModelParams, k: f64) -> Result<f64> {
    let (x, y) = p.components(k);
    angle_from_components(x, y, k)
}

pub fn angle_profile(p: &ModelParams) -> Result<AngleProfile> {
    let theta = (0..p.l / 2).map(|n| p.angle_at(n)).collect::<Result<_>>()?;
    Ok(AngleProfile {
        grid: p.grid(),
        theta,
    })
}
