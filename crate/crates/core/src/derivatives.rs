//! Susceptibilities of the complexity density, branch points of the contour
//! representation, phase classification and the near-critical asymptotics.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::complexity::{density_limit, signed_delta_theta, total_complexity, StatePair};
use crate::error::{Error, Result};
use crate::model::{Chain, ModelParams};
use crate::quadrature::{integrate, QuadOptions};

/// Momenta in (0, π) where the folded Δθ jumps by π (reference and target
/// in phases of opposite winding). Located by scanning and bisection.
pub(crate) fn fold_jumps(pair: &StatePair) -> Result<Vec<f64>> {
    const SCAN: usize = 1024;
    let mut jumps = Vec::new();
    let mut prev = (PI / SCAN as f64 * 0.5, signed_delta_theta(pair, PI / SCAN as f64 * 0.5)?);
    for i in 1..SCAN {
        let k = PI * (i as f64 + 0.5) / SCAN as f64;
        let d = signed_delta_theta(pair, k)?;
        if (d - prev.1).abs() > FRAC_PI_2 {
            let (mut a, mut b, da) = (prev.0, k, prev.1);
            while b - a > 1e-15 * b {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if (signed_delta_theta(pair, m)? - da).abs() > FRAC_PI_2 {
                    b = m;
                } else {
                    a = m;
                }
            }
            jumps.push(0.5 * (a + b));
        }
        prev = (k, d);
    }
    Ok(jumps)
}

fn susceptibility_integral<F>(pair: &StatePair, rel_tol: f64, weight: F) -> Result<f64>
where
    F: Fn(f64, f64, f64) -> f64,
{
    let target = pair.target();
    let opts = QuadOptions::with_rel_tol(rel_tol);
    let mut cuts = vec![0.0];
    cuts.extend(fold_jumps(pair)?);
    cuts.push(PI);
    let mut value = 0.0;
    let mut error = 0.0;
    let mut failed = false;
    for w in cuts.windows(2) {
        let est = integrate(
            |k| {
                let d = signed_delta_theta(pair, k)?;
                let (x, y) = target.components(k);
                let g = crate::model::pairing_function(target, k);
                Ok(d * weight(x, g, x * x + y * y))
            },
            w[0],
            w[1],
            &opts,
        );
        match est {
            Ok(e) => {
                value += e.value;
                error += e.error;
            }
            Err(Error::NoConvergence { partial, error_estimate }) => {
                value += partial;
                error += error_estimate;
                failed = true;
            }
            Err(e) => return Err(e),
        }
    }
    let norm = 2.0 * PI;
    if failed {
        return Err(Error::NoConvergence {
            partial: value / norm,
            error_estimate: error / norm,
        });
    }
    Ok(value / norm)
}

/// `∂(C/L)/∂μ_T = (Δ_T/2π) ∫_0^π Δθ g / E² dk`, with `Δθ = θ_R − θ_T` signed.
pub fn susceptibility_mu(pair: &StatePair, rel_tol: f64) -> Result<f64> {
    let delta_t = pair.target().delta();
    susceptibility_integral(pair, rel_tol, |_, g, e2| delta_t * g / e2)
}

/// `∂(C/L)/∂Δ_T = −(1/2π) ∫_0^π Δθ g (μ_T + cos k) / E² dk`.
pub fn susceptibility_delta(pair: &StatePair, rel_tol: f64) -> Result<f64> {
    susceptibility_integral(pair, rel_tol, |x, g, e2| -g * x / e2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    Mu,
    Delta,
}

/// What the finite difference is taken of.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scale {
    /// `total_complexity / L` on the grid of the pair.
    FiniteSize,
    /// `density_limit` at the given relative tolerance.
    Thermodynamic { rel_tol: f64 },
}

fn shifted(pair: &StatePair, which: Param, by: f64) -> Result<StatePair> {
    let t = pair.target();
    let t = match which {
        Param::Mu => t.with_mu(t.mu() + by)?,
        Param::Delta => t.with_delta(t.delta() + by)?,
    };
    pair.with_target(t)
}

fn density(pair: &StatePair, scale: Scale) -> Result<f64> {
    match scale {
        Scale::FiniteSize => Ok(total_complexity(pair)?.density),
        Scale::Thermodynamic { rel_tol } => density_limit(pair, rel_tol),
    }
}

/// Centered difference of the density in one target parameter.
pub fn susceptibility_fd(pair: &StatePair, which: Param, step: f64, scale: Scale) -> Result<f64> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidParameter(format!("step must be positive, got {step}")));
    }
    let up = density(&shifted(pair, which, step)?, scale)?;
    let down = density(&shifted(pair, which, -step)?, scale)?;
    Ok((up - down) / (2.0 * step))
}

/// Roots `z1, z2 = (−μ ± √(μ²+Δ²−1))/(1+Δ)` and `z3, z4` with `1−Δ` in the
/// denominator. A pair is `None` when its denominator vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPoints {
    pub z: [Option<Complex64>; 4],
}

impl BranchPoints {
    /// `|z_i|`, recovering an undefined root from `z1 z4 = z2 z3 = 1`.
    pub fn moduli(&self) -> [f64; 4] {
        let m = |z: Option<Complex64>, partner: Option<Complex64>| match (z, partner) {
            (Some(z), _) => z.norm(),
            (None, Some(p)) => 1.0 / p.norm(),
            (None, None) => f64::NAN,
        };
        let [z1, z2, z3, z4] = self.z;
        [m(z1, z4), m(z2, z3), m(z3, z2), m(z4, z1)]
    }

    /// Which roots lie strictly inside the unit circle; `None` if any root
    /// sits on it (within `tol`).
    pub fn inside(&self, tol: f64) -> Option<[bool; 4]> {
        let m = self.moduli();
        if m.iter().any(|r| (r - 1.0).abs() <= tol) {
            return None;
        }
        Some(m.map(|r| r < 1.0))
    }
}

pub fn branch_points(mu: f64, delta: f64) -> BranchPoints {
    let s = Complex64::from(mu * mu + delta * delta - 1.0).sqrt();
    let plus = -mu + s;
    let minus = -mu - s;
    let over = |num: Complex64, den: f64| (den != 0.0).then(|| num / den);
    BranchPoints {
        z: [
            over(plus, 1.0 + delta),
            over(minus, 1.0 + delta),
            over(plus, 1.0 - delta),
            over(minus, 1.0 - delta),
        ],
    }
}

/// Winding number stored as twice its value, so long-range half-integers are
/// exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Winding(pub i32);

impl Winding {
    pub fn from_int(w: i32) -> Self {
        Self(2 * w)
    }
    pub fn value(self) -> f64 {
        0.5 * self.0 as f64
    }
    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }
}

impl fmt::Display for Winding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseLabel {
    pub winding: Winding,
    /// `|z_i| < 1` for z1..z4, from the short-range root formula.
    pub inside_points: [bool; 4],
}

/// Winding read off from which branch points are inside the unit circle.
pub fn branch_winding(inside: [bool; 4]) -> Option<Winding> {
    match inside {
        [true, true, false, false] => Some(Winding::from_int(1)),
        [false, false, true, true] => Some(Winding::from_int(-1)),
        [true, false, true, false] | [false, true, false, true] => Some(Winding::from_int(0)),
        _ => None,
    }
}

/// Rounding midpoints closer than this make the winding ambiguous.
pub const WINDING_MARGIN: f64 = 0.1;

/// Total angle swept by a sequence of planar vectors, and the largest
/// single-step change.
fn swept_angle(points: impl Iterator<Item = (f64, f64)>) -> (f64, f64) {
    let mut prev: Option<f64> = None;
    let mut total = 0.0;
    let mut largest: f64 = 0.0;
    for (x, y) in points {
        let phi = y.atan2(x);
        if let Some(p) = prev {
            let mut d = phi - p;
            if d > PI {
                d -= 2.0 * PI;
            } else if d <= -PI {
                d += 2.0 * PI;
            }
            total += d;
            largest = largest.max(d.abs());
        }
        prev = Some(phi);
    }
    (total, largest)
}

/// Sweep of `(μ + cos k, Δ g(k))` over `[π/L, π − π/L]` with `fine·L` samples.
///
/// Off the antiperiodic grid the finite long-range sum oscillates on the
/// scale `π/L`, so for long-range chains the samples are the grid points
/// of a `2·fine·L` chain with the same exponent instead.
fn sweep(p: &ModelParams, fine: usize) -> Result<(f64, f64)> {
    let l = p.size();
    match p.chain() {
        Chain::ShortRange => {
            let (a, b) = (PI / l as f64, PI - PI / l as f64);
            let n = fine * l + 1;
            Ok(swept_angle((0..n).map(|i| {
                p.components(a + (b - a) * i as f64 / (n - 1) as f64)
            })))
        }
        Chain::LongRange { .. } => {
            let refined = ModelParams::new(p.chain(), p.mu(), p.delta(), 2 * fine * l)?;
            Ok(swept_angle(
                (0..fine * l).map(|n| refined.components_at(n)),
            ))
        }
    }
}

/// Winding from the swept angle over half the zone; the other half mirrors
/// it, so `W = Δφ/π`. The sweep is repeated at twice the density and both
/// must round to the same half-integer.
pub fn winding_number(p: &ModelParams) -> Result<Winding> {
    let round = |sweep: f64| {
        let twice = 2.0 * sweep / PI;
        let nearest = twice.round();
        // midpoints between half-integers sit at odd multiples of π/4
        let to_mid = (0.5 - (twice - nearest).abs()) * PI / 2.0;
        (nearest as i32, to_mid)
    };
    let (total, step) = sweep(p, 10)?;
    let (w, margin) = round(total);
    let (w2, _) = round(sweep(p, 20)?.0);
    // a step near ±π means the vector passed through the origin unresolved
    if margin < WINDING_MARGIN || w != w2 || step > PI / 2.0 {
        return Err(Error::BoundaryAmbiguous(format!(
            "winding undetermined at μ={}, Δ={}",
            p.mu(),
            p.delta()
        )));
    }
    Ok(Winding(w))
}

pub fn classify_phase(p: &ModelParams) -> Result<PhaseLabel> {
    let winding = winding_number(p)?;
    let inside_points = branch_points(p.mu(), p.delta()).moduli().map(|r| r < 1.0);
    Ok(PhaseLabel {
        winding,
        inside_points,
    })
}

/// Short-range phase boundary: `|μ| = 1`, or `Δ = 0` with `|μ| < 1`.
pub fn on_phase_boundary(mu: f64, delta: f64, tol: f64) -> bool {
    (mu.abs() - 1.0).abs() <= tol || (delta.abs() <= tol && mu.abs() < 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseCell {
    pub mu: f64,
    pub delta: f64,
    pub boundary: bool,
    pub winding: Option<Winding>,
    pub branch: Option<Winding>,
}

/// Both classifications on a `(μ, Δ)` grid, row-major in `mu_values`.
pub fn phase_map(chain: Chain, mu_values: &[f64], delta_values: &[f64], l: usize) -> Result<Vec<PhaseCell>> {
    ModelParams::new(chain, 0.0, 1.0, l)?;
    let cells: Vec<(f64, f64)> = mu_values
        .iter()
        .flat_map(|&m| delta_values.iter().map(move |&d| (m, d)))
        .collect();
    cells
        .par_iter()
        .map(|&(mu, delta)| {
            let p = ModelParams::new(chain, mu, delta, l)?;
            Ok(PhaseCell {
                mu,
                delta,
                boundary: on_phase_boundary(mu, delta, 1e-9),
                winding: winding_number(&p).ok(),
                branch: branch_points(mu, delta).inside(1e-12).and_then(branch_winding),
            })
        })
        .collect()
}

/// Leading divergence of `∂(C/L)/∂μ_T` near `|μ_T| = 1`:
/// `sign(μ)/(8√(μ²+Δ²−1)) · ln|(μ²−1)/(μ²+Δ²−1)|`.
pub fn asymptotic_mu_divergence(mu_t: f64, delta_t: f64) -> Result<f64> {
    let r = mu_t * mu_t + delta_t * delta_t - 1.0;
    if r.is_nan() || r <= 0.0 || mu_t.abs() == 1.0 {
        return Err(Error::Domain(format!(
            "needs μ²+Δ² > 1 and |μ| ≠ 1, got μ={mu_t}, Δ={delta_t}"
        )));
    }
    Ok(mu_t.signum() / (8.0 * r.sqrt()) * ((mu_t * mu_t - 1.0) / r).abs().ln())
}

/// Leading divergence of `∂(C/L)/∂Δ_T` as `Δ_T → 0` on the topological side:
/// `¼(1 + |μΔ|/√|μ²+Δ²−1|) ln|Δ|`.
pub fn asymptotic_delta_divergence(mu_t: f64, delta_t: f64) -> Result<f64> {
    let r = mu_t * mu_t + delta_t * delta_t - 1.0;
    if mu_t.abs() > 1.0 {
        return Err(Error::Domain(format!(
            "analytic from the trivial side (|μ| = {} > 1)",
            mu_t.abs()
        )));
    }
    if r == 0.0 || delta_t == 0.0 {
        return Err(Error::Domain(format!("singular at μ={mu_t}, Δ={delta_t}")));
    }
    Ok(0.25 * (1.0 + (mu_t * delta_t).abs() / r.abs().sqrt()) * delta_t.abs().ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::density_limit;

    fn sr(mu: f64, delta: f64) -> ModelParams {
        ModelParams::short_range(mu, delta, 1000).unwrap()
    }

    fn pair(mu_r: f64, delta_r: f64, mu_t: f64, delta_t: f64) -> StatePair {
        StatePair::new(sr(mu_r, delta_r), sr(mu_t, delta_t)).unwrap()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(a.abs())
    }

    #[test]
    fn identical_states_have_zero_slope() {
        let p = pair(0.4, 1.1, 0.4, 1.1);
        assert_eq!(susceptibility_mu(&p, 1e-10).unwrap(), 0.0);
        assert_eq!(susceptibility_delta(&p, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn mu_derivative_matches_finite_difference() {
        let p = pair(0.0, 1.0, 0.5, 1.0);
        let a = susceptibility_mu(&p, 1e-12).unwrap();
        let fd = susceptibility_fd(&p, Param::Mu, 1e-4, Scale::Thermodynamic { rel_tol: 1e-13 }).unwrap();
        assert!(close(a, fd, 1e-5), "{a} vs {fd}");
    }

    #[test]
    fn delta_derivative_matches_finite_difference() {
        let p = pair(0.0, 1.3, 0.5, 1.3);
        let p = p.with_target(sr(0.5, 1.1)).unwrap();
        let a = susceptibility_delta(&p, 1e-12).unwrap();
        let fd = susceptibility_fd(&p, Param::Delta, 1e-4, Scale::Thermodynamic { rel_tol: 1e-13 }).unwrap();
        assert!(close(a, fd, 1e-5), "{a} vs {fd}");
    }

    #[test]
    fn analytic_and_fd_agree_on_interior_points() {
        let points = [
            (0.0, 1.0, 0.5, 1.0),
            (0.0, 1.0, -0.5, 1.0),
            (0.0, 1.0, 1.5, 1.0),
            (0.0, 1.0, 2.5, 0.7),
            (0.3, 0.8, -0.2, 1.4),
            (2.0, 1.0, 1.3, 1.0),
            (2.0, 1.0, 0.6, 0.5),
            (-1.5, 1.2, 0.1, 1.2),
            (0.5, -1.0, 0.2, 1.0),
            (3.0, 1.0, -3.0, 1.0),
        ];
        for &(mr, dr, mt, dt) in &points {
            let p = pair(mr, dr, mt, dt);
            let fd_opts = Scale::Thermodynamic { rel_tol: 1e-13 };
            let a = susceptibility_mu(&p, 1e-11).unwrap();
            let fd = susceptibility_fd(&p, Param::Mu, 1e-4, fd_opts).unwrap();
            assert!(close(a, fd, 1e-5), "μ at {:?}: {a} vs {fd}", (mr, dr, mt, dt));
            let a = susceptibility_delta(&p, 1e-11).unwrap();
            let fd = susceptibility_fd(&p, Param::Delta, 1e-4, fd_opts).unwrap();
            assert!(close(a, fd, 1e-5), "Δ at {:?}: {a} vs {fd}", (mr, dr, mt, dt));
        }
    }

    #[test]
    fn mu_slope_is_odd_under_reflection() {
        for &(mr, mt, d) in &[(0.0, 0.5, 1.0), (0.3, 1.7, 0.8), (-2.0, 0.4, 1.2)] {
            let a = susceptibility_mu(&pair(mr, d, mt, d), 1e-12).unwrap();
            let b = susceptibility_mu(&pair(-mr, d, -mt, d), 1e-12).unwrap();
            assert!((a + b).abs() < 1e-10 * a.abs().max(1e-3), "{a} {b}");
        }
    }

    #[test]
    fn slope_difference_follows_log_law() {
        // trivial reference: the quoted law holds with its sign
        let s = |mt: f64| susceptibility_mu(&pair(2.0, 1.0, mt, 1.0), 1e-10).unwrap();
        let diff = s(1.01) - s(1.001);
        let law = asymptotic_mu_divergence(1.01, 1.0).unwrap() - asymptotic_mu_divergence(1.001, 1.0).unwrap();
        assert!(close(diff, law, 0.05), "{diff} vs {law}");
        // topological reference: same magnitude, opposite sign
        let s = |mt: f64| susceptibility_mu(&pair(0.0, 1.0, mt, 1.0), 1e-10).unwrap();
        let diff = s(1.01) - s(1.001);
        assert!(close(-diff, law, 0.05), "{diff} vs {law}");
    }

    #[test]
    fn delta_slope_grows_like_quarter_log() {
        let s = |dt: f64| susceptibility_delta(&pair(0.5, 1.0, 0.5, dt), 1e-10).unwrap();
        let diff = s(1e-2) - s(1e-3);
        let law = asymptotic_delta_divergence(0.5, 1e-2).unwrap() - asymptotic_delta_divergence(0.5, 1e-3).unwrap();
        assert!(close(diff.abs(), law.abs(), 0.05), "{diff} vs {law}");
    }

    #[test]
    fn near_critical_quadrature_reports_partial_value() {
        let p = pair(0.0, 1.0, 1.0, 1.0);
        let r = susceptibility_mu(&p, 1e-14);
        assert!(matches!(r, Err(Error::NoConvergence { .. }) | Err(Error::GapClosed { .. })), "{r:?}");
    }

    #[test]
    fn fd_of_constant_family_vanishes() {
        // vacuum reference and target: Δθ ≡ 0 for every shift
        let v = ModelParams::short_range(f64::INFINITY, 1.0, 100).unwrap();
        let p = StatePair::new(v.clone(), v).unwrap();
        assert_eq!(susceptibility_fd(&p, Param::Delta, 1e-3, Scale::FiniteSize).unwrap(), 0.0);
        assert!(susceptibility_fd(&p, Param::Delta, 0.0, Scale::FiniteSize).is_err());
    }

    #[test]
    fn branch_point_values() {
        let b = branch_points(0.5, 1.3);
        let z: Vec<f64> = b.z.iter().map(|z| z.unwrap().re).collect();
        let want = [0.2041, -0.6389, -1.565, 4.898];
        for (g, w) in z.iter().zip(want) {
            assert!((g - w).abs() < 1e-3 * w.abs().max(1.0));
        }
        assert_eq!(b.inside(1e-12), Some([true, true, false, false]));
        let prod = b.z[0].unwrap() * b.z[1].unwrap();
        assert!((prod.re - (1.0 - 1.3) / 2.3).abs() < 1e-12 && prod.im.abs() < 1e-15);
    }

    #[test]
    fn degenerate_roots() {
        let (mu, delta) = (0.6, 0.8);
        let b = branch_points(mu, delta);
        let want = -mu / (1.0 + delta);
        assert!((b.z[0].unwrap() - want).norm() < 1e-8 && (b.z[1].unwrap() - want).norm() < 1e-8);
        let b = branch_points(0.3, 1.0);
        assert!(b.z[2].is_none() && b.z[3].is_none());
        let b = branch_points(0.3, -1.0);
        assert!(b.z[0].is_none() && b.z[1].is_none());
        // complex pair: conjugates with equal modulus
        let b = branch_points(0.2, 0.5);
        assert!((b.z[0].unwrap() - b.z[1].unwrap().conj()).norm() < 1e-15);
    }

    #[test]
    fn trivial_side_has_one_inner_root_per_pair() {
        let b = branch_points(2.0, 1.3);
        let inside = b.inside(1e-12).unwrap();
        assert!(inside[0] ^ inside[1]);
        assert_eq!(branch_winding(inside), Some(Winding(0)));
    }

    #[test]
    fn short_range_windings() {
        assert_eq!(classify_phase(&sr(2.0, 1.0)).unwrap().winding, Winding(0));
        assert_eq!(classify_phase(&sr(-2.0, 0.3)).unwrap().winding, Winding(0));
        assert_eq!(classify_phase(&sr(0.0, 1.0)).unwrap().winding, Winding::from_int(1));
        assert_eq!(classify_phase(&sr(0.0, -1.0)).unwrap().winding, Winding::from_int(-1));
        assert!(matches!(winding_number(&sr(0.5, 0.0)), Err(Error::BoundaryAmbiguous(_))));
        assert_eq!(Winding(-1).to_string(), "-1/2");
        assert_eq!(Winding(2).to_string(), "1");
    }

    #[test]
    fn long_range_winding_is_half_integer() {
        let p = ModelParams::long_range(0.5, 1.0, 0.0, 400).unwrap();
        let w = winding_number(&p).unwrap();
        assert!(!w.is_integer());
        assert_eq!(w, Winding(1));
    }

    #[test]
    fn branch_and_winding_classifications_agree() {
        let axis: Vec<f64> = (0..41).map(|i| -2.0 + 4.0 * i as f64 / 40.0).collect();
        let cells = phase_map(Chain::ShortRange, &axis, &axis, 200).unwrap();
        assert_eq!(cells.len(), 41 * 41);
        let mut checked = 0;
        for c in cells.iter().filter(|c| !c.boundary) {
            assert!(c.winding.is_some(), "{c:?}");
            assert_eq!(c.winding, c.branch, "{c:?}");
            let w = c.winding.unwrap();
            let expected = if c.mu.abs() > 1.0 { 0 } else { 2 * c.delta.signum() as i32 };
            assert_eq!(w, Winding(expected));
            checked += 1;
        }
        assert_eq!(checked, 41 * 41 - 2 * 41 - 19);
    }

    #[test]
    fn asymptotic_values() {
        let a = asymptotic_mu_divergence(1.01, 1.0).unwrap();
        assert!((a + 0.486).abs() < 5e-4);
        assert!((a - (0.0201f64 / 1.0201).ln() / 8.08).abs() < 1e-12);
        assert!(asymptotic_mu_divergence(1e8, 1.0).unwrap().abs() < 1e-9);
        assert_eq!(asymptotic_mu_divergence(-1.01, 1.0).unwrap(), -a);
        assert!(asymptotic_mu_divergence(1.0, 1.0).is_err());
        assert!(asymptotic_mu_divergence(0.1, 0.2).is_err());

        assert!((asymptotic_delta_divergence(0.0, 0.01).unwrap() - 0.25 * 0.01f64.ln()).abs() < 1e-15);
        assert!((asymptotic_delta_divergence(0.0, 0.01).unwrap() + 1.1513).abs() < 1e-4);
        assert_eq!(asymptotic_delta_divergence(0.5, 1.0).unwrap(), 0.0);
        assert!(asymptotic_delta_divergence(1.5, 0.1).is_err());
        assert!(asymptotic_delta_divergence(0.6, 0.8).is_err());
        // coefficient tends to 1/2 as |μ| → 1
        let d = 1e-6;
        let c = asymptotic_delta_divergence(1.0 - 1e-12, d).unwrap() / d.ln();
        assert!((c - 0.5).abs() < 1e-3);
    }

    #[test]
    fn density_limit_consistent_with_slope_sign() {
        // moving the target away from the reference raises the density
        let d0 = density_limit(&pair(0.0, 1.0, 0.5, 1.0), 1e-12).unwrap();
        let d1 = density_limit(&pair(0.0, 1.0, 0.6, 1.0), 1e-12).unwrap();
        assert!(d1 > d0);
        assert!(susceptibility_mu(&pair(0.0, 1.0, 0.55, 1.0), 1e-10).unwrap() > 0.0);
    }
}
