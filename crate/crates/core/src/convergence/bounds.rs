use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::closed_form::green_slit_ray;
use crate::error::{GreenError, Result};
use crate::evaluator::{planar_evaluator, GreenEvaluator};
use crate::geometry::{DiskSpec, DomainSpec, PlanarComponent, Point2};
use crate::mfs::MfsParams;
use crate::wos::{estimate_green_2d, WosParams};

/// Distance below which the Koebe-chain bound applies.
pub const KOEBE_RANGE: f64 = 1.0 / 128.0;
const NEAREST_OFFSET: f64 = 1e-6;
const MAX_DRAWS_PER_SAMPLE: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundViolation {
    pub z: Point2,
    pub value: f64,
    pub bound: f64,
}

/// A point at log-uniform distance in `[NEAREST_OFFSET, max_offset]` inside
/// the outer boundary, along the inward normal.
fn near_outer(outer: &PlanarComponent, max_offset: f64, rng: &mut ChaCha8Rng) -> Point2 {
    let t = rng.random::<f64>();
    let (lo, hi) = (NEAREST_OFFSET.ln(), max_offset.ln());
    let delta = (lo + (hi - lo) * rng.random::<f64>()).exp();
    outer.point_at(t) - outer.normal_at(t) * delta
}

fn require_simply_connected(d: &DomainSpec) -> Result<()> {
    let simply = matches!(d, DomainSpec::Disk { .. })
        || matches!(d, DomainSpec::CircleDomain { holes, .. } if holes.is_empty());
    if simply {
        Ok(())
    } else {
        Err(GreenError::Precondition("the Koebe-chain bound needs a simply connected domain".into()))
    }
}

/// Check `g(z, w) ≤ √(128 · dist(z, ∂Ω))` at `samples` points with
/// `dist(z, ∂Ω) ≤ 1/128`, for a simply connected domain. Returns violators.
pub fn koebe_bound_check(
    d: &DomainSpec,
    w: Point2,
    samples: usize,
    seed: u64,
    params: &MfsParams,
) -> Result<Vec<BoundViolation>> {
    require_simply_connected(d)?;
    let g = planar_evaluator(d, w, params)?;
    koebe_bound_check_with(d, &*g, samples, seed)
}

/// [`koebe_bound_check`] against a given evaluator of `d`.
pub fn koebe_bound_check_with(
    d: &DomainSpec,
    g: &dyn GreenEvaluator,
    samples: usize,
    seed: u64,
) -> Result<Vec<BoundViolation>> {
    require_simply_connected(d)?;
    let w = g.pole().finite().ok_or(GreenError::Precondition("pole must be finite".into()))?;
    let tol = g.error_bound() + 1e-12;
    let outer = d.planar_components()?.remove(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut accepted = 0;
    let mut draws = 0;
    while accepted < samples {
        draws += 1;
        if draws > samples * MAX_DRAWS_PER_SAMPLE {
            return Err(GreenError::Numerical("could not place near-boundary samples".into()));
        }
        let z = near_outer(&outer, KOEBE_RANGE, &mut rng);
        let q = d.query2(z)?;
        if !q.inside || q.dist > KOEBE_RANGE || (z - w).norm() < KOEBE_RANGE {
            continue;
        }
        accepted += 1;
        let (value, bound) = (g.value(z), (128.0 * q.dist).sqrt());
        if value > bound + tol {
            out.push(BoundViolation { z, value, bound });
        }
    }
    Ok(out)
}

/// Check `g(z, w) ≤ h_d(|z − w|)`, where `h_d` is the Green's function of the
/// plane slit along `(−∞, −d]` and `d = dist(w, ∂Ω)`. Half the samples are
/// uniform in the domain, half near its boundary.
pub fn symmetrization_check(
    d: &DomainSpec,
    w: Point2,
    samples: usize,
    seed: u64,
    params: &MfsParams,
) -> Result<Vec<BoundViolation>> {
    let g = planar_evaluator(d, w, params)?;
    symmetrization_check_with(d, &*g, samples, seed)
}

/// [`symmetrization_check`] against a given evaluator of `d`.
pub fn symmetrization_check_with(
    d: &DomainSpec,
    g: &dyn GreenEvaluator,
    samples: usize,
    seed: u64,
) -> Result<Vec<BoundViolation>> {
    let w = g.pole().finite().ok_or(GreenError::Precondition("pole must be finite".into()))?;
    let tol = g.error_bound() + 1e-12;
    let dw = d.query2(w)?.dist;
    let [x0, x1, y0, y1] = d.bounding_box2()?;
    let comps = d.planar_components()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut accepted = 0;
    let mut draws = 0;
    while accepted < samples {
        draws += 1;
        if draws > samples * MAX_DRAWS_PER_SAMPLE {
            return Err(GreenError::Numerical("could not place samples in the domain".into()));
        }
        let z = if accepted % 2 == 0 {
            Complex64::new(rng.random_range(x0..x1), rng.random_range(y0..y1))
        } else {
            let comp = &comps[rng.random_range(0..comps.len())];
            let t = rng.random::<f64>();
            let delta = (NEAREST_OFFSET.ln() + (0.1f64.ln() - NEAREST_OFFSET.ln()) * rng.random::<f64>()).exp();
            let side = if rng.random::<bool>() { 1.0 } else { -1.0 };
            comp.point_at(t) + comp.normal_at(t) * (side * delta * dw)
        };
        if !d.contains2(z) || (z - w).norm() < 1e-3 {
            continue;
        }
        accepted += 1;
        let value = g.value(z);
        let bound = green_slit_ray(dw, Complex64::new((z - w).norm(), 0.0))?;
        if value > bound + tol {
            out.push(BoundViolation { z, value, bound });
        }
    }
    Ok(out)
}

/// Check `g_inner ≤ g_outer` at `points`, for `inner ⊂ outer` (asserted by
/// the caller) with common pole `w`.
pub fn monotonicity_check(
    inner: &DomainSpec,
    outer: &DomainSpec,
    w: Point2,
    points: &[Point2],
    params: &MfsParams,
) -> Result<Vec<BoundViolation>> {
    let gi = planar_evaluator(inner, w, params)?;
    let go = planar_evaluator(outer, w, params)?;
    let tol = gi.error_bound() + go.error_bound() + 1e-12;
    Ok(points
        .iter()
        .filter(|z| **z != w)
        .filter_map(|&z| {
            let (value, bound) = (gi.value(z), go.value(z));
            (value > bound + tol).then_some(BoundViolation { z, value, bound })
        })
        .collect())
}

/// `D(0, 4)` with the segment `[δ, 1]` removed.
pub fn slit_decay_domain(delta: f64) -> DomainSpec {
    DomainSpec::Slit {
        ambient: DiskSpec { center: Complex64::new(0.0, 0.0), radius: 4.0 },
        segments: vec![[Complex64::new(delta, 0.0), Complex64::new(1.0, 0.0)]],
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlitDecayRow {
    pub delta: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub truncated_walks: usize,
    /// Non-positive estimates are left out of the fit.
    pub excluded: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlitDecay {
    pub rows: Vec<SlitDecayRow>,
    /// Fit `g ≈ C · δ^α`.
    pub c: f64,
    pub alpha: f64,
    pub flagged: bool,
}

/// Estimate `g(0, w)` on [`slit_decay_domain`] for each `δ` and fit a power
/// law in `δ`.
pub fn slit_decay_experiment(deltas: &[f64], w: Point2, wos: &WosParams) -> Result<SlitDecay> {
    if deltas.iter().any(|d| !(*d > 0.0 && *d <= 0.5)) || deltas.windows(2).any(|p| p[1] >= p[0]) {
        return Err(GreenError::Precondition("deltas must be decreasing values in (0, 1/2]".into()));
    }
    if w.norm() < 2.0 || w.norm() >= 4.0 {
        return Err(GreenError::Precondition("the pole must satisfy 2 ≤ |w| < 4".into()));
    }
    let z = Complex64::new(0.0, 0.0);
    let mut rows = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let r = estimate_green_2d(&slit_decay_domain(delta), z, w, wos)?;
        rows.push(SlitDecayRow {
            delta,
            estimate: r.estimate,
            std_error: r.std_error,
            truncated_walks: r.truncated_walks,
            excluded: !(r.estimate > 0.0),
        });
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| !r.excluded)
        .map(|r| (r.delta.ln(), r.estimate.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(GreenError::Numerical("fewer than two positive estimates to fit".into()));
    }
    let (intercept, alpha) = fit_line(&pts);
    Ok(SlitDecay {
        flagged: rows.iter().any(|r| r.excluded),
        rows,
        c: intercept.exp(),
        alpha,
    })
}

/// Least-squares line `y = a + b x`; returns `(a, b)`.
fn fit_line(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let b = sxy / sxx;
    (my - b * mx, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64, y: f64) -> Point2 {
        Complex64::new(x, y)
    }

    #[test]
    fn fit_recovers_power_law() {
        let pts: Vec<(f64, f64)> = (1..8).map(|k| {
            let d = 0.5f64.powi(k);
            (d.ln(), (3.0 * d.sqrt()).ln())
        }).collect();
        let (a, b) = fit_line(&pts);
        assert!((a.exp() - 3.0).abs() < 1e-12 && (b - 0.5).abs() < 1e-12);
    }

    #[test]
    fn disk_bounds_hold() {
        let d = DomainSpec::disk(c(0., 0.), 1.0);
        let p = MfsParams::default();
        assert!(koebe_bound_check(&d, c(0., 0.), 1000, 1, &p).unwrap().is_empty());
        assert!(symmetrization_check(&d, c(0., 0.), 1000, 2, &p).unwrap().is_empty());
        let big = DomainSpec::disk(c(0., 0.), 100.0);
        assert!(koebe_bound_check(&big, c(0., 0.), 1000, 3, &p).unwrap().is_empty());
    }

    #[test]
    fn koebe_rejects_multiply_connected() {
        let a = DomainSpec::annulus(c(0., 0.), 0.25, 1.0);
        assert!(koebe_bound_check(&a, c(0.5, 0.), 10, 0, &MfsParams::default()).is_err());
    }

    #[test]
    fn monotone_disks() {
        let inner = DomainSpec::disk(c(0., 0.), 1.0);
        let outer = DomainSpec::disk(c(0., 0.), 2.0);
        let pts: Vec<Point2> = (1..100).map(|k| c(k as f64 / 50.0 - 1.0, 0.3)).collect();
        let p = MfsParams::default();
        assert!(monotonicity_check(&inner, &outer, c(0., 0.), &pts, &p).unwrap().is_empty());
        assert!(monotonicity_check(&inner, &inner, c(0., 0.), &pts, &p).unwrap().is_empty());
        assert_eq!(monotonicity_check(&outer, &inner, c(0., 0.), &pts, &p).unwrap().len(), pts.len());
    }

    #[test]
    fn slit_decay_preconditions() {
        let p = WosParams::default().with_walks(100);
        assert!(slit_decay_experiment(&[0.25, 0.5], c(-3., 0.), &p).is_err());
        assert!(slit_decay_experiment(&[0.5, 0.25], c(-1., 0.), &p).is_err());
    }
}
