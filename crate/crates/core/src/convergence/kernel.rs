use serde::{Deserialize, Serialize};

use super::DomainSequence;
use crate::geometry::{DomainSpec, Point, Point2, Point3};

/// Upper bound on interior lattice points per check.
const MAX_LATTICE_POINTS: f64 = 250_000.0;
const BOUNDARY_SAMPLES_2D: usize = 1024;
const BOUNDARY_SAMPLES_3D: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelRow {
    pub n: u32,
    /// Interior lattice points of the limit that `Ω_n` misses.
    pub interior_missing: usize,
    /// Largest distance from a limit boundary point to `∂Ω_n`.
    pub boundary_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelReport {
    pub resolution: f64,
    pub lattice_spacing: f64,
    pub interior_points: usize,
    pub boundary_points: usize,
    pub rows: Vec<KernelRow>,
    /// Smallest `n` from which every later `Ω_n` contains all interior points.
    pub threshold: Option<u32>,
    pub interior_pass: bool,
    pub boundary_pass: bool,
    pub passed: bool,
}

/// Finite-resolution check of the two kernel conditions: interior points of
/// the limit at distance ≥ `resolution` from its boundary eventually lie in
/// `Ω_n`, and boundary points of the limit (punctures included) are within
/// `resolution` of `∂Ω_n` at the largest `n`.
pub fn kernel_check(seq: &DomainSequence, resolution: f64) -> KernelReport {
    let (interior, spacing) = interior_lattice(seq, resolution);
    let boundary = limit_boundary(seq);
    let rows: Vec<KernelRow> = seq
        .members
        .iter()
        .map(|m| KernelRow {
            n: m.n,
            interior_missing: interior.iter().filter(|p| !m.domain.contains(**p)).count(),
            boundary_distance: boundary
                .iter()
                .map(|p| m.domain.distance_to_boundary(*p).map(|q| q.dist).unwrap_or(f64::INFINITY))
                .fold(0.0, f64::max),
        })
        .collect();
    let mut threshold = None;
    for r in rows.iter().rev() {
        if r.interior_missing > 0 {
            break;
        }
        threshold = Some(r.n);
    }
    let interior_pass = threshold.is_some() && resolution > 0.0;
    let boundary_pass = rows.last().is_some_and(|r| r.boundary_distance < resolution);
    KernelReport {
        resolution,
        lattice_spacing: spacing,
        interior_points: interior.len(),
        boundary_points: boundary.len(),
        rows,
        threshold,
        interior_pass,
        boundary_pass,
        passed: interior_pass && boundary_pass,
    }
}

fn interior_lattice(seq: &DomainSequence, resolution: f64) -> (Vec<Point>, f64) {
    let limit = &seq.limit;
    let keep = |p: Point| {
        limit.contains(p)
            && limit.distance_to_boundary(p).is_ok_and(|q| q.dist >= resolution)
            && seq.punctures.iter().all(|z| p.distance(Point::Planar(*z)) >= resolution)
    };
    let diam = limit.diameter();
    if limit.is_planar() {
        let Ok([x0, x1, y0, y1]) = limit.bounding_box2() else {
            return (Vec::new(), resolution);
        };
        let spacing = resolution.max(((x1 - x0) * (y1 - y0) / MAX_LATTICE_POINTS).sqrt());
        let (nx, ny) = (((x1 - x0) / spacing) as usize + 1, ((y1 - y0) / spacing) as usize + 1);
        let pts = (0..ny)
            .flat_map(|j| (0..nx).map(move |i| Point::Planar(Point2::new(x0 + i as f64 * spacing, y0 + j as f64 * spacing))))
            .filter(|p| keep(*p))
            .collect();
        (pts, spacing)
    } else {
        let center = match limit {
            DomainSpec::Ball3 { center, .. } => *center,
            DomainSpec::Tube3 { ambient, .. } => ambient.center,
            _ => unreachable!(),
        };
        let spacing = resolution.max(diam / MAX_LATTICE_POINTS.cbrt());
        let m = (diam / spacing) as usize + 1;
        let lo = center - Point3::new(0.5 * diam, 0.5 * diam, 0.5 * diam);
        let mut pts = Vec::new();
        for k in 0..m {
            for j in 0..m {
                for i in 0..m {
                    let p = Point::Spatial(lo + Point3::new(i as f64, j as f64, k as f64) * spacing);
                    if keep(p) {
                        pts.push(p);
                    }
                }
            }
        }
        (pts, spacing)
    }
}

fn limit_boundary(seq: &DomainSequence) -> Vec<Point> {
    let m = if seq.limit.is_planar() { BOUNDARY_SAMPLES_2D } else { BOUNDARY_SAMPLES_3D };
    let mut pts: Vec<Point> = seq
        .limit
        .boundary_sample(m)
        .map(|v| v.into_iter().map(|(p, _)| p).collect())
        .unwrap_or_default();
    pts.extend(seq.punctures.iter().map(|z| Point::Planar(*z)));
    pts
}
