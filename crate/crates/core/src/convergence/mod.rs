//! Kernel convergence of domain sequences and the discrepancy measurements
//! between their Green's functions.

mod bounds;
mod kernel;

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, GreenError, Result};
use crate::evaluator::{planar_evaluator, GreenEvaluator};
use crate::geometry::{DomainSpec, Point, Point2};
use crate::mfs::MfsParams;

pub use bounds::{
    koebe_bound_check, koebe_bound_check_with, monotonicity_check, slit_decay_domain, slit_decay_experiment,
    symmetrization_check, symmetrization_check_with, BoundViolation, SlitDecay, SlitDecayRow,
};
pub use kernel::{kernel_check, KernelReport, KernelRow};

/// Radius of the disk around the pole left out of every sup.
pub const POLE_EXCLUSION: f64 = 1e-3;
/// Normal offsets of the boundary-adaptive grid points.
pub const BOUNDARY_OFFSETS: [f64; 5] = [0.0, 1e-2, -1e-2, 1e-3, -1e-3];
/// Slack allowed below zero for the one-sided sup.
pub const ONE_SIDED_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceMember {
    pub n: u32,
    pub domain: DomainSpec,
}

/// Domains `Ω_n` indexed by `n`, their kernel and the common base point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSequence {
    pub members: Vec<SequenceMember>,
    pub limit: DomainSpec,
    pub base_point: Point,
    /// Isolated boundary points of the limit that its representation does not
    /// carry, such as the puncture of `𝔻 ∖ {0}`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub punctures: Vec<Point2>,
}

impl DomainSequence {
    pub fn from_fn(
        index_set: &[u32],
        limit: DomainSpec,
        base_point: Point,
        generator: impl Fn(u32) -> DomainSpec,
    ) -> Result<Self> {
        let s = DomainSequence {
            members: index_set.iter().map(|&n| SequenceMember { n, domain: generator(n) }).collect(),
            limit,
            base_point,
            punctures: Vec::new(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_punctures(mut self, punctures: Vec<Point2>) -> Self {
        self.punctures = punctures;
        self
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let seq: DomainSequence = serde_json::from_str(s).map_err(|e| GeometryError::Json(e.to_string()))?;
        seq.validate()?;
        Ok(seq)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sequence serializes")
    }

    /// Domains valid, indices increasing, base point inside every domain.
    pub fn validate(&self) -> Result<()> {
        if self.members.is_empty() {
            return Err(GeometryError::field("members", "must not be empty").into());
        }
        if self.members.windows(2).any(|m| m[0].n >= m[1].n) {
            return Err(GeometryError::field("members", "indices must be strictly increasing").into());
        }
        self.limit.validate()?;
        if !self.limit.contains(self.base_point) {
            return Err(GeometryError::field("base_point", "must lie inside the limit domain").into());
        }
        for m in &self.members {
            m.domain.validate()?;
            if m.domain.dimension() != self.limit.dimension() {
                return Err(GeometryError::field("members", "dimension differs from the limit").into());
            }
            if !m.domain.contains(self.base_point) {
                return Err(GeometryError::field("base_point", format!("must lie inside the domain at n = {}", m.n)).into());
            }
        }
        Ok(())
    }

    pub fn indices(&self) -> Vec<u32> {
        self.members.iter().map(|m| m.n).collect()
    }
}

/// Sample points for planar sup norms: a uniform lattice over `rect` plus
/// points on and near every boundary component of the compared domains.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// `[xmin, xmax, ymin, ymax]`
    pub rect: [f64; 4],
    pub resolution: f64,
    pub boundary_samples: usize,
}

impl GridSpec {
    pub fn new(rect: [f64; 4], resolution: f64) -> Self {
        GridSpec { rect, resolution, boundary_samples: 512 }
    }

    /// The bounding box of `domains` enlarged by 10%.
    pub fn covering(domains: &[&DomainSpec], resolution: f64) -> Result<Self> {
        let mut r = [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY];
        for d in domains {
            let b = d.bounding_box2()?;
            r = [r[0].min(b[0]), r[1].max(b[1]), r[2].min(b[2]), r[3].max(b[3])];
        }
        let (mx, my) = (0.1 * (r[1] - r[0]), 0.1 * (r[3] - r[2]));
        Ok(GridSpec::new([r[0] - mx, r[1] + mx, r[2] - my, r[3] + my], resolution))
    }

    fn validate(&self) -> Result<()> {
        let [x0, x1, y0, y1] = self.rect;
        if !(self.resolution > 0.0) || !(x1 > x0) || !(y1 > y0) {
            return Err(GreenError::Precondition("grid needs a positive resolution and a nonempty rectangle".into()));
        }
        Ok(())
    }

    /// Lattice points in row-major order.
    pub fn lattice(&self) -> Vec<Point2> {
        let [x0, x1, y0, y1] = self.rect;
        let nx = ((x1 - x0) / self.resolution).floor() as usize + 1;
        let ny = ((y1 - y0) / self.resolution).floor() as usize + 1;
        let mut out = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                out.push(Complex64::new(x0 + i as f64 * self.resolution, y0 + j as f64 * self.resolution));
            }
        }
        out
    }

    /// Lattice plus boundary-adaptive points for `domains`, without the disk
    /// of radius [`POLE_EXCLUSION`] around `pole`.
    pub fn points(&self, pole: Point2, domains: &[&DomainSpec]) -> Result<Vec<Point2>> {
        self.validate()?;
        let mut pts = self.lattice();
        for d in domains {
            for comp in d.planar_components()? {
                for t in comp.sample_params(self.boundary_samples) {
                    let (b, nrm) = (comp.point_at(t), comp.normal_at(t));
                    pts.extend(BOUNDARY_OFFSETS.iter().map(|&o| b + nrm * o));
                }
            }
        }
        pts.retain(|z| (z - pole).norm() >= POLE_EXCLUSION);
        Ok(pts)
    }
}

/// Subsets of the plane over which the compact-subset sup is taken.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CompactSet {
    /// Points of the limit at distance at least `margin` from its boundary.
    InteriorMargin { margin: f64 },
    /// `{ |z − center| ≥ radius }`
    OutsideDisk { center: Point2, radius: f64 },
}

impl CompactSet {
    pub fn contains(&self, limit: &DomainSpec, z: Point2) -> bool {
        match self {
            CompactSet::InteriorMargin { margin } => {
                limit.contains2(z) && limit.query2(z).map(|q| q.dist >= *margin).unwrap_or(false)
            }
            CompactSet::OutsideDisk { center, radius } => (z - center).norm() >= *radius,
        }
    }
}

/// Largest `|a − b|` over `points`, with the first point attaining it.
pub fn sup_discrepancy(a: &dyn GreenEvaluator, b: &dyn GreenEvaluator, points: &[Point2]) -> (f64, Point2) {
    let diffs: Vec<f64> = points.par_iter().map(|&z| (a.value(z) - b.value(z)).abs()).collect();
    argmax(&diffs, points)
}

/// Largest `limit − g_n` over `points`.
pub fn one_sided_sup(limit: &dyn GreenEvaluator, g_n: &dyn GreenEvaluator, points: &[Point2]) -> f64 {
    let diffs: Vec<f64> = points.par_iter().map(|&z| limit.value(z) - g_n.value(z)).collect();
    argmax(&diffs, points).0
}

fn argmax(values: &[f64], points: &[Point2]) -> (f64, Point2) {
    let mut best = (f64::NEG_INFINITY, Complex64::new(f64::NAN, f64::NAN));
    for (v, z) in values.iter().zip(points) {
        if *v > best.0 {
            best = (*v, *z);
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: u32,
    pub sup_two_sided: f64,
    #[serde(rename = "one_sided_M_n")]
    pub one_sided_m_n: f64,
    pub compact_sup: f64,
    pub components: usize,
    /// Error bound of the `Ω_n` evaluator.
    pub err: f64,
    pub argmax: Point2,
    pub method: String,
    pub grid_points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub grid: GridSpec,
    pub pole_exclusion: f64,
    pub compact_set: CompactSet,
    pub limit_method: String,
    pub limit_err: f64,
}

impl ConvergenceReport {
    pub const CSV_HEADER: &'static str = "n,sup_two_sided,one_sided_M_n,compact_sup,components,err";

    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{:e},{:e},{:e},{},{:e}",
                r.n, r.sup_two_sided, r.one_sided_m_n, r.compact_sup, r.components, r.err
            );
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn row(&self, n: u32) -> Option<&ConvergenceRow> {
        self.rows.iter().find(|r| r.n == n)
    }

    pub fn last(&self) -> &ConvergenceRow {
        self.rows.last().expect("report has rows")
    }
}

/// Compare each `g_{Ω_n}` with the limit's Green's function on the grid.
pub fn converge(
    seq: &DomainSequence,
    grid: &GridSpec,
    compact: &CompactSet,
    params: &MfsParams,
) -> Result<ConvergenceReport> {
    seq.validate()?;
    let w = seq
        .base_point
        .planar()
        .ok_or(GreenError::Precondition("sup norms need a planar sequence".into()))?;
    let limit = planar_evaluator(&seq.limit, w, params)?;
    let mut rows = Vec::with_capacity(seq.members.len());
    for m in &seq.members {
        let g_n = planar_evaluator(&m.domain, w, params)?;
        let pts = grid.points(w, &[&seq.limit, &m.domain])?;
        let diffs: Vec<f64> = pts.par_iter().map(|&z| limit.value(z) - g_n.value(z)).collect();
        let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
        let (sup, at) = argmax(&abs, &pts);
        let one_sided = argmax(&diffs, &pts).0;
        let compact_sup = abs
            .iter()
            .zip(&pts)
            .filter(|(_, z)| compact.contains(&seq.limit, **z))
            .map(|(d, _)| *d)
            .fold(0.0, f64::max);
        rows.push(ConvergenceRow {
            n: m.n,
            sup_two_sided: sup,
            one_sided_m_n: one_sided,
            compact_sup,
            components: m.domain.component_count()?,
            err: g_n.error_bound(),
            argmax: at,
            method: g_n.method().to_string(),
            grid_points: pts.len(),
        });
    }
    Ok(ConvergenceReport {
        rows,
        grid: grid.clone(),
        pole_exclusion: POLE_EXCLUSION,
        compact_set: compact.clone(),
        limit_method: limit.method().to_string(),
        limit_err: limit.error_bound(),
    })
}
