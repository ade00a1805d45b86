use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GreenError, Result};
use crate::geometry::{
    polyline_distance, segment_distance, BoundaryCurve, DomainSpec, Point, Point2, Point3,
};

/// Holes whose radius is below this fraction of their isolation radius are
/// handled by the exact capture step instead of by stepping onto them.
const POINT_HOLE_RATIO: f64 = 1e-3;
/// Point holes are bucketed into a grid once there are more than this many.
const GRID_THRESHOLD: usize = 32;
/// Capture circles take this fraction of the distance from a hole's center
/// to every other boundary component.
const CAPTURE_FRACTION: f64 = 0.9;
/// A walk enters the capture step once inside this fraction of the circle.
const CAPTURE_TRIGGER: f64 = 0.9;
const TRIG_POLY_SEGMENTS: usize = 512;
const MAX_REJECTIONS: usize = 10_000;

/// Where and how a single walk ended.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExitSample {
    pub point: Point,
    /// Boundary component the walk was absorbed on.
    pub component: usize,
    pub steps: u64,
    /// The walk reached `max_steps` before entering the shell.
    pub truncated: bool,
}

enum Regular {
    Circle { center: Point2, radius: f64 },
    Trig { curve: BoundaryCurve, poly: Vec<Point2>, sag: f64 },
    Segment(Point2, Point2),
}

impl Regular {
    /// A lower bound on the distance that is exact near the component.
    fn distance_bound(&self, x: Point2) -> f64 {
        match self {
            Regular::Circle { center, radius } => ((x - center).norm() - radius).abs(),
            Regular::Trig { curve, poly, sag } => {
                let dp = poly
                    .windows(2)
                    .map(|s| segment_distance(x, s[0], s[1]).0)
                    .fold(f64::INFINITY, f64::min);
                if dp > 5.0 * sag {
                    dp - sag
                } else {
                    curve.distance(x).0
                }
            }
            Regular::Segment(a, b) => segment_distance(x, *a, *b).0,
        }
    }

    fn nearest(&self, x: Point2) -> Point2 {
        match self {
            Regular::Circle { center, radius } => BoundaryCurve::circle(*center, *radius).distance(x).1,
            Regular::Trig { curve, .. } => curve.distance(x).1,
            Regular::Segment(a, b) => segment_distance(x, *a, *b).1,
        }
    }
}

struct PointHole {
    center: Point2,
    log_radius: f64,
    /// Radius of the capture circle, inside which no other boundary lies.
    capture: f64,
    component: usize,
}

struct HoleGrid {
    origin: Point2,
    cell: f64,
    nx: usize,
    ny: usize,
    cells: Vec<Vec<u32>>,
    max_radius: f64,
}

impl HoleGrid {
    fn new(holes: &[PointHole]) -> Self {
        let (mut lo, mut hi) = (holes[0].center, holes[0].center);
        for h in holes {
            lo = Complex64::new(lo.re.min(h.center.re), lo.im.min(h.center.im));
            hi = Complex64::new(hi.re.max(h.center.re), hi.im.max(h.center.im));
        }
        let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-12);
        let cell = span / (holes.len() as f64).sqrt();
        let nx = ((hi.re - lo.re) / cell).floor() as usize + 1;
        let ny = ((hi.im - lo.im) / cell).floor() as usize + 1;
        let mut cells = vec![Vec::new(); nx * ny];
        for (k, h) in holes.iter().enumerate() {
            let (i, j) = Self::raw_index(lo, cell, h.center);
            cells[j.min(ny - 1) * nx + i.min(nx - 1)].push(k as u32);
        }
        let max_radius = holes.iter().map(|h| h.log_radius.exp()).fold(0.0, f64::max);
        HoleGrid { origin: lo, cell, nx, ny, cells, max_radius }
    }

    fn raw_index(origin: Point2, cell: f64, p: Point2) -> (usize, usize) {
        (
            ((p.re - origin.re) / cell).floor().max(0.0) as usize,
            ((p.im - origin.im) / cell).floor().max(0.0) as usize,
        )
    }

    /// Index of the hole with the smallest gap `|x − c| − r`, and that gap.
    fn nearest(&self, holes: &[PointHole], x: Point2) -> (usize, f64) {
        let (i0, j0) = Self::raw_index(self.origin, self.cell, x);
        let (i0, j0) = (i0.min(self.nx - 1) as i64, j0.min(self.ny - 1) as i64);
        let mut best = (usize::MAX, f64::INFINITY);
        let extent = self.nx.max(self.ny) as i64;
        for ring in 0..=extent {
            for j in (j0 - ring)..=(j0 + ring) {
                if j < 0 || j >= self.ny as i64 {
                    continue;
                }
                let edge = j == j0 - ring || j == j0 + ring;
                let step = if edge { 1 } else { (2 * ring).max(1) };
                let mut i = i0 - ring;
                while i <= i0 + ring {
                    if i >= 0 && i < self.nx as i64 {
                        for &k in &self.cells[j as usize * self.nx + i as usize] {
                            let h = &holes[k as usize];
                            let gap = (x - h.center).norm() - h.log_radius.exp();
                            if gap < best.1 {
                                best = (k as usize, gap);
                            }
                        }
                    }
                    i += step;
                }
            }
            // Cells beyond this ring are at least `ring · cell` from the
            // projection of `x` onto the grid box, hence from `x`.
            if best.1 <= ring as f64 * self.cell - self.max_radius {
                break;
            }
        }
        best
    }
}

/// Walk-on-spheres stepping for a planar domain.
pub struct PlanarWalker {
    regular: Vec<(Regular, usize)>,
    holes: Vec<PointHole>,
    grid: Option<HoleGrid>,
}

impl PlanarWalker {
    pub fn new(d: &DomainSpec) -> Result<Self> {
        if !d.is_planar() {
            return Err(GreenError::Precondition("planar walker needs a planar domain".into()));
        }
        d.validate()?;
        let comps = d.planar_components()?;
        let mut regular = Vec::new();
        let mut candidates = Vec::new();
        for (i, c) in comps.iter().enumerate() {
            match c {
                crate::geometry::PlanarComponent::Segment(a, b) => regular.push((Regular::Segment(*a, *b), i)),
                crate::geometry::PlanarComponent::Curve(curve) => match curve {
                    BoundaryCurve::Circle { center, radius } if i > 0 => {
                        candidates.push((i, *center, radius.ln()))
                    }
                    BoundaryCurve::SmallCircle { center, log_radius } => {
                        candidates.push((i, *center, *log_radius))
                    }
                    BoundaryCurve::Circle { center, radius } => {
                        regular.push((Regular::Circle { center: *center, radius: *radius }, i))
                    }
                    BoundaryCurve::Trig { .. } => regular.push((trig_regular(curve), i)),
                },
            }
        }
        let mut holes = Vec::new();
        for &(i, center, log_radius) in &candidates {
            let mut iso = f64::INFINITY;
            for (j, c) in comps.iter().enumerate() {
                if j != i {
                    iso = iso.min(c.distance(center).0);
                }
            }
            let capture = CAPTURE_FRACTION * iso;
            if log_radius <= (POINT_HOLE_RATIO * capture).ln() {
                holes.push(PointHole { center, log_radius, capture, component: i });
            } else {
                let radius = log_radius.exp();
                regular.push((Regular::Circle { center, radius }, i));
            }
        }
        let grid = (holes.len() > GRID_THRESHOLD).then(|| HoleGrid::new(&holes));
        Ok(PlanarWalker { regular, holes, grid })
    }

    /// Number of holes handled by the capture step.
    pub fn point_hole_count(&self) -> usize {
        self.holes.len()
    }

    fn nearest_hole(&self, x: Point2) -> Option<(usize, f64)> {
        if self.holes.is_empty() {
            return None;
        }
        Some(match &self.grid {
            Some(g) => g.nearest(&self.holes, x),
            None => self
                .holes
                .iter()
                .enumerate()
                .map(|(k, h)| (k, (x - h.center).norm() - h.log_radius.exp()))
                .fold((0, f64::INFINITY), |b, c| if c.1 < b.1 { c } else { b }),
        })
    }

    /// Run one walk from `start` until it is within `eps` of the boundary.
    pub fn walk<R: Rng>(&self, start: Point2, eps: f64, max_steps: u64, rng: &mut R) -> ExitSample {
        let mut x = start;
        let mut steps = 0u64;
        loop {
            let (mut dist, mut reg) = (f64::INFINITY, usize::MAX);
            for (k, (r, _)) in self.regular.iter().enumerate() {
                let d = r.distance_bound(x);
                if d < dist {
                    dist = d;
                    reg = k;
                }
            }
            if let Some((k, gap)) = self.nearest_hole(x) {
                let h = &self.holes[k];
                let s = (x - h.center).norm();
                if s <= CAPTURE_TRIGGER * h.capture {
                    if steps >= max_steps {
                        return self.truncated(x, steps);
                    }
                    steps += 1;
                    match capture_step(h, x, s, rng) {
                        Ok(exit) => {
                            return ExitSample {
                                point: Point::Planar(exit),
                                component: h.component,
                                steps,
                                truncated: false,
                            }
                        }
                        Err(next) => {
                            x = next;
                            continue;
                        }
                    }
                }
                if gap < dist {
                    dist = gap;
                }
            }
            if dist < eps {
                let (r, comp) = &self.regular[reg];
                return ExitSample {
                    point: Point::Planar(r.nearest(x)),
                    component: *comp,
                    steps,
                    truncated: false,
                };
            }
            if steps >= max_steps {
                return self.truncated(x, steps);
            }
            x += Complex64::from_polar(dist, TAU * rng.random::<f64>());
            steps += 1;
        }
    }

    fn truncated(&self, x: Point2, steps: u64) -> ExitSample {
        ExitSample { point: Point::Planar(x), component: usize::MAX, steps, truncated: true }
    }
}

fn trig_regular(curve: &BoundaryCurve) -> Regular {
    let n = TRIG_POLY_SEGMENTS;
    let poly: Vec<Point2> = (0..=n).map(|k| curve.point_at(k as f64 / n as f64)).collect();
    let mut sag: f64 = 0.0;
    for k in 0..n {
        for m in 1..8 {
            let t = (k as f64 + m as f64 / 8.0) / n as f64;
            sag = sag.max(segment_distance(curve.point_at(t), poly[k], poly[k + 1]).0);
        }
    }
    Regular::Trig { curve: curve.clone(), poly, sag: 1.5 * sag + 1e-12 }
}

/// One exact step near a point hole. Inside the capture circle `|y − c| = R`
/// Brownian motion from `x` hits the hole before the circle with probability
/// `log(R/s) / log(R/r)`; otherwise it exits the circle with density
/// proportional to the Poisson kernel minus the captured share, sampled here
/// by rejection from the Poisson kernel. The captured share is taken as
/// uniform on the circle, which is exact up to `O(r/R)`.
fn capture_step<R: Rng>(h: &PointHole, x: Point2, s: f64, rng: &mut R) -> std::result::Result<Point2, Point2> {
    let dir = if s > 0.0 { (x - h.center) / s } else { Complex64::new(1.0, 0.0) };
    let on_hole = h.center + dir * h.log_radius.exp();
    if s == 0.0 || s.ln() <= h.log_radius {
        return Ok(on_hole);
    }
    let log_cap = h.capture.ln();
    let p_hit = (log_cap - s.ln()) / (log_cap - h.log_radius);
    if rng.random::<f64>() < p_hit {
        return Ok(on_hole);
    }
    let a = (x - h.center) / h.capture;
    let one_minus = 1.0 - a.norm_sqr();
    let mut y = Complex64::new(1.0, 0.0);
    for _ in 0..MAX_REJECTIONS {
        let u = Complex64::from_polar(1.0, TAU * rng.random::<f64>());
        y = (u + a) / (Complex64::new(1.0, 0.0) + a.conj() * u);
        let accept = 1.0 - p_hit * (y - a).norm_sqr() / one_minus;
        if rng.random::<f64>() < accept {
            break;
        }
    }
    Err(h.center + y * h.capture)
}

/// Walk-on-spheres stepping for a ball, optionally minus a tube.
pub struct SpatialWalker {
    center: Point3,
    radius: f64,
    polyline: Vec<Point3>,
    tube_radius: f64,
}

impl SpatialWalker {
    pub fn new(d: &DomainSpec) -> Result<Self> {
        d.validate()?;
        match d {
            DomainSpec::Ball3 { center, radius } => Ok(SpatialWalker {
                center: *center,
                radius: *radius,
                polyline: Vec::new(),
                tube_radius: 0.0,
            }),
            DomainSpec::Tube3 { ambient, polyline, tube_radius } => Ok(SpatialWalker {
                center: ambient.center,
                radius: ambient.radius,
                polyline: polyline.clone(),
                tube_radius: *tube_radius,
            }),
            _ => Err(GreenError::Precondition("spatial walker needs a ball or tube domain".into())),
        }
    }

    pub fn walk<R: Rng>(&self, start: Point3, eps: f64, max_steps: u64, rng: &mut R) -> ExitSample {
        let mut x = start;
        let mut steps = 0u64;
        loop {
            let ds = self.radius - (x - self.center).norm();
            let (dp, q) = polyline_distance(x, &self.polyline);
            let dt = dp - self.tube_radius;
            let dist = ds.min(dt);
            if dist < eps {
                let (point, component) = if ds <= dt {
                    let u = (x - self.center).normalized().unwrap_or(Point3::new(1.0, 0.0, 0.0));
                    (self.center + u * self.radius, 0)
                } else {
                    let u = (x - q).normalized().unwrap_or(Point3::new(1.0, 0.0, 0.0));
                    (q + u * self.tube_radius, 1)
                };
                return ExitSample { point: Point::Spatial(point), component, steps, truncated: false };
            }
            if steps >= max_steps {
                return ExitSample { point: Point::Spatial(x), component: usize::MAX, steps, truncated: true };
            }
            x = x + sphere_direction(rng) * dist;
            steps += 1;
        }
    }
}

fn sphere_direction<R: Rng>(rng: &mut R) -> Point3 {
    let z = 2.0 * rng.random::<f64>() - 1.0;
    let phi = TAU * rng.random::<f64>();
    let rho = (1.0 - z * z).max(0.0).sqrt();
    Point3::new(rho * phi.cos(), rho * phi.sin(), z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wos::walk_rng;

    fn c(x: f64, y: f64) -> Point2 {
        Complex64::new(x, y)
    }

    #[test]
    fn exits_land_on_the_boundary() {
        let d = DomainSpec::annulus(c(0., 0.), 0.3, 1.0);
        let w = PlanarWalker::new(&d).unwrap();
        for i in 0..200 {
            let e = w.walk(c(0.6, 0.1), 1e-6, 100_000, &mut walk_rng(3, i));
            let r = e.point.planar().unwrap().norm();
            assert!(!e.truncated);
            assert!((r - 1.0).abs() < 1e-12 || (r - 0.3).abs() < 1e-12, "{r}");
        }
    }

    #[test]
    fn grid_matches_linear_scan() {
        let holes: Vec<PointHole> = (0..100)
            .map(|k| PointHole {
                center: c((k % 10) as f64 * 0.1, (k / 10) as f64 * 0.13),
                log_radius: -20.0 - (k % 3) as f64,
                capture: 0.01,
                component: k + 1,
            })
            .collect();
        let g = HoleGrid::new(&holes);
        let mut rng = walk_rng(1, 0);
        for _ in 0..500 {
            let x = c(rng.random_range(-1.0..2.0), rng.random_range(-1.0..2.5));
            let lin = holes
                .iter()
                .map(|h| (x - h.center).norm() - h.log_radius.exp())
                .fold(f64::INFINITY, f64::min);
            assert_eq!(g.nearest(&holes, x).1, lin);
        }
    }

    #[test]
    fn capture_probability_matches_log_ratio() {
        // Annulus 1e-8 < |z| < 1 from |z| = 0.1: hits the inner circle with
        // probability log(0.1) / log(1e-8) = 1/8.
        let d = DomainSpec::CircleDomain {
            outer: BoundaryCurve::circle(c(0., 0.), 1.0),
            holes: vec![BoundaryCurve::SmallCircle { center: c(0., 0.), log_radius: 1e-8f64.ln() }],
        };
        let w = PlanarWalker::new(&d).unwrap();
        assert_eq!(w.point_hole_count(), 1);
        let n = 40_000;
        let hits = (0..n)
            .filter(|&i| w.walk(c(0.1, 0.), 1e-6, 100_000, &mut walk_rng(5, i)).component == 1)
            .count();
        let p = hits as f64 / n as f64;
        let se = (0.125f64 * 0.875 / n as f64).sqrt();
        assert!((p - 0.125).abs() < 4.0 * se, "{p}");
    }

    #[test]
    fn ball_exits_on_sphere() {
        let d = DomainSpec::ball(Point3::new(0., 0., 0.), 2.0);
        let w = SpatialWalker::new(&d).unwrap();
        let e = w.walk(Point3::new(0.5, 0., 0.), 1e-6, 100_000, &mut walk_rng(0, 0));
        assert!((e.point.spatial().unwrap().norm() - 2.0).abs() < 1e-12);
    }
}
