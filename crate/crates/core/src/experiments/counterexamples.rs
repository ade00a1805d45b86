//! Sequences that converge in the sense of kernel while their Green's
//! functions do not converge to the limit's: tiny holes on a net of the
//! plane annulus `1 < |z| < 2`, and a thin tube through a net of the shell
//! `1 < |x| < 2` attached to the outer sphere.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::closed_form::{green_ball3, green_disk};
use crate::convergence::{kernel_check, DomainSequence, KernelReport, SequenceMember};
use crate::error::{GreenError, Result};
use crate::geometry::{fibonacci_sphere, net_points, BallSpec, BoundaryCurve, DomainSpec, NetRegion, Point, Point2, Point3};
use crate::wos::{estimate_green_3d, estimate_with_walker_2d, PlanarWalker, WosParams};

/// Evaluation point of the plane example; the pole is at 0.
pub const PLANE_EVAL: Point2 = Complex64::new(0.5, 0.0);
/// Evaluation point of the space example; the pole is at 0.
pub const SPACE_EVAL: Point3 = Point3::new(0.5, 0.0, 0.0);
/// Tolerance below `g_{B(0,2)}` accepted in the tube search.
pub const TUBE_TOLERANCE: f64 = 0.15;
/// Radius of the sphere carrying the space net.
pub const TUBE_NET_RADIUS: f64 = 1.5;
const MAX_SEARCH_STEPS: usize = 24;
const MAX_HALVINGS: usize = 64;
const ARC_STEP: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchStep {
    /// `log r` for the plane search, the tube radius for the space search.
    pub parameter: f64,
    pub geometry_valid: bool,
    pub estimate: Option<f64>,
    pub std_error: Option<f64>,
    pub accepted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleOutcome {
    pub n: u32,
    /// Number of holes (plane) or net points (space).
    pub net_size: usize,
    /// Final `log r` (plane) or tube radius (space).
    pub parameter: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub truncated_walks: usize,
    /// Green's function of the outer disk or ball at the evaluation point.
    pub outer_value: f64,
    /// Green's function of the kernel at the evaluation point.
    pub limit_value: f64,
    /// The estimate had to reach `threshold + 3·std_error`.
    pub threshold: f64,
    pub steps: Vec<SearchStep>,
    pub kernel: KernelReport,
}

fn origin2() -> Point2 {
    Complex64::new(0.0, 0.0)
}

/// Centers of the holes: a `1/n`-net of `1 < |z| < 2`.
pub fn plane_net(n: u32) -> Vec<Point2> {
    net_points(1.0 / n as f64, &NetRegion { center: origin2(), r_inner: 1.0, r_outer: 2.0 })
}

/// `D(0, 2)` minus the closed disks of radius `exp(log_radius)` at `centers`.
pub fn plane_net_domain(centers: &[Point2], log_radius: f64) -> DomainSpec {
    DomainSpec::CircleDomain {
        outer: BoundaryCurve::circle(origin2(), 2.0),
        holes: centers.iter().map(|&center| BoundaryCurve::SmallCircle { center, log_radius }).collect(),
    }
}

/// Largest admissible `log r`: disks disjoint and inside `D(0, 2) ∖ 𝔻̄`.
fn plane_log_radius_limit(centers: &[Point2]) -> f64 {
    let mut gap = f64::INFINITY;
    for (i, a) in centers.iter().enumerate() {
        gap = gap.min(a.norm() - 1.0).min(2.0 - a.norm());
        for b in &centers[i + 1..] {
            gap = gap.min(0.5 * (a - b).norm());
        }
    }
    gap.ln()
}

/// Shrink the holes until `g_{Ω}(1/2, 0) − 3·SE ≥ log 4 − 1/n`.
///
/// The radius starts at half the net spacing and is halved until the holes
/// are admissible. From there `log r` is scaled up by at least 2 per step,
/// and by more when the measured deficit is far from the target, using the
/// `1/|log r|` decay of the deficit for tiny holes.
pub fn plane_net_search(n: u32, wos: &WosParams) -> Result<CounterexampleOutcome> {
    let centers = plane_net(n);
    let outer_value = green_disk(origin2(), 2.0, PLANE_EVAL, origin2())?;
    let limit_value = green_disk(origin2(), 1.0, PLANE_EVAL, origin2())?;
    let allowed = 1.0 / n as f64;
    let threshold = outer_value - allowed;
    let limit = plane_log_radius_limit(&centers);
    let mut steps = Vec::new();
    let mut log_r = (0.5 / n as f64).ln();
    for _ in 0..MAX_HALVINGS {
        if log_r < limit {
            break;
        }
        steps.push(SearchStep { parameter: log_r, geometry_valid: false, estimate: None, std_error: None, accepted: false });
        log_r -= std::f64::consts::LN_2;
    }
    for _ in 0..MAX_SEARCH_STEPS {
        let domain = plane_net_domain(&centers, log_r);
        let walker = PlanarWalker::new(&domain)?;
        let r = estimate_with_walker_2d(&walker, &domain, PLANE_EVAL, origin2(), wos)?;
        let accepted = r.estimate - 3.0 * r.std_error >= threshold;
        steps.push(SearchStep {
            parameter: log_r,
            geometry_valid: true,
            estimate: Some(r.estimate),
            std_error: Some(r.std_error),
            accepted,
        });
        if accepted {
            let seq = DomainSequence {
                members: vec![SequenceMember { n, domain }],
                limit: DomainSpec::disk(origin2(), 1.0),
                base_point: Point::Planar(origin2()),
                punctures: vec![],
            };
            return Ok(CounterexampleOutcome {
                n,
                net_size: centers.len(),
                parameter: log_r,
                estimate: r.estimate,
                std_error: r.std_error,
                truncated_walks: r.truncated_walks,
                outer_value,
                limit_value,
                threshold,
                steps,
                kernel: kernel_check(&seq, allowed),
            });
        }
        log_r = next_log_radius(&steps, 0.5 * allowed, outer_value);
    }
    Err(search_failure("hole radius", n, &steps))
}

/// Next `log r` from the evaluated steps, aiming at a deficit of `aim`.
///
/// With two evaluations the deficit is modelled as `A / (|log r| + B)`, the
/// shape of the capacity of tiny disks; with one it is taken proportional
/// to `1/|log r|`. The step grows `|log r|` by a factor in `[2, 100]`.
fn next_log_radius(steps: &[SearchStep], aim: f64, outer_value: f64) -> f64 {
    let evaluated: Vec<(f64, f64)> = steps
        .iter()
        .filter_map(|s| Some((-s.parameter, outer_value - s.estimate?)))
        .collect();
    let (l2, d2) = *evaluated.last().expect("at least one evaluation");
    let mut target = l2 * d2 / aim;
    if let [.., (l1, d1), _] = evaluated[..] {
        if d1 > d2 && d2 > 0.0 {
            let b = (d2 * l2 - d1 * l1) / (d1 - d2);
            let a = d1 * (l1 + b);
            target = a / aim - b;
        }
    }
    let factor = if target.is_finite() { (target / l2).clamp(2.0, 100.0) } else { 2.0 };
    -l2 * factor
}

fn search_failure(what: &str, n: u32, steps: &[SearchStep]) -> GreenError {
    let trail: Vec<String> = steps
        .iter()
        .filter_map(|s| Some(format!("{:.4e}: {:.4} ± {:.1e}", s.parameter, s.estimate?, s.std_error?)))
        .collect();
    GreenError::Infeasibility(format!(
        "{what} search at n = {n} did not reach the target within {} evaluations; trail [{}]",
        trail.len(),
        trail.join(", ")
    ))
}

/// Points of the space net: `n` nearly uniform points on `|x| = 1.5`.
pub fn space_net(n: u32) -> Vec<Point3> {
    fibonacci_sphere(Point3::ORIGIN, TUBE_NET_RADIUS, n as usize)
}

/// A polyline from the outer sphere through every net point: a radial
/// segment from the anchor above the first point, then nearest-neighbor
/// chaining along great-circle arcs of `|x| = 1.5`.
pub fn tube_polyline(net: &[Point3]) -> Vec<Point3> {
    let Some(&first) = net.first() else {
        return Vec::new();
    };
    let mut path = vec![first * (2.0 / first.norm()), first];
    let mut visited = vec![false; net.len()];
    visited[0] = true;
    let mut current = 0;
    for _ in 1..net.len() {
        let next = (0..net.len())
            .filter(|&k| !visited[k])
            .min_by(|&a, &b| {
                (net[a] - net[current]).norm().total_cmp(&(net[b] - net[current]).norm())
            })
            .expect("an unvisited point remains");
        visited[next] = true;
        let (a, b) = (net[current], net[next]);
        let angle = a.dot(b) / (a.norm() * b.norm());
        let angle = angle.clamp(-1.0, 1.0).acos();
        let pieces = ((angle / ARC_STEP).ceil() as usize).max(1);
        for k in 1..=pieces {
            path.push(slerp(a, b, angle, k as f64 / pieces as f64));
        }
        current = next;
    }
    path
}

fn slerp(a: Point3, b: Point3, angle: f64, t: f64) -> Point3 {
    if angle < 1e-12 {
        return a;
    }
    let s = angle.sin();
    a * (((1.0 - t) * angle).sin() / s) + b * ((t * angle).sin() / s)
}

pub fn tube_domain(polyline: &[Point3], tube_radius: f64) -> DomainSpec {
    DomainSpec::Tube3 {
        ambient: BallSpec { center: Point3::ORIGIN, radius: 2.0 },
        polyline: polyline.to_vec(),
        tube_radius,
    }
}

/// Largest distance from a point of the closed shell `1 ≤ |x| ≤ 2` to the net.
pub fn shell_covering_radius(net: &[Point3]) -> f64 {
    let mut worst: f64 = 0.0;
    for k in 0..=8 {
        let radius = 1.0 + k as f64 / 8.0;
        for p in fibonacci_sphere(Point3::ORIGIN, radius, 4096) {
            let d = net.iter().map(|q| (p - *q).norm()).fold(f64::INFINITY, f64::min);
            worst = worst.max(d);
        }
    }
    worst
}

/// Halve the tube radius from 1/4 until the tube stays outside the closed
/// unit ball and `g_Ω(x₀, 0) − 3·SE ≥ g_{B(0,2)}(x₀, 0) − 0.15`. The shell
/// width is capped at a tenth of the tube radius.
pub fn tube_search(n: u32, wos: &WosParams) -> Result<CounterexampleOutcome> {
    let net = space_net(n);
    let polyline = tube_polyline(&net);
    let min_radius = polyline.iter().map(|p| p.norm()).fold(f64::INFINITY, f64::min);
    let outer_value = green_ball3(Point3::ORIGIN, 2.0, SPACE_EVAL, Point3::ORIGIN)?;
    let limit_value = green_ball3(Point3::ORIGIN, 1.0, SPACE_EVAL, Point3::ORIGIN)?;
    let threshold = outer_value - TUBE_TOLERANCE;
    let mut steps = Vec::new();
    let mut rho = 0.25;
    for _ in 0..MAX_HALVINGS + MAX_SEARCH_STEPS {
        if min_radius - rho <= 1.0 {
            steps.push(SearchStep { parameter: rho, geometry_valid: false, estimate: None, std_error: None, accepted: false });
            rho *= 0.5;
            continue;
        }
        let domain = tube_domain(&polyline, rho);
        let eps = wos.shell_for(&domain).min(0.1 * rho);
        let params = wos.clone().with_eps_shell(eps);
        let r = estimate_green_3d(&domain, SPACE_EVAL, Point3::ORIGIN, &params)?;
        let accepted = r.estimate - 3.0 * r.std_error >= threshold;
        steps.push(SearchStep {
            parameter: rho,
            geometry_valid: true,
            estimate: Some(r.estimate),
            std_error: Some(r.std_error),
            accepted,
        });
        if accepted {
            let seq = DomainSequence {
                members: vec![SequenceMember { n, domain }],
                limit: DomainSpec::ball(Point3::ORIGIN, 1.0),
                base_point: Point::Spatial(Point3::ORIGIN),
                punctures: vec![],
            };
            let resolution = shell_covering_radius(&net) + rho;
            return Ok(CounterexampleOutcome {
                n,
                net_size: net.len(),
                parameter: rho,
                estimate: r.estimate,
                std_error: r.std_error,
                truncated_walks: r.truncated_walks,
                outer_value,
                limit_value,
                threshold,
                steps,
                kernel: kernel_check(&seq, resolution),
            });
        }
        rho *= 0.5;
    }
    Err(search_failure("tube radius", n, &steps))
}
