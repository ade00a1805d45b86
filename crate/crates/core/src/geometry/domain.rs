use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::curve::BoundaryCurve;
use super::point::{Point, Point2, Point3};
use super::{polyline_distance, segment_distance};
use crate::error::GeometryError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskSpec {
    pub center: Point2,
    pub radius: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallSpec {
    pub center: Point3,
    pub radius: f64,
}

/// Declarative description of a domain.
///
/// The JSON encoding is internally tagged by `"type"`; points are `[x, y]`
/// or `[x, y, z]` arrays, all lengths dimensionless.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Disk {
        center: Point2,
        radius: f64,
    },
    Annulus {
        center: Point2,
        r_inner: f64,
        r_outer: f64,
    },
    CircleDomain {
        outer: BoundaryCurve,
        holes: Vec<BoundaryCurve>,
    },
    Slit {
        ambient: DiskSpec,
        segments: Vec<[Point2; 2]>,
    },
    Ball3 {
        center: Point3,
        radius: f64,
    },
    Tube3 {
        ambient: BallSpec,
        polyline: Vec<Point3>,
        tube_radius: f64,
    },
}

/// Result of a nearest-boundary query.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryQuery {
    pub dist: f64,
    pub nearest: Point,
    pub inside: bool,
    /// Boundary component realizing the distance.
    pub component: usize,
}

/// A boundary component of a planar domain. Component 0 is always the outer
/// boundary.
#[derive(Clone, Debug, PartialEq)]
pub enum PlanarComponent {
    Curve(BoundaryCurve),
    Segment(Point2, Point2),
}

impl PlanarComponent {
    pub fn distance(&self, z: Point2) -> (f64, Point2, f64) {
        match self {
            PlanarComponent::Curve(c) => c.distance(z),
            PlanarComponent::Segment(a, b) => segment_distance(z, *a, *b),
        }
    }

    pub fn point_at(&self, t: f64) -> Point2 {
        match self {
            PlanarComponent::Curve(c) => c.point_at(t),
            PlanarComponent::Segment(a, b) => a + (b - a) * t,
        }
    }

    /// A unit normal at parameter `t` (outward for curves).
    pub fn normal_at(&self, t: f64) -> Point2 {
        match self {
            PlanarComponent::Curve(c) => c.normal_at(t),
            PlanarComponent::Segment(a, b) => {
                let d = (b - a) * Complex64::new(0.0, -1.0);
                d / d.norm()
            }
        }
    }

    /// `m` points uniform in the parameter: `k/m` for closed curves,
    /// `k/(m-1)` for segments so both endpoints are included.
    pub fn sample_params(&self, m: usize) -> Vec<f64> {
        match self {
            PlanarComponent::Curve(_) => (0..m).map(|k| k as f64 / m as f64).collect(),
            PlanarComponent::Segment(..) => {
                let last = (m.max(2) - 1) as f64;
                (0..m).map(|k| k as f64 / last).collect()
            }
        }
    }
}

impl DomainSpec {
    pub fn disk(center: Point2, radius: f64) -> Self {
        DomainSpec::Disk { center, radius }
    }

    pub fn annulus(center: Point2, r_inner: f64, r_outer: f64) -> Self {
        DomainSpec::Annulus { center, r_inner, r_outer }
    }

    pub fn ball(center: Point3, radius: f64) -> Self {
        DomainSpec::Ball3 { center, radius }
    }

    /// Parse and validate the canonical JSON encoding.
    pub fn from_json(s: &str) -> Result<Self, GeometryError> {
        let d: DomainSpec = serde_json::from_str(s).map_err(|e| GeometryError::Json(e.to_string()))?;
        d.validate()?;
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("domain specs always serialize")
    }

    pub fn is_planar(&self) -> bool {
        !matches!(self, DomainSpec::Ball3 { .. } | DomainSpec::Tube3 { .. })
    }

    pub fn dimension(&self) -> usize {
        if self.is_planar() {
            2
        } else {
            3
        }
    }

    /// Check every invariant of the variant.
    pub fn validate(&self) -> Result<(), GeometryError> {
        let finite2 = |f: &str, z: Point2| {
            if z.re.is_finite() && z.im.is_finite() {
                Ok(())
            } else {
                Err(GeometryError::field(f, "must be finite"))
            }
        };
        let positive = |f: &str, r: f64| {
            if r > 0.0 && r.is_finite() {
                Ok(())
            } else {
                Err(GeometryError::field(f, "must be positive and finite"))
            }
        };
        match self {
            DomainSpec::Disk { center, radius } => {
                finite2("center", *center)?;
                positive("radius", *radius)
            }
            DomainSpec::Annulus { center, r_inner, r_outer } => {
                finite2("center", *center)?;
                positive("r_inner", *r_inner)?;
                positive("r_outer", *r_outer)?;
                if r_inner >= r_outer {
                    return Err(GeometryError::field("r_inner", "must be smaller than r_outer"));
                }
                Ok(())
            }
            DomainSpec::CircleDomain { outer, holes } => {
                outer.validate("outer")?;
                if matches!(outer, BoundaryCurve::SmallCircle { .. }) {
                    return Err(GeometryError::field("outer", "cannot be a small_circle"));
                }
                for (i, h) in holes.iter().enumerate() {
                    let f = format!("holes[{i}]");
                    h.validate(&f)?;
                    // hole closure inside the open outer region
                    let inside = match h {
                        BoundaryCurve::SmallCircle { center, log_radius } => {
                            let (d, _, _) = outer.distance(*center);
                            outer.encloses(*center) && d.ln() > *log_radius
                        }
                        _ => h.sample(512).iter().all(|&z| outer.encloses(z)) && outer.encloses(h.center()),
                    };
                    if !inside {
                        return Err(GeometryError::field(f, "closure must lie inside the outer curve"));
                    }
                }
                check_holes_disjoint(holes)
            }
            DomainSpec::Slit { ambient, segments } => {
                finite2("ambient.center", ambient.center)?;
                positive("ambient.radius", ambient.radius)?;
                for (i, s) in segments.iter().enumerate() {
                    for p in s {
                        finite2(&format!("segments[{i}]"), *p)?;
                        if (p - ambient.center).norm() >= ambient.radius {
                            return Err(GeometryError::field(
                                format!("segments[{i}]"),
                                "must lie in the open ambient disk",
                            ));
                        }
                    }
                }
                Ok(())
            }
            DomainSpec::Ball3 { center, radius } => {
                if !center.is_finite() {
                    return Err(GeometryError::field("center", "must be finite"));
                }
                positive("radius", *radius)
            }
            DomainSpec::Tube3 { ambient, polyline, tube_radius } => {
                if !ambient.center.is_finite() {
                    return Err(GeometryError::field("ambient.center", "must be finite"));
                }
                positive("ambient.radius", ambient.radius)?;
                positive("tube_radius", *tube_radius)?;
                if polyline.len() < 2 {
                    return Err(GeometryError::field("polyline", "needs at least two vertices"));
                }
                for (i, p) in polyline.iter().enumerate() {
                    if !p.is_finite() || (*p - ambient.center).norm() > ambient.radius * (1.0 + 1e-12) {
                        return Err(GeometryError::field(
                            format!("polyline[{i}]"),
                            "must lie in the closed ambient ball",
                        ));
                    }
                }
                Ok(())
            }
        }
    }

    /// Boundary components of a planar domain, outer boundary first.
    pub fn planar_components(&self) -> Result<Vec<PlanarComponent>, GeometryError> {
        Ok(match self {
            DomainSpec::Disk { center, radius } => {
                vec![PlanarComponent::Curve(BoundaryCurve::circle(*center, *radius))]
            }
            DomainSpec::Annulus { center, r_inner, r_outer } => vec![
                PlanarComponent::Curve(BoundaryCurve::circle(*center, *r_outer)),
                PlanarComponent::Curve(BoundaryCurve::circle(*center, *r_inner)),
            ],
            DomainSpec::CircleDomain { outer, holes } => std::iter::once(outer)
                .chain(holes)
                .map(|c| PlanarComponent::Curve(c.clone()))
                .collect(),
            DomainSpec::Slit { ambient, segments } => {
                std::iter::once(PlanarComponent::Curve(BoundaryCurve::circle(ambient.center, ambient.radius)))
                    .chain(segments.iter().map(|s| PlanarComponent::Segment(s[0], s[1])))
                    .collect()
            }
            _ => return Err(GeometryError::Dimension { expected: "planar" }),
        })
    }

    /// Number of boundary components of a planar domain.
    pub fn component_count(&self) -> Result<usize, GeometryError> {
        match self {
            DomainSpec::Disk { .. } => Ok(1),
            DomainSpec::Annulus { .. } => Ok(2),
            DomainSpec::CircleDomain { holes, .. } => Ok(1 + holes.len()),
            DomainSpec::Slit { segments, .. } => Ok(1 + segments.len()),
            _ => Err(GeometryError::Dimension { expected: "planar" }),
        }
    }

    /// Membership of a planar point in the open domain. Always false for
    /// spatial domains.
    pub fn contains2(&self, z: Point2) -> bool {
        match self {
            DomainSpec::Disk { center, radius } => (z - center).norm() < *radius,
            DomainSpec::Annulus { center, r_inner, r_outer } => {
                let r = (z - center).norm();
                r > *r_inner && r < *r_outer
            }
            DomainSpec::CircleDomain { outer, holes } => {
                outer.encloses(z) && !holes.iter().any(|h| h.encloses_closed(z))
            }
            DomainSpec::Slit { ambient, segments } => {
                (z - ambient.center).norm() < ambient.radius
                    && segments.iter().all(|s| segment_distance(z, s[0], s[1]).0 > 0.0)
            }
            _ => false,
        }
    }

    /// Membership of a spatial point in the open domain.
    pub fn contains3(&self, p: Point3) -> bool {
        match self {
            DomainSpec::Ball3 { center, radius } => (p - *center).norm() < *radius,
            DomainSpec::Tube3 { ambient, polyline, tube_radius } => {
                (p - ambient.center).norm() < ambient.radius && polyline_distance(p, polyline).0 > *tube_radius
            }
            _ => false,
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        match p {
            Point::Planar(z) => self.contains2(z),
            Point::Spatial(x) => self.contains3(x),
        }
    }

    /// Planar nearest-boundary query.
    pub fn query2(&self, z: Point2) -> Result<BoundaryQuery, GeometryError> {
        let comps = self.planar_components()?;
        let mut best = (f64::INFINITY, z, 0usize);
        for (i, c) in comps.iter().enumerate() {
            let (d, p, _) = c.distance(z);
            if d < best.0 {
                best = (d, p, i);
            }
        }
        Ok(BoundaryQuery {
            dist: best.0,
            nearest: Point::Planar(best.1),
            inside: self.contains2(z),
            component: best.2,
        })
    }

    /// Spatial nearest-boundary query; exact for points inside the domain.
    pub fn query3(&self, p: Point3) -> Result<BoundaryQuery, GeometryError> {
        match self {
            DomainSpec::Ball3 { center, radius } => {
                let (d, q) = sphere_distance(p, *center, *radius);
                Ok(BoundaryQuery {
                    dist: d,
                    nearest: Point::Spatial(q),
                    inside: self.contains3(p),
                    component: 0,
                })
            }
            DomainSpec::Tube3 { ambient, polyline, tube_radius } => {
                let (ds, qs) = sphere_distance(p, ambient.center, ambient.radius);
                let (dp, qp) = polyline_distance(p, polyline);
                let dt = (dp - tube_radius).abs();
                let qt = match (p - qp).normalized() {
                    Some(u) => qp + u * *tube_radius,
                    None => qp,
                };
                let (dist, nearest, component) = if ds <= dt { (ds, qs, 0) } else { (dt, qt, 1) };
                Ok(BoundaryQuery {
                    dist,
                    nearest: Point::Spatial(nearest),
                    inside: self.contains3(p),
                    component,
                })
            }
            _ => Err(GeometryError::Dimension { expected: "spatial" }),
        }
    }

    /// Distance to the boundary, nearest boundary point and membership.
    pub fn distance_to_boundary(&self, p: Point) -> Result<BoundaryQuery, GeometryError> {
        match p {
            Point::Planar(z) => self.query2(z),
            Point::Spatial(x) => self.query3(x),
        }
    }

    /// `m` points per boundary component, uniformly spaced in the curve
    /// parameter, tagged with their component index.
    ///
    /// Spatial domains use a Fibonacci lattice on spheres. For tubes this is a
    /// coarse mode: the ambient sphere plus rings offset from the polyline.
    pub fn boundary_sample(&self, m: usize) -> Result<Vec<(Point, usize)>, GeometryError> {
        if self.is_planar() {
            return Ok(self
                .boundary_sample2(m)?
                .into_iter()
                .map(|(z, c)| (Point::Planar(z), c))
                .collect());
        }
        Ok(match self {
            DomainSpec::Ball3 { center, radius } => fibonacci_sphere(*center, *radius, m)
                .into_iter()
                .map(|p| (Point::Spatial(p), 0))
                .collect(),
            DomainSpec::Tube3 { ambient, polyline, tube_radius } => {
                let mut out: Vec<(Point, usize)> = fibonacci_sphere(ambient.center, ambient.radius, m)
                    .into_iter()
                    .map(|p| (Point::Spatial(p), 0))
                    .collect();
                out.extend(
                    tube_offset_points(polyline, *tube_radius, m)
                        .into_iter()
                        .map(|p| (Point::Spatial(p), 1)),
                );
                out
            }
            _ => unreachable!(),
        })
    }

    /// Planar boundary samples.
    pub fn boundary_sample2(&self, m: usize) -> Result<Vec<(Point2, usize)>, GeometryError> {
        let comps = self.planar_components()?;
        Ok(comps
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.sample_params(m).into_iter().map(move |t| (c.point_at(t), i)))
            .collect())
    }

    /// Euclidean diameter of the (outer) domain.
    pub fn diameter(&self) -> f64 {
        match self {
            DomainSpec::Disk { radius, .. } => 2.0 * radius,
            DomainSpec::Annulus { r_outer, .. } => 2.0 * r_outer,
            DomainSpec::CircleDomain { outer, .. } => 2.0 * outer.max_radius(),
            DomainSpec::Slit { ambient, .. } => 2.0 * ambient.radius,
            DomainSpec::Ball3 { radius, .. } => 2.0 * radius,
            DomainSpec::Tube3 { ambient, .. } => 2.0 * ambient.radius,
        }
    }

    /// Axis-aligned bounding box `(xmin, xmax, ymin, ymax)` of a planar domain.
    pub fn bounding_box2(&self) -> Result<[f64; 4], GeometryError> {
        let (c, r) = match self {
            DomainSpec::Disk { center, radius } => (*center, *radius),
            DomainSpec::Annulus { center, r_outer, .. } => (*center, *r_outer),
            DomainSpec::CircleDomain { outer, .. } => (outer.center(), outer.max_radius()),
            DomainSpec::Slit { ambient, .. } => (ambient.center, ambient.radius),
            _ => return Err(GeometryError::Dimension { expected: "planar" }),
        };
        Ok([c.re - r, c.re + r, c.im - r, c.im + r])
    }
}

fn check_holes_disjoint(holes: &[BoundaryCurve]) -> Result<(), GeometryError> {
    // circles (and small circles) are compared exactly; trig curves by sampling
    for i in 0..holes.len() {
        for j in (i + 1)..holes.len() {
            let (a, b) = (&holes[i], &holes[j]);
            let ok = match (circle_of(a), circle_of(b)) {
                (Some((ca, la)), Some((cb, lb))) => {
                    let d = (ca - cb).norm();
                    // r_a + r_b < d, with radii possibly stored as logs
                    let big = la.max(lb);
                    d > 0.0 && big.exp() * (1.0 + (la.min(lb) - big).exp()) < d
                }
                _ => {
                    a.sample(256).iter().all(|&z| !b.encloses_closed(z))
                        && b.sample(256).iter().all(|&z| !a.encloses_closed(z))
                        && !a.encloses_closed(b.center())
                }
            };
            if !ok {
                return Err(GeometryError::field(
                    format!("holes[{j}]"),
                    format!("closure intersects holes[{i}]"),
                ));
            }
        }
    }
    Ok(())
}

/// Center and log-radius of circular curves.
fn circle_of(c: &BoundaryCurve) -> Option<(Point2, f64)> {
    match c {
        BoundaryCurve::Circle { center, radius } => Some((*center, radius.ln())),
        BoundaryCurve::SmallCircle { center, log_radius } => Some((*center, *log_radius)),
        BoundaryCurve::Trig { .. } => None,
    }
}

fn sphere_distance(p: Point3, center: Point3, radius: f64) -> (f64, Point3) {
    let d = p - center;
    let r = d.norm();
    let dir = d.normalized().unwrap_or(Point3::new(1.0, 0.0, 0.0));
    ((r - radius).abs(), center + dir * radius)
}

/// `m` nearly uniform points on a sphere (golden-angle spiral).
pub(crate) fn fibonacci_sphere(center: Point3, radius: f64, m: usize) -> Vec<Point3> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..m)
        .map(|k| {
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / m as f64;
            let rho = (1.0 - z * z).sqrt();
            let phi = golden * k as f64;
            center + Point3::new(rho * phi.cos(), rho * phi.sin(), z) * radius
        })
        .collect()
}

/// Points at distance `radius` from a polyline: `m` stations by arclength,
/// each offset in a direction rotating about the local axis.
pub(crate) fn tube_offset_points(polyline: &[Point3], radius: f64, m: usize) -> Vec<Point3> {
    let lengths: Vec<f64> = polyline.windows(2).map(|s| (s[1] - s[0]).norm()).collect();
    let total: f64 = lengths.iter().sum();
    if total == 0.0 || m == 0 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        let mut s = total * (k as f64 + 0.5) / m as f64;
        let mut seg = 0;
        while seg + 1 < lengths.len() && s > lengths[seg] {
            s -= lengths[seg];
            seg += 1;
        }
        let (a, b) = (polyline[seg], polyline[seg + 1]);
        let axis = (b - a).normalized().unwrap_or(Point3::new(0.0, 0.0, 1.0));
        let helper = if axis.x.abs() < 0.9 {
            Point3::new(1.0, 0.0, 0.0)
        } else {
            Point3::new(0.0, 1.0, 0.0)
        };
        let u = axis.cross(helper).normalized().expect("helper is not parallel");
        let v = axis.cross(u);
        let ang = TAU * k as f64 * 0.381_966;
        let base = a + axis * s.min(lengths[seg]);
        out.push(base + (u * ang.cos() + v * ang.sin()) * radius);
    }
    out
}
