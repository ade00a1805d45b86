//! Domain descriptions and the geometric queries every solver relies on.

mod curve;
mod domain;
mod mobius;
mod net;
mod point;

pub use curve::BoundaryCurve;
pub use domain::{BallSpec, BoundaryQuery, DiskSpec, DomainSpec, PlanarComponent};
pub(crate) use domain::fibonacci_sphere;
pub use mobius::{chordal_distance, MobiusMap};
pub use net::{net_points, NetRegion};
pub use point::{Point, Point2, Point3, SpherePoint};

/// Number of parameter samples used to seed nearest-point searches on
/// trigonometric curves.
pub const TRIG_DISTANCE_SAMPLES: usize = 4096;
/// Bisection steps applied after the sampled search.
pub const TRIG_DISTANCE_REFINEMENTS: usize = 40;

/// Distance from `p` to the closed segment `[a, b]`, with the segment
/// parameter of the nearest point.
pub fn segment_distance(p: Point2, a: Point2, b: Point2) -> (f64, Point2, f64) {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0)
    };
    let q = a + ab * t;
    ((p - q).norm(), q, t)
}

/// Distance from `p` to the closed segment `[a, b]` in space.
pub fn segment_distance3(p: Point3, a: Point3, b: Point3) -> (f64, Point3) {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    let t = if len2 == 0.0 {
        0.0
    } else {
        ((p - a).dot(ab) / len2).clamp(0.0, 1.0)
    };
    let q = a + ab * t;
    ((p - q).norm(), q)
}

/// Distance from `p` to a polyline, with the nearest point.
pub fn polyline_distance(p: Point3, polyline: &[Point3]) -> (f64, Point3) {
    match polyline {
        [] => (f64::INFINITY, p),
        [only] => ((p - *only).norm(), *only),
        _ => polyline
            .windows(2)
            .map(|s| segment_distance3(p, s[0], s[1]))
            .fold((f64::INFINITY, p), |best, cur| if cur.0 < best.0 { cur } else { best }),
    }
}
