use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::point::Point2;
use super::{TRIG_DISTANCE_REFINEMENTS, TRIG_DISTANCE_SAMPLES};
use crate::error::GeometryError;

/// One closed boundary component of a planar domain.
///
/// `Trig` is the star-shaped curve `center + r(θ)·e^{iθ}` with
/// `r(θ) = cos[0] + Σ_k cos[k]·cos(kθ) + sin[k-1]·sin(kθ)`.
/// `SmallCircle` stores its radius as a natural logarithm so that holes far
/// below the floating-point range stay representable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundaryCurve {
    Circle { center: Point2, radius: f64 },
    Trig { center: Point2, cos: Vec<f64>, sin: Vec<f64> },
    SmallCircle { center: Point2, log_radius: f64 },
}

impl BoundaryCurve {
    pub fn circle(center: Point2, radius: f64) -> Self {
        BoundaryCurve::Circle { center, radius }
    }

    pub fn center(&self) -> Point2 {
        match self {
            BoundaryCurve::Circle { center, .. }
            | BoundaryCurve::Trig { center, .. }
            | BoundaryCurve::SmallCircle { center, .. } => *center,
        }
    }

    pub fn validate(&self, field: &str) -> Result<(), GeometryError> {
        let finite = |z: Point2| z.re.is_finite() && z.im.is_finite();
        if !finite(self.center()) {
            return Err(GeometryError::field(format!("{field}.center"), "must be finite"));
        }
        match self {
            BoundaryCurve::Circle { radius, .. } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(GeometryError::field(format!("{field}.radius"), "must be positive"));
                }
            }
            BoundaryCurve::Trig { cos, sin, .. } => {
                if cos.is_empty() {
                    return Err(GeometryError::field(format!("{field}.cos"), "needs the constant term"));
                }
                if sin.len() + 1 > cos.len() {
                    return Err(GeometryError::field(
                        format!("{field}.sin"),
                        "has more harmonics than `cos`",
                    ));
                }
                if cos.iter().chain(sin).any(|c| !c.is_finite()) {
                    return Err(GeometryError::field(format!("{field}.cos"), "coefficients must be finite"));
                }
                let min_r = (0..TRIG_DISTANCE_SAMPLES)
                    .map(|k| self.radius_at(TAU * k as f64 / TRIG_DISTANCE_SAMPLES as f64))
                    .fold(f64::INFINITY, f64::min);
                if !(min_r > 0.0) {
                    return Err(GeometryError::field(
                        format!("{field}.cos"),
                        "radial function must stay positive",
                    ));
                }
            }
            BoundaryCurve::SmallCircle { log_radius, .. } => {
                if !log_radius.is_finite() {
                    return Err(GeometryError::field(format!("{field}.log_radius"), "must be finite"));
                }
            }
        }
        Ok(())
    }

    /// Radial function in polar coordinates about the center.
    pub fn radius_at(&self, theta: f64) -> f64 {
        match self {
            BoundaryCurve::Circle { radius, .. } => *radius,
            BoundaryCurve::SmallCircle { log_radius, .. } => log_radius.exp(),
            BoundaryCurve::Trig { cos, sin, .. } => {
                let mut r = cos[0];
                for (k, a) in cos.iter().enumerate().skip(1) {
                    r += a * (k as f64 * theta).cos();
                }
                for (k, b) in sin.iter().enumerate() {
                    r += b * ((k + 1) as f64 * theta).sin();
                }
                r
            }
        }
    }

    fn radius_derivative(&self, theta: f64) -> f64 {
        match self {
            BoundaryCurve::Trig { cos, sin, .. } => {
                let mut dr = 0.0;
                for (k, a) in cos.iter().enumerate().skip(1) {
                    dr -= a * k as f64 * (k as f64 * theta).sin();
                }
                for (k, b) in sin.iter().enumerate() {
                    let m = (k + 1) as f64;
                    dr += b * m * (m * theta).cos();
                }
                dr
            }
            _ => 0.0,
        }
    }

    /// Point at curve parameter `t ∈ [0, 1)`.
    pub fn point_at(&self, t: f64) -> Point2 {
        let theta = TAU * t;
        self.center() + Complex64::from_polar(self.radius_at(theta), theta)
    }

    /// Derivative with respect to the angle θ = 2πt.
    pub fn tangent_at(&self, t: f64) -> Point2 {
        let theta = TAU * t;
        let e = Complex64::from_polar(1.0, theta);
        (Complex64::new(self.radius_derivative(theta), self.radius_at(theta))) * e
    }

    /// Outward unit normal of the region the curve bounds.
    pub fn normal_at(&self, t: f64) -> Point2 {
        let tan = self.tangent_at(t);
        let n = tan * Complex64::new(0.0, -1.0);
        n / n.norm()
    }

    /// The curve scaled by `factor` about its center.
    pub fn scaled(&self, factor: f64) -> BoundaryCurve {
        match self {
            BoundaryCurve::Circle { center, radius } => BoundaryCurve::Circle {
                center: *center,
                radius: radius * factor,
            },
            BoundaryCurve::SmallCircle { center, log_radius } => BoundaryCurve::SmallCircle {
                center: *center,
                log_radius: log_radius + factor.ln(),
            },
            BoundaryCurve::Trig { center, cos, sin } => BoundaryCurve::Trig {
                center: *center,
                cos: cos.iter().map(|c| c * factor).collect(),
                sin: sin.iter().map(|c| c * factor).collect(),
            },
        }
    }

    /// Strictly inside the bounded region enclosed by the curve.
    pub fn encloses(&self, z: Point2) -> bool {
        let d = z - self.center();
        match self {
            BoundaryCurve::Circle { radius, .. } => d.norm() < *radius,
            BoundaryCurve::SmallCircle { log_radius, .. } => {
                let r = d.norm();
                r == 0.0 || r.ln() < *log_radius
            }
            BoundaryCurve::Trig { .. } => {
                let r = d.norm();
                r == 0.0 || r < self.radius_at(d.arg())
            }
        }
    }

    /// Inside or on the curve.
    pub fn encloses_closed(&self, z: Point2) -> bool {
        let d = z - self.center();
        match self {
            BoundaryCurve::Circle { radius, .. } => d.norm() <= *radius,
            BoundaryCurve::SmallCircle { log_radius, .. } => {
                let r = d.norm();
                r == 0.0 || r.ln() <= *log_radius
            }
            BoundaryCurve::Trig { .. } => {
                let r = d.norm();
                r == 0.0 || r <= self.radius_at(d.arg())
            }
        }
    }

    /// Largest distance of the curve from its center.
    pub fn max_radius(&self) -> f64 {
        match self {
            BoundaryCurve::Circle { radius, .. } => *radius,
            BoundaryCurve::SmallCircle { log_radius, .. } => log_radius.exp(),
            BoundaryCurve::Trig { .. } => (0..TRIG_DISTANCE_SAMPLES)
                .map(|k| self.radius_at(TAU * k as f64 / TRIG_DISTANCE_SAMPLES as f64))
                .fold(0.0, f64::max),
        }
    }

    /// Euclidean distance from `z` to the curve, the nearest point, and its
    /// curve parameter. Ties resolve to the smallest parameter.
    pub fn distance(&self, z: Point2) -> (f64, Point2, f64) {
        match self {
            BoundaryCurve::Circle { center, radius } => circle_distance(z, *center, *radius),
            BoundaryCurve::SmallCircle { center, log_radius } => {
                circle_distance(z, *center, log_radius.exp())
            }
            BoundaryCurve::Trig { .. } => self.trig_distance(z),
        }
    }

    fn trig_distance(&self, z: Point2) -> (f64, Point2, f64) {
        let n = TRIG_DISTANCE_SAMPLES;
        let mut best = (f64::INFINITY, 0usize);
        for k in 0..n {
            let d2 = (self.point_at(k as f64 / n as f64) - z).norm_sqr();
            if d2 < best.0 {
                best = (d2, k);
            }
        }
        let h = 1.0 / n as f64;
        let t0 = best.1 as f64 * h;
        let slope = |t: f64| ((self.point_at(t) - z).conj() * self.tangent_at(t)).re;
        let (mut lo, mut hi) = (t0 - h, t0 + h);
        let mut t_best = t0;
        if slope(lo) < 0.0 && slope(hi) > 0.0 {
            for _ in 0..TRIG_DISTANCE_REFINEMENTS {
                let mid = 0.5 * (lo + hi);
                if slope(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let t = 0.5 * (lo + hi);
            if (self.point_at(t) - z).norm_sqr() < best.0 {
                t_best = t;
            }
        }
        let t_best = t_best.rem_euclid(1.0);
        let p = self.point_at(t_best);
        ((p - z).norm(), p, t_best)
    }

    /// `m` points uniformly spaced in the curve parameter, starting at `t = 0`.
    pub fn sample(&self, m: usize) -> Vec<Point2> {
        (0..m).map(|k| self.point_at(k as f64 / m as f64)).collect()
    }
}

fn circle_distance(z: Point2, center: Point2, radius: f64) -> (f64, Point2, f64) {
    let d = z - center;
    let r = d.norm();
    let (dir, t) = if r == 0.0 {
        (Complex64::new(1.0, 0.0), 0.0)
    } else {
        (d / r, (d.arg() / TAU).rem_euclid(1.0))
    };
    ((r - radius).abs(), center + dir * radius, t)
}
