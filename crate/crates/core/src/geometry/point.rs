use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A finite point of the plane, used as a complex number.
pub type Point2 = Complex64;

/// A point of the Riemann sphere. Infinity is its own variant and never a
/// coordinate pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpherePoint {
    Finite(Point2),
    Infinity,
}

impl SpherePoint {
    pub fn finite(self) -> Option<Point2> {
        match self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }
}

impl From<Point2> for SpherePoint {
    fn from(z: Point2) -> Self {
        SpherePoint::Finite(z)
    }
}

/// A point of ℝ³. Serialized as `[x, y, z]`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn dot(self, o: Point3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Point3) -> Point3 {
        Point3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_sqr(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Unit vector in the direction of `self`; `None` for the zero vector.
    pub fn normalized(self) -> Option<Point3> {
        let n = self.norm();
        (n > 0.0).then(|| self * (1.0 / n))
    }
}

impl From<[f64; 3]> for Point3 {
    fn from(a: [f64; 3]) -> Self {
        Point3::new(a[0], a[1], a[2])
    }
}

impl From<Point3> for [f64; 3] {
    fn from(p: Point3) -> Self {
        [p.x, p.y, p.z]
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

/// A finite point in either dimension. JSON: `[x, y]` or `[x, y, z]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Planar(Point2),
    Spatial(Point3),
}

impl Point {
    pub fn planar(self) -> Option<Point2> {
        match self {
            Point::Planar(z) => Some(z),
            Point::Spatial(_) => None,
        }
    }

    pub fn spatial(self) -> Option<Point3> {
        match self {
            Point::Spatial(p) => Some(p),
            Point::Planar(_) => None,
        }
    }

    pub fn distance(self, other: Point) -> f64 {
        match (self, other) {
            (Point::Planar(a), Point::Planar(b)) => (a - b).norm(),
            (Point::Spatial(a), Point::Spatial(b)) => (a - b).norm(),
            _ => f64::NAN,
        }
    }
}

impl From<Point2> for Point {
    fn from(z: Point2) -> Self {
        Point::Planar(z)
    }
}

impl From<Point3> for Point {
    fn from(p: Point3) -> Self {
        Point::Spatial(p)
    }
}
