use num_complex::Complex64;

use super::point::{Point2, SpherePoint};
use crate::error::GeometryError;

/// Fractional-linear map `z ↦ (az + b) / (cz + d)`, normalized so that
/// `ad − bc = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MobiusMap {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

impl MobiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self, GeometryError> {
        let det = a * d - b * c;
        if !(det.norm() > 0.0) || !det.is_finite() {
            return Err(GeometryError::SingularMobius);
        }
        let s = det.sqrt();
        Ok(MobiusMap {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        })
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        MobiusMap { a: one, b: zero, c: zero, d: one }
    }

    /// `z ↦ 1/z`.
    pub fn reciprocal() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self::new(zero, one, one, zero).expect("reciprocal is nonsingular")
    }

    /// `z ↦ (z − i)/(z + i)`, the upper half-plane onto the unit disk.
    pub fn cayley() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::i();
        Self::new(one, -i, one, i).expect("Cayley map is nonsingular")
    }

    /// Unit-disk automorphism `z ↦ (z − a)/(1 − ā z)` for `|a| < 1`.
    pub fn disk_automorphism(a: Point2) -> Result<Self, GeometryError> {
        if !(a.norm() < 1.0) {
            return Err(GeometryError::field("a", "disk automorphism needs |a| < 1"));
        }
        let one = Complex64::new(1.0, 0.0);
        Self::new(one, -a, -a.conj(), one)
    }

    /// `z ↦ scale·z + shift`.
    pub fn affine(scale: Complex64, shift: Complex64) -> Result<Self, GeometryError> {
        let one = Complex64::new(1.0, 0.0);
        Self::new(scale, shift, Complex64::new(0.0, 0.0), one)
    }

    pub fn coefficients(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn apply(&self, z: SpherePoint) -> SpherePoint {
        match z {
            SpherePoint::Infinity => {
                if self.c == Complex64::new(0.0, 0.0) {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite(self.a / self.c)
                }
            }
            SpherePoint::Finite(z) => self.apply_finite(z),
        }
    }

    pub fn apply_finite(&self, z: Point2) -> SpherePoint {
        let num = self.a * z + self.b;
        let den = self.c * z + self.d;
        if den == Complex64::new(0.0, 0.0) {
            SpherePoint::Infinity
        } else {
            SpherePoint::Finite(num / den)
        }
    }

    pub fn inverse(&self) -> Self {
        MobiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MobiusMap) -> Self {
        MobiusMap {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    /// |f'(z)| at a finite non-pole point.
    pub fn derivative_modulus(&self, z: Point2) -> f64 {
        let den = self.c * z + self.d;
        1.0 / den.norm_sqr()
    }

    /// Image of the circle `C(center, radius)`. `None` when the image is a
    /// line, i.e. the circle passes through the pole of the map.
    pub fn image_circle(&self, center: Point2, radius: f64) -> Option<(Point2, f64)> {
        let pts: Vec<Point2> = [0.0, 2.0, 4.0]
            .iter()
            .map(|k| {
                let t = k * std::f64::consts::PI / 3.0;
                self.apply_finite(center + Complex64::from_polar(radius, t)).finite()
            })
            .collect::<Option<_>>()?;
        circumcircle(pts[0], pts[1], pts[2])
    }
}

fn circumcircle(p: Point2, q: Point2, r: Point2) -> Option<(Point2, f64)> {
    let (ax, ay, bx, by, cx, cy) = (p.re, p.im, q.re, q.im, r.re, r.im);
    let d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    let scale = (q - p).norm().max((r - p).norm());
    if d.abs() <= 1e-14 * scale * scale {
        return None;
    }
    let a2 = ax * ax + ay * ay;
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
    let uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
    let center = Complex64::new(ux, uy);
    Some((center, (p - center).norm()))
}

/// Chordal distance on the Riemann sphere; at most 2.
pub fn chordal_distance(p: SpherePoint, q: SpherePoint) -> f64 {
    match (p, q) {
        (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
        (SpherePoint::Finite(z), SpherePoint::Infinity) | (SpherePoint::Infinity, SpherePoint::Finite(z)) => {
            2.0 / (1.0 + z.norm_sqr()).sqrt()
        }
        (SpherePoint::Finite(a), SpherePoint::Finite(b)) => {
            2.0 * (a - b).norm() / ((1.0 + a.norm_sqr()) * (1.0 + b.norm_sqr())).sqrt()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_fixes_points() {
        let m = MobiusMap::identity();
        assert_eq!(m.apply(c(3.0, 4.0).into()), SpherePoint::Finite(c(3.0, 4.0)));
        assert_eq!(m.inverse(), m);
    }

    #[test]
    fn reciprocal_conventions() {
        let m = MobiusMap::reciprocal();
        assert_eq!(m.apply(SpherePoint::Infinity).finite().unwrap().norm(), 0.0);
        assert!(m.apply(c(0.0, 0.0).into()).is_infinite());
        let inv = m.inverse();
        for z in [c(0.3, -2.0), c(1.0, 0.0), c(-4.0, 0.5)] {
            let a = m.apply(z.into()).finite().unwrap();
            let b = inv.apply(z.into()).finite().unwrap();
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_of_numerator() {
        let one = c(1.0, 0.0);
        let m = MobiusMap::new(one, -one, one, one).unwrap();
        assert!(m.apply(one.into()).finite().unwrap().norm() < 1e-16);
        assert!(m.apply((-one).into()).is_infinite());
    }

    #[test]
    fn affine_inverse() {
        // 2z + 1 inverts to (z − 1)/2
        let m = MobiusMap::affine(c(2.0, 0.0), c(1.0, 0.0)).unwrap();
        let inv = m.inverse();
        for z in [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)] {
            let got = inv.apply(z.into()).finite().unwrap();
            assert!((got - (z - 1.0) / 2.0).norm() < 1e-15);
            let back = inv.apply(m.apply(z.into())).finite().unwrap();
            assert!((back - z).norm() < 1e-12);
        }
    }

    #[test]
    fn singular_rejected() {
        let one = c(1.0, 0.0);
        assert_eq!(MobiusMap::new(one, one, one, one), Err(GeometryError::SingularMobius));
    }

    #[test]
    fn chordal_examples() {
        assert_eq!(chordal_distance(c(0.0, 0.0).into(), SpherePoint::Infinity), 2.0);
        assert_eq!(chordal_distance(c(0.0, 0.0).into(), c(0.0, 0.0).into()), 0.0);
        assert!((chordal_distance(c(1.0, 0.0).into(), c(-1.0, 0.0).into()) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn cayley_maps_half_plane_into_disk() {
        let m = MobiusMap::cayley();
        assert!(m.apply(Complex64::i().into()).finite().unwrap().norm() < 1e-16);
        let z = m.apply(c(3.0, 0.0).into()).finite().unwrap();
        assert!((z.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn image_circle_matches_pointwise_images() {
        let m = MobiusMap::disk_automorphism(c(0.3, 0.2)).unwrap();
        let (ctr, rad) = m.image_circle(c(0.5, 0.1), 0.1).unwrap();
        for k in 0..16 {
            let z = c(0.5, 0.1) + Complex64::from_polar(0.1, k as f64 * 0.4);
            let w = m.apply(z.into()).finite().unwrap();
            assert!(((w - ctr).norm() - rad).abs() < 1e-12);
        }
    }

    fn sphere_point() -> impl Strategy<Value = SpherePoint> {
        prop_oneof![
            1 => Just(SpherePoint::Infinity),
            20 => (-5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y)| SpherePoint::Finite(c(x, y))),
        ]
    }

    fn mobius() -> impl Strategy<Value = MobiusMap> {
        proptest::collection::vec(-3.0..3.0f64, 8)
            .prop_filter_map("singular", |v| {
                let m = MobiusMap::new(c(v[0], v[1]), c(v[2], v[3]), c(v[4], v[5]), c(v[6], v[7])).ok()?;
                // keep the coefficients moderate so round-off stays well below tolerance
                m.coefficients().iter().all(|z| z.norm() < 50.0).then_some(m)
            })
    }

    proptest! {
        #[test]
        fn inverse_composes_to_identity(m in mobius(), z in sphere_point()) {
            let back = m.inverse().apply(m.apply(z));
            prop_assert!(chordal_distance(back, z) < 1e-10);
            let id = m.compose(&m.inverse());
            prop_assert!(chordal_distance(id.apply(z), z) < 1e-10);
        }

        #[test]
        fn chordal_is_symmetric_and_bounded(p in sphere_point(), q in sphere_point()) {
            let d = chordal_distance(p, q);
            prop_assert!((d - chordal_distance(q, p)).abs() < 1e-15);
            prop_assert!(d <= 2.0 + 1e-15);
        }
    }
}
