//! Exact and series-accurate Green's functions of model domains.
//!
//! All evaluators follow the zero-extension convention: outside the domain
//! (and on its boundary) the value is 0.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GreenError, Result};
use crate::evaluator::GreenEvaluator;
use crate::geometry::{MobiusMap, Point2, Point3, SpherePoint};

/// Which computation produced a Green's function value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Mfs,
    Wos,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed_form",
            Method::Mfs => "mfs",
            Method::Wos => "wos",
        })
    }
}

/// A Green's function value with its provenance and error information.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreenEstimate {
    pub value: f64,
    pub method: Method,
    /// Boundary-residual bound for deterministic methods, standard error for
    /// Monte Carlo.
    pub error_bound: f64,
    pub meta: BTreeMap<String, f64>,
}

impl GreenEstimate {
    pub fn new(value: f64, method: Method, error_bound: f64) -> Self {
        GreenEstimate { value, method, error_bound, meta: BTreeMap::new() }
    }

    pub fn with_meta(mut self, key: &str, value: f64) -> Self {
        self.meta.insert(key.to_string(), value);
        self
    }
}

/// Green's function of the disk `D(center, radius)`.
pub fn green_disk(center: Point2, radius: f64, z: Point2, w: Point2) -> Result<f64> {
    let (zc, wc) = (z - center, w - center);
    if !(wc.norm() < radius) {
        return Err(GreenError::Precondition("pole must lie inside the disk".into()));
    }
    if z == w {
        return Err(GreenError::Pole);
    }
    if zc.norm() >= radius {
        return Ok(0.0);
    }
    let num = radius * radius - zc * wc.conj();
    Ok((num.norm() / (radius * (z - w).norm())).ln().max(0.0))
}

/// Green's function of the upper half-plane.
pub fn green_halfplane(z: Point2, w: Point2) -> Result<f64> {
    if !(w.im > 0.0) {
        return Err(GreenError::Precondition("pole must lie in the upper half-plane".into()));
    }
    if z == w {
        return Err(GreenError::Pole);
    }
    if z.im <= 0.0 {
        return Ok(0.0);
    }
    Ok(((z - w.conj()).norm() / (z - w).norm()).ln().max(0.0))
}

/// Green's function of `ℂ ∖ (−∞, −d]` with pole at 0: the radial majorant
/// that circular symmetrization produces.
pub fn green_slit_ray(d: f64, z: Point2) -> Result<f64> {
    if !(d > 0.0) {
        return Err(GreenError::Precondition("slit distance must be positive".into()));
    }
    if z == Complex64::new(0.0, 0.0) {
        return Err(GreenError::Pole);
    }
    if z.im == 0.0 && z.re <= -d {
        return Ok(0.0);
    }
    let s = ((z + d) / d).sqrt();
    Ok(((s + 1.0).norm() / (s - 1.0).norm()).ln().max(0.0))
}

/// Green's function of the ball `B(c, R)` in ℝ³, normalized so that
/// `g(x, w) = |x − w|⁻¹ + O(1)`.
pub fn green_ball3(c: Point3, radius: f64, x: Point3, w: Point3) -> Result<f64> {
    let wc = w - c;
    let rw = wc.norm();
    if !(rw < radius) {
        return Err(GreenError::Precondition("pole must lie inside the ball".into()));
    }
    if x == w {
        return Err(GreenError::Pole);
    }
    if (x - c).norm() >= radius {
        return Ok(0.0);
    }
    let direct = 1.0 / (x - w).norm();
    let image = if rw == 0.0 {
        1.0 / radius
    } else {
        let star = c + wc * (radius * radius / (rw * rw));
        (radius / rw) / (x - star).norm()
    };
    Ok((direct - image).max(0.0))
}

/// Green's function of the annulus `q < |z| < 1` built from the truncated
/// prime-function product.
#[derive(Clone, Debug)]
pub struct AnnulusGreen {
    q: f64,
    pole: Point2,
    /// q^{2k}, k = 1..K
    powers: Vec<f64>,
    alpha: f64,
    beta: f64,
}

impl AnnulusGreen {
    pub fn new(q: f64, pole: Point2) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(GreenError::Precondition("annulus needs 0 < q < 1".into()));
        }
        let rw = pole.norm();
        if !(rw > q && rw < 1.0) {
            return Err(GreenError::Precondition("pole must lie inside the annulus".into()));
        }
        let q2 = q * q;
        let mut powers = Vec::new();
        let mut p = q2;
        loop {
            powers.push(p);
            if p < 1e-16 {
                break;
            }
            p *= q2;
        }
        let mut g = AnnulusGreen { q, pole, powers, alpha: 0.0, beta: 0.0 };
        // S is constant on each boundary circle; sample it away from the pole
        let dir = -pole / rw;
        let s_outer = g.series(dir);
        let s_inner = g.series(dir * q);
        g.alpha = s_outer;
        g.beta = (s_inner - s_outer) / q.ln();
        Ok(g)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn pole(&self) -> Point2 {
        self.pole
    }

    pub fn truncation(&self) -> usize {
        self.powers.len()
    }

    fn log_prime(&self, zeta: Point2) -> f64 {
        let one = Complex64::new(1.0, 0.0);
        let mut s = (one - zeta).norm().ln();
        for &p in &self.powers {
            s += (one - zeta * p).norm().ln() + (one - p / zeta).norm().ln();
        }
        s
    }

    /// `log |P(z·w̄) / P(z/w)|`.
    fn series(&self, z: Point2) -> f64 {
        self.log_prime(z * self.pole.conj()) - self.log_prime(z / self.pole)
    }

    /// Raw series value without zero extension.
    pub fn raw(&self, z: Point2) -> f64 {
        self.series(z) - self.alpha - self.beta * z.norm().ln()
    }

    pub fn value_at(&self, z: Point2) -> Result<f64> {
        if z == self.pole {
            return Err(GreenError::Pole);
        }
        let r = z.norm();
        if r <= self.q || r >= 1.0 {
            return Ok(0.0);
        }
        Ok(self.raw(z).max(0.0))
    }
}

/// Convenience wrapper over [`AnnulusGreen`].
pub fn green_annulus(q: f64, z: Point2, w: Point2) -> Result<f64> {
    AnnulusGreen::new(q, w)?.value_at(z)
}

/// Green evaluator of `D(center, radius)` with a fixed pole.
#[derive(Clone, Copy, Debug)]
pub struct DiskGreen {
    pub center: Point2,
    pub radius: f64,
    pub pole: Point2,
}

impl DiskGreen {
    pub fn new(center: Point2, radius: f64, pole: Point2) -> Result<Self> {
        if !((pole - center).norm() < radius) {
            return Err(GreenError::Precondition("pole must lie inside the disk".into()));
        }
        Ok(DiskGreen { center, radius, pole })
    }
}

impl GreenEvaluator for DiskGreen {
    fn value(&self, z: Point2) -> f64 {
        green_disk(self.center, self.radius, z, self.pole).unwrap_or(f64::INFINITY)
    }
    fn error_bound(&self) -> f64 {
        0.0
    }
    fn method(&self) -> Method {
        Method::ClosedForm
    }
    fn pole(&self) -> SpherePoint {
        SpherePoint::Finite(self.pole)
    }
}

/// Annulus `A(center; r_inner, r_outer)` via the unit-annulus series.
#[derive(Clone, Debug)]
pub struct ScaledAnnulusGreen {
    center: Point2,
    r_outer: f64,
    inner: AnnulusGreen,
}

impl ScaledAnnulusGreen {
    pub fn new(center: Point2, r_inner: f64, r_outer: f64, pole: Point2) -> Result<Self> {
        let inner = AnnulusGreen::new(r_inner / r_outer, (pole - center) / r_outer)?;
        Ok(ScaledAnnulusGreen { center, r_outer, inner })
    }
}

impl GreenEvaluator for ScaledAnnulusGreen {
    fn value(&self, z: Point2) -> f64 {
        self.inner
            .value_at((z - self.center) / self.r_outer)
            .unwrap_or(f64::INFINITY)
    }
    fn error_bound(&self) -> f64 {
        1e-12
    }
    fn method(&self) -> Method {
        Method::ClosedForm
    }
    fn pole(&self) -> SpherePoint {
        SpherePoint::Finite(self.center + self.inner.pole * self.r_outer)
    }
}

/// Upper half-plane evaluator.
#[derive(Clone, Copy, Debug)]
pub struct HalfPlaneGreen {
    pub pole: Point2,
}

impl GreenEvaluator for HalfPlaneGreen {
    fn value(&self, z: Point2) -> f64 {
        green_halfplane(z, self.pole).unwrap_or(f64::INFINITY)
    }
    fn error_bound(&self) -> f64 {
        0.0
    }
    fn method(&self) -> Method {
        Method::ClosedForm
    }
    fn pole(&self) -> SpherePoint {
        SpherePoint::Finite(self.pole)
    }
}

/// The slit-ray majorant recentered at `center`.
#[derive(Clone, Copy, Debug)]
pub struct SlitRayGreen {
    pub d: f64,
    pub center: Point2,
}

impl GreenEvaluator for SlitRayGreen {
    fn value(&self, z: Point2) -> f64 {
        green_slit_ray(self.d, z - self.center).unwrap_or(f64::INFINITY)
    }
    fn error_bound(&self) -> f64 {
        0.0
    }
    fn method(&self) -> Method {
        Method::ClosedForm
    }
    fn pole(&self) -> SpherePoint {
        SpherePoint::Finite(self.center)
    }
}

/// Green's function of `m(Ω)` from that of `Ω`: `z ↦ g(m⁻¹(z))`, with pole
/// `m(w)`. The image pole may be ∞.
pub struct Transported<E> {
    map: MobiusMap,
    inverse: MobiusMap,
    inner: E,
}

/// Transport a Green evaluator along a Möbius map.
pub fn transport_green<E: GreenEvaluator>(map: MobiusMap, inner: E) -> Transported<E> {
    Transported { inverse: map.inverse(), map, inner }
}

impl<E: GreenEvaluator> Transported<E> {
    pub fn value_at_sphere(&self, z: SpherePoint) -> f64 {
        match self.inverse.apply(z) {
            SpherePoint::Finite(u) => self.inner.value(u),
            // preimage ∞ lies outside a bounded source domain
            SpherePoint::Infinity => 0.0,
        }
    }
}

impl<E: GreenEvaluator> GreenEvaluator for Transported<E> {
    fn value(&self, z: Point2) -> f64 {
        self.value_at_sphere(SpherePoint::Finite(z))
    }
    fn error_bound(&self) -> f64 {
        self.inner.error_bound()
    }
    fn method(&self) -> Method {
        self.inner.method()
    }
    fn pole(&self) -> SpherePoint {
        self.map.apply(self.inner.pole())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{LN_2, TAU};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn disk_examples() {
        assert_abs_diff_eq!(green_disk(c(0., 0.), 1.0, c(0.5, 0.), c(0., 0.)).unwrap(), LN_2, epsilon = 1e-15);
        assert_abs_diff_eq!(
            green_disk(c(0., 0.), 2.0, c(0.5, 0.), c(0., 0.)).unwrap(),
            4f64.ln(),
            epsilon = 1e-15
        );
        // |1 − (1/2)(−i/2)| / |1/2 − i/2| = |1 + i/4| / (√2/2)
        let expected = (c(1.0, 0.25).norm() / (2f64.sqrt() / 2.0)).ln();
        let got = green_disk(c(0., 0.), 1.0, c(0.5, 0.), c(0., 0.5)).unwrap();
        assert_abs_diff_eq!(got, expected, epsilon = 1e-15);
        assert_abs_diff_eq!(got, 0.376_886, epsilon = 1e-6);
        assert!(matches!(green_disk(c(0., 0.), 1.0, c(0.1, 0.), c(0.1, 0.)), Err(GreenError::Pole)));
        assert_eq!(green_disk(c(0., 0.), 1.0, c(3.0, 0.), c(0.1, 0.)).unwrap(), 0.0);
    }

    #[test]
    fn halfplane_examples() {
        assert_abs_diff_eq!(green_halfplane(c(0., 1.), c(0., 2.)).unwrap(), 3f64.ln(), epsilon = 1e-15);
        assert_eq!(green_halfplane(c(5.0, 0.0), c(0., 2.)).unwrap(), 0.0);
        assert!(green_halfplane(c(5.0, 1e-12), c(0., 2.)).unwrap() < 1e-11);
        let (z, w) = (c(0.3, 0.7), c(-1.0, 2.5));
        assert_abs_diff_eq!(
            green_halfplane(z, w).unwrap(),
            green_halfplane(w, z).unwrap(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn slit_ray_examples() {
        assert_eq!(green_slit_ray(1.0, c(-3.0, 0.0)).unwrap(), 0.0);
        assert_abs_diff_eq!(
            green_slit_ray(1.0, c(1.0, 0.0)).unwrap(),
            2.0 * (1.0 + 2f64.sqrt()).ln(),
            epsilon = 1e-14
        );
        assert!(green_slit_ray(1.0, c(1e6, 0.0)).unwrap() < 0.005);
        assert!(matches!(green_slit_ray(1.0, c(0.0, 0.0)), Err(GreenError::Pole)));
        // decreasing along the positive axis
        let vals: Vec<f64> = (1..50).map(|k| green_slit_ray(1.0, c(k as f64 * 0.3, 0.0)).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn ball_examples() {
        let o = Point3::ORIGIN;
        let x = Point3::new(0.5, 0.0, 0.0);
        assert_abs_diff_eq!(green_ball3(o, 1.0, x, o).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(green_ball3(o, 2.0, x, o).unwrap(), 1.5, epsilon = 1e-15);
        let w = Point3::new(0.2, -0.3, 0.1);
        let near = Point3::new(0.0, 0.0, 1.0 - 1e-12);
        assert!(green_ball3(o, 1.0, near, w).unwrap() < 1e-10);
        // symmetric in the two arguments
        let y = Point3::new(-0.4, 0.1, 0.3);
        assert_abs_diff_eq!(
            green_ball3(o, 1.0, y, w).unwrap(),
            green_ball3(o, 1.0, w, y).unwrap(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn annulus_vanishes_on_both_circles() {
        let g = AnnulusGreen::new(0.25, c(0.5, 0.2)).unwrap();
        for k in 0..1000 {
            let e = Complex64::from_polar(1.0, TAU * k as f64 / 1000.0);
            assert!(g.raw(e).abs() < 1e-9, "outer {}", g.raw(e));
            assert!(g.raw(e * 0.25).abs() < 1e-9, "inner {}", g.raw(e * 0.25));
        }
        assert!(g.truncation() >= 13);
    }

    #[test]
    fn annulus_symmetric_and_singular() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let q = 0.3;
        let sample = |rng: &mut ChaCha8Rng| {
            let r = q + (1.0 - q) * rng.random_range(0.05..0.95);
            Complex64::from_polar(r, rng.random_range(0.0..TAU))
        };
        for _ in 0..20 {
            let (z, w) = (sample(&mut rng), sample(&mut rng));
            let a = green_annulus(q, z, w).unwrap();
            let b = green_annulus(q, w, z).unwrap();
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
        let w = c(0.6, 0.1);
        let g = AnnulusGreen::new(q, w).unwrap();
        let reg: Vec<f64> = [1e-3, 1e-4, 1e-5, 1e-6]
            .iter()
            .map(|&t| g.raw(w + t) + t.ln())
            .collect();
        assert!(reg.windows(2).all(|p| (p[0] - p[1]).abs() < 1e-2));
    }

    #[test]
    fn disk_mean_value_property() {
        let w = c(0.2, -0.1);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut done = 0;
        while done < 100 {
            let z0 = Complex64::from_polar(rng.random_range(0.0..0.8), rng.random_range(0.0..TAU));
            let r = 0.05;
            if (z0 - w).norm() < 2.0 * r || z0.norm() + r >= 1.0 {
                continue;
            }
            let mean: f64 = (0..32)
                .map(|k| green_disk(c(0., 0.), 1.0, z0 + Complex64::from_polar(r, TAU * k as f64 / 32.0), w).unwrap())
                .sum::<f64>()
                / 32.0;
            assert!((mean - green_disk(c(0., 0.), 1.0, z0, w).unwrap()).abs() < 1e-8);
            done += 1;
        }
    }

    #[test]
    fn disk_monotone_in_radius() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let z = Complex64::from_polar(rng.random_range(0.01..0.999), rng.random_range(0.0..TAU));
            let g1 = green_disk(c(0., 0.), 1.0, z, c(0., 0.)).unwrap();
            let g2 = green_disk(c(0., 0.), 2.0, z, c(0., 0.)).unwrap();
            assert!(g1 <= g2);
        }
    }

    #[test]
    fn transport_identity_and_reciprocal() {
        let disk = DiskGreen::new(c(0., 0.), 1.0, c(0.1, 0.2)).unwrap();
        let same = transport_green(MobiusMap::identity(), disk);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            assert_eq!(same.value(z), disk.value(z));
        }
        let centered = DiskGreen::new(c(0., 0.), 1.0, c(0., 0.)).unwrap();
        let outside = transport_green(MobiusMap::reciprocal(), centered);
        assert!(outside.pole().is_infinite());
        assert_abs_diff_eq!(outside.value(c(2.0, 0.0)), LN_2, epsilon = 1e-15);
        // log|z| + O(1) near the pole at infinity
        assert_abs_diff_eq!(outside.value(c(1e6, 0.0)), 1e6f64.ln(), epsilon = 1e-9);
    }

    #[test]
    fn cayley_transport_matches_disk() {
        let w = c(0.3, 1.7);
        let cay = MobiusMap::cayley();
        let half = transport_green(cay, HalfPlaneGreen { pole: w });
        let w_img = cay.apply(w.into()).finite().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let z = Complex64::from_polar(rng.random_range(0.0..0.99), rng.random_range(0.0..TAU));
            let disk = green_disk(c(0., 0.), 1.0, z, w_img).unwrap();
            assert!((half.value(z) - disk).abs() < 1e-10);
        }
    }
}
