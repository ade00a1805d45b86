use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::point::Point2;

/// Open annular region `r_inner < |z − center| < r_outer`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetRegion {
    pub center: Point2,
    pub r_inner: f64,
    pub r_outer: f64,
}

impl NetRegion {
    pub fn contains(&self, z: Point2) -> bool {
        let r = (z - self.center).norm();
        r > self.r_inner && r < self.r_outer
    }
}

/// Cell centers of the square grid of pitch `spacing/√2` anchored at the
/// region center, kept when inside the region, in row-major order (rows by
/// increasing `y`). Every region point is within `spacing` of an output
/// point. Using cell centers keeps points off circles of radius
/// `spacing · √m` about the center, which lattice points would hit exactly.
pub fn net_points(spacing: f64, region: &NetRegion) -> Vec<Point2> {
    if !(spacing > 0.0) || region.r_inner >= region.r_outer {
        return Vec::new();
    }
    let pitch = spacing / std::f64::consts::SQRT_2;
    let k = (region.r_outer / pitch).ceil() as i64;
    let mut out = Vec::new();
    for j in -k - 1..=k {
        for i in -k - 1..=k {
            let z = region.center + Complex64::new((i as f64 + 0.5) * pitch, (j as f64 + 0.5) * pitch);
            if region.contains(z) {
                out.push(z);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Largest distance from a dense probe set of the region to the net.
    fn covering_radius(net: &[Point2], region: &NetRegion, probes_per_axis: usize) -> f64 {
        let r = region.r_outer;
        let mut worst: f64 = 0.0;
        for a in 0..probes_per_axis {
            for b in 0..probes_per_axis {
                let z = region.center
                    + Complex64::new(
                        -r + 2.0 * r * (a as f64 + 0.5) / probes_per_axis as f64,
                        -r + 2.0 * r * (b as f64 + 0.5) / probes_per_axis as f64,
                    );
                if region.contains(z) {
                    let d = net.iter().map(|p| (p - z).norm()).fold(f64::INFINITY, f64::min);
                    worst = worst.max(d);
                }
            }
        }
        worst
    }

    fn shell() -> NetRegion {
        NetRegion { center: Complex64::new(0.0, 0.0), r_inner: 1.0, r_outer: 2.0 }
    }

    #[test]
    fn coarse_net_covers() {
        let net = net_points(1.5, &shell());
        assert!(!net.is_empty());
        assert!(covering_radius(&net, &shell(), 100) <= 1.5);
    }

    #[test]
    fn covering_property_for_dyadic_spacings() {
        for spacing in [1.0, 0.5, 0.25, 0.125] {
            let net = net_points(spacing, &shell());
            assert!(net.iter().all(|z| shell().contains(*z)));
            let cov = covering_radius(&net, &shell(), 100);
            assert!(cov <= spacing, "spacing {spacing}: covering radius {cov}");
        }
    }

    #[test]
    fn empty_region() {
        let r = NetRegion { center: Complex64::new(0.0, 0.0), r_inner: 1.0, r_outer: 1.0 };
        assert!(net_points(0.1, &r).is_empty());
    }

    #[test]
    fn row_major_order() {
        let net = net_points(0.5, &shell());
        for w in net.windows(2) {
            assert!(w[0].im < w[1].im || (w[0].im == w[1].im && w[0].re < w[1].re));
        }
    }
}
