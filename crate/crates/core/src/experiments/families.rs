//! Domain families used by the reproductions.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::convergence::DomainSequence;
use crate::error::Result;
use crate::geometry::{BoundaryCurve, DomainSpec, Point, Point2};

fn origin() -> Point2 {
    Complex64::new(0.0, 0.0)
}

/// `r(θ) = 1 + cos(3θ)/n`, converging to the unit disk.
pub fn trefoil(n: u32) -> DomainSpec {
    DomainSpec::CircleDomain {
        outer: BoundaryCurve::Trig {
            center: origin(),
            cos: vec![1.0, 0.0, 0.0, 1.0 / n as f64],
            sin: vec![0.0, 0.0, 0.0],
        },
        holes: vec![],
    }
}

pub fn simply_connected_sequence(ns: &[u32]) -> Result<DomainSequence> {
    DomainSequence::from_fn(ns, DomainSpec::disk(origin(), 1.0), Point::Planar(origin()), trefoil)
}

/// `{(1 + 1/n)/3 < |z| < 1 − 1/(2n)}`, increasing to `{1/3 < |z| < 1}`.
pub fn multiply_connected_sequence(ns: &[u32]) -> Result<DomainSequence> {
    DomainSequence::from_fn(
        ns,
        DomainSpec::annulus(origin(), 1.0 / 3.0, 1.0),
        Point::Planar(Complex64::new(0.7, 0.0)),
        |n| {
            let n = n as f64;
            DomainSpec::annulus(origin(), (1.0 + 1.0 / n) / 3.0, 1.0 - 0.5 / n)
        },
    )
}

/// Nested disks `D(0, 2 − 1/n)` increasing to `D(0, 2)`.
pub fn nested_disk_sequence(ns: &[u32]) -> Result<DomainSequence> {
    DomainSequence::from_fn(ns, DomainSpec::disk(origin(), 2.0), Point::Planar(origin()), |n| {
        DomainSpec::disk(origin(), 2.0 - 1.0 / n as f64)
    })
}

/// `{1/n < |z| < 1}` with pole 1/2; the kernel is the punctured disk.
pub fn punctured_annulus_sequence(ns: &[u32]) -> Result<DomainSequence> {
    Ok(DomainSequence::from_fn(
        ns,
        DomainSpec::disk(origin(), 1.0),
        Point::Planar(Complex64::new(0.5, 0.0)),
        |n| DomainSpec::annulus(origin(), 1.0 / n as f64, 1.0),
    )?
    .with_punctures(vec![origin()]))
}

/// A star-shaped curve `1 + Σ a_k cos kθ + b_k sin kθ` with coefficients
/// uniform in `[−amplitude, amplitude]`.
pub fn random_trig_domain(degree: usize, amplitude: f64, seed: u64) -> DomainSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cos = vec![1.0];
    cos.extend((0..degree).map(|_| rng.random_range(-amplitude..=amplitude)));
    let sin = (0..degree).map(|_| rng.random_range(-amplitude..=amplitude)).collect();
    DomainSpec::CircleDomain {
        outer: BoundaryCurve::Trig { center: origin(), cos, sin },
        holes: vec![],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequences_are_valid() {
        simply_connected_sequence(&[4, 8]).unwrap();
        multiply_connected_sequence(&[2, 64]).unwrap();
        nested_disk_sequence(&[1, 2]).unwrap();
        punctured_annulus_sequence(&[4, 8]).unwrap();
        // The pole 1/2 sits on the inner circle at n = 2.
        assert!(punctured_annulus_sequence(&[2, 4]).is_err());
    }

    #[test]
    fn random_trig_is_reproducible() {
        let a = random_trig_domain(4, 0.1, 9);
        assert_eq!(a, random_trig_domain(4, 0.1, 9));
        assert_ne!(a, random_trig_domain(4, 0.1, 10));
        a.validate().unwrap();
    }
}
