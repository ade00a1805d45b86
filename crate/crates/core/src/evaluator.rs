//! Uniform access to Green's functions regardless of how they are computed.

use crate::closed_form::{DiskGreen, Method, ScaledAnnulusGreen};
use crate::error::{GreenError, Result};
use crate::geometry::{BoundaryCurve, DomainSpec, Point2, SpherePoint};
use crate::mfs::{solve_green, MfsParams};

/// A Green's function `z ↦ g(z, w)` with fixed pole, zero-extended outside
/// its domain. Returns `+∞` at the pole itself.
pub trait GreenEvaluator: Send + Sync {
    fn value(&self, z: Point2) -> f64;
    /// Uniform bound on the evaluation error.
    fn error_bound(&self) -> f64;
    fn method(&self) -> Method;
    fn pole(&self) -> SpherePoint;
}

impl<T: GreenEvaluator + ?Sized> GreenEvaluator for Box<T> {
    fn value(&self, z: Point2) -> f64 {
        (**self).value(z)
    }
    fn error_bound(&self) -> f64 {
        (**self).error_bound()
    }
    fn method(&self) -> Method {
        (**self).method()
    }
    fn pole(&self) -> SpherePoint {
        (**self).pole()
    }
}

impl<T: GreenEvaluator + ?Sized> GreenEvaluator for &T {
    fn value(&self, z: Point2) -> f64 {
        (**self).value(z)
    }
    fn error_bound(&self) -> f64 {
        (**self).error_bound()
    }
    fn method(&self) -> Method {
        (**self).method()
    }
    fn pole(&self) -> SpherePoint {
        (**self).pole()
    }
}

/// Closed-form evaluator when the domain is a disk or a concentric annulus.
pub fn closed_form_evaluator(domain: &DomainSpec, w: Point2) -> Option<Result<Box<dyn GreenEvaluator>>> {
    let boxed = |e: Result<_>| -> Result<Box<dyn GreenEvaluator>> { e.map(|g| Box::new(g) as Box<dyn GreenEvaluator>) };
    match domain {
        DomainSpec::Disk { center, radius } => Some(boxed(DiskGreen::new(*center, *radius, w))),
        DomainSpec::Annulus { center, r_inner, r_outer } => {
            Some(ScaledAnnulusGreen::new(*center, *r_inner, *r_outer, w).map(|g| Box::new(g) as Box<dyn GreenEvaluator>))
        }
        DomainSpec::CircleDomain { outer: BoundaryCurve::Circle { center, radius }, holes } => match holes.as_slice() {
            [] => Some(boxed(DiskGreen::new(*center, *radius, w))),
            [BoundaryCurve::Circle { center: hc, radius: hr }] if hc == center => Some(
                ScaledAnnulusGreen::new(*center, *hr, *radius, w).map(|g| Box::new(g) as Box<dyn GreenEvaluator>),
            ),
            _ => None,
        },
        _ => None,
    }
}

/// Pick the most accurate deterministic evaluator: closed form, then
/// fundamental solutions.
pub fn planar_evaluator(domain: &DomainSpec, w: Point2, params: &MfsParams) -> Result<Box<dyn GreenEvaluator>> {
    if !domain.is_planar() {
        return Err(GreenError::Infeasible {
            method: "planar evaluator".into(),
            feasible: "wos".into(),
        });
    }
    if let Some(e) = closed_form_evaluator(domain, w) {
        return e;
    }
    Ok(Box::new(solve_green(domain, w, params)?))
}
