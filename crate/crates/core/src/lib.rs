//! Green's functions of planar and spatial domains, computed by closed forms,
//! the method of fundamental solutions and walk-on-spheres, together with the
//! machinery for studying how they behave along sequences of domains that
//! converge in the sense of kernel.

pub mod closed_form;
pub mod convergence;
pub mod error;
pub mod evaluator;
pub mod experiments;
pub mod geometry;
pub mod mfs;
pub mod wos;

pub use closed_form::{GreenEstimate, Method};
pub use error::{GeometryError, GreenError};
pub use evaluator::GreenEvaluator;
pub use geometry::{
    chordal_distance, net_points, BoundaryCurve, BoundaryQuery, DomainSpec, MobiusMap, NetRegion,
    Point, Point2, Point3, SpherePoint,
};
pub use mfs::{solve_green, GreenSolution, MfsParams};
pub use wos::{estimate_green_2d, estimate_green_3d, ExitSample, WosParams, WosResult};

