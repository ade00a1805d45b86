//! Green's functions of bounded planar domains with smooth boundaries by the
//! method of fundamental solutions.
//!
//! The Green's function is written `g(z) = −log|z − w| + h(z)` with the
//! harmonic corrector `h(z) = c₀ + Σ_j c_j log|z − s_j|`. Charges `s_j` sit on
//! each hole curve shrunk toward its center and on the outer curve dilated
//! away from it; coefficients come from a least-squares fit of
//! `h = log|· − w|` at boundary collocation points. Since `g` is harmonic in
//! the domain, the largest boundary misfit bounds the interior error.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::closed_form::Method;
use crate::error::{GreenError, Result};
use crate::evaluator::GreenEvaluator;
use crate::geometry::{BoundaryCurve, DomainSpec, Point2, SpherePoint};

/// Largest boundary residual a solution may carry before the solver refuses.
pub const RESIDUAL_LIMIT: f64 = 1e-4;

/// Density multiplier of the residual check grid over the collocation grid.
const CHECK_DENSITY: usize = 4;
/// Charge doubling stops before the total number of charges exceeds this.
const TOTAL_CHARGE_CAP: usize = 2048;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MfsParams {
    /// Charges per component of the first fit. The count is doubled while
    /// the residual exceeds `target_residual`, up to
    /// `max_charges_per_component`.
    pub charges_per_component: usize,
    pub max_charges_per_component: usize,
    pub target_residual: f64,
    /// Collocation points per component = `collocation_factor × charges`.
    pub collocation_factor: usize,
    pub hole_shrink: f64,
    pub outer_dilate: f64,
    /// Singular values below `sv_cutoff × σ_max` are discarded.
    pub sv_cutoff: f64,
}

impl Default for MfsParams {
    fn default() -> Self {
        MfsParams {
            charges_per_component: 64,
            max_charges_per_component: 512,
            target_residual: 1e-8,
            collocation_factor: 4,
            hole_shrink: 0.6,
            outer_dilate: 1.6,
            sv_cutoff: 1e-12,
        }
    }
}

impl MfsParams {
    /// Start from `charges` per component.
    pub fn with_charges(mut self, charges: usize) -> Self {
        self.charges_per_component = charges;
        self.max_charges_per_component = self.max_charges_per_component.max(charges);
        self
    }

    fn validate(&self) -> Result<()> {
        let ok = self.charges_per_component > 0
            && self.target_residual >= 0.0
            && self.collocation_factor > 0
            && self.hole_shrink > 0.0
            && self.hole_shrink < 1.0
            && self.outer_dilate > 1.0
            && self.sv_cutoff > 0.0;
        if ok {
            Ok(())
        } else {
            Err(GreenError::Precondition(format!("invalid fundamental-solution parameters {self:?}")))
        }
    }
}

/// A fitted Green's function of one domain and pole.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GreenSolution {
    pub domain: DomainSpec,
    pub pole: Point2,
    pub charges: Vec<Point2>,
    pub coefficients: Vec<f64>,
    pub constant: f64,
    /// Max |g| over the dense boundary check grid.
    pub boundary_residual: f64,
    pub component_residuals: Vec<f64>,
    /// Singular values kept by the cutoff.
    pub rank: usize,
}

/// Curves of a domain the solver can handle, outer first.
fn solver_curves(d: &DomainSpec) -> Result<Vec<BoundaryCurve>> {
    let infeasible = || GreenError::Infeasible {
        method: "mfs".into(),
        feasible: "wos".into(),
    };
    match d {
        DomainSpec::Disk { center, radius } => Ok(vec![BoundaryCurve::circle(*center, *radius)]),
        DomainSpec::Annulus { center, r_inner, r_outer } => Ok(vec![
            BoundaryCurve::circle(*center, *r_outer),
            BoundaryCurve::circle(*center, *r_inner),
        ]),
        DomainSpec::CircleDomain { outer, holes } => {
            if holes.iter().any(|h| matches!(h, BoundaryCurve::SmallCircle { .. })) {
                return Err(infeasible());
            }
            Ok(std::iter::once(outer).chain(holes).cloned().collect())
        }
        _ => Err(infeasible()),
    }
}

/// Fit the Green's function of `d` with pole `w`.
pub fn solve_green(d: &DomainSpec, w: Point2, p: &MfsParams) -> Result<GreenSolution> {
    p.validate()?;
    d.validate()?;
    let curves = solver_curves(d)?;
    if !d.contains2(w) {
        return Err(GreenError::Precondition("pole must lie inside the domain".into()));
    }

    let mut n_charges = p.charges_per_component;
    let mut best = fit(d, &curves, w, p, n_charges)?;
    while !(best.boundary_residual <= p.target_residual)
        && 2 * n_charges <= p.max_charges_per_component
        && 2 * n_charges * curves.len() <= TOTAL_CHARGE_CAP
    {
        n_charges *= 2;
        let next = fit(d, &curves, w, p, n_charges)?;
        if next.boundary_residual < best.boundary_residual || best.boundary_residual.is_nan() {
            best = next;
        }
    }
    if !(best.boundary_residual <= RESIDUAL_LIMIT) {
        return Err(GreenError::IllConditioned {
            residual: best.boundary_residual,
            limit: RESIDUAL_LIMIT,
        });
    }
    Ok(best)
}

fn fit(d: &DomainSpec, curves: &[BoundaryCurve], w: Point2, p: &MfsParams, n_charges: usize) -> Result<GreenSolution> {
    let n_colloc = n_charges * p.collocation_factor;
    let mut charges = Vec::with_capacity(curves.len() * n_charges);
    let mut colloc = Vec::with_capacity(curves.len() * n_colloc);
    for (k, c) in curves.iter().enumerate() {
        let source = c.scaled(if k == 0 { p.outer_dilate } else { p.hole_shrink });
        charges.extend((0..n_charges).map(|j| source.point_at(j as f64 / n_charges as f64)));
        colloc.extend((0..n_colloc).map(|i| c.point_at(i as f64 / n_colloc as f64)));
    }

    let (constant, coefficients, rank) = least_squares(&colloc, &charges, w, p.sv_cutoff)?;
    let mut sol = GreenSolution {
        domain: d.clone(),
        pole: w,
        charges,
        coefficients,
        constant,
        boundary_residual: 0.0,
        component_residuals: Vec::new(),
        rank,
    };

    let n_check = n_colloc * CHECK_DENSITY;
    sol.component_residuals = curves
        .iter()
        .map(|c| {
            (0..n_check)
                .map(|i| sol.raw(c.point_at((i as f64 + 0.5) / n_check as f64)).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    sol.boundary_residual = sol.component_residuals.iter().copied().fold(0.0, |a, b| if b.is_nan() || b > a { b } else { a });
    Ok(sol)
}

/// Least-squares fit of `c₀ + Σ c_j log|z_i − s_j| = log|z_i − w|` through
/// a Householder QR followed by a truncated SVD of the triangular factor.
fn least_squares(colloc: &[Point2], charges: &[Point2], w: Point2, cutoff: f64) -> Result<(f64, Vec<f64>, usize)> {
    // keep the factorization order fixed so results do not depend on threads
    faer::set_global_parallelism(faer::Par::Seq);
    let (m, n) = (colloc.len(), charges.len() + 1);
    let mut a = Mat::<f64>::from_fn(m, n, |i, j| {
        if j == 0 {
            1.0
        } else {
            (colloc[i] - charges[j - 1]).norm().ln()
        }
    });
    let scale: Vec<f64> = (0..n)
        .map(|j| {
            let s = (0..m).map(|i| a[(i, j)] * a[(i, j)]).sum::<f64>().sqrt();
            if s > 0.0 {
                s
            } else {
                1.0
            }
        })
        .collect();
    for j in 0..n {
        for i in 0..m {
            a[(i, j)] /= scale[j];
        }
    }
    let rhs: Vec<f64> = colloc.iter().map(|z| (z - w).norm().ln()).collect();

    let qr = a.qr();
    let q = qr.compute_thin_Q();
    let r = qr.thin_R().to_owned();
    let qtb: Vec<f64> = (0..n).map(|j| (0..m).map(|i| q[(i, j)] * rhs[i]).sum()).collect();
    let svd = r
        .thin_svd()
        .map_err(|e| GreenError::Numerical(format!("SVD did not converge: {e:?}")))?;
    let (u, s, v) = (svd.U(), svd.S().column_vector(), svd.V());
    let s_max = (0..n).map(|k| s[k]).fold(0.0, f64::max);
    let mut x = vec![0.0; n];
    let mut rank = 0;
    for k in 0..n {
        if s[k] <= cutoff * s_max {
            continue;
        }
        rank += 1;
        let coef = (0..n).map(|i| u[(i, k)] * qtb[i]).sum::<f64>() / s[k];
        for (j, xj) in x.iter_mut().enumerate() {
            *xj += v[(j, k)] * coef;
        }
    }
    for (xj, sj) in x.iter_mut().zip(&scale) {
        *xj /= sj;
    }
    Ok((x[0], x[1..].to_vec(), rank))
}

impl GreenSolution {
    /// `−log|z − w| + h(z)` without clamping or zero extension.
    pub fn raw(&self, z: Point2) -> f64 {
        let h: f64 = self
            .charges
            .iter()
            .zip(&self.coefficients)
            .map(|(s, c)| c * (z - s).norm().ln())
            .sum();
        self.constant + h - (z - self.pole).norm().ln()
    }

    /// Zero-extended, clamped value. The raw value may dip to `−residual`
    /// near the boundary; clamping at 0 is a post-processing convention.
    pub fn evaluate(&self, z: Point2) -> Result<f64> {
        if z == self.pole {
            return Err(GreenError::Pole);
        }
        if !self.domain.contains2(z) {
            return Ok(0.0);
        }
        Ok(self.raw(z).max(0.0))
    }

    /// Overall and per-component boundary residual. By the maximum principle
    /// the overall value bounds the interior error.
    pub fn residual_report(&self) -> (f64, Vec<f64>) {
        (self.boundary_residual, self.component_residuals.clone())
    }
}

impl GreenEvaluator for GreenSolution {
    fn value(&self, z: Point2) -> f64 {
        self.evaluate(z).unwrap_or(f64::INFINITY)
    }
    fn error_bound(&self) -> f64 {
        self.boundary_residual
    }
    fn method(&self) -> Method {
        Method::Mfs
    }
    fn pole(&self) -> SpherePoint {
        SpherePoint::Finite(self.pole)
    }
}
