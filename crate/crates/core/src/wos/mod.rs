//! Walk-on-spheres estimation of Green's functions in the plane and in space.
//!
//! The Green's function splits as a singular part plus a harmonic corrector
//! whose boundary values are known, so one Brownian exit point per walk gives
//! an unbiased sample of the corrector:
//!
//! * plane: `g(z, w) = −log|z − w| + E[log|X − w|]`
//! * space: `g(x, w) = |x − w|⁻¹ − E[|X − w|⁻¹]`
//!
//! Each walk draws from its own ChaCha stream keyed by `(seed, walk_index)`,
//! so results do not depend on how walks are scheduled across threads.

mod walker;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GreenError, Result};
use crate::geometry::{DomainSpec, Point, Point2, Point3};

pub use walker::{ExitSample, PlanarWalker, SpatialWalker};

/// Relative shell width used when `eps_shell` is not given.
pub const DEFAULT_EPS_RELATIVE: f64 = 1e-4;
/// Fraction of truncated walks above which a result carries a warning.
pub const TRUNCATION_WARNING: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WosParams {
    pub walks: usize,
    /// Absolute shell width; `None` means `1e-4 ×` the domain diameter.
    pub eps_shell: Option<f64>,
    pub max_steps: u64,
    pub seed: u64,
}

impl Default for WosParams {
    fn default() -> Self {
        WosParams {
            walks: 100_000,
            eps_shell: None,
            max_steps: 1_000_000,
            seed: 0,
        }
    }
}

impl WosParams {
    pub fn with_walks(mut self, walks: usize) -> Self {
        self.walks = walks;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_eps_shell(mut self, eps: f64) -> Self {
        self.eps_shell = Some(eps);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.walks < 100 {
            return Err(GreenError::Precondition("walk-on-spheres needs at least 100 walks".into()));
        }
        if let Some(e) = self.eps_shell {
            if !(e > 0.0) {
                return Err(GreenError::Precondition("eps_shell must be positive".into()));
            }
        }
        Ok(())
    }

    /// Shell width for a particular domain.
    pub fn shell_for(&self, d: &DomainSpec) -> f64 {
        self.eps_shell.unwrap_or(DEFAULT_EPS_RELATIVE * d.diameter())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WosResult {
    pub estimate: f64,
    /// Sample standard deviation over `√walks_used`.
    pub std_error: f64,
    pub walks_used: usize,
    pub truncated_walks: usize,
    /// Set when more than 0.1% of walks hit `max_steps`.
    pub warning: bool,
}

/// The random stream of one walk.
pub fn walk_rng(seed: u64, walk_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(walk_index);
    rng
}

/// Exit point of walk number `walk_index` started at `start`.
pub fn wos_exit_sample(d: &DomainSpec, start: Point, p: &WosParams, walk_index: u64) -> Result<ExitSample> {
    p.validate()?;
    let eps = p.shell_for(d);
    let mut rng = walk_rng(p.seed, walk_index);
    match start {
        Point::Planar(z) => {
            let walker = PlanarWalker::new(d)?;
            if !d.contains2(z) {
                return Err(GreenError::Precondition("walk must start inside the domain".into()));
            }
            Ok(walker.walk(z, eps, p.max_steps, &mut rng))
        }
        Point::Spatial(x) => {
            let walker = SpatialWalker::new(d)?;
            if !d.contains3(x) {
                return Err(GreenError::Precondition("walk must start inside the domain".into()));
            }
            Ok(walker.walk(x, eps, p.max_steps, &mut rng))
        }
    }
}

/// Estimate `g(z, w)` for a planar domain.
pub fn estimate_green_2d(d: &DomainSpec, z: Point2, w: Point2, p: &WosParams) -> Result<WosResult> {
    let walker = PlanarWalker::new(d)?;
    estimate_with_walker_2d(&walker, d, z, w, p)
}

/// As [`estimate_green_2d`] with a walker prepared once and reused.
pub fn estimate_with_walker_2d(
    walker: &PlanarWalker,
    d: &DomainSpec,
    z: Point2,
    w: Point2,
    p: &WosParams,
) -> Result<WosResult> {
    p.validate()?;
    if !d.contains2(z) || !d.contains2(w) {
        return Err(GreenError::Precondition("z and w must lie inside the domain".into()));
    }
    if z == w {
        return Err(GreenError::Pole);
    }
    let eps = p.shell_for(d);
    let samples: Vec<Option<f64>> = (0..p.walks as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = walk_rng(p.seed, i);
            let exit = walker.walk(z, eps, p.max_steps, &mut rng);
            (!exit.truncated).then(|| (exit.point.planar().expect("planar walk") - w).norm().ln())
        })
        .collect();
    Ok(aggregate(&samples, -(z - w).norm().ln(), 1.0))
}

/// Estimate `g(x, w)` for a ball or a ball with a tube removed.
pub fn estimate_green_3d(d: &DomainSpec, x: Point3, w: Point3, p: &WosParams) -> Result<WosResult> {
    p.validate()?;
    let walker = SpatialWalker::new(d)?;
    if !d.contains3(x) || !d.contains3(w) {
        return Err(GreenError::Precondition("x and w must lie inside the domain".into()));
    }
    if x == w {
        return Err(GreenError::Pole);
    }
    let eps = p.shell_for(d);
    let samples: Vec<Option<f64>> = (0..p.walks as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = walk_rng(p.seed, i);
            let exit = walker.walk(x, eps, p.max_steps, &mut rng);
            (!exit.truncated).then(|| 1.0 / (exit.point.spatial().expect("spatial walk") - w).norm())
        })
        .collect();
    Ok(aggregate(&samples, 1.0 / (x - w).norm(), -1.0))
}

/// `offset + sign · mean`, with compensated sums taken in walk order.
fn aggregate(samples: &[Option<f64>], offset: f64, sign: f64) -> WosResult {
    let used: Vec<f64> = samples.iter().flatten().copied().collect();
    let n = used.len();
    let truncated = samples.len() - n;
    let mean = neumaier_sum(used.iter().copied()) / n.max(1) as f64;
    let var = if n > 1 {
        neumaier_sum(used.iter().map(|v| (v - mean) * (v - mean))) / (n - 1) as f64
    } else {
        0.0
    };
    WosResult {
        estimate: offset + sign * mean,
        std_error: (var / n.max(1) as f64).sqrt(),
        walks_used: n,
        truncated_walks: truncated,
        warning: n == 0 || truncated as f64 / n as f64 >= TRUNCATION_WARNING,
    }
}

fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
