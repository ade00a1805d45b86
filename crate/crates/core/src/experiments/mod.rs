//! Named reproductions of the convergence results, domain ingestion and the
//! `eval` command behind the `green` binary.

pub mod counterexamples;
pub mod families;

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::closed_form::{green_ball3, GreenEstimate, Method};
use crate::convergence::{
    converge, kernel_check, koebe_bound_check, monotonicity_check, slit_decay_experiment, symmetrization_check,
    symmetrization_check_with, CompactSet, ConvergenceReport, DomainSequence, GridSpec, KernelReport,
};
use crate::error::{GeometryError, GreenError, Result};
use crate::evaluator::closed_form_evaluator;
use crate::geometry::{BoundaryCurve, DomainSpec, Point, Point2};
use crate::mfs::{solve_green, MfsParams};
use crate::wos::{estimate_green_2d, estimate_green_3d, WosParams};

/// Grid resolution of the sup norms in the sequence reproductions.
pub const SUP_GRID_RESOLUTION: f64 = 1e-2;
/// Resolution at which kernel convergence is required.
pub const KERNEL_RESOLUTION: f64 = 1e-2;
/// Level the sup norms must fall below at the largest `n`.
pub const SUP_TARGET: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReproductionName {
    ThmSimply,
    ThmMultiply,
    LemmaSlit,
    BoundKoebe,
    BoundSymm,
    ExAnnulus,
    ExNet,
    ExTube3d,
    LemmaOneside,
}

impl ReproductionName {
    pub const ALL: [ReproductionName; 9] = [
        ReproductionName::ThmSimply,
        ReproductionName::ThmMultiply,
        ReproductionName::LemmaSlit,
        ReproductionName::BoundKoebe,
        ReproductionName::BoundSymm,
        ReproductionName::ExAnnulus,
        ReproductionName::ExNet,
        ReproductionName::ExTube3d,
        ReproductionName::LemmaOneside,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ReproductionName::ThmSimply => "thm-simply",
            ReproductionName::ThmMultiply => "thm-multiply",
            ReproductionName::LemmaSlit => "lemma-slit",
            ReproductionName::BoundKoebe => "bound-koebe",
            ReproductionName::BoundSymm => "bound-symm",
            ReproductionName::ExAnnulus => "ex-annulus",
            ReproductionName::ExNet => "ex-net",
            ReproductionName::ExTube3d => "ex-tube3d",
            ReproductionName::LemmaOneside => "lemma-oneside",
        }
    }

    /// Index set used when none is given. For `lemma-slit` the values are
    /// the exponents `k` of `δ = 2⁻ᵏ`; the bound checks ignore them.
    pub fn default_n_values(self) -> Vec<u32> {
        match self {
            ReproductionName::ThmSimply => vec![4, 8, 16, 32, 64, 128],
            ReproductionName::ThmMultiply => vec![2, 4, 8, 16, 32, 64],
            ReproductionName::LemmaSlit => (1..=7).collect(),
            ReproductionName::BoundKoebe | ReproductionName::BoundSymm => vec![1],
            ReproductionName::ExAnnulus => vec![4, 8, 16, 32],
            ReproductionName::ExNet => vec![2, 4, 8],
            ReproductionName::ExTube3d => vec![4],
            ReproductionName::LemmaOneside => vec![1, 2, 4, 8, 16, 32, 64],
        }
    }

    /// Walks per evaluation when none are given.
    pub fn default_walks(self) -> usize {
        match self {
            ReproductionName::LemmaSlit => 1_000_000,
            _ => 100_000,
        }
    }
}

impl std::fmt::Display for ReproductionName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ReproductionName {
    type Err = GreenError;

    fn from_str(s: &str) -> Result<Self> {
        ReproductionName::ALL.into_iter().find(|n| n.as_str() == s).ok_or_else(|| {
            let names: Vec<&str> = ReproductionName::ALL.iter().map(|n| n.as_str()).collect();
            GreenError::Precondition(format!("unknown reproduction `{s}`; expected one of {}", names.join(", ")))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReproductionSpec {
    pub name: ReproductionName,
    pub n_values: Vec<u32>,
    pub seed: u64,
    pub walks: Option<usize>,
    pub eps_shell: Option<f64>,
    pub charges: Option<usize>,
}

impl ReproductionSpec {
    pub fn new(name: ReproductionName) -> Self {
        ReproductionSpec { name, n_values: name.default_n_values(), seed: 0, walks: None, eps_shell: None, charges: None }
    }

    pub fn with_n_values(mut self, n_values: Vec<u32>) -> Self {
        self.n_values = n_values;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_walks(mut self, walks: usize) -> Self {
        self.walks = Some(walks);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() || self.n_values.windows(2).any(|w| w[0] >= w[1]) || self.n_values[0] == 0 {
            return Err(GreenError::Precondition("n values must be positive and strictly increasing".into()));
        }
        Ok(())
    }

    pub fn wos_params(&self) -> WosParams {
        WosParams {
            walks: self.walks.unwrap_or(self.name.default_walks()),
            eps_shell: self.eps_shell,
            seed: self.seed,
            ..WosParams::default()
        }
    }

    pub fn mfs_params(&self) -> MfsParams {
        let mut p = MfsParams::default();
        if let Some(c) = self.charges {
            p = p.with_charges(c);
        }
        p
    }
}

/// One acceptance predicate of a reproduction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Check { name: name.to_string(), passed, detail }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReproductionOutcome {
    pub spec: ReproductionSpec,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Per-n table, also written as `<name>.csv`.
    #[serde(skip)]
    pub csv: String,
    pub report: Option<ConvergenceReport>,
    pub kernel: Option<KernelReport>,
    pub details: serde_json::Value,
}

impl ReproductionOutcome {
    fn new(spec: &ReproductionSpec, checks: Vec<Check>, csv: String) -> Self {
        ReproductionOutcome {
            spec: spec.clone(),
            passed: checks.iter().all(|c| c.passed),
            checks,
            csv,
            report: None,
            kernel: None,
            details: serde_json::Value::Null,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("outcome serializes")
    }

    /// Write `<name>.csv` and `<name>.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let name = self.spec.name.as_str();
        std::fs::write(dir.join(format!("{name}.csv")), &self.csv)?;
        std::fs::write(dir.join(format!("{name}.json")), self.to_json() + "\n")?;
        Ok(())
    }

    /// Human-readable lines: one per check plus the verdict.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(s, "[{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
        }
        let _ = writeln!(s, "{}: {}", self.spec.name, if self.passed { "PASS" } else { "FAIL" });
        s
    }
}

/// Run a named reproduction. Deterministic given its seed.
pub fn run_reproduction(spec: &ReproductionSpec) -> Result<ReproductionOutcome> {
    spec.validate()?;
    match spec.name {
        ReproductionName::ThmSimply => {
            let seq = families::simply_connected_sequence(&spec.n_values)?;
            uniform_convergence(spec, &seq, &CompactSet::InteriorMargin { margin: 0.05 })
        }
        ReproductionName::ThmMultiply => {
            let seq = families::multiply_connected_sequence(&spec.n_values)?;
            uniform_convergence(spec, &seq, &CompactSet::InteriorMargin { margin: 0.05 })
        }
        ReproductionName::LemmaOneside => lemma_oneside(spec),
        ReproductionName::ExAnnulus => ex_annulus(spec),
        ReproductionName::ExNet => ex_net(spec),
        ReproductionName::ExTube3d => ex_tube3d(spec),
        ReproductionName::LemmaSlit => lemma_slit(spec),
        ReproductionName::BoundKoebe => bound_koebe(spec),
        ReproductionName::BoundSymm => bound_symm(spec),
    }
}

fn sequence_report(spec: &ReproductionSpec, seq: &DomainSequence, compact: &CompactSet) -> Result<ConvergenceReport> {
    let domains: Vec<&DomainSpec> = std::iter::once(&seq.limit).chain(seq.members.iter().map(|m| &m.domain)).collect();
    let grid = GridSpec::covering(&domains, SUP_GRID_RESOLUTION)?;
    converge(seq, &grid, compact, &spec.mfs_params())
}

/// Checks shared by the two uniform-convergence studies and the one-sided
/// lemma applied to them.
fn uniform_convergence(spec: &ReproductionSpec, seq: &DomainSequence, compact: &CompactSet) -> Result<ReproductionOutcome> {
    let report = sequence_report(spec, seq, compact)?;
    let kernel = kernel_check(seq, KERNEL_RESOLUTION);
    let last = report.last();
    let mut checks = Vec::new();
    if let Some(r) = report.row(64) {
        checks.push(Check::new("sup at n = 64", r.sup_two_sided < SUP_TARGET, format!("{:.4e} < {SUP_TARGET}", r.sup_two_sided)));
    }
    checks.push(Check::new(
        "sup at largest n",
        last.sup_two_sided < SUP_TARGET,
        format!("n = {}: {:.4e} < {SUP_TARGET}", last.n, last.sup_two_sided),
    ));
    let tail: Vec<f64> = report.rows.iter().rev().take(3).map(|r| r.sup_two_sided).collect();
    checks.push(Check::new(
        "sup eventually decreasing",
        tail.windows(2).all(|w| w[0] <= w[1]),
        format!("last rows {:?}", tail.iter().rev().map(|v| format!("{v:.3e}")).collect::<Vec<_>>()),
    ));
    push_one_sided_checks(&mut checks, &report);
    checks.push(Check::new(
        "kernel convergence",
        kernel.passed,
        format!(
            "resolution {}: interior from n = {:?}, boundary distance {:.3e} at n = {}",
            kernel.resolution,
            kernel.threshold,
            kernel.rows.last().map_or(f64::NAN, |r| r.boundary_distance),
            last.n
        ),
    ));
    let mut out = ReproductionOutcome::new(spec, checks, report.to_csv());
    out.report = Some(report);
    out.kernel = Some(kernel);
    Ok(out)
}

fn push_one_sided_checks(checks: &mut Vec<Check>, report: &ConvergenceReport) {
    let last = report.last();
    let min = report.rows.iter().map(|r| r.one_sided_m_n).fold(f64::INFINITY, f64::min);
    checks.push(Check::new(
        "one-sided sup nonnegative",
        min >= -crate::convergence::ONE_SIDED_TOLERANCE,
        format!("min M_n = {min:.3e}"),
    ));
    checks.push(Check::new(
        "one-sided sup below target",
        last.one_sided_m_n < SUP_TARGET,
        format!("M_{} = {:.4e}", last.n, last.one_sided_m_n),
    ));
}

fn lemma_oneside(spec: &ReproductionSpec) -> Result<ReproductionOutcome> {
    let seq = families::nested_disk_sequence(&spec.n_values)?;
    let report = sequence_report(spec, &seq, &CompactSet::InteriorMargin { margin: 0.05 })?;
    let mut checks = Vec::new();
    push_one_sided_checks(&mut checks, &report);
    let worst = report
        .rows
        .iter()
        .map(|r| (r.one_sided_m_n - (2.0 / (2.0 - 1.0 / r.n as f64)).ln()).abs())
        .fold(0.0, f64::max);
    checks.push(Check::new("M_n matches log(2/(2 − 1/n))", worst < 1e-9, format!("max deviation {worst:.2e}")));
    checks.push(Check::new(
        "M_n decreasing",
        report.rows.windows(2).all(|w| w[1].one_sided_m_n <= w[0].one_sided_m_n),
        format!("{} rows", report.rows.len()),
    ));
    let (limit, w) = (&seq.limit, Complex64::new(0.0, 0.0));
    let pts = report.grid.points(w, &[limit])?;
    let mut violations = 0;
    for m in &seq.members {
        violations += monotonicity_check(&m.domain, limit, w, &pts, &spec.mfs_params())?.len();
    }
    checks.push(Check::new("g_n ≤ g on the grid", violations == 0, format!("{violations} violations")));
    let mut out = ReproductionOutcome::new(spec, checks, report.to_csv());
    out.report = Some(report);
    Ok(out)
}

fn ex_annulus(spec: &ReproductionSpec) -> Result<ReproductionOutcome> {
    let seq = families::punctured_annulus_sequence(&spec.n_values)?;
    let compact = CompactSet::OutsideDisk { center: Complex64::new(0.0, 0.0), radius: 0.3 };
    let report = sequence_report(spec, &seq, &compact)?;
    let mut checks = Vec::new();
    let big: Vec<_> = report.rows.iter().filter(|r| r.n >= 8).collect();
    checks.push(Check::new(
        "sup stays ≥ 0.6 for n ≥ 8",
        !big.is_empty() && big.iter().all(|r| r.sup_two_sided >= 0.6),
        big.iter().map(|r| format!("n = {}: {:.4}", r.n, r.sup_two_sided)).collect::<Vec<_>>().join(", "),
    ));
    if let Some(r) = report.row(16) {
        checks.push(Check::new(
            "compact sup on |z| ≥ 0.3 at n = 16",
            r.compact_sup <= 0.01,
            format!("{:.4e} ≤ 0.01", r.compact_sup),
        ));
    }
    let kernel = kernel_check(&seq, 2.0 / report.last().n as f64);
    let mut out = ReproductionOutcome::new(spec, checks, report.to_csv());
    out.report = Some(report);
    out.kernel = Some(kernel);
    Ok(out)
}

fn counterexample_csv(rows: &[counterexamples::CounterexampleOutcome]) -> String {
    let mut s = String::from("n,net_size,parameter,estimate,std_error,outer_value,limit_value,kernel_boundary_distance\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{:e},{:e},{:e},{:e},{:e},{:e}",
            r.n,
            r.net_size,
            r.parameter,
            r.estimate,
            r.std_error,
            r.outer_value,
            r.limit_value,
            r.kernel.rows.last().map_or(f64::NAN, |k| k.boundary_distance)
        );
    }
    s
}

fn ex_net(spec: &ReproductionSpec) -> Result<ReproductionOutcome> {
    let wos = spec.wos_params();
    let rows = spec
        .n_values
        .iter()
        .map(|&n| counterexamples::plane_net_search(n, &wos))
        .collect::<Result<Vec<_>>>()?;
    let log4 = 4f64.ln();
    let mut checks: Vec<Check> = rows
        .iter()
        .map(|r| {
            Check::new(
                &format!("search target at n = {}", r.n),
                r.estimate - 3.0 * r.std_error >= r.threshold,
                format!("{:.4} ± {:.1e} with log r = {:.4e}, target {:.4}", r.estimate, r.std_error, r.parameter, r.threshold),
            )
        })
        .collect();
    if let Some(r) = rows.iter().find(|r| r.n == EX_NET_N) {
        checks.push(Check::new(
            "estimate near g_{D(0,2)} at n = 8",
            r.estimate >= log4 - 0.2,
            format!("{:.4} ≥ {:.4}", r.estimate, log4 - 0.2),
        ));
        checks.push(Check::new(
            "estimate far from g_𝔻 at n = 8",
            r.estimate >= r.limit_value + 0.4,
            format!("{:.4} ≥ {:.4}", r.estimate, r.limit_value + 0.4),
        ));
    }
    checks.push(Check::new(
        "kernel convergence to 𝔻",
        rows.iter().all(|r| r.kernel.passed),
        rows.iter()
            .map(|r| format!("n = {}: {:.3e} < {:.3e}", r.n, r.kernel.rows[0].boundary_distance, r.kernel.resolution))
            .collect::<Vec<_>>()
            .join(", "),
    ));
    let mut out = ReproductionOutcome::new(spec, checks, counterexample_csv(&rows));
    out.details = serde_json::to_value(&rows).expect("rows serialize");
    Ok(out)
}

fn ex_tube3d(spec: &ReproductionSpec) -> Result<ReproductionOutcome> {
    let wos = spec.wos_params();
    let rows = spec
        .n_values
        .iter()
        .map(|&n| counterexamples::tube_search(n, &wos))
        .collect::<Result<Vec<_>>>()?;
    let last = rows.last().expect("n values are nonempty");
    let checks = vec![
        Check::new(
            "estimate well above g_𝔹",
            last.estimate >= 1.3,
            format!("n = {}: {:.4} ± {:.1e} ≥ 1.3 (unit ball {:.1})", last.n, last.estimate, last.std_error, last.limit_value),
        ),
        Check::new(
            "kernel convergence to 𝔹",
            rows.iter().all(|r| r.kernel.passed),
            rows.iter()
                .map(|r| format!("n = {}: {:.3e} < {:.3e}", r.n, r.kernel.rows[0].boundary_distance, r.kernel.resolution))
                .collect::<Vec<_>>()
                .join(", "),
        ),
    ];
    let mut out = ReproductionOutcome::new(spec, checks, counterexample_csv(&rows));
    out.details = serde_json::to_value(&rows).expect("rows serialize");
    Ok(out)
}

fn lemma_slit(spec: &ReproductionSpec) -> Result<ReproductionOutcome> {
    let deltas: Vec<f64> = spec.n_values.iter().map(|&k| 0.5f64.powi(k as i32)).collect();
    let decay = slit_decay_experiment(&deltas, Complex64::new(-3.0, 0.0), &spec.wos_params())?;
    let mut csv = String::from("delta,estimate,std_error,truncated_walks,excluded\n");
    for r in &decay.rows {
        let _ = writeln!(csv, "{:e},{:e},{:e},{},{}", r.delta, r.estimate, r.std_error, r.truncated_walks, r.excluded);
    }
    let (first, last) = (&decay.rows[0], decay.rows.last().expect("rows"));
    let mut checks = vec![Check::new(
        "fitted exponent in [0.35, 0.65]",
        (0.35..=0.65).contains(&decay.alpha),
        format!("alpha = {:.4}, C = {:.4}", decay.alpha, decay.c),
    )];
    if decay.rows.len() >= 2 {
        let second = &decay.rows[1];
        checks.push(Check::new(
            "g decreases with delta",
            second.estimate < first.estimate,
            format!("delta {}: {:.5}, delta {}: {:.5}", first.delta, first.estimate, second.delta, second.estimate),
        ));
        checks.push(Check::new(
            "decay factor ≥ 4 across the range",
            first.estimate >= 4.0 * last.estimate,
            format!("{:.5} / {:.5} = {:.2}", first.estimate, last.estimate, first.estimate / last.estimate),
        ));
    }
    let excluded = decay.rows.iter().filter(|r| r.excluded).count();
    checks.push(Check::new("no excluded estimates", !decay.flagged, format!("{excluded} of {}", decay.rows.len())));
    let mut out = ReproductionOutcome::new(spec, checks, csv);
    out.details = serde_json::to_value(&decay).expect("decay serializes");
    Ok(out)
}

/// Index at which the plane counterexample is held to fixed thresholds.
pub const EX_NET_N: u32 = 8;

/// Samples per family in the bound checks.
pub const BOUND_SAMPLES: usize = 1000;

fn bound_koebe(spec: &ReproductionSpec) -> Result<ReproductionOutcome> {
    let o = Complex64::new(0.0, 0.0);
    let families = [
        ("unit disk", DomainSpec::disk(o, 1.0)),
        ("random trig curve", families::random_trig_domain(4, 0.1, spec.seed)),
        ("disk of radius 100", DomainSpec::disk(o, 100.0)),
    ];
    let mut csv = String::from("family,samples,violations\n");
    let mut checks = Vec::new();
    for (k, (name, d)) in families.iter().enumerate() {
        let v = koebe_bound_check(d, o, BOUND_SAMPLES, spec.seed.wrapping_add(k as u64), &spec.mfs_params())?;
        let _ = writeln!(csv, "{name},{BOUND_SAMPLES},{}", v.len());
        checks.push(Check::new(&format!("g ≤ √(128 dist) on {name}"), v.is_empty(), format!("{} violations", v.len())));
    }
    Ok(ReproductionOutcome::new(spec, checks, csv))
}

fn bound_symm(spec: &ReproductionSpec) -> Result<ReproductionOutcome> {
    let o = Complex64::new(0.0, 0.0);
    let params = spec.mfs_params();
    let mut csv = String::from("family,samples,violations\n");
    let mut checks = Vec::new();
    let mut record = |name: &str, v: usize| {
        let _ = writeln!(csv, "{name},{BOUND_SAMPLES},{v}");
        checks.push(Check::new(&format!("g ≤ h_d on {name}"), v == 0, format!("{v} violations")));
    };
    let disk = DomainSpec::disk(o, 1.0);
    record("unit disk", symmetrization_check(&disk, o, BOUND_SAMPLES, spec.seed, &params)?.len());
    let annulus = DomainSpec::annulus(o, 0.25, 1.0);
    let mfs = solve_green(&annulus, Complex64::new(0.5, 0.0), &params)?;
    record("annulus", symmetrization_check_with(&annulus, &mfs, BOUND_SAMPLES, spec.seed.wrapping_add(1))?.len());
    let trig = families::random_trig_domain(4, 0.1, spec.seed.wrapping_add(2));
    record("trig curve", symmetrization_check(&trig, o, BOUND_SAMPLES, spec.seed.wrapping_add(2), &params)?.len());
    Ok(ReproductionOutcome::new(spec, checks, csv))
}

/// Read a domain or a domain sequence from a JSON file.
pub fn load_domain_json(path: &Path) -> Result<DomainSpec> {
    DomainSpec::from_json(&std::fs::read_to_string(path)?).map_err(GreenError::from)
}

pub fn load_sequence_json(path: &Path) -> Result<DomainSequence> {
    DomainSequence::from_json(&std::fs::read_to_string(path)?)
}

/// Options of [`green_eval`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvalOptions {
    pub mfs: MfsParams,
    pub wos: WosParams,
}

fn has_small_circles(d: &DomainSpec) -> bool {
    matches!(d, DomainSpec::CircleDomain { outer, holes }
        if std::iter::once(outer).chain(holes).any(|c| matches!(c, BoundaryCurve::SmallCircle { .. })))
}

/// Methods that can evaluate `d`, best first.
pub fn feasible_methods(d: &DomainSpec) -> Vec<Method> {
    let mut out = Vec::new();
    let closed = match d {
        DomainSpec::Ball3 { .. } => true,
        _ if d.is_planar() => closed_form_evaluator(d, Complex64::new(f64::NAN, f64::NAN)).is_some(),
        _ => false,
    };
    if closed {
        out.push(Method::ClosedForm);
    }
    if d.is_planar() && !matches!(d, DomainSpec::Slit { .. }) && !has_small_circles(d) {
        out.push(Method::Mfs);
    }
    out.push(Method::Wos);
    out
}

fn infeasible(d: &DomainSpec, method: Method) -> GreenError {
    let feasible: Vec<String> = feasible_methods(d).iter().map(|m| m.to_string()).collect();
    GreenError::Infeasible { method: method.to_string(), feasible: feasible.join(", ") }
}

/// Evaluate `g(z, w)` on `d` with the chosen method.
pub fn green_eval(d: &DomainSpec, z: Point, w: Point, method: Method, opts: &EvalOptions) -> Result<GreenEstimate> {
    d.validate()?;
    if !feasible_methods(d).contains(&method) {
        return Err(infeasible(d, method));
    }
    match (z, w) {
        (Point::Planar(z), Point::Planar(w)) if d.is_planar() => {
            if !d.contains2(w) {
                return Err(GreenError::Precondition("pole must lie inside the domain".into()));
            }
            if z == w {
                return Err(GreenError::Pole);
            }
            match method {
                Method::ClosedForm => {
                    let g = closed_form_evaluator(d, w).expect("feasibility checked")?;
                    Ok(GreenEstimate::new(g.value(z), method, g.error_bound()))
                }
                Method::Mfs => {
                    let s = solve_green(d, w, &opts.mfs)?;
                    Ok(GreenEstimate::new(s.evaluate(z)?, method, s.boundary_residual)
                        .with_meta("charges", s.charges.len() as f64)
                        .with_meta("rank", s.rank as f64))
                }
                Method::Wos => {
                    let r = estimate_green_2d(d, z, w, &opts.wos)?;
                    Ok(wos_estimate(r, &opts.wos))
                }
            }
        }
        (Point::Spatial(x), Point::Spatial(w)) if !d.is_planar() => match method {
            Method::ClosedForm => {
                let DomainSpec::Ball3 { center, radius } = d else {
                    return Err(infeasible(d, method));
                };
                Ok(GreenEstimate::new(green_ball3(*center, *radius, x, w)?, method, 0.0))
            }
            Method::Wos => {
                let r = estimate_green_3d(d, x, w, &opts.wos)?;
                Ok(wos_estimate(r, &opts.wos))
            }
            Method::Mfs => Err(infeasible(d, method)),
        },
        _ => Err(GeometryError::Dimension { expected: if d.is_planar() { "planar" } else { "spatial" } }.into()),
    }
}

fn wos_estimate(r: crate::wos::WosResult, p: &WosParams) -> GreenEstimate {
    GreenEstimate::new(r.estimate, Method::Wos, r.std_error)
        .with_meta("walks", r.walks_used as f64)
        .with_meta("truncated_walks", r.truncated_walks as f64)
        .with_meta("warning", if r.warning { 1.0 } else { 0.0 })
        .with_meta("seed", p.seed as f64)
}

/// Parse `"x,y"` or `"x,y,z"`.
pub fn parse_point(s: &str) -> Result<Point> {
    let parts: std::result::Result<Vec<f64>, _> = s.split(',').map(|p| p.trim().parse::<f64>()).collect();
    match parts.map_err(|e| GreenError::Precondition(format!("bad point `{s}`: {e}")))?.as_slice() {
        [x, y] => Ok(Point::Planar(Point2::new(*x, *y))),
        [x, y, z] => Ok(Point::Spatial(crate::geometry::Point3::new(*x, *y, *z))),
        _ => Err(GreenError::Precondition(format!("bad point `{s}`: expected 2 or 3 coordinates"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for n in ReproductionName::ALL {
            assert_eq!(n.as_str().parse::<ReproductionName>().unwrap(), n);
        }
        assert!("thm-other".parse::<ReproductionName>().is_err());
    }

    #[test]
    fn capability_matrix() {
        let o = Complex64::new(0.0, 0.0);
        assert_eq!(feasible_methods(&DomainSpec::disk(o, 1.0)), vec![Method::ClosedForm, Method::Mfs, Method::Wos]);
        let slit = DomainSpec::Slit {
            ambient: crate::geometry::DiskSpec { center: o, radius: 1.0 },
            segments: vec![[Complex64::new(0.2, 0.0), Complex64::new(0.5, 0.0)]],
        };
        assert_eq!(feasible_methods(&slit), vec![Method::Wos]);
        let err = green_eval(&slit, parse_point("0,0.5").unwrap(), parse_point("0,0").unwrap(), Method::Mfs, &EvalOptions::default())
            .unwrap_err();
        assert!(err.to_string().contains("wos"), "{err}");
        let ball = DomainSpec::ball(crate::geometry::Point3::ORIGIN, 2.0);
        assert_eq!(feasible_methods(&ball), vec![Method::ClosedForm, Method::Wos]);
    }

    #[test]
    fn eval_disk_closed_form() {
        let d = DomainSpec::from_json(r#"{"type":"disk","center":[0,0],"radius":1}"#).unwrap();
        let e = green_eval(&d, parse_point("0.5,0").unwrap(), parse_point("0,0").unwrap(), Method::ClosedForm, &EvalOptions::default())
            .unwrap();
        assert!((e.value - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn spec_validation() {
        let s = ReproductionSpec::new(ReproductionName::ThmSimply).with_n_values(vec![8, 4]);
        assert!(s.validate().is_err());
        assert!(parse_point("1").is_err());
        assert!(parse_point("1,x").is_err());
    }
}
