//! Exit criteria. Each test prints one `[PASS]`/`[FAIL]` line to stderr
//! (uncaptured) and then asserts.

use std::io::Write;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use green_core::closed_form::green_annulus;
use green_core::experiments::{run_reproduction, ReproductionName, ReproductionOutcome, ReproductionSpec};
use green_core::{estimate_green_2d, estimate_green_3d, solve_green, DomainSpec, MfsParams, Point2, Point3, WosParams};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(criterion: u32, passed: bool, detail: String) {
    let line = format!("acceptance {criterion:>2} [{}] {detail}\n", if passed { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
    assert!(passed, "criterion {criterion}: {detail}");
}

fn reproduce(name: ReproductionName) -> ReproductionOutcome {
    run_reproduction(&ReproductionSpec::new(name)).expect("reproduction runs")
}

fn thm_simply() -> &'static ReproductionOutcome {
    static CELL: OnceLock<ReproductionOutcome> = OnceLock::new();
    CELL.get_or_init(|| reproduce(ReproductionName::ThmSimply))
}

fn thm_multiply() -> &'static ReproductionOutcome {
    static CELL: OnceLock<ReproductionOutcome> = OnceLock::new();
    CELL.get_or_init(|| reproduce(ReproductionName::ThmMultiply))
}

fn c(re: f64, im: f64) -> Point2 {
    Complex64::new(re, im)
}

/// `log |(R² − z w̄) / (R (z − w))|` for the disk `D(0, R)`.
fn disk_formula(radius: f64, z: Point2, w: Point2) -> f64 {
    ((radius * radius - z * w.conj()) / (radius * (z - w))).norm().ln()
}

fn uniform_in_annulus(rng: &mut ChaCha8Rng, r_inner: f64, r_outer: f64) -> Point2 {
    let r: f64 = rng.random_range(r_inner * r_inner..r_outer * r_outer);
    let r = r.sqrt();
    Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
}

#[test]
fn criterion_01_oracle_agreement() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let radius = 1.0;
    let w = c(0.3, 0.2);
    let start = Instant::now();
    let disk = solve_green(&DomainSpec::disk(c(0.0, 0.0), radius), w, &MfsParams::default()).unwrap();
    let mut disk_err: f64 = 0.0;
    let mut evaluated = 0;
    while evaluated < 200 {
        let z = uniform_in_annulus(&mut rng, 0.0, radius);
        if (z - w).norm() < 1e-3 {
            continue;
        }
        evaluated += 1;
        disk_err = disk_err.max((disk.evaluate(z).unwrap() - disk_formula(radius, z, w)).abs());
    }
    let disk_time = start.elapsed();

    let (q, w) = (0.4, c(0.0, 0.65));
    let start = Instant::now();
    let annulus = solve_green(&DomainSpec::annulus(c(0.0, 0.0), q, 1.0), w, &MfsParams::default()).unwrap();
    let mut annulus_err: f64 = 0.0;
    let mut evaluated = 0;
    while evaluated < 200 {
        let z = uniform_in_annulus(&mut rng, q, 1.0);
        if (z - w).norm() < 1e-3 {
            continue;
        }
        evaluated += 1;
        annulus_err = annulus_err.max((annulus.evaluate(z).unwrap() - green_annulus(q, z, w).unwrap()).abs());
    }
    let annulus_time = start.elapsed();

    let passed = disk_err <= 1e-8
        && disk_time < Duration::from_secs(1)
        && annulus_err <= 1e-6
        && annulus_time < Duration::from_secs(5);
    report(
        1,
        passed,
        format!(
            "disk max error {disk_err:.2e} in {disk_time:.2?}; annulus max error {annulus_err:.2e} in {annulus_time:.2?}"
        ),
    );
}

#[test]
fn criterion_02_wos_calibration() {
    let params = WosParams::default().with_walks(100_000).with_seed(2);
    let start = Instant::now();
    let disk = estimate_green_2d(&DomainSpec::disk(c(0.0, 0.0), 1.0), c(0.5, 0.0), c(0.0, 0.0), &params).unwrap();
    let disk_time = start.elapsed();
    let start = Instant::now();
    let ball = DomainSpec::Ball3 { center: Point3::ORIGIN, radius: 2.0 };
    let ball_est = estimate_green_3d(&ball, Point3::new(0.5, 0.0, 0.0), Point3::ORIGIN, &params).unwrap();
    let ball_time = start.elapsed();
    let disk_dev = (disk.estimate - 2f64.ln()).abs();
    let ball_dev = (ball_est.estimate - 1.5).abs();
    let passed = disk_dev <= 3.0 * disk.std_error
        && ball_dev <= 3.0 * ball_est.std_error
        && disk_time < Duration::from_secs(30)
        && ball_time < Duration::from_secs(30);
    report(
        2,
        passed,
        format!(
            "disk {:.5} ± {:.1e} vs log 2 in {disk_time:.2?}; ball {:.5} ± {:.1e} vs 1.5 in {ball_time:.2?}",
            disk.estimate, disk.std_error, ball_est.estimate, ball_est.std_error
        ),
    );
}

#[test]
fn criterion_03_one_sided_discrepancy() {
    let mut passed = true;
    let mut detail = Vec::new();
    for (name, outcome) in [("thm-simply", thm_simply()), ("thm-multiply", thm_multiply())] {
        let rows = &outcome.report.as_ref().expect("convergence report").rows;
        let last = rows.last().unwrap();
        let min = rows.iter().map(|r| r.one_sided_m_n).fold(f64::INFINITY, f64::min);
        passed &= last.one_sided_m_n < 0.05 && min >= -1e-8;
        detail.push(format!("{name}: M_n = {:.3e} at n = {}, min {min:.2e}", last.one_sided_m_n, last.n));
    }
    report(3, passed, detail.join("; "));
}

#[test]
fn criterion_04_uniform_convergence() {
    let mut passed = true;
    let mut detail = Vec::new();
    for (name, outcome) in [("thm-simply", thm_simply()), ("thm-multiply", thm_multiply())] {
        let rows = &outcome.report.as_ref().expect("convergence report").rows;
        let at_64 = rows.iter().find(|r| r.n == 64).expect("n = 64 is shipped");
        let last = rows.last().unwrap();
        let kernel = outcome.kernel.as_ref().expect("kernel report");
        passed &= at_64.sup_two_sided < 0.05 && last.sup_two_sided < 0.05;
        passed &= kernel.passed && kernel.resolution == 1e-2;
        detail.push(format!(
            "{name}: sup {:.3e} at n = 64, {:.3e} at n = {}, kernel {} at {:.0e}",
            at_64.sup_two_sided,
            last.sup_two_sided,
            last.n,
            if kernel.passed { "ok" } else { "failed" },
            kernel.resolution
        ));
    }
    report(4, passed, detail.join("; "));
}

#[test]
fn criterion_05_nonregular_limit() {
    let outcome = reproduce(ReproductionName::ExAnnulus);
    let rows = &outcome.report.as_ref().expect("convergence report").rows;
    let floor_ok = rows.iter().filter(|r| r.n >= 8).all(|r| r.sup_two_sided >= 0.6);
    let min_sup = rows.iter().filter(|r| r.n >= 8).map(|r| r.sup_two_sided).fold(f64::INFINITY, f64::min);
    let at_16 = rows.iter().find(|r| r.n == 16).expect("n = 16 is shipped");
    let passed = floor_ok && at_16.compact_sup <= 0.01;
    report(
        5,
        passed,
        format!("min sup over n ≥ 8 = {min_sup:.4} (≥ 0.6); compact sup at n = 16 = {:.4} (≤ 0.01)", at_16.compact_sup),
    );
}

#[test]
fn criterion_06_plane_counterexample() {
    let start = Instant::now();
    let spec = ReproductionSpec::new(ReproductionName::ExNet).with_n_values(vec![8]).with_walks(100_000);
    let outcome = run_reproduction(&spec).unwrap();
    let elapsed = start.elapsed();
    let row = &outcome.details.as_array().unwrap()[0];
    let estimate = row["estimate"].as_f64().unwrap();
    let kernel_ok = row["kernel"]["passed"].as_bool().unwrap();
    let (near, far) = (4f64.ln() - 0.2, 2f64.ln() + 0.4);
    let passed = estimate >= near && estimate >= far && kernel_ok && elapsed < Duration::from_secs(300);
    report(
        6,
        passed,
        format!(
            "g(1/2, 0) ≈ {estimate:.4} ≥ {near:.4} and ≥ {far:.4}; kernel {}; {elapsed:.1?}",
            if kernel_ok { "ok" } else { "failed" }
        ),
    );
}

#[test]
fn criterion_07_space_counterexample() {
    let start = Instant::now();
    let outcome = reproduce(ReproductionName::ExTube3d);
    let elapsed = start.elapsed();
    let row = outcome.details.as_array().unwrap().last().unwrap().clone();
    let estimate = row["estimate"].as_f64().unwrap();
    let kernel_ok = row["kernel"]["passed"].as_bool().unwrap();
    let passed = estimate >= 1.3 && kernel_ok && elapsed < Duration::from_secs(600);
    report(
        7,
        passed,
        format!("g(x₀, 0) ≈ {estimate:.4} ≥ 1.3; kernel {}; {elapsed:.1?}", if kernel_ok { "ok" } else { "failed" }),
    );
}

fn violation_lines(outcome: &ReproductionOutcome) -> (bool, String) {
    let mut families = 0;
    let mut total = 0;
    for line in outcome.csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[1], "1000");
        total += cols[2].parse::<usize>().unwrap();
        families += 1;
    }
    (families == 3 && total == 0, format!("{total} violations over {families} families of 1000 samples"))
}

#[test]
fn criterion_08_koebe_bound() {
    let (passed, detail) = violation_lines(&reproduce(ReproductionName::BoundKoebe));
    report(8, passed, detail);
}

#[test]
fn criterion_09_symmetrization_bound() {
    let (passed, detail) = violation_lines(&reproduce(ReproductionName::BoundSymm));
    report(9, passed, detail);
}

#[test]
fn criterion_10_slit_decay() {
    let start = Instant::now();
    let spec = ReproductionSpec::new(ReproductionName::LemmaSlit).with_walks(1_000_000);
    assert_eq!(spec.n_values, (1..=7).collect::<Vec<u32>>());
    let outcome = run_reproduction(&spec).unwrap();
    let elapsed = start.elapsed();
    let alpha = outcome.details["alpha"].as_f64().unwrap();
    let passed = (0.35..=0.65).contains(&alpha) && elapsed < Duration::from_secs(900);
    report(10, passed, format!("alpha = {alpha:.4} over δ = 2⁻¹..2⁻⁷ at 10⁶ walks; {elapsed:.1?}"));
}

fn run_in_pool(threads: usize, spec: &ReproductionSpec) -> (String, String) {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    pool.install(|| {
        let outcome = run_reproduction(spec).unwrap();
        (outcome.to_json(), outcome.csv)
    })
}

#[test]
fn criterion_11_determinism() {
    let specs = [
        ReproductionSpec::new(ReproductionName::LemmaSlit).with_walks(5_000).with_seed(11),
        ReproductionSpec::new(ReproductionName::ThmMultiply).with_n_values(vec![2, 4]),
        ReproductionSpec::new(ReproductionName::ExTube3d).with_walks(2_000).with_seed(3),
    ];
    let mut passed = true;
    let mut names = Vec::new();
    for spec in &specs {
        let reference = run_in_pool(1, spec);
        for threads in [1, 2, 4] {
            passed &= run_in_pool(threads, spec) == reference;
        }
        names.push(spec.name.as_str());
    }
    report(11, passed, format!("{} byte-identical across 1, 2 and 4 threads", names.join(", ")));
}
