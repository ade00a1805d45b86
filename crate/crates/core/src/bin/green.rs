use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use green_core::convergence::{converge, kernel_check, CompactSet, GridSpec};
use green_core::experiments::{
    green_eval, load_sequence_json, parse_point, run_reproduction, EvalOptions, ReproductionName, ReproductionSpec,
};
use green_core::{DomainSpec, Method, MfsParams, WosParams};

#[derive(Parser)]
#[command(name = "green", version, about = "Green's functions of planar and spatial domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    ClosedForm,
    Mfs,
    Wos,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::ClosedForm => Method::ClosedForm,
            MethodArg::Mfs => Method::Mfs,
            MethodArg::Wos => Method::Wos,
        }
    }
}

#[derive(clap::Args)]
struct SolverArgs {
    /// Walks per walk-on-spheres estimate
    #[arg(long)]
    walks: Option<usize>,
    /// Absorption shell width (default 1e-4 times the domain diameter)
    #[arg(long)]
    eps_shell: Option<f64>,
    /// Fundamental-solution charges per boundary component
    #[arg(long)]
    charges: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate g(z, w) on one domain
    Eval {
        /// Domain JSON: a file path or an inline object
        #[arg(long)]
        domain: String,
        /// Evaluation point, "x,y" or "x,y,z"
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Pole, "x,y" or "x,y,z"
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long, value_enum, default_value = "closed-form")]
        method: MethodArg,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print JSON instead of text
        #[arg(long)]
        json: bool,
    },
    /// Compare the Green's functions of a domain sequence with its limit
    Converge {
        /// Sequence JSON file
        #[arg(long)]
        sequence: PathBuf,
        /// Lattice spacing of the sup grid
        #[arg(long)]
        grid: f64,
        /// Boundary margin of the compact set
        #[arg(long, default_value_t = 0.05)]
        margin: f64,
        #[arg(long)]
        charges: Option<usize>,
        #[arg(long)]
        json: bool,
        /// Directory for report.csv and report.json
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named reproduction; the exit code reports its acceptance
    Reproduce {
        name: String,
        /// Index values, comma separated
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<u32>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        json: bool,
    },
}

fn read_domain(arg: &str) -> anyhow::Result<DomainSpec> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    };
    Ok(DomainSpec::from_json(&text)?)
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Eval { domain, z, w, method, solver, seed, json } => {
            let d = read_domain(&domain)?;
            let mut opts = EvalOptions { mfs: MfsParams::default(), wos: WosParams { seed, ..WosParams::default() } };
            if let Some(c) = solver.charges {
                opts.mfs = opts.mfs.with_charges(c);
            }
            if let Some(n) = solver.walks {
                opts.wos.walks = n;
            }
            opts.wos.eps_shell = solver.eps_shell;
            let est = green_eval(&d, parse_point(&z)?, parse_point(&w)?, method.into(), &opts)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&est)?);
            } else {
                println!("value {:.12}", est.value);
                println!("method {}", est.method);
                println!("error_bound {:.3e}", est.error_bound);
                for (k, v) in &est.meta {
                    println!("{k} {v}");
                }
            }
            Ok(true)
        }
        Command::Converge { sequence, grid, margin, charges, json, out } => {
            let seq = load_sequence_json(&sequence)?;
            let mut params = MfsParams::default();
            if let Some(c) = charges {
                params = params.with_charges(c);
            }
            let domains: Vec<&DomainSpec> =
                std::iter::once(&seq.limit).chain(seq.members.iter().map(|m| &m.domain)).collect();
            let spec = GridSpec::covering(&domains, grid)?;
            let report = converge(&seq, &spec, &CompactSet::InteriorMargin { margin }, &params)?;
            let kernel = kernel_check(&seq, grid);
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)?;
                std::fs::write(dir.join("report.csv"), report.to_csv())?;
                std::fs::write(dir.join("report.json"), report.to_json() + "\n")?;
            }
            if json {
                let v = serde_json::json!({ "report": report, "kernel": kernel });
                println!("{}", serde_json::to_string_pretty(&v)?);
            } else {
                print!("{}", report.to_csv());
                println!("kernel check at {grid}: {}", if kernel.passed { "pass" } else { "fail" });
            }
            Ok(true)
        }
        Command::Reproduce { name, n, seed, out, solver, json } => {
            let name: ReproductionName = name.parse()?;
            let mut spec = ReproductionSpec::new(name).with_seed(seed);
            if let Some(n) = n {
                spec = spec.with_n_values(n);
            }
            spec.walks = solver.walks;
            spec.eps_shell = solver.eps_shell;
            spec.charges = solver.charges;
            let outcome = run_reproduction(&spec)?;
            outcome.write(&out)?;
            if json {
                println!("{}", outcome.to_json());
            } else {
                print!("{}", outcome.csv);
                print!("{}", outcome.summary());
            }
            Ok(outcome.passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
