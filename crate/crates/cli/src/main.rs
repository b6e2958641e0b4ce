//! Command-line interface for Schur-multiplier norm computation and the
//! growth/inclusion experiments.

use clap::{Args, Parser, Subcommand};
use schur_cli::experiments::{
    explore_open_problem, run_inclusion_check, run_kernel_growth, run_triangle_growth,
    triangle_matrix,
};
use schur_cli::io::{
    matrix_to_csv, parse_kernel, parse_partition, read_matrix_json, write_matrix_json,
};
use schur_cli::report::{matrix_digest, ExperimentReport};
use schur_cli::{CliError, Result};
use schur_core::discretize::{discretize_kernel, QuadConfig, Rect};
use schur_core::schur::{
    certificate_value, certificate_value_sound, dominated_norm, duality_report_with_atoms,
    factorization_solve, multiplier_norm_lower,
};
use schur_core::{opnorm, Exponent, ExponentPair, SearchConfig};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "schur",
    about = "Schur multiplier norms on B(lp^n, lq^m): estimators and experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunOpts {
    /// RNG seed for all randomized searches
    #[arg(long, default_value_t = 0x5EED_CAFE)]
    seed: u64,
    /// Restart budget for multi-start searches
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    /// Iteration cap per search
    #[arg(long, default_value_t = 300)]
    max_iters: usize,
    /// Relative stagnation tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format for reports
    #[arg(long, default_value = "json")]
    format: String,
}

impl RunOpts {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            restarts: self.restarts,
            max_iters: self.max_iters,
            tol: self.tol,
            seed: self.seed,
            oracle_samples: 800,
        }
    }

    fn emit_report(&self, report: &ExperimentReport) -> Result<()> {
        let text = match self.format.as_str() {
            "csv" => report.to_csv(),
            "json" => format!(
                "{}\n",
                serde_json::to_string_pretty(&serde_json::json!({
                    "report": serde_json::from_str::<serde_json::Value>(&report.to_json())?,
                    "body_sha256": report.body_digest(),
                }))?
            ),
            other => {
                return Err(CliError::Parse(format!(
                    "unknown format '{other}' (expected json|csv)"
                )))
            }
        };
        self.emit_text(&text)
    }

    fn emit_text(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Domain exponent p (decimal or "inf")
    #[arg(long, default_value = "2")]
    p: String,
    /// Range exponent q (decimal or "inf")
    #[arg(long, default_value = "2")]
    q: String,
    #[command(flatten)]
    run: RunOpts,
}

impl CommonOpts {
    fn pair(&self) -> Result<ExponentPair> {
        Ok(ExponentPair::new(
            Exponent::parse(&self.p)?,
            Exponent::parse(&self.q)?,
        ))
    }

    fn config(&self) -> SearchConfig {
        self.run.config()
    }

    fn emit_report(&self, report: &ExperimentReport) -> Result<()> {
        self.run.emit_report(report)
    }

    fn emit_text(&self, text: &str) -> Result<()> {
        self.run.emit_text(text)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Estimate an operator norm ||A: lp -> lq||
    Opnorm {
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Estimate a Schur multiplier norm (lower bound with witness)
    Schurnorm {
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Compute a factorization certificate (upper bound)
    Factorize {
        #[arg(long)]
        matrix: PathBuf,
        /// Number of atoms in the discrete measure space
        #[arg(long)]
        atoms: Option<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Upper-approximate the dominated-operator norm of a tensor
    Dominated {
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run all three routes and report the sandwich
    Duality {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        atoms: Option<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Discretize a kernel into a cell-average matrix
    Discretize {
        /// Kernel spec: signstep | const:<c> | gauss:<sigma> | grid:<path>
        #[arg(long)]
        kernel: String,
        /// s-axis partition, e.g. uniform:-1:1:4
        #[arg(long)]
        pa: String,
        /// t-axis partition, e.g. uniform:-1:1:4
        #[arg(long)]
        pb: String,
        /// Gauss-Legendre order for kernels without closed forms
        #[arg(long, default_value_t = 16)]
        quad_order: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Triangle-projection growth experiment
    Triangle {
        /// Comma-separated sizes, e.g. 8,16,32,64
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Kernel-discretization growth experiment
    KernelGrowth {
        #[arg(long)]
        kernel: String,
        /// Truncation half-width L: the domain is [-L, L)^2
        #[arg(long, default_value_t = 1.0)]
        truncation: f64,
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Norm ordering check between two exponent pairs
    Inclusion {
        #[arg(long)]
        p1: String,
        #[arg(long)]
        q1: String,
        #[arg(long)]
        p2: String,
        #[arg(long)]
        q2: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Ratio probe comparing (p,p) and (p,1) multiplier norms
    OpenProblem {
        /// Probe exponent, 1 < p <= 2
        #[arg(long, default_value_t = 1.5)]
        p: f64,
        #[arg(long, default_value_t = 8)]
        trials: usize,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Print the triangle mask of a given size as matrix JSON
    TriangleMatrix {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn finite_or_null(v: f64) -> serde_json::Value {
    if v.is_finite() {
        serde_json::json!(v)
    } else {
        serde_json::Value::Null
    }
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Opnorm { matrix, common } => {
            let a = read_matrix_json(&matrix)?;
            let pq = common.pair()?;
            let est = opnorm::opnorm(&a, pq, &common.config())?;
            let methods: Vec<String> = est.methods.iter().map(|m| format!("{m:?}")).collect();
            let out = serde_json::json!({
                "p": common.p, "q": common.q,
                "lower": est.lower,
                "upper": finite_or_null(est.upper),
                "methods": methods,
                "witness": est.witness,
            });
            common.emit_text(&format!("{}\n", serde_json::to_string_pretty(&out)?))
        }
        Command::Schurnorm { matrix, common } => {
            let m = read_matrix_json(&matrix)?;
            let pq = common.pair()?;
            let est = multiplier_norm_lower(&m, pq, &common.config())?;
            let out = serde_json::json!({
                "p": common.p, "q": common.q,
                "lower": est.lower,
                "upper": finite_or_null(est.upper),
                "witness_digest": est.witness.as_ref().map(matrix_digest),
            });
            common.emit_text(&format!("{}\n", serde_json::to_string_pretty(&out)?))
        }
        Command::Factorize {
            matrix,
            atoms,
            common,
        } => {
            let m = read_matrix_json(&matrix)?;
            let pq = common.pair()?;
            let atoms = atoms.unwrap_or(2 * m.rows().max(m.cols()));
            let cert = factorization_solve(&m, pq, atoms, &common.config())?;
            let out = serde_json::json!({
                "p": common.p, "q": common.q,
                "atoms": atoms,
                "value": certificate_value(&cert, pq),
                "value_sound": certificate_value_sound(&cert, pq),
                "residual": cert.residual,
                "atom_weights": cert.atom_weights,
                "x_vectors": {"rows": cert.x_vectors.rows(), "cols": cert.x_vectors.cols(),
                               "data": cert.x_vectors.data()},
                "y_vectors": {"rows": cert.y_vectors.rows(), "cols": cert.y_vectors.cols(),
                               "data": cert.y_vectors.data()},
            });
            common.emit_text(&format!("{}\n", serde_json::to_string_pretty(&out)?))
        }
        Command::Dominated { matrix, common } => {
            let t = read_matrix_json(&matrix)?;
            let pq = common.pair()?;
            let (value, scaling) = dominated_norm(&t, pq, &common.config())?;
            let out = serde_json::json!({
                "p": common.p, "q": common.q,
                "value": value,
                "mu": scaling.mu,
                "nu": scaling.nu,
                "floor": scaling.floor,
            });
            common.emit_text(&format!("{}\n", serde_json::to_string_pretty(&out)?))
        }
        Command::Duality {
            matrix,
            atoms,
            common,
        } => {
            let m = read_matrix_json(&matrix)?;
            let pq = common.pair()?;
            let atoms = atoms.unwrap_or(2 * m.rows().max(m.cols()));
            let rep = duality_report_with_atoms(&m, pq, &common.config(), atoms)?;
            let out = serde_json::json!({
                "p": common.p, "q": common.q,
                "lower": rep.lower,
                "upper": rep.upper,
                "gap": rep.gap,
                "direct_lower": rep.direct.lower,
                "dual_lower": rep.dual_lower,
                "certificate_residual": rep.certificate.residual,
            });
            common.emit_text(&format!("{}\n", serde_json::to_string_pretty(&out)?))
        }
        Command::Discretize {
            kernel,
            pa,
            pb,
            quad_order,
            common,
        } => {
            let pa = parse_partition(&pa)?;
            let pb = parse_partition(&pb)?;
            let lo = pa.cells()[0].0.min(pb.cells()[0].0);
            let hi = pa.cells()[pa.len() - 1]
                .1
                .max(pb.cells()[pb.len() - 1].1);
            let spec = parse_kernel(&kernel, Rect::square(lo, hi).map_err(CliError::Core)?)?;
            let m = discretize_kernel(&spec, &pa, &pb, QuadConfig { order: quad_order })?;
            match common.run.format.as_str() {
                "csv" => common.emit_text(&matrix_to_csv(&m)),
                _ => {
                    let out = serde_json::json!({
                        "rows": m.rows(), "cols": m.cols(), "data": m.data(),
                    });
                    common.emit_text(&format!("{}\n", serde_json::to_string(&out)?))
                }
            }
        }
        Command::Triangle { sizes, common } => {
            let rep = run_triangle_growth(&sizes, common.pair()?, &common.config())?;
            common.emit_report(&rep)
        }
        Command::KernelGrowth {
            kernel,
            truncation,
            sizes,
            common,
        } => {
            if truncation <= 0.0 {
                return Err(CliError::Parse("truncation must be positive".into()));
            }
            let dom = Rect::square(-truncation, truncation).map_err(CliError::Core)?;
            let spec = parse_kernel(&kernel, dom)?;
            let rep = run_kernel_growth(&spec, &sizes, common.pair()?, &common.config())?;
            common.emit_report(&rep)
        }
        Command::Inclusion {
            p1,
            q1,
            p2,
            q2,
            trials,
            run,
        } => {
            let pq1 = ExponentPair::new(Exponent::parse(&p1)?, Exponent::parse(&q1)?);
            let pq2 = ExponentPair::new(Exponent::parse(&p2)?, Exponent::parse(&q2)?);
            let rep = run_inclusion_check(pq1, pq2, trials, &run.config())?;
            run.emit_report(&rep)
        }
        Command::OpenProblem { p, trials, run } => {
            let rep = explore_open_problem(p, trials, &run.config())?;
            run.emit_report(&rep)
        }
        Command::TriangleMatrix { n, out } => {
            if n == 0 {
                return Err(CliError::Parse("n must be positive".into()));
            }
            let m = triangle_matrix(n);
            match out {
                Some(path) => write_matrix_json(&path, &m)?,
                None => println!(
                    "{}",
                    serde_json::json!({"rows": m.rows(), "cols": m.cols(), "data": m.data()})
                ),
            }
            Ok(())
        }
    }
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

