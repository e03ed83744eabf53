//! Command-line front end: one subcommand per run mode, a flat TOML config
//! file merged with flags (flags win), and deterministic outputs.
//!
//! Exit codes: 0 success, 1 solver non-convergence, 2 configuration error,
//! 3 failed verification.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fracpq::branch::{fit_rate, geometric_rho_grid, trace_branch_infinity, trace_branch_zero};
use fracpq::config::{
    default_output_dir, load_file_config, parse_config, FileConfig, Mode, Overrides, RunConfig,
};
use fracpq::error::FracError;
use fracpq::grid::{build_grid, build_kernel};
use fracpq::io::{
    eigenpair_document, write_branch_csv, write_eigenpair_json, write_eigenpair_list_json,
    write_report_json, write_run_metadata,
};
use fracpq::solve::{
    solve_fixed_lambda_coercive, solve_fixed_rho, solve_lambda1_q, solve_nehari,
};
use fracpq::verify::{multiplicity_probe, run_all, SuiteConfig, CHECK_REGISTRY};
use fracpq::io::format_report_text;

#[derive(Parser)]
#[command(
    name = "fracpq",
    version,
    about = "Eigenpairs and bifurcation branches of the mixed nonlocal \
             operator (-Lap)^{s1}_p + (-Lap)^{s2}_q on an interval",
    after_help = "Exit codes: 0 success, 1 solver non-convergence, \
                  2 configuration error, 3 failed verification.\n\
                  FRACPQ_OUTPUT_DIR sets the default output directory."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by all subcommands; every value can also come from the
/// config file, with the flag taking precedence.
#[derive(Args, Debug, Default)]
struct CommonFlags {
    /// Flat TOML config file; flags override file values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Left endpoint of the interval [default: -1]
    #[arg(long)]
    a: Option<f64>,
    /// Right endpoint of the interval [default: 1]
    #[arg(long)]
    b: Option<f64>,
    /// Number of grid cells [default: 256]
    #[arg(long)]
    n: Option<usize>,
    /// Fractional order of the p-term [default: 0.7]
    #[arg(long)]
    s1: Option<f64>,
    /// Fractional order of the q-term [default: 0.4]
    #[arg(long)]
    s2: Option<f64>,
    /// Integrability exponent of the p-term [default: 3]
    #[arg(long)]
    p: Option<f64>,
    /// Integrability exponent of the q-term [default: 2]
    #[arg(long)]
    q: Option<f64>,
    /// RNG seed; (config, seed) determines every emitted byte [default: 0]
    #[arg(long)]
    seed: Option<u64>,
    /// Maximum descent iterations per solve [default: 50000]
    #[arg(long)]
    max_iterations: Option<usize>,
    /// Initial descent step [default: 0.1]
    #[arg(long)]
    step_size: Option<f64>,
    /// Relative residual tolerance [default: 1e-8]
    #[arg(long)]
    tolerance: Option<f64>,
    /// Random restarts per solve [default: 3]
    #[arg(long)]
    restarts: Option<usize>,
    /// Armijo backtracking shrink factor [default: 0.5]
    #[arg(long)]
    armijo_shrink: Option<f64>,
    /// Output file path [default: mode-named file in the output directory]
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
struct LambdaFlag {
    /// Fixed eigenvalue parameter (required for this mode)
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Args, Debug, Default)]
struct RhoGridFlags {
    /// Largest mass level of the branch [default: 0.1]
    #[arg(long)]
    rho_max: Option<f64>,
    /// Smallest mass level of the branch [default: 0.0001]
    #[arg(long)]
    rho_min: Option<f64>,
    /// Geometric grid points per decade of rho [default: 4]
    #[arg(long)]
    rho_per_decade: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// First eigenvalue of the fractional q-Laplacian (s2, q)
    Eig1 {
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Global minimizer of the fixed-lambda energy (coercive regime q < p)
    FixedLambda {
        #[command(flatten)]
        common: CommonFlags,
        #[command(flatten)]
        lambda: LambdaFlag,
    },
    /// Minimizer of the unconstrained energy at fixed L^q mass rho
    FixedRho {
        #[command(flatten)]
        common: CommonFlags,
        /// Mass level of the constraint [default: 1]
        #[arg(long)]
        rho: Option<f64>,
    },
    /// Nehari-manifold minimizer of the fixed-lambda energy (regime p < q)
    Nehari {
        #[command(flatten)]
        common: CommonFlags,
        #[command(flatten)]
        lambda: LambdaFlag,
    },
    /// Bifurcation branch from zero (coercive regime), lambda(rho) over a
    /// decreasing geometric mass grid
    BranchZero {
        #[command(flatten)]
        common: CommonFlags,
        #[command(flatten)]
        rho_grid: RhoGridFlags,
    },
    /// Bifurcation branch from infinity (regime p < q) via the inversion
    /// u -> u/|u|^2 of the Nehari problem
    BranchInfinity {
        #[command(flatten)]
        common: CommonFlags,
        #[command(flatten)]
        rho_grid: RhoGridFlags,
    },
    /// Run the self-verification suite and emit a report
    Verify {
        #[command(flatten)]
        common: CommonFlags,
        /// Comma-separated check names [default: all]
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        /// List registered check names and exit
        #[arg(long)]
        list: bool,
    },
    /// Multiplicity probe: distinct solutions at a lambda between the first
    /// and second q-Laplacian levels (signed, odd, and negated partners)
    Probe {
        #[command(flatten)]
        common: CommonFlags,
        #[command(flatten)]
        lambda: LambdaFlag,
    },
}

fn overrides(common: &CommonFlags, lambda: Option<f64>, rho: Option<f64>) -> Overrides {
    Overrides {
        a: common.a,
        b: common.b,
        n: common.n,
        s1: common.s1,
        s2: common.s2,
        p: common.p,
        q: common.q,
        lambda,
        rho,
        rho_max: None,
        rho_min: None,
        rho_per_decade: None,
        seed: common.seed,
        max_iterations: common.max_iterations,
        step_size: common.step_size,
        tolerance: common.tolerance,
        restarts: common.restarts,
        armijo_shrink: common.armijo_shrink,
        output: common.output.clone(),
    }
}

fn build_run_config(
    mode: Mode,
    common: &CommonFlags,
    lambda: Option<f64>,
    rho: Option<f64>,
    rho_grid: Option<&RhoGridFlags>,
) -> Result<RunConfig, FracError> {
    let file = match &common.config {
        Some(path) => load_file_config(path)?,
        None => FileConfig::default(),
    };
    let mut flags = overrides(common, lambda, rho);
    if let Some(g) = rho_grid {
        flags.rho_max = g.rho_max;
        flags.rho_min = g.rho_min;
        flags.rho_per_decade = g.rho_per_decade;
    }
    parse_config(mode, &file, &flags)
}

fn output_path(cfg: &RunConfig, default_name: &str) -> PathBuf {
    cfg.output
        .clone()
        .unwrap_or_else(|| default_output_dir().join(default_name))
}

/// Exit code 1 when the solver did not converge, 0 otherwise.
fn convergence_code(converged: bool) -> ExitCode {
    if converged {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run() -> Result<ExitCode, FracError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Eig1 { common } => {
            let cfg = build_run_config(Mode::Eig1, &common, None, None, None)?;
            let grid = build_grid(cfg.a, cfg.b, cfg.n)?;
            let kq = build_kernel(&grid, cfg.params.s2, cfg.params.q)?;
            let pair = solve_lambda1_q(&kq, &grid, cfg.params.q, &cfg.solver)?;
            let path = output_path(&cfg, "eig1.json");
            write_eigenpair_json(&path, &eigenpair_document(&cfg, &pair))?;
            println!(
                "eig1: lambda = {:.12e}, residual = {:.3e}, converged = {} -> {}",
                pair.lambda,
                pair.residual,
                pair.converged,
                path.display()
            );
            Ok(convergence_code(pair.converged))
        }
        Command::FixedLambda { common, lambda } => {
            let cfg = build_run_config(Mode::FixedLambda, &common, lambda.lambda, None, None)?;
            let grid = build_grid(cfg.a, cfg.b, cfg.n)?;
            let kp = build_kernel(&grid, cfg.params.s1, cfg.params.p)?;
            let kq = build_kernel(&grid, cfg.params.s2, cfg.params.q)?;
            let pair = solve_fixed_lambda_coercive(&cfg.params, &grid, &kp, &kq, &cfg.solver)?;
            let path = output_path(&cfg, "fixed_lambda.json");
            write_eigenpair_json(&path, &eigenpair_document(&cfg, &pair))?;
            println!(
                "fixed-lambda: mass = {:.6e}, energy = {:.6e}, trivial = {}, \
                 residual = {:.3e}, converged = {} -> {}",
                pair.rho,
                pair.energy,
                pair.trivial,
                pair.residual,
                pair.converged,
                path.display()
            );
            Ok(convergence_code(pair.converged))
        }
        Command::FixedRho { common, rho } => {
            let cfg = build_run_config(Mode::FixedRho, &common, None, rho, None)?;
            let rho = cfg.params.rho.unwrap_or(1.0);
            let grid = build_grid(cfg.a, cfg.b, cfg.n)?;
            let kp = build_kernel(&grid, cfg.params.s1, cfg.params.p)?;
            let kq = build_kernel(&grid, cfg.params.s2, cfg.params.q)?;
            let pair =
                solve_fixed_rho(&cfg.params, rho, &grid, &kp, &kq, &cfg.solver, None)?;
            let path = output_path(&cfg, "fixed_rho.json");
            write_eigenpair_json(&path, &eigenpair_document(&cfg, &pair))?;
            println!(
                "fixed-rho: lambda = {:.12e}, residual = {:.3e}, converged = {} -> {}",
                pair.lambda,
                pair.residual,
                pair.converged,
                path.display()
            );
            Ok(convergence_code(pair.converged))
        }
        Command::Nehari { common, lambda } => {
            let cfg = build_run_config(Mode::Nehari, &common, lambda.lambda, None, None)?;
            let grid = build_grid(cfg.a, cfg.b, cfg.n)?;
            let kp = build_kernel(&grid, cfg.params.s1, cfg.params.p)?;
            let kq = build_kernel(&grid, cfg.params.s2, cfg.params.q)?;
            let pair = solve_nehari(&cfg.params, &grid, &kp, &kq, &cfg.solver)?;
            let path = output_path(&cfg, "nehari.json");
            write_eigenpair_json(&path, &eigenpair_document(&cfg, &pair))?;
            println!(
                "nehari: energy = {:.6e}, residual = {:.3e}, converged = {} -> {}",
                pair.energy,
                pair.residual,
                pair.converged,
                path.display()
            );
            Ok(convergence_code(pair.converged))
        }
        Command::BranchZero { common, rho_grid } => {
            let cfg =
                build_run_config(Mode::BranchZero, &common, None, None, Some(&rho_grid))?;
            let rhos = geometric_rho_grid(cfg.rho_max, cfg.rho_min, cfg.rho_per_decade)?;
            let grid = build_grid(cfg.a, cfg.b, cfg.n)?;
            let kp = build_kernel(&grid, cfg.params.s1, cfg.params.p)?;
            let kq = build_kernel(&grid, cfg.params.s2, cfg.params.q)?;
            let branch = trace_branch_zero(&cfg.params, &rhos, &grid, &kp, &kq, &cfg.solver)?;
            let path = output_path(&cfg, "branch_zero.csv");
            write_branch_csv(&path, &branch)?;
            write_run_metadata(&path, &cfg)?;
            let all_converged = branch.iter().all(|pt| pt.converged);
            let lam1 = solve_lambda1_q(&kq, &grid, cfg.params.q, &cfg.solver)?.lambda;
            match fit_rate(&branch, lam1) {
                Ok(fit) => println!(
                    "branch-zero: {} points, rate exponent {:.4} (r^2 = {:.6}) \
                     toward lambda_1 = {:.9e} -> {}",
                    branch.len(),
                    fit.exponent,
                    fit.r_squared,
                    lam1,
                    path.display()
                ),
                Err(e) => println!(
                    "branch-zero: {} points, rate fit unavailable ({e}) -> {}",
                    branch.len(),
                    path.display()
                ),
            }
            Ok(convergence_code(all_converged))
        }
        Command::BranchInfinity { common, rho_grid } => {
            let cfg =
                build_run_config(Mode::BranchInfinity, &common, None, None, Some(&rho_grid))?;
            let rhos = geometric_rho_grid(cfg.rho_max, cfg.rho_min, cfg.rho_per_decade)?;
            let grid = build_grid(cfg.a, cfg.b, cfg.n)?;
            let kp = build_kernel(&grid, cfg.params.s1, cfg.params.p)?;
            let kq = build_kernel(&grid, cfg.params.s2, cfg.params.q)?;
            let branch =
                trace_branch_infinity(&cfg.params, &rhos, &grid, &kp, &kq, &cfg.solver)?;
            let path = output_path(&cfg, "branch_infinity.csv");
            write_branch_csv(&path, &branch)?;
            write_run_metadata(&path, &cfg)?;
            let all_converged = branch.iter().all(|pt| pt.converged);
            let lam1 = solve_lambda1_q(&kq, &grid, cfg.params.q, &cfg.solver)?.lambda;
            match fit_rate(&branch, lam1) {
                Ok(fit) => println!(
                    "branch-infinity: {} points, rate exponent {:.4} (r^2 = {:.6}) \
                     toward lambda_1 = {:.9e} -> {}",
                    branch.len(),
                    fit.exponent,
                    fit.r_squared,
                    lam1,
                    path.display()
                ),
                Err(e) => println!(
                    "branch-infinity: {} points, rate fit unavailable ({e}) -> {}",
                    branch.len(),
                    path.display()
                ),
            }
            Ok(convergence_code(all_converged))
        }
        Command::Verify {
            common,
            checks,
            list,
        } => {
            if list {
                for name in CHECK_REGISTRY {
                    println!("{name}");
                }
                return Ok(ExitCode::SUCCESS);
            }
            let cfg = build_run_config(Mode::Verify, &common, None, None, None)?;
            let mut suite = SuiteConfig {
                seed: cfg.solver.seed,
                solver: cfg.solver.clone(),
                ..Default::default()
            };
            if let Some(names) = checks {
                suite.checks = names;
            }
            let report = run_all(&suite);
            print!("{}", format_report_text(&report));
            let path = output_path(&cfg, "verify_report.json");
            write_report_json(&path, &report)?;
            println!("report -> {}", path.display());
            Ok(if report.overall_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            })
        }
        Command::Probe { common, lambda } => {
            let cfg = build_run_config(Mode::Probe, &common, lambda.lambda, None, None)?;
            let grid = build_grid(cfg.a, cfg.b, cfg.n)?;
            let kp = build_kernel(&grid, cfg.params.s1, cfg.params.p)?;
            let kq = build_kernel(&grid, cfg.params.s2, cfg.params.q)?;
            let pairs = multiplicity_probe(&cfg.params, &grid, &kp, &kq, &cfg.solver)?;
            let docs: Vec<_> = pairs
                .iter()
                .map(|p| eigenpair_document(&cfg, p))
                .collect();
            let path = output_path(&cfg, "probe.json");
            write_eigenpair_list_json(&path, &docs)?;
            let all_converged = pairs.iter().all(|p| p.converged);
            println!(
                "probe: {} solutions (converged = {}) -> {}",
                pairs.len(),
                all_converged,
                path.display()
            );
            Ok(convergence_code(all_converged))
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            // configuration and validation failures exit 2; anything the
            // solvers report about the problem itself (infeasible lambda,
            // degenerate data) also counts as a configuration error
            ExitCode::from(2)
        }
    }
}
