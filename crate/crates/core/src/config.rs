//! Run configuration: a flat key-value config file merged with command-line
//! overrides (flags win), validated against the selected mode before any
//! solve starts. Every resolved key records where its value came from.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::branch::geometric_rho_grid;
use crate::error::{FracError, Result};
use crate::forms::{Regime, SpectralParams};
use crate::solve::SolveConfig;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "FRACPQ_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Eig1,
    FixedLambda,
    FixedRho,
    Nehari,
    BranchZero,
    BranchInfinity,
    Verify,
    Probe,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Mode::Eig1 => "eig1",
            Mode::FixedLambda => "fixed-lambda",
            Mode::FixedRho => "fixed-rho",
            Mode::Nehari => "nehari",
            Mode::BranchZero => "branch-zero",
            Mode::BranchInfinity => "branch-infinity",
            Mode::Verify => "verify",
            Mode::Probe => "probe",
        };
        f.write_str(name)
    }
}

/// Fully resolved run description; (config, seed) determines every emitted
/// byte of a single-threaded run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub params: SpectralParams,
    pub solver: SolveConfig,
    pub rho_max: f64,
    pub rho_min: f64,
    pub rho_per_decade: usize,
    pub output: Option<PathBuf>,
    /// One entry per resolved key: "key = value (flag|file|default)".
    pub provenance: Vec<String>,
}

/// Flat config-file schema; unknown keys are rejected by name.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub mode: Option<Mode>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub n: Option<usize>,
    pub s1: Option<f64>,
    pub s2: Option<f64>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub lambda: Option<f64>,
    pub rho: Option<f64>,
    pub rho_max: Option<f64>,
    pub rho_min: Option<f64>,
    pub rho_per_decade: Option<usize>,
    pub seed: Option<u64>,
    pub max_iterations: Option<usize>,
    pub step_size: Option<f64>,
    pub tolerance: Option<f64>,
    pub restarts: Option<usize>,
    pub armijo_shrink: Option<f64>,
    pub output: Option<PathBuf>,
}

/// Command-line overrides; identical key set to [`FileConfig`].
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub n: Option<usize>,
    pub s1: Option<f64>,
    pub s2: Option<f64>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub lambda: Option<f64>,
    pub rho: Option<f64>,
    pub rho_max: Option<f64>,
    pub rho_min: Option<f64>,
    pub rho_per_decade: Option<usize>,
    pub seed: Option<u64>,
    pub max_iterations: Option<usize>,
    pub step_size: Option<f64>,
    pub tolerance: Option<f64>,
    pub restarts: Option<usize>,
    pub armijo_shrink: Option<f64>,
    pub output: Option<PathBuf>,
}

pub fn load_file_config(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)?;
    toml::from_str(&text).map_err(|e| FracError::MalformedConfig {
        key: path.display().to_string(),
        message: e.to_string(),
    })
}

fn resolve<T: Copy + std::fmt::Display>(
    key: &str,
    flag: Option<T>,
    file: Option<T>,
    default: T,
    provenance: &mut Vec<String>,
) -> T {
    let (value, source) = match (flag, file) {
        (Some(v), _) => (v, "flag"),
        (None, Some(v)) => (v, "file"),
        (None, None) => (default, "default"),
    };
    provenance.push(format!("{key} = {value} ({source})"));
    value
}

fn resolve_opt<T: Copy + std::fmt::Display>(
    key: &str,
    flag: Option<T>,
    file: Option<T>,
    provenance: &mut Vec<String>,
) -> Option<T> {
    let (value, source) = match (flag, file) {
        (Some(v), _) => (Some(v), "flag"),
        (None, Some(v)) => (Some(v), "file"),
        (None, None) => (None, "unset"),
    };
    if let Some(v) = value {
        provenance.push(format!("{key} = {v} ({source})"));
    } else {
        provenance.push(format!("{key} ({source})"));
    }
    value
}

/// Merge file and flag values into a validated [`RunConfig`]; flags override
/// file values, documented defaults fill the rest.
pub fn parse_config(mode: Mode, file: &FileConfig, flags: &Overrides) -> Result<RunConfig> {
    let mut prov = vec![format!("mode = {mode} (flag)")];
    let a = resolve("a", flags.a, file.a, -1.0, &mut prov);
    let b = resolve("b", flags.b, file.b, 1.0, &mut prov);
    let n = resolve("n", flags.n, file.n, 256, &mut prov);
    let s1 = resolve("s1", flags.s1, file.s1, 0.7, &mut prov);
    let s2 = resolve("s2", flags.s2, file.s2, 0.4, &mut prov);
    let p = resolve("p", flags.p, file.p, 3.0, &mut prov);
    let q = resolve("q", flags.q, file.q, 2.0, &mut prov);
    let lambda = resolve_opt("lambda", flags.lambda, file.lambda, &mut prov);
    let rho = resolve_opt("rho", flags.rho, file.rho, &mut prov);
    let rho_max = resolve("rho_max", flags.rho_max, file.rho_max, 1e-1, &mut prov);
    let rho_min = resolve("rho_min", flags.rho_min, file.rho_min, 1e-4, &mut prov);
    let rho_per_decade = resolve(
        "rho_per_decade",
        flags.rho_per_decade,
        file.rho_per_decade,
        4,
        &mut prov,
    );
    let defaults = SolveConfig::default();
    let solver = SolveConfig {
        max_iterations: resolve(
            "max_iterations",
            flags.max_iterations,
            file.max_iterations,
            defaults.max_iterations,
            &mut prov,
        ),
        step_size: resolve(
            "step_size",
            flags.step_size,
            file.step_size,
            defaults.step_size,
            &mut prov,
        ),
        tolerance: resolve(
            "tolerance",
            flags.tolerance,
            file.tolerance,
            defaults.tolerance,
            &mut prov,
        ),
        seed: resolve("seed", flags.seed, file.seed, defaults.seed, &mut prov),
        restarts: resolve(
            "restarts",
            flags.restarts,
            file.restarts,
            defaults.restarts,
            &mut prov,
        ),
        armijo_shrink: resolve(
            "armijo_shrink",
            flags.armijo_shrink,
            file.armijo_shrink,
            defaults.armijo_shrink,
            &mut prov,
        ),
    };
    let output = flags.output.clone().or_else(|| file.output.clone());
    if let Some(ref o) = output {
        prov.push(format!("output = {} (set)", o.display()));
    }

    let mut params = SpectralParams::new(s1, s2, p, q);
    params.lambda = lambda;
    params.rho = rho;
    let config = RunConfig {
        mode,
        a,
        b,
        n,
        params,
        solver,
        rho_max,
        rho_min,
        rho_per_decade,
        output,
        provenance: prov,
    };
    validate_config(&config)?;
    Ok(config)
}

fn validate_config(cfg: &RunConfig) -> Result<()> {
    cfg.params.validate()?;
    cfg.solver.validate()?;
    let regime = cfg.params.regime();
    match cfg.mode {
        Mode::FixedLambda | Mode::Probe => {
            cfg.params.lambda.ok_or(FracError::MissingLambda)?;
            if cfg.mode == Mode::FixedLambda && regime != Regime::Coercive {
                return Err(FracError::RegimeMismatch {
                    op: "fixed-lambda",
                    required: "coercive (q < p, s2 < s1)",
                    actual: regime.to_string(),
                });
            }
        }
        Mode::Nehari => {
            cfg.params.lambda.ok_or(FracError::MissingLambda)?;
            if regime != Regime::Nehari {
                return Err(FracError::RegimeMismatch {
                    op: "nehari",
                    required: "nehari (p < q, s1 < s2)",
                    actual: regime.to_string(),
                });
            }
        }
        Mode::BranchZero => {
            if regime != Regime::Coercive {
                return Err(FracError::RegimeMismatch {
                    op: "branch-zero",
                    required: "coercive (q < p, s2 < s1)",
                    actual: regime.to_string(),
                });
            }
            geometric_rho_grid(cfg.rho_max, cfg.rho_min, cfg.rho_per_decade)?;
        }
        Mode::BranchInfinity => {
            if regime != Regime::Nehari {
                return Err(FracError::RegimeMismatch {
                    op: "branch-infinity",
                    required: "nehari (p < q, s1 < s2)",
                    actual: regime.to_string(),
                });
            }
            geometric_rho_grid(cfg.rho_max, cfg.rho_min, cfg.rho_per_decade)?;
        }
        Mode::Eig1 | Mode::FixedRho | Mode::Verify => {}
    }
    Ok(())
}

/// Default directory for outputs: `FRACPQ_OUTPUT_DIR` if set, else the
/// current directory.
pub fn default_output_dir() -> PathBuf {
    std::env::var_os(OUTPUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}
