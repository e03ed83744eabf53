//! Output formats: branch CSV, eigenpair JSON documents, and the
//! verification report (human-readable text plus structured JSON).
//!
//! Branch CSV is exactly the header `rho,lambda,seminorm_p,norm_s2q,
//! residual,converged` followed by one row per point, floats printed with
//! 17 significant decimal digits, newline-terminated. An empty branch
//! yields a header-only file. A metadata sidecar (`<file>.meta.json`)
//! carries the full run configuration so the producing command can be
//! replayed; eigenpair documents embed it directly.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::branch::BranchPoint;
use crate::config::{Mode, RunConfig};
use crate::error::{FracError, Result};
use crate::forms::{apply_frac_laplacian, Field};
use crate::grid::{build_grid, build_kernel};
use crate::solve::{mass_gradient_over_q, relative_defect, EigenPair};
use crate::verify::VerificationReport;

/// 17 significant decimal digits: enough to round-trip any f64 exactly.
fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn format_branch_csv(branch: &[BranchPoint]) -> String {
    let mut out = String::from("rho,lambda,seminorm_p,norm_s2q,residual,converged\n");
    for pt in branch {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_float(pt.rho),
            fmt_float(pt.lambda),
            fmt_float(pt.seminorm_p),
            fmt_float(pt.norm_s2q),
            fmt_float(pt.residual),
            pt.converged
        ));
    }
    out
}

pub fn write_branch_csv(path: &Path, branch: &[BranchPoint]) -> Result<()> {
    std::fs::write(path, format_branch_csv(branch))?;
    Ok(())
}

/// Parse a branch CSV produced by [`format_branch_csv`].
pub fn parse_branch_csv(text: &str) -> Result<Vec<BranchPoint>> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != "rho,lambda,seminorm_p,norm_s2q,residual,converged" {
        return Err(FracError::MalformedConfig {
            key: "csv header".into(),
            message: format!("unexpected header {header:?}"),
        });
    }
    let mut branch = Vec::new();
    for (idx, line) in lines.enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 6 {
            return Err(FracError::MalformedConfig {
                key: format!("csv row {}", idx + 1),
                message: format!("expected 6 columns, got {}", cols.len()),
            });
        }
        let num = |i: usize| -> Result<f64> {
            cols[i].parse().map_err(|e| FracError::MalformedConfig {
                key: format!("csv row {}", idx + 1),
                message: format!("column {}: {e}", i + 1),
            })
        };
        branch.push(BranchPoint {
            rho: num(0)?,
            lambda: num(1)?,
            seminorm_p: num(2)?,
            norm_s2q: num(3)?,
            residual: num(4)?,
            converged: cols[5].parse().map_err(|e| FracError::MalformedConfig {
                key: format!("csv row {}", idx + 1),
                message: format!("column 6: {e}"),
            })?,
        });
    }
    Ok(branch)
}

/// Sidecar written next to branch CSV files so every output can be traced
/// back to the command that produced it.
pub fn write_run_metadata(csv_path: &Path, cfg: &RunConfig) -> Result<()> {
    let meta = serde_json::to_string_pretty(cfg).map_err(io_err)?;
    let mut path = csv_path.as_os_str().to_owned();
    path.push(".meta.json");
    std::fs::write(Path::new(&path), meta + "\n")?;
    Ok(())
}

/// Self-describing eigenpair output: the full run configuration (parameter
/// echo, grid spec, seed, provenance) together with the field values and
/// all solution scalars, so the residual can be recomputed from the file
/// alone and the producing command replayed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenPairDocument {
    pub config: RunConfig,
    pub lambda: f64,
    pub rho: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub trivial: bool,
    pub heuristic: bool,
    pub energy: f64,
    pub field: Vec<f64>,
}

pub fn eigenpair_document(cfg: &RunConfig, pair: &EigenPair) -> EigenPairDocument {
    EigenPairDocument {
        config: cfg.clone(),
        lambda: pair.lambda,
        rho: pair.rho,
        residual: pair.residual,
        iterations: pair.iterations,
        converged: pair.converged,
        trivial: pair.trivial,
        heuristic: pair.heuristic,
        energy: pair.energy,
        field: pair.u.values().to_vec(),
    }
}

fn io_err(e: serde_json::Error) -> FracError {
    FracError::MalformedConfig {
        key: "json".into(),
        message: e.to_string(),
    }
}

pub fn write_eigenpair_json(path: &Path, doc: &EigenPairDocument) -> Result<()> {
    let text = serde_json::to_string_pretty(doc).map_err(io_err)?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

pub fn read_eigenpair_json(path: &Path) -> Result<EigenPairDocument> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(io_err)
}

pub fn write_eigenpair_list_json(path: &Path, docs: &[EigenPairDocument]) -> Result<()> {
    let text = serde_json::to_string_pretty(docs).map_err(io_err)?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

/// Recompute the relative Euler-Lagrange defect of a stored eigenpair from
/// the embedded configuration and field values, using the same defect and
/// scaling conventions as the producing solver.
pub fn recompute_residual(doc: &EigenPairDocument) -> Result<f64> {
    let cfg = &doc.config;
    let params = &cfg.params;
    let grid = build_grid(cfg.a, cfg.b, cfg.n)?;
    let u = Field(doc.field.clone());
    if doc.trivial {
        return Ok(0.0);
    }
    let q = params.q;
    let m = mass_gradient_over_q(&u, &grid, q);
    match cfg.mode {
        Mode::Eig1 => {
            let kq = build_kernel(&grid, params.s2, q)?;
            let g = apply_frac_laplacian(&u, &kq)?.scaled(q);
            let lambda = g.dot(&u) / q;
            let mut defect = g.clone();
            defect.axpy(-lambda * q, &m);
            Ok(relative_defect(
                &defect,
                &[g.norm_inf(), lambda * q * m.norm_inf()],
            ))
        }
        Mode::FixedLambda => {
            let lambda = doc.lambda;
            let kp = build_kernel(&grid, params.s1, params.p)?;
            let kq = build_kernel(&grid, params.s2, q)?;
            let gq = apply_frac_laplacian(&u, &kq)?;
            let mut g = apply_frac_laplacian(&u, &kp)?;
            g.axpy(1.0, &gq);
            g.axpy(-lambda, &m);
            let scale = gq.norm_inf().max(lambda.abs() * m.norm_inf());
            Ok(if scale == 0.0 { 0.0 } else { g.norm_inf() / scale })
        }
        Mode::FixedRho => {
            let kp = build_kernel(&grid, params.s1, params.p)?;
            let kq = build_kernel(&grid, params.s2, q)?;
            let mut g = apply_frac_laplacian(&u, &kp)?;
            g.axpy(1.0, &apply_frac_laplacian(&u, &kq)?);
            let lambda_over_q = g.dot(&u) / (q * doc.rho);
            let mut defect = g.clone();
            defect.axpy(-lambda_over_q * q, &m);
            Ok(relative_defect(
                &defect,
                &[g.norm_inf(), lambda_over_q * q * m.norm_inf()],
            ))
        }
        Mode::Nehari => {
            let lambda = doc.lambda;
            let kp = build_kernel(&grid, params.s1, params.p)?;
            let kq = build_kernel(&grid, params.s2, q)?;
            let gp = apply_frac_laplacian(&u, &kp)?;
            let gq = apply_frac_laplacian(&u, &kq)?;
            let mut g = gp.clone();
            g.axpy(1.0, &gq);
            g.axpy(-lambda, &m);
            let scale = gp
                .norm_inf()
                .max(gq.norm_inf())
                .max(lambda.abs() * m.norm_inf());
            Ok(if scale == 0.0 { 0.0 } else { g.norm_inf() / scale })
        }
        Mode::BranchZero | Mode::BranchInfinity | Mode::Verify | Mode::Probe => {
            Err(FracError::MalformedConfig {
                key: "mode".into(),
                message: format!(
                    "mode {} does not produce a single eigenpair document",
                    cfg.mode
                ),
            })
        }
    }
}

// ---------------------------------------------------------------------------
// verification report

/// Human-readable report: one PASS/FAIL line per check plus an overall
/// verdict.
pub fn format_report_text(report: &VerificationReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "verification suite (seed {}, {})\n",
        report.seed, report.grid_summary
    ));
    for check in &report.checks {
        let verdict = if check.pass { "PASS" } else { "FAIL" };
        let measured: Vec<String> = check
            .measured
            .iter()
            .map(|(k, v)| format!("{k} = {v:.6e}"))
            .collect();
        out.push_str(&format!(
            "{verdict} {name}: {measured} | threshold {threshold} | {params} | {rt:.3}s\n",
            name = check.name,
            measured = measured.join(", "),
            threshold = check.threshold,
            params = check.parameters,
            rt = check.runtime_seconds,
        ));
        if let Some(err) = &check.error {
            out.push_str(&format!("     error: {err}\n"));
        }
    }
    for warning in &report.warnings {
        out.push_str(&format!("warning: {warning}\n"));
    }
    out.push_str(&format!(
        "overall: {}\n",
        if report.overall_pass { "PASS" } else { "FAIL" }
    ));
    out
}

/// Copy of the report with wall-clock fields zeroed; identical inputs must
/// yield byte-identical serializations and runtime is the only
/// non-deterministic field.
pub fn report_with_masked_runtimes(report: &VerificationReport) -> VerificationReport {
    let mut masked = report.clone();
    for check in &mut masked.checks {
        check.runtime_seconds = 0.0;
    }
    masked
}

pub fn serialize_report(report: &VerificationReport) -> Result<String> {
    serde_json::to_string_pretty(report).map_err(io_err)
}

pub fn write_report_json(path: &Path, report: &VerificationReport) -> Result<()> {
    std::fs::write(path, serialize_report(report)? + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{parse_config, FileConfig, Overrides};
    use crate::forms::SpectralParams;
    use crate::grid::build_grid;
    use crate::solve::{solve_fixed_rho, solve_lambda1_q, SolveConfig};

    fn small_setup() -> (RunConfig, crate::grid::Grid) {
        let flags = Overrides {
            n: Some(32),
            ..Default::default()
        };
        let cfg = parse_config(Mode::Eig1, &FileConfig::default(), &flags).unwrap();
        let grid = build_grid(cfg.a, cfg.b, cfg.n).unwrap();
        (cfg, grid)
    }

    #[test]
    fn csv_header_and_shape() {
        let text = format_branch_csv(&[]);
        assert_eq!(text, "rho,lambda,seminorm_p,norm_s2q,residual,converged\n");
        let pt = BranchPoint {
            rho: 0.1,
            lambda: 1.0 / 3.0,
            seminorm_p: 2.0,
            norm_s2q: 3.0,
            residual: 1e-9,
            converged: true,
        };
        let text = format_branch_csv(&[pt]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1].split(',').count(), 6);
        assert!(text.ends_with('\n'));
        // 17 significant digits round-trips every f64 exactly
        let parsed = parse_branch_csv(&text).unwrap();
        assert_eq!(parsed[0].lambda, 1.0 / 3.0);
        assert_eq!(parsed[0].residual, 1e-9);
        assert!(parsed[0].converged);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let branch: Vec<BranchPoint> = (0..5)
            .map(|i| BranchPoint {
                rho: 0.1f64.powi(i),
                lambda: 7.0 / (i as f64 + 3.0),
                seminorm_p: (i as f64).exp(),
                norm_s2q: (i as f64 + 0.5).sqrt(),
                residual: 1e-10 * (i as f64 + 1.0),
                converged: i % 2 == 0,
            })
            .collect();
        let parsed = parse_branch_csv(&format_branch_csv(&branch)).unwrap();
        for (a, b) in branch.iter().zip(&parsed) {
            assert_eq!(a.rho, b.rho);
            assert_eq!(a.lambda, b.lambda);
            assert_eq!(a.seminorm_p, b.seminorm_p);
            assert_eq!(a.norm_s2q, b.norm_s2q);
            assert_eq!(a.residual, b.residual);
            assert_eq!(a.converged, b.converged);
        }
    }

    #[test]
    fn eigenpair_document_round_trip_recomputes_residual() {
        let (cfg, grid) = small_setup();
        let kq = build_kernel(&grid, cfg.params.s2, cfg.params.q).unwrap();
        let pair = solve_lambda1_q(&kq, &grid, cfg.params.q, &cfg.solver).unwrap();
        let doc = eigenpair_document(&cfg, &pair);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pair.json");
        write_eigenpair_json(&path, &doc).unwrap();
        let loaded = read_eigenpair_json(&path).unwrap();
        let recomputed = recompute_residual(&loaded).unwrap();
        assert!(
            (recomputed - doc.residual).abs() <= 1e-12,
            "stored {} vs recomputed {}",
            doc.residual,
            recomputed
        );
    }

    #[test]
    fn fixed_rho_document_recomputes_residual() {
        let flags = Overrides {
            n: Some(32),
            rho: Some(0.5),
            ..Default::default()
        };
        let cfg = parse_config(Mode::FixedRho, &FileConfig::default(), &flags).unwrap();
        let grid = build_grid(cfg.a, cfg.b, cfg.n).unwrap();
        let params = SpectralParams::new(cfg.params.s1, cfg.params.s2, cfg.params.p, cfg.params.q);
        let kp = build_kernel(&grid, params.s1, params.p).unwrap();
        let kq = build_kernel(&grid, params.s2, params.q).unwrap();
        let pair = solve_fixed_rho(&params, 0.5, &grid, &kp, &kq, &SolveConfig::default(), None)
            .unwrap();
        let doc = eigenpair_document(&cfg, &pair);
        let recomputed = recompute_residual(&doc).unwrap();
        assert!(
            (recomputed - doc.residual).abs() <= 1e-12,
            "stored {} vs recomputed {}",
            doc.residual,
            recomputed
        );
    }

    #[test]
    fn masked_reports_are_byte_identical_across_runs() {
        use crate::verify::{run_all, SuiteConfig};
        let suite = SuiteConfig {
            checks: vec!["oracle-equivalence".into()],
            ..Default::default()
        };
        let a = serialize_report(&report_with_masked_runtimes(&run_all(&suite))).unwrap();
        let b = serialize_report(&report_with_masked_runtimes(&run_all(&suite))).unwrap();
        assert_eq!(a, b);
    }
}
