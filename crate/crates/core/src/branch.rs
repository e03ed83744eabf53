//! Bifurcation-branch tracing: the eigenvalue branch lambda(rho) as the mass
//! rho decreases, both for the branch from zero (coercive regime, fixed-mass
//! solves) and the branch from infinity (Nehari regime, transformed solves
//! after the inversion w = u / ||u||^2_{s2,q}), plus power-law rate fits of
//! the gap to the first q-Laplacian eigenvalue.

use serde::{Deserialize, Serialize};

use crate::error::{FracError, Result};
use crate::forms::{seminorm_pow, Field, Regime, SpectralParams};
use crate::grid::{Grid, NonlocalKernel};
use crate::solve::{norm_s2q, solve_fixed_rho, solve_transformed, SolveConfig};

/// One continuation sample: the eigenvalue at mass level rho together with
/// the norms of the recovered physical solution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BranchPoint {
    pub rho: f64,
    pub lambda: f64,
    /// [u]_{s1,p} of the physical solution.
    pub seminorm_p: f64,
    /// ||u||_{s2,q} = [u]_{s2,q} of the physical solution.
    pub norm_s2q: f64,
    pub residual: f64,
    pub converged: bool,
}

fn check_decreasing(rho_grid: &[f64]) -> Result<()> {
    for w in rho_grid.windows(2) {
        if !(w[1] < w[0]) {
            return Err(FracError::MalformedConfig {
                key: "rho_grid".into(),
                message: format!("must be strictly decreasing, got {} then {}", w[0], w[1]),
            });
        }
    }
    if let Some(&r) = rho_grid.iter().find(|&&r| !(r > 0.0)) {
        return Err(FracError::MalformedConfig {
            key: "rho_grid".into(),
            message: format!("mass levels must be positive, got {r}"),
        });
    }
    Ok(())
}

/// Default continuation grid: geometric, `per_decade` points per decade from
/// `rho_max` down to `rho_min` (both included up to rounding).
pub fn geometric_rho_grid(rho_max: f64, rho_min: f64, per_decade: usize) -> Result<Vec<f64>> {
    if !(rho_max > rho_min && rho_min > 0.0) {
        return Err(FracError::MalformedConfig {
            key: "rho_grid".into(),
            message: format!("need rho_max > rho_min > 0, got {rho_max}, {rho_min}"),
        });
    }
    if per_decade == 0 {
        return Err(FracError::MalformedConfig {
            key: "rho_grid".into(),
            message: "points per decade must be >= 1".into(),
        });
    }
    let decades = (rho_max / rho_min).log10();
    let steps = (decades * per_decade as f64).round().max(1.0) as usize;
    let ratio = (rho_min / rho_max).powf(1.0 / steps as f64);
    Ok((0..=steps).map(|k| rho_max * ratio.powi(k as i32)).collect())
}

/// Trace the first branch bifurcating from zero: one fixed-mass solve per
/// rho, warm-started from the previous solution rescaled to the new mass so
/// the continuation stays on the lowest branch. Requires the coercive regime
/// and a strictly decreasing rho grid. Non-converged points are flagged and
/// the branch continues.
pub fn trace_branch_zero(
    params: &SpectralParams,
    rho_grid: &[f64],
    grid: &Grid,
    kp: &NonlocalKernel,
    kq: &NonlocalKernel,
    cfg: &SolveConfig,
) -> Result<Vec<BranchPoint>> {
    params.validate()?;
    if params.regime() != Regime::Coercive {
        return Err(FracError::RegimeMismatch {
            op: "trace_branch_zero",
            required: "coercive (q < p, s2 < s1)",
            actual: params.regime().to_string(),
        });
    }
    check_decreasing(rho_grid)?;
    let mut out = Vec::with_capacity(rho_grid.len());
    let mut warm: Option<Field> = None;
    for &rho in rho_grid {
        let pair = solve_fixed_rho(params, rho, grid, kp, kq, cfg, warm.as_ref())?;
        out.push(BranchPoint {
            rho,
            lambda: pair.lambda,
            seminorm_p: seminorm_pow(&pair.u, kp)?.powf(1.0 / params.p),
            norm_s2q: norm_s2q(&pair.u, kq)?,
            residual: pair.residual,
            converged: pair.converged,
        });
        warm = Some(pair.u);
    }
    Ok(out)
}

/// Trace the branch bifurcating from infinity: one transformed solve per rho
/// (mass constraint on the inverted field w), then record the eigenvalue and
/// the norms of the physical solution u = w / ||w||^2_{s2,q}, whose norm
/// 1/||w||_{s2,q} diverges along the branch. Requires the Nehari regime.
pub fn trace_branch_infinity(
    params: &SpectralParams,
    rho_grid: &[f64],
    grid: &Grid,
    kp: &NonlocalKernel,
    kq: &NonlocalKernel,
    cfg: &SolveConfig,
) -> Result<Vec<BranchPoint>> {
    params.validate()?;
    if params.regime() != Regime::Nehari {
        return Err(FracError::RegimeMismatch {
            op: "trace_branch_infinity",
            required: "nehari (p < q, s1 < s2)",
            actual: params.regime().to_string(),
        });
    }
    check_decreasing(rho_grid)?;
    let mut out = Vec::with_capacity(rho_grid.len());
    let mut warm: Option<Field> = None;
    for &rho in rho_grid {
        let pair = solve_transformed(params, rho, grid, kp, kq, cfg, warm.as_ref())?;
        let w_norm = norm_s2q(&pair.u, kq)?;
        if w_norm == 0.0 {
            return Err(FracError::ZeroField);
        }
        // u = w / ||w||^2, so [u]_{s1,p} = [w]_{s1,p} / ||w||^2 and
        // ||u||_{s2,q} = 1 / ||w||_{s2,q}
        let w_semi_p = seminorm_pow(&pair.u, kp)?.powf(1.0 / params.p);
        out.push(BranchPoint {
            rho,
            lambda: pair.lambda,
            seminorm_p: w_semi_p / (w_norm * w_norm),
            norm_s2q: 1.0 / w_norm,
            residual: pair.residual,
            converged: pair.converged,
        });
        warm = Some(pair.u);
    }
    Ok(out)
}

/// Result of a log-log rate fit of the eigenvalue gap along a branch.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RateFit {
    pub exponent: f64,
    pub r_squared: f64,
    /// Points entering the fit (converged and with positive gap).
    pub used_points: usize,
    /// Converged points excluded because lambda - lambda_ref was not
    /// positive; each is reported as (rho, lambda).
    pub excluded: Vec<(f64, f64)>,
}

/// Least-squares slope of log(lambda(rho) - lambda_ref) against log(rho).
/// Only converged points are used; points at or below lambda_ref are
/// excluded and reported. Needs at least 3 usable points.
pub fn fit_rate(branch: &[BranchPoint], lambda_ref: f64) -> Result<RateFit> {
    if !(lambda_ref > 0.0) {
        return Err(FracError::ParameterOutOfRange {
            name: "lambda_ref",
            value: lambda_ref,
            expected: "> 0",
        });
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut excluded = Vec::new();
    for pt in branch.iter().filter(|p| p.converged) {
        let gap = pt.lambda - lambda_ref;
        if gap > 0.0 {
            xs.push(pt.rho.ln());
            ys.push(gap.ln());
        } else {
            excluded.push((pt.rho, pt.lambda));
        }
    }
    let m = xs.len();
    if m < 3 {
        return Err(FracError::InsufficientPoints { got: m });
    }
    let mx = xs.iter().sum::<f64>() / m as f64;
    let my = ys.iter().sum::<f64>() / m as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(FracError::InsufficientPoints { got: 1 });
    }
    let exponent = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(RateFit {
        exponent,
        r_squared,
        used_points: m,
        excluded,
    })
}
