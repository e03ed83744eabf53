//! Python bindings: eigenpair solvers, bifurcation-branch tracing, and the
//! verification suite of the mixed nonlocal operator
//! (-Δ)^{s1}_p + (-Δ)^{s2}_q on a 1D interval.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use fracpq::branch::{self, BranchPoint};
use fracpq::grid::{build_grid, build_kernel, Grid, NonlocalKernel};
use fracpq::solve::{self, EigenPair, SolveConfig};
use fracpq::verify::{self, SuiteConfig};
use fracpq::{forms, FracError, Field, SpectralParams};

fn err(e: FracError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A converged (or best-effort) eigenpair: the eigenvalue, the field values
/// on the midpoint grid, and solver diagnostics.
#[pyclass(name = "EigenPair", skip_from_py_object)]
#[derive(Clone)]
struct PyEigenPair {
    inner: EigenPair,
}

#[pymethods]
impl PyEigenPair {
    #[getter]
    fn lam(&self) -> f64 {
        self.inner.lambda
    }
    #[getter]
    fn u(&self) -> Vec<f64> {
        self.inner.u.values().to_vec()
    }
    #[getter]
    fn rho(&self) -> f64 {
        self.inner.rho
    }
    #[getter]
    fn residual(&self) -> f64 {
        self.inner.residual
    }
    #[getter]
    fn iterations(&self) -> usize {
        self.inner.iterations
    }
    #[getter]
    fn converged(&self) -> bool {
        self.inner.converged
    }
    #[getter]
    fn trivial(&self) -> bool {
        self.inner.trivial
    }
    #[getter]
    fn energy(&self) -> f64 {
        self.inner.energy
    }
    fn __repr__(&self) -> String {
        format!(
            "EigenPair(lam={:.9e}, rho={:.3e}, residual={:.3e}, converged={})",
            self.inner.lambda, self.inner.rho, self.inner.residual, self.inner.converged
        )
    }
}

/// One point of a bifurcation branch.
#[pyclass(name = "BranchPoint", from_py_object)]
#[derive(Clone)]
struct PyBranchPoint {
    inner: BranchPoint,
}

#[pymethods]
impl PyBranchPoint {
    #[getter]
    fn rho(&self) -> f64 {
        self.inner.rho
    }
    #[getter]
    fn lam(&self) -> f64 {
        self.inner.lambda
    }
    #[getter]
    fn seminorm_p(&self) -> f64 {
        self.inner.seminorm_p
    }
    #[getter]
    fn norm_s2q(&self) -> f64 {
        self.inner.norm_s2q
    }
    #[getter]
    fn residual(&self) -> f64 {
        self.inner.residual
    }
    #[getter]
    fn converged(&self) -> bool {
        self.inner.converged
    }
    fn __repr__(&self) -> String {
        format!(
            "BranchPoint(rho={:.3e}, lam={:.9e}, converged={})",
            self.inner.rho, self.inner.lambda, self.inner.converged
        )
    }
}

/// The mixed-operator problem on an interval (a, b) with n midpoint cells.
#[pyclass(name = "Problem")]
struct PyProblem {
    params: SpectralParams,
    grid: Grid,
    kp: NonlocalKernel,
    kq: NonlocalKernel,
    solver: SolveConfig,
}

fn pair(p: EigenPair) -> PyEigenPair {
    PyEigenPair { inner: p }
}

#[pymethods]
impl PyProblem {
    #[new]
    #[pyo3(signature = (s1, s2, p, q, a=-1.0, b=1.0, n=256, seed=0, tolerance=1e-8))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        s1: f64,
        s2: f64,
        p: f64,
        q: f64,
        a: f64,
        b: f64,
        n: usize,
        seed: u64,
        tolerance: f64,
    ) -> PyResult<Self> {
        let params = SpectralParams::new(s1, s2, p, q);
        params.validate().map_err(err)?;
        let grid = build_grid(a, b, n).map_err(err)?;
        let kp = build_kernel(&grid, s1, p).map_err(err)?;
        let kq = build_kernel(&grid, s2, q).map_err(err)?;
        let solver = SolveConfig {
            seed,
            tolerance,
            ..Default::default()
        };
        Ok(PyProblem {
            params,
            grid,
            kp,
            kq,
            solver,
        })
    }

    /// Grid nodes (cell midpoints).
    #[getter]
    fn nodes(&self) -> Vec<f64> {
        self.grid.nodes.clone()
    }

    /// Parameter regime: "coercive", "nehari", or "unordered".
    #[getter]
    fn regime(&self) -> String {
        self.params.regime().to_string()
    }

    /// First eigenvalue of the fractional q-Laplacian (s2, q).
    fn eig1(&self) -> PyResult<PyEigenPair> {
        solve::solve_lambda1_q(&self.kq, &self.grid, self.params.q, &self.solver)
            .map(pair)
            .map_err(err)
    }

    /// Odd-symmetry surrogate for the second q-Laplacian level.
    fn eig2_sym(&self) -> PyResult<PyEigenPair> {
        solve::solve_lambda2_sym(&self.kq, &self.grid, self.params.q, &self.solver)
            .map(pair)
            .map_err(err)
    }

    /// Global minimizer of the fixed-lambda energy (coercive regime q < p).
    fn fixed_lambda(&self, lam: f64) -> PyResult<PyEigenPair> {
        let params = self.params.with_lambda(lam);
        solve::solve_fixed_lambda_coercive(&params, &self.grid, &self.kp, &self.kq, &self.solver)
            .map(pair)
            .map_err(err)
    }

    /// Minimizer of the unconstrained energy at fixed L^q mass rho.
    fn fixed_rho(&self, rho: f64) -> PyResult<PyEigenPair> {
        solve::solve_fixed_rho(
            &self.params,
            rho,
            &self.grid,
            &self.kp,
            &self.kq,
            &self.solver,
            None,
        )
        .map(pair)
        .map_err(err)
    }

    /// Nehari-manifold minimizer of the fixed-lambda energy (regime p < q).
    fn nehari(&self, lam: f64) -> PyResult<PyEigenPair> {
        let params = self.params.with_lambda(lam);
        solve::solve_nehari(&params, &self.grid, &self.kp, &self.kq, &self.solver)
            .map(pair)
            .map_err(err)
    }

    /// Bifurcation branch from zero over a decreasing geometric mass grid.
    #[pyo3(signature = (rho_max=1e-1, rho_min=1e-4, per_decade=4))]
    fn branch_zero(
        &self,
        rho_max: f64,
        rho_min: f64,
        per_decade: usize,
    ) -> PyResult<Vec<PyBranchPoint>> {
        let rhos = branch::geometric_rho_grid(rho_max, rho_min, per_decade).map_err(err)?;
        let pts = branch::trace_branch_zero(
            &self.params,
            &rhos,
            &self.grid,
            &self.kp,
            &self.kq,
            &self.solver,
        )
        .map_err(err)?;
        Ok(pts.into_iter().map(|p| PyBranchPoint { inner: p }).collect())
    }

    /// Bifurcation branch from infinity via the inversion u -> u/|u|^2.
    #[pyo3(signature = (rho_max=1e-1, rho_min=1e-4, per_decade=4))]
    fn branch_infinity(
        &self,
        rho_max: f64,
        rho_min: f64,
        per_decade: usize,
    ) -> PyResult<Vec<PyBranchPoint>> {
        let rhos = branch::geometric_rho_grid(rho_max, rho_min, per_decade).map_err(err)?;
        let pts = branch::trace_branch_infinity(
            &self.params,
            &rhos,
            &self.grid,
            &self.kp,
            &self.kq,
            &self.solver,
        )
        .map_err(err)?;
        Ok(pts.into_iter().map(|p| PyBranchPoint { inner: p }).collect())
    }

    /// Least-squares rate exponent of lambda(rho) - lam_ref on a branch;
    /// returns (exponent, r_squared).
    fn fit_rate(&self, pts: Vec<PyBranchPoint>, lam_ref: f64) -> PyResult<(f64, f64)> {
        let raw: Vec<BranchPoint> = pts.into_iter().map(|p| p.inner).collect();
        let fit = branch::fit_rate(&raw, lam_ref).map_err(err)?;
        Ok((fit.exponent, fit.r_squared))
    }

    /// Discrete Gagliardo seminorm [u]^r for the (s, r) of the given term
    /// ("p" or "q").
    fn seminorm(&self, u: Vec<f64>, term: &str) -> PyResult<f64> {
        let field = Field(u);
        let kernel = match term {
            "p" => &self.kp,
            "q" => &self.kq,
            _ => return Err(PyValueError::new_err("term must be \"p\" or \"q\"")),
        };
        forms::seminorm_pow(&field, kernel).map_err(err)
    }
}

/// Run the verification suite; returns (overall_pass, text_report).
#[pyfunction]
#[pyo3(signature = (checks=None, seed=0))]
fn run_verification(checks: Option<Vec<String>>, seed: u64) -> (bool, String) {
    let mut cfg = SuiteConfig {
        seed,
        ..Default::default()
    };
    if let Some(names) = checks {
        cfg.checks = names;
    }
    let report = verify::run_all(&cfg);
    (report.overall_pass, fracpq::io::format_report_text(&report))
}

/// Registered verification check names, in execution order.
#[pyfunction]
fn check_names() -> Vec<String> {
    verify::CHECK_REGISTRY.iter().map(|s| s.to_string()).collect()
}

#[pymodule]
fn fracpq_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProblem>()?;
    m.add_class::<PyEigenPair>()?;
    m.add_class::<PyBranchPoint>()?;
    m.add_function(wrap_pyfunction!(run_verification, m)?)?;
    m.add_function(wrap_pyfunction!(check_names, m)?)?;
    Ok(())
}
