//! Discrete Gagliardo seminorms, bilinear forms, the fractional r-Laplacian
//! as a Euclidean gradient, L^q masses and the energy functionals.

use serde::{Deserialize, Serialize};

use crate::error::{FracError, Result};
use crate::grid::{Grid, NonlocalKernel};

/// Interior nodal values of u; u is implicitly zero on the exterior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Field(pub Vec<f64>);

impl Field {
    pub fn zeros(n: usize) -> Self {
        Field(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn scaled(&self, c: f64) -> Field {
        Field(self.0.iter().map(|v| c * v).collect())
    }

    pub fn abs(&self) -> Field {
        Field(self.0.iter().map(|v| v.abs()).collect())
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn dot(&self, other: &Field) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn axpy(&mut self, alpha: f64, other: &Field) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += alpha * b;
        }
    }

    /// Odd part about the grid midpoint: (u - reverse(u)) / 2.
    pub fn odd_part(&self) -> Field {
        let n = self.0.len();
        Field(
            (0..n)
                .map(|i| 0.5 * (self.0[i] - self.0[n - 1 - i]))
                .collect(),
        )
    }
}

/// Parameter regime of the mixed problem, keyed off the (p, q) and (s1, s2)
/// orderings as in the existence theory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// s2 < s1 and q < p: the fixed-lambda energy is coercive.
    Coercive,
    /// s1 < s2 and p < q: critical points live on the Nehari set.
    Nehari,
    /// Any other ordering; the regime-specific solvers reject it.
    Unordered,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::Coercive => write!(f, "coercive (s2 < s1, q < p)"),
            Regime::Nehari => write!(f, "nehari (s1 < s2, p < q)"),
            Regime::Unordered => write!(f, "unordered"),
        }
    }
}

/// The problem instance (s1, s2, p, q) plus the optional fixed eigenvalue
/// parameter and mass level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralParams {
    pub s1: f64,
    pub s2: f64,
    pub p: f64,
    pub q: f64,
    pub lambda: Option<f64>,
    pub rho: Option<f64>,
}

impl SpectralParams {
    pub fn new(s1: f64, s2: f64, p: f64, q: f64) -> Self {
        SpectralParams {
            s1,
            s2,
            p,
            q,
            lambda: None,
            rho: None,
        }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = Some(rho);
        self
    }

    pub fn regime(&self) -> Regime {
        if self.s2 < self.s1 && self.q < self.p {
            Regime::Coercive
        } else if self.s1 < self.s2 && self.p < self.q {
            Regime::Nehari
        } else {
            Regime::Unordered
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("s1", self.s1), ("s2", self.s2)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(FracError::ParameterOutOfRange {
                    name,
                    value: v,
                    expected: "0 < s < 1",
                });
            }
        }
        for (name, v) in [("p", self.p), ("q", self.q)] {
            if !(v > 1.0 && v.is_finite()) {
                return Err(FracError::ParameterOutOfRange {
                    name,
                    value: v,
                    expected: "1 < exponent < inf",
                });
            }
        }
        Ok(())
    }
}

#[inline]
fn check_dim(u: &Field, n: usize) -> Result<()> {
    if u.len() != n {
        return Err(FracError::DimensionMismatch {
            field: u.len(),
            expected: n,
        });
    }
    Ok(())
}

/// |t|^r with a fast path for r = 2.
#[inline]
pub fn abs_pow(t: f64, r: f64) -> f64 {
    if r == 2.0 {
        t * t
    } else {
        t.abs().powf(r)
    }
}

/// |t|^{r-2} t, defined as 0 at t = 0 for r < 2 (the pointwise limit).
#[inline]
pub fn signed_pow(t: f64, r: f64) -> f64 {
    if r == 2.0 {
        t
    } else if t == 0.0 {
        0.0
    } else {
        t.abs().powf(r - 2.0) * t
    }
}

/// Discrete [u]^r_{s,r}: the Gagliardo double sum plus twice the exterior tail.
pub fn seminorm_pow(u: &Field, k: &NonlocalKernel) -> Result<f64> {
    check_dim(u, k.len())?;
    let r = k.r;
    let n = k.len();
    let v = u.values();
    let mut interior = 0.0;
    for i in 0..n {
        let row = k.pair_row(i);
        let ui = v[i];
        let mut acc = 0.0;
        for j in (i + 1)..n {
            acc += row[j] * abs_pow(ui - v[j], r);
        }
        interior += acc;
    }
    let exterior: f64 = v
        .iter()
        .zip(k.exterior_weights())
        .map(|(&ui, &e)| e * abs_pow(ui, r))
        .sum();
    // Σ_{i≠j} counts each unordered pair twice.
    Ok(2.0 * interior + 2.0 * exterior)
}

/// The form E_{r,s}(u, v) associated to the fractional r-Laplacian; satisfies
/// bilinear_form(u, u) = seminorm_pow(u).
pub fn bilinear_form(u: &Field, v: &Field, k: &NonlocalKernel) -> Result<f64> {
    check_dim(u, k.len())?;
    check_dim(v, k.len())?;
    let r = k.r;
    let n = k.len();
    let uu = u.values();
    let vv = v.values();
    let mut interior = 0.0;
    for i in 0..n {
        let row = k.pair_row(i);
        for j in (i + 1)..n {
            let du = uu[i] - uu[j];
            let dv = vv[i] - vv[j];
            interior += row[j] * signed_pow(du, r) * dv;
        }
    }
    let exterior: f64 = (0..n)
        .map(|i| k.exterior(i) * signed_pow(uu[i], r) * vv[i])
        .sum();
    Ok(2.0 * interior + 2.0 * exterior)
}

/// Discrete fractional r-Laplacian of u under the exterior Dirichlet
/// condition: the Euclidean gradient of seminorm_pow(u) / r, so that
/// ⟨apply_frac_laplacian(u), v⟩ = bilinear_form(u, v) for every v.
pub fn apply_frac_laplacian(u: &Field, k: &NonlocalKernel) -> Result<Field> {
    check_dim(u, k.len())?;
    let r = k.r;
    let n = k.len();
    let v = u.values();
    let mut g = vec![0.0; n];
    for i in 0..n {
        let row = k.pair_row(i);
        let ui = v[i];
        let mut acc = 0.0;
        for j in 0..n {
            if j != i {
                acc += row[j] * signed_pow(ui - v[j], r);
            }
        }
        g[i] = 2.0 * (acc + k.exterior(i) * signed_pow(ui, r));
    }
    Ok(Field(g))
}

/// h * Σ_i |u_i|^q, the discrete L^q mass over the interval.
pub fn lq_mass(u: &Field, grid: &Grid, q: f64) -> Result<f64> {
    check_dim(u, grid.n)?;
    if !(q > 1.0) {
        return Err(FracError::ParameterOutOfRange {
            name: "q",
            value: q,
            expected: "q > 1",
        });
    }
    Ok(grid.h * u.values().iter().map(|&t| abs_pow(t, q)).sum::<f64>())
}

/// F_lambda(u) = [u]^p/p + [u]^q/q - (lambda/q) ∫|u|^q.
pub fn energy_f(
    u: &Field,
    params: &SpectralParams,
    grid: &Grid,
    kp: &NonlocalKernel,
    kq: &NonlocalKernel,
) -> Result<f64> {
    let lambda = params.lambda.ok_or(FracError::MissingLambda)?;
    let sp = seminorm_pow(u, kp)?;
    let sq = seminorm_pow(u, kq)?;
    let mass = lq_mass(u, grid, params.q)?;
    Ok(sp / params.p + sq / params.q - lambda / params.q * mass)
}

/// I(u) = [u]^p/p + [u]^q/q, the objective of the fixed-mass minimization.
pub fn energy_i(
    u: &Field,
    params: &SpectralParams,
    kp: &NonlocalKernel,
    kq: &NonlocalKernel,
) -> Result<f64> {
    Ok(seminorm_pow(u, kp)? / params.p + seminorm_pow(u, kq)? / params.q)
}

/// J_lambda(u) = (q/p)[u]^p + [u]^q - lambda ∫|u|^q.
pub fn energy_j(
    u: &Field,
    params: &SpectralParams,
    grid: &Grid,
    kp: &NonlocalKernel,
    kq: &NonlocalKernel,
) -> Result<f64> {
    let lambda = params.lambda.ok_or(FracError::MissingLambda)?;
    let sp = seminorm_pow(u, kp)?;
    let sq = seminorm_pow(u, kq)?;
    let mass = lq_mass(u, grid, params.q)?;
    Ok(params.q / params.p * sp + sq - lambda * mass)
}

/// G(u) = ([u]^p/p + [u]^q/q) / (‖u‖_q^q / q), the mixed Rayleigh quotient.
pub fn rayleigh_g(
    u: &Field,
    params: &SpectralParams,
    grid: &Grid,
    kp: &NonlocalKernel,
    kq: &NonlocalKernel,
) -> Result<f64> {
    let mass = lq_mass(u, grid, params.q)?;
    if mass == 0.0 {
        return Err(FracError::ZeroField);
    }
    Ok(energy_i(u, params, kp, kq)? / (mass / params.q))
}

/// Shipped constants for the vector inequalities: c2 = 2^{2-r} for r >= 2,
/// c1 = r - 1 for 1 < r < 2 (validated by the dense sampling check).
pub fn vector_inequality_constant(r: f64) -> f64 {
    if r >= 2.0 {
        (2.0f64).powf(2.0 - r)
    } else {
        r - 1.0
    }
}

/// Margin of the monotonicity inequality at (x1, x2): LHS - constant * RHS.
/// Nonnegative margins over the sweep validate the shipped constant.
pub fn vector_inequality_margin(x1: f64, x2: f64, r: f64) -> f64 {
    let lhs = (signed_pow(x2, r) - signed_pow(x1, r)) * (x2 - x1);
    if r >= 2.0 {
        lhs - vector_inequality_constant(r) * abs_pow(x2 - x1, r)
    } else {
        let base = x1.abs() + x2.abs();
        if base == 0.0 {
            return 0.0;
        }
        lhs - vector_inequality_constant(r) * base.powf(r - 2.0) * (x2 - x1) * (x2 - x1)
    }
}
