//! 1D midpoint grid and the quadrature weights discretizing the Gagliardo
//! double integral, with the exterior Dirichlet tail integrated in closed form.

use serde::{Deserialize, Serialize};

use crate::error::{FracError, Result};

/// Uniform interval grid with cell-midpoint collocation nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub h: f64,
    pub nodes: Vec<f64>,
}

impl Grid {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// True if the node set is mirror-symmetric about (a + b)/2.
    pub fn is_symmetric(&self) -> bool {
        let mid = 0.5 * (self.a + self.b);
        let tol = 1e-12 * (self.b - self.a);
        self.nodes
            .iter()
            .zip(self.nodes.iter().rev())
            .all(|(x, y)| ((x - mid) + (y - mid)).abs() <= tol)
    }
}

/// Pairwise and exterior quadrature weights for one (s, r) kernel.
///
/// `pair_weights` is dense, symmetric, zero on the diagonal;
/// `exterior_weights[i]` is the closed-form integral of |x_i - y|^{-(1+sr)}
/// over the complement of (a, b), times the cell width.
#[derive(Debug, Clone)]
pub struct NonlocalKernel {
    pub s: f64,
    pub r: f64,
    n: usize,
    pair_weights: Vec<f64>,
    exterior_weights: Vec<f64>,
}

impl NonlocalKernel {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn pair(&self, i: usize, j: usize) -> f64 {
        self.pair_weights[i * self.n + j]
    }

    #[inline]
    pub fn pair_row(&self, i: usize) -> &[f64] {
        &self.pair_weights[i * self.n..(i + 1) * self.n]
    }

    #[inline]
    pub fn exterior(&self, i: usize) -> f64 {
        self.exterior_weights[i]
    }

    pub fn exterior_weights(&self) -> &[f64] {
        &self.exterior_weights
    }
}

/// Build a uniform midpoint grid on (a, b) with n cells.
pub fn build_grid(a: f64, b: f64, n: usize) -> Result<Grid> {
    if !(a < b) {
        return Err(FracError::InvalidExtent { a, b });
    }
    if n < 2 {
        return Err(FracError::TooFewCells { n });
    }
    let h = (b - a) / n as f64;
    let nodes = (0..n).map(|i| a + (i as f64 + 0.5) * h).collect();
    Ok(Grid { a, b, n, h, nodes })
}

/// Assemble the quadrature weights for the (s, r) Gagliardo kernel on `grid`.
///
/// Interior pairs get h^2 / |x_i - x_j|^{1 + s r}; the i = j contribution is
/// dropped (the integrand is integrable across the diagonal, and midpoint
/// collocation of the diagonal cell pair is first-order consistent without it).
pub fn build_kernel(grid: &Grid, s: f64, r: f64) -> Result<NonlocalKernel> {
    if !(s > 0.0 && s < 1.0) {
        return Err(FracError::ParameterOutOfRange {
            name: "s",
            value: s,
            expected: "0 < s < 1",
        });
    }
    if !(r > 1.0 && r.is_finite()) {
        return Err(FracError::ParameterOutOfRange {
            name: "r",
            value: r,
            expected: "1 < r < inf",
        });
    }
    let n = grid.n;
    let h = grid.h;
    let sr = s * r;
    let h2 = h * h;
    let mut pair_weights = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = grid.nodes[j] - grid.nodes[i];
            let w = h2 / d.powf(1.0 + sr);
            pair_weights[i * n + j] = w;
            pair_weights[j * n + i] = w;
        }
    }
    // ∫_{b}^{∞} (y - x)^{-(1+sr)} dy = (b - x)^{-sr} / (sr), same on the left.
    let exterior_weights = grid
        .nodes
        .iter()
        .map(|&x| h * ((grid.b - x).powf(-sr) + (x - grid.a).powf(-sr)) / sr)
        .collect();
    Ok(NonlocalKernel {
        s,
        r,
        n,
        pair_weights,
        exterior_weights,
    })
}
