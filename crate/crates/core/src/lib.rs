//! Discrete spectral theory for the mixed nonlocal operator
//! (-Δ)^{s1}_p + (-Δ)^{s2}_q on a 1D interval with exterior Dirichlet
//! condition: eigenpair solvers, bifurcation-branch tracing, and a
//! self-verification suite.

pub mod branch;
pub mod config;
pub mod error;
pub mod forms;
pub mod grid;
pub mod io;
pub mod solve;
pub mod verify;

pub use config::{Mode, RunConfig};
pub use error::{FracError, Result};
pub use forms::{Field, Regime, SpectralParams};
pub use grid::{build_grid, build_kernel, Grid, NonlocalKernel};
pub use solve::{EigenPair, SolveConfig};
