//! Acceptance gate: one test per criterion, each printing a single
//! PASS/FAIL line (visible with `--nocapture`; the per-test ok/FAILED line
//! of the harness mirrors it). All tolerances are pinned as constants
//! below. Oracles here are coded independently of the library internals:
//! the brute-force double sum, the exterior tail, and the dense pencil are
//! assembled from the defining formulas in this file.

use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use fracpq::branch::{fit_rate, geometric_rho_grid, trace_branch_infinity, trace_branch_zero};
use fracpq::forms::{
    bilinear_form, lq_mass, rayleigh_g, seminorm_pow, vector_inequality_margin,
};
use fracpq::grid::{build_grid, build_kernel};
use fracpq::io::{report_with_masked_runtimes, serialize_report};
use fracpq::solve::{
    nehari_project, solve_fixed_lambda_coercive, solve_lambda1_q, solve_lambda2_sym,
    solve_nehari,
};
use fracpq::verify::{multiplicity_probe, run_all, SuiteConfig};
use fracpq::{Field, FracError, SolveConfig, SpectralParams};

// pinned tolerances, one block per criterion
const C1_ORACLE_TOL: f64 = 1e-12;
const C1_MAX_SECONDS: f64 = 1.0;
const C2_EIG_TOL: f64 = 1e-8;
const C2_MAX_SECONDS: f64 = 30.0;
const C3_GRAD_TOL: f64 = 1e-5;
const C4_MASS_TOL: f64 = 1e-12;
const C5_SIGN_TOL: f64 = 1e-10;
const C6_MEMBERSHIP_TOL: f64 = 1e-10;
const C6_SCALE_TOL: f64 = 1e-12;
const C7_GAP_FRACTION: f64 = 0.05;
const C7_DECAY_FACTOR: f64 = 10.0;
const C7_RATE_FLOOR: f64 = 3.0 / 2.0 - 1.0 - 0.15; // p/q - 1 - 0.15 at (p,q)=(3,2)
const C7_MAX_SECONDS: f64 = 300.0;
const C8_GROWTH_FACTOR: f64 = 10.0;
const C8_RATE_FLOOR: f64 = 2.0 * (3.0 - 2.0) / 2.0 - 0.15; // 2(q-p)/p - 0.15 at (p,q)=(2,3)
const C8_MAX_SECONDS: f64 = 300.0;
const C9_APPROACH_TOL: f64 = 1e-3;
const C9_DIVERGENCE_FACTOR: f64 = 10.0;
const C10_SAMPLES: usize = 1_000_000;
const C11_SEPARATION: f64 = 1e-3;
const C12_MAX_SECONDS: f64 = 600.0;

fn verdict(criterion: usize, name: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[criterion {criterion:02}] {tag} {name}: {detail}");
    assert!(pass, "[criterion {criterion:02}] FAIL {name}: {detail}");
}

fn random_field(n: usize, rng: &mut ChaCha8Rng) -> Field {
    Field((0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
}

// ---------------------------------------------------------------------------
// independent oracles (coded from the defining formulas, not the library)

fn node(a: f64, h: f64, i: usize) -> f64 {
    a + (i as f64 + 0.5) * h
}

/// [u]^r: double sum over cell pairs plus the closed-form exterior tail of
/// the Dirichlet complement integral.
fn oracle_seminorm(u: &[f64], a: f64, b: f64, s: f64, r: f64) -> f64 {
    let n = u.len();
    let h = (b - a) / n as f64;
    let mut total = 0.0;
    for i in 0..n {
        let xi = node(a, h, i);
        for j in 0..n {
            if i != j {
                let xj = node(a, h, j);
                total += h * h * (u[i] - u[j]).abs().powf(r) / (xi - xj).abs().powf(1.0 + s * r);
            }
        }
        let tail = ((b - xi).powf(-s * r) + (xi - a).powf(-s * r)) / (s * r);
        total += 2.0 * h * u[i].abs().powf(r) * tail;
    }
    total
}

fn phi(t: f64, r: f64) -> f64 {
    t.abs().powf(r - 1.0) * t.signum()
}

/// B(u, v): the first variation of [u]^r/r tested against v, so that
/// B(u, u) = [u]^r.
fn oracle_bilinear(u: &[f64], v: &[f64], a: f64, b: f64, s: f64, r: f64) -> f64 {
    let n = u.len();
    let h = (b - a) / n as f64;
    let mut total = 0.0;
    for i in 0..n {
        let xi = node(a, h, i);
        for j in 0..n {
            if i != j {
                let xj = node(a, h, j);
                let w = h * h / (xi - xj).abs().powf(1.0 + s * r);
                total += w * phi(u[i] - u[j], r) * (v[i] - v[j]);
            }
        }
        let tail = ((b - xi).powf(-s * r) + (xi - a).powf(-s * r)) / (s * r);
        total += 2.0 * h * tail * phi(u[i], r) * v[i];
    }
    total
}

#[test]
fn criterion_01_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for n in [3usize, 5, 8, 11, 14, 16] {
        let grid = build_grid(-1.0, 1.0, n).unwrap();
        for (s, r) in [(0.3, 1.5), (0.5, 2.0), (0.7, 3.0)] {
            let kernel = build_kernel(&grid, s, r).unwrap();
            for _ in 0..20 {
                let u = random_field(n, &mut rng);
                let v = random_field(n, &mut rng);
                let sem = seminorm_pow(&u, &kernel).unwrap();
                let sem_oracle = oracle_seminorm(u.values(), -1.0, 1.0, s, r);
                let bil = bilinear_form(&u, &v, &kernel).unwrap();
                let bil_oracle = oracle_bilinear(u.values(), v.values(), -1.0, 1.0, s, r);
                worst = worst
                    .max((sem - sem_oracle).abs() / sem_oracle.abs())
                    .max((bil - bil_oracle).abs() / bil_oracle.abs().max(1e-300));
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        1,
        "oracle equivalence",
        worst <= C1_ORACLE_TOL && elapsed <= C1_MAX_SECONDS,
        &format!("worst relative error {worst:.3e} (tol {C1_ORACLE_TOL:.0e}), {elapsed:.2}s"),
    );
}

#[test]
fn criterion_02_linear_cross_check() {
    let start = Instant::now();
    let (n, s, q) = (256usize, 0.5, 2.0);
    let grid = build_grid(-1.0, 1.0, n).unwrap();
    let kernel = build_kernel(&grid, s, q).unwrap();

    // dense pencil assembled from the defining weights: the quadratic form
    // is u^T A u with A_ii = 2(sum_j w_ij + e_i), A_ij = -2 w_ij, and the
    // mass matrix is h I, so the eigenvalues are those of A / h
    let h = grid.h;
    let mut a_mat = nalgebra::DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let xi = node(-1.0, h, i);
        let mut diag = 0.0;
        for j in 0..n {
            if i == j {
                continue;
            }
            let w = h * h / (xi - node(-1.0, h, j)).abs().powf(1.0 + s * q);
            a_mat[(i, j)] = -2.0 * w;
            diag += w;
        }
        let tail = ((1.0 - xi).powf(-s * q) + (xi + 1.0).powf(-s * q)) / (s * q);
        a_mat[(i, i)] = 2.0 * (diag + h * tail);
    }
    let mut eigs: Vec<f64> = (a_mat / h).symmetric_eigenvalues().iter().copied().collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());

    let cfg = SolveConfig::default();
    let lam1 = solve_lambda1_q(&kernel, &grid, q, &cfg).unwrap().lambda;
    let lam2 = solve_lambda2_sym(&kernel, &grid, q, &cfg).unwrap().lambda;
    let err1 = (lam1 - eigs[0]).abs() / eigs[0];
    let err2 = (lam2 - eigs[1]).abs() / eigs[1];
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        2,
        "linear cross-check",
        err1 <= C2_EIG_TOL && err2 <= C2_EIG_TOL && elapsed <= C2_MAX_SECONDS,
        &format!(
            "lambda1 {lam1:.9e} vs dense {:.9e} (rel {err1:.3e}), \
             lambda2 {lam2:.9e} vs dense {:.9e} (rel {err2:.3e}), \
             tol {C2_EIG_TOL:.0e}, {elapsed:.2}s",
            eigs[0], eigs[1]
        ),
    );
}

#[test]
fn criterion_03_gradient_check() {
    let n = 24usize;
    let grid = build_grid(-1.0, 1.0, n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for r in [1.5, 2.0, 3.0] {
        let kernel = build_kernel(&grid, 0.5, r).unwrap();
        for _ in 0..50 {
            let u = random_field(n, &mut rng);
            let v = random_field(n, &mut rng);
            let g = fracpq::forms::apply_frac_laplacian(&u, &kernel).unwrap();
            let analytic = g.dot(&v);
            let eps = 1e-6;
            let mut up = u.clone();
            up.axpy(eps, &v);
            let mut um = u.clone();
            um.axpy(-eps, &v);
            let numeric = (seminorm_pow(&up, &kernel).unwrap()
                - seminorm_pow(&um, &kernel).unwrap())
                / (2.0 * eps * r);
            worst = worst.max((analytic - numeric).abs() / numeric.abs().max(1e-12));
        }
    }
    verdict(
        3,
        "gradient check",
        worst <= C3_GRAD_TOL,
        &format!("worst relative error {worst:.3e} (tol {C3_GRAD_TOL:.0e})"),
    );
}

#[test]
fn criterion_04_nonexistence_below_first_eigenvalue() {
    let n = 48usize;
    let grid = build_grid(-1.0, 1.0, n).unwrap();
    let cfg = SolveConfig::default();

    // coercive side: fixed-lambda minimizers must be trivial
    let coercive = SpectralParams::new(0.7, 0.4, 3.0, 2.0);
    let kp = build_kernel(&grid, 0.7, 3.0).unwrap();
    let kq = build_kernel(&grid, 0.4, 2.0).unwrap();
    let lam1 = solve_lambda1_q(&kq, &grid, 2.0, &cfg).unwrap().lambda;
    let mut worst_mass: f64 = 0.0;
    for frac in [0.5, 0.9, 1.0] {
        let params = coercive.with_lambda(frac * lam1);
        let pair = solve_fixed_lambda_coercive(&params, &grid, &kp, &kq, &cfg).unwrap();
        worst_mass = worst_mass.max(lq_mass(&pair.u, &grid, 2.0).unwrap());
    }

    // nehari side: the manifold must be empty (infeasible lambda)
    let nehari = SpectralParams::new(0.4, 0.7, 2.0, 3.0);
    let np = build_kernel(&grid, 0.4, 2.0).unwrap();
    let nq = build_kernel(&grid, 0.7, 3.0).unwrap();
    let nlam1 = solve_lambda1_q(&nq, &grid, 3.0, &cfg).unwrap().lambda;
    let mut all_infeasible = true;
    for frac in [0.5, 0.9, 1.0] {
        let params = nehari.with_lambda(frac * nlam1);
        match solve_nehari(&params, &grid, &np, &nq, &cfg) {
            Err(FracError::InfeasibleLambda { .. }) => {}
            other => {
                all_infeasible = false;
                println!("  unexpected nehari outcome at {frac} lambda1: {other:?}");
            }
        }
    }
    verdict(
        4,
        "nonexistence below the first eigenvalue",
        worst_mass <= C4_MASS_TOL && all_infeasible,
        &format!(
            "worst coercive mass {worst_mass:.3e} (tol {C4_MASS_TOL:.0e}), \
             nehari all infeasible = {all_infeasible}"
        ),
    );
}

#[test]
fn criterion_05_constant_sign_first_branch() {
    let n = 48usize;
    let grid = build_grid(-1.0, 1.0, n).unwrap();
    let cfg = SolveConfig::default();
    let coercive = [
        (0.7, 0.4, 3.0, 2.0),
        (0.8, 0.3, 2.5, 2.0),
        (0.6, 0.2, 3.5, 2.5),
        (0.9, 0.5, 4.0, 3.0),
        (0.5, 0.1, 3.0, 2.0),
    ];
    let nehari = [
        (0.4, 0.7, 2.0, 3.0),
        (0.3, 0.8, 2.0, 2.5),
        (0.2, 0.6, 2.5, 3.5),
        (0.5, 0.9, 2.0, 4.0),
        (0.1, 0.5, 2.0, 3.0),
    ];
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut all_converged = true;
    for (is_coercive, tuples) in [(true, coercive), (false, nehari)] {
        for (s1, s2, p, q) in tuples {
            let kp = build_kernel(&grid, s1, p).unwrap();
            let kq = build_kernel(&grid, s2, q).unwrap();
            let lam1 = solve_lambda1_q(&kq, &grid, q, &cfg).unwrap().lambda;
            let params = SpectralParams::new(s1, s2, p, q).with_lambda(2.0 * lam1);
            let pair = if is_coercive {
                solve_fixed_lambda_coercive(&params, &grid, &kp, &kq, &cfg).unwrap()
            } else {
                solve_nehari(&params, &grid, &kp, &kq, &cfg).unwrap()
            };
            all_converged &= pair.converged && !pair.trivial;
            let vals = pair.u.values();
            let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let sup = pair.u.norm_inf();
            // sign-normalized violation: negative product means a sign change
            worst = worst.max(-(lo * hi) / (sup * sup));
        }
    }
    verdict(
        5,
        "constant sign of first-branch eigenfunctions",
        all_converged && worst <= C5_SIGN_TOL,
        &format!(
            "all converged = {all_converged}, worst normalized sign violation \
             {worst:.3e} (tol {C5_SIGN_TOL:.0e})"
        ),
    );
}

#[test]
fn criterion_06_nehari_membership_and_scale_invariance() {
    let n = 48usize;
    let grid = build_grid(-1.0, 1.0, n).unwrap();
    let kp = build_kernel(&grid, 0.4, 2.0).unwrap();
    let kq = build_kernel(&grid, 0.7, 3.0).unwrap();
    let cfg = SolveConfig::default();
    let lam1 = solve_lambda1_q(&kq, &grid, 3.0, &cfg).unwrap().lambda;
    let params = SpectralParams::new(0.4, 0.7, 2.0, 3.0).with_lambda(2.0 * lam1);
    let lambda = 2.0 * lam1;

    // a feasible smooth direction: the q-Rayleigh minimizer
    let dir = solve_lambda1_q(&kq, &grid, 3.0, &cfg).unwrap().u;
    let (_, w) = nehari_project(&dir, &params, &grid, &kp, &kq).unwrap();
    let sp = seminorm_pow(&w, &kp).unwrap();
    let sq = seminorm_pow(&w, &kq).unwrap();
    let mass = lq_mass(&w, &grid, 3.0).unwrap();
    let membership = (sp + sq - lambda * mass).abs() / (sp + sq + lambda * mass);

    let (_, w_scaled) = nehari_project(&dir.scaled(17.5), &params, &grid, &kp, &kq).unwrap();
    let mut diff = w.clone();
    diff.axpy(-1.0, &w_scaled);
    let scale_err = diff.norm_inf() / w.norm_inf();
    verdict(
        6,
        "nehari membership and projection scale invariance",
        membership <= C6_MEMBERSHIP_TOL && scale_err <= C6_SCALE_TOL,
        &format!(
            "membership defect {membership:.3e} (tol {C6_MEMBERSHIP_TOL:.0e}), \
             scale invariance {scale_err:.3e} (tol {C6_SCALE_TOL:.0e})"
        ),
    );
}

#[test]
fn criterion_07_bifurcation_from_zero() {
    let start = Instant::now();
    let n = 256usize;
    let grid = build_grid(-1.0, 1.0, n).unwrap();
    let params = SpectralParams::new(0.7, 0.4, 3.0, 2.0);
    let kp = build_kernel(&grid, 0.7, 3.0).unwrap();
    let kq = build_kernel(&grid, 0.4, 2.0).unwrap();
    let cfg = SolveConfig::default();
    let rhos = geometric_rho_grid(1e-1, 1e-4, 4).unwrap();
    let branch = trace_branch_zero(&params, &rhos, &grid, &kp, &kq, &cfg).unwrap();
    let lam1 = solve_lambda1_q(&kq, &grid, 2.0, &cfg).unwrap().lambda;

    let all_converged = branch.iter().all(|pt| pt.converged);
    let decreasing = branch.windows(2).all(|w| w[1].lambda < w[0].lambda);
    let final_gap = branch.last().unwrap().lambda - lam1;
    let decay = branch.first().unwrap().seminorm_p / branch.last().unwrap().seminorm_p;
    let fit = fit_rate(&branch, lam1).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        7,
        "bifurcation from zero",
        all_converged
            && decreasing
            && final_gap <= C7_GAP_FRACTION * lam1
            && decay >= C7_DECAY_FACTOR
            && fit.exponent >= C7_RATE_FLOOR
            && elapsed <= C7_MAX_SECONDS,
        &format!(
            "converged = {all_converged}, lambda decreasing = {decreasing}, \
             final gap {final_gap:.3e} (limit {:.3e}), seminorm decay {decay:.1}x \
             (floor {C7_DECAY_FACTOR}), rate exponent {:.4} (floor {C7_RATE_FLOOR:.2}, \
             r^2 {:.6}), {elapsed:.1}s",
            C7_GAP_FRACTION * lam1,
            fit.exponent,
            fit.r_squared
        ),
    );
}

#[test]
fn criterion_08_bifurcation_from_infinity() {
    let start = Instant::now();
    let n = 256usize;
    let grid = build_grid(-1.0, 1.0, n).unwrap();
    let params = SpectralParams::new(0.4, 0.7, 2.0, 3.0);
    let kp = build_kernel(&grid, 0.4, 2.0).unwrap();
    let kq = build_kernel(&grid, 0.7, 3.0).unwrap();
    let cfg = SolveConfig::default();
    let rhos = geometric_rho_grid(1e-1, 1e-4, 4).unwrap();
    let branch = trace_branch_infinity(&params, &rhos, &grid, &kp, &kq, &cfg).unwrap();
    let lam1 = solve_lambda1_q(&kq, &grid, 3.0, &cfg).unwrap().lambda;

    let all_converged = branch.iter().all(|pt| pt.converged);
    let gaps: Vec<f64> = branch.iter().map(|pt| pt.lambda - lam1).collect();
    let shrinking = gaps.windows(2).all(|w| w[1] < w[0]) && gaps.iter().all(|g| *g > 0.0);
    // recovered solution norm grows toward the bifurcation point: compare
    // the smallest-rho end of the grid against the largest-rho end
    let growth = branch.last().unwrap().norm_s2q / branch.first().unwrap().norm_s2q;
    let fit = fit_rate(&branch, lam1).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        8,
        "bifurcation from infinity",
        all_converged
            && shrinking
            && growth >= C8_GROWTH_FACTOR
            && fit.exponent >= C8_RATE_FLOOR
            && elapsed <= C8_MAX_SECONDS,
        &format!(
            "converged = {all_converged}, gap shrinking = {shrinking} \
             (first {:.3e}, last {:.3e}), norm growth {growth:.4}x \
             (floor {C8_GROWTH_FACTOR}), rate exponent {:.4} \
             (floor {C8_RATE_FLOOR:.2}, r^2 {:.6}), {elapsed:.1}s",
            gaps.first().unwrap(),
            gaps.last().unwrap(),
            fit.exponent,
            fit.r_squared
        ),
    );
}

#[test]
fn criterion_09_first_eigenvalue_identity() {
    let n = 48usize;
    let grid = build_grid(-1.0, 1.0, n).unwrap();
    let cfg = SolveConfig::default();

    // p > q: the p-term vanishes faster than the q-term as the amplitude
    // c = 1/t shrinks, so G(c e1) -> lambda1 at t = 1e3
    let coercive = SpectralParams::new(0.7, 0.4, 3.0, 2.0);
    let kp = build_kernel(&grid, 0.7, 3.0).unwrap();
    let kq = build_kernel(&grid, 0.4, 2.0).unwrap();
    let lam1 = solve_lambda1_q(&kq, &grid, 2.0, &cfg).unwrap().lambda;
    let e1 = solve_lambda1_q(&kq, &grid, 2.0, &cfg).unwrap().u;
    let g_co = rayleigh_g(&e1.scaled(1e-3), &coercive, &grid, &kp, &kq).unwrap();
    let approach_co = (g_co - lam1).abs() / lam1;

    // p < q: approach at large amplitude (t = 1e-3), divergence at small
    let nehari = SpectralParams::new(0.4, 0.7, 2.0, 3.0);
    let np = build_kernel(&grid, 0.4, 2.0).unwrap();
    let nq = build_kernel(&grid, 0.7, 3.0).unwrap();
    let nlam1 = solve_lambda1_q(&nq, &grid, 3.0, &cfg).unwrap().lambda;
    let ne1 = solve_lambda1_q(&nq, &grid, 3.0, &cfg).unwrap().u;
    let g_ne_large = rayleigh_g(&ne1.scaled(1e3), &nehari, &grid, &np, &nq).unwrap();
    let approach_ne = (g_ne_large - nlam1).abs() / nlam1;
    let g_ne_small = rayleigh_g(&ne1.scaled(1e-3), &nehari, &grid, &np, &nq).unwrap();
    let diverged = g_ne_small >= C9_DIVERGENCE_FACTOR * nlam1;

    verdict(
        9,
        "first-eigenvalue identity at the sampled extremes",
        approach_co <= C9_APPROACH_TOL && approach_ne <= C9_APPROACH_TOL && diverged,
        &format!(
            "coercive approach {approach_co:.3e}, nehari approach {approach_ne:.3e} \
             (tol {C9_APPROACH_TOL:.0e}), nehari divergence {:.3e} vs floor {:.3e}",
            g_ne_small,
            C9_DIVERGENCE_FACTOR * nlam1
        ),
    );
}

#[test]
fn criterion_10_vector_inequalities() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut violations = 0usize;
    let mut worst: f64 = f64::INFINITY;
    for _ in 0..C10_SAMPLES {
        let x1 = rng.random_range(-10.0..10.0);
        let x2 = rng.random_range(-10.0..10.0);
        for r in [1.5, 3.0, 4.0] {
            let margin = vector_inequality_margin(x1, x2, r);
            worst = worst.min(margin);
            if margin < 0.0 {
                violations += 1;
            }
        }
    }
    verdict(
        10,
        "vector inequalities with the shipped constants",
        violations == 0,
        &format!("{violations} violations over {C10_SAMPLES} samples, smallest margin {worst:.3e}"),
    );
}

/// Relative L^q separation of mass-normalized absolute profiles.
fn separation(u: &Field, v: &Field, grid: &fracpq::Grid, q: f64) -> f64 {
    let un = u.abs();
    let vn = v.abs();
    let um = lq_mass(&un, grid, q).unwrap().powf(1.0 / q);
    let vm = lq_mass(&vn, grid, q).unwrap().powf(1.0 / q);
    let mut diff = un.scaled(1.0 / um);
    diff.axpy(-1.0 / vm, &vn);
    lq_mass(&diff, grid, q).unwrap().powf(1.0 / q)
}

#[test]
fn criterion_11_multiplicity_probe() {
    let n = 48usize;
    let grid = build_grid(-1.0, 1.0, n).unwrap();
    let kp = build_kernel(&grid, 0.7, 3.0).unwrap();
    let kq = build_kernel(&grid, 0.4, 2.0).unwrap();
    let cfg = SolveConfig::default();
    let lam1 = solve_lambda1_q(&kq, &grid, 2.0, &cfg).unwrap().lambda;
    let lam2 = solve_lambda2_sym(&kq, &grid, 2.0, &cfg).unwrap().lambda;

    let base = SpectralParams::new(0.7, 0.4, 3.0, 2.0);
    let between = base.with_lambda(0.5 * (lam1 + lam2));
    let pairs_between = multiplicity_probe(&between, &grid, &kp, &kq, &cfg).unwrap();

    let above = base.with_lambda(1.5 * lam2);
    let pairs_above = multiplicity_probe(&above, &grid, &kp, &kq, &cfg).unwrap();

    // solutions come back with their negated partners: count +/- pairs
    let one_pair = pairs_between.len() == 2;
    let two_pairs = pairs_above.len() >= 4;
    let sep = if two_pairs {
        separation(&pairs_above[0].u, &pairs_above[2].u, &grid, 2.0)
    } else {
        0.0
    };
    verdict(
        11,
        "multiplicity probe at k = 2",
        one_pair && two_pairs && sep >= C11_SEPARATION,
        &format!(
            "between levels: {} solutions (expected 2), above: {} (expected >= 4), \
             profile separation {sep:.3e} (floor {C11_SEPARATION:.0e})",
            pairs_between.len(),
            pairs_above.len()
        ),
    );
}

#[test]
fn criterion_12_determinism_and_runtime() {
    let start = Instant::now();
    let suite = SuiteConfig::default();
    let first = run_all(&suite);
    let second = run_all(&suite);
    // wall-clock timings are the only permitted difference between runs
    let bytes_a = serialize_report(&report_with_masked_runtimes(&first)).unwrap();
    let bytes_b = serialize_report(&report_with_masked_runtimes(&second)).unwrap();
    let identical = bytes_a == bytes_b;
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        12,
        "determinism and suite runtime",
        identical && elapsed <= C12_MAX_SECONDS,
        &format!(
            "byte-identical reports = {identical} ({} bytes), two full suite runs \
             in {elapsed:.1}s (limit {C12_MAX_SECONDS}s)",
            bytes_a.len()
        ),
    );
}
