//! Newton solver for the complex Monge-Ampère equation
//!
//! ```text
//! (ω_ψ + dd^c u)^n = e^{(n+1)u + F} ω_ψ^n
//! ```
//!
//! restricted to rotationally invariant potentials on the unit ball of `ℂⁿ`.
//! With `ρ = |z|²` and `Φ = ψ + u`, the determinant of the complex Hessian of
//! `Φ` reduces to `(Φ′)^{n-1}(Φ′ + ρΦ″)`, so the problem becomes one
//! two-point boundary value problem in `ρ ∈ [0, 1 − ε]`.
//!
//! Discretisation: derivatives of the full potential `Φ` come from 3-point
//! Lagrange stencils on a grid graded toward `ρ = 1`, central inside and
//! one-sided at `ρ = 0`. The model determinant uses the same stencils on the
//! `ψ` samples, so `u ≡ 0` is an exact discrete root when `F ≡ 0`. The
//! outermost node carries a Dirichlet value; at `ρ = 0` the equation itself
//! degenerates to `n log Φ′ = …`, which is the regularity condition.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::numfmt::fmt12;

/// Grading of [`graded_grid`]: nodes are uniform in `ξ = αρ + ln((1+δ)/(1+δ−ρ))`.
const GRID_ALPHA: f64 = 3.0;
const GRID_DELTA: f64 = 0.01;
/// Step halvings tried by the line search before giving up.
const MAX_HALVINGS: usize = 40;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MaError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("line search could not keep the metric positive (iteration {iteration})")]
    PositivityLoss { iteration: usize },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    MaxIterExceeded { iterations: usize, residual: f64 },
    #[error("line search stalled at residual {residual:e} (iteration {iteration})")]
    Stalled { iteration: usize, residual: f64 },
    #[error("Newton system is singular at row {0}")]
    SingularJacobian(usize),
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}

impl MaError {
    pub fn code(&self) -> &'static str {
        match self {
            MaError::InvalidProblem(_) => "InvalidProblem",
            MaError::PositivityLoss { .. } => "PositivityLoss",
            MaError::MaxIterExceeded { .. } => "MaxIterExceeded",
            MaError::Stalled { .. } => "Stalled",
            MaError::SingularJacobian(_) => "SingularJacobian",
            MaError::DegenerateFit(_) => "DegenerateFit",
        }
    }

    /// Failures of the iteration itself, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        !matches!(self, MaError::InvalidProblem(_) | MaError::DegenerateFit(_))
    }
}

/// `(ψ′)^{n-1}(ψ′ + ρψ″)`.
pub fn radial_ma_determinant(psi_prime: f64, psi_second: f64, rho: f64, n: u32) -> f64 {
    psi_prime.powi(n as i32 - 1) * (psi_prime + rho * psi_second)
}

/// Three-point Lagrange weights for the first and second derivative at `x0`.
#[derive(Debug, Clone, Copy)]
struct Stencil {
    first: usize,
    d1: [f64; 3],
    d2: [f64; 3],
}

impl Stencil {
    fn new(nodes: &[f64], first: usize, x0: f64) -> Self {
        let x = [nodes[first], nodes[first + 1], nodes[first + 2]];
        let mut d1 = [0.0; 3];
        let mut d2 = [0.0; 3];
        for j in 0..3 {
            let (a, b) = ((j + 1) % 3, (j + 2) % 3);
            let den = (x[j] - x[a]) * (x[j] - x[b]);
            d1[j] = ((x0 - x[a]) + (x0 - x[b])) / den;
            d2[j] = 2.0 / den;
        }
        Self { first, d1, d2 }
    }

    fn apply(&self, v: &[f64]) -> (f64, f64) {
        let s = &v[self.first..self.first + 3];
        (
            self.d1[0] * s[0] + self.d1[1] * s[1] + self.d1[2] * s[2],
            self.d2[0] * s[0] + self.d2[1] * s[1] + self.d2[2] * s[2],
        )
    }
}

/// One stencil per node: forward at 0, backward at N, central elsewhere.
fn stencils(grid: &[f64]) -> Vec<Stencil> {
    let last = grid.len() - 1;
    (0..=last)
        .map(|i| {
            let first = i.saturating_sub(1).min(last - 2);
            Stencil::new(grid, first, grid[i])
        })
        .collect()
}

/// `ρ_N = 1 − ε` nodes, uniform in `ξ = 3ρ + ln(1.01/(1.01 − ρ))`: roughly
/// uniform near the origin and geometric toward the boundary.
pub fn graded_grid(intervals: usize, eps: f64) -> Result<Vec<f64>, MaError> {
    if intervals < 2 {
        return Err(MaError::InvalidProblem(format!(
            "need at least 2 intervals, got {intervals}"
        )));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(MaError::InvalidProblem(format!("need 0 < eps < 1, got {eps}")));
    }
    let xi = |r: f64| GRID_ALPHA * r + ((1.0 + GRID_DELTA) / (1.0 + GRID_DELTA - r)).ln();
    let outer = 1.0 - eps;
    let xi_max = xi(outer);
    let mut grid = Vec::with_capacity(intervals + 1);
    grid.push(0.0);
    for i in 1..intervals {
        let target = xi_max * i as f64 / intervals as f64;
        let (mut lo, mut hi) = (0.0, outer);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if xi(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        grid.push(0.5 * (lo + hi));
    }
    grid.push(outer);
    Ok(grid)
}

/// Discretised radial problem on `0 = ρ₀ < … < ρ_N = 1 − ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProblem {
    n: u32,
    grid: Vec<f64>,
    psi: Vec<f64>,
    source: Vec<f64>,
    outer_value: f64,
}

impl RadialProblem {
    /// Checks the grid and that the model metric is positive at every node,
    /// measured with the solver's own stencils.
    pub fn new(
        n: u32,
        grid: Vec<f64>,
        psi: Vec<f64>,
        source: Vec<f64>,
        outer_value: f64,
    ) -> Result<Self, MaError> {
        let bad = |m: String| Err(MaError::InvalidProblem(m));
        if n == 0 {
            return bad("complex dimension must be at least 1".into());
        }
        if grid.len() < 3 {
            return bad(format!("need at least 3 nodes, got {}", grid.len()));
        }
        if psi.len() != grid.len() || source.len() != grid.len() {
            return bad(format!(
                "sample counts differ: grid {}, psi {}, F {}",
                grid.len(),
                psi.len(),
                source.len()
            ));
        }
        if grid[0] != 0.0 {
            return bad(format!("grid must start at rho = 0, got {}", grid[0]));
        }
        if let Some(i) = grid.windows(2).position(|w| !(w[1] > w[0])) {
            return bad(format!("grid is not strictly increasing at node {}", i + 1));
        }
        let eps = 1.0 - grid[grid.len() - 1];
        if !(eps > 0.0 && eps < 1.0) {
            return bad(format!("outer node must lie in (0, 1), got {}", 1.0 - eps));
        }
        if psi.iter().chain(&source).any(|v| !v.is_finite()) || !outer_value.is_finite() {
            return bad("samples must be finite".into());
        }
        let problem = Self {
            n,
            grid,
            psi,
            source,
            outer_value,
        };
        let st = stencils(&problem.grid);
        if let Some(i) = first_nonpositive(&st, &problem.grid, &problem.psi) {
            return bad(format!("model metric is not positive at node {i}"));
        }
        Ok(problem)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    pub fn source(&self) -> &[f64] {
        &self.source
    }

    pub fn outer_value(&self) -> f64 {
        self.outer_value
    }

    pub fn eps(&self) -> f64 {
        1.0 - self.grid[self.grid.len() - 1]
    }

    /// Number of intervals `N`.
    pub fn intervals(&self) -> usize {
        self.grid.len() - 1
    }

    /// Same grid and model with a different source and Dirichlet value.
    pub fn with_data(&self, source: Vec<f64>, outer_value: f64) -> Result<Self, MaError> {
        Self::new(self.n, self.grid.clone(), self.psi.clone(), source, outer_value)
    }
}

fn first_nonpositive(st: &[Stencil], grid: &[f64], phi: &[f64]) -> Option<usize> {
    st.iter().enumerate().position(|(i, s)| {
        let (d1, d2) = s.apply(phi);
        !(d1 > 0.0 && d1 + grid[i] * d2 > 0.0)
    })
}

/// `ψ = ρ − log(1 − ρ)`, flat plus the complete hyperbolic potential.
pub fn hyperbolic_model(rho: f64) -> f64 {
    rho - (-rho).ln_1p()
}

/// Source of the hyperbolic test problem, normalised so `F(1) = 0`.
pub fn hyperbolic_source(n: u32, rho: f64) -> f64 {
    let n = n as f64;
    (n + 1.0) * (rho - 1.0) - (n - 1.0) * (2.0 - rho).ln() - (rho * rho - 2.0 * rho + 2.0).ln()
}

fn check_size(n: u32, eps: f64, intervals: usize) -> Result<(), MaError> {
    if n == 0 {
        return Err(MaError::InvalidProblem("complex dimension must be at least 1".into()));
    }
    if !(eps > 0.0 && eps < 0.5) {
        return Err(MaError::InvalidProblem(format!("need 0 < eps < 1/2, got {eps}")));
    }
    if intervals < 16 {
        return Err(MaError::InvalidProblem(format!("need N >= 16, got {intervals}")));
    }
    Ok(())
}

/// Ball problem whose exact solution is `u = 1 − ρ`.
pub fn hyperbolic_test_problem(n: u32, eps: f64, intervals: usize) -> Result<RadialProblem, MaError> {
    check_size(n, eps, intervals)?;
    let grid = graded_grid(intervals, eps)?;
    let psi = grid.iter().map(|&r| hyperbolic_model(r)).collect();
    let source = grid.iter().map(|&r| hyperbolic_source(n, r)).collect();
    RadialProblem::new(n, grid, psi, source, eps)
}

/// Manufactured solution `u = (1 − ρ)^r / r` on the hyperbolic model.
///
/// The amplitude `1/r` keeps `Φ′ = 1 + 1/(1−ρ) − (1−ρ)^{r−1}` away from zero
/// at the origin for every `r ≥ 1`.
pub fn manufactured_solution(order: f64, rho: f64) -> f64 {
    (1.0 - rho).powf(order) / order
}

/// Hyperbolic model with `F` back-computed from [`manufactured_solution`].
pub fn manufactured_problem(
    n: u32,
    eps: f64,
    intervals: usize,
    order: f64,
) -> Result<RadialProblem, MaError> {
    check_size(n, eps, intervals)?;
    if !(order >= 1.0) || !order.is_finite() {
        return Err(MaError::InvalidProblem(format!("need order >= 1, got {order}")));
    }
    let grid = graded_grid(intervals, eps)?;
    let nf = n as f64;
    let source = grid
        .iter()
        .map(|&r| {
            let x = 1.0 - r;
            let (p1, p2) = (1.0 + 1.0 / x, 1.0 / (x * x));
            let u = x.powf(order) / order;
            let u1 = -x.powf(order - 1.0);
            let u2 = (order - 1.0) * x.powf(order - 2.0);
            (nf - 1.0) * ((p1 + u1) / p1).ln() + ((p1 + u1 + r * (p2 + u2)) / (p1 + r * p2)).ln()
                - (nf + 1.0) * u
        })
        .collect();
    let psi = grid.iter().map(|&r| hyperbolic_model(r)).collect();
    RadialProblem::new(n, grid, psi, source, eps.powf(order) / order)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    pub u: Vec<f64>,
    pub residual_sup: f64,
    /// Residual evaluations, including the one that met the tolerance.
    pub iterations: usize,
    pub converged: bool,
    /// Sup-norm residual at each iteration.
    pub residual_history: Vec<f64>,
    /// Sup-norm of each accepted (damped) Newton step.
    pub step_norms: Vec<f64>,
}

/// Per-node state of one iteration, kept for the CSV trace.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub u: Vec<f64>,
    /// Residual per node; zero at the Dirichlet node.
    pub residual: Vec<f64>,
}

struct Discretisation<'a> {
    problem: &'a RadialProblem,
    stencils: Vec<Stencil>,
    log_det_model: Vec<f64>,
}

impl<'a> Discretisation<'a> {
    fn new(problem: &'a RadialProblem) -> Self {
        let stencils = stencils(&problem.grid);
        let n = problem.n as f64;
        let log_det_model = stencils
            .iter()
            .zip(&problem.grid)
            .map(|(s, &r)| {
                let (d1, d2) = s.apply(&problem.psi);
                (n - 1.0) * d1.ln() + (d1 + r * d2).ln()
            })
            .collect();
        Self {
            problem,
            stencils,
            log_det_model,
        }
    }

    fn potential(&self, u: &[f64]) -> Vec<f64> {
        self.problem.psi.iter().zip(u).map(|(p, v)| p + v).collect()
    }

    fn positive(&self, u: &[f64]) -> bool {
        first_nonpositive(&self.stencils, &self.problem.grid, &self.potential(u)).is_none()
    }

    /// Residual at the unknown nodes `0..N`; assumes positivity.
    fn residual(&self, u: &[f64]) -> Vec<f64> {
        let phi = self.potential(u);
        let n = self.problem.n as f64;
        (0..self.problem.intervals())
            .map(|i| {
                let (d1, d2) = self.stencils[i].apply(&phi);
                let r = self.problem.grid[i];
                (n - 1.0) * d1.ln() + (d1 + r * d2).ln()
                    - self.log_det_model[i]
                    - (n + 1.0) * u[i]
                    - self.problem.source[i]
            })
            .collect()
    }

    /// Newton step `J δ = −R`. The Jacobian is tridiagonal except for the
    /// `(0, 2)` entry of the one-sided row, removed with row 1 first.
    fn newton_step(&self, u: &[f64], res: &[f64]) -> Result<Vec<f64>, MaError> {
        let m = self.problem.intervals();
        let phi = self.potential(u);
        let n = self.problem.n as f64;
        // Row i as (first column, three coefficients).
        let rows: Vec<(usize, [f64; 3])> = (0..m)
            .map(|i| {
                let s = &self.stencils[i];
                let (d1, d2) = s.apply(&phi);
                let r = self.problem.grid[i];
                let (a, b) = (d1, d1 + r * d2);
                let mut c = [0.0; 3];
                for j in 0..3 {
                    c[j] = (n - 1.0) * s.d1[j] / a + (s.d1[j] + r * s.d2[j]) / b;
                }
                c[i - s.first] -= n + 1.0;
                (s.first, c)
            })
            .collect();

        let mut lower = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut upper = vec![0.0; m];
        let mut rhs: Vec<f64> = res.iter().map(|v| -v).collect();
        for (i, &(first, c)) in rows.iter().enumerate() {
            for (j, &coef) in c.iter().enumerate() {
                let col = first + j;
                if col >= m {
                    continue; // Dirichlet node
                }
                match col as isize - i as isize {
                    -1 => lower[i] = coef,
                    0 => diag[i] = coef,
                    1 => upper[i] = coef,
                    _ => {}
                }
            }
        }
        // Eliminate the (0, 2) entry using row 1 = (lower[1], diag[1], upper[1]).
        let extra = rows[0].1[2];
        if m > 2 && extra != 0.0 {
            if upper[1] == 0.0 {
                return Err(MaError::SingularJacobian(1));
            }
            let f = extra / upper[1];
            diag[0] -= f * lower[1];
            upper[0] -= f * diag[1];
            rhs[0] -= f * rhs[1];
        }
        // Thomas algorithm.
        for i in 1..m {
            if diag[i - 1] == 0.0 {
                return Err(MaError::SingularJacobian(i - 1));
            }
            let f = lower[i] / diag[i - 1];
            diag[i] -= f * upper[i - 1];
            rhs[i] -= f * rhs[i - 1];
        }
        if diag[m - 1] == 0.0 {
            return Err(MaError::SingularJacobian(m - 1));
        }
        let mut delta = vec![0.0; m];
        delta[m - 1] = rhs[m - 1] / diag[m - 1];
        for i in (0..m - 1).rev() {
            delta[i] = (rhs[i] - upper[i] * delta[i + 1]) / diag[i];
        }
        if delta.iter().any(|d| !d.is_finite()) {
            return Err(MaError::SingularJacobian(0));
        }
        Ok(delta)
    }
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Damped Newton iteration on the discrete equation
/// `log det Φ − log det ψ − (n+1)u − F = 0`, starting from `u = 0` with the
/// Dirichlet value at `ρ_N`.
///
/// Each step is halved until the new iterate keeps `Φ′ > 0` and
/// `Φ′ + ρΦ″ > 0` at every node and the residual decreases.
pub fn newton_solve(
    problem: &RadialProblem,
    tol: f64,
    max_iter: usize,
) -> Result<RadialSolution, MaError> {
    solve_impl(problem, tol, max_iter, None)
}

/// [`newton_solve`] that also records every iterate.
pub fn newton_solve_traced(
    problem: &RadialProblem,
    tol: f64,
    max_iter: usize,
) -> Result<(RadialSolution, Vec<IterationRecord>), MaError> {
    let mut trace = Vec::new();
    let sol = solve_impl(problem, tol, max_iter, Some(&mut trace))?;
    Ok((sol, trace))
}

fn solve_impl(
    problem: &RadialProblem,
    tol: f64,
    max_iter: usize,
    mut trace: Option<&mut Vec<IterationRecord>>,
) -> Result<RadialSolution, MaError> {
    if !(tol > 0.0) {
        return Err(MaError::InvalidProblem(format!("need tol > 0, got {tol}")));
    }
    if max_iter == 0 {
        return Err(MaError::InvalidProblem("need max_iter >= 1".into()));
    }
    let disc = Discretisation::new(problem);
    let m = problem.intervals();
    let mut u = vec![0.0; m + 1];
    u[m] = problem.outer_value;
    if !disc.positive(&u) {
        return Err(MaError::PositivityLoss { iteration: 0 });
    }

    let mut res = disc.residual(&u);
    let mut res_sup = sup(&res);
    let mut history = Vec::new();
    let mut steps = Vec::new();
    for iteration in 1..=max_iter {
        history.push(res_sup);
        if let Some(t) = trace.as_deref_mut() {
            let mut full = res.clone();
            full.push(0.0);
            t.push(IterationRecord {
                iteration,
                u: u.clone(),
                residual: full,
            });
        }
        if res_sup <= tol {
            return Ok(RadialSolution {
                u,
                residual_sup: res_sup,
                iterations: iteration,
                converged: true,
                residual_history: history,
                step_norms: steps,
            });
        }
        if iteration == max_iter {
            break;
        }
        let delta = disc.newton_step(&u, &res)?;
        let mut scale = 1.0;
        let mut positive_seen = false;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let mut trial = u.clone();
            for (t, d) in trial.iter_mut().zip(&delta) {
                *t += scale * d;
            }
            if disc.positive(&trial) {
                positive_seen = true;
                let trial_res = disc.residual(&trial);
                let trial_sup = sup(&trial_res);
                if trial_sup < res_sup {
                    accepted = Some((trial, trial_res, trial_sup));
                    break;
                }
            }
            scale *= 0.5;
        }
        match accepted {
            Some((next, next_res, next_sup)) => {
                steps.push(scale * sup(&delta));
                u = next;
                res = next_res;
                res_sup = next_sup;
            }
            None if positive_seen => {
                return Err(MaError::Stalled {
                    iteration,
                    residual: res_sup,
                })
            }
            None => return Err(MaError::PositivityLoss { iteration }),
        }
    }
    Err(MaError::MaxIterExceeded {
        iterations: max_iter,
        residual: res_sup,
    })
}

/// Sup-norm of the discrete residual of `u`; `None` if `ψ + u` is not a
/// positive potential on the grid.
pub fn residual_sup(problem: &RadialProblem, u: &[f64]) -> Option<f64> {
    let disc = Discretisation::new(problem);
    (u.len() == problem.grid.len() && disc.positive(u)).then(|| sup(&disc.residual(u)))
}

/// Slope of `log|u|` against `log(1 − ρ)` over the outermost quarter of the
/// grid: the order to which `u` vanishes at the boundary.
pub fn asymptotic_order_fit(solution: &RadialSolution, problem: &RadialProblem) -> Result<f64, MaError> {
    if solution.u.len() != problem.grid.len() {
        return Err(MaError::InvalidProblem("solution does not match the grid".into()));
    }
    if solution.u.iter().all(|&v| v == 0.0) {
        return Err(MaError::DegenerateFit("u vanishes identically".into()));
    }
    let m = problem.intervals();
    let (xs, ys): (Vec<f64>, Vec<f64>) = (3 * m / 4..=m)
        .filter(|&i| solution.u[i] != 0.0)
        .map(|i| ((1.0 - problem.grid[i]).ln(), solution.u[i].abs().ln()))
        .unzip();
    if xs.len() < 2 {
        return Err(MaError::DegenerateFit(
            "fewer than two nonzero samples in the outer quarter".into(),
        ));
    }
    crate::calabi::least_squares_slope(&xs, &ys)
        .ok_or_else(|| MaError::DegenerateFit("outer samples share one abscissa".into()))
}

pub const TRACE_CSV_HEADER: &str = "iter,rho,psi,F,u,residual";

/// One row per node and iteration.
pub fn trace_csv(problem: &RadialProblem, trace: &[IterationRecord]) -> String {
    let mut out = String::from(TRACE_CSV_HEADER);
    out.push('\n');
    for rec in trace {
        for i in 0..problem.grid.len() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                rec.iteration,
                fmt12(problem.grid[i]),
                fmt12(problem.psi[i]),
                fmt12(problem.source[i]),
                fmt12(rec.u[i]),
                fmt12(rec.residual[i]),
            );
        }
    }
    out
}

pub fn write_trace_csv(
    path: &Path,
    problem: &RadialProblem,
    trace: &[IterationRecord],
) -> io::Result<()> {
    std::fs::write(path, trace_csv(problem, trace))
}
