//! Monotone finite-difference solver for `λ v + H(x, Dv) = 0` on the
//! period-2 torus, used as an independent check of the interpolated `u_λ`.
//!
//! The numerical Hamiltonian is Lax-Friedrichs,
//! `Ĥ(x, p⁻, p⁺) = H(x, (p⁻+p⁺)/2) − (θ/2)(p⁺ − p⁻)`, and the discrete
//! equation is reached by the damped Jacobi iteration
//! `v ← v − τ(λv + Ĥ(x, D⁻v, D⁺v))`. With `θ` at least the Lipschitz
//! constant of `H` in `p` and `τ ≤ h/(2θ + λh)` the update is monotone and
//! a sup-norm contraction with factor `1 − τλ`.

use crate::error::{Error, Result};
use crate::game::Discount;
use crate::hamiltonian::{u_interp_f64, u_pair, FloatHamiltonian, Hamiltonian};
use crate::numfield::ExactQuad;

/// Truncation used for the Hamiltonian and the exact reference.
pub const PDE_TRUNCATION: usize = 16;

/// Uniform periodic grid on `[−1, 1)` with `cells` nodes `x_k = −1 + k·h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorusGrid {
    cells: usize,
}

impl TorusGrid {
    /// `cells` must be even (so `x = 0` and `x = ±1` are nodes) and at least 8.
    pub fn new(cells: usize) -> Result<TorusGrid> {
        if cells < 8 || !cells.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "cell count must be even and >= 8, got {cells}"
            )));
        }
        Ok(TorusGrid { cells })
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn spacing(&self) -> f64 {
        2.0 / self.cells as f64
    }

    pub fn node(&self, k: usize) -> f64 {
        -1.0 + k as f64 * self.spacing()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.cells).map(|k| self.node(k))
    }

    /// Index of the node at `−x_k`.
    pub fn mirror(&self, k: usize) -> usize {
        (self.cells - k) % self.cells
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Field(pub Vec<f64>);

impl Field {
    pub fn zeros(grid: &TorusGrid) -> Field {
        Field(vec![0.0; grid.cells()])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn sup_distance(&self, other: &Field) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn lf_flux<H: FloatHamiltonian + ?Sized>(
    ham: &H,
    x: f64,
    p_minus: f64,
    p_plus: f64,
    theta: f64,
) -> f64 {
    ham.eval(x, 0.5 * (p_minus + p_plus)) - 0.5 * theta * (p_plus - p_minus)
}

/// Largest step keeping the update monotone.
pub fn max_stable_step(grid: &TorusGrid, lambda: f64, theta: f64) -> f64 {
    let h = grid.spacing();
    h / (2.0 * theta + lambda * h)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverParams {
    pub lambda: f64,
    pub theta: f64,
    pub tau: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl SolverParams {
    /// `θ = 1`, `τ` at the monotonicity bound, `tol = 1e-6`.
    pub fn new(lambda: f64, grid: &TorusGrid) -> SolverParams {
        SolverParams {
            lambda,
            theta: 1.0,
            tau: max_stable_step(grid, lambda, 1.0),
            tol: 1e-6,
            max_iter: 10_000_000,
        }
    }

    fn validate(&self, grid: &TorusGrid) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("lambda = {}", self.lambda)));
        }
        if self.theta.is_nan() || self.theta < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "theta = {} < 1",
                self.theta
            )));
        }
        let bound = max_stable_step(grid, self.lambda, self.theta);
        if !(self.tau > 0.0 && self.tau <= bound) {
            return Err(Error::InvalidParameter(format!(
                "tau = {} outside (0, {bound}]",
                self.tau
            )));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidParameter("tol must be positive".into()));
        }
        Ok(())
    }
}

/// One Jacobi sweep: the new field depends on the old field only.
pub fn lf_update<H: FloatHamiltonian + ?Sized>(
    ham: &H,
    grid: &TorusGrid,
    params: &SolverParams,
    v: &Field,
) -> Field {
    let m = grid.cells();
    let h = grid.spacing();
    let values = v.values();
    let next = (0..m)
        .map(|k| {
            let here = values[k];
            let left = values[(k + m - 1) % m];
            let right = values[(k + 1) % m];
            let p_minus = (here - left) / h;
            let p_plus = (right - here) / h;
            let flux = lf_flux(ham, grid.node(k), p_minus, p_plus, params.theta);
            here - params.tau * (params.lambda * here + flux)
        })
        .collect();
    Field(next)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteSolution {
    pub field: Field,
    pub iterations: usize,
    /// Sup-norm of the final update.
    pub last_update: f64,
}

/// Iterates [`lf_update`] from `v ≡ 0` until the sup-norm update is at most
/// `tol·τ·λ`.
pub fn solve_discounted<H: FloatHamiltonian + ?Sized>(
    ham: &H,
    grid: &TorusGrid,
    params: &SolverParams,
) -> Result<DiscreteSolution> {
    params.validate(grid)?;
    let stop = params.tol * params.tau * params.lambda;
    let mut v = Field::zeros(grid);
    let mut last_update = f64::INFINITY;
    for iteration in 1..=params.max_iter {
        let next = lf_update(ham, grid, params, &v);
        last_update = next.sup_distance(&v);
        if !last_update.is_finite() {
            return Err(Error::NonFinite("discounted PDE iteration"));
        }
        v = next;
        if last_update <= stop {
            return Ok(DiscreteSolution {
                field: v,
                iterations: iteration,
                last_update,
            });
        }
    }
    Err(Error::MaxIterations {
        iterations: params.max_iter,
        last_update,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NodeGap {
    pub x: f64,
    pub numeric: f64,
    pub exact: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub sup_error: f64,
    pub rows: Vec<NodeGap>,
    pub iterations: usize,
}

/// Solves the discounted equation on an `cells`-node grid and compares it
/// with the exact interpolant `u_λ` (both at truncation [`PDE_TRUNCATION`]).
pub fn compare_exact(lambda: &ExactQuad, cells: usize) -> Result<Comparison> {
    if !(*lambda > ExactQuad::from_ratio(1, 100)) {
        return Err(Error::InvalidParameter(format!(
            "lambda = {lambda}, the comparison needs lambda > 1/100"
        )));
    }
    let disc = Discount::new(lambda.clone())?;
    let grid = TorusGrid::new(cells)?;
    let ham = Hamiltonian::new(PDE_TRUNCATION)?;
    let u = u_pair(&disc, PDE_TRUNCATION)?;
    let (u_plus, u_minus) = (u.u_plus.to_f64(), u.u_minus.to_f64());

    let params = SolverParams::new(disc.to_f64(), &grid);
    let sol = solve_discounted(&ham, &grid, &params)?;
    let rows: Vec<NodeGap> = grid
        .nodes()
        .zip(sol.field.values())
        .map(|(x, &numeric)| {
            let exact = u_interp_f64(x, u_plus, u_minus);
            NodeGap {
                x,
                numeric,
                exact,
                gap: numeric - exact,
            }
        })
        .collect();
    let sup_error = rows.iter().map(|r| r.gap.abs()).fold(0.0, f64::max);
    Ok(Comparison {
        sup_error,
        rows,
        iterations: sol.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Constant(f64);

    impl FloatHamiltonian for Constant {
        fn eval(&self, _x: f64, _p: f64) -> f64 {
            self.0
        }
    }

    #[test]
    fn grid_validation() {
        assert!(TorusGrid::new(6).is_err());
        assert!(TorusGrid::new(9).is_err());
        let g = TorusGrid::new(8).unwrap();
        assert_eq!(g.node(0), -1.0);
        assert_eq!(g.node(4), 0.0);
        assert_eq!(g.mirror(0), 0);
        assert_eq!(g.mirror(1), 7);
        assert_eq!(g.node(g.mirror(3)), -g.node(3));
    }

    #[test]
    fn flux_without_dissipation() {
        let ham = Hamiltonian::new(6).unwrap();
        for (x, p) in [(0.3, 0.7), (-0.9, -1.5), (1.0, 2.5)] {
            assert_eq!(lf_flux(&ham, x, p, p, 1.0), ham.h_f64(x, p));
        }
        assert_eq!(
            lf_flux(&ham, 0.25, 0.0, 2.0, 1.0),
            ham.h_f64(0.25, 1.0) - 1.0
        );
    }

    #[test]
    fn flux_is_monotone() {
        let ham = Hamiltonian::new(8).unwrap();
        let d = 1e-3;
        for x in [-0.75, 0.0, 0.4, 1.0] {
            for pm in [-3.0, -1.0, 0.0, 0.5, 2.0] {
                for pp in [-2.5, -0.2, 0.3, 1.9, 4.0] {
                    let base = lf_flux(&ham, x, pm, pp, 1.0);
                    assert!(lf_flux(&ham, x, pm, pp + d, 1.0) <= base + 1e-12);
                    assert!(lf_flux(&ham, x, pm + d, pp, 1.0) >= base - 1e-12);
                }
            }
        }
    }

    #[test]
    fn constant_hamiltonian_fixed_point() {
        let grid = TorusGrid::new(16).unwrap();
        let params = SolverParams::new(0.5, &grid);
        let sol = solve_discounted(&Constant(0.3), &grid, &params).unwrap();
        for v in sol.field.values() {
            assert!((v - (-0.6)).abs() < 1e-5);
        }
    }

    #[test]
    fn parameter_validation() {
        let grid = TorusGrid::new(16).unwrap();
        let mut params = SolverParams::new(0.5, &grid);
        params.tau *= 1.01;
        assert!(solve_discounted(&Constant(0.0), &grid, &params).is_err());
        let mut params = SolverParams::new(0.5, &grid);
        params.theta = 0.5;
        assert!(solve_discounted(&Constant(0.0), &grid, &params).is_err());
        let mut params = SolverParams::new(0.5, &grid);
        params.max_iter = 3;
        assert!(matches!(
            solve_discounted(&Constant(1.0), &grid, &params),
            Err(Error::MaxIterations { iterations: 3, .. })
        ));
    }

    #[test]
    fn small_grid_comparison_is_finite() {
        let cmp = compare_exact(&ExactQuad::from_ratio(1, 2), 8).unwrap();
        assert!(cmp.sup_error.is_finite());
        assert_eq!(cmp.rows.len(), 8);
        assert!(compare_exact(&ExactQuad::from_ratio(1, 100), 8).is_err());
        assert!(compare_exact(&ExactQuad::from_ratio(1, 2), 10 + 1).is_err());
    }
}
