//! Modified Lippmann-Schwinger solvers for the generalized eigenfunctions
//! phi(x, k) of sqrt(-Laplace) + V at energy |k|:
//!   phi = phi0 - integral of g(|x-y|) V(y) phi(y) dy,  phi0 = e^(i k.x),
//! where the plus eigenfunction uses the minus boundary kernel and vice
//! versa. Two discretizations: matrix-free Born iteration on a BallGrid,
//! and a dense Nystrom solve on the azimuthally reduced (r, mu) tensor grid
//! for radial potentials (k along the polar axis).

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grids::{azimuthal_reduce, BallGrid, RadialGrid};
use crate::kernels::{g_boundary, Sign};
use crate::operators::{apply_g_boundary, boundary_ball_integral, GridFunction};
use crate::{Cplx, Real};

/// Potential with a certified power decay bound |v(r)| <= C <r>^(-sigma).
#[derive(Clone)]
pub struct Potential {
    profile: Arc<dyn Fn(Real) -> Real + Send + Sync>,
    pub c: Real,
    pub sigma: Real,
}

impl std::fmt::Debug for Potential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Potential")
            .field("c", &self.c)
            .field("sigma", &self.sigma)
            .finish()
    }
}

impl Potential {
    /// The decay exponent must exceed 2 for solver admission.
    pub fn new<F>(profile: F, c: Real, sigma: Real) -> Result<Self>
    where
        F: Fn(Real) -> Real + Send + Sync + 'static,
    {
        if !(sigma > 2.0) {
            return Err(Error::Domain(format!(
                "potential decay exponent must exceed 2, got {sigma}"
            )));
        }
        if !(c >= 0.0) || !c.is_finite() {
            return Err(Error::Domain(format!("decay constant must be finite and >= 0, got {c}")));
        }
        Ok(Potential {
            profile: Arc::new(profile),
            c,
            sigma,
        })
    }

    /// The model potential v(r) = c <r>^(-sigma).
    pub fn power(c: Real, sigma: Real) -> Result<Self> {
        Self::new(move |r| c * (1.0 + r * r).powf(-sigma / 2.0), c, sigma)
    }

    pub fn eval(&self, r: Real) -> Real {
        (self.profile)(r)
    }

    /// Checks the decay bound on sampled radii up to `r_max`.
    pub fn certify(&self, r_max: Real) -> Result<()> {
        for i in 0..=200 {
            let r = r_max * i as Real / 200.0;
            let bound = self.c * (1.0 + r * r).powf(-self.sigma / 2.0);
            let v = self.eval(r);
            if !v.is_finite() || v.abs() > bound * (1.0 + 1e-9) {
                return Err(Error::Contract(format!(
                    "|v({r})| = {} exceeds the certified bound {bound}",
                    v.abs()
                )));
            }
        }
        Ok(())
    }
}

/// Discretization a solution lives on.
#[derive(Debug, Clone)]
pub enum SolutionGrid {
    Ball(BallGrid),
    Radial(RadialGrid),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverMode {
    Born,
    RadialNystrom,
}

/// A generalized eigenfunction sampled on its grid.
#[derive(Debug, Clone)]
pub struct ScatteredSolution {
    pub k: [Real; 3],
    pub lambda: Real,
    pub sign: Sign,
    pub grid: SolutionGrid,
    /// phi at the nodes (radial mode: index i = ir * n_mu + imu).
    pub phi: Vec<Cplx>,
    /// psi = phi - phi0.
    pub psi: Vec<Cplx>,
    pub residual: Real,
    pub iterations: usize,
    pub mode: SolverMode,
}

impl ScatteredSolution {
    /// Node positions; radial-mode nodes are the phi = 0 representatives
    /// in the frame with k along the polar axis.
    pub fn node_positions(&self) -> Vec<[Real; 3]> {
        match &self.grid {
            SolutionGrid::Ball(g) => g.nodes.clone(),
            SolutionGrid::Radial(g) => {
                let mut out = Vec::with_capacity(g.r_nodes.len() * g.mu_nodes.len());
                for &r in &g.r_nodes {
                    for &mu in &g.mu_nodes {
                        let s = (1.0 - mu * mu).max(0.0).sqrt();
                        out.push([r * s, 0.0, r * mu]);
                    }
                }
                out
            }
        }
    }
}

/// Born iteration controls.
#[derive(Debug, Clone)]
pub struct BornOptions {
    /// Relative sup-norm update threshold.
    pub tol: Real,
    pub max_iter: usize,
    /// Relaxation factor in (0, 1]; 1 is the plain fixed-point map.
    pub relax: Real,
    /// Initial iterate; defaults to phi0.
    pub initial: Option<Vec<Cplx>>,
}

impl Default for BornOptions {
    fn default() -> Self {
        BornOptions {
            tol: 1e-8,
            max_iter: 60,
            relax: 1.0,
            initial: None,
        }
    }
}

fn norm3(x: [Real; 3]) -> Real {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

fn phi0_at(k: [Real; 3], x: [Real; 3]) -> Cplx {
    Cplx::new(0.0, k[0] * x[0] + k[1] * x[1] + k[2] * x[2]).exp()
}

fn sup_diff(a: &[Cplx], b: &[Cplx]) -> Real {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, Real::max)
}

/// Fixed-point iteration phi_{n+1} = phi0 - G^(flip)(V phi_n) on a ball
/// grid. The eigenfunction sign selects the opposite kernel sign.
pub fn born_iterate(
    k: [Real; 3],
    sign: Sign,
    v: &Potential,
    grid: &BallGrid,
    opts: &BornOptions,
) -> Result<ScatteredSolution> {
    let lambda = norm3(k);
    if !(lambda > 0.0) {
        return Err(Error::Domain("wave vector must be nonzero".into()));
    }
    if !(opts.relax > 0.0 && opts.relax <= 1.0) {
        return Err(Error::Config(format!("relaxation must lie in (0, 1], got {}", opts.relax)));
    }
    v.certify(grid.r_dom)?;
    let kernel_sign = sign.flip();
    let phi0: Vec<Cplx> = grid.nodes.iter().map(|&x| phi0_at(k, x)).collect();
    let vv: Vec<Real> = grid.nodes.iter().map(|&x| v.eval(norm3(x))).collect();
    let mut phi = match &opts.initial {
        Some(init) => {
            if init.len() != phi0.len() {
                return Err(Error::GridMismatch(format!(
                    "initial iterate has {} values, grid has {} nodes",
                    init.len(),
                    phi0.len()
                )));
            }
            init.clone()
        }
        None => phi0.clone(),
    };
    let mut history = Vec::new();
    for iter in 1..=opts.max_iter {
        let h = GridFunction {
            values: vv.iter().zip(&phi).map(|(&v, &p)| p * v).collect(),
        };
        let gh = apply_g_boundary(grid, lambda, kernel_sign, &h)?;
        let next: Vec<Cplx> = phi0
            .iter()
            .zip(&gh.values)
            .zip(&phi)
            .map(|((&p0, &g), &p)| p + opts.relax * (p0 - g - p))
            .collect();
        let scale = next.iter().map(|z| z.norm()).fold(1.0, Real::max);
        let update = sup_diff(&next, &phi) / scale;
        history.push(update);
        phi = next;
        if update < opts.tol {
            let psi: Vec<Cplx> = phi.iter().zip(&phi0).map(|(p, p0)| p - p0).collect();
            let mut sol = ScatteredSolution {
                k,
                lambda,
                sign,
                grid: SolutionGrid::Ball(grid.clone()),
                phi,
                psi,
                residual: 0.0,
                iterations: iter,
                mode: SolverMode::Born,
            };
            sol.residual = ls_residual(&sol, v)?;
            return Ok(sol);
        }
    }
    Err(Error::Divergence {
        iterations: opts.max_iter,
        residual: *history.last().unwrap_or(&Real::NAN),
        history,
    })
}

/// Sup-norm of phi - phi0 + G^(flip)(V phi) over the interior half-ball
/// |x| <= R_dom/2 (the truncation boundary pollutes the outer shells).
pub fn ls_residual(sol: &ScatteredSolution, v: &Potential) -> Result<Real> {
    match &sol.grid {
        SolutionGrid::Ball(grid) => {
            let h = GridFunction {
                values: grid
                    .nodes
                    .iter()
                    .zip(&sol.phi)
                    .map(|(&x, &p)| p * v.eval(norm3(x)))
                    .collect(),
            };
            let gh = apply_g_boundary(grid, sol.lambda, sol.sign.flip(), &h)?;
            let mut worst: Real = 0.0;
            for ((&x, &p), &g) in grid.nodes.iter().zip(&sol.phi).zip(&gh.values) {
                if norm3(x) <= grid.r_dom / 2.0 {
                    worst = worst.max((p - phi0_at(sol.k, x) + g).norm());
                }
            }
            Ok(worst)
        }
        SolutionGrid::Radial(grid) => {
            let (matrix, phi0) = assemble_radial(grid, sol.lambda, sol.sign.flip(), v)?;
            let n = phi0.len();
            let mut worst: Real = 0.0;
            for i in 0..n {
                let ir = i / grid.mu_nodes.len();
                if grid.r_nodes[ir] > grid.r_dom / 2.0 {
                    continue;
                }
                let mut acc = sol.phi[i] - phi0[i];
                for j in 0..n {
                    acc += matrix[(i, j)] * sol.phi[j];
                }
                worst = worst.max(acc.norm());
            }
            Ok(worst)
        }
    }
}

/// Assembles the reduced operator C with (G V phi)_i = sum_j C_ij phi_j in
/// subtracted form, plus the incident wave phi0 = e^(i lambda r mu).
/// `kernel_sign` is the sign of the boundary kernel itself.
fn assemble_radial(
    grid: &RadialGrid,
    lambda: Real,
    kernel_sign: Sign,
    v: &Potential,
) -> Result<(DMatrix<Cplx>, Vec<Cplx>)> {
    let n_r = grid.r_nodes.len();
    let n_mu = grid.mu_nodes.len();
    let n = n_r * n_mu;
    let vv: Vec<Real> = grid.r_nodes.iter().map(|&r| v.eval(r)).collect();
    let rows: Vec<Vec<Cplx>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (ri, mi) = (grid.r_nodes[i / n_mu], grid.mu_nodes[i % n_mu]);
            let b = boundary_ball_integral(grid.r_dom, lambda, kernel_sign, ri)
                .expect("reference integral");
            let mut row = vec![Cplx::new(0.0, 0.0); n];
            let mut s = Cplx::new(0.0, 0.0);
            for j in 0..n {
                if j == i {
                    continue;
                }
                let (rj, mj) = (grid.r_nodes[j / n_mu], grid.mu_nodes[j % n_mu]);
                let kij = azimuthal_reduce(
                    |d| g_boundary(lambda, kernel_sign, d).expect("positive distance").total,
                    ri,
                    mi,
                    rj,
                    mj,
                    grid.n_phi,
                )
                .expect("distinct tensor nodes");
                let w = grid.r_weights[j / n_mu] * grid.mu_weights[j % n_mu];
                row[j] = kij * w * vv[j / n_mu];
                s += kij * w;
            }
            row[i] = (b - s) * vv[i / n_mu];
            row
        })
        .collect();
    let mut matrix = DMatrix::from_element(n, n, Cplx::new(0.0, 0.0));
    for (i, row) in rows.iter().enumerate() {
        for (j, &val) in row.iter().enumerate() {
            matrix[(i, j)] = val;
        }
    }
    let phi0: Vec<Cplx> = (0..n)
        .map(|i| {
            Cplx::new(0.0, lambda * grid.r_nodes[i / n_mu] * grid.mu_nodes[i % n_mu]).exp()
        })
        .collect();
    Ok((matrix, phi0))
}

/// Dense Nystrom solve of the reduced equation (I + C) phi = phi0 for a
/// radial potential, with k = lambda along the polar axis.
pub fn nystrom_solve_radial(
    lambda: Real,
    sign: Sign,
    v: &Potential,
    grid: &RadialGrid,
    tol: Real,
) -> Result<ScatteredSolution> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    v.certify(grid.r_dom)?;
    let kernel_sign = sign.flip();
    let (c, phi0) = assemble_radial(grid, lambda, kernel_sign, v)?;
    let n = phi0.len();
    let system = DMatrix::identity(n, n) + &c;
    let rhs = DVector::from_vec(phi0.clone());
    let lu = system.clone().lu();
    let phi = lu.solve(&rhs).ok_or_else(|| {
        Error::NearSingular("reduced Lippmann-Schwinger system is singular".into())
    })?;
    // reject silently ill-conditioned solves
    let lin_res = (&system * &phi - &rhs).norm() / rhs.norm();
    if !lin_res.is_finite() || lin_res > tol.max(1e-10) {
        return Err(Error::NearSingular(format!(
            "linear residual {lin_res:.3e} exceeds tolerance"
        )));
    }
    let phi: Vec<Cplx> = phi.iter().cloned().collect();
    let psi: Vec<Cplx> = phi.iter().zip(&phi0).map(|(p, p0)| p - p0).collect();
    let mut sol = ScatteredSolution {
        k: [0.0, 0.0, lambda],
        lambda,
        sign,
        grid: SolutionGrid::Radial(grid.clone()),
        phi,
        psi,
        residual: 0.0,
        iterations: 1,
        mode: SolverMode::RadialNystrom,
    };
    sol.residual = ls_residual(&sol, v)?;
    Ok(sol)
}

/// Evaluates phi at an arbitrary point through the integral representation
/// phi(x) = phi0(x) - G(V phi)(x), with the self-consistent subtracted
/// quadrature solved for the single unknown phi(x).
pub fn eval_at(sol: &ScatteredSolution, v: &Potential, x: [Real; 3]) -> Result<Cplx> {
    let t = norm3(x);
    let kernel_sign = sol.sign.flip();
    let (r_dom, s_sum, t_sum) = match &sol.grid {
        SolutionGrid::Ball(grid) => {
            let mut s = Cplx::new(0.0, 0.0);
            let mut tt = Cplx::new(0.0, 0.0);
            for ((&y, &w), &p) in grid.nodes.iter().zip(&grid.weights).zip(&sol.phi) {
                let d = ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2) + (x[2] - y[2]).powi(2))
                    .sqrt();
                if d <= 1e-12 {
                    return Ok(p);
                }
                let g = g_boundary(sol.lambda, kernel_sign, d)?.total;
                s += g * w;
                tt += g * w * (v.eval(norm3(y)) * p);
            }
            (grid.r_dom, s, tt)
        }
        SolutionGrid::Radial(grid) => {
            if (t - grid.r_dom).abs() <= 1e-9 * grid.r_dom {
                return Err(Error::NearSingular(
                    "evaluation on the truncation sphere is ill-conditioned".into(),
                ));
            }
            let mu_x = if t > 0.0 { (x[2] / t).clamp(-1.0, 1.0) } else { 0.0 };
            let n_mu = grid.mu_nodes.len();
            let mut s = Cplx::new(0.0, 0.0);
            let mut tt = Cplx::new(0.0, 0.0);
            for (i, &p) in sol.phi.iter().enumerate() {
                let (rj, mj) = (grid.r_nodes[i / n_mu], grid.mu_nodes[i % n_mu]);
                let kij = azimuthal_reduce(
                    |d| {
                        g_boundary(sol.lambda, kernel_sign, d)
                            .expect("positive distance")
                            .total
                    },
                    t.max(1e-14),
                    mu_x,
                    rj,
                    mj,
                    grid.n_phi,
                )?;
                let w = grid.r_weights[i / n_mu] * grid.mu_weights[i % n_mu];
                s += kij * w;
                tt += kij * w * (v.eval(rj) * p);
            }
            (grid.r_dom, s, tt)
        }
    };
    let b = boundary_ball_integral(r_dom, sol.lambda, kernel_sign, t)?;
    let vx = v.eval(t);
    let phi0 = phi0_at(sol.k, x);
    // phi(x) (1 + v(x)(B - S)) = phi0 - (T - v(x) phi(x) S) rearranged:
    let denom = Cplx::new(1.0, 0.0) + (b - s_sum) * vx;
    if denom.norm() < 1e-10 {
        return Err(Error::NearSingular("self-consistent evaluation degenerate".into()));
    }
    Ok((phi0 - t_sum) / denom)
}
