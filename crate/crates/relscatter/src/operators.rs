//! Discretized integral operators: the Riesz potential G0, the oscillatory
//! part K_lambda^(+/-), the remainder M_lambda and their sum, together with
//! pointwise decay envelopes and the weighted convolution oracle
//! Phi(x) = integral of |x-y|^(-beta) <y>^(-gamma).
//!
//! Applications are matrix-free O(N^2) kernel sweeps, parallel over output
//! nodes only; each output is a sequential sum in node order, so results are
//! reproducible across thread counts. Self-cells use the equal-volume-ball
//! correction weights from the grids module.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grids::BallGrid;
use crate::kernels::{g_boundary, m_lambda, Sign};
use crate::quad::integrate;
use crate::{Cplx, Real};

const TWO_PI2: Real = 2.0 * std::f64::consts::PI * std::f64::consts::PI;
const PI: Real = std::f64::consts::PI;

/// Complex-valued function sampled on the nodes of a [`BallGrid`].
#[derive(Debug, Clone)]
pub struct GridFunction {
    pub values: Vec<Cplx>,
}

impl GridFunction {
    /// Samples `f` at the grid nodes.
    pub fn from_fn<F: Fn([Real; 3]) -> Cplx>(grid: &BallGrid, f: F) -> Result<Self> {
        let values: Vec<Cplx> = grid.nodes.iter().map(|&x| f(x)).collect();
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Domain("grid function has non-finite entries".into()));
        }
        Ok(GridFunction { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sup_norm(&self) -> Real {
        self.values.iter().map(|v| v.norm()).fold(0.0, Real::max)
    }

    /// Weighted L2 norm with the grid's quadrature weights.
    pub fn l2_norm(&self, grid: &BallGrid) -> Result<Real> {
        check_match(grid, self)?;
        let s: Real = self
            .values
            .iter()
            .zip(&grid.weights)
            .map(|(v, w)| v.norm_sqr() * w)
            .sum();
        Ok(s.sqrt())
    }

    pub fn conj(&self) -> Self {
        GridFunction {
            values: self.values.iter().map(Complex::conj).collect(),
        }
    }
}

fn check_match(grid: &BallGrid, u: &GridFunction) -> Result<()> {
    if grid.nodes.len() != u.values.len() {
        return Err(Error::GridMismatch(format!(
            "grid has {} nodes, function has {} values",
            grid.nodes.len(),
            u.values.len()
        )));
    }
    Ok(())
}

fn node_distance(a: [Real; 3], b: [Real; 3]) -> Real {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn node_norm(x: [Real; 3]) -> Real {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

/// Singularity-subtracted Nystrom sweep:
///   out_i = sum_{j != i} w_j k(d_ij) (u_j - u_i) + u_i B(|x_i|),
/// where B(t) is the exact integral of the kernel over the whole ball,
/// supplied per radius by `reference`. The subtracted integrand is one
/// order milder at the diagonal, so no cell correction is needed.
fn sweep_subtracted<K, B>(
    grid: &BallGrid,
    u: &GridFunction,
    kernel: K,
    reference: B,
) -> Result<GridFunction>
where
    K: Fn(Real) -> Cplx + Sync,
    B: Fn(Real) -> Result<Cplx>,
{
    check_match(grid, u)?;
    // The reference integral depends on the node radius only; memoize over
    // the distinct radial shells.
    let mut memo: std::collections::HashMap<u64, Cplx> = std::collections::HashMap::new();
    let mut b_vals = Vec::with_capacity(grid.nodes.len());
    for &x in &grid.nodes {
        let t = node_norm(x);
        let key = (t / grid.r_dom * 1e12).round() as u64;
        let b = match memo.get(&key) {
            Some(&b) => b,
            None => {
                let b = reference(t)?;
                memo.insert(key, b);
                b
            }
        };
        b_vals.push(b);
    }
    let values: Vec<Cplx> = grid
        .nodes
        .par_iter()
        .enumerate()
        .map(|(i, &xi)| {
            let ui = u.values[i];
            let mut acc = Cplx::new(0.0, 0.0);
            for (j, (&xj, &wj)) in grid.nodes.iter().zip(&grid.weights).enumerate() {
                if j == i {
                    continue;
                }
                acc += kernel(node_distance(xi, xj)) * wj * (u.values[j] - ui);
            }
            acc + b_vals[i] * ui
        })
        .collect();
    Ok(GridFunction { values })
}

/// Exact integral of (1/2 pi^2)|x-y|^(-2) over the ball |y| <= r_dom at
/// |x| = t.
fn riesz_ball_integral(r_dom: Real, t: Real) -> Real {
    let r = r_dom;
    if t <= 1e-12 * r {
        return 2.0 * r / PI;
    }
    // also valid outside the ball (t > r) with the absolute value
    (r * r - t * t) / (2.0 * PI * t) * ((r + t) / (r - t).abs()).ln() + r / PI
}

/// Adaptive integral of (lambda/2 pi) e^(s i lambda |x-y|)/|x-y| over the
/// ball, reduced by the closed-form angular factor.
fn k_ball_integral(r_dom: Real, lambda: Real, s: Real, t: Real) -> Result<Cplx> {
    let q = s * lambda;
    let radial = |r: Real| -> Cplx {
        if t <= 1e-12 * r_dom {
            // angular factor degenerates to 2 e^(i q r)/r
            return Cplx::new(0.0, q * r).exp() * (2.0 * lambda * r);
        }
        let hi = Cplx::new(0.0, q * (t + r)).exp();
        let lo = Cplx::new(0.0, q * (t - r).abs()).exp();
        // (lambda/2pi) * 2 pi r^2 * (hi - lo)/(i q t r)
        (hi - lo) * lambda * r / (Cplx::new(0.0, q * t))
    };
    let mut total = Cplx::new(0.0, 0.0);
    for pair in [[0.0, t.min(r_dom)], [t.min(r_dom), r_dom]] {
        if pair[1] > pair[0] {
            total += integrate(radial, pair[0], pair[1], 1e-12)?;
        }
    }
    Ok(total)
}

/// Adaptive integral of m_lambda(|x-y|) over the ball. The angular factor
/// uses the antiderivative of the auxiliary function f: integral of f over
/// [a, b] equals g(b) - g(a) + ln(b/a).
fn m_ball_integral(r_dom: Real, lambda: Real, t: Real) -> Result<Cplx> {
    use crate::specfun::aux_g;
    if t <= 1e-12 * r_dom {
        // 4 pi integral of r^2 m_lambda(r)
        let radial = |r: Real| 4.0 * PI * r * r * m_lambda(lambda, r).expect("r > 0");
        return Ok(Cplx::new(integrate(radial, 0.0, r_dom, 1e-12)?, 0.0));
    }
    let radial = |r: Real| -> Real {
        let hi = lambda * (t + r);
        let lo = lambda * (t - r).abs();
        // g(hi) - g(lo) + ln(hi/lo) stays finite as r -> t
        let bracket = aux_g(hi).expect("positive argument") - aux_g(lo).expect("positive argument")
            + (hi / lo).ln();
        -r * bracket / (PI * t)
    };
    let mut total = 0.0;
    for pair in [[0.0, t.min(r_dom)], [t.min(r_dom), r_dom]] {
        if pair[1] > pair[0] {
            total += integrate(radial, pair[0], pair[1], 1e-12)?;
        }
    }
    Ok(Cplx::new(total, 0.0))
}

/// Exact integral of the full boundary kernel g_lambda over the ball
/// |y| <= r_dom at |x| = t: the reference term of the subtracted sweeps,
/// shared with the radial Nystrom solver.
pub(crate) fn boundary_ball_integral(
    r_dom: Real,
    lambda: Real,
    sign: Sign,
    t: Real,
) -> Result<Cplx> {
    let s: Real = sign.signum();
    Ok(Cplx::new(riesz_ball_integral(r_dom, t), 0.0)
        + k_ball_integral(r_dom, lambda, s, t)?
        + m_ball_integral(r_dom, lambda, t)?)
}

/// Riesz potential (1/2 pi^2) integral of |x-y|^(-2) u(y).
pub fn apply_g0(grid: &BallGrid, u: &GridFunction) -> Result<GridFunction> {
    let r_dom = grid.r_dom;
    sweep_subtracted(
        grid,
        u,
        |d| Cplx::new(1.0 / (TWO_PI2 * d * d), 0.0),
        |t| Ok(Cplx::new(riesz_ball_integral(r_dom, t), 0.0)),
    )
}

/// Oscillatory part (lambda/2 pi) integral of e^(+/- i lambda |x-y|)/|x-y| u(y).
pub fn apply_k(grid: &BallGrid, lambda: Real, sign: Sign, u: &GridFunction) -> Result<GridFunction> {
    check_lambda(lambda)?;
    let s: Real = sign.signum();
    sweep_subtracted(
        grid,
        u,
        move |d| Cplx::new(0.0, s * lambda * d).exp() * (lambda / (2.0 * PI) / d),
        |t| k_ball_integral(grid.r_dom, lambda, s, t),
    )
}

/// Remainder part with kernel m_lambda.
pub fn apply_m(grid: &BallGrid, lambda: Real, u: &GridFunction) -> Result<GridFunction> {
    check_lambda(lambda)?;
    sweep_subtracted(
        grid,
        u,
        move |d| Cplx::new(m_lambda(lambda, d).expect("positive distance"), 0.0),
        |t| m_ball_integral(grid.r_dom, lambda, t),
    )
}

fn check_lambda(lambda: Real) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    Ok(())
}

/// Full boundary kernel sweep; pointwise equal to G0 + K + M up to roundoff.
pub fn apply_g_boundary(
    grid: &BallGrid,
    lambda: Real,
    sign: Sign,
    u: &GridFunction,
) -> Result<GridFunction> {
    check_lambda(lambda)?;
    let s: Real = sign.signum();
    sweep_subtracted(
        grid,
        u,
        move |d| g_boundary(lambda, sign, d).expect("positive distance").total,
        |t| {
            let b = Cplx::new(riesz_ball_integral(grid.r_dom, t), 0.0)
                + k_ball_integral(grid.r_dom, lambda, s, t)?
                + m_ball_integral(grid.r_dom, lambda, t)?;
            Ok(b)
        },
    )
}

/// Kernel sweep evaluated at an arbitrary point off the grid (no self cell).
pub fn apply_kernel_at<K: Fn(Real) -> Cplx>(
    grid: &BallGrid,
    u: &GridFunction,
    x: [Real; 3],
    kernel: K,
) -> Result<Cplx> {
    check_match(grid, u)?;
    let mut acc = Cplx::new(0.0, 0.0);
    for ((&y, &w), v) in grid.nodes.iter().zip(&grid.weights).zip(&u.values) {
        let d = node_distance(x, y);
        if d <= 1e-12 {
            return Err(Error::NearSingular(format!(
                "evaluation point {x:?} coincides with a grid node"
            )));
        }
        acc += kernel(d) * w * v;
    }
    Ok(acc)
}

/// Decay regime of a pointwise bound C <x>^(-e), optionally with a log factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Exponent depends on both parameters (gamma < n, or 1 < ell < 3).
    Power,
    /// Critical case with a log(1 + <x>) factor.
    PowerLog,
    /// Exponent saturates at the kernel's own decay.
    Saturated,
}

/// Pointwise decay envelope <x> |-> constant * <x>^(-exponent) [* log].
#[derive(Debug, Clone, Copy)]
pub struct Envelope {
    pub regime: Regime,
    pub exponent: Real,
    pub constant: Real,
}

impl Envelope {
    pub fn eval(&self, x_norm: Real) -> Real {
        let bracket = (1.0 + x_norm * x_norm).sqrt();
        let base = self.constant * bracket.powf(-self.exponent);
        match self.regime {
            Regime::PowerLog => base * (1.0 + bracket).ln(),
            _ => base,
        }
    }
}

/// Envelope of the convolution |x-y|^(-beta) against <y>^(-gamma) in
/// dimension n: exponent beta+gamma-n below criticality, log at gamma = n,
/// saturation at beta for gamma > n.
pub fn envelope_for(beta: Real, gamma: Real, n: u32) -> Result<Envelope> {
    let nf = n as Real;
    if !(beta > 0.0 && beta < nf) {
        return Err(Error::Domain(format!("beta must lie in (0, {n}), got {beta}")));
    }
    if !(beta + gamma > nf) {
        return Err(Error::Domain(format!(
            "beta + gamma must exceed {n}, got {}",
            beta + gamma
        )));
    }
    let env = if gamma < nf {
        Envelope {
            regime: Regime::Power,
            exponent: beta + gamma - nf,
            constant: 1.0,
        }
    } else if gamma == nf {
        Envelope {
            regime: Regime::PowerLog,
            exponent: beta,
            constant: 1.0,
        }
    } else {
        Envelope {
            regime: Regime::Saturated,
            exponent: beta,
            constant: 1.0,
        }
    };
    Ok(env)
}

/// Envelope of G0 applied to <y>^(-ell): the beta = 2, n = 3 case split.
pub fn envelope_g0(ell: Real) -> Result<Envelope> {
    if !(ell > 1.0) {
        return Err(Error::Domain(format!("ell must exceed 1, got {ell}")));
    }
    envelope_for(2.0, ell, 3)
}

/// Closed-form inner angular integral of |x-y|^(-beta) at radii t, r.
fn angular_factor(beta: Real, t: Real, r: Real) -> Real {
    debug_assert!(t > 0.0 && r > 0.0);
    let hi = t + r;
    let lo = (t - r).abs();
    if beta == 2.0 {
        (hi / lo).ln() / (t * r)
    } else {
        (lo.powf(2.0 - beta) - hi.powf(2.0 - beta)) / (t * r * (2.0 - beta))
    }
}

/// Adaptive-quadrature value of Phi(x) = integral over R^3 of
/// |x-y|^(-beta) <y>^(-gamma) dy, reduced to one radial integral.
pub fn phi_convolution(beta: Real, gamma: Real, x: [Real; 3]) -> Result<Real> {
    if !(beta > 0.0 && beta < 3.0) {
        return Err(Error::Domain(format!("beta must lie in (0, 3), got {beta}")));
    }
    if !(beta + gamma > 3.0) {
        return Err(Error::Domain(format!(
            "beta + gamma must exceed 3, got {}",
            beta + gamma
        )));
    }
    let t = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let tol = 1e-10;
    // Tail of the radial integrand is ~ 4 pi r^(2-beta-gamma).
    let p = beta + gamma - 3.0;
    let r_max = (4.0 * PI / (tol * p)).powf(1.0 / p).clamp(10.0 * (t + 1.0), 1e7);
    let radial = |r: Real| {
        let weight = (1.0 + r * r).powf(-gamma / 2.0);
        if t == 0.0 {
            4.0 * PI * r.powf(2.0 - beta) * weight
        } else {
            2.0 * PI * r * r * weight * angular_factor(beta, t, r)
        }
    };
    // Split at the kink r = t and near the origin.
    let mut cuts = vec![0.0];
    for c in [t / 2.0, t, 2.0 * t, 1.0] {
        if c > 0.0 && c < r_max {
            cuts.push(c);
        }
    }
    cuts.push(r_max);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let mut total = 0.0;
    for pair in cuts.windows(2) {
        total += integrate(radial, pair[0], pair[1], tol)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::build_ball_grid;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bracket_power(x: [Real; 3], ell: Real) -> Cplx {
        let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        Cplx::new((1.0 + r2).powf(-ell / 2.0), 0.0)
    }

    fn node_norm(x: [Real; 3]) -> Real {
        (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
    }

    #[test]
    fn g0_discrete_symmetry() {
        let grid = build_ball_grid(3.0, 8, 5).unwrap();
        let u = GridFunction::from_fn(&grid, |x| bracket_power(x, 4.0)).unwrap();
        let v = GridFunction::from_fn(&grid, |x| Cplx::new((-node_norm(x)).exp(), 0.2)).unwrap();
        let gu = apply_g0(&grid, &u).unwrap();
        let gv = apply_g0(&grid, &v).unwrap();
        let pair = |a: &GridFunction, b: &GridFunction| -> Cplx {
            a.values
                .iter()
                .zip(&b.values)
                .zip(&grid.weights)
                .map(|((x, y), w)| x.conj() * y * w)
                .sum()
        };
        let lhs = pair(&gu, &v);
        let rhs = pair(&u, &gv);
        assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm().max(1.0));
    }

    #[test]
    fn g0_unit_ball_far_field() {
        // u = 1 on the unit ball; at |x| = 20 the potential is the point
        // charge value (1/2 pi^2) (4 pi / 3) / |x|^2 = 2/(3 pi |x|^2).
        let grid = build_ball_grid(1.0, 12, 6).unwrap();
        let u = GridFunction::from_fn(&grid, |_| Cplx::new(1.0, 0.0)).unwrap();
        let v = apply_kernel_at(&grid, &u, [20.0, 0.0, 0.0], |d| {
            Cplx::new(1.0 / (TWO_PI2 * d * d), 0.0)
        })
        .unwrap();
        let expected = 2.0 / (3.0 * PI * 400.0);
        assert!((v.re - expected).abs() <= 0.02 * expected);
        assert!(v.im.abs() <= 1e-15);
    }

    #[test]
    fn g0_envelope_certification() {
        let grid = build_ball_grid(6.0, 20, 10).unwrap();
        for ell in [2.0, 3.0, 4.0] {
            let env = envelope_g0(ell).unwrap();
            let u = GridFunction::from_fn(&grid, |x| bracket_power(x, ell)).unwrap();
            let gu = apply_g0(&grid, &u).unwrap();
            let mut worst: Real = 0.0;
            for (x, v) in grid.nodes.iter().zip(&gu.values) {
                let r = node_norm(*x);
                if (1.0..=3.0).contains(&r) {
                    worst = worst.max(v.norm() / env.eval(r));
                }
            }
            assert!(worst <= 10.0, "ell = {ell}: ratio {worst}");
            assert!(worst > 0.0);
        }
    }

    #[test]
    fn g0_matches_adaptive_oracle() {
        // Nystrom G0 of <y>^-4 against the ball-truncated adaptive radial
        // reduction at random nodes.
        let r_dom = 6.0;
        let grid = build_ball_grid(r_dom, 28, 14).unwrap();
        let u = GridFunction::from_fn(&grid, |x| bracket_power(x, 4.0)).unwrap();
        let gu = apply_g0(&grid, &u).unwrap();
        let oracle = |t: Real| -> Real {
            let radial = |r: Real| {
                2.0 * PI * r * r * (1.0 + r * r).powi(-2) * angular_factor(2.0, t, r)
            };
            let mut total = 0.0;
            for pair in [[0.0, t], [t, r_dom]] {
                total += integrate(radial, pair[0], pair[1], 1e-11).unwrap();
            }
            total / TWO_PI2
        };
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut worst: Real = 0.0;
        let mut checked = 0;
        while checked < 20 {
            let i = rng.gen_range(0..grid.nodes.len());
            let t = node_norm(grid.nodes[i]);
            // outermost shells carry the truncation-boundary error
            if t > 0.75 * r_dom {
                continue;
            }
            checked += 1;
            let exact = oracle(t);
            worst = worst.max((gu.values[i].re - exact).abs() / exact);
            assert!(gu.values[i].im.abs() <= 1e-14);
        }
        assert!(worst <= 1e-3, "worst relative error {worst:.3e}");
    }

    #[test]
    fn riesz_unbounded_witness() {
        // u0 = 1/|y| on the unit ball: the potential at the origin diverges
        // logarithmically under grid refinement.
        let value_at_origin = |n_r: usize| {
            let grid = build_ball_grid(1.0, n_r, 6).unwrap();
            let u = GridFunction::from_fn(&grid, |x| {
                Cplx::new(1.0 / node_norm(x), 0.0)
            })
            .unwrap();
            apply_kernel_at(&grid, &u, [0.0, 0.0, 0.0], |d| {
                Cplx::new(1.0 / (TWO_PI2 * d * d), 0.0)
            })
            .unwrap()
            .re
        };
        let a = value_at_origin(8);
        let b = value_at_origin(32);
        let c = value_at_origin(128);
        assert!(b > a + 0.1 && c > b + 0.1, "no growth: {a}, {b}, {c}");
    }

    #[test]
    fn k_conjugation_and_scaling() {
        let grid = build_ball_grid(3.0, 8, 5).unwrap();
        let u = GridFunction::from_fn(&grid, |x| {
            Cplx::new(bracket_power(x, 4.0).re, 0.3 * (-node_norm(x)).exp())
        })
        .unwrap();
        let plus = apply_k(&grid, 1.3, Sign::Plus, &u.conj()).unwrap();
        let minus = apply_k(&grid, 1.3, Sign::Minus, &u).unwrap();
        for (p, m) in plus.values.iter().zip(&minus.values) {
            assert!((p.conj() - m).norm() <= 1e-13);
        }
    }

    #[test]
    fn k_matches_direct_quadrature() {
        // K at doubled lambda against the closed-form reduced quadrature
        // of e^(2 i lambda d)/d <y>^-4 at one node.
        let r_dom = 6.0;
        let lambda = 0.5;
        let grid = build_ball_grid(r_dom, 28, 14).unwrap();
        let u = GridFunction::from_fn(&grid, |x| bracket_power(x, 4.0)).unwrap();
        let ku = apply_k(&grid, 2.0 * lambda, Sign::Plus, &u).unwrap();
        let i = grid.nodes.len() / 3;
        let t = node_norm(grid.nodes[i]);
        // angular integral of e^(i q d)/d is (e^(i q (t+r)) - e^(i q |t-r|))/(i q t r)
        let q = 2.0 * lambda;
        let radial = |r: Real| {
            let hi = Cplx::new(0.0, q * (t + r)).exp();
            let lo = Cplx::new(0.0, q * (t - r).abs()).exp();
            (hi - lo) / Cplx::new(0.0, q * t * r)
                * (2.0 * PI * r * r * (1.0 + r * r).powi(-2))
        };
        let mut direct = Cplx::new(0.0, 0.0);
        for pair in [[0.0, t], [t, r_dom]] {
            direct += integrate(radial, pair[0], pair[1], 1e-11).unwrap();
        }
        direct *= q / (2.0 * PI);
        let rel = (ku.values[i] - direct).norm() / direct.norm();
        assert!(rel <= 1e-3, "relative error {rel:.3e}");
    }

    #[test]
    fn k_envelope_decay() {
        let grid = build_ball_grid(6.0, 20, 10).unwrap();
        let lambda = 1.0;
        let u = GridFunction::from_fn(&grid, |x| bracket_power(x, 4.0)).unwrap();
        let ku = apply_k(&grid, lambda, Sign::Plus, &u).unwrap();
        let mut worst: Real = 0.0;
        for (x, v) in grid.nodes.iter().zip(&ku.values) {
            let r = node_norm(*x);
            if (1.0..=3.0).contains(&r) {
                worst = worst.max(v.norm() * (1.0 + r * r).sqrt() / lambda);
            }
        }
        assert!(worst <= 10.0, "ratio {worst}");
    }

    #[test]
    fn m_is_real_and_bounded() {
        let grid = build_ball_grid(6.0, 16, 8).unwrap();
        let lambda = 1.0;
        let u = GridFunction::from_fn(&grid, |x| bracket_power(x, 4.0)).unwrap();
        let mu = apply_m(&grid, lambda, &u).unwrap();
        let imag = mu.values.iter().map(|v| v.im.abs()).fold(0.0, Real::max);
        assert!(imag <= 1e-14);
        // pointwise bound by the L2 norm of u
        let ratio = mu.sup_norm() / u.l2_norm(&grid).unwrap();
        assert!(ratio <= 10.0, "ratio {ratio}");
        // s = 2 decay envelope
        let mut worst: Real = 0.0;
        for (x, v) in grid.nodes.iter().zip(&mu.values) {
            let r = node_norm(*x);
            if (1.0..=3.0).contains(&r) {
                worst = worst.max(v.norm() / (2.0 * (1.0 + r * r).powi(-1)));
            }
        }
        assert!(worst <= 10.0, "envelope ratio {worst}");
    }

    #[test]
    fn boundary_kernel_decomposition() {
        let grid = build_ball_grid(3.0, 8, 5).unwrap();
        let lambda = 0.8;
        let u = GridFunction::from_fn(&grid, |x| {
            Cplx::new(bracket_power(x, 3.0).re, 0.1)
        })
        .unwrap();
        let direct = apply_g_boundary(&grid, lambda, Sign::Plus, &u).unwrap();
        let g0 = apply_g0(&grid, &u).unwrap();
        let k = apply_k(&grid, lambda, Sign::Plus, &u).unwrap();
        let m = apply_m(&grid, lambda, &u).unwrap();
        let mut worst: Real = 0.0;
        for i in 0..direct.len() {
            let sum = g0.values[i] + k.values[i] + m.values[i];
            worst = worst.max((direct.values[i] - sum).norm());
        }
        assert!(worst <= 1e-10, "decomposition gap {worst:.3e}");
        let zero = GridFunction::from_fn(&grid, |_| Cplx::new(0.0, 0.0)).unwrap();
        let gz = apply_g_boundary(&grid, lambda, Sign::Plus, &zero).unwrap();
        assert_eq!(gz.sup_norm(), 0.0);
    }

    #[test]
    fn boundary_far_field_phase() {
        // Outgoing phase e^(i lambda |x|)/|x|: the phase increment between
        // radii 50 and 50.5 along a fixed direction is lambda * 0.5.
        let grid = build_ball_grid(6.0, 20, 10).unwrap();
        let lambda = 1.0;
        let u = GridFunction::from_fn(&grid, |x| bracket_power(x, 4.0)).unwrap();
        let eval = |r: Real| {
            apply_kernel_at(&grid, &u, [r, 0.0, 0.0], |d| {
                g_boundary(lambda, Sign::Plus, d).unwrap().total
            })
            .unwrap()
        };
        let a = eval(50.0);
        let b = eval(50.5);
        let phase = (b / a).arg();
        assert!(
            (phase - lambda * 0.5).abs() <= 0.01 * lambda * 0.5,
            "phase increment {phase}"
        );
        // amplitude falls like 1/|x|
        let amp_ratio = b.norm() / a.norm() * (50.5 / 50.0);
        assert!((amp_ratio - 1.0).abs() <= 0.02);
    }

    #[test]
    fn phi_convolution_origin_value() {
        // 4 pi * integral of (1+r^2)^-2 dr = pi^2
        let v = phi_convolution(2.0, 4.0, [0.0, 0.0, 0.0]).unwrap();
        assert_relative_eq!(v, PI * PI, max_relative = 1e-8);
    }

    #[test]
    fn phi_convolution_power_regime() {
        // beta = 2, gamma = 2: decay exponent beta + gamma - n = 1.
        let lo = phi_convolution(2.0, 2.0, [10.0, 0.0, 0.0]).unwrap();
        let hi = phi_convolution(2.0, 2.0, [100.0, 0.0, 0.0]).unwrap();
        let slope = (hi / lo).ln() / (100.0f64 / 10.0).ln();
        assert!((slope + 1.0).abs() <= 0.1, "fitted exponent {slope}");
    }

    #[test]
    fn phi_convolution_log_regime() {
        // beta = 2, gamma = n = 3: Phi <x>^2 / log(1+<x>) stays bounded.
        let env = envelope_for(2.0, 3.0, 3).unwrap();
        assert_eq!(env.regime, Regime::PowerLog);
        let mut ratios = Vec::new();
        for t in [5.0, 10.0, 20.0, 50.0, 100.0] {
            let v = phi_convolution(2.0, 3.0, [t, 0.0, 0.0]).unwrap();
            ratios.push(v / env.eval(t));
        }
        let max = ratios.iter().cloned().fold(0.0, Real::max);
        let min = ratios.iter().cloned().fold(Real::INFINITY, Real::min);
        assert!(max <= 30.0 && max / min <= 2.0, "ratios {ratios:?}");
    }

    #[test]
    fn envelope_case_split() {
        let e = envelope_for(2.0, 4.0, 3).unwrap();
        assert_eq!(e.regime, Regime::Saturated);
        assert_relative_eq!(e.exponent, 2.0);
        let e = envelope_g0(2.0).unwrap();
        assert_eq!(e.regime, Regime::Power);
        assert_relative_eq!(e.exponent, 1.0);
        let e = envelope_g0(3.0).unwrap();
        assert_eq!(e.regime, Regime::PowerLog);
        assert_relative_eq!(e.exponent, 2.0);
        assert!(envelope_for(0.0, 4.0, 3).is_err());
        assert!(envelope_for(2.0, 0.5, 3).is_err());
        assert!(envelope_g0(1.0).is_err());
        assert!(phi_convolution(3.5, 4.0, [0.0; 3]).is_err());
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let grid = build_ball_grid(2.0, 6, 4).unwrap();
        let other = build_ball_grid(2.0, 8, 4).unwrap();
        let u = GridFunction::from_fn(&other, |_| Cplx::new(1.0, 0.0)).unwrap();
        assert!(matches!(
            apply_g0(&grid, &u),
            Err(Error::GridMismatch(_))
        ));
    }
}
