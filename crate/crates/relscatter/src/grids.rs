//! Quadrature grids on truncated balls, azimuthal reduction for radial
//! kernels, and singular-cell correction weights.
//!
//! The 3-D rule is a product of Gauss-Legendre nodes in the radius, Gauss-
//! Legendre nodes in mu = cos(theta) and a uniform periodic grid in the
//! azimuth. Radial potentials let the solver work on the (r, mu) tensor
//! grid alone, with the azimuth pre-integrated by [`azimuthal_reduce`].

use crate::error::{Error, Result};
use crate::quad::{gauss_legendre, gauss_legendre_on, integrate};
use crate::{Cplx, Real};

/// Product quadrature rule on the ball |y| <= r_dom.
#[derive(Debug, Clone)]
pub struct BallGrid {
    pub nodes: Vec<[Real; 3]>,
    pub weights: Vec<Real>,
    pub r_dom: Real,
    pub n_r: usize,
    pub n_ang: usize,
}

/// Tensor rule in (r, mu) for azimuthally reduced integrals.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    pub r_nodes: Vec<Real>,
    /// Radial weights including the r^2 Jacobian.
    pub r_weights: Vec<Real>,
    pub mu_nodes: Vec<Real>,
    pub mu_weights: Vec<Real>,
    pub n_phi: usize,
    pub r_dom: Real,
}

fn check_counts(r_dom: Real, counts: &[usize]) -> Result<()> {
    if !(r_dom > 0.0) || !r_dom.is_finite() {
        return Err(Error::Config(format!("domain radius must be positive, got {r_dom}")));
    }
    for &n in counts {
        if n < 4 {
            return Err(Error::Config(format!("grid counts must be >= 4, got {n}")));
        }
    }
    Ok(())
}

/// Product rule with `n_r` radial, `n_ang` polar and `2 n_ang` azimuthal
/// nodes. Deterministic in its inputs; exact for constants by construction.
pub fn build_ball_grid(r_dom: Real, n_r: usize, n_ang: usize) -> Result<BallGrid> {
    check_counts(r_dom, &[n_r, n_ang])?;
    let (r, wr) = gauss_legendre_on(n_r, 0.0, r_dom);
    let (mu, wmu) = gauss_legendre::<Real>(n_ang);
    let n_phi = 2 * n_ang;
    let dphi = 2.0 * std::f64::consts::PI / n_phi as Real;
    let mut nodes = Vec::with_capacity(n_r * n_ang * n_phi);
    let mut weights = Vec::with_capacity(nodes.capacity());
    for (ri, rwi) in r.iter().zip(&wr) {
        for (mj, wmj) in mu.iter().zip(&wmu) {
            let s = (1.0 - mj * mj).max(0.0).sqrt();
            for k in 0..n_phi {
                let phi = dphi * k as Real;
                nodes.push([ri * s * phi.cos(), ri * s * phi.sin(), ri * mj]);
                weights.push(rwi * ri * ri * wmj * dphi);
            }
        }
    }
    Ok(BallGrid {
        nodes,
        weights,
        r_dom,
        n_r,
        n_ang,
    })
}

/// Tensor (r, mu) rule with an azimuthal count for later reduction.
pub fn build_radial_grid(r_dom: Real, n_r: usize, n_mu: usize, n_phi: usize) -> Result<RadialGrid> {
    check_counts(r_dom, &[n_r, n_mu, n_phi])?;
    let (r_nodes, wr) = gauss_legendre_on(n_r, 0.0, r_dom);
    let r_weights = r_nodes
        .iter()
        .zip(&wr)
        .map(|(r, w)| w * r * r)
        .collect();
    let (mu_nodes, mu_weights) = gauss_legendre::<Real>(n_mu);
    Ok(RadialGrid {
        r_nodes,
        r_weights,
        mu_nodes,
        mu_weights,
        n_phi,
        r_dom,
    })
}

impl BallGrid {
    /// Quadrature of a complex-valued integrand over the ball.
    pub fn integrate<F: Fn([Real; 3]) -> Cplx>(&self, f: F) -> Cplx {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(Cplx::new(0.0, 0.0), |acc, (&x, &w)| acc + f(x) * w)
    }
}

/// Chordal distance between (r, mu, 0) and (r_p, mu_p, phi) about the
/// polar axis.
pub fn chordal_distance(r: Real, mu: Real, r_p: Real, mu_p: Real, phi: Real) -> Real {
    let s = (1.0 - mu * mu).max(0.0).sqrt();
    let s_p = (1.0 - mu_p * mu_p).max(0.0).sqrt();
    let cos_gamma = mu * mu_p + s * s_p * phi.cos();
    let d2 = r * r + r_p * r_p - 2.0 * r * r_p * cos_gamma;
    d2.max(0.0).sqrt()
}

/// Integral over the azimuth of `kernel(|x - y|)` for x = (r, mu) and
/// y = (r_p, mu_p, phi), by the periodic trapezoid rule (spectrally
/// accurate for smooth kernels).
pub fn azimuthal_reduce<K: Fn(Real) -> Cplx>(
    kernel: K,
    r: Real,
    mu: Real,
    r_p: Real,
    mu_p: Real,
    n_phi: usize,
) -> Result<Cplx> {
    if !(r > 0.0) || !(r_p > 0.0) {
        return Err(Error::Domain(format!("radii must be positive, got {r}, {r_p}")));
    }
    if mu.abs() > 1.0 || mu_p.abs() > 1.0 {
        return Err(Error::Domain(format!("mu out of [-1,1]: {mu}, {mu_p}")));
    }
    if n_phi < 4 {
        return Err(Error::Config(format!("n_phi must be >= 4, got {n_phi}")));
    }
    // The distance vanishes only at phi = 0 with coincident (r, mu).
    let scale = r.max(r_p);
    if chordal_distance(r, mu, r_p, mu_p, 0.0) <= scale * 1e-7 {
        return Err(Error::SingularCell(format!(
            "coincident nodes (r, mu) = ({r}, {mu})"
        )));
    }
    let dphi = 2.0 * std::f64::consts::PI / n_phi as Real;
    let mut acc = Cplx::new(0.0, 0.0);
    for k in 0..n_phi {
        let d = chordal_distance(r, mu, r_p, mu_p, dphi * k as Real);
        acc += kernel(d);
    }
    Ok(acc * dphi)
}

/// Geometry of the self-interaction cell around a quadrature node.
#[derive(Debug, Clone, Copy)]
pub enum CellGeometry {
    /// Ball of the given radius (the equal-volume model cell).
    Ball { radius: Real },
    /// Axis-aligned box with the given half-widths, centered at the node.
    Cuboid { half_widths: [Real; 3] },
}

impl CellGeometry {
    /// Radius of the ball with the same volume.
    pub fn equal_volume_radius(&self) -> Real {
        match *self {
            CellGeometry::Ball { radius } => radius,
            CellGeometry::Cuboid { half_widths: h } => {
                let vol = 8.0 * h[0] * h[1] * h[2];
                (3.0 * vol / (4.0 * std::f64::consts::PI)).cbrt()
            }
        }
    }
}

/// Self-interaction weight: the integral of |y|^(-order) over the cell
/// centered at the node. Orders 1 and 2 are integrable in R^3; the ball
/// case is closed-form, the cuboid case is integrated in polar form
///   integral over directions of rho(omega)^(3-order) / (3-order),
/// with rho the distance from the center to the boundary.
pub fn diagonal_correction(cell: &CellGeometry, singularity_order: u8) -> Result<Real> {
    if singularity_order >= 3 {
        return Err(Error::NonIntegrable(singularity_order));
    }
    if singularity_order == 0 {
        return Err(Error::Domain(
            "order 0 has no singularity; use the plain cell weight".into(),
        ));
    }
    let p = 3 - singularity_order as i32; // rho exponent, 1 or 2
    match *cell {
        CellGeometry::Ball { radius } => {
            if !(radius > 0.0) {
                return Err(Error::Domain(format!("cell radius must be positive, got {radius}")));
            }
            // 4 pi h^p / p: 4 pi h for order 2, 2 pi h^2 for order 1.
            Ok(4.0 * std::f64::consts::PI * radius.powi(p) / p as Real)
        }
        CellGeometry::Cuboid { half_widths: h } => {
            if h.iter().any(|&x| !(x > 0.0)) {
                return Err(Error::Domain(format!("half-widths must be positive, got {h:?}")));
            }
            // Octant symmetry; the boundary distance has edge kinks, which
            // the nested adaptive rule resolves.
            let inner = |mu: Real| {
                let s = (1.0 - mu * mu).max(0.0).sqrt();
                integrate(
                    |phi: Real| {
                        let w = [s * phi.cos(), s * phi.sin(), mu];
                        let rho = (0..3)
                            .map(|i| h[i] / w[i].abs().max(1e-300))
                            .fold(f64::INFINITY, Real::min);
                        rho.powi(p)
                    },
                    0.0,
                    std::f64::consts::FRAC_PI_2,
                    1e-10,
                )
                .expect("bounded integrand")
            };
            let outer = integrate(inner, 0.0, 1.0, 1e-9)?;
            Ok(8.0 * outer / p as Real)
        }
    }
}
