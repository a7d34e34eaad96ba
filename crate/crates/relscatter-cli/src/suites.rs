//! Named verification suites. Each check reports a measured value, the
//! bound it must satisfy, and the comparison direction; the runner emits
//! one JSON line per check.

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};

use relscatter::farfield;
use relscatter::grids::build_ball_grid;
use relscatter::kernels::{self, ComplexEnergy, Sign};
use relscatter::operators::{self, GridFunction};
use relscatter::verify;
use relscatter::{Cplx, Real};

/// One verification check outcome; `pass` already accounts for the
/// comparison direction, `bound` is the threshold after scaling.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub suite: String,
    pub check: String,
    pub value: Real,
    pub bound: Real,
    pub pass: bool,
}

fn upper(suite: &str, check: &str, value: Real, bound: Real) -> CheckResult {
    CheckResult {
        suite: suite.into(),
        check: check.into(),
        value,
        bound,
        pass: value <= bound,
    }
}

fn lower(suite: &str, check: &str, value: Real, bound: Real) -> CheckResult {
    CheckResult {
        suite: suite.into(),
        check: check.into(),
        value,
        bound,
        pass: value >= bound,
    }
}

pub const SUITES: &[&str] = &["kernels", "operators", "radiation", "spectral", "farfield"];

pub fn run_suite(name: &str, scale: Real) -> Result<Vec<CheckResult>> {
    match name {
        "kernels" => suite_kernels(scale),
        "operators" => suite_operators(scale),
        "radiation" => suite_radiation(scale),
        "spectral" => suite_spectral(scale),
        "farfield" => suite_farfield(scale),
        other => bail!("unknown suite {other:?}; available: {}", SUITES.join(", ")),
    }
}

/// Closed-form kernel against the Laplace-transform oracle, the boundary
/// limit from above, and the correction-term envelope.
fn suite_kernels(scale: Real) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();

    let mut worst = 0.0f64;
    for &re in &[-3.0, -1.5, -0.5] {
        for &im in &[-2.0, 0.0, 2.0] {
            for &a in &[0.1, 2.0, 20.0] {
                let z = Cplx::new(re, im);
                let g = kernels::g_z(ComplexEnergy::interior(z)?, a)?;
                let oracle = kernels::laplace_oracle(z, a)?;
                worst = worst.max((g - oracle).norm() / oracle.norm());
            }
        }
    }
    out.push(upper("kernels", "resolvent-oracle-identity", worst, 1e-8 * scale));

    let (lambda, r) = (1.0, 1.0);
    let plus = kernels::g_boundary(lambda, Sign::Plus, r)?.total;
    let near = kernels::kernel_value(
        ComplexEnergy::interior(Cplx::new(lambda, 1e-5))?,
        r,
    )?
    .total;
    out.push(upper(
        "kernels",
        "boundary-limit-from-above",
        (near - plus).norm() / plus.norm(),
        1e-4 * scale,
    ));

    let mut sup = 0.0f64;
    for i in 0..200 {
        let r = 0.01 * (1e4f64 / 0.01).powf(i as Real / 199.0);
        let m = kernels::m_lambda(1.0, r)?;
        sup = sup.max(r * (1.0 + r * r).sqrt() * m.abs());
    }
    out.push(upper("kernels", "correction-envelope-constant", sup, 0.2 * scale));

    Ok(out)
}

/// Operator decomposition into its three closed parts, and the zero-point
/// value of the model convolution.
fn suite_operators(scale: Real) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let grid = build_ball_grid(3.0, 8, 6)?;
    let u = GridFunction::from_fn(&grid, |x| {
        let q = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        Cplx::new((-q).exp(), 0.4 * (-0.5 * q).exp())
    })?;
    let lambda = 1.3;
    let full = operators::apply_g_boundary(&grid, lambda, Sign::Plus, &u)?;
    let g0 = operators::apply_g0(&grid, &u)?;
    let k = operators::apply_k(&grid, lambda, Sign::Plus, &u)?;
    let m = operators::apply_m(&grid, lambda, &u)?;
    let mismatch = full
        .values
        .iter()
        .zip(&g0.values)
        .zip(&k.values)
        .zip(&m.values)
        .map(|(((f, a), b), c)| (f - (a + b + c)).norm())
        .fold(0.0, Real::max);
    out.push(upper(
        "operators",
        "three-term-decomposition",
        mismatch / full.sup_norm().max(1e-300),
        1e-10 * scale,
    ));

    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let phi0 = operators::phi_convolution(2.0, 4.0, [0.0, 0.0, 0.0])?;
    out.push(upper(
        "operators",
        "convolution-zero-point",
        (phi0 - pi2).abs(),
        1e-6 * scale,
    ));
    Ok(out)
}

/// Outgoing/incoming dichotomy of the boundary kernels at unit energy.
fn suite_radiation(scale: Real) -> Result<Vec<CheckResult>> {
    let lambda = 1.0;
    let radii = verify::uniform_radii(2.0, 600.0, 4800);
    let field = verify::RadialField::from_fn(
        radii,
        |r| kernels::g_boundary(lambda, Sign::Plus, r).unwrap().total,
        |r| kernels::g_boundary_prime(lambda, Sign::Plus, r).unwrap(),
    )?;
    let own = verify::radiation_functional(&field, lambda, Sign::Plus, 0.7, 14)?;
    let cross = verify::radiation_functional(&field, lambda, Sign::Minus, 0.7, 14)?;
    Ok(vec![
        lower("radiation", "outgoing-gain", own.decay_gain()?, 1.8 / scale),
        upper("radiation", "wrong-sign-gain", cross.decay_gain()?.abs(), 0.3 * scale),
    ])
}

/// Lattice eigenvectors and the multiplier square of the box operator.
fn suite_spectral(scale: Real) -> Result<Vec<CheckResult>> {
    let bx = verify::PeriodicBox::new(5.0, 16)?;
    let k_scale = std::f64::consts::PI / 5.0;
    let k = [2.0 * k_scale, -1.0 * k_scale, 3.0 * k_scale];
    let kn = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
    let coords = bx.coords();
    let n = bx.n();
    let mut u = vec![Cplx::new(0.0, 0.0); bx.len()];
    for i in 0..n {
        for j in 0..n {
            for kk in 0..n {
                let phase = k[0] * coords[i] + k[1] * coords[j] + k[2] * coords[kk];
                u[bx.index(i, j, kk)] = Cplx::new(0.0, phase).exp();
            }
        }
    }
    let au = verify::sqrt_laplacian_apply(&bx, &u)?;
    let eig_err = au
        .iter()
        .zip(&u)
        .map(|(a, b)| (a - kn * b).norm())
        .fold(0.0, Real::max)
        / kn;
    let twice = verify::sqrt_laplacian_apply(&bx, &au)?;
    let lap = verify::laplacian_apply(&bx, &u)?;
    let sq_err = twice
        .iter()
        .zip(&lap)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, Real::max)
        / (kn * kn);
    Ok(vec![
        upper("spectral", "plane-wave-eigenvalue", eig_err, 1e-12 * scale),
        upper("spectral", "multiplier-square", sq_err, 1e-12 * scale),
    ])
}

/// Decay-fit recovery and the splitting-integral envelopes.
fn suite_farfield(scale: Real) -> Result<Vec<CheckResult>> {
    let radii = farfield::geometric_radii(10.0, 200.0, 1.25);
    let values: Vec<Real> = radii.iter().map(|r| 3.0 * r.powf(-2.0)).collect();
    let fit = farfield::fit_decay_exponent(&radii, &values, [0.0, 0.0, 1.0])?;
    let mut out = vec![upper(
        "farfield",
        "power-law-fit-recovery",
        (fit.exponent - 2.0).abs(),
        1e-6 * scale,
    )];
    let (a, sigma) = (1.0, 4.0);
    let mut ratio = 0.0f64;
    for &t in &[10.0, 30.0, 100.0] {
        let v = farfield::split_far_sphere(a, sigma, t)?.norm();
        ratio = ratio.max(v / t.powf(-(sigma - 1.0) / 2.0));
    }
    out.push(upper("farfield", "sphere-split-envelope", ratio, 30.0 * scale));
    Ok(out)
}
