//! Closed-form resolvent kernels of the square-root Laplacian on R^3.
//!
//! For energies z off [0, inf) the kernel of (sqrt(-Laplace) - z)^(-1) is
//!   g_z(r) = 1/(2 pi^2 r^2) + ell_z(r),
//!   ell_z(r) = z/(2 pi^2 r) [ sin(zr) ci(-zr) - cos(zr) si(-zr) ],
//! and the boundary values at lambda +- i0 decompose into a Riesz part, an
//! outgoing/incoming wave part and a real correction:
//!   g^+-_lambda(r) = 1/(2 pi^2 r^2)
//!                  + (lambda/2 pi) e^(+-i lambda r)/r + m_lambda(r),
//!   m_lambda(r) = lambda/(2 pi^2 r) [ sin ci + cos si ](lambda r)
//!               = -lambda/(2 pi^2 r) f(lambda r).
//!
//! The Laplace-transform oracle integrates the subordinated Poisson kernel
//! directly and serves as ground truth for g_z at Re z < 0.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quad::integrate;
use crate::scalar::Scalar;
use crate::specfun::{aux_fg, aux_fg_complex, PrincipalComplex};

/// Which boundary value of the resolvent is taken at a positive energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn signum<T: Scalar>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }

    /// The opposite boundary value.
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            other => Err(Error::Config(format!("unknown sign {other:?}"))),
        }
    }
}

/// Spectral parameter: either an interior point of the resolvent set or a
/// boundary value lambda +- i0 on the positive half-axis.
///
/// Construct through [`ComplexEnergy::interior`] / [`ComplexEnergy::boundary`],
/// which enforce the domain invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ComplexEnergy<T: Scalar> {
    Interior(Complex<T>),
    Boundary { lambda: T, sign: Sign },
}

impl<T: Scalar> ComplexEnergy<T> {
    /// z in the resolvent set C \ [0, inf).
    pub fn interior(z: Complex<T>) -> Result<Self> {
        if z.im.is_zero() && z.re >= T::zero() {
            return Err(Error::EnergyDomain(format!(
                "z = {} lies on the spectrum [0, inf)",
                z.re
            )));
        }
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::EnergyDomain("non-finite energy".into()));
        }
        Ok(ComplexEnergy::Interior(z))
    }

    /// Boundary value lambda +- i0 with lambda > 0.
    pub fn boundary(lambda: T, sign: Sign) -> Result<Self> {
        if !(lambda > T::zero()) || !lambda.is_finite() {
            return Err(Error::EnergyDomain(format!(
                "boundary energy needs lambda > 0, got {lambda}"
            )));
        }
        Ok(ComplexEnergy::Boundary { lambda, sign })
    }
}

/// The kernel split into its closed-form parts. `total` is always the sum
/// of the three parts; interior energies carry ell_z in `wave_part` with
/// zero correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue<T: Scalar> {
    pub riesz_part: T,
    pub wave_part: Complex<T>,
    pub correction: T,
    pub total: Complex<T>,
}

fn two_pi_sq<T: Scalar>() -> T {
    T::from_f64c(2.0) * T::PI() * T::PI()
}

fn check_r<T: Scalar>(r: T) -> Result<()> {
    if r.is_zero() {
        return Err(Error::Singularity);
    }
    if !(r > T::zero()) {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    Ok(())
}

/// Riesz kernel 1/(2 pi^2 r^2), the z-independent leading singularity.
pub fn riesz_kernel<T: Scalar>(r: T) -> Result<T> {
    check_r(r)?;
    Ok((two_pi_sq::<T>() * r * r).recip())
}

/// Subordinated Poisson kernel P_t(x) = t / (pi^2 (t^2 + |x|^2)^2).
pub fn poisson_kernel<T: Scalar>(t: T, r: T) -> Result<T> {
    if !(t > T::zero()) {
        return Err(Error::Domain(format!("poisson_kernel needs t > 0, got {t}")));
    }
    if r < T::zero() {
        return Err(Error::Domain(format!("radius must be nonnegative, got {r}")));
    }
    let q = t * t + r * r;
    Ok(t / (T::PI() * T::PI() * q * q))
}

/// ell_z(r) for an interior energy.
pub fn ell_z<T: Scalar>(energy: ComplexEnergy<T>, r: T) -> Result<Complex<T>> {
    check_r(r)?;
    let z = match energy {
        ComplexEnergy::Interior(z) => z,
        ComplexEnergy::Boundary { .. } => {
            return Err(Error::EnergyDomain(
                "ell_z needs an interior energy; use g_boundary for lambda +- i0".into(),
            ))
        }
    };
    // The defining bracket sin(zr) ci(-zr) - cos(zr) si(-zr) equals f(-zr)
    // by the reflection identities; the aux continuation avoids the
    // e^(2|Im zr|) cancellation of the literal recombination.
    let w = -z * r;
    let (f, _) = aux_fg_complex(PrincipalComplex::new(w)?)?;
    Ok(z / Complex::new(two_pi_sq::<T>() * r, T::zero()) * f)
}

/// Literal recombination of the sine/cosine integral bracket; unstable for
/// large |Im(zr)| but an independent cross-check route.
#[cfg(test)]
fn ell_z_bracket<T: Scalar>(z: Complex<T>, r: T) -> Result<Complex<T>> {
    use crate::specfun::{ci_complex, si_complex};
    let zr = z * r;
    let ci = ci_complex(PrincipalComplex::new(-zr)?)?;
    let si = si_complex(-zr);
    let bracket = zr.sin() * ci - zr.cos() * si;
    Ok(z / Complex::new(two_pi_sq::<T>() * r, T::zero()) * bracket)
}

/// Resolvent kernel g_z(r) = 1/(2 pi^2 r^2) + ell_z(r), interior z.
pub fn g_z<T: Scalar>(energy: ComplexEnergy<T>, r: T) -> Result<Complex<T>> {
    let riesz = riesz_kernel(r)?;
    Ok(Complex::new(riesz, T::zero()) + ell_z(energy, r)?)
}

/// Real correction m_lambda(r) = -lambda f(lambda r) / (2 pi^2 r).
pub fn m_lambda<T: Scalar>(lambda: T, r: T) -> Result<T> {
    check_r(r)?;
    if !(lambda > T::zero()) {
        return Err(Error::Domain(format!("m_lambda needs lambda > 0, got {lambda}")));
    }
    let (f, _) = aux_fg(lambda * r)?;
    Ok(-lambda * f / (two_pi_sq::<T>() * r))
}

/// d/dr of m_lambda, using f' = -g:
/// m'_lambda(r) = lambda^2 g(lambda r)/(2 pi^2 r) + lambda f(lambda r)/(2 pi^2 r^2).
pub fn m_lambda_prime<T: Scalar>(lambda: T, r: T) -> Result<T> {
    check_r(r)?;
    if !(lambda > T::zero()) {
        return Err(Error::Domain(format!("m_lambda needs lambda > 0, got {lambda}")));
    }
    let (f, g) = aux_fg(lambda * r)?;
    let c = two_pi_sq::<T>();
    Ok(lambda * lambda * g / (c * r) + lambda * f / (c * r * r))
}

/// Boundary kernel g_lambda^(+-)(r), split into its three parts.
pub fn g_boundary<T: Scalar>(lambda: T, sign: Sign, r: T) -> Result<KernelValue<T>> {
    let riesz = riesz_kernel(r)?;
    let correction = m_lambda(lambda, r)?;
    let phase = Complex::new(T::zero(), sign.signum::<T>() * lambda * r).exp();
    let wave = phase * (lambda / (T::from_f64c(2.0) * T::PI() * r));
    let total = wave + Complex::new(riesz + correction, T::zero());
    Ok(KernelValue {
        riesz_part: riesz,
        wave_part: wave,
        correction,
        total,
    })
}

/// Kernel for either energy kind, in the three-part representation.
pub fn kernel_value<T: Scalar>(energy: ComplexEnergy<T>, r: T) -> Result<KernelValue<T>> {
    match energy {
        ComplexEnergy::Interior(_) => {
            let riesz = riesz_kernel(r)?;
            let ell = ell_z(energy, r)?;
            Ok(KernelValue {
                riesz_part: riesz,
                wave_part: ell,
                correction: T::zero(),
                total: Complex::new(riesz, T::zero()) + ell,
            })
        }
        ComplexEnergy::Boundary { lambda, sign } => g_boundary(lambda, sign, r),
    }
}

/// Derivative in r of the boundary kernel total, for radiation functionals.
pub fn g_boundary_prime<T: Scalar>(lambda: T, sign: Sign, r: T) -> Result<Complex<T>> {
    check_r(r)?;
    let s = sign.signum::<T>();
    let two_pi = T::from_f64c(2.0) * T::PI();
    // Riesz part: d/dr 1/(2 pi^2 r^2) = -1/(pi^2 r^3).
    let riesz = -(T::PI() * T::PI() * r * r * r).recip();
    // Wave part: (lambda/2 pi) e^{+-i lambda r} (+-i lambda / r - 1/r^2).
    let phase = Complex::new(T::zero(), s * lambda * r).exp();
    let wave = phase
        * (lambda / two_pi)
        * (Complex::new(-(r * r).recip(), s * lambda / r));
    let corr = m_lambda_prime(lambda, r)?;
    Ok(wave + Complex::new(riesz + corr, T::zero()))
}

/// Ground-truth oracle for g_z at Re z < 0: adaptive quadrature of the
/// Laplace transform of the subordinated Poisson kernel,
///   integral over t in (0, inf) of e^(t z) t / (pi^2 (t^2 + a^2)^2) dt.
pub fn laplace_oracle<T: Scalar>(z: Complex<T>, a: T) -> Result<Complex<T>> {
    if !(z.re < T::zero()) {
        return Err(Error::Domain(format!(
            "Laplace transform requires Re z < 0, got {}",
            z.re
        )));
    }
    if !(a > T::zero()) {
        return Err(Error::Domain(format!("oracle needs a > 0, got {a}")));
    }
    // Beyond t_max the integrand is below e^{-35} of its scale.
    let t_max = a + T::from_f64c(35.0) / z.re.abs();
    // Absolute tolerance scaled down with the magnitude of the transform
    // (~ a^{-4} for large a) so the result stays accurate in relative terms.
    let scale = T::one().min((a * a * a * a).recip());
    let tol = (T::from_f64c(1e-12) * scale).max(T::epsilon() * T::from_f64c(100.0) * scale);
    let pi_sq = T::PI() * T::PI();
    integrate(
        move |t: T| {
            let q = t * t + a * a;
            (z * t).exp() * (t / (pi_sq * q * q))
        },
        T::zero(),
        t_max,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    type C = Complex64;

    fn interior(re: f64, im: f64) -> ComplexEnergy<f64> {
        ComplexEnergy::interior(C::new(re, im)).unwrap()
    }

    #[test]
    fn poisson_at_origin_and_normalization() {
        assert_relative_eq!(
            poisson_kernel(1.0f64, 0.0).unwrap(),
            1.0 / std::f64::consts::PI.powi(2),
            epsilon = 1e-15
        );
        // int over R^3 of P_t = 1: radial head plus the closed-form tail of
        // 4 pi r^2 P_t(r), whose antiderivative is
        // (4t/pi) * (arctan(r/t)/(2t) - r/(2(t^2+r^2))).
        let t = 2.0f64;
        let rr = 1e4;
        let head = integrate(
            |r: f64| 4.0 * std::f64::consts::PI * r * r * poisson_kernel(t, r).unwrap(),
            0.0,
            rr,
            1e-12,
        )
        .unwrap();
        let anti = |r: f64| {
            (4.0 * t / std::f64::consts::PI)
                * ((r / t).atan() / (2.0 * t) - r / (2.0 * (t * t + r * r)))
        };
        // anti(inf) = (4t/pi) pi/(4t) = 1, so the tail is 1 - anti(rr).
        let total = head + (1.0 - anti(rr));
        assert_relative_eq!(total, 1.0, epsilon = 1e-8);
        assert!(poisson_kernel(0.0f64, 1.0).is_err());
        assert!(poisson_kernel(-1.0f64, 1.0).is_err());
        assert!(poisson_kernel(1.0f64, -0.5).is_err());
    }

    #[test]
    fn frozen_resolvent_values() {
        // Frozen from an independent multiprecision evaluation of the
        // Laplace-transform integral.
        let g = g_z(interior(-1.0, 0.0), 1.0).unwrap();
        assert_relative_eq!(g.re, 0.019_177_586_070_339_6, max_relative = 1e-12);
        assert_relative_eq!(g.im, 0.0, epsilon = 1e-14);
        let g = g_z(interior(-1.0, 0.0), 30.0).unwrap();
        assert_relative_eq!(g.re, 1.234_724_813_954_69e-7, max_relative = 1e-10);
        let g = g_z(interior(-3.0, 1.0), 2.0).unwrap();
        assert_relative_eq!(g.re, 4.485_211_243_318_34e-4, max_relative = 1e-11);
        assert_relative_eq!(g.im, 2.693_396_615_397_57e-4, max_relative = 1e-11);
    }

    #[test]
    fn oracle_matches_g_z() {
        for &(re, im) in &[(-1.0, 0.0), (-2.0, 0.0), (-3.0, 1.0), (-0.5, -2.0)] {
            for &a in &[0.3, 1.0, 2.0, 5.0] {
                let z = C::new(re, im);
                let o = laplace_oracle(z, a).unwrap();
                let g = g_z(ComplexEnergy::interior(z).unwrap(), a).unwrap();
                assert!(
                    (o - g).norm() <= 1e-9 * o.norm().max(1e-12),
                    "z = {z}, a = {a}: oracle {o} vs g_z {g}"
                );
            }
        }
    }

    #[test]
    fn resolvent_identity_grid() {
        // 5x5x5 grid over Re z, Im z, a.
        let res: Vec<f64> = (0..5).map(|i| -3.0 + i as f64 * (2.5 / 4.0)).collect();
        let ims: Vec<f64> = (0..5).map(|i| -2.0 + i as f64).collect();
        let aas = [0.1, 0.5, 2.0, 8.0, 20.0];
        let mut worst = 0.0f64;
        let mut at = (0.0, 0.0, 0.0);
        for &re in &res {
            for &im in &ims {
                for &a in &aas {
                    let z = C::new(re, im);
                    let o = laplace_oracle(z, a).unwrap();
                    let g = g_z(ComplexEnergy::interior(z).unwrap(), a).unwrap();
                    let rel = (o - g).norm() / o.norm();
                    if rel > worst {
                        worst = rel;
                        at = (re, im, a);
                    }
                }
            }
        }
        assert!(worst <= 1e-8, "worst relative deviation {worst} at {at:?}");
    }

    #[test]
    fn oracle_large_a_riesz_suppressed() {
        // Under e^{tz} the t ~ a mass of the Poisson kernel is cut off, so
        // the transform decays like Gamma(2)/(pi^2 a^4), faster than the
        // Riesz part alone.
        let pi_sq = std::f64::consts::PI.powi(2);
        for &a in &[30.0f64, 100.0] {
            let o = laplace_oracle(C::new(-1.0, 0.0), a).unwrap();
            assert_relative_eq!(o.re * pi_sq * a.powi(4), 1.0, max_relative = 20.0 / (a * a));
        }
        assert!(laplace_oracle(C::new(0.0, 1.0), 1.0).is_err());
        assert!(laplace_oracle(C::new(1.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn ell_z_reflection_and_small_r() {
        let z = C::new(-1.0, 0.3);
        let a = ell_z(ComplexEnergy::interior(z).unwrap(), 2.0).unwrap();
        let b = ell_z(ComplexEnergy::interior(z.conj()).unwrap(), 2.0).unwrap();
        assert!((a.conj() - b).norm() <= 1e-13 * a.norm().max(1.0));
        // g_z(r) 2 pi^2 r^2 -> 1: ell is o(r^{-2}).
        let tps = 2.0 * std::f64::consts::PI.powi(2);
        for &r in &[1e-2, 1e-4, 1e-6] {
            let g = g_z(interior(-1.0, 0.0), r).unwrap();
            assert_relative_eq!(g.re * tps * r * r, 1.0, max_relative = 40.0 * r);
        }
    }

    #[test]
    fn ell_z_dual_route() {
        // The stable continuation agrees with the literal bracket formula
        // where the latter is well conditioned (moderate |Im(zr)|).
        for &(re, im, r) in &[
            (-1.0f64, 0.0f64, 1.0f64),
            (-1.0, 0.3, 2.0),
            (-3.0, 1.0, 2.0),
            (1.5, 0.5, 3.0),
            (-0.2, -2.0, 1.0),
        ] {
            let z = C::new(re, im);
            let a = ell_z(ComplexEnergy::interior(z).unwrap(), r).unwrap();
            let b = ell_z_bracket(z, r).unwrap();
            let cond = (2.0 * (im * r).abs()).exp();
            assert!(
                (a - b).norm() <= 1e-12 * cond * a.norm().max(1e-8),
                "z = {z}, r = {r}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn interior_constructor_rejects_spectrum() {
        assert!(ComplexEnergy::interior(C::new(1.0, 0.0)).is_err());
        assert!(ComplexEnergy::interior(C::new(0.0, 0.0)).is_err());
        assert!(ComplexEnergy::interior(C::new(-1.0, 0.0)).is_ok());
        assert!(ComplexEnergy::interior(C::new(2.0, 1e-3)).is_ok());
        assert!(ComplexEnergy::<f64>::boundary(0.0, Sign::Plus).is_err());
        assert!(ComplexEnergy::<f64>::boundary(-1.0, Sign::Minus).is_err());
        assert!(ell_z(ComplexEnergy::boundary(1.0, Sign::Plus).unwrap(), 1.0).is_err());
        assert!(g_z(interior(-1.0, 0.0), 0.0).is_err());
        assert!(m_lambda(1.0f64, 0.0).is_err());
    }

    #[test]
    fn m_lambda_dual_route_and_scaling() {
        use crate::specfun::{ci_real, si_real};
        // aux_f route against direct ci/si recombination at lambda r = 2.
        let (lambda, r) = (0.5f64, 4.0);
        let rho = lambda * r;
        let direct = lambda / (2.0 * std::f64::consts::PI.powi(2) * r)
            * (rho.sin() * ci_real(rho).unwrap() + rho.cos() * si_real(rho).unwrap());
        assert_relative_eq!(m_lambda(lambda, r).unwrap(), direct, epsilon = 1e-10);
        // scaling m_lambda(l, r) = l^2 m_1(l r)
        for &(l, r) in &[(0.5f64, 3.0), (2.0, 0.7), (5.0, 10.0)] {
            assert_relative_eq!(
                m_lambda(l, r).unwrap(),
                l * l * m_lambda(1.0, l * r).unwrap(),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn m_lambda_envelope() {
        // r <r> |m_1(r)| bounded over [0.01, 1e4]; empirical constant ~0.113.
        let mut sup = 0.0f64;
        let mut r = 0.01f64;
        while r <= 1e4 {
            let v = r * (1.0 + r * r).sqrt() * m_lambda(1.0, r).unwrap().abs();
            sup = sup.max(v);
            r *= 1.05;
        }
        assert!(sup <= 0.1, "sup = {sup}");
        assert!(sup >= 0.07, "envelope unexpectedly slack: {sup}");
    }

    #[test]
    fn boundary_decomposition_and_conjugation() {
        let kv = g_boundary(1.0f64, Sign::Plus, 3.0).unwrap();
        let wave_expect = (1.0 / (2.0 * std::f64::consts::PI)) * C::new(0.0, 3.0).exp() / 3.0;
        let extracted = kv.total - C::new(kv.riesz_part + kv.correction, 0.0);
        assert!((extracted - wave_expect).norm() <= 1e-15);
        assert!((kv.wave_part - wave_expect).norm() <= 1e-15);

        let plus = g_boundary(1.3f64, Sign::Plus, 2.4).unwrap();
        let minus = g_boundary(1.3f64, Sign::Minus, 2.4).unwrap();
        assert!((plus.total.conj() - minus.total).norm() <= 1e-15);
        assert_eq!(plus.riesz_part, minus.riesz_part);
        assert_eq!(plus.correction, minus.correction);
    }

    #[test]
    fn wave_part_dominates_at_infinity() {
        // |g^+_1(r) - (1/2 pi) e^{ir}/r| <= C r^{-2} for r >= 10.
        let mut r = 10.0f64;
        while r <= 1e3 {
            let kv = g_boundary(1.0f64, Sign::Plus, r).unwrap();
            let rest = (kv.total - kv.wave_part).norm();
            assert!(rest <= 0.2 / (r * r), "r = {r}: {rest}");
            r *= 1.7;
        }
    }

    #[test]
    fn boundary_limit_of_interior_kernel() {
        // g_{lambda + i mu}(r) -> g^+_lambda(r), decreasing in mu.
        for &lambda in &[0.5f64, 1.0, 2.0] {
            for &r in &[0.5f64, 2.0, 10.0] {
                let target = g_boundary(lambda, Sign::Plus, r).unwrap().total;
                let mut prev = f64::INFINITY;
                for k in 1..=6 {
                    let mu = 10f64.powi(-k);
                    let g = g_z(interior(lambda, mu), r).unwrap();
                    let rel = (g - target).norm() / target.norm();
                    assert!(rel < prev, "lambda={lambda} r={r} mu={mu}: {rel} !< {prev}");
                    prev = rel;
                }
                assert!(prev <= 1e-4, "final relative gap {prev}");
            }
        }
    }

    #[test]
    fn local_envelope_of_boundary_values() {
        // |g_{lambda +- i mu}(r)| <= C max(r^{-2}, 1) near the boundary.
        let mut sup = 0.0f64;
        for &lambda in &[0.5f64, 1.0, 2.0] {
            for &mu in &[1e-2f64, -1e-2, 1e-4, -1e-4] {
                let mut r = 1e-3f64;
                while r <= 10.0 {
                    let g = g_z(interior(lambda, mu), r).unwrap().norm();
                    sup = sup.max(g / (1.0f64 / (r * r)).max(1.0));
                    r *= 1.6;
                }
            }
        }
        assert!(sup <= 1.0, "envelope constant {sup}");
    }

    #[test]
    fn kernel_value_interior_has_zero_correction() {
        let kv = kernel_value(interior(-2.0, 1.0), 1.5).unwrap();
        assert_eq!(kv.correction, 0.0);
        let direct = g_z(interior(-2.0, 1.0), 1.5).unwrap();
        assert!((kv.total - direct).norm() <= 1e-16);
        assert!(
            (kv.total - C::new(kv.riesz_part, 0.0) - kv.wave_part).norm() <= 1e-16
        );
    }

    #[test]
    fn boundary_prime_matches_numeric_derivative() {
        for &(lambda, r) in &[(1.0f64, 2.0f64), (0.7, 0.4), (2.0, 15.0)] {
            for &sign in &[Sign::Plus, Sign::Minus] {
                let h = 1e-6 * r;
                let up = g_boundary(lambda, sign, r + h).unwrap().total;
                let dn = g_boundary(lambda, sign, r - h).unwrap().total;
                let num = (up - dn) / (2.0 * h);
                let ana = g_boundary_prime(lambda, sign, r).unwrap();
                assert!(
                    (num - ana).norm() <= 1e-6 * ana.norm().max(1.0),
                    "lambda={lambda} r={r}: {num} vs {ana}"
                );
            }
        }
    }

    #[test]
    fn f32_kernel_smoke() {
        let g32 = g_z(
            ComplexEnergy::interior(num_complex::Complex32::new(-1.0, 0.0)).unwrap(),
            1.0f32,
        )
        .unwrap();
        assert!((g32.re - 0.019_177_586f32).abs() < 1e-6);
        let kv = g_boundary(1.0f32, Sign::Plus, 2.0).unwrap();
        let kv64 = g_boundary(1.0f64, Sign::Plus, 2.0).unwrap();
        assert!((kv.total.re - kv64.total.re as f32).abs() < 1e-5);
    }
}
