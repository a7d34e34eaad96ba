//! Sine and cosine integral functions in the conventions of the resolvent
//! kernel formulas, the entire series part `h_e`, and cancellation-free
//! auxiliary functions for large arguments.
//!
//! Conventions:
//!   ci(rho) =  integral over [rho, inf) of cos(t)/t dt  (= -Ci(rho))
//!   si(rho) = -integral over [rho, inf) of sin(t)/t dt  (= Si(rho) - pi/2)
//!   h_e(z)  = sum_{m>=1} (-1)^m z^(2m) / ((2m)! 2m)
//!   ci(z)   = -gamma - Log z - h_e(z)   on the principal branch
//!
//! Auxiliary functions (Laplace representations, no cancellation):
//!   f(rho) = int_0^inf e^(-rho t)/(1+t^2)   dt,
//!   g(rho) = int_0^inf e^(-rho t) t/(1+t^2) dt,
//! related to ci and si by
//!   ci =  g cos - f sin,   si = -f cos - g sin,
//!   sin(rho) ci(rho) + cos(rho) si(rho) = -f(rho).
//!
//! For large arguments the pair is recovered from the scaled exponential
//! integral, e^(i z) E1(i z) = g(z) - i f(z), evaluated by the modified
//! Lentz continued fraction. The power series handle |Re z| below the
//! crossover; the two routes agree to ~1e-12 in the overlap band.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Crossover between the power-series and continued-fraction routes.
///
/// Beyond this the alternating series loses more digits to cancellation
/// (the largest term grows like e^|Re z|) than the target accuracy allows
/// in double precision.
const SERIES_CROSSOVER: f64 = 8.0;

/// Largest modulus accepted for arguments off the real axis. Beyond this
/// the series fallback for |Re z| below the crossover would need more terms
/// than `MAX_TERMS`; the kernel layers stay well inside.
const COMPLEX_MAX: f64 = 200.0;

/// Largest |Im w| for the ci/si series recombination of the auxiliary pair;
/// the recombination loses e^(2 |Im w|) to cancellation.
const RECOMBINE_IM_MAX: f64 = 4.0;

const MAX_TERMS: usize = 500;
const CF_MAX_ITER: usize = 400;

/// Complex number restricted to the principal-branch domain C \ (-inf, 0].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrincipalComplex<T: Scalar>(Complex<T>);

impl<T: Scalar> PrincipalComplex<T> {
    /// Rejects points on the cut (-inf, 0] (including 0).
    pub fn new(z: Complex<T>) -> Result<Self> {
        if z.im.is_zero() && z.re <= T::zero() {
            return Err(Error::BranchCut(format!(
                "z = {} + {}i lies on (-inf, 0]",
                z.re, z.im
            )));
        }
        Ok(Self(z))
    }

    pub fn value(self) -> Complex<T> {
        self.0
    }
}

fn complex_max_guard<T: Scalar>(z: Complex<T>) -> Result<()> {
    if !z.im.is_zero() && z.norm() > T::from_f64c(COMPLEX_MAX) {
        return Err(Error::Domain(format!(
            "arguments off the real axis are restricted to |z| <= {COMPLEX_MAX}, got |z| = {}",
            z.norm()
        )));
    }
    Ok(())
}

/// Kahan-compensated evaluation of the defining power series of h_e.
fn h_e_series<T: Scalar>(z: Complex<T>) -> Complex<T> {
    let z2 = z * z;
    let mut cos_term = Complex::new(T::one(), T::zero()); // (-1)^m z^(2m) / (2m)!
    let mut sum = Complex::new(T::zero(), T::zero());
    let mut comp = Complex::new(T::zero(), T::zero());
    for m in 1..=MAX_TERMS {
        let two_m = T::from_f64c(2.0 * m as f64);
        cos_term = -cos_term * z2 / (two_m * (two_m - T::one()));
        let term = cos_term / two_m;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term.norm() <= sum.norm().max(T::one()) * T::epsilon() {
            break;
        }
    }
    sum
}

/// Kahan-compensated series for si(z) = -pi/2 + sum of the odd terms.
fn si_series<T: Scalar>(z: Complex<T>) -> Complex<T> {
    let z2 = z * z;
    let mut sin_term = z; // (-1)^m z^(2m+1) / (2m+1)!
    let mut sum = z;
    let mut comp = Complex::new(T::zero(), T::zero());
    for m in 1..=MAX_TERMS {
        let two_m = T::from_f64c(2.0 * m as f64);
        sin_term = -sin_term * z2 / (two_m * (two_m + T::one()));
        let term = sin_term / (two_m + T::one());
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term.norm() <= sum.norm().max(T::one()) * T::epsilon() {
            break;
        }
    }
    sum - Complex::new(T::FRAC_PI_2(), T::zero())
}

fn ci_series<T: Scalar>(z: Complex<T>) -> Complex<T> {
    -Complex::new(T::euler_gamma(), T::zero()) - z.ln() - h_e_series(z)
}

/// Scaled exponential integral e^z E1(z) by the even continued fraction
/// (modified Lentz). Accurate away from the cut (-inf, 0]; every call site
/// keeps the argument at distance above the series crossover from the cut.
fn e1_scaled_cf<T: Scalar>(z: Complex<T>) -> Complex<T> {
    let floor = T::min_positive_value().sqrt();
    let tiny = Complex::new(floor, T::zero());
    let one = Complex::new(T::one(), T::zero());
    let two = one + one;
    let mut b = z + one;
    let mut c = one / tiny;
    let mut d = one / b;
    let mut h = d;
    for i in 1..=CF_MAX_ITER {
        let ai = Complex::new(-T::from_f64c((i * i) as f64), T::zero());
        b = b + two;
        let mut den = b + ai * d;
        if den.norm() < floor {
            den = tiny;
        }
        d = one / den;
        c = b + ai / c;
        if c.norm() < floor {
            c = tiny;
        }
        let delta = c * d;
        h = h * delta;
        if (delta - one).norm() <= T::epsilon() {
            break;
        }
    }
    h
}

/// Analytic continuation of (ci, si) for Re z > 0 via the continued
/// fraction, using e^(+-iz) E1(+-iz) = g(z) -+ i f(z).
fn ci_si_cf<T: Scalar>(z: Complex<T>) -> (Complex<T>, Complex<T>) {
    let i = Complex::new(T::zero(), T::one());
    let wp = e1_scaled_cf(i * z); //  g - i f
    let wm = e1_scaled_cf(-i * z); // g + i f
    let two = T::from_f64c(2.0);
    let g = (wp + wm) / two;
    let f = (wm - wp) * (-i) / two;
    let (s, c) = (z.sin(), z.cos());
    (g * c - f * s, -f * c - g * s)
}

/// Entire part of the exponential integral,
/// Ein(z) = sum_{n>=1} (-1)^(n+1) z^n / (n n!), with Kahan accumulation.
fn ein_series<T: Scalar>(z: Complex<T>) -> Complex<T> {
    let mut pow = Complex::new(T::one(), T::zero()); // (-1)^(n+1) z^n / n!
    let mut sum = Complex::new(T::zero(), T::zero());
    let mut comp = Complex::new(T::zero(), T::zero());
    for n in 1..=MAX_TERMS {
        let nf = T::from_f64c(n as f64);
        pow = -pow * z / nf;
        let term = -pow / nf;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term.norm() <= sum.norm().max(T::one()) * T::epsilon() {
            break;
        }
    }
    sum
}

/// Analytic continuation of the auxiliary pair (f, g) to complex w off the
/// cut (-inf, 0], via e^(+-iw) E1(+-iw) = g(w) -+ i f(w) on Re w >= 0.
///
/// Route selection keeps every evaluation cancellation-free and on the
/// correct branch:
/// - |Re w| and |Im w| both below the crossover: power-series ci/si
///   recombination (valid on the whole principal domain);
/// - Re w negative outside that box: reflection into the right half-plane,
///   f(w) = -f(-w) + pi e^{isw}, g(w) = g(-w) - is pi e^{isw}, s = sgn Im w
///   (the e^{+-iw} E1(+-iw) combination crosses the E1 cut at Re w = 0);
/// - Re w above the crossover: both exponential integrals by continued
///   fraction (their arguments +-iw stay |Re w| away from the cut);
/// - |Re w| small, |Im w| large: the right-half-plane argument by continued
///   fraction, the left-half-plane one by E1 = -gamma - Log + Ein, where
///   the Ein series loses only e^(Re^2 / 2|Im|) to cancellation. Signed
///   zeros in the component-wise +-iw keep Re w = 0 on the correct side.
pub fn aux_fg_complex<T: Scalar>(w: PrincipalComplex<T>) -> Result<(Complex<T>, Complex<T>)> {
    let w = w.value();
    complex_max_guard(w)?;
    if w.im.is_zero() {
        let (f, g) = aux_fg(w.re)?;
        return Ok((Complex::new(f, T::zero()), Complex::new(g, T::zero())));
    }
    let i = Complex::new(T::zero(), T::one());
    let crossover = T::from_f64c(SERIES_CROSSOVER);
    if w.re.abs() <= crossover && w.im.abs() <= T::from_f64c(RECOMBINE_IM_MAX) {
        let ci = ci_series(w);
        let si = si_series(w);
        let (s, c) = (w.sin(), w.cos());
        return Ok((-(s * ci + c * si), c * ci - s * si));
    }
    if w.re < T::zero() {
        let (f0, g0) = aux_fg_complex(PrincipalComplex::new(-w)?)?;
        let s = if w.im > T::zero() { T::one() } else { -T::one() };
        // e^{isw}; |e^{isw}| = e^{-|Im w|} <= 1.
        let phase = Complex::new(-s * w.im, s * w.re).exp();
        let pi = Complex::new(T::PI(), T::zero());
        let f = -f0 + pi * phase;
        let g = g0 - Complex::new(T::zero(), s * T::PI()) * phase;
        return Ok((f, g));
    }
    // iw and -iw built component-wise so Re w = +-0 keeps its sign.
    let iw = Complex::new(-w.im, w.re);
    let miw = Complex::new(w.im, -w.re);
    let (wp, wm) = if w.re.abs() > crossover {
        (e1_scaled_cf(iw), e1_scaled_cf(miw))
    } else {
        let e1_left = |zeta: Complex<T>| {
            (-Complex::new(T::euler_gamma(), T::zero()) - zeta.ln() + ein_series(zeta))
                * zeta.exp()
        };
        if w.im > T::zero() {
            // iw has Re = -Im w < 0.
            (e1_left(iw), e1_scaled_cf(miw))
        } else {
            (e1_scaled_cf(iw), e1_left(miw))
        }
    };
    let two = T::from_f64c(2.0);
    let g = (wp + wm) / two;
    let f = (wm - wp) * (-i) / two;
    Ok((f, g))
}

/// Auxiliary pair (f, g) for real rho > 0.
pub fn aux_fg<T: Scalar>(rho: T) -> Result<(T, T)> {
    if rho <= T::zero() {
        return Err(Error::Domain(format!(
            "aux functions need rho > 0, got {rho}"
        )));
    }
    if rho > T::from_f64c(SERIES_CROSSOVER) {
        let w = e1_scaled_cf(Complex::new(T::zero(), rho));
        Ok((-w.im, w.re))
    } else {
        let z = Complex::new(rho, T::zero());
        let ci = ci_series(z).re;
        let si = si_series(z).re;
        let (s, c) = (rho.sin(), rho.cos());
        Ok((-(s * ci + c * si), c * ci - s * si))
    }
}

/// f(rho) = int_0^inf e^(-rho t)/(1+t^2) dt; satisfies
/// sin(rho) ci(rho) + cos(rho) si(rho) = -f(rho).
pub fn aux_f<T: Scalar>(rho: T) -> Result<T> {
    aux_fg(rho).map(|(f, _)| f)
}

/// g(rho) = int_0^inf e^(-rho t) t/(1+t^2) dt = -f'(rho).
pub fn aux_g<T: Scalar>(rho: T) -> Result<T> {
    aux_fg(rho).map(|(_, g)| g)
}

/// Cosine integral ci(rho) = -Ci(rho) for rho > 0.
pub fn ci_real<T: Scalar>(rho: T) -> Result<T> {
    if rho <= T::zero() {
        return Err(Error::Domain(format!("ci requires rho > 0, got {rho}")));
    }
    if rho <= T::from_f64c(SERIES_CROSSOVER) {
        Ok(ci_series(Complex::new(rho, T::zero())).re)
    } else {
        let (f, g) = aux_fg(rho)?;
        Ok(g * rho.cos() - f * rho.sin())
    }
}

/// Sine integral si(rho) = Si(rho) - pi/2 for rho > 0.
pub fn si_real<T: Scalar>(rho: T) -> Result<T> {
    if rho <= T::zero() {
        return Err(Error::Domain(format!("si requires rho > 0, got {rho}")));
    }
    if rho <= T::from_f64c(SERIES_CROSSOVER) {
        Ok(si_series(Complex::new(rho, T::zero())).re)
    } else {
        let (f, g) = aux_fg(rho)?;
        Ok(-f * rho.cos() - g * rho.sin())
    }
}

/// h_e(z), the entire even series of the principal-branch cosine integral.
///
/// Outside |z| <= 50 with |Re z| above the crossover the series is used as
/// a fallback and accuracy degrades gracefully with |Re z|.
pub fn h_e<T: Scalar>(z: Complex<T>) -> Complex<T> {
    if z.re.abs() <= T::from_f64c(SERIES_CROSSOVER) || z.norm() > T::from_f64c(COMPLEX_MAX) {
        return h_e_series(z);
    }
    // h_e is even; move the argument into Re w > 0 and unwind ci there.
    let w = if z.re < T::zero() { -z } else { z };
    let ci = if w.im.is_zero() {
        let (f, g) = aux_fg(w.re).expect("positive real argument");
        Complex::new(g * w.re.cos() - f * w.re.sin(), T::zero())
    } else {
        ci_si_cf(w).0
    };
    -Complex::new(T::euler_gamma(), T::zero()) - w.ln() - ci
}

/// Principal-branch complex cosine integral ci(z), z not on (-inf, 0].
pub fn ci_complex<T: Scalar>(z: PrincipalComplex<T>) -> Result<Complex<T>> {
    let z = z.value();
    complex_max_guard(z)?;
    if z.im.is_zero() {
        // Positive real axis; the cut was rejected at construction.
        return ci_real(z.re).map(|v| Complex::new(v, T::zero()));
    }
    if z.re.abs() <= T::from_f64c(SERIES_CROSSOVER) {
        return Ok(ci_series(z));
    }
    if z.re > T::zero() {
        Ok(ci_si_cf(z).0)
    } else {
        // ci(z) = ci(-z) + (Log(-z) - Log z): -i pi in the upper half-plane,
        // +i pi in the lower.
        let shift = if z.im > T::zero() { -T::PI() } else { T::PI() };
        Ok(ci_si_cf(-z).0 + Complex::new(T::zero(), shift))
    }
}

/// Entire complex sine integral si(z) = -pi/2 + odd series.
///
/// Off the real axis the argument is restricted to |z| <= 50.
pub fn si_complex<T: Scalar>(z: Complex<T>) -> Complex<T> {
    if z.re.abs() <= T::from_f64c(SERIES_CROSSOVER) || z.norm() > T::from_f64c(COMPLEX_MAX) {
        return si_series(z);
    }
    if z.im.is_zero() {
        let v = si_real(z.re.abs()).expect("nonzero real part");
        // Reflection si(-x) = -pi - si(x).
        let v = if z.re > T::zero() { v } else { -T::PI() - v };
        return Complex::new(v, T::zero());
    }
    if z.re > T::zero() {
        ci_si_cf(z).1
    } else {
        -Complex::new(T::PI(), T::zero()) - ci_si_cf(-z).1
    }
}
