//! Adaptive Gauss-Kronrod quadrature and Gauss-Legendre rules.
//!
//! The adaptive integrator drives a 15-point Kronrod / 7-point Gauss pair
//! with greedy bisection of the interval carrying the largest error
//! estimate. It integrates real- or complex-valued integrands through the
//! [`QuadValue`] trait.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Kronrod abscissae for the 15-point rule on [-1, 1] (nonnegative half).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Weights of the embedded 7-point Gauss rule (even-index Kronrod nodes).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// Value type an integrand may produce: closed under addition and real
/// scaling, with a magnitude for error control.
pub trait QuadValue<T: Scalar>: Copy + Send {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, t: T) -> Self;
    fn magnitude(self) -> T;
}

impl<T: Scalar> QuadValue<T> for T {
    fn zero() -> Self {
        T::zero()
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, t: T) -> Self {
        self * t
    }
    fn magnitude(self) -> T {
        self.abs()
    }
}

impl<T: Scalar> QuadValue<T> for Complex<T> {
    fn zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, t: T) -> Self {
        self * t
    }
    fn magnitude(self) -> T {
        self.norm()
    }
}

struct Segment<T, V> {
    a: T,
    b: T,
    value: V,
    error: T,
}

fn gk15<T: Scalar, V: QuadValue<T>, F: Fn(T) -> V>(f: &F, a: T, b: T) -> (V, T) {
    let half = T::from_f64c(0.5);
    let center = (a + b) * half;
    let hl = (b - a) * half;

    let mut kronrod = V::zero();
    let mut gauss = V::zero();
    for (i, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let x = T::from_f64c(x);
        let wk = T::from_f64c(wk);
        let contrib = if i == 7 {
            f(center)
        } else {
            f(center - hl * x).add(f(center + hl * x))
        };
        kronrod = kronrod.add(contrib.scale(wk));
        if i % 2 == 1 {
            gauss = gauss.add(contrib.scale(T::from_f64c(WG[i / 2])));
        }
    }
    let value = kronrod.scale(hl);
    let err = kronrod.sub(gauss).magnitude() * hl.abs();
    (value, err)
}

/// Adaptively integrate `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<T: Scalar, V: QuadValue<T>, F: Fn(T) -> V>(
    f: F,
    a: T,
    b: T,
    tol: T,
) -> Result<V> {
    integrate_with_limit(f, a, b, tol, 4000)
}

/// As [`integrate`], with an explicit cap on the number of subdivisions.
pub fn integrate_with_limit<T: Scalar, V: QuadValue<T>, F: Fn(T) -> V>(
    f: F,
    a: T,
    b: T,
    tol: T,
    max_segments: usize,
) -> Result<V> {
    if !(a < b) {
        return Err(Error::Domain(format!("empty interval [{a}, {b}]")));
    }
    let (value, error) = gk15(&f, a, b);
    let mut segments = vec![Segment {
        a,
        b,
        value,
        error,
    }];
    loop {
        let total_err = segments
            .iter()
            .fold(T::zero(), |acc, s| acc + s.error);
        if total_err <= tol {
            break;
        }
        if segments.len() >= max_segments {
            return Err(Error::Quadrature(format!(
                "tolerance {tol} not reached with {max_segments} segments (error {total_err})"
            )));
        }
        // Split the segment with the largest error estimate.
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap())
            .unwrap();
        let seg = segments.swap_remove(worst);
        let mid = (seg.a + seg.b) * T::from_f64c(0.5);
        if mid <= seg.a || mid >= seg.b {
            // Interval no longer splittable in this precision; accept it.
            segments.push(Segment {
                error: T::zero(),
                ..seg
            });
            continue;
        }
        let (lv, le) = gk15(&f, seg.a, mid);
        let (rv, re) = gk15(&f, mid, seg.b);
        segments.push(Segment {
            a: seg.a,
            b: mid,
            value: lv,
            error: le,
        });
        segments.push(Segment {
            a: mid,
            b: seg.b,
            value: rv,
            error: re,
        });
    }
    // Deterministic summation order.
    segments.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap());
    Ok(segments
        .iter()
        .fold(V::zero(), |acc, s| acc.add(s.value)))
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on [-1, 1].
///
/// Nodes are computed by Newton iteration on the Legendre polynomial and
/// symmetrized exactly about the origin.
pub fn gauss_legendre<T: Scalar>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1);
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf = T::from_f64c(n as f64);
    let m = (n + 1) / 2;
    for i in 0..m {
        // Tricomi initial guess.
        let theta = core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5);
        let mut x = T::from_f64c(theta.cos());
        let mut dp = T::one();
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P'_n(x).
            let mut p0 = T::one();
            let mut p1 = x;
            for k in 2..=n {
                let kf = T::from_f64c(k as f64);
                let p2 = ((T::from_f64c(2.0) * kf - T::one()) * x * p1
                    - (kf - T::one()) * p0)
                    / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - T::one());
            let dx = p1 / dp;
            x = x - dx;
            if dx.abs() <= T::epsilon() * (T::one() + x.abs()) {
                break;
            }
        }
        let w = T::from_f64c(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    (nodes, weights)
}

/// Gauss-Legendre rule mapped onto `[a, b]`.
pub fn gauss_legendre_on<T: Scalar>(n: usize, a: T, b: T) -> (Vec<T>, Vec<T>) {
    let (x, w) = gauss_legendre::<T>(n);
    let half = T::from_f64c(0.5);
    let mid = (a + b) * half;
    let hl = (b - a) * half;
    (
        x.iter().map(|&t| mid + hl * t).collect(),
        w.iter().map(|&t| t * hl).collect(),
    )
}
