//! Standard normal distribution.

use super::erf::erfc;
use crate::scalar::{lit, Real};

// Acklam's rational approximation for the normal quantile; refined below.
const A: [f64; 6] = [
    -3.969683028665376e+01,
    2.209460984245205e+02,
    -2.759285104469687e+02,
    1.38357751867269e+02,
    -3.066479806614716e+01,
    2.506628277459239e+00,
];
const B: [f64; 5] = [
    -5.447609879822406e+01,
    1.615858368580409e+02,
    -1.556989798598866e+02,
    6.680131188771972e+01,
    -1.328068155288572e+01,
];
const C: [f64; 6] = [
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e+00,
    -2.549732539343734e+00,
    4.374664141464968e+00,
    2.938163982698783e+00,
];
const D: [f64; 4] = [
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e+00,
    3.754408661907416e+00,
];
const P_LOW: f64 = 0.02425;

pub(crate) fn pdf<T: Real>(x: T) -> T {
    (-(x * x) / lit(2.0)).exp() / (T::TAU()).sqrt()
}

pub(crate) fn cdf<T: Real>(x: T) -> T {
    lit::<T>(0.5) * erfc(-x / T::SQRT_2())
}

fn poly<T: Real>(coeffs: &[f64], x: T) -> T {
    coeffs.iter().fold(T::zero(), |acc, &c| acc * x + lit(c))
}

fn acklam_lower<T: Real>(p: T) -> T {
    if p < lit(P_LOW) {
        let q = (lit::<T>(-2.0) * p.ln()).sqrt();
        poly(&C, q) / (poly(&D, q) * q + T::one())
    } else {
        let q = p - lit(0.5);
        let r = q * q;
        poly(&A, r) * q / (poly(&B, r) * r + T::one())
    }
}

/// Quantile for `p` in (0, 1); no argument checking.
pub(crate) fn quantile<T: Real>(p: T) -> T {
    if p == lit(0.5) {
        return T::zero();
    }
    if p > lit(0.5) {
        // 1 - p is exact on [0.5, 1]
        return -quantile(T::one() - p);
    }
    let mut z = acklam_lower(p);
    // Halley steps against the accurate lower-tail CDF
    for _ in 0..2 {
        let e = cdf(z) - p;
        let u = e / pdf(z);
        z = z - u / (T::one() + z * u / lit(2.0));
    }
    z
}
