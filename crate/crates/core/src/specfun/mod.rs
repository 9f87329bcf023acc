//! Special functions: standard normal and noncentral chi-square (one degree
//! of freedom) distribution, quantile and quantile sensitivity.
//!
//! All functions are pure. Probability outputs are clamped to `[0, 1]`.

mod erf;
mod noncentral;
mod normal;
mod root;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{as_f64, Real};

pub use erf::{erf, erfc};

/// A value in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Probability<T>(T);

impl<T: Real> Probability<T> {
    pub fn new(value: T) -> Result<Self> {
        if value >= T::zero() && value <= T::one() {
            Ok(Probability(value))
        } else {
            Err(Error::domain(
                "probability",
                as_f64(value),
                "must lie in [0, 1]",
            ))
        }
    }

    /// Clamps into `[0, 1]`; NaN maps to zero.
    pub(crate) fn clamped(value: T) -> Self {
        if value.is_nan() {
            return Probability(T::zero());
        }
        Probability(value.max(T::zero()).min(T::one()))
    }

    pub fn get(self) -> T {
        self.0
    }

    /// `1 - p`.
    pub fn complement(self) -> Self {
        Probability(T::one() - self.0)
    }

    fn open(self, name: &'static str) -> Result<T> {
        if self.0 > T::zero() && self.0 < T::one() {
            Ok(self.0)
        } else {
            Err(Error::domain(name, as_f64(self.0), "must lie in (0, 1)"))
        }
    }
}

/// Noncentrality parameter of a chi-square law; finite and nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Noncentrality<T>(T);

impl<T: Real> Noncentrality<T> {
    pub fn new(gamma: T) -> Result<Self> {
        if gamma.is_finite() && gamma >= T::zero() {
            Ok(Noncentrality(gamma))
        } else {
            Err(Error::domain(
                "gamma",
                as_f64(gamma),
                "must be finite and >= 0",
            ))
        }
    }

    pub fn central() -> Self {
        Noncentrality(T::zero())
    }

    pub fn get(self) -> T {
        self.0
    }
}

/// Standard normal CDF.
pub fn norm_cdf<T: Real>(x: T) -> Result<Probability<T>> {
    if !x.is_finite() {
        return Err(Error::domain("x", as_f64(x), "must be finite"));
    }
    Ok(Probability::clamped(normal::cdf(x)))
}

/// Standard normal density.
pub fn norm_pdf<T: Real>(x: T) -> T {
    normal::pdf(x)
}

/// Standard normal quantile for `p` in (0, 1).
pub fn norm_quantile<T: Real>(p: Probability<T>) -> Result<T> {
    Ok(normal::quantile(p.open("p")?))
}

/// CDF of chi-square(1, gamma).
pub fn chisq1_cdf<T: Real>(x: T, gamma: Noncentrality<T>) -> Result<Probability<T>> {
    if x.is_nan() || x < T::zero() {
        return Err(Error::domain("x", as_f64(x), "must be >= 0"));
    }
    Ok(Probability::clamped(noncentral::cdf(x, gamma.0)))
}

/// Quantile of chi-square(1, gamma) for `p` in (0, 1); always `>= 0`.
pub fn chisq1_quantile<T: Real>(p: Probability<T>, gamma: Noncentrality<T>) -> Result<T> {
    noncentral::quantile(p.open("p")?, gamma.0)
}

/// Derivative with respect to `mu` of `sqrt(Q_p(mu^2))`, where `Q_p` is the
/// chi-square(1, mu^2) quantile. Lies in `[0, 1)`, positive for `mu > 0`.
pub fn chisq1_quantile_dmu<T: Real>(p: Probability<T>, mu: T) -> Result<T> {
    if !mu.is_finite() || mu < T::zero() {
        return Err(Error::domain("mu", as_f64(mu), "must be finite and >= 0"));
    }
    noncentral::quantile_root_dmu(p.open("p")?, mu)
}

/// Upper-tail probability `1 - F(x; 1, gamma)` for a valid argument pair.
pub(crate) fn chisq1_survival<T: Real>(x: T, gamma: T) -> Probability<T> {
    if gamma == T::zero() {
        return Probability::clamped(erfc((x / (T::one() + T::one())).sqrt()));
    }
    Probability::clamped(T::one() - noncentral::cdf(x, gamma))
}

pub(crate) fn chisq1_quantile_unchecked<T: Real>(p: T, gamma: T) -> Result<T> {
    noncentral::quantile(p, gamma)
}

pub(crate) fn norm_quantile_unchecked<T: Real>(p: T) -> T {
    normal::quantile(p)
}
