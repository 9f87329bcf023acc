//! Regularized estimator, Wald-type statistics and possibility contours for
//! the two-normal-means model `Y_i ~ N(theta_i, 1)`, with `theta2` focal and
//! `theta1` a nuisance restricted to `|theta1 - theta2| <= B`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::intervals::noncentrality_g;
use crate::scalar::{as_f64, lit, Real};
use crate::specfun::{chisq1_survival, Probability};

/// Observed pair `(y1, y2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Observation<T> {
    y1: T,
    y2: T,
}

impl<T: Real> Observation<T> {
    pub fn new(y1: T, y2: T) -> Result<Self> {
        finite("y1", y1)?;
        finite("y2", y2)?;
        Ok(Observation { y1, y2 })
    }

    pub fn y1(&self) -> T {
        self.y1
    }

    pub fn y2(&self) -> T {
        self.y2
    }
}

/// Pair of means `(theta1, theta2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanPair<T> {
    theta1: T,
    theta2: T,
}

impl<T: Real> MeanPair<T> {
    pub fn new(theta1: T, theta2: T) -> Result<Self> {
        finite("theta1", theta1)?;
        finite("theta2", theta2)?;
        Ok(MeanPair { theta1, theta2 })
    }

    /// Like [`MeanPair::new`] but also enforces `|theta1 - theta2| <= B`.
    pub fn constrained(theta1: T, theta2: T, bound: HolderBound<T>) -> Result<Self> {
        let pair = Self::new(theta1, theta2)?;
        if pair.satisfies(bound) {
            Ok(pair)
        } else {
            Err(Error::Constraint {
                theta1: as_f64(theta1),
                theta2: as_f64(theta2),
                bound: as_f64(bound.get()),
            })
        }
    }

    pub fn theta1(&self) -> T {
        self.theta1
    }

    pub fn theta2(&self) -> T {
        self.theta2
    }

    pub fn satisfies(&self, bound: HolderBound<T>) -> bool {
        (self.theta1 - self.theta2).abs() <= bound.get()
    }
}

/// Ridge weight on `(theta1 - theta2)^2`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct PenaltyWeight<T>(T);

impl<T: Real> PenaltyWeight<T> {
    pub fn new(lambda: T) -> Result<Self> {
        nonnegative("lambda", lambda).map(PenaltyWeight)
    }

    pub fn zero() -> Self {
        PenaltyWeight(T::zero())
    }

    pub fn get(self) -> T {
        self.0
    }
}

/// Known radius `B` of the constraint `|theta1 - theta2| <= B`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct HolderBound<T>(T);

impl<T: Real> HolderBound<T> {
    pub fn new(bound: T) -> Result<Self> {
        nonnegative("B", bound).map(HolderBound)
    }

    pub fn get(self) -> T {
        self.0
    }
}

fn finite<T: Real>(name: &'static str, value: T) -> Result<T> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::domain(name, as_f64(value), "must be finite"))
    }
}

fn nonnegative<T: Real>(name: &'static str, value: T) -> Result<T> {
    if value.is_finite() && value >= T::zero() {
        Ok(value)
    } else {
        Err(Error::domain(
            name,
            as_f64(value),
            "must be finite and >= 0",
        ))
    }
}

/// `lambda^2 + (1 + lambda)^2`, the variance of `lambda Y1 + (1 + lambda) Y2`.
pub(crate) fn scale_sq<T: Real>(lambda: T) -> T {
    let one_plus = T::one() + lambda;
    lambda * lambda + one_plus * one_plus
}

/// `lambda y1 + (1 + lambda) y2`; the regularized estimate of theta2 times `1 + 2 lambda`.
pub(crate) fn weighted_sum<T: Real>(y: &Observation<T>, lambda: T) -> T {
    lambda * y.y1 + (T::one() + lambda) * y.y2
}

/// Center `[lambda y1 + (1 + lambda) y2] / (1 + 2 lambda)` shared by every
/// regularized interval and contour.
pub(crate) fn center<T: Real>(y: &Observation<T>, lambda: T) -> T {
    weighted_sum(y, lambda) / (T::one() + lit::<T>(2.0) * lambda)
}

/// Minimizer of [`rnll`].
pub fn regularized_mle<T: Real>(y: &Observation<T>, lambda: PenaltyWeight<T>) -> MeanPair<T> {
    let l = lambda.0;
    let denom = T::one() + lit::<T>(2.0) * l;
    MeanPair {
        theta1: ((T::one() + l) * y.y1 + l * y.y2) / denom,
        theta2: weighted_sum(y, l) / denom,
    }
}

/// Ridge-penalized negative log-likelihood (constants dropped).
pub fn rnll<T: Real>(theta: &MeanPair<T>, lambda: PenaltyWeight<T>, y: &Observation<T>) -> T {
    let half = lit::<T>(0.5);
    let r1 = y.y1 - theta.theta1;
    let r2 = y.y2 - theta.theta2;
    let d = theta.theta1 - theta.theta2;
    half * (r1 * r1 + r2 * r2 + lambda.0 * d * d)
}

/// Centered statistic, chi-square(1, 0) under the true `theta`.
pub fn t1_statistic<T: Real>(
    y: &Observation<T>,
    theta: &MeanPair<T>,
    lambda: PenaltyWeight<T>,
) -> T {
    let l = lambda.0;
    let t2 = theta.theta2;
    let num = l * (y.y1 - t2) + (T::one() + l) * (y.y2 - t2) - l * (theta.theta1 - t2);
    num * num / scale_sq(l)
}

/// Uncentered statistic; chi-square(1, g) with `g = lambda^2 (theta1 - theta2)^2 / s^2`.
pub fn t2_statistic<T: Real>(y: &Observation<T>, theta2: T, lambda: PenaltyWeight<T>) -> T {
    let l = lambda.0;
    let num = l * (y.y1 - theta2) + (T::one() + l) * (y.y2 - theta2);
    num * num / scale_sq(l)
}

/// Marginal contour for theta2 that ignores y1.
pub fn contour_standard<T: Real>(y2: T, theta2: T) -> Probability<T> {
    let d = y2 - theta2;
    chisq1_survival(d * d, T::zero())
}

/// Joint contour from the centered statistic.
pub fn contour_joint_t1<T: Real>(
    y: &Observation<T>,
    theta: &MeanPair<T>,
    lambda: PenaltyWeight<T>,
) -> Probability<T> {
    chisq1_survival(t1_statistic(y, theta, lambda), T::zero())
}

/// Supremum of [`contour_joint_t1`] over `theta1` in `[theta2 - B, theta2 + B]`.
///
/// Equals one on the plateau `[(S - lambda B), (S + lambda B)] / (1 + 2 lambda)`
/// with `S = lambda y1 + (1 + lambda) y2`; outside it the statistic is
/// evaluated at the nearer end of the nuisance range.
pub fn contour_marginal_t1<T: Real>(
    y: &Observation<T>,
    theta2: T,
    lambda: PenaltyWeight<T>,
    bound: HolderBound<T>,
) -> Probability<T> {
    let l = lambda.0;
    let denom = T::one() + lit::<T>(2.0) * l;
    let sum = weighted_sum(y, l);
    let shift = l * bound.0;
    let lower = (sum - shift) / denom;
    let upper = (sum + shift) / denom;
    let base = l * (y.y1 - theta2) + (T::one() + l) * (y.y2 - theta2);
    let num = if theta2 < lower {
        base - shift
    } else if theta2 > upper {
        base + shift
    } else {
        return Probability::clamped(T::one());
    };
    chisq1_survival(num * num / scale_sq(l), T::zero())
}

/// Joint contour from the uncentered statistic with its noncentral calibration.
pub fn contour_joint_t2<T: Real>(
    y: &Observation<T>,
    theta: &MeanPair<T>,
    lambda: PenaltyWeight<T>,
) -> Probability<T> {
    let l = lambda.0;
    let d = theta.theta1 - theta.theta2;
    let gamma = l * l * d * d / scale_sq(l);
    chisq1_survival(t2_statistic(y, theta.theta2, lambda), gamma)
}

/// Supremum of [`contour_joint_t2`] over the nuisance range, attained at
/// `|theta1 - theta2| = B` by stochastic monotonicity in the noncentrality.
pub fn contour_marginal_t2<T: Real>(
    y: &Observation<T>,
    theta2: T,
    lambda: PenaltyWeight<T>,
    bound: HolderBound<T>,
) -> Probability<T> {
    let gamma = noncentrality_g(lambda, bound).get();
    chisq1_survival(t2_statistic(y, theta2, lambda), gamma)
}
