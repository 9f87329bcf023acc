//! Confidence intervals for theta2 and tuning of the penalty weight.
//!
//! Three interval families are available:
//!
//! * standard: `y2 +- z`, ignoring y1;
//! * partial (C1): upper alpha-cut of the marginalized centered contour,
//!   half-width `[lambda B + z s] / (1 + 2 lambda)`;
//! * regularized (C2): upper alpha-cut of the marginalized uncentered
//!   contour, half-width `sqrt(Q_{1-alpha}(g) s^2) / (1 + 2 lambda)`,
//!
//! where `z = z_{1 - alpha/2}`, `s^2 = lambda^2 + (1 + lambda)^2` and
//! `g = lambda^2 B^2 / s^2`. Both regularized families share the center
//! `[lambda y1 + (1 + lambda) y2] / (1 + 2 lambda)`, and their lengths do not
//! depend on the data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::im::{center, scale_sq, HolderBound, Observation, PenaltyWeight};
use crate::optimize::{minimize_scalar, BracketConfig};
use crate::scalar::{as_f64, lit, Real};
use crate::specfun::{
    chisq1_quantile_unchecked, norm_quantile_unchecked, Noncentrality, Probability,
};

/// Smallest accepted alpha; the largest is `1 - ALPHA_MARGIN`.
pub const ALPHA_MARGIN: f64 = 1e-6;

/// Closed interval `[lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval<T> {
    lower: T,
    upper: T,
}

impl<T: Real> Interval<T> {
    pub fn new(lower: T, upper: T) -> Result<Self> {
        if lower <= upper {
            Ok(Interval { lower, upper })
        } else {
            Err(Error::domain(
                "lower",
                as_f64(lower),
                "must not exceed upper",
            ))
        }
    }

    pub fn lower(&self) -> T {
        self.lower
    }

    pub fn upper(&self) -> T {
        self.upper
    }

    pub fn length(&self) -> T {
        self.upper - self.lower
    }

    pub fn contains(&self, x: T) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn is_subset_of(&self, other: &Interval<T>) -> bool {
        other.lower <= self.lower && self.upper <= other.upper
    }
}

/// Outcome of penalty-weight tuning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TunedResult<T> {
    pub lambda_star: PenaltyWeight<T>,
    pub length_star: T,
    pub evaluations: usize,
}

/// Interval family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Standard,
    #[serde(rename = "partial")]
    PartialC1,
    #[serde(rename = "regularized")]
    RegularizedC2,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Standard, Method::PartialC1, Method::RegularizedC2];

    pub fn name(self) -> &'static str {
        match self {
            Method::Standard => "standard",
            Method::PartialC1 => "partial",
            Method::RegularizedC2 => "regularized",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Checks `alpha` lies in `(ALPHA_MARGIN, 1 - ALPHA_MARGIN)`.
pub fn check_alpha<T: Real>(alpha: Probability<T>) -> Result<T> {
    let a = alpha.get();
    let margin = lit::<T>(ALPHA_MARGIN);
    if a > margin && a < T::one() - margin {
        Ok(a)
    } else {
        Err(Error::domain(
            "alpha",
            as_f64(a),
            "must lie in (1e-6, 1 - 1e-6)",
        ))
    }
}

/// `z_{1 - alpha/2}` for an already checked alpha.
fn two_sided_z<T: Real>(alpha: T) -> T {
    norm_quantile_unchecked(T::one() - alpha / lit(2.0))
}

/// `g(lambda, B) = lambda^2 B^2 / [lambda^2 + (1 + lambda)^2]`, in `[0, B^2 / 2)`.
pub fn noncentrality_g<T: Real>(
    lambda: PenaltyWeight<T>,
    bound: HolderBound<T>,
) -> Noncentrality<T> {
    let l = lambda.get();
    let b = bound.get();
    let g = if l == T::zero() || b == T::zero() {
        T::zero()
    } else {
        // divide first so lambda^2 cannot overflow
        let ratio = l / (T::one() + l);
        let r2 = ratio * ratio;
        r2 * b * b / (r2 + T::one())
    };
    Noncentrality::new(g).expect("g is finite and nonnegative")
}

/// Half-width and method of an interval family at fixed `(alpha, B, lambda)`.
///
/// Lengths do not depend on the data, so the width is computed once and the
/// rule can then be applied to any number of observations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalRule<T> {
    method: Method,
    lambda: T,
    half_width: T,
}

impl<T: Real> IntervalRule<T> {
    pub fn new(
        method: Method,
        alpha: Probability<T>,
        bound: HolderBound<T>,
        lambda: PenaltyWeight<T>,
    ) -> Result<Self> {
        let a = check_alpha(alpha)?;
        let l = match method {
            Method::Standard => T::zero(),
            _ => lambda.get(),
        };
        let denom = T::one() + lit::<T>(2.0) * l;
        let half_width = match method {
            Method::Standard => two_sided_z(a),
            Method::PartialC1 => (l * bound.get() + two_sided_z(a) * scale_sq(l).sqrt()) / denom,
            Method::RegularizedC2 => {
                let g = noncentrality_g(PenaltyWeight::new(l)?, bound).get();
                // the central quantile is z^2; use z itself so the two rules agree exactly
                let root_q = if g == T::zero() {
                    two_sided_z(a)
                } else {
                    chisq1_quantile_unchecked(T::one() - a, g)?.sqrt()
                };
                root_q * scale_sq(l).sqrt() / denom
            }
        };
        Ok(IntervalRule {
            method,
            lambda: l,
            half_width,
        })
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn length(&self) -> T {
        self.half_width + self.half_width
    }

    pub fn interval(&self, y: &Observation<T>) -> Interval<T> {
        let mid = match self.method {
            Method::Standard => y.y2(),
            _ => center(y, self.lambda),
        };
        Interval {
            lower: mid - self.half_width,
            upper: mid + self.half_width,
        }
    }
}

/// Textbook interval `[y2 - z, y2 + z]`.
pub fn ci_standard<T: Real>(y2: T, alpha: Probability<T>) -> Result<Interval<T>> {
    let a = check_alpha(alpha)?;
    let z = two_sided_z(a);
    Ok(Interval {
        lower: y2 - z,
        upper: y2 + z,
    })
}

/// Partial-conditioning interval from the centered statistic.
pub fn ci_partial<T: Real>(
    y: &Observation<T>,
    alpha: Probability<T>,
    bound: HolderBound<T>,
    lambda: PenaltyWeight<T>,
) -> Result<Interval<T>> {
    Ok(IntervalRule::new(Method::PartialC1, alpha, bound, lambda)?.interval(y))
}

/// Regularized interval from the uncentered statistic.
pub fn ci_regularized<T: Real>(
    y: &Observation<T>,
    alpha: Probability<T>,
    bound: HolderBound<T>,
    lambda: PenaltyWeight<T>,
) -> Result<Interval<T>> {
    Ok(IntervalRule::new(Method::RegularizedC2, alpha, bound, lambda)?.interval(y))
}

/// Length of the partial-conditioning interval.
pub fn len_l1<T: Real>(
    lambda: PenaltyWeight<T>,
    alpha: Probability<T>,
    bound: HolderBound<T>,
) -> Result<T> {
    Ok(IntervalRule::new(Method::PartialC1, alpha, bound, lambda)?.length())
}

/// Length of the regularized interval; never exceeds [`len_l1`].
pub fn len_l2<T: Real>(
    lambda: PenaltyWeight<T>,
    alpha: Probability<T>,
    bound: HolderBound<T>,
) -> Result<T> {
    Ok(IntervalRule::new(Method::RegularizedC2, alpha, bound, lambda)?.length())
}

fn positive_bound<T: Real>(bound: HolderBound<T>) -> Result<T> {
    let b = bound.get();
    if b > T::zero() {
        Ok(b)
    } else {
        Err(Error::domain(
            "B",
            as_f64(b),
            "must be > 0 to tune lambda; at B = 0 the optimal length is the lambda -> inf limit sqrt(2) z",
        ))
    }
}

/// Closed-form minimizer of [`len_l1`]:
/// `(-B + sqrt(2 z^2 - B^2)) / (2B)` when `B <= z`, otherwise zero.
pub fn lambda1_star<T: Real>(
    alpha: Probability<T>,
    bound: HolderBound<T>,
) -> Result<PenaltyWeight<T>> {
    let a = check_alpha(alpha)?;
    let b = positive_bound(bound)?;
    let z = two_sided_z(a);
    if b <= z {
        let two = lit::<T>(2.0);
        PenaltyWeight::new((-b + (two * z * z - b * b).sqrt()) / (two * b))
    } else {
        Ok(PenaltyWeight::zero())
    }
}

/// Minimum of [`len_l1`] over lambda: `B + sqrt(2 z^2 - B^2)` for `B <= z`,
/// `2z` beyond, and `sqrt(2) z` at `B = 0`.
pub fn optimal_length_l1<T: Real>(alpha: Probability<T>, bound: HolderBound<T>) -> Result<T> {
    let a = check_alpha(alpha)?;
    let b = bound.get();
    let z = two_sided_z(a);
    if b <= z {
        Ok(b + (lit::<T>(2.0) * z * z - b * b).sqrt())
    } else {
        Ok(z + z)
    }
}

/// Numerical minimizer of [`len_l2`] over lambda.
pub fn lambda2_star<T: Real>(
    alpha: Probability<T>,
    bound: HolderBound<T>,
) -> Result<TunedResult<T>> {
    lambda2_star_with(alpha, bound, &BracketConfig::default())
}

pub fn lambda2_star_with<T: Real>(
    alpha: Probability<T>,
    bound: HolderBound<T>,
    config: &BracketConfig<T>,
) -> Result<TunedResult<T>> {
    check_alpha(alpha)?;
    positive_bound(bound)?;
    let mut failure = None;
    let objective = |l: T| match PenaltyWeight::new(l).and_then(|lw| len_l2(lw, alpha, bound)) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            T::nan()
        }
    };
    let best = minimize_scalar(objective, config)?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(TunedResult {
        lambda_star: PenaltyWeight::new(best.argmin)?,
        length_star: best.min,
        evaluations: best.evaluations,
    })
}

/// Minimum of [`len_l2`] over lambda; `sqrt(2) z` at `B = 0`.
pub fn optimal_length_l2<T: Real>(alpha: Probability<T>, bound: HolderBound<T>) -> Result<T> {
    if bound.get() == T::zero() {
        return optimal_length_l1(alpha, bound);
    }
    Ok(lambda2_star(alpha, bound)?.length_star)
}
