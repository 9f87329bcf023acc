//! Noncentral chi-square law with one degree of freedom.
//!
//! The CDF is the Poisson(gamma/2) mixture of central chi-square CDFs with
//! `1 + 2j` degrees of freedom, i.e. of regularized lower incomplete gamma
//! functions `P(j + 1/2, x/2)`. The sum starts at the modal Poisson index and
//! walks outward using the three-term recurrences
//!
//! ```text
//! P(a + 1, y) = P(a, y) - t(a),   t(a) = y^a e^-y / Gamma(a + 1)
//! w(j + 1)    = w(j) * lambda / (j + 1)
//! ```
//!
//! stopping once the geometric bound on the remaining Poisson mass falls
//! below a tenth of machine epsilon.

use super::erf::erf;
use super::normal;
use super::root::brent;
use crate::error::Result;
use crate::scalar::{lit, solver_tol, Real};

const MAX_TERMS: usize = 1_000_000;

/// `ln Gamma(x)` for `x > 0`: Stirling series after shifting the argument past 15.
pub(crate) fn ln_gamma<T: Real>(x: T) -> T {
    let fifteen = lit::<T>(15.0);
    let mut shift = T::zero();
    let mut z = x;
    while z < fifteen {
        shift = shift + z.ln();
        z = z + T::one();
    }
    let inv = T::one() / z;
    let inv2 = inv * inv;
    // 1/(12z) - 1/(360z^3) + 1/(1260z^5) - 1/(1680z^7) + 1/(1188z^9) - 691/(360360z^11)
    let series = inv
        * (lit::<T>(1.0 / 12.0)
            + inv2
                * (lit::<T>(-1.0 / 360.0)
                    + inv2
                        * (lit::<T>(1.0 / 1260.0)
                            + inv2
                                * (lit::<T>(-1.0 / 1680.0)
                                    + inv2
                                        * (lit::<T>(1.0 / 1188.0)
                                            + inv2 * lit::<T>(-691.0 / 360360.0))))));
    (z - lit(0.5)) * z.ln() - z + lit::<T>(0.5) * T::TAU().ln() + series - shift
}

/// Regularized lower incomplete gamma `P(a, y)` for `a > 0`, `y > 0`.
pub(crate) fn reg_lower_gamma<T: Real>(a: T, y: T) -> T {
    let prefactor = (a * y.ln() - y - ln_gamma(a)).exp();
    if prefactor == T::zero() {
        return if y < a { T::zero() } else { T::one() };
    }
    if y < a + T::one() {
        let mut term = T::one() / a;
        let mut sum = term;
        let mut ap = a;
        for _ in 0..MAX_TERMS {
            ap = ap + T::one();
            term = term * y / ap;
            sum = sum + term;
            if term.abs() < sum.abs() * T::epsilon() {
                break;
            }
        }
        (sum * prefactor).min(T::one())
    } else {
        // Lentz evaluation of the continued fraction for Q(a, y)
        let tiny = T::min_positive_value() / T::epsilon();
        let mut b = y + T::one() - a;
        let mut c = T::one() / tiny;
        let mut d = T::one() / b;
        let mut h = d;
        let mut i = T::one();
        for _ in 0..MAX_TERMS {
            let an = -i * (i - a);
            b = b + lit(2.0);
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = T::one() / d;
            let delta = d * c;
            h = h * delta;
            if (delta - T::one()).abs() < T::epsilon() {
                break;
            }
            i = i + T::one();
        }
        (T::one() - prefactor * h).max(T::zero())
    }
}

/// CDF of chi-square(1, gamma) at `x`; arguments assumed valid.
pub(crate) fn cdf<T: Real>(x: T, gamma: T) -> T {
    if x <= T::zero() {
        return T::zero();
    }
    if x.is_infinite() {
        return T::one();
    }
    let half = lit::<T>(0.5);
    let y = x * half;
    let lambda = gamma * half;
    if lambda == T::zero() {
        return erf(y.sqrt()).min(T::one());
    }
    let threshold = T::epsilon() * lit(0.1);

    let mode = lambda.floor();
    let a_mode = mode + half;
    let w_mode = (-lambda + mode * lambda.ln() - ln_gamma(mode + T::one())).exp();
    let p_mode = if mode == T::zero() {
        erf(y.sqrt())
    } else {
        reg_lower_gamma(a_mode, y)
    };
    let t_mode = (a_mode * y.ln() - y - ln_gamma(a_mode + T::one())).exp();
    let mut total = w_mode * p_mode;

    // Downward: P(a - 1) = P(a) + t(a - 1), t(a - 1) = t(a) a / y
    let (mut j, mut a, mut w, mut p, mut t) = (mode, a_mode, w_mode, p_mode, t_mode);
    while j > T::zero() {
        t = t * a / y;
        a = a - T::one();
        p = (p + t).min(T::one());
        w = w * j / lambda;
        j = j - T::one();
        total = total + w * p;
        let r = j / lambda;
        if r < T::one() && w * r / (T::one() - r) < threshold {
            break;
        }
    }

    // Upward: P(a + 1) = P(a) - t(a), t(a + 1) = t(a) y / (a + 1)
    let (mut j, mut a, mut w, mut p, mut t) = (mode, a_mode, w_mode, p_mode, t_mode);
    for _ in 0..MAX_TERMS {
        p = (p - t).max(T::zero());
        t = t * y / (a + T::one());
        a = a + T::one();
        w = w * lambda / (j + T::one());
        j = j + T::one();
        total = total + w * p;
        let r = lambda / (j + T::one());
        if p == T::zero() || (r < T::one() && w * r / (T::one() - r) < threshold) {
            break;
        }
    }
    total.max(T::zero()).min(T::one())
}

/// Quantile of chi-square(1, gamma) at level `p` in (0, 1); arguments assumed valid.
pub(crate) fn quantile<T: Real>(p: T, gamma: T) -> Result<T> {
    let half = lit::<T>(0.5);
    let z = normal::quantile((T::one() + p) * half);
    let mut upper = z * z + gamma;
    if upper <= T::zero() {
        upper = T::epsilon();
    }
    let mut f_upper = cdf(upper, gamma) - p;
    while f_upper <= T::zero() {
        upper = upper * lit(2.0);
        f_upper = cdf(upper, gamma) - p;
    }
    brent(
        |x| cdf(x, gamma) - p,
        T::zero(),
        upper,
        -p,
        f_upper,
        solver_tol(),
        "noncentral chi-square quantile",
    )
}

/// Derivative of `mu -> sqrt(Q_p(mu^2))`.
///
/// With `h = sqrt(Q_p(mu^2))` the implicit-function derivative is
/// `[phi(|h - mu|) - phi(h + mu)] / [phi(|h - mu|) + phi(h + mu)]`, and the
/// density ratio `phi(h + mu) / phi(h - mu) = exp(-2 h mu)` reduces it to
/// `tanh(h mu)`, which does not underflow.
pub(crate) fn quantile_root_dmu<T: Real>(p: T, mu: T) -> Result<T> {
    let h = quantile(p, mu * mu)?.sqrt();
    Ok((h * mu).tanh())
}
