//! Derivative-free minimization of a scalar function on `[0, inf)`.
//!
//! The objective must decrease away from zero and eventually increase.
//! The bracket `[0, u]` is grown by doubling `u` until the objective rises
//! over the last doubling, then golden-section search shrinks the bracket
//! by a fixed ratio per iteration until it is narrower than the tolerance.

use crate::error::{Error, Result};
use crate::scalar::{as_f64, lit, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketConfig<T> {
    /// First trial upper end of the bracket.
    pub initial_upper: T,
    /// Maximum number of times the upper end may be doubled.
    pub max_doublings: usize,
    /// Final bracket width.
    pub tolerance: T,
}

impl<T: Real> BracketConfig<T> {
    pub fn new(initial_upper: T, max_doublings: usize, tolerance: T) -> Result<Self> {
        if !(initial_upper.is_finite() && initial_upper > T::zero()) {
            return Err(Error::domain(
                "initial_upper",
                as_f64(initial_upper),
                "must be finite and > 0",
            ));
        }
        if !(tolerance.is_finite() && tolerance > T::zero()) {
            return Err(Error::domain(
                "tolerance",
                as_f64(tolerance),
                "must be finite and > 0",
            ));
        }
        if max_doublings == 0 {
            return Err(Error::domain("max_doublings", 0.0, "must be >= 1"));
        }
        Ok(BracketConfig {
            initial_upper,
            max_doublings,
            tolerance,
        })
    }
}

impl<T: Real> Default for BracketConfig<T> {
    fn default() -> Self {
        BracketConfig {
            initial_upper: T::one(),
            max_doublings: 60,
            tolerance: lit(1e-8),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum<T> {
    pub argmin: T,
    pub min: T,
    /// Final bracket; `argmin` lies inside it.
    pub bracket: (T, T),
    pub evaluations: usize,
}

/// `(sqrt(5) - 1) / 2`
fn inv_phi<T: Real>() -> T {
    (lit::<T>(5.0).sqrt() - T::one()) / lit(2.0)
}

/// Minimizes `f` over `[0, inf)`; see the module docs for the contract.
pub fn minimize_scalar<T, F>(mut f: F, config: &BracketConfig<T>) -> Result<Minimum<T>>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let mut evaluations = 0usize;
    let mut eval = |x: T| {
        evaluations += 1;
        f(x)
    };

    let f0 = eval(T::zero());
    let (mut before, mut prev, mut f_prev) = (T::zero(), T::zero(), f0);
    let mut upper = config.initial_upper;
    let mut f_upper = eval(upper);
    let mut doublings = 0;
    while f_upper <= f_prev {
        if doublings == config.max_doublings {
            return Err(Error::BracketFailure {
                doublings,
                upper: as_f64(upper),
            });
        }
        before = prev;
        prev = upper;
        f_prev = f_upper;
        upper = upper + upper;
        f_upper = eval(upper);
        doublings += 1;
    }

    let (mut lo, mut hi) = (before, upper);
    let r = inv_phi::<T>();
    let mut c = hi - r * (hi - lo);
    let mut d = lo + r * (hi - lo);
    let mut fc = eval(c);
    let mut fd = eval(d);
    while hi - lo > config.tolerance {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - r * (hi - lo);
            fc = eval(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + r * (hi - lo);
            fd = eval(d);
        }
    }
    let f_lo = if lo == T::zero() { f0 } else { eval(lo) };
    let f_hi = eval(hi);
    let (argmin, min) = [(lo, f_lo), (c, fc), (d, fd), (hi, f_hi)]
        .into_iter()
        .filter(|&(x, _)| x >= lo && x <= hi)
        .fold(
            (lo, f_lo),
            |best, cand| if cand.1 < best.1 { cand } else { best },
        );
    Ok(Minimum {
        argmin,
        min,
        bracket: (lo, hi),
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic() {
        let m = minimize_scalar(|x: f64| (x - 2.0) * (x - 2.0), &BracketConfig::default()).unwrap();
        assert!((m.argmin - 2.0).abs() < 1e-8);
        assert!(m.bracket.1 - m.bracket.0 <= 1e-8);
    }

    #[test]
    fn kinked() {
        let m = minimize_scalar(
            |x: f64| (x - 1.0).abs() + 0.1 * x,
            &BracketConfig::default(),
        )
        .unwrap();
        assert!((m.argmin - 1.0).abs() < 1e-6);
    }

    #[test]
    fn far_minimum_needs_doublings() {
        let m = minimize_scalar(|x: f64| (x - 300.0).powi(2), &BracketConfig::default()).unwrap();
        assert!((m.argmin - 300.0).abs() < 1e-6);
    }

    #[test]
    fn minimum_below_initial_upper() {
        let cfg = BracketConfig::new(10.0, 5, 1e-10).unwrap();
        let m = minimize_scalar(|x: f64| (x - 0.01).powi(2), &cfg).unwrap();
        assert!((m.argmin - 0.01).abs() < 1e-9);
    }

    #[test]
    fn monotone_objective_fails_to_bracket() {
        let cfg = BracketConfig::new(1.0, 8, 1e-8).unwrap();
        let err = minimize_scalar(|x: f64| -x, &cfg).unwrap_err();
        assert_eq!(
            err,
            Error::BracketFailure {
                doublings: 8,
                upper: 256.0
            }
        );
    }

    #[test]
    fn returned_min_dominates_probes() {
        let f = |x: f64| (x - 0.7).powi(2) * (1.0 + x) - 0.3 * x;
        let cfg = BracketConfig::<f64>::default();
        let m = minimize_scalar(f, &cfg).unwrap();
        assert!(m.min <= f(0.0));
        assert!(m.min <= f(cfg.initial_upper));
        assert!(m.min <= f(m.bracket.0) && m.min <= f(m.bracket.1));
    }

    #[test]
    fn shrinks_by_golden_ratio() {
        // [0, 4] after two doublings for a minimum at 1.5 ... bracket is [1, 4]
        let mut calls = 0;
        let m = minimize_scalar(
            |x: f64| {
                calls += 1;
                (x - 1.5).powi(2)
            },
            &BracketConfig::default(),
        )
        .unwrap();
        let width0: f64 = 4.0 - 1.0;
        let r = (5f64.sqrt() - 1.0) / 2.0;
        let iterations = ((1e-8 / width0).ln() / r.ln()).ceil() as usize;
        // f(0), f(1), f(2), f(4), two interior probes, one per iteration, two ends
        assert_eq!(m.evaluations, 4 + 2 + iterations + 2);
        assert_eq!(calls, m.evaluations);
    }

    #[test]
    fn config_validation() {
        assert!(BracketConfig::new(0.0, 3, 1e-8).is_err());
        assert!(BracketConfig::new(1.0, 0, 1e-8).is_err());
        assert!(BracketConfig::new(1.0, 3, 0.0).is_err());
    }
}
