//! Monte Carlo audit of frequentist validity and interval coverage.
//!
//! Replication `i` draws its pair of normals from a ChaCha8 stream selected
//! by `(seed, i)`, so results do not depend on how replications are
//! scheduled across threads. Counts are integers and interval lengths do not
//! depend on the data, so aggregation is exact.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::im::{
    contour_joint_t1, contour_joint_t2, contour_marginal_t1, contour_marginal_t2, contour_standard,
    HolderBound, MeanPair, Observation, PenaltyWeight,
};
use crate::intervals::{check_alpha, lambda1_star, lambda2_star, IntervalRule, Method};
use crate::specfun::Probability;

/// Alpha levels checked by [`simulate_contour_validity`].
pub const VALIDITY_ALPHAS: [f64; 5] = [0.01, 0.05, 0.1, 0.2, 0.5];

/// Width of the one-sided acceptance band, in standard errors.
pub const BAND_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LambdaMode {
    Fixed(PenaltyWeight<f64>),
    Tuned,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub n_reps: usize,
    pub seed: u64,
    pub alpha: Probability<f64>,
    pub bound: HolderBound<f64>,
    pub theta_true: MeanPair<f64>,
    pub method: Method,
    pub lambda_mode: LambdaMode,
}

impl McConfig {
    pub fn new(
        n_reps: usize,
        seed: u64,
        alpha: Probability<f64>,
        bound: HolderBound<f64>,
        theta_true: MeanPair<f64>,
        method: Method,
        lambda_mode: LambdaMode,
    ) -> Result<Self> {
        let config = McConfig {
            n_reps,
            seed,
            alpha,
            bound,
            theta_true,
            method,
            lambda_mode,
        };
        config.check()?;
        Ok(config)
    }

    fn check(&self) -> Result<()> {
        if self.n_reps == 0 {
            return Err(Error::domain("n_reps", 0.0, "must be >= 1"));
        }
        check_alpha(self.alpha)?;
        if !self.theta_true.satisfies(self.bound) {
            return Err(Error::Constraint {
                theta1: self.theta_true.theta1(),
                theta2: self.theta_true.theta2(),
                bound: self.bound.get(),
            });
        }
        Ok(())
    }

    /// Penalty weight actually used: zero for the standard method, the fixed
    /// value, or the length-minimizing weight for the configured alpha.
    pub fn resolve_lambda(&self) -> Result<f64> {
        Ok(match (self.method, self.lambda_mode) {
            (Method::Standard, _) => 0.0,
            (_, LambdaMode::Fixed(l)) => l.get(),
            (Method::PartialC1, LambdaMode::Tuned) => lambda1_star(self.alpha, self.bound)?.get(),
            (Method::RegularizedC2, LambdaMode::Tuned) => {
                lambda2_star(self.alpha, self.bound)?.lambda_star.get()
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverageReport {
    pub method: Method,
    pub alpha: f64,
    pub lambda: f64,
    pub n_reps: usize,
    pub seed: u64,
    /// Fraction of replications whose interval (upper alpha-cut) covers theta2.
    pub empirical_coverage: f64,
    /// Fraction of replications with contour value at the truth `<= alpha`.
    pub empirical_alpha_exceedance: f64,
    /// `sqrt(p (1 - p) / n)` at the empirical coverage.
    pub std_error: f64,
    pub mean_length: f64,
}

impl CoverageReport {
    fn from_count(
        method: Method,
        alpha: f64,
        lambda: f64,
        config: &McConfig,
        misses: u64,
        length: f64,
    ) -> Self {
        let n = config.n_reps as f64;
        let exceed = misses as f64 / n;
        let coverage = 1.0 - exceed;
        CoverageReport {
            method,
            alpha,
            lambda,
            n_reps: config.n_reps,
            seed: config.seed,
            empirical_coverage: coverage,
            empirical_alpha_exceedance: exceed,
            std_error: (coverage * (1.0 - coverage) / n).sqrt(),
            mean_length: length,
        }
    }

    /// Binomial standard error at the nominal level, `sqrt(alpha (1 - alpha) / n)`.
    pub fn nominal_std_error(&self) -> f64 {
        (self.alpha * (1.0 - self.alpha) / self.n_reps as f64).sqrt()
    }

    /// One-sided check: `exceedance <= alpha + 3 se`.
    pub fn is_valid(&self) -> bool {
        self.empirical_alpha_exceedance <= self.alpha + BAND_SIGMAS * self.nominal_std_error()
    }

    /// Two-sided check: `|exceedance - alpha| <= 3 se`, expected for exact pivots.
    pub fn is_exact(&self) -> bool {
        (self.empirical_alpha_exceedance - self.alpha).abs()
            <= BAND_SIGMAS * self.nominal_std_error()
    }
}

/// Draws replication `index` of the data under `theta`.
pub fn draw_observation(seed: u64, index: u64, theta: &MeanPair<f64>) -> Observation<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let e1: f64 = StandardNormal.sample(&mut rng);
    let e2: f64 = StandardNormal.sample(&mut rng);
    Observation::new(theta.theta1() + e1, theta.theta2() + e2).expect("finite draw")
}

fn count_parallel<F>(config: &McConfig, miss: F) -> u64
where
    F: Fn(&Observation<f64>) -> bool + Sync,
{
    (0..config.n_reps as u64)
        .into_par_iter()
        .map(|i| miss(&draw_observation(config.seed, i, &config.theta_true)) as u64)
        .sum()
}

/// Coverage of theta2 by the configured method's interval.
pub fn simulate_coverage(config: &McConfig) -> Result<CoverageReport> {
    config.check()?;
    let lambda = config.resolve_lambda()?;
    let rule = IntervalRule::new(
        config.method,
        config.alpha,
        config.bound,
        PenaltyWeight::new(lambda)?,
    )?;
    let theta2 = config.theta_true.theta2();
    let misses = count_parallel(config, |y| !rule.interval(y).contains(theta2));
    Ok(CoverageReport::from_count(
        config.method,
        config.alpha.get(),
        lambda,
        config,
        misses,
        rule.length(),
    ))
}

/// `P{contour(Y, theta) <= alpha}` at the true parameter, for each alpha in
/// [`VALIDITY_ALPHAS`].
///
/// With `theta2_component_only` the marginal contour for theta2 is audited,
/// otherwise the joint contour (the standard method has only the former).
/// A tuned penalty weight is tuned once at `config.alpha` and reused.
pub fn simulate_contour_validity(
    config: &McConfig,
    theta2_component_only: bool,
) -> Result<Vec<CoverageReport>> {
    config.check()?;
    let lambda = config.resolve_lambda()?;
    let lw = PenaltyWeight::new(lambda)?;
    let (theta, bound) = (config.theta_true, config.bound);
    let contour = |y: &Observation<f64>| -> f64 {
        let t2 = theta.theta2();
        match (config.method, theta2_component_only) {
            (Method::Standard, _) => contour_standard(y.y2(), t2),
            (Method::PartialC1, true) => contour_marginal_t1(y, t2, lw, bound),
            (Method::PartialC1, false) => contour_joint_t1(y, &theta, lw),
            (Method::RegularizedC2, true) => contour_marginal_t2(y, t2, lw, bound),
            (Method::RegularizedC2, false) => contour_joint_t2(y, &theta, lw),
        }
        .get()
    };
    let counts = (0..config.n_reps as u64)
        .into_par_iter()
        .map(|i| {
            let v = contour(&draw_observation(config.seed, i, &theta));
            VALIDITY_ALPHAS.map(|a| (v <= a) as u64)
        })
        .reduce(
            || [0; 5],
            |mut acc, c| {
                acc.iter_mut().zip(c).for_each(|(s, x)| *s += x);
                acc
            },
        );
    VALIDITY_ALPHAS
        .iter()
        .zip(counts)
        .map(|(&a, misses)| {
            let rule = IntervalRule::new(config.method, Probability::new(a)?, bound, lw)?;
            Ok(CoverageReport::from_count(
                config.method,
                a,
                lambda,
                config,
                misses,
                rule.length(),
            ))
        })
        .collect()
}
