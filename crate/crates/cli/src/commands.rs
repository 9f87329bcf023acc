//! Subcommand implementations. Each returns the complete output document so
//! that callers decide where it goes.

use anyhow::{bail, Context, Result};
use serde::Serialize;
use twomeans::im::{contour_marginal_t1, contour_marginal_t2, contour_standard};
use twomeans::intervals::{
    lambda1_star, lambda2_star, len_l1, len_l2, optimal_length_l1, optimal_length_l2, IntervalRule,
};
use twomeans::validate::{simulate_coverage, CoverageReport, LambdaMode, McConfig};
use twomeans::{HolderBound, MeanPair, Method, Observation, PenaltyWeight, Probability};

use crate::args::{
    CiArgs, CompareArgs, ContourArgs, LengthsArgs, PenaltyArgs, SweepSpec, SweepVar, ValidateArgs,
};
use crate::format::num;

fn csv_document<F>(header: &[&str], body: F) -> Result<String>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> Result<()>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header)?;
    body(&mut w)?;
    w.flush()?;
    Ok(String::from_utf8(w.into_inner().context("flushing CSV")?)?)
}

fn json_document<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn probability(alpha: f64) -> Result<Probability<f64>> {
    Ok(Probability::new(alpha)?)
}

fn penalty_for(method: Method, penalty: &PenaltyArgs, alpha: f64, bound: f64) -> Result<f64> {
    if method == Method::Standard {
        return Ok(0.0);
    }
    if penalty.tune {
        if bound == 0.0 {
            bail!(
                "--tune requires B > 0: at B = 0 the optimal penalty weight is infinite and the \
                 optimal length is the analytic limit sqrt(2) * z_(1-alpha/2); pass --lambda instead"
            );
        }
        let (a, b) = (probability(alpha)?, HolderBound::new(bound)?);
        return Ok(match method {
            Method::PartialC1 => lambda1_star(a, b)?.get(),
            _ => lambda2_star(a, b)?.lambda_star.get(),
        });
    }
    match penalty.lambda {
        Some(l) => Ok(PenaltyWeight::new(l)?.get()),
        None => bail!("method {method} needs --lambda or --tune"),
    }
}

/// `theta2,method,lambda,B,possibility`
pub fn contour(args: &ContourArgs) -> Result<String> {
    let method = Method::from(args.method);
    let y = Observation::new(args.y1, args.y2)?;
    let bound = HolderBound::new(args.bound)?;
    twomeans::intervals::check_alpha(probability(args.alpha)?)?;
    let lambda = penalty_for(method, &args.penalty, args.alpha, args.bound)?;
    let lw = PenaltyWeight::new(lambda)?;
    let sweep = match args.sweep {
        Some(s) => {
            s.expect(SweepVar::Theta2).map_err(anyhow::Error::msg)?;
            s
        }
        None => SweepSpec::new(SweepVar::Theta2, args.y2 - 5.0, args.y2 + 5.0, 201)
            .map_err(anyhow::Error::msg)?,
    };
    csv_document(&["theta2", "method", "lambda", "B", "possibility"], |w| {
        for theta2 in sweep.points() {
            let v = match method {
                Method::Standard => contour_standard(y.y2(), theta2),
                Method::PartialC1 => contour_marginal_t1(&y, theta2, lw, bound),
                Method::RegularizedC2 => contour_marginal_t2(&y, theta2, lw, bound),
            };
            w.write_record([
                num(theta2),
                method.to_string(),
                num(lambda),
                num(args.bound),
                num(v.get()),
            ])?;
        }
        Ok(())
    })
}

#[derive(Debug, Serialize)]
pub struct CiOutput {
    pub method: Method,
    pub lambda: f64,
    pub lower: f64,
    pub upper: f64,
    pub length: f64,
    pub alpha: f64,
    #[serde(rename = "B")]
    pub bound: f64,
}

pub fn ci_output(args: &CiArgs) -> Result<CiOutput> {
    let method = Method::from(args.method);
    let y = Observation::new(args.y1, args.y2)?;
    let alpha = probability(args.alpha)?;
    let bound = HolderBound::new(args.bound)?;
    let lambda = penalty_for(method, &args.penalty, args.alpha, args.bound)?;
    let rule = IntervalRule::new(method, alpha, bound, PenaltyWeight::new(lambda)?)?;
    let ci = rule.interval(&y);
    Ok(CiOutput {
        method,
        lambda,
        lower: ci.lower(),
        upper: ci.upper(),
        length: ci.length(),
        alpha: args.alpha,
        bound: args.bound,
    })
}

/// `{method, lambda, lower, upper, length, alpha, B}`
pub fn ci(args: &CiArgs) -> Result<String> {
    json_document(&ci_output(args)?)
}

/// `lambda,L1,L2` over the grid, then summary rows
/// `argmin_L1|argmin_L2,<grid argmin>,<grid minimum>` and, for `B > 0`,
/// `optimum_L1|optimum_L2,<exact minimizer>,<exact minimum>`.
pub fn lengths(args: &LengthsArgs) -> Result<String> {
    let alpha = probability(args.alpha)?;
    let bound = HolderBound::new(args.bound)?;
    let sweep = match args.sweep {
        Some(s) => {
            s.expect(SweepVar::Lambda).map_err(anyhow::Error::msg)?;
            s
        }
        None => SweepSpec::new(SweepVar::Lambda, 0.0, 10.0, 1001).map_err(anyhow::Error::msg)?,
    };
    let mut rows = Vec::with_capacity(sweep.steps);
    for l in sweep.points() {
        let lw = PenaltyWeight::new(l)?;
        rows.push((l, len_l1(lw, alpha, bound)?, len_l2(lw, alpha, bound)?));
    }
    let argmin = |pick: fn(&(f64, f64, f64)) -> f64| {
        rows.iter().fold((f64::NAN, f64::INFINITY), |best, r| {
            if pick(r) < best.1 {
                (r.0, pick(r))
            } else {
                best
            }
        })
    };
    let (l1_arg, l1_min) = argmin(|r| r.1);
    let (l2_arg, l2_min) = argmin(|r| r.2);
    let optima = if args.bound > 0.0 {
        let t2 = lambda2_star(alpha, bound)?;
        Some((
            lambda1_star(alpha, bound)?.get(),
            optimal_length_l1(alpha, bound)?,
            t2.lambda_star.get(),
            t2.length_star,
        ))
    } else {
        None
    };
    csv_document(&["lambda", "L1", "L2"], |w| {
        for &(l, a, b) in &rows {
            w.write_record([num(l), num(a), num(b)])?;
        }
        w.write_record(["argmin_L1".to_string(), num(l1_arg), num(l1_min)])?;
        w.write_record(["argmin_L2".to_string(), num(l2_arg), num(l2_min)])?;
        if let Some((a1, m1, a2, m2)) = optima {
            w.write_record(["optimum_L1".to_string(), num(a1), num(m1)])?;
            w.write_record(["optimum_L2".to_string(), num(a2), num(m2)])?;
        }
        Ok(())
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareRow {
    pub bound: f64,
    pub len_standard: f64,
    pub len_partial_opt: f64,
    pub lambda1_star: f64,
    pub len_regularized_opt: f64,
    pub lambda2_star: f64,
}

pub fn compare_row(alpha: f64, bound: f64) -> Result<CompareRow> {
    let a = probability(alpha)?;
    let b = HolderBound::new(bound)?;
    let len_standard = IntervalRule::new(Method::Standard, a, b, PenaltyWeight::zero())?.length();
    let (lambda1, lambda2, len_reg) = if bound == 0.0 {
        (f64::INFINITY, f64::INFINITY, optimal_length_l2(a, b)?)
    } else {
        let t = lambda2_star(a, b)?;
        (
            lambda1_star(a, b)?.get(),
            t.lambda_star.get(),
            t.length_star,
        )
    };
    Ok(CompareRow {
        bound,
        len_standard,
        len_partial_opt: optimal_length_l1(a, b)?,
        lambda1_star: lambda1,
        len_regularized_opt: len_reg,
        lambda2_star: lambda2,
    })
}

/// `B,len_standard,len_partial_opt,lambda1_star,len_regularized_opt,lambda2_star`;
/// at `B = 0` the weights are `inf` and the lengths their analytic limits.
pub fn compare(args: &CompareArgs) -> Result<String> {
    let sweep = match args.sweep {
        Some(s) => {
            s.expect(SweepVar::B).map_err(anyhow::Error::msg)?;
            s
        }
        None => SweepSpec::new(SweepVar::B, 0.01, 2.2, 100).map_err(anyhow::Error::msg)?,
    };
    let rows = sweep
        .points()
        .map(|b| compare_row(args.alpha, b))
        .collect::<Result<Vec<_>>>()?;
    csv_document(
        &[
            "B",
            "len_standard",
            "len_partial_opt",
            "lambda1_star",
            "len_regularized_opt",
            "lambda2_star",
        ],
        |w| {
            for r in &rows {
                w.write_record([
                    num(r.bound),
                    num(r.len_standard),
                    num(r.len_partial_opt),
                    num(r.lambda1_star),
                    num(r.len_regularized_opt),
                    num(r.lambda2_star),
                ])?;
            }
            Ok(())
        },
    )
}

#[derive(Debug, Serialize)]
pub struct ValidateOutput {
    #[serde(flatten)]
    pub report: CoverageReport,
    pub theta1: f64,
    pub theta2: f64,
    #[serde(rename = "B")]
    pub bound: f64,
    /// Coverage at least `1 - alpha - 3 sqrt(alpha (1 - alpha) / n)`.
    pub valid: bool,
}

pub fn validate_output(args: &ValidateArgs) -> Result<ValidateOutput> {
    let method = Method::from(args.method);
    let bound = HolderBound::new(args.bound)?;
    let theta = MeanPair::constrained(args.theta1, args.theta2, bound)?;
    let lambda_mode = match (method, args.penalty.tune, args.penalty.lambda) {
        (Method::Standard, _, _) | (_, true, _) => LambdaMode::Tuned,
        (_, false, Some(l)) => LambdaMode::Fixed(PenaltyWeight::new(l)?),
        (_, false, None) => bail!("method {method} needs --lambda or --tune"),
    };
    if args.penalty.tune && method != Method::Standard && args.bound == 0.0 {
        bail!("--tune requires B > 0: at B = 0 the optimal penalty weight is infinite; pass --lambda instead");
    }
    let config = McConfig::new(
        args.reps,
        args.seed,
        probability(args.alpha)?,
        bound,
        theta,
        method,
        lambda_mode,
    )?;
    let report = simulate_coverage(&config)?;
    Ok(ValidateOutput {
        valid: report.is_valid(),
        report,
        theta1: args.theta1,
        theta2: args.theta2,
        bound: args.bound,
    })
}

/// Serialized coverage report and whether the validity band holds.
pub fn validate(args: &ValidateArgs) -> Result<(String, bool)> {
    let out = validate_output(args)?;
    Ok((json_document(&out)?, out.valid))
}
