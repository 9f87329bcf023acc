use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use twomeans::Method;

#[derive(Debug, Parser)]
#[command(
    name = "twomeans",
    version,
    about = "Valid inference for one of two normal means with |theta1 - theta2| <= B"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Marginal possibility contour for theta2 over a theta2 grid (CSV).
    Contour(ContourArgs),
    /// Confidence interval for theta2 (JSON).
    Ci(CiArgs),
    /// Interval lengths L1 and L2 over a lambda grid (CSV).
    Lengths(LengthsArgs),
    /// Optimally tuned interval lengths over a grid of B (CSV).
    Compare(CompareArgs),
    /// Monte Carlo coverage audit (JSON).
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Standard,
    #[value(alias = "t1")]
    Partial,
    #[value(alias = "t2")]
    Regularized,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Standard => Method::Standard,
            MethodArg::Partial => Method::PartialC1,
            MethodArg::Regularized => Method::RegularizedC2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    Theta2,
    Lambda,
    B,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::Theta2 => "theta2",
            SweepVar::Lambda => "lambda",
            SweepVar::B => "B",
        }
    }
}

/// Uniform grid `var:start:stop:steps`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVar,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn new(variable: SweepVar, start: f64, stop: f64, steps: usize) -> Result<Self, String> {
        if !(start.is_finite() && stop.is_finite()) {
            return Err("sweep bounds must be finite".into());
        }
        if start >= stop {
            return Err(format!("sweep start {start} must be below stop {stop}"));
        }
        if steps < 2 {
            return Err(format!("sweep needs at least 2 steps, got {steps}"));
        }
        Ok(SweepSpec {
            variable,
            start,
            stop,
            steps,
        })
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let span = self.stop - self.start;
        let last = (self.steps - 1) as f64;
        (0..self.steps).map(move |i| {
            if i + 1 == self.steps {
                self.stop
            } else {
                self.start + span * i as f64 / last
            }
        })
    }

    pub fn expect(&self, variable: SweepVar) -> Result<(), String> {
        if self.variable == variable {
            Ok(())
        } else {
            Err(format!(
                "this command sweeps over {}, not {}",
                variable.name(),
                self.variable.name()
            ))
        }
    }
}

impl FromStr for SweepSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [var, start, stop, steps] = parts.as_slice() else {
            return Err(format!("expected var:start:stop:steps, got {s:?}"));
        };
        let variable = match *var {
            "theta2" => SweepVar::Theta2,
            "lambda" => SweepVar::Lambda,
            "B" | "b" => SweepVar::B,
            other => {
                return Err(format!(
                    "unknown sweep variable {other:?} (theta2, lambda or B)"
                ))
            }
        };
        let num = |t: &str| {
            t.parse::<f64>()
                .map_err(|e| format!("bad number {t:?}: {e}"))
        };
        let steps = steps
            .parse::<usize>()
            .map_err(|e| format!("bad step count {steps:?}: {e}"))?;
        SweepSpec::new(variable, num(start)?, num(stop)?, steps)
    }
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Write to FILE instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PenaltyArgs {
    /// Penalty weight lambda >= 0.
    #[arg(long, conflicts_with = "tune")]
    pub lambda: Option<f64>,
    /// Use the length-minimizing penalty weight.
    #[arg(long)]
    pub tune: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ContourArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub y1: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub y2: f64,
    /// Level used when tuning lambda.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long = "B", default_value_t = 1.0)]
    pub bound: f64,
    #[arg(long, value_enum, default_value = "regularized")]
    pub method: MethodArg,
    #[command(flatten)]
    pub penalty: PenaltyArgs,
    /// theta2 grid; defaults to theta2:(y2-5):(y2+5):201.
    #[arg(long, allow_hyphen_values = true)]
    pub sweep: Option<SweepSpec>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct CiArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub y1: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub y2: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long = "B", default_value_t = 1.0)]
    pub bound: f64,
    #[arg(long, value_enum, default_value = "regularized")]
    pub method: MethodArg,
    #[command(flatten)]
    pub penalty: PenaltyArgs,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct LengthsArgs {
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long = "B", default_value_t = 1.0)]
    pub bound: f64,
    /// Accepted for symmetry with `ci`; lengths do not depend on the data.
    #[arg(long, allow_hyphen_values = true)]
    pub y1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub y2: Option<f64>,
    /// lambda grid; defaults to lambda:0:10:1001.
    #[arg(long)]
    pub sweep: Option<SweepSpec>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// B grid; defaults to B:0.01:2.2:100.
    #[arg(long)]
    pub sweep: Option<SweepSpec>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub theta1: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub theta2: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long = "B")]
    pub bound: f64,
    #[arg(long, value_enum, default_value = "regularized")]
    pub method: MethodArg,
    #[command(flatten)]
    pub penalty: PenaltyArgs,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 100_000)]
    pub reps: usize,
    #[command(flatten)]
    pub output: Output,
}
