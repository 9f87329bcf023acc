//! Acceptance suite. Runs every criterion at its stated tolerance, prints one
//! PASS/FAIL line per criterion and exits non-zero if any fails.

use std::process::{Command as Process, ExitCode};
use std::time::Instant;

use clap::Parser;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use twomeans::im::{contour_marginal_t1, contour_marginal_t2};
use twomeans::intervals::{lambda1_star, len_l1, len_l2, noncentrality_g, optimal_length_l1};
use twomeans::specfun::{chisq1_cdf, chisq1_quantile, norm_cdf, norm_quantile};
use twomeans::{HolderBound, Noncentrality, Observation, PenaltyWeight, Probability};
use twomeans_cli::args::{Cli, Command};
use twomeans_cli::commands;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn p(a: f64) -> Probability<f64> {
    Probability::new(a).unwrap()
}
fn lam(l: f64) -> PenaltyWeight<f64> {
    PenaltyWeight::new(l).unwrap()
}
fn bnd(b: f64) -> HolderBound<f64> {
    HolderBound::new(b).unwrap()
}
fn nc(g: f64) -> Noncentrality<f64> {
    Noncentrality::new(g).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cli(argv: &[&str]) -> Command {
    Cli::try_parse_from(std::iter::once("twomeans").chain(argv.iter().copied()))
        .unwrap_or_else(|e| panic!("{argv:?}: {e}"))
        .command
}

fn parse_csv(doc: &str) -> Vec<Vec<String>> {
    doc.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn field(row: &[String], i: usize) -> f64 {
    row[i].parse().unwrap()
}

// Reference quantiles z_(1 - alpha/2), from an external high-precision source.
const Z: [(f64, f64); 3] = [
    (0.05, 1.959963984540054),
    (0.1, 1.6448536269514722),
    (0.2, 1.2815515655446004),
];

mod oracle {
    /// `ln Gamma(j + 1/2)` by the recurrence from `Gamma(1/2) = sqrt(pi)`.
    fn ln_gamma_half(j: usize) -> f64 {
        let mut acc = 0.5 * std::f64::consts::PI.ln();
        for k in 0..j {
            acc += (k as f64 + 0.5).ln();
        }
        acc
    }

    /// Regularized lower gamma `P(j + 1/2, y)` by its power series.
    fn lower_gamma_half(j: usize, y: f64) -> f64 {
        if y == 0.0 {
            return 0.0;
        }
        let a = j as f64 + 0.5;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        while term > 1e-18 * sum {
            term *= y / (a + k);
            sum += term;
            k += 1.0;
        }
        (a * y.ln() - y - ln_gamma_half(j + 1) + sum.ln()).exp()
    }

    /// Noncentral chi-square(1, gamma) CDF as a Poisson(gamma/2) mixture of
    /// central chi-square(1 + 2j) laws, summed upward from `j = 0`.
    pub fn chisq1_cdf(x: f64, gamma: f64) -> f64 {
        if gamma == 0.0 {
            return lower_gamma_half(0, x / 2.0);
        }
        let h = gamma / 2.0;
        let mut ln_fact = 0.0;
        let mut total = 0.0;
        for j in 0..2000 {
            if j > 0 {
                ln_fact += (j as f64).ln();
            }
            let w = (-h + j as f64 * h.ln() - ln_fact).exp();
            total += w * lower_gamma_half(j, x / 2.0);
            if j as f64 > h && w < 1e-20 {
                break;
            }
        }
        total
    }

    /// Standard normal CDF from the Maclaurin series of erf; the tails beyond
    /// |x| = 6 are below 1e-9 and are rounded to 0 or 1.
    pub fn phi(x: f64) -> f64 {
        if x > 6.0 {
            return 1.0;
        }
        if x < -6.0 {
            return 0.0;
        }
        let u = x / std::f64::consts::SQRT_2;
        let mut term = u;
        let mut sum = u;
        let mut n = 0.0;
        while term.abs() > 1e-17 * sum.abs().max(1e-300) {
            n += 1.0;
            term *= -u * u / n;
            sum += term / (2.0 * n + 1.0);
        }
        0.5 + sum / std::f64::consts::PI.sqrt()
    }

    /// `P(chi-square(1, mu^2) > t) = P(|Z + mu| > sqrt t)`.
    pub fn chisq1_sf(t: f64, mu: f64) -> f64 {
        let r = t.sqrt();
        phi(-r - mu) + phi(-r + mu)
    }
}

fn criterion1() -> Outcome {
    let gammas = [0.0, 0.1, 0.5, 1.0, 5.0, 25.0];
    let xs: Vec<f64> = (0..=200)
        .map(|i| 10f64.powf(-4.0 + (50f64.log10() + 4.0) * i as f64 / 200.0))
        .collect();
    let mut worst = 0.0f64;
    let mut worst_identity = 0.0f64;
    for &g in &gammas {
        for &x in &xs {
            let got = chisq1_cdf(x, nc(g)).map_err(|e| e.to_string())?.get();
            let err = (got - oracle::chisq1_cdf(x, g)).abs();
            worst = worst.max(err);
            ensure(err <= 1e-10, || format!("cdf({x}, {g}) off by {err:e}"))?;
            if g == 0.0 {
                let identity = 2.0 * norm_cdf(x.sqrt()).unwrap().get() - 1.0;
                let e = (got - identity).abs();
                worst_identity = worst_identity.max(e);
                ensure(e <= 1e-10, || {
                    format!("central identity at {x} off by {e:e}")
                })?;
            }
        }
    }
    let mut worst_trip = 0.0f64;
    for &g in &gammas {
        for i in 1..100 {
            let prob = i as f64 / 100.0;
            let q = chisq1_quantile(p(prob), nc(g)).map_err(|e| e.to_string())?;
            let e = (chisq1_cdf(q, nc(g)).unwrap().get() - prob).abs();
            worst_trip = worst_trip.max(e);
            ensure(e <= 1e-10, || {
                format!("round trip at p = {prob}, gamma = {g} off by {e:e}")
            })?;
        }
    }
    Ok(format!(
        "max |cdf - oracle| = {worst:.1e}, max |cdf - (2 Phi(sqrt x) - 1)| = {worst_identity:.1e}, max round trip = {worst_trip:.1e}"
    ))
}

fn criterion2() -> Outcome {
    let levels = [0.05, 0.1, 0.2, 0.5, 0.9];
    let mut tightest = f64::INFINITY;
    let mut at_zero = 0.0f64;
    for &a in &levels {
        let z = norm_quantile(p((1.0 + a) / 2.0)).unwrap();
        let root0 = chisq1_quantile(p(a), nc(0.0)).unwrap().sqrt();
        at_zero = at_zero.max((root0 - z).abs());
        ensure((root0 - z).abs() <= 1e-12, || {
            format!("level {a}: sqrt Q(0) - z = {:e}", root0 - z)
        })?;
        for k in 0..50 {
            let g = 10f64.powf(-4.0 + (25f64.log10() + 4.0) * k as f64 / 49.0);
            let gap = g.sqrt() - (chisq1_quantile(p(a), nc(g)).unwrap().sqrt() - z);
            tightest = tightest.min(gap);
            ensure(gap > 0.0, || {
                format!("level {a}, gamma {g}: inequality fails by {gap:e}")
            })?;
        }
    }
    Ok(format!(
        "250 points strict (min slack {tightest:.2e}), |sqrt Q(0) - z| <= {at_zero:.1e}"
    ))
}

fn criterion3() -> Outcome {
    let mut worst = 0.0f64;
    let mut pairs = 0;
    for i in 0..20 {
        let l = 10.0 * i as f64 / 19.0;
        for &a in &[0.01, 0.05, 0.1, 0.2, 0.5] {
            for k in 1..=20 {
                let b = 3.0 * k as f64 / 20.0;
                let l1 = len_l1(lam(l), p(a), bnd(b)).unwrap();
                let l2 = len_l2(lam(l), p(a), bnd(b)).unwrap();
                ensure(l2 <= l1, || {
                    format!("L2 > L1 at lambda {l}, alpha {a}, B {b}")
                })?;
                let g = noncentrality_g(lam(l), bnd(b)).get();
                let z = norm_quantile(p(1.0 - a / 2.0)).unwrap();
                let q = chisq1_quantile(p(1.0 - a), nc(g)).unwrap();
                let s = (l * l + (1.0 + l) * (1.0 + l)).sqrt();
                let rhs = 2.0 * s / (1.0 + 2.0 * l) * (g.sqrt() + z - q.sqrt());
                let r = ((l1 - l2) - rhs).abs();
                worst = worst.max(r);
                ensure(r <= 1e-12, || {
                    format!("identity residual {r:e} at {l}, {a}, {b}")
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!(
        "{pairs} grid points dominated, max identity residual {worst:.1e}"
    ))
}

fn criterion4() -> Outcome {
    // L1 - 2z with the cancellation removed, so the search resolves flat minima near zero.
    let excess = |l: f64, b: f64, z: f64| {
        let s = (l * l + (1.0 + l) * (1.0 + l)).sqrt();
        2.0 * l * (b - 2.0 * z * (1.0 + l) / (s + 1.0 + 2.0 * l)) / (1.0 + 2.0 * l)
    };
    let mut worst_arg = 0.0f64;
    let mut worst_len = 0.0f64;
    for &(a, z) in &Z {
        for &b in &[0.25, 0.5, 1.0, 1.5, 1.959964, 2.5] {
            let (mut lo, mut hi) = (0.0, 50.0);
            for _ in 0..300 {
                let m1 = lo + (hi - lo) / 3.0;
                let m2 = hi - (hi - lo) / 3.0;
                if excess(m1, b, z) <= excess(m2, b, z) {
                    hi = m2
                } else {
                    lo = m1
                }
            }
            let numeric = 0.5 * (lo + hi);
            let closed = lambda1_star(p(a), bnd(b)).unwrap().get();
            let d = (numeric - closed).abs();
            worst_arg = worst_arg.max(d);
            ensure(d <= 1e-6, || {
                format!("alpha {a}, B {b}: argmin {numeric} vs closed form {closed}")
            })?;
            let expected = if b <= z {
                b + (2.0 * z * z - b * b).sqrt()
            } else {
                2.0 * z
            };
            let got = optimal_length_l1(p(a), bnd(b)).unwrap();
            let at_numeric = len_l1(lam(numeric), p(a), bnd(b)).unwrap();
            let e = (got - expected).abs().max((at_numeric - expected).abs());
            worst_len = worst_len.max(e);
            ensure(e <= 1e-9, || {
                format!("alpha {a}, B {b}: optimal length {got} vs {expected}")
            })?;
        }
    }
    Ok(format!(
        "max |argmin - closed form| = {worst_arg:.1e}, max optimal-length error = {worst_len:.1e}"
    ))
}

fn criterion5() -> Outcome {
    let Command::Compare(args) = cli(&["compare", "--alpha", "0.05"]) else {
        unreachable!()
    };
    let rows = parse_csv(&commands::compare(&args).map_err(|e| e.to_string())?);
    ensure(rows.len() == 100, || format!("{} rows", rows.len()))?;
    let z = Z[0].1;
    for r in &rows {
        let (b, std, part, reg) = (field(r, 0), field(r, 1), field(r, 2), field(r, 4));
        ensure(reg < part && part <= std, || {
            format!("ordering fails at B = {b}: {reg} {part} {std}")
        })?;
        if b >= 1.959964 {
            ensure((part - std).abs() <= 1e-9, || {
                format!("B = {b}: partial {part} vs standard {std}")
            })?;
        }
    }
    let row = commands::compare_row(0.05, 1.0).map_err(|e| e.to_string())?;
    ensure((row.len_partial_opt - 3.585134).abs() <= 1e-4, || {
        format!("partial at B = 1: {}", row.len_partial_opt)
    })?;
    ensure((row.len_standard - 3.919928).abs() <= 1e-4, || {
        format!("standard at B = 1: {}", row.len_standard)
    })?;
    ensure((row.len_standard - 2.0 * z).abs() <= 1e-12, || {
        "standard length is not 2z".into()
    })?;
    Ok(format!(
        "100 rows ordered, at B = 1: standard {:.6}, partial {:.6}, regularized {:.6}",
        row.len_standard, row.len_partial_opt, row.len_regularized_opt
    ))
}

fn criterion6() -> Outcome {
    let mut summary = Vec::new();
    for a in ["0.05", "0.1", "0.2"] {
        let Command::Lengths(args) = cli(&["lengths", "--alpha", a, "--B", "1"]) else {
            unreachable!()
        };
        let doc = commands::lengths(&args).map_err(|e| e.to_string())?;
        let rows = parse_csv(&doc);
        let grid: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r[0].parse::<f64>().is_ok())
            .map(|r| (field(r, 0), field(r, 2)))
            .collect();
        let (first, last) = (grid[0].1, grid[grid.len() - 1].1);
        let (arg, min) =
            grid.iter().copied().fold(
                (f64::NAN, f64::INFINITY),
                |b, g| if g.1 < b.1 { g } else { b },
            );
        ensure(min < first && min < last, || {
            format!("alpha {a}: no interior minimum ({first}, {min}, {last})")
        })?;
        ensure(arg > 0.0 && arg < grid[grid.len() - 1].0, || {
            format!("alpha {a}: argmin {arg} on the boundary")
        })?;
        let optimum = rows
            .iter()
            .find(|r| r[0] == "optimum_L2")
            .ok_or("missing optimum_L2 row")?;
        ensure(field(optimum, 2) <= min + 1e-9, || {
            format!("alpha {a}: tuned length above grid minimum")
        })?;
        summary.push(format!("alpha {a}: argmin {arg}"));
    }
    Ok(summary.join(", "))
}

fn criterion7() -> Outcome {
    let n = 100_000usize;
    let band = 3.0 * (0.05f64 * 0.95 / n as f64).sqrt();
    let mut cells = 0;
    let mut lowest = f64::INFINITY;
    for b in [0.5, 1.0] {
        for t2 in [-1.0, -0.5, 0.0, 0.5, 1.0] {
            for d in [-b, -b / 2.0, 0.0, b / 2.0, b] {
                let t1 = t2 + d;
                for method in ["standard", "partial", "regularized"] {
                    let (t1s, t2s, bs, ns) =
                        (t1.to_string(), t2.to_string(), b.to_string(), n.to_string());
                    let mut argv = vec![
                        "validate", "--theta1", &t1s, "--theta2", &t2s, "--B", &bs, "--method",
                        method, "--reps", &ns, "--seed", "20240601",
                    ];
                    if method != "standard" {
                        argv.push("--tune");
                    }
                    let Command::Validate(args) = cli(&argv) else {
                        unreachable!()
                    };
                    let out = commands::validate_output(&args).map_err(|e| e.to_string())?;
                    let cov = out.report.empirical_coverage;
                    lowest = lowest.min(cov);
                    ensure(cov >= 0.95 - band, || {
                        format!("{method} at ({t1}, {t2}), B = {b}: coverage {cov}")
                    })?;
                    if method == "standard" {
                        ensure((cov - 0.95).abs() <= band, || {
                            format!("standard at ({t1}, {t2}): coverage {cov}")
                        })?;
                    }
                    cells += 1;
                }
            }
        }
    }
    Ok(format!(
        "{cells} cells, lowest coverage {lowest:.5} (threshold {:.5})",
        0.95 - band
    ))
}

fn criterion8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let (y1, y2): (f64, f64) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let l: f64 = rng.random_range(0.05..3.0);
        let b = rng.random_range(0.1..1.5);
        let y = Observation::new(y1, y2).unwrap();
        let s = (l * l + (1.0 + l) * (1.0 + l)).sqrt();
        for k in 0..50 {
            let theta2 = y2 - 4.0 + 8.0 * k as f64 / 49.0;
            let (mut sup1, mut sup2) = (0.0f64, 0.0f64);
            for i in 0..10_000 {
                let theta1 = theta2 - b + 2.0 * b * i as f64 / 9_999.0;
                let centered = (l * (y1 - theta1) + (1.0 + l) * (y2 - theta2)) / s;
                sup1 = sup1.max(oracle::chisq1_sf(centered * centered, 0.0));
                let uncentered = (l * (y1 - theta2) + (1.0 + l) * (y2 - theta2)) / s;
                let mu = l * (theta1 - theta2).abs() / s;
                sup2 = sup2.max(oracle::chisq1_sf(uncentered * uncentered, mu));
            }
            let e1 = (contour_marginal_t1(&y, theta2, lam(l), bnd(b)).get() - sup1).abs();
            let e2 = (contour_marginal_t2(&y, theta2, lam(l), bnd(b)).get() - sup2).abs();
            worst = worst.max(e1).max(e2);
            ensure(e1.max(e2) <= 1e-4, || {
                format!("y = ({y1}, {y2}), lambda {l}, B {b}, theta2 {theta2}: {e1:e} {e2:e}")
            })?;
        }
    }
    Ok(format!(
        "500 points per contour, max |closed form - brute force| = {worst:.1e}"
    ))
}

fn criterion9() -> Outcome {
    let run = || {
        Process::new(env!("CARGO_BIN_EXE_twomeans"))
            .args([
                "validate",
                "--theta1",
                "0.3",
                "--theta2",
                "-0.2",
                "--B",
                "1",
                "--method",
                "regularized",
                "--tune",
            ])
            .args(["--seed", "42", "--reps", "100000"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success() && b.status.success(), || {
        format!("exit status {} / {}", a.status, b.status)
    })?;
    ensure(a.stdout == b.stdout, || "outputs differ".into())?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("special-function accuracy", criterion1),
        ("quantile shift inequality", criterion2),
        ("regularized interval dominance", criterion3),
        ("closed-form partial tuning", criterion4),
        ("optimal lengths across B", criterion5),
        ("interior L2 minimum", criterion6),
        ("coverage audit", criterion7),
        ("contour supremum oracle", criterion8),
        ("validation determinism", criterion9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS [{secs:.1}s] {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{secs:.1}s] {detail}", i + 1)
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
