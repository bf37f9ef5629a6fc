//! The `validate` command: statistical and analytic self-checks, one pass/fail
//! line per check.

use cgmy_core::dirichlet::{self, MeanFixedPointSpec};
use cgmy_core::ggc::{self, DirichletVariant, GgcIncrementSpec, TcdConfig};
use cgmy_core::model::CgmyParams;
use cgmy_core::stable;
use cgmy_core::stats;
use cgmy_core::RngStream;

use crate::config::Settings;
use crate::AppError;

pub const SUITES: &[&str] = &[
    "cumulants",
    "ks-cross-method",
    "cftp-fixed-point",
    "series-tail",
    "lmin-boundary",
    "epsilon-moments",
];

struct Outcome {
    passed: bool,
    detail: String,
}

fn ok(detail: String) -> Outcome {
    Outcome {
        passed: true,
        detail,
    }
}

fn fail(detail: String) -> Outcome {
    Outcome {
        passed: false,
        detail,
    }
}

/// Sample variance standard error from the fourth central moment.
fn var_std_err(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mean, var) = stats::mean_var(xs);
    let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    ((m4 - var * var).max(0.0) / n).sqrt()
}

fn increments(
    p: &CgmyParams,
    dt: f64,
    n: usize,
    cfg: &TcdConfig,
    exact: bool,
    s: &mut RngStream,
) -> Result<Vec<f64>, AppError> {
    let theta = p.theta();
    (0..n)
        .map(|_| {
            if exact {
                Ok(stable::sample_cgmy_increment_exact(p, dt, s)?)
            } else {
                let t = ggc::sample_time_change_increment(p, dt, cfg, s)?;
                Ok(theta * t + t.sqrt() * s.normal())
            }
        })
        .collect()
}

fn check_cumulants(settings: &Settings) -> Result<Outcome, AppError> {
    let p = &settings.params;
    let exact = p.y() < 1.0;
    let cfg = TcdConfig::new(settings.eps, settings.eps_tilde, DirichletVariant::Series)
        .map_err(|e| AppError::Config(e.to_string()))?;
    let mut worst = String::new();
    for (i, &dt) in [0.25, 0.25 / 13.0].iter().enumerate() {
        let n = if exact { 400_000 } else { 100_000 };
        let mut s = RngStream::new(settings.seed, 1000 + i as u64);
        let xs = increments(p, dt, n, &cfg, exact, &mut s)?;
        let (mean, var) = stats::mean_var(&xs);
        let mean_se = stats::std_err(&xs);
        let var_se = var_std_err(&xs);
        let (am, av) = p.cumulants(dt)?;
        // the dropped remainder shifts the mean by at most |theta| eps
        let mean_tol = 4.0 * mean_se
            + if exact {
                0.0
            } else {
                p.theta().abs() * settings.eps
            };
        let var_tol = 4.0 * var_se + if exact { 0.0 } else { settings.eps };
        if (mean - am).abs() >= mean_tol {
            return Ok(fail(format!(
                "dt={dt}: mean {mean:.6} vs analytic {am:.6} (tol {mean_tol:.2e})"
            )));
        }
        if (var - av).abs() >= var_tol {
            return Ok(fail(format!(
                "dt={dt}: var {var:.6} vs analytic {av:.6} (tol {var_tol:.2e})"
            )));
        }
        worst = format!("dt={dt}: mean {mean:.6}~{am:.6}, var {var:.6}~{av:.6}");
    }
    Ok(ok(worst))
}

fn check_ks_cross_method(settings: &Settings) -> Result<Outcome, AppError> {
    let p = &settings.params;
    if p.y() >= 1.0 {
        return Ok(ok("skipped: exact sampler needs Y < 1".into()));
    }
    let dt = 0.25;
    let cfg = TcdConfig::new(1e-6, 1e-6, DirichletVariant::Series)
        .map_err(|e| AppError::Config(e.to_string()))?;
    let n = 10_000;
    let mut detail = String::new();
    for offset in 0..3u64 {
        let mut s = RngStream::new(settings.seed + offset, 2000);
        let xs = increments(p, dt, n, &cfg, true, &mut s)?;
        let ys = increments(p, dt, n, &cfg, false, &mut s)?;
        let (d, pv) = stats::ks_two_sample(&xs, &ys);
        if pv < 0.01 {
            return Ok(fail(format!(
                "seed {}: KS D={d:.4}, p={pv:.4} < 0.01",
                settings.seed + offset
            )));
        }
        detail = format!("{detail}p={pv:.3} ");
    }
    Ok(ok(format!("KS p-values: {}", detail.trim())))
}

fn check_cftp_fixed_point(settings: &Settings) -> Result<Outcome, AppError> {
    let p = &settings.params;
    p.require_tcd()?;
    let spec = GgcIncrementSpec::new(p, 0.25, 1000.0)?;
    let n = 10_000;
    let mut detail = String::new();
    for &(tau, series) in &[(0.5, false), (0.5, true), (3.7, true)] {
        let fp = MeanFixedPointSpec::new(tau, spec.gm_bound())?;
        let mut s = RngStream::new(settings.seed, 3000 + if series { 1 } else { 0 });
        let mut q = |s: &mut RngStream| ggc::sample_r(&spec, p, s).unwrap();
        let mut draw = |s: &mut RngStream| -> Result<f64, AppError> {
            if series {
                Ok(dirichlet::sample_mean_series(&fp, &mut q, 1e-8, s)?.0)
            } else {
                Ok(dirichlet::sample_mean_cftp(&fp, &mut q, s)?)
            }
        };
        let mut ds = Vec::with_capacity(n);
        let mut zs = Vec::with_capacity(n);
        for _ in 0..n {
            ds.push(draw(&mut s)?);
        }
        for _ in 0..n {
            let d = draw(&mut s)?;
            let b = s.beta_one_tau(tau);
            let r = ggc::sample_r(&spec, p, &mut s)?;
            zs.push(b * r + (1.0 - b) * d);
        }
        let (dstat, pv) = stats::ks_two_sample(&ds, &zs);
        let name = if series { "series" } else { "cftp" };
        if pv < 0.01 {
            return Ok(fail(format!(
                "{name} tau={tau}: KS D={dstat:.4}, p={pv:.4} < 0.01"
            )));
        }
        detail = format!("{detail}{name}(tau={tau}) p={pv:.3} ");
    }
    Ok(ok(detail.trim().to_string()))
}

fn check_series_tail(settings: &Settings) -> Result<Outcome, AppError> {
    let mut s = RngStream::new(settings.seed, 4000);
    let c_q = 2.0 / 7.0;
    let mut detail = String::new();
    for &tau in &[0.5, 2.0] {
        for &steps in &[1usize, 5, 10] {
            let reps = 100_000;
            let xs: Vec<f64> = (0..reps)
                .map(|_| {
                    let mut remaining = 1.0;
                    for _ in 0..steps {
                        remaining *= 1.0 - s.beta_one_tau(tau);
                    }
                    c_q * remaining
                })
                .collect();
            let (mean, _) = stats::mean_var(&xs);
            let se = stats::std_err(&xs);
            let target = c_q * (tau / (1.0 + tau)).powi(steps as i32);
            if (mean - target).abs() >= 4.0 * se {
                return Ok(fail(format!(
                    "tau={tau}, n={steps}: mean {mean:.6e} vs {target:.6e} (4se {:.1e})",
                    4.0 * se
                )));
            }
        }
        detail = format!("{detail}tau={tau} ok ");
    }
    Ok(ok(format!("{}(n in {{1,5,10}}, 1e5 reps)", detail)))
}

fn check_lmin_boundary(settings: &Settings) -> Result<Outcome, AppError> {
    let p = &settings.params;
    let mut checked = 0;
    for &dt in &[0.25, 0.25 / 13.0] {
        for &eps in &[1e-3, 1e-4, 1e-5] {
            let l = ggc::l_min(p, dt, eps)?;
            let half = eps * eps / 2.0;
            let (s1, s2) = ggc::error_bound_summands(p, dt, l);
            if s1 > half * (1.0 + 1e-12) || s2 > half * (1.0 + 1e-12) {
                return Ok(fail(format!(
                    "dt={dt}, eps={eps}: summands ({s1:.3e}, {s2:.3e}) exceed eps^2/2 at l_min"
                )));
            }
            let (s1, s2) = ggc::error_bound_summands(p, dt, 0.99 * l);
            if s1 <= half && s2 <= half {
                return Ok(fail(format!(
                    "dt={dt}, eps={eps}: l_min not tight, both summands below eps^2/2 at 0.99 l_min"
                )));
            }
            checked += 1;
        }
    }
    Ok(ok(format!("{checked} (dt, eps) combinations tight")))
}

fn check_epsilon_moments(settings: &Settings) -> Result<Outcome, AppError> {
    let p = &settings.params;
    let mut detail = String::new();
    for &dt in &[0.25, 0.25 / 13.0] {
        for &eps in &[1e-3, 1e-4] {
            let l = ggc::l_min(p, dt, eps)?;
            let (mu, sigma2) = ggc::epsilon_moments(p, dt, l, 1e-3 * eps)?;
            if mu > eps * (1.0 + 1e-6) {
                return Ok(fail(format!("dt={dt}: mu {mu:.3e} exceeds eps {eps:.0e}")));
            }
            let bound = ggc::error_second_moment_bound(p, dt, l)?;
            if mu * mu + sigma2 > bound * (1.0 + 1e-6) {
                return Ok(fail(format!(
                    "dt={dt}, eps={eps:.0e}: second moment {:.3e} exceeds bound {bound:.3e}",
                    mu * mu + sigma2
                )));
            }
            detail = format!("{detail}mu={mu:.1e}<{eps:.0e} ");
        }
    }
    Ok(ok(detail.trim().to_string()))
}

/// Runs the requested suites; returns Err(AppError::Validation) if any fail.
pub fn cmd_validate(settings: &Settings, only: Option<&str>) -> Result<(), AppError> {
    if let Some(name) = only {
        if !SUITES.contains(&name) {
            return Err(AppError::Config(format!(
                "unknown suite {name:?} (available: {})",
                SUITES.join(", ")
            )));
        }
    }
    settings.init_threads()?;
    let mut all_passed = true;
    for &name in SUITES {
        if let Some(filter) = only {
            if filter != name {
                continue;
            }
        }
        let outcome = match name {
            "cumulants" => check_cumulants(settings)?,
            "ks-cross-method" => check_ks_cross_method(settings)?,
            "cftp-fixed-point" => check_cftp_fixed_point(settings)?,
            "series-tail" => check_series_tail(settings)?,
            "lmin-boundary" => check_lmin_boundary(settings)?,
            "epsilon-moments" => check_epsilon_moments(settings)?,
            _ => unreachable!(),
        };
        let status = if outcome.passed { "PASS" } else { "FAIL" };
        println!("{status} {name}: {}", outcome.detail);
        all_passed &= outcome.passed;
    }
    if all_passed {
        Ok(())
    } else {
        Err(AppError::Validation)
    }
}
