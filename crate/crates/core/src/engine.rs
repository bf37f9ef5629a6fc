//! Sequential path sampling on a monitoring grid, payoff evaluation, and the
//! Monte Carlo price estimator.
//!
//! Trials are embarrassingly parallel; trial `i` owns the stream
//! `(seed, stream_id = i)` and results are reduced in trial-index order, so a
//! run is a pure function of `(seed, configuration)` regardless of thread
//! count.

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ggc::{self, TcdConfig};
use crate::model::{CgmyParams, MarketSpec};
use crate::rng::RngStream;
use crate::stable;

/// Which increment sampler drives the path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingMethod {
    /// Difference-of-subordinators sampler; exact, Y in (0, 1) only.
    Exact,
    /// Time-change decomposition; the Dirichlet-mean variant comes from the
    /// `TcdConfig`.
    Tcd,
}

/// One sampled path on the monitoring grid.
#[derive(Debug, Clone)]
pub struct PathSample {
    grid: Vec<f64>,
    x: Vec<f64>,
    s: Vec<f64>,
}

impl PathSample {
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }
    /// Log-return values X(t_i), with X(0) = 0.
    pub fn x(&self) -> &[f64] {
        &self.x
    }
    /// Asset prices S(t_i) = S0 exp{(ω+r−q)t_i + X(t_i)}.
    pub fn prices(&self) -> &[f64] {
        &self.s
    }
    pub fn terminal_price(&self) -> f64 {
        *self.s.last().unwrap()
    }
}

/// Which extreme the floating-strike lookback uses. The payoff as printed
/// takes the running maximum including the terminal date, which makes
/// (S(T) − max)⁺ identically zero; the min-based variant is the economically
/// meaningful contract and is available behind this flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LookbackVariant {
    MaxAsPrinted,
    Min,
}

/// Payoff definition on the monitoring grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PayoffSpec {
    EuropeanCall { strike: f64 },
    EuropeanPut { strike: f64 },
    LookbackFloatCall { variant: LookbackVariant },
    BarrierUpInCall { strike: f64, barrier: f64 },
    AsianCall { strike: f64 },
    AsianPut { strike: f64 },
}

impl PayoffSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PayoffSpec::EuropeanCall { strike }
            | PayoffSpec::EuropeanPut { strike }
            | PayoffSpec::AsianCall { strike }
            | PayoffSpec::AsianPut { strike } => {
                if !(strike > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "strike must be > 0, got {strike}"
                    )));
                }
            }
            PayoffSpec::BarrierUpInCall { strike, barrier } => {
                if !(strike > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "strike must be > 0, got {strike}"
                    )));
                }
                if !(barrier > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "barrier must be > 0, got {barrier}"
                    )));
                }
            }
            PayoffSpec::LookbackFloatCall { .. } => {}
        }
        Ok(())
    }
}

/// Monte Carlo price estimate with its sampling error.
#[derive(Debug, Clone, Copy)]
pub struct PriceEstimate {
    /// Discounted price estimate.
    pub mean: f64,
    /// Sample standard deviation of the discounted payoff divided by √I.
    pub stderr: f64,
    pub n_trials: u64,
    /// Wall-clock sampler time, excluding I/O.
    pub elapsed_seconds: f64,
}

/// Samples one path of the log-return and asset-price processes.
pub fn sample_path(
    p: &CgmyParams,
    market: &MarketSpec,
    method: SamplingMethod,
    cfg: &TcdConfig,
    s: &mut RngStream,
) -> Result<PathSample> {
    let omega = p.martingale_drift()?;
    let theta = p.theta();
    let grid = market.grid().to_vec();
    let mut x = Vec::with_capacity(grid.len());
    let mut prices = Vec::with_capacity(grid.len());
    x.push(0.0);
    prices.push(market.s0);
    let mut running = 0.0;
    for w in grid.windows(2) {
        let dt = w[1] - w[0];
        let inc = match method {
            SamplingMethod::Exact => stable::sample_cgmy_increment_exact(p, dt, s)?,
            SamplingMethod::Tcd => {
                let t = ggc::sample_time_change_increment(p, dt, cfg, s)?;
                theta * t + t.sqrt() * s.normal()
            }
        };
        running += inc;
        x.push(running);
        prices.push(market.s0 * ((omega + market.r - market.q) * w[1] + running).exp());
    }
    Ok(PathSample { grid, x, s: prices })
}

/// Evaluates the payoff of a path.
pub fn payoff(spec: &PayoffSpec, path: &PathSample) -> f64 {
    let s = path.prices();
    let terminal = path.terminal_price();
    match *spec {
        PayoffSpec::EuropeanCall { strike } => (terminal - strike).max(0.0),
        PayoffSpec::EuropeanPut { strike } => (strike - terminal).max(0.0),
        PayoffSpec::LookbackFloatCall { variant } => match variant {
            LookbackVariant::MaxAsPrinted => {
                let max = s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                (terminal - max).max(0.0)
            }
            LookbackVariant::Min => {
                let min = s.iter().cloned().fold(f64::INFINITY, f64::min);
                (terminal - min).max(0.0)
            }
        },
        PayoffSpec::BarrierUpInCall { strike, barrier } => {
            let max = s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if max > barrier {
                (terminal - strike).max(0.0)
            } else {
                0.0
            }
        }
        PayoffSpec::AsianCall { strike } => {
            let avg = s.iter().sum::<f64>() / s.len() as f64;
            (avg - strike).max(0.0)
        }
        PayoffSpec::AsianPut { strike } => {
            let avg = s.iter().sum::<f64>() / s.len() as f64;
            (strike - avg).max(0.0)
        }
    }
}

/// Prices a payoff by Monte Carlo over `n_trials` independent paths.
///
/// Deterministic for fixed `(seed, configuration)`: trial `i` draws from
/// stream `i` and the reduction runs in trial-index order.
pub fn price(
    spec: &PayoffSpec,
    p: &CgmyParams,
    market: &MarketSpec,
    method: SamplingMethod,
    cfg: &TcdConfig,
    n_trials: u64,
    seed: u64,
) -> Result<PriceEstimate> {
    spec.validate()?;
    if n_trials < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 trials, got {n_trials}"
        )));
    }
    let start = Instant::now();
    let discount = (-market.r * market.maturity()).exp();
    let discounted: Vec<f64> = (0..n_trials)
        .into_par_iter()
        .map(|trial| {
            let mut s = RngStream::new(seed, trial);
            sample_path(p, market, method, cfg, &mut s).map(|path| discount * payoff(spec, &path))
        })
        .collect::<Result<Vec<f64>>>()?;
    let elapsed = start.elapsed().as_secs_f64();

    let n = n_trials as f64;
    let mean = discounted.iter().sum::<f64>() / n;
    let var = discounted
        .iter()
        .map(|x| (x - mean) * (x - mean))
        .sum::<f64>()
        / (n - 1.0);
    Ok(PriceEstimate {
        mean,
        stderr: (var / n).sqrt(),
        n_trials,
        elapsed_seconds: elapsed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ggc::DirichletVariant;

    fn flat_path(values: &[f64]) -> PathSample {
        let n = values.len();
        PathSample {
            grid: (0..n).map(|i| i as f64).collect(),
            x: vec![0.0; n],
            s: values.to_vec(),
        }
    }

    #[test]
    fn payoffs_at_the_money_degenerate() {
        let path = flat_path(&[100.0, 100.0, 100.0]);
        assert_eq!(
            payoff(&PayoffSpec::EuropeanCall { strike: 100.0 }, &path),
            0.0
        );
        assert_eq!(
            payoff(
                &PayoffSpec::LookbackFloatCall {
                    variant: LookbackVariant::MaxAsPrinted
                },
                &path
            ),
            0.0
        );
        assert_eq!(
            payoff(
                &PayoffSpec::BarrierUpInCall {
                    strike: 100.0,
                    barrier: 150.0
                },
                &path
            ),
            0.0
        );
        assert_eq!(payoff(&PayoffSpec::AsianCall { strike: 100.0 }, &path), 0.0);
    }

    #[test]
    fn lookback_as_printed_is_zero() {
        // the running max includes S(T), so the printed payoff vanishes
        let path = flat_path(&[100.0, 140.0, 120.0]);
        assert_eq!(
            payoff(
                &PayoffSpec::LookbackFloatCall {
                    variant: LookbackVariant::MaxAsPrinted
                },
                &path
            ),
            0.0
        );
        assert_eq!(
            payoff(
                &PayoffSpec::LookbackFloatCall {
                    variant: LookbackVariant::Min
                },
                &path
            ),
            20.0
        );
    }

    #[test]
    fn asian_arithmetic_mean() {
        let path = flat_path(&[100.0, 110.0, 120.0]);
        assert_eq!(
            payoff(&PayoffSpec::AsianCall { strike: 100.0 }, &path),
            10.0
        );
        assert_eq!(payoff(&PayoffSpec::AsianPut { strike: 115.0 }, &path), 5.0);
    }

    #[test]
    fn put_payoffs() {
        let path = flat_path(&[100.0, 110.0, 120.0]);
        assert_eq!(
            payoff(&PayoffSpec::EuropeanPut { strike: 130.0 }, &path),
            10.0
        );
        assert_eq!(
            payoff(&PayoffSpec::EuropeanPut { strike: 110.0 }, &path),
            0.0
        );
        assert!(PayoffSpec::EuropeanPut { strike: 0.0 }.validate().is_err());
    }

    #[test]
    fn path_shape_on_weekly_grid() {
        let p = CgmyParams::design_i();
        let market = MarketSpec::equally_spaced(0.0548, 0.0, 100.0, 0.25, 13).unwrap();
        let cfg = TcdConfig::new(1e-4, 1e-4, DirichletVariant::Series).unwrap();
        let mut s = RngStream::new(7, 0);
        let path = sample_path(&p, &market, SamplingMethod::Exact, &cfg, &mut s).unwrap();
        assert_eq!(path.x().len(), 14);
        assert_eq!(path.prices().len(), 14);
        assert_eq!(path.x()[0], 0.0);
        assert_eq!(path.prices()[0], 100.0);
    }

    #[test]
    fn barrier_never_hit_prices_to_zero() {
        let p = CgmyParams::design_i();
        let market = MarketSpec::single_period(0.0548, 0.0, 100.0, 0.25).unwrap();
        let cfg = TcdConfig::new(1e-4, 1e-4, DirichletVariant::Series).unwrap();
        let spec = PayoffSpec::BarrierUpInCall {
            strike: 100.0,
            barrier: 1e9,
        };
        let est = price(&spec, &p, &market, SamplingMethod::Exact, &cfg, 1000, 1).unwrap();
        assert_eq!(est.mean, 0.0);
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn price_determinism() {
        let p = CgmyParams::design_i();
        let market = MarketSpec::single_period(0.0548, 0.0, 100.0, 0.25).unwrap();
        let cfg = TcdConfig::new(1e-4, 1e-4, DirichletVariant::Series).unwrap();
        let spec = PayoffSpec::EuropeanCall { strike: 100.0 };
        let a = price(&spec, &p, &market, SamplingMethod::Exact, &cfg, 2000, 42).unwrap();
        let b = price(&spec, &p, &market, SamplingMethod::Exact, &cfg, 2000, 42).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(PayoffSpec::EuropeanCall { strike: -1.0 }
            .validate()
            .is_err());
        assert!(PayoffSpec::BarrierUpInCall {
            strike: 100.0,
            barrier: 0.0
        }
        .validate()
        .is_err());
    }
}
