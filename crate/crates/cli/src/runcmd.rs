//! The `price` and `sample-paths` commands.

use cgmy_core::engine::{self, LookbackVariant, PayoffSpec};
use cgmy_core::RngStream;

use crate::config::{OptionKind, Settings};
use crate::AppError;

fn payoff_for(settings: &Settings, strike: f64) -> Result<PayoffSpec, AppError> {
    Ok(match settings.option {
        OptionKind::European => PayoffSpec::EuropeanPut { strike },
        OptionKind::EuropeanCall => PayoffSpec::EuropeanCall { strike },
        OptionKind::Asian => PayoffSpec::AsianPut { strike },
        OptionKind::AsianCall => PayoffSpec::AsianCall { strike },
        OptionKind::Lookback => PayoffSpec::LookbackFloatCall {
            variant: LookbackVariant::Min,
        },
        OptionKind::Barrier => {
            let barrier = settings
                .barrier
                .ok_or_else(|| AppError::Config("barrier option needs --barrier".into()))?;
            PayoffSpec::BarrierUpInCall { strike, barrier }
        }
    })
}

fn write_output(settings: &Settings, text: &str) -> Result<(), AppError> {
    match &settings.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| AppError::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Prices the configured payoff at every strike and writes one CSV row each.
/// `zero_elapsed` replaces the wall-clock column with 0 so that output files
/// can be compared byte for byte across runs.
pub fn cmd_price(settings: &Settings, zero_elapsed: bool) -> Result<(), AppError> {
    settings.init_threads()?;
    let market = settings.market()?;
    let (method, tcd) = settings.method_config()?;
    // the floating-strike lookback has no strike; emit a single row with 0
    let strikes: Vec<f64> = match settings.option {
        OptionKind::Lookback => vec![0.0],
        _ => settings.strikes.clone(),
    };
    let mut out = String::from("strike,method,estimate,stderr,elapsed_sec,n_trials,seed\n");
    for &strike in &strikes {
        let spec = payoff_for(settings, strike)?;
        let est = engine::price(
            &spec,
            &settings.params,
            &market,
            method,
            &tcd,
            settings.trials,
            settings.seed,
        )?;
        let elapsed = if zero_elapsed {
            0.0
        } else {
            est.elapsed_seconds
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            strike,
            settings.method.label(),
            est.mean,
            est.stderr,
            elapsed,
            est.n_trials,
            settings.seed
        ));
    }
    write_output(settings, &out)
}

/// Samples `n_paths` paths and writes them in long format for inspection.
pub fn cmd_sample_paths(settings: &Settings, n_paths: u64) -> Result<(), AppError> {
    if n_paths == 0 || n_paths > 10_000 {
        return Err(AppError::Config(format!(
            "paths must lie in 1..=10000, got {n_paths}"
        )));
    }
    settings.init_threads()?;
    let market = settings.market()?;
    let (method, tcd) = settings.method_config()?;
    let mut out = String::from("trial,t,X,S\n");
    for trial in 0..n_paths {
        let mut s = RngStream::new(settings.seed, trial);
        let path = engine::sample_path(&settings.params, &market, method, &tcd, &mut s)?;
        for i in 0..path.grid().len() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                trial,
                path.grid()[i],
                path.x()[i],
                path.prices()[i]
            ));
        }
    }
    write_output(settings, &out)
}
