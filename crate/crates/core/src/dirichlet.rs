//! Sampling of the Dirichlet mean D_τ(F_Q) for a bounded scale variable Q:
//! exact double CFTP for τ <= 1, and a series sampler with an exponentially
//! converging stick-breaking tail and a pathwise truncation bound.
//!
//! Both samplers target the stationary solution of
//! `D =d= B Q + (1 − B) D` with `B ~ Beta(1, τ)`, whose density
//! `h(x) = τ(1−x)^{τ−1}` is bounded below on [0, 1] by `c_h = τ` when
//! τ <= 1, and `0 < Q <= c_Q`.

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Backward-search cap; exceeding it flags a nearly degenerate scale variable
/// (acceptance probability `c_h E|Q−Q'| / (2 c_Q)` close to zero).
const CFTP_CAP: u64 = 10_000_000;
/// Series-term cap; exceeding it flags a misconfigured threshold.
const SERIES_CAP: u64 = 10_000_000;
/// Below this, |Q − D| is treated as zero in the forward rejection step and
/// the corresponding density term drops out.
const DEGENERATE_GAP: f64 = 1e-30;

/// Shape and scale-bound data of one Dirichlet-mean fixed point.
#[derive(Debug, Clone, Copy)]
pub struct MeanFixedPointSpec {
    /// Total mass τ of the Dirichlet process; CFTP additionally needs τ <= 1.
    pub tau: f64,
    /// Uniform upper bound c_Q on the scale variable Q.
    pub c_q: f64,
}

impl MeanFixedPointSpec {
    pub fn new(tau: f64, c_q: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "tau must be > 0, got {tau}"
            )));
        }
        if !(c_q > 0.0) || !c_q.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "c_Q must be > 0 and finite, got {c_q}"
            )));
        }
        Ok(Self { tau, c_q })
    }
}

/// Beta(1, τ) density on [0, 1], in log space for small shapes.
fn beta_density(x: f64, tau: f64) -> f64 {
    if !(0.0..=1.0).contains(&x) {
        return 0.0;
    }
    if x == 1.0 {
        return if tau < 1.0 {
            f64::INFINITY
        } else if tau == 1.0 {
            1.0
        } else {
            0.0
        };
    }
    (tau.ln() + (tau - 1.0) * (-x).ln_1p()).exp()
}

/// One draw exactly distributed as the stationary solution of the fixed-point
/// equation, via double CFTP. `q` generates the scale variable; every draw
/// must lie in (0, c_Q].
pub fn sample_mean_cftp<Q: FnMut(&mut RngStream) -> f64>(
    spec: &MeanFixedPointSpec,
    q: &mut Q,
    s: &mut RngStream,
) -> Result<f64> {
    let tau = spec.tau;
    if tau > 1.0 {
        return Err(Error::Domain(format!(
            "double CFTP requires tau <= 1, got {tau} (split shapes first)"
        )));
    }
    let c_h = tau; // min of the Beta(1, tau) density on [0, 1]
    let c_q = spec.c_q;

    // (a) backward search for the coalescence index
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    let u_coal = loop {
        let u = s.uniform();
        let q1 = q(s);
        let q2 = q(s);
        pairs.push((q1, q2));
        if u <= (q1 - q2).abs() * c_h / (2.0 * c_q) {
            break u;
        }
        if pairs.len() as u64 >= CFTP_CAP {
            return Err(Error::IterationCap {
                context: "double CFTP backward search",
                cap: CFTP_CAP,
            });
        }
    };

    // (b) initialize at the coalescence state; the acceptance in (a)
    // guarantees D <= Q ∨ Q' <= c_Q, asserted rather than clamped
    let (qt1, qt2) = *pairs.last().unwrap();
    let mut d = qt1.min(qt2) + 2.0 * c_q * u_coal / c_h;
    assert!(
        d <= qt1.max(qt2) * (1.0 + 1e-12) + 1e-300,
        "CFTP initialization escaped [Q∧Q', Q∨Q']: d = {d}"
    );

    // (c) forward reconstruction from T+1 up to -1
    let mut guard: u64 = 0;
    for &(q1, q2) in pairs[..pairs.len() - 1].iter().rev() {
        loop {
            guard += 1;
            if guard > CFTP_CAP {
                return Err(Error::IterationCap {
                    context: "double CFTP forward pass",
                    cap: CFTP_CAP,
                });
            }
            let u = s.uniform();
            let pick_first = s.uniform() < 0.5;
            let b = s.beta_one_tau(tau);
            let x = (1.0 - b) * d + b * if pick_first { q1 } else { q2 };
            let lo = q1.min(q2);
            let hi = q1.max(q2);
            // when both scale draws coincide with the current state the
            // kernel degenerates to a point mass and the update is the
            // identity
            if (q1 - d).abs() < DEGENERATE_GAP && (q2 - d).abs() < DEGENERATE_GAP {
                d = x;
                break;
            }
            let accepted = if x < lo || x > hi {
                true
            } else {
                let term = |qi: f64| {
                    let gap = qi - d;
                    if gap.abs() < DEGENERATE_GAP {
                        return 0.0;
                    }
                    beta_density((x - d) / gap, tau) / gap.abs()
                };
                u * (term(q1) + term(q2)) > c_h / c_q
            };
            if accepted {
                d = x;
                break;
            }
        }
    }

    Ok(d)
}

/// Series approximation of the Dirichlet mean with stick-breaking weights,
/// stopped as soon as the residual bound `c_Q (1 − Σ B̃_i)` falls below
/// `eps_tilde`; the returned value is within `eps_tilde` of an exact draw,
/// pathwise. Also returns the number of terms consumed.
pub fn sample_mean_series<Q: FnMut(&mut RngStream) -> f64>(
    spec: &MeanFixedPointSpec,
    q: &mut Q,
    eps_tilde: f64,
    s: &mut RngStream,
) -> Result<(f64, u64)> {
    if !(eps_tilde > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "eps_tilde must be > 0, got {eps_tilde}"
        )));
    }
    let tau = spec.tau;
    let mut sum = 0.0;
    let mut remaining = 1.0; // 1 − Σ_{i<=n} B̃_i = Π_{i<=n} (1 − B_i)
    let mut n: u64 = 0;
    loop {
        n += 1;
        if n > SERIES_CAP {
            return Err(Error::IterationCap {
                context: "series Dirichlet-mean sampler",
                cap: SERIES_CAP,
            });
        }
        let b = s.beta_one_tau(tau);
        sum += b * remaining * q(s);
        remaining *= 1.0 - b;
        if spec.c_q * remaining < eps_tilde {
            return Ok((sum, n));
        }
    }
}

/// Optimal shape splitting for τ > 1: J = ⌊τ⌋ + 1 parts of shape τ/J each,
/// so every part satisfies the CFTP constraint τ_j <= 1.
pub fn split_shapes(tau: f64) -> Result<(u32, f64)> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "tau must be > 0, got {tau}"
        )));
    }
    let j = tau.floor() as u32 + 1;
    Ok((j, tau / j as f64))
}
