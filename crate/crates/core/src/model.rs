//! CGMY parameterization: Lévy density, characteristic function, analytic
//! cumulants and the martingale drift correction.

use num_complex::Complex64;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

/// The (C, G, M, Y) parameter quadruple of a CGMY process.
///
/// The Lévy density is `C e^{-G|x|}/|x|^{1+Y}` for `x < 0` and
/// `C e^{-Mx}/x^{1+Y}` for `x > 0`. `Y` in `(0, 1)` gives finite variation,
/// `[1, 2)` infinite variation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgmyParams {
    c: f64,
    g: f64,
    m: f64,
    y: f64,
}

impl CgmyParams {
    /// Validates `C > 0`, `G >= 0`, `M >= 0`, `0 < Y < 2`.
    pub fn new(c: f64, g: f64, m: f64, y: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidParameter(format!("C must be > 0, got {c}")));
        }
        if !(g >= 0.0) || !g.is_finite() {
            return Err(Error::InvalidParameter(format!("G must be >= 0, got {g}")));
        }
        if !(m >= 0.0) || !m.is_finite() {
            return Err(Error::InvalidParameter(format!("M must be >= 0, got {m}")));
        }
        if !(y > 0.0 && y < 2.0) {
            return Err(Error::InvalidParameter(format!(
                "Y must lie in (0, 2), got {y}"
            )));
        }
        Ok(Self { c, g, m, y })
    }

    /// Design I of the simulation study: (0.1, 2, 3.5, 0.45), finite variation.
    pub fn design_i() -> Self {
        Self::new(0.1, 2.0, 3.5, 0.45).unwrap()
    }

    /// Design II of the simulation study: (0.1, 2, 3.5, 1.01), infinite variation.
    pub fn design_ii() -> Self {
        Self::new(0.1, 2.0, 3.5, 1.01).unwrap()
    }

    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn g(&self) -> f64 {
        self.g
    }
    pub fn m(&self) -> f64 {
        self.m
    }
    pub fn y(&self) -> f64 {
        self.y
    }

    /// Brownian drift of the time change representation: θ = (G − M)/2.
    pub fn theta(&self) -> f64 {
        (self.g - self.m) / 2.0
    }

    /// θ̃ = (G + M)/2.
    pub fn theta_tilde(&self) -> f64 {
        (self.g + self.m) / 2.0
    }

    /// Time-change-decomposition sampling needs both tempering parameters
    /// strictly positive so that the scale bound 2/(GM) is finite.
    pub fn require_tcd(&self) -> Result<()> {
        if self.g <= 0.0 || self.m <= 0.0 {
            return Err(Error::Domain(
                "time change decomposition requires G > 0 and M > 0".into(),
            ));
        }
        Ok(())
    }

    fn require_y_ne_1(&self) -> Result<()> {
        if self.y == 1.0 {
            return Err(Error::Domain(
                "Y = 1 is excluded from the characteristic function formula".into(),
            ));
        }
        Ok(())
    }

    /// Γ(−Y) for Y in (0,1)∪(1,2), via Γ(−Y) = Γ(2−Y)/((−Y)(1−Y)) to stay
    /// away from pole-adjacent cancellation near Y = 1.
    pub fn gamma_neg_y(&self) -> f64 {
        let y = self.y;
        gamma(2.0 - y) / ((-y) * (1.0 - y))
    }

    /// Lévy density ν(x); `x = 0` is a non-integrable pole and is rejected.
    pub fn levy_density(&self, x: f64) -> Result<f64> {
        if x == 0.0 {
            return Err(Error::Domain("Levy density has a pole at x = 0".into()));
        }
        let a = x.abs();
        let temper = if x < 0.0 { self.g } else { self.m };
        Ok(self.c * (-temper * a).exp() / a.powf(1.0 + self.y))
    }

    /// Characteristic function E[e^{iuX(t)}], principal branch, valid for Y ≠ 1.
    pub fn char_fn(&self, t: f64, u: f64) -> Result<Complex64> {
        self.require_y_ne_1()?;
        if !(t > 0.0) {
            return Err(Error::Domain(format!("t must be > 0, got {t}")));
        }
        let y = self.y;
        let iu = Complex64::new(0.0, u);
        let exponent = t
            * self.c
            * self.gamma_neg_y()
            * ((Complex64::new(self.g, 0.0) + iu).powf(y) - self.g.powf(y)
                + (Complex64::new(self.m, 0.0) - iu).powf(y)
                - self.m.powf(y));
        Ok(exponent.exp())
    }

    /// Mean and variance of X(t), from the derivatives of the characteristic
    /// exponent at u = 0.
    pub fn cumulants(&self, t: f64) -> Result<(f64, f64)> {
        self.require_y_ne_1()?;
        let y = self.y;
        if y < 1.0 && (self.g == 0.0 || self.m == 0.0) {
            return Err(Error::Domain(
                "mean formula diverges at zero tempering for Y < 1".into(),
            ));
        }
        let mean = t * self.c * gamma(1.0 - y) * (self.m.powf(y - 1.0) - self.g.powf(y - 1.0));
        let var = t * self.c * gamma(2.0 - y) * (self.g.powf(y - 2.0) + self.m.powf(y - 2.0));
        Ok((mean, var))
    }

    /// Drift correction ω making the discounted asset price a martingale.
    /// Requires M ≥ 1 (M = 1 only for Y < 1) and Y ≠ 1.
    pub fn martingale_drift(&self) -> Result<f64> {
        self.require_y_ne_1()?;
        if self.m < 1.0 || (self.m == 1.0 && self.y >= 1.0) {
            return Err(Error::Domain(
                "martingale drift requires M > 1 (M = 1 allowed only for Y < 1)".into(),
            ));
        }
        let y = self.y;
        Ok(-self.c
            * self.gamma_neg_y()
            * ((self.g + 1.0).powf(y) - self.g.powf(y) + (self.m - 1.0).powf(y) - self.m.powf(y)))
    }
}

/// Market data and monitoring grid for pricing.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketSpec {
    /// Continuously compounded risk-free rate, per year.
    pub r: f64,
    /// Continuously compounded dividend yield, per year.
    pub q: f64,
    /// Spot price.
    pub s0: f64,
    /// Monitoring times t_0 = 0 < t_1 < … < t_n = T.
    grid: Vec<f64>,
}

impl MarketSpec {
    pub fn new(r: f64, q: f64, s0: f64, grid: Vec<f64>) -> Result<Self> {
        if !(s0 > 0.0) {
            return Err(Error::InvalidParameter(format!("S0 must be > 0, got {s0}")));
        }
        if grid.len() < 2 {
            return Err(Error::InvalidParameter(
                "monitoring grid needs at least two points".into(),
            ));
        }
        if grid[0] != 0.0 {
            return Err(Error::InvalidParameter("grid must start at 0".into()));
        }
        if !grid.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::InvalidParameter(
                "grid must be strictly increasing".into(),
            ));
        }
        Ok(Self { r, q, s0, grid })
    }

    /// Two-point grid {0, T}: a single increment, used for European payoffs.
    pub fn single_period(r: f64, q: f64, s0: f64, t: f64) -> Result<Self> {
        Self::new(r, q, s0, vec![0.0, t])
    }

    /// Equally spaced grid with `n` monitoring intervals on [0, T].
    pub fn equally_spaced(r: f64, q: f64, s0: f64, t: f64, n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter("need n >= 1 intervals".into()));
        }
        if !(t > 0.0) {
            return Err(Error::InvalidParameter(format!("T must be > 0, got {t}")));
        }
        let mut grid: Vec<f64> = (0..=n).map(|i| t * i as f64 / n as f64).collect();
        grid[n] = t;
        Self::new(r, q, s0, grid)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn maturity(&self) -> f64 {
        *self.grid.last().unwrap()
    }
}
