//! Rolling historical volatility and appreciation from daily closes, the
//! strike-selection rule used by the backtest, and the administrative fee
//! floor.
//!
//! Estimates come out in per-day units because the inputs are daily
//! closes; [`RollingEstimate::annualized`] converts them for the pricing
//! formulas, which expect per-year rates.

use chrono::NaiveDate;

use crate::error::{HedgeError, Result};

/// Default smoothing window, in trading days.
pub const DEFAULT_WINDOW: usize = 120;
/// Default strike-rule intercept.
pub const DEFAULT_BETA: f64 = 1.1;
/// Default strike-rule volatility weight.
pub const DEFAULT_GAMMA: f64 = 20.0;
/// Default administrative-fee floor as a fraction of spot.
pub const DEFAULT_FEE_FLOOR: f64 = 0.03;

/// Daily closing prices of one asset, sorted by date.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    ticker: String,
    closes: Vec<(NaiveDate, f64)>,
}

impl PriceSeries {
    /// Validates positivity of every close and strict date ordering.
    pub fn new(ticker: impl Into<String>, closes: Vec<(NaiveDate, f64)>) -> Result<Self> {
        let ticker = ticker.into();
        if ticker.is_empty() {
            return Err(HedgeError::Config("empty ticker".into()));
        }
        if closes.is_empty() {
            return Err(HedgeError::Config(format!("{ticker}: no price rows")));
        }
        for (i, &(date, close)) in closes.iter().enumerate() {
            if !(close > 0.0 && close.is_finite()) {
                return Err(HedgeError::Config(format!(
                    "{ticker}: nonpositive close {close} on {date}"
                )));
            }
            if i > 0 && closes[i - 1].0 >= date {
                return Err(HedgeError::Config(format!(
                    "{ticker}: dates not strictly increasing at {date}"
                )));
            }
        }
        Ok(Self { ticker, closes })
    }

    pub fn ticker(&self) -> &str {
        &self.ticker
    }

    pub fn len(&self) -> usize {
        self.closes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.closes.is_empty()
    }

    pub fn close(&self, i: usize) -> f64 {
        self.closes[i].1
    }

    pub fn date(&self, i: usize) -> NaiveDate {
        self.closes[i].0
    }

    pub fn rows(&self) -> &[(NaiveDate, f64)] {
        &self.closes
    }
}

/// Moving appreciation and volatility at one observation day, in per-day
/// units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RollingEstimate {
    /// Appreciation per day: mean log-return plus half the variance.
    pub mu_hat: f64,
    /// Sample standard deviation of log-returns (n-1 divisor), per sqrt(day).
    pub sigma_hat: f64,
    /// Mean of the window's log-returns.
    pub mean_log_return: f64,
    pub window: usize,
}

impl RollingEstimate {
    /// Converts to per-year units: `mu * periods`, `sigma * sqrt(periods)`.
    pub fn annualized(&self, periods_per_year: f64) -> (f64, f64) {
        (
            self.mu_hat * periods_per_year,
            self.sigma_hat * periods_per_year.sqrt(),
        )
    }
}

/// Rolling estimate at observation index `t` (0-based) from the `window`
/// log-returns ending with the return into day `t`.
pub fn rolling_estimates(series: &PriceSeries, t: usize, window: usize) -> Result<RollingEstimate> {
    if window < 2 {
        return Err(HedgeError::Range(format!(
            "window must be at least 2, got {window}"
        )));
    }
    if t < window || t >= series.len() {
        return Err(HedgeError::Range(format!(
            "{}: estimation at index {t} needs indices {}..={t} within 0..{}",
            series.ticker(),
            t as isize - window as isize,
            series.len()
        )));
    }
    let mut returns = Vec::with_capacity(window);
    for j in (t - window)..t {
        returns.push((series.close(j + 1) / series.close(j)).ln());
    }
    let n = window as f64;
    let mean = returns.iter().sum::<f64>() / n;
    let ss: f64 = returns.iter().map(|r| (r - mean) * (r - mean)).sum();
    let sigma_hat = (ss / (n - 1.0)).sqrt();
    Ok(RollingEstimate {
        mu_hat: mean + 0.5 * sigma_hat * sigma_hat,
        sigma_hat,
        mean_log_return: mean,
        window,
    })
}

/// Strike for a new contract: `spot * exp(mu*T / (beta + gamma*sigma))`.
///
/// `mu_hat`, `sigma_hat` and `maturity` must share a unit convention (the
/// backtest feeds annualized estimates and T in years).
pub fn strike_rule(
    spot: f64,
    mu_hat: f64,
    sigma_hat: f64,
    maturity: f64,
    beta: f64,
    gamma: f64,
) -> Result<f64> {
    if !(spot > 0.0 && spot.is_finite()) {
        return Err(HedgeError::domain("spot", "finite and > 0", spot));
    }
    let damping = beta + gamma * sigma_hat;
    if !(damping > 0.0 && damping.is_finite()) {
        return Err(HedgeError::domain(
            "beta + gamma * sigma",
            "finite and > 0",
            damping,
        ));
    }
    let strike = spot * (mu_hat * maturity / damping).exp();
    if !(strike > 0.0 && strike.is_finite()) {
        return Err(HedgeError::domain("strike", "finite and > 0", strike));
    }
    Ok(strike)
}

/// Premium floor covering administrative fees: `max(price, floor * spot)`.
/// Also repairs a negative minimum-variance premium.
pub fn apply_fee_floor(price: f64, spot: f64, floor_fraction: f64) -> f64 {
    debug_assert!(spot > 0.0);
    debug_assert!(floor_fraction >= 0.0);
    price.max(floor_fraction * spot)
}
