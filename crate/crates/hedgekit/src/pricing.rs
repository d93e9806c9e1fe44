//! The three pricing engines — expectations, Black-Scholes and
//! minimum-variance — plus moment analytics for the hedged portfolio
//! `F = -C + h*S` held unchanged until maturity.

use crate::error::{HedgeError, Result};
use crate::special::{self, LognormalParams, TailMoments};

/// Market inputs common to every formula: spot price, appreciation,
/// volatility and the riskless rate (all rates per year).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketState {
    spot: f64,
    mu: f64,
    sigma: f64,
    rate: f64,
}

impl MarketState {
    pub fn new(spot: f64, mu: f64, sigma: f64, rate: f64) -> Result<Self> {
        if !(spot > 0.0 && spot.is_finite()) {
            return Err(HedgeError::domain("spot", "finite and > 0", spot));
        }
        if !mu.is_finite() {
            return Err(HedgeError::domain("mu", "finite", mu));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(HedgeError::domain("sigma", "finite and > 0", sigma));
        }
        if !rate.is_finite() {
            return Err(HedgeError::domain("rate", "finite", rate));
        }
        Ok(Self {
            spot,
            mu,
            sigma,
            rate,
        })
    }

    pub fn spot(&self) -> f64 {
        self.spot
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }
}

/// Strike and time to maturity (years) of one European call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractTerms {
    strike: f64,
    maturity: f64,
}

impl ContractTerms {
    pub fn new(strike: f64, maturity: f64) -> Result<Self> {
        if !(strike > 0.0 && strike.is_finite()) {
            return Err(HedgeError::domain("strike", "finite and > 0", strike));
        }
        if !(maturity > 0.0 && maturity.is_finite()) {
            return Err(HedgeError::domain("maturity", "finite and > 0", maturity));
        }
        Ok(Self { strike, maturity })
    }

    pub fn strike(&self) -> f64 {
        self.strike
    }

    pub fn maturity(&self) -> f64 {
        self.maturity
    }
}

/// Everything the variance-minimizing writer needs for one contract.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HedgeQuote {
    /// Asset units held per written call.
    pub hedge_ratio: f64,
    /// Minimum-variance premium; may be negative.
    pub price_mv: f64,
    /// Expected terminal portfolio value E F(t+T).
    pub expected_terminal: f64,
    /// Terminal portfolio variance at the optimal hedge ratio.
    pub variance: f64,
    pub stddev: f64,
}

// Quotes refuse nearly-deterministic terminal laws instead of chasing
// sigma -> 0 limits; everything downstream divides by log-variance terms.
const MIN_LOG_SD: f64 = 1e-6;

fn moments_for(
    market: &MarketState,
    contract: &ContractTerms,
) -> Result<(LognormalParams, TailMoments)> {
    let params = special::lognormal_params(market, contract.maturity())?;
    if params.log_sd() < MIN_LOG_SD {
        return Err(HedgeError::domain(
            "sigma * sqrt(maturity)",
            "at least 1e-6",
            params.log_sd(),
        ));
    }
    let tm = special::tail_moments(&params, contract.strike())?;
    Ok((params, tm))
}

/// Discounted expected payoff under the real-world drift,
/// `exp(-rT) * E max(0, S(t+T) - K)`.
pub fn price_expectations(market: &MarketState, contract: &ContractTerms) -> Result<f64> {
    let (_, tm) = moments_for(market, contract)?;
    let discount = (-market.rate() * contract.maturity()).exp();
    Ok(discount * (tm.mean_above - contract.strike() * tm.p_above))
}

/// Classic Black-Scholes value; ignores the appreciation coefficient by
/// construction.
pub fn price_black_scholes(market: &MarketState, contract: &ContractTerms) -> Result<f64> {
    let t = contract.maturity();
    let vol_sqrt_t = market.sigma() * t.sqrt();
    if vol_sqrt_t < MIN_LOG_SD {
        return Err(HedgeError::domain(
            "sigma * sqrt(maturity)",
            "at least 1e-6",
            vol_sqrt_t,
        ));
    }
    let s = market.spot();
    let k = contract.strike();
    let r = market.rate();
    let d1 = ((s / k).ln() + (r + 0.5 * market.sigma() * market.sigma()) * t) / vol_sqrt_t;
    let d2 = d1 - vol_sqrt_t;
    Ok(s * special::phi(d1) - k * (-r * t).exp() * special::phi(d2))
}

/// Variance-minimizing fraction of the underlying per written call,
/// computed from the five truncated moments.
pub fn hedge_ratio(market: &MarketState, contract: &ContractTerms) -> Result<f64> {
    let (_, tm) = moments_for(market, contract)?;
    Ok(hedge_ratio_from_moments(&tm))
}

pub(crate) fn hedge_ratio_from_moments(tm: &TailMoments) -> f64 {
    let k = tm.strike;
    let full_mean = tm.full_mean();
    let numer = tm.sq_above - k * tm.mean_above + full_mean * (k * tm.p_above - tm.mean_above);
    let denom = tm.full_mean_square() - full_mean * full_mean;
    numer / denom
}

/// Same hedge ratio through the algebraically reduced form, in which the
/// full moments are replaced by their lognormal closed forms and the
/// denominator avoids differencing two second moments. Used to cross-check
/// [`hedge_ratio`]; the two agree to better than 1e-10 relative.
pub fn hedge_ratio_simplified(market: &MarketState, contract: &ContractTerms) -> Result<f64> {
    let (params, tm) = moments_for(market, contract)?;
    let k = tm.strike;
    let a = params.log_mean();
    let b2 = params.log_sd() * params.log_sd();
    let m1 = params.mean();
    let numer = tm.sq_above - k * tm.mean_above + m1 * (k * tm.p_above - tm.mean_above);
    let denom = (2.0 * a + b2).exp() * (b2.exp_m1());
    Ok(numer / denom)
}

/// Mean and variance of the terminal portfolio `F(t+T) = -C(t+T) + h*S(t+T)`
/// for an arbitrary hedge ratio `h`.
pub fn portfolio_moments(
    market: &MarketState,
    contract: &ContractTerms,
    h: f64,
) -> Result<(f64, f64)> {
    if !h.is_finite() {
        return Err(HedgeError::domain("h", "finite", h));
    }
    let (_, tm) = moments_for(market, contract)?;
    portfolio_moments_from(&tm, h)
}

pub(crate) fn portfolio_moments_from(tm: &TailMoments, h: f64) -> Result<(f64, f64)> {
    let k = tm.strike;
    let expected = h * tm.full_mean() - tm.mean_above + k * tm.p_above;
    let hm = h - 1.0;
    let second = hm * hm * tm.sq_above
        + 2.0 * k * hm * tm.mean_above
        + k * k * tm.p_above
        + h * h * tm.sq_below;
    let raw = second - expected * expected;
    // Cancellation in second - expected^2 can leave a tiny negative
    // residue; clamp it, but treat anything beyond rounding scale as a
    // genuine inconsistency.
    let tol = 1e-12f64.max(1e-14 * second.abs());
    if raw < -tol {
        return Err(HedgeError::NonFinite {
            what: "negative variance",
            context: format!("portfolio variance {raw} at h={h}, strike={k}"),
        });
    }
    Ok((expected, raw.max(0.0)))
}

/// Minimum-variance premium: `h*S - exp(-rT) * E F(t+T)` at the optimal
/// hedge ratio. Unlike the other two engines this may be negative.
pub fn price_mv(market: &MarketState, contract: &ContractTerms) -> Result<f64> {
    let (_, tm) = moments_for(market, contract)?;
    let h = hedge_ratio_from_moments(&tm);
    let (expected, _) = portfolio_moments_from(&tm, h)?;
    let discount = (-market.rate() * contract.maturity()).exp();
    Ok(h * market.spot() - discount * expected)
}

/// Standard deviation of the bare option payoff — the terminal risk of a
/// writer holding only riskless assets against the call. Invariant under
/// the riskless position size.
pub fn stddev_unhedged(market: &MarketState, contract: &ContractTerms) -> Result<f64> {
    let (_, tm) = moments_for(market, contract)?;
    let k = tm.strike;
    let payoff_mean = tm.mean_above - k * tm.p_above;
    let payoff_sq = tm.sq_above - 2.0 * k * tm.mean_above + k * k * tm.p_above;
    Ok((payoff_sq - payoff_mean * payoff_mean).max(0.0).sqrt())
}

/// Full quote for the variance-minimizing writer: optimal hedge ratio,
/// premium and the terminal portfolio moments at that ratio.
pub fn hedge_quote(market: &MarketState, contract: &ContractTerms) -> Result<HedgeQuote> {
    let (_, tm) = moments_for(market, contract)?;
    let h = hedge_ratio_from_moments(&tm);
    let (expected, variance) = portfolio_moments_from(&tm, h)?;
    let discount = (-market.rate() * contract.maturity()).exp();
    Ok(HedgeQuote {
        hedge_ratio: h,
        price_mv: h * market.spot() - discount * expected,
        expected_terminal: expected,
        variance,
        stddev: variance.sqrt(),
    })
}
