//! Pricing, hedging and backtesting for single-period European calls on
//! lognormally distributed prices.
//!
//! A written call hedged with a fixed fraction `h` of the underlying and
//! held unchanged to maturity has terminal value `F = -C + h*S`. The
//! crate computes the `h` that minimizes the variance of `F` in closed
//! form, the premium that makes the hedged position statistically fair,
//! and the two baselines it is naturally compared with: the discounted
//! expected payoff under the real-world drift, and Black-Scholes.
//!
//! On top of the pricing kernel sit rolling drift/volatility estimators
//! for daily closes, a backtesting engine that writes one contract per
//! day and settles it a fixed number of rows later, and a seeded Monte
//! Carlo module that doubles as the verification oracle for every closed
//! form.
//!
//! Start with the runnable examples (`cargo run --example price_quote`,
//! `hedge_curve`, `variance_profile`, `rolling_estimates`,
//! `synthetic_backtest`, `monte_carlo_check`, `make_fixture`), or the
//! `hedgekit` binary for the same capabilities in subcommand form.

pub mod backtest;
pub mod cli;
pub mod error;
pub mod estimators;
pub mod mc;
pub mod pricing;
pub mod special;
pub mod verify;

pub use error::{HedgeError, Result};
pub use estimators::{PriceSeries, RollingEstimate};
pub use mc::{GbmSpec, McEstimate};
pub use pricing::{ContractTerms, HedgeQuote, MarketState};
pub use special::{LognormalParams, TailMoments};
