//! Replays the option-writing experiment on daily closing prices: each
//! issue day estimate drift and volatility over a rolling window, pick a
//! strike, price the contract, settle it a fixed number of rows later,
//! and accumulate buyer/seller profit ledgers per asset. Cross-asset
//! aggregates weight each asset by the inverse of its average price.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use chrono::NaiveDate;
use rayon::prelude::*;

use crate::error::{HedgeError, Result};
use crate::estimators::{self, PriceSeries};
use crate::pricing::{self, ContractTerms, MarketState};

/// Which engine prices the contracts and settles the seller side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Discounted-expected-payoff premium; seller holds riskless assets
    /// only, so buyer and seller ledgers are exact mirrors.
    Expectations,
    /// Minimum-variance premium; seller also holds `h` units of stock.
    MeanVariance,
}

impl Strategy {
    pub fn label(&self) -> &'static str {
        match self {
            Strategy::Expectations => "expectations",
            Strategy::MeanVariance => "mv",
        }
    }
}

/// Knobs of one backtest run.
#[derive(Debug, Clone, PartialEq)]
pub struct BacktestConfig {
    /// Rolling estimation window, in rows.
    pub window: usize,
    /// Number of consecutive issue days.
    pub issue_days: usize,
    /// Settlement lag, in rows: a contract written at row `t` settles at
    /// row `t + maturity_days`.
    pub maturity_days: usize,
    /// Time to maturity in years as fed to pricing and the strike rule.
    pub maturity_years: f64,
    pub beta: f64,
    pub gamma: f64,
    pub fee_floor: f64,
    /// Riskless rate per year.
    pub rate: f64,
    /// Periods per year used to annualize the per-day estimates.
    pub day_count_base: f64,
    /// Floor for the per-day volatility estimate; degenerate windows
    /// (e.g. constant prices) are lifted to this value with a warning.
    pub min_sigma_daily: f64,
    pub strategy: Strategy,
}

impl Default for BacktestConfig {
    fn default() -> Self {
        // 126 trading rows of a 255-row year is about the 180/365 horizon
        // the pricing examples use.
        Self {
            window: estimators::DEFAULT_WINDOW,
            issue_days: 100,
            maturity_days: 126,
            maturity_years: 126.0 / 255.0,
            beta: estimators::DEFAULT_BETA,
            gamma: estimators::DEFAULT_GAMMA,
            fee_floor: estimators::DEFAULT_FEE_FLOOR,
            rate: 0.05,
            day_count_base: 365.0,
            min_sigma_daily: 1e-4,
            strategy: Strategy::Expectations,
        }
    }
}

impl BacktestConfig {
    /// Rows of history each series must offer.
    pub fn min_rows(&self) -> usize {
        self.window + self.maturity_days + self.issue_days
    }

    fn validate(&self) -> Result<()> {
        if self.window < 2 {
            return Err(HedgeError::Config("window must be at least 2".into()));
        }
        if self.issue_days < 1 {
            return Err(HedgeError::Config("issue_days must be at least 1".into()));
        }
        if self.maturity_days < 1 {
            return Err(HedgeError::Config(
                "maturity_days must be at least 1".into(),
            ));
        }
        if !(self.maturity_years > 0.0 && self.maturity_years.is_finite()) {
            return Err(HedgeError::Config("maturity_years must be positive".into()));
        }
        if self.fee_floor.is_nan() || self.fee_floor < 0.0 {
            return Err(HedgeError::Config("fee_floor must be nonnegative".into()));
        }
        if self.day_count_base.is_nan() || self.day_count_base <= 0.0 {
            return Err(HedgeError::Config("day_count_base must be positive".into()));
        }
        if self.min_sigma_daily.is_nan() || self.min_sigma_daily <= 0.0 {
            return Err(HedgeError::Config(
                "min_sigma_daily must be positive".into(),
            ));
        }
        if !self.rate.is_finite() {
            return Err(HedgeError::Config("rate must be finite".into()));
        }
        Ok(())
    }
}

/// Buyer profit update for one settled contract.
#[inline]
pub fn buyer_step(prev: f64, settle_price: f64, strike: f64, premium: f64) -> f64 {
    prev + buyer_delta(settle_price, strike, premium)
}

#[inline]
fn buyer_delta(settle_price: f64, strike: f64, premium: f64) -> f64 {
    if settle_price >= strike {
        settle_price - strike - premium
    } else {
        -premium
    }
}

/// Seller profit update under the expectations strategy: the exact
/// floating-point negation of the buyer delta, so the two ledgers sum to
/// zero bit for bit.
#[inline]
pub fn seller_step_expectations(prev: f64, settle_price: f64, strike: f64, premium: f64) -> f64 {
    prev + (-buyer_delta(settle_price, strike, premium))
}

/// Seller profit update when the writer also holds `h` units of stock
/// bought at `issue_price`.
#[inline]
pub fn seller_step_mv(
    prev: f64,
    settle_price: f64,
    issue_price: f64,
    strike: f64,
    premium: f64,
    h: f64,
) -> f64 {
    if settle_price >= strike {
        prev + premium + (1.0 - h) * (strike - settle_price)
    } else {
        prev + premium + h * (settle_price - issue_price)
    }
}

/// Per-asset paths of one run. Profit paths are cumulative with entry 0
/// fixed at zero; the per-issue paths have one entry per contract.
#[derive(Debug, Clone, PartialEq)]
pub struct AssetLedger {
    pub ticker: String,
    /// Mean close over the issue days (the aggregation weight base).
    pub avg_price: f64,
    pub strike_path: Vec<f64>,
    pub premium_path: Vec<f64>,
    /// Optimal hedge ratios; present only for mean-variance runs.
    pub hedge_path: Option<Vec<f64>>,
    /// Capital committed per contract: premium alone, or premium plus the
    /// hedge position for mean-variance sellers.
    pub turnover_path: Vec<f64>,
    pub buyer_path: Vec<f64>,
    pub seller_path: Vec<f64>,
    /// Number of estimation windows whose volatility was lifted to the floor.
    pub floored_windows: usize,
}

impl AssetLedger {
    pub fn final_buyer(&self) -> f64 {
        *self.buyer_path.last().unwrap()
    }

    pub fn final_seller(&self) -> f64 {
        *self.seller_path.last().unwrap()
    }
}

/// Inverse-price-weighted averages across assets.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateReport {
    pub strategy: Strategy,
    /// Weights aligned with the outcome's ledger order; they sum to one.
    pub weights: Vec<f64>,
    /// Weighted buyer profits, cumulative (length issue_days + 1).
    pub avg_buyer: Vec<f64>,
    /// Weighted seller profits, cumulative.
    pub avg_seller: Vec<f64>,
    /// Weighted premium per issue day (length issue_days).
    pub avg_premium: Vec<f64>,
    /// Weighted committed capital per issue day; equals `avg_premium`
    /// under the expectations strategy.
    pub avg_turnover: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BacktestOutcome {
    /// One ledger per asset, ordered by ticker.
    pub ledgers: Vec<AssetLedger>,
    pub aggregate: AggregateReport,
}

fn run_asset(series: &PriceSeries, config: &BacktestConfig) -> Result<AssetLedger> {
    let rows = series.len();
    let needed = config.min_rows();
    if rows < needed {
        return Err(HedgeError::Config(format!(
            "{}: needs at least {needed} rows (window {} + maturity {} + issue days {}), has {rows}",
            series.ticker(),
            config.window,
            config.maturity_days,
            config.issue_days
        )));
    }
    let j_count = config.issue_days;
    let start = rows - config.maturity_days - j_count;

    let mut ledger = AssetLedger {
        ticker: series.ticker().to_string(),
        avg_price: 0.0,
        strike_path: Vec::with_capacity(j_count),
        premium_path: Vec::with_capacity(j_count),
        hedge_path: matches!(config.strategy, Strategy::MeanVariance)
            .then(|| Vec::with_capacity(j_count)),
        turnover_path: Vec::with_capacity(j_count),
        buyer_path: vec![0.0],
        seller_path: vec![0.0],
        floored_windows: 0,
    };

    for j in 0..j_count {
        let idx = start + j;
        let settle_idx = idx + config.maturity_days;
        let spot = series.close(idx);
        let settle = series.close(settle_idx);

        let est = estimators::rolling_estimates(series, idx, config.window)?;
        let mut sigma_daily = est.sigma_hat;
        if sigma_daily < config.min_sigma_daily {
            sigma_daily = config.min_sigma_daily;
            ledger.floored_windows += 1;
        }
        // keep the drift identity mu = mean + sigma^2/2 after flooring
        let mu_daily = est.mean_log_return + 0.5 * sigma_daily * sigma_daily;
        let mu_yr = mu_daily * config.day_count_base;
        let sigma_yr = sigma_daily * config.day_count_base.sqrt();

        let strike = estimators::strike_rule(
            spot,
            mu_yr,
            sigma_yr,
            config.maturity_years,
            config.beta,
            config.gamma,
        )?;
        let market = MarketState::new(spot, mu_yr, sigma_yr, config.rate)?;
        let contract = ContractTerms::new(strike, config.maturity_years)?;

        let (premium, turnover, hedge) = match config.strategy {
            Strategy::Expectations => {
                let raw = pricing::price_expectations(&market, &contract)?;
                let premium = estimators::apply_fee_floor(raw, spot, config.fee_floor);
                (premium, premium, None)
            }
            Strategy::MeanVariance => {
                let quote = pricing::hedge_quote(&market, &contract)?;
                let premium = estimators::apply_fee_floor(quote.price_mv, spot, config.fee_floor);
                (
                    premium,
                    premium + quote.hedge_ratio * spot,
                    Some(quote.hedge_ratio),
                )
            }
        };

        let prev_buyer = *ledger.buyer_path.last().unwrap();
        let prev_seller = *ledger.seller_path.last().unwrap();
        let buyer = buyer_step(prev_buyer, settle, strike, premium);
        let seller = match config.strategy {
            Strategy::Expectations => {
                seller_step_expectations(prev_seller, settle, strike, premium)
            }
            Strategy::MeanVariance => seller_step_mv(
                prev_seller,
                settle,
                spot,
                strike,
                premium,
                hedge.expect("mv strategy always has a hedge ratio"),
            ),
        };

        for (what, value) in [
            ("strike", strike),
            ("premium", premium),
            ("buyer profit", buyer),
            ("seller profit", seller),
        ] {
            if !value.is_finite() {
                return Err(HedgeError::NonFinite {
                    what: "ledger value",
                    context: format!("{} {what} at issue step {}", series.ticker(), j + 1),
                });
            }
        }

        ledger.strike_path.push(strike);
        ledger.premium_path.push(premium);
        if let Some(hs) = ledger.hedge_path.as_mut() {
            hs.push(hedge.unwrap());
        }
        ledger.turnover_path.push(turnover);
        ledger.buyer_path.push(buyer);
        ledger.seller_path.push(seller);
    }

    let span = &series.rows()[start..start + j_count];
    ledger.avg_price = span.iter().map(|&(_, c)| c).sum::<f64>() / j_count as f64;
    if ledger.floored_windows > 0 {
        log::warn!(
            "{}: volatility floored to {} in {} of {} estimation windows",
            series.ticker(),
            config.min_sigma_daily,
            ledger.floored_windows,
            j_count
        );
    }
    Ok(ledger)
}

/// Runs the full experiment over a set of assets.
///
/// Assets are processed independently (in parallel) and aggregated in
/// ticker order, so the outcome is deterministic for a given input set
/// and configuration regardless of thread count or input row order.
pub fn run_backtest(series: &[PriceSeries], config: &BacktestConfig) -> Result<BacktestOutcome> {
    config.validate()?;
    if series.is_empty() {
        return Err(HedgeError::Config("no assets supplied".into()));
    }
    let mut sorted: Vec<&PriceSeries> = series.iter().collect();
    sorted.sort_by(|a, b| a.ticker().cmp(b.ticker()));
    for pair in sorted.windows(2) {
        if pair[0].ticker() == pair[1].ticker() {
            return Err(HedgeError::Config(format!(
                "duplicate ticker {}",
                pair[0].ticker()
            )));
        }
    }

    let ledgers: Vec<AssetLedger> = sorted
        .par_iter()
        .map(|s| run_asset(s, config))
        .collect::<Result<_>>()?;

    let inv_sum: f64 = ledgers.iter().map(|l| 1.0 / l.avg_price).sum();
    let weights: Vec<f64> = ledgers
        .iter()
        .map(|l| 1.0 / l.avg_price / inv_sum)
        .collect();

    let j_count = config.issue_days;
    let weighted = |f: &dyn Fn(&AssetLedger, usize) -> f64, len: usize| -> Vec<f64> {
        (0..len)
            .map(|t| ledgers.iter().zip(&weights).map(|(l, w)| w * f(l, t)).sum())
            .collect()
    };

    let aggregate = AggregateReport {
        strategy: config.strategy,
        weights: weights.clone(),
        avg_buyer: weighted(&|l, t| l.buyer_path[t], j_count + 1),
        avg_seller: weighted(&|l, t| l.seller_path[t], j_count + 1),
        avg_premium: weighted(&|l, t| l.premium_path[t], j_count),
        avg_turnover: weighted(&|l, t| l.turnover_path[t], j_count),
    };

    Ok(BacktestOutcome { ledgers, aggregate })
}

// ---------------------------------------------------------------------------
// CSV interfaces: `date,ticker,close` input and the two report shapes.
// ---------------------------------------------------------------------------

/// Reads a `date,ticker,close` CSV into per-asset series, sorting rows by
/// date within each ticker and the resulting series by ticker.
pub fn read_price_csv(path: impl AsRef<Path>) -> Result<Vec<PriceSeries>> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| HedgeError::Data {
            path: display.clone(),
            line: 0,
            message: e.to_string(),
        })?;

    let headers = reader
        .headers()
        .map_err(|e| HedgeError::Data {
            path: display.clone(),
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let expected = ["date", "ticker", "close"];
    if headers.iter().map(str::trim).ne(expected) {
        return Err(HedgeError::Data {
            path: display,
            line: 1,
            message: format!(
                "expected header date,ticker,close, got {}",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }

    let mut by_ticker: BTreeMap<String, Vec<(NaiveDate, f64)>> = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| HedgeError::Data {
            path: display.clone(),
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let data_err = |message: String| HedgeError::Data {
            path: display.clone(),
            line,
            message,
        };
        if record.len() != 3 {
            return Err(data_err(format!("expected 3 fields, got {}", record.len())));
        }
        let date = NaiveDate::parse_from_str(record[0].trim(), "%Y-%m-%d")
            .map_err(|e| data_err(format!("bad date {:?}: {e}", &record[0])))?;
        let ticker = record[1].trim().to_string();
        if ticker.is_empty() {
            return Err(data_err("empty ticker".into()));
        }
        let close: f64 = record[2]
            .trim()
            .parse()
            .map_err(|e| data_err(format!("bad close {:?}: {e}", &record[2])))?;
        if !(close > 0.0 && close.is_finite()) {
            return Err(data_err(format!("close must be positive, got {close}")));
        }
        by_ticker.entry(ticker).or_default().push((date, close));
    }

    let mut out = Vec::with_capacity(by_ticker.len());
    for (ticker, mut rows) in by_ticker {
        rows.sort_by_key(|&(d, _)| d);
        for pair in rows.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(HedgeError::Data {
                    path: display.clone(),
                    line: 0,
                    message: format!("{ticker}: duplicate date {}", pair[0].0),
                });
            }
        }
        out.push(PriceSeries::new(ticker, rows)?);
    }
    Ok(out)
}

/// Writes series in the input format (`date,ticker,close`), one block per
/// asset; closes keep full round-trip precision.
pub fn write_series_csv(w: &mut impl Write, series: &[PriceSeries]) -> Result<()> {
    writeln!(w, "date,ticker,close")?;
    for s in series {
        for &(date, close) in s.rows() {
            writeln!(w, "{date},{},{close}", s.ticker())?;
        }
    }
    Ok(())
}

/// Writes the aggregate path report: one row per settlement step, currency
/// values with two decimals.
pub fn write_aggregate_csv(w: &mut impl Write, report: &AggregateReport) -> Result<()> {
    writeln!(w, "step,AB,AS,turnover")?;
    for s in 1..report.avg_buyer.len() {
        writeln!(
            w,
            "{s},{:.2},{:.2},{:.2}",
            report.avg_buyer[s],
            report.avg_seller[s],
            report.avg_turnover[s - 1]
        )?;
    }
    Ok(())
}

/// Writes the per-asset final-profit table combining an expectations run
/// and a mean-variance run over the same data.
pub fn write_per_asset_csv(
    w: &mut impl Write,
    expectations: &BacktestOutcome,
    mean_variance: &BacktestOutcome,
) -> Result<()> {
    if expectations.ledgers.len() != mean_variance.ledgers.len() {
        return Err(HedgeError::Config(
            "per-asset table needs both runs over the same asset set".into(),
        ));
    }
    writeln!(w, "ticker,avg_price,buy_exp,sell_exp,buy_mv,sell_mv")?;
    for (e, m) in expectations.ledgers.iter().zip(&mean_variance.ledgers) {
        if e.ticker != m.ticker {
            return Err(HedgeError::Config(format!(
                "asset mismatch between runs: {} vs {}",
                e.ticker, m.ticker
            )));
        }
        writeln!(
            w,
            "{},{:.2},{:.2},{:.2},{:.2},{:.2}",
            e.ticker,
            e.avg_price,
            e.final_buyer(),
            e.final_seller(),
            m.final_buyer(),
            m.final_seller()
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn day(i: usize) -> NaiveDate {
        NaiveDate::from_ymd_opt(2004, 1, 1).unwrap() + chrono::Days::new(i as u64)
    }

    fn constant_series(ticker: &str, value: f64, len: usize) -> PriceSeries {
        PriceSeries::new(
            ticker,
            (0..len).map(|i| (day(i), value)).collect::<Vec<_>>(),
        )
        .unwrap()
    }

    fn small_config(strategy: Strategy) -> BacktestConfig {
        BacktestConfig {
            window: 10,
            issue_days: 5,
            maturity_days: 4,
            maturity_years: 4.0 / 255.0,
            strategy,
            ..BacktestConfig::default()
        }
    }

    #[test]
    fn buyer_step_examples() {
        assert_eq!(buyer_step(0.0, 25.0, 20.0, 2.0), 3.0);
        assert_eq!(buyer_step(0.0, 15.0, 20.0, 2.0), -2.0);
        // settlement exactly at the strike exercises with zero intrinsic
        assert_eq!(buyer_step(1.0, 20.0, 20.0, 2.0), -1.0);
    }

    #[test]
    fn seller_step_mirrors_buyer() {
        assert_eq!(seller_step_expectations(0.0, 25.0, 20.0, 2.0), -3.0);
        assert_eq!(seller_step_expectations(0.0, 15.0, 20.0, 2.0), 2.0);
        assert_eq!(seller_step_expectations(10.0, 15.0, 20.0, 2.0), 12.0);
    }

    #[test]
    fn buyer_and_seller_deltas_cancel_exactly() {
        let cases = [
            (25.341, 20.173, 2.819),
            (1e16, 1.0, 1.0),
            (19.99, 20.0, 0.6),
            (20.0, 20.0, 0.0),
        ];
        for (settle, strike, premium) in cases {
            let b = buyer_step(0.0, settle, strike, premium);
            let s = seller_step_expectations(0.0, settle, strike, premium);
            assert_eq!(b + s, 0.0, "settle={settle}");
            assert_eq!(s, -b);
        }
    }

    #[test]
    fn mv_seller_step_examples() {
        // fully covered writer keeps the premium on exercise
        assert_eq!(seller_step_mv(0.0, 25.0, 18.0, 20.0, 2.0, 1.0), 2.0);
        let got = seller_step_mv(0.0, 25.0, 18.0, 20.0, 2.0, 0.4);
        assert!((got - (2.0 + 0.6 * (20.0 - 25.0))).abs() < 1e-15);
        assert!((got + 1.0).abs() < 1e-15);
        let got = seller_step_mv(0.0, 15.0, 18.0, 20.0, 2.0, 0.4);
        assert!((got - 0.8).abs() < 1e-15);
    }

    #[test]
    fn constant_prices_lose_every_premium() {
        let series = [constant_series("FLAT", 20.0, 30)];
        let config = small_config(Strategy::Expectations);
        let outcome = run_backtest(&series, &config).unwrap();
        let ledger = &outcome.ledgers[0];

        // floored volatility makes the drift slightly positive, so every
        // strike sits above the constant spot and nothing is exercised
        assert_eq!(ledger.floored_windows, config.issue_days);
        assert!(ledger.hedge_path.is_none(), "no hedge path outside mv runs");
        for (k, premium) in ledger.strike_path.iter().zip(&ledger.premium_path) {
            assert!(*k > 20.0);
            assert!((premium - 0.6).abs() < 1e-12, "floor at 3% of spot");
        }
        let total: f64 = ledger.premium_path.iter().sum();
        assert!((ledger.final_buyer() + total).abs() < 1e-12);
        assert_eq!(ledger.final_seller(), -ledger.final_buyer());
    }

    #[test]
    fn equal_average_prices_get_equal_weights() {
        let series = [constant_series("A", 1.0, 30), constant_series("B", 1.0, 30)];
        let outcome = run_backtest(&series, &small_config(Strategy::Expectations)).unwrap();
        assert_eq!(outcome.aggregate.weights, vec![0.5, 0.5]);
    }

    #[test]
    fn short_series_is_a_config_error_naming_the_asset() {
        let series = [constant_series("SHORTY", 20.0, 10)];
        let err = run_backtest(&series, &small_config(Strategy::Expectations)).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("SHORTY"), "{msg}");
    }

    #[test]
    fn ledger_entries_are_cumulative_steps() {
        let closes: Vec<f64> = (0..40).map(|i| 20.0 + (i as f64 * 0.7).sin()).collect();
        let series = [PriceSeries::new(
            "WAVE",
            closes
                .iter()
                .enumerate()
                .map(|(i, &c)| (day(i), c))
                .collect::<Vec<_>>(),
        )
        .unwrap()];
        let config = small_config(Strategy::MeanVariance);
        let outcome = run_backtest(&series, &config).unwrap();
        let ledger = &outcome.ledgers[0];
        let hedges = ledger.hedge_path.as_ref().unwrap();
        let start = 40 - config.maturity_days - config.issue_days;
        for j in 0..config.issue_days {
            let settle = closes[start + j + config.maturity_days];
            let expect = seller_step_mv(
                ledger.seller_path[j],
                settle,
                closes[start + j],
                ledger.strike_path[j],
                ledger.premium_path[j],
                hedges[j],
            );
            assert_eq!(ledger.seller_path[j + 1], expect);
            assert!(hedges[j] > 0.0 && hedges[j] < 1.0);
        }
    }

    #[test]
    fn csv_round_trip() {
        let series = vec![
            constant_series("AAA", 3.25, 4),
            constant_series("BBB", 1.125, 4),
        ];
        let mut buf = Vec::new();
        write_series_csv(&mut buf, &series).unwrap();

        let dir = std::env::temp_dir().join(format!("hedgekit-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("roundtrip.csv");
        std::fs::write(&path, &buf).unwrap();
        let back = read_price_csv(&path).unwrap();
        std::fs::remove_file(&path).unwrap();
        assert_eq!(back, series);
    }

    #[test]
    fn csv_errors_carry_line_context() {
        let dir = std::env::temp_dir().join(format!("hedgekit-test-bad-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.csv");
        std::fs::write(
            &path,
            "date,ticker,close\n2005-01-01,AAA,1.0\n2005-01-02,AAA,-3\n",
        )
        .unwrap();
        let err = read_price_csv(&path).unwrap_err();
        std::fs::remove_file(&path).unwrap();
        match err {
            HedgeError::Data { line, message, .. } => {
                assert_eq!(line, 3);
                assert!(message.contains("positive"), "{message}");
            }
            other => panic!("expected data error, got {other}"),
        }
    }

    #[test]
    fn csv_rejects_wrong_header() {
        let dir = std::env::temp_dir().join(format!("hedgekit-test-hdr-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("hdr.csv");
        std::fs::write(&path, "day,symbol,price\n2005-01-01,AAA,1.0\n").unwrap();
        let err = read_price_csv(&path).unwrap_err();
        std::fs::remove_file(&path).unwrap();
        assert!(err.to_string().contains("date,ticker,close"));
    }

    #[test]
    fn duplicate_tickers_rejected() {
        let series = [
            constant_series("DUP", 20.0, 30),
            constant_series("DUP", 21.0, 30),
        ];
        assert!(run_backtest(&series, &small_config(Strategy::Expectations)).is_err());
    }
}
