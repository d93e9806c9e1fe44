//! Full backtest on a seeded three-asset synthetic fixture: one contract
//! written per day, settled a fixed number of rows later, under both the
//! expectations strategy (pure premium seller) and the minimum-variance
//! strategy (seller also holds the optimal stock fraction).
//!
//! ```bash
//! cargo run --example synthetic_backtest
//! ```

use hedgekit::backtest::{self, BacktestConfig, Strategy};
use hedgekit::mc::{self, GbmSpec};

fn main() -> hedgekit::Result<()> {
    let assets = [
        ("ALPHA", 20.0, 0.10, 0.30, 11u64),
        ("BETA", 35.0, 0.05, 0.50, 12),
        ("GAMMA", 50.0, 0.20, 0.25, 13),
    ];
    let series: Vec<_> = assets
        .iter()
        .map(|&(ticker, spot, mu, sigma, seed)| {
            let spec = GbmSpec::new(spot, mu, sigma, 1.0, seed, 1)?;
            mc::generate_gbm_series(&spec, ticker, 400, 1.0 / 365.0)
        })
        .collect::<hedgekit::Result<_>>()?;

    let config = BacktestConfig {
        window: 120,
        issue_days: 100,
        ..BacktestConfig::default()
    };
    let expectations = backtest::run_backtest(&series, &config)?;
    let mean_variance = backtest::run_backtest(
        &series,
        &BacktestConfig {
            strategy: Strategy::MeanVariance,
            ..config
        },
    )?;

    println!(
        "final profits after {} contracts per asset:",
        config.issue_days
    );
    println!();
    println!(
        "{:<8} {:>10} {:>12} {:>12} {:>12} {:>12}",
        "asset", "avg price", "buy (exp)", "sell (exp)", "buy (mv)", "sell (mv)"
    );
    for (e, m) in expectations.ledgers.iter().zip(&mean_variance.ledgers) {
        println!(
            "{:<8} {:>10.2} {:>12.2} {:>12.2} {:>12.2} {:>12.2}",
            e.ticker,
            e.avg_price,
            e.final_buyer(),
            e.final_seller(),
            m.final_buyer(),
            m.final_seller()
        );
    }

    println!();
    println!("weighted aggregates (inverse-average-price weights):");
    let exp_agg = &expectations.aggregate;
    let mv_agg = &mean_variance.aggregate;
    let last = config.issue_days;
    println!(
        "  expectations: buyers {:>10.2}, sellers {:>10.2} (exact zero sum)",
        exp_agg.avg_buyer[last], exp_agg.avg_seller[last]
    );
    println!(
        "  min-variance: buyers {:>10.2}, sellers {:>10.2}",
        mv_agg.avg_buyer[last], mv_agg.avg_seller[last]
    );
    println!(
        "  committed capital per contract, final step: {:.2} (premium only) vs {:.2} (premium + hedge)",
        exp_agg.avg_turnover[last - 1],
        mv_agg.avg_turnover[last - 1]
    );
    Ok(())
}
