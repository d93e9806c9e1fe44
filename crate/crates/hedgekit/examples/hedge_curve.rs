//! Tabulate every engine over a strike grid — the data behind a
//! price-vs-strike plot. Emits CSV on stdout; pipe it to a file and plot
//! with any tool.
//!
//! ```bash
//! cargo run --example hedge_curve > curve.csv
//! ```

use hedgekit::pricing::{self, ContractTerms, MarketState};

fn main() -> hedgekit::Result<()> {
    let market = MarketState::new(20.0, 0.10, 1.0, 0.05)?;
    let maturity = 180.0 / 365.0;

    println!("strike,price_bs,price_exp,price_mv,hedge_ratio,stddev_hedged,stddev_unhedged");
    let mut strike = 10.0;
    while strike <= 40.0 {
        let contract = ContractTerms::new(strike, maturity)?;
        let quote = pricing::hedge_quote(&market, &contract)?;
        println!(
            "{strike},{},{},{},{},{},{}",
            pricing::price_black_scholes(&market, &contract)?,
            pricing::price_expectations(&market, &contract)?,
            quote.price_mv,
            quote.hedge_ratio,
            quote.stddev,
            pricing::stddev_unhedged(&market, &contract)?,
        );
        strike += 0.5;
    }
    Ok(())
}
