//! Quote one European call with all three pricing engines.
//!
//! ```bash
//! cargo run --example price_quote
//! ```

use hedgekit::pricing::{self, ContractTerms, MarketState};

fn main() -> hedgekit::Result<()> {
    // spot 20, drift 10%/yr, vol 100%/sqrt(yr), riskless rate 5%/yr
    let market = MarketState::new(20.0, 0.10, 1.0, 0.05)?;
    // at-the-money call expiring in about six months
    let contract = ContractTerms::new(20.0, 180.0 / 365.0)?;

    let bs = pricing::price_black_scholes(&market, &contract)?;
    let exp = pricing::price_expectations(&market, &contract)?;
    let quote = pricing::hedge_quote(&market, &contract)?;

    println!(
        "spot {}  strike {}  maturity {:.4} yr",
        market.spot(),
        contract.strike(),
        contract.maturity()
    );
    println!();
    println!("black-scholes premium        {bs:10.4}   (ignores the drift)");
    println!("expectations premium         {exp:10.4}   (discounted expected payoff)");
    println!(
        "minimum-variance premium     {:10.4}   (writer also holds stock)",
        quote.price_mv
    );
    println!();
    println!(
        "optimal hedge ratio          {:10.4}   asset units per written call",
        quote.hedge_ratio
    );
    println!(
        "terminal portfolio expecting {:10.4}",
        quote.expected_terminal
    );
    println!("terminal risk (std dev)      {:10.4}", quote.stddev);
    println!(
        "unhedged payoff risk         {:10.4}",
        pricing::stddev_unhedged(&market, &contract)?
    );

    // writing cheaper calls commits the writer to more stock
    println!();
    println!("{:>8} {:>10} {:>10}", "strike", "mv price", "hedge");
    for strike in [12.0, 16.0, 20.0, 24.0, 28.0] {
        let c = ContractTerms::new(strike, contract.maturity())?;
        let q = pricing::hedge_quote(&market, &c)?;
        println!("{strike:>8.1} {:>10.4} {:>10.4}", q.price_mv, q.hedge_ratio);
    }
    Ok(())
}
