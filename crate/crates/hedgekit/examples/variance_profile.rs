//! Show the terminal portfolio variance as a function of the hedge
//! ratio: an upward parabola whose closed-form minimizer the crate
//! returns directly.
//!
//! ```bash
//! cargo run --example variance_profile
//! ```

use hedgekit::pricing::{self, ContractTerms, MarketState};

fn main() -> hedgekit::Result<()> {
    let market = MarketState::new(20.0, 0.10, 1.0, 0.05)?;
    let contract = ContractTerms::new(20.0, 180.0 / 365.0)?;

    let h_star = pricing::hedge_ratio(&market, &contract)?;
    let (_, v_star) = pricing::portfolio_moments(&market, &contract, h_star)?;

    println!("variance of F = -C + h*S at maturity, by hedge ratio h");
    println!();
    println!("{:>6} {:>12}", "h", "variance");
    let mut h = 0.0;
    while h <= 1.5 {
        let (_, variance) = pricing::portfolio_moments(&market, &contract, h)?;
        let marker = if (h - h_star).abs() < 0.05 {
            "  <- near optimum"
        } else {
            ""
        };
        println!("{h:>6.2} {variance:>12.4}{marker}");
        h += 0.1;
    }
    println!();
    println!("closed-form minimizer h* = {h_star:.6}");
    println!("minimal variance         = {v_star:.6}");
    println!(
        "variance without hedging = {:.6}",
        pricing::portfolio_moments(&market, &contract, 0.0)?.1
    );
    Ok(())
}
