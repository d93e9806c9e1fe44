//! Rolling drift/volatility estimation on a synthetic daily series, and
//! the strike rule that turns the estimates into contract terms.
//!
//! ```bash
//! cargo run --example rolling_estimates
//! ```

use hedgekit::estimators::{self, DEFAULT_BETA, DEFAULT_GAMMA};
use hedgekit::mc::{self, GbmSpec};

fn main() -> hedgekit::Result<()> {
    // generate two years of daily closes with known parameters
    let spec = GbmSpec::new(20.0, 0.12, 0.35, 1.0, 7, 1)?;
    let day_fraction = 1.0 / 365.0;
    let series = mc::generate_gbm_series(&spec, "SYN", 730, day_fraction)?;

    let window = 120;
    println!("generating parameters: mu = 0.12 /yr, sigma = 0.35 /sqrt(yr)");
    println!();
    println!(
        "{:>6} {:>10} {:>12} {:>12} {:>10}",
        "day", "close", "mu_hat/yr", "sigma_hat/yr", "strike"
    );
    let maturity = 180.0 / 365.0;
    for t in (window..series.len()).step_by(60) {
        let estimate = estimators::rolling_estimates(&series, t, window)?;
        let (mu_yr, sigma_yr) = estimate.annualized(365.0);
        let spot = series.close(t);
        let strike =
            estimators::strike_rule(spot, mu_yr, sigma_yr, maturity, DEFAULT_BETA, DEFAULT_GAMMA)?;
        println!("{t:>6} {spot:>10.3} {mu_yr:>12.4} {sigma_yr:>12.4} {strike:>10.3}",);
    }
    println!();
    println!("strike rule: spot * exp(mu*T / (beta + gamma*sigma)) with beta = {DEFAULT_BETA}, gamma = {DEFAULT_GAMMA}");
    Ok(())
}
