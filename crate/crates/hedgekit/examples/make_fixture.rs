//! Write a seeded synthetic price CSV in the backtest input format
//! (`date,ticker,close`), ready for `hedgekit backtest --input ...`.
//!
//! ```bash
//! cargo run --example make_fixture -- fixture.csv
//! ```

use hedgekit::backtest;
use hedgekit::mc::{self, GbmSpec};

fn main() -> hedgekit::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "fixture.csv".into());

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

    let mut file = std::fs::File::create(&path)?;
    backtest::write_series_csv(&mut file, &series)?;
    let rows: usize = series.iter().map(|s| s.len()).sum();
    println!("wrote {rows} rows for {} assets to {path}", series.len());
    println!("try: hedgekit backtest --input {path} --output reports/");
    Ok(())
}
