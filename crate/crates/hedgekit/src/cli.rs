//! Command-line front end: one-shot quotes, strike curves, backtests and
//! verification runs. Every printed value is a rendering of a library
//! result; the CLI itself computes nothing.
//!
//! Exit codes: 0 success, 2 usage error, 3 data error, 4 verification
//! failure.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::backtest::{self, BacktestConfig, BacktestOutcome, Strategy};
use crate::error::{HedgeError, Result};
use crate::pricing::{self, ContractTerms, MarketState};
use crate::verify::{self, VerifyOptions};

#[derive(Parser)]
#[command(
    name = "hedgekit",
    version,
    about = "Option pricing, hedging and backtesting toolkit"
)]
pub struct Cli {
    /// Flat key=value config file; explicit flags take precedence.
    #[arg(long, env = "HEDGEKIT_CONFIG", global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Output format for price, curve and verify.
    #[arg(long, value_enum, global = true, default_value_t = Format::Csv)]
    format: Format,

    /// Output file (price/curve/verify) or directory (backtest); stdout
    /// when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Black-Scholes.
    Bs,
    /// Discounted expected payoff under the real-world drift.
    Exp,
    /// Minimum-variance hedger.
    Mv,
}

#[derive(Subcommand)]
enum Command {
    /// Quote one contract with a chosen pricing engine.
    Price(PriceArgs),
    /// Tabulate all engines and hedge diagnostics over a strike grid.
    Curve(CurveArgs),
    /// Replay the option-writing experiment on a CSV of daily closes.
    Backtest(BacktestArgs),
    /// Check every closed form against seeded Monte Carlo estimates.
    Verify(VerifyArgs),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct PriceArgs {
    #[arg(long)]
    spot: Option<f64>,
    #[arg(long)]
    strike: Option<f64>,
    /// Appreciation per year; required by exp and mv, ignored by bs.
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    rate: Option<f64>,
    /// Time to maturity in years.
    #[arg(long)]
    maturity: Option<f64>,
    #[arg(long, value_enum)]
    method: Option<Method>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct CurveArgs {
    #[arg(long)]
    spot: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    rate: Option<f64>,
    #[arg(long)]
    maturity: Option<f64>,
    #[arg(long)]
    k_min: Option<f64>,
    #[arg(long)]
    k_max: Option<f64>,
    #[arg(long)]
    k_step: Option<f64>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct BacktestArgs {
    /// Input CSV with header date,ticker,close.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    issue_days: Option<usize>,
    #[arg(long)]
    maturity_days: Option<usize>,
    /// Years to maturity fed to pricing; defaults to maturity_days / 255.
    #[arg(long)]
    maturity_years: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    fee_floor: Option<f64>,
    #[arg(long)]
    rate: Option<f64>,
    /// Periods per year used to annualize daily estimates.
    #[arg(long)]
    day_count_base: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    seed: Option<u64>,
    /// Randomized parameter sets beyond the reference set.
    #[arg(long)]
    draws: Option<usize>,
    /// Monte Carlo paths per parameter set (at least 100000).
    #[arg(long)]
    paths: Option<usize>,
    /// Corrupt the below-strike second moment on purpose; the run must
    /// then fail, demonstrating the suite catches a wrong closed form.
    #[arg(long, default_value_t = false)]
    negative_control: bool,
}

/// Parses arguments, runs the requested command and maps errors to exit
/// codes (clap itself exits with 2 on usage errors).
pub fn run() -> ExitCode {
    let _ = env_logger::try_init();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                HedgeError::Data { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn execute(cli: Cli) -> Result<ExitCode> {
    let settings = Settings::load(cli.config.as_deref())?;
    match cli.command {
        Command::Price(args) => cmd_price(args, &settings, cli.format, cli.output.as_deref()),
        Command::Curve(args) => cmd_curve(args, &settings, cli.format, cli.output.as_deref()),
        Command::Backtest(args) => cmd_backtest(args, &settings, cli.output.as_deref()),
        Command::Verify(args) => cmd_verify(args, &settings, cli.format, cli.output.as_deref()),
    }
}

// ---------------------------------------------------------------------------
// config file + flag merging
// ---------------------------------------------------------------------------

struct Settings(HashMap<String, String>);

impl Settings {
    fn load(path: Option<&Path>) -> Result<Self> {
        let mut map = HashMap::new();
        if let Some(path) = path {
            let text = fs::read_to_string(path).map_err(|e| {
                HedgeError::Config(format!("cannot read config {}: {e}", path.display()))
            })?;
            for (i, raw) in text.lines().enumerate() {
                let line = raw.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let Some((key, value)) = line.split_once('=') else {
                    return Err(HedgeError::Config(format!(
                        "{}:{}: expected key=value, got {raw:?}",
                        path.display(),
                        i + 1
                    )));
                };
                map.insert(key.trim().replace('-', "_"), value.trim().to_string());
            }
        }
        Ok(Self(map))
    }

    fn merge<T: std::str::FromStr>(&self, key: &str, flag: Option<T>) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| HedgeError::Config(format!("config key {key}: cannot parse {raw:?}"))),
        }
    }

    fn require<T: std::str::FromStr>(&self, key: &str, flag: Option<T>) -> Result<T> {
        self.merge(key, flag)?.ok_or_else(|| {
            HedgeError::Config(format!(
                "missing --{} (or config key {key})",
                key.replace('_', "-")
            ))
        })
    }
}

fn open_sink(output: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match output {
        Some(path) => Box::new(fs::File::create(path)?),
        None => Box::new(std::io::stdout().lock()),
    })
}

// ---------------------------------------------------------------------------
// price
// ---------------------------------------------------------------------------

fn cmd_price(
    args: PriceArgs,
    settings: &Settings,
    format: Format,
    output: Option<&Path>,
) -> Result<ExitCode> {
    let spot = settings.require("spot", args.spot)?;
    let strike = settings.require("strike", args.strike)?;
    let sigma = settings.require("sigma", args.sigma)?;
    let rate = settings.require("rate", args.rate)?;
    let maturity = settings.require("maturity", args.maturity)?;
    let method = match settings.require::<String>(
        "method",
        args.method.map(|m| match m {
            Method::Bs => "bs".into(),
            Method::Exp => "exp".into(),
            Method::Mv => "mv".into(),
        }),
    )? {
        s if s == "bs" => Method::Bs,
        s if s == "exp" => Method::Exp,
        s if s == "mv" => Method::Mv,
        s => {
            return Err(HedgeError::Config(format!(
                "method must be bs, exp or mv, got {s}"
            )))
        }
    };
    let mu = settings.merge("mu", args.mu)?;

    let contract = ContractTerms::new(strike, maturity)?;
    let mut sink = open_sink(output)?;
    match method {
        Method::Bs => {
            // mu is irrelevant to Black-Scholes; any finite value works
            let market = MarketState::new(spot, mu.unwrap_or(rate), sigma, rate)?;
            let price = pricing::price_black_scholes(&market, &contract)?;
            write_price(&mut sink, format, "bs", price, None)?;
        }
        Method::Exp => {
            let mu =
                mu.ok_or_else(|| HedgeError::Config("missing --mu (required by exp)".into()))?;
            let market = MarketState::new(spot, mu, sigma, rate)?;
            let price = pricing::price_expectations(&market, &contract)?;
            write_price(&mut sink, format, "exp", price, None)?;
        }
        Method::Mv => {
            let mu =
                mu.ok_or_else(|| HedgeError::Config("missing --mu (required by mv)".into()))?;
            let market = MarketState::new(spot, mu, sigma, rate)?;
            let quote = pricing::hedge_quote(&market, &contract)?;
            write_price(&mut sink, format, "mv", quote.price_mv, Some(quote))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn write_price(
    w: &mut impl Write,
    format: Format,
    method: &str,
    price: f64,
    quote: Option<pricing::HedgeQuote>,
) -> Result<()> {
    match format {
        Format::Csv => {
            writeln!(
                w,
                "method,price,hedge_ratio,expected_terminal,variance,stddev"
            )?;
            match quote {
                Some(q) => writeln!(
                    w,
                    "{method},{price},{},{},{},{}",
                    q.hedge_ratio, q.expected_terminal, q.variance, q.stddev
                )?,
                None => writeln!(w, "{method},{price},,,,")?,
            }
        }
        Format::Json => {
            let mut obj = serde_json::json!({ "method": method, "price": price });
            if let Some(q) = quote {
                obj["hedge_ratio"] = q.hedge_ratio.into();
                obj["expected_terminal"] = q.expected_terminal.into();
                obj["variance"] = q.variance.into();
                obj["stddev"] = q.stddev.into();
            }
            writeln!(w, "{obj}")?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// curve
// ---------------------------------------------------------------------------

fn cmd_curve(
    args: CurveArgs,
    settings: &Settings,
    format: Format,
    output: Option<&Path>,
) -> Result<ExitCode> {
    let spot = settings.require("spot", args.spot)?;
    let mu = settings.require("mu", args.mu)?;
    let sigma = settings.require("sigma", args.sigma)?;
    let rate = settings.require("rate", args.rate)?;
    let maturity = settings.require("maturity", args.maturity)?;
    let k_min = settings.require("k_min", args.k_min)?;
    let k_max = settings.require("k_max", args.k_max)?;
    let k_step = settings.require("k_step", args.k_step)?;
    if !(k_min > 0.0 && k_step > 0.0 && k_max >= k_min) {
        return Err(HedgeError::Config(
            "strike grid needs k_min > 0, k_step > 0 and k_max >= k_min".into(),
        ));
    }

    let market = MarketState::new(spot, mu, sigma, rate)?;
    let mut rows = Vec::new();
    let mut i = 0usize;
    loop {
        let strike = k_min + k_step * i as f64;
        if strike > k_max * (1.0 + 1e-12) {
            break;
        }
        let contract = ContractTerms::new(strike, maturity)?;
        let quote = pricing::hedge_quote(&market, &contract)?;
        rows.push((
            strike,
            pricing::price_black_scholes(&market, &contract)?,
            pricing::price_expectations(&market, &contract)?,
            quote.price_mv,
            quote.hedge_ratio,
            quote.stddev,
            pricing::stddev_unhedged(&market, &contract)?,
        ));
        i += 1;
    }

    let mut sink = open_sink(output)?;
    match format {
        Format::Csv => {
            writeln!(
                sink,
                "strike,price_bs,price_exp,price_mv,hedge_ratio,stddev_hedged,stddev_unhedged"
            )?;
            for (k, bs, ex, mv, h, sdh, sdu) in &rows {
                writeln!(sink, "{k},{bs},{ex},{mv},{h},{sdh},{sdu}")?;
            }
        }
        Format::Json => {
            let arr: Vec<serde_json::Value> = rows
                .iter()
                .map(|(k, bs, ex, mv, h, sdh, sdu)| {
                    serde_json::json!({
                        "strike": k,
                        "price_bs": bs,
                        "price_exp": ex,
                        "price_mv": mv,
                        "hedge_ratio": h,
                        "stddev_hedged": sdh,
                        "stddev_unhedged": sdu,
                    })
                })
                .collect();
            writeln!(sink, "{}", serde_json::Value::Array(arr))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// backtest
// ---------------------------------------------------------------------------

fn cmd_backtest(
    args: BacktestArgs,
    settings: &Settings,
    output: Option<&Path>,
) -> Result<ExitCode> {
    let input: PathBuf = settings.require("input", args.input)?;
    let out_dir = output
        .map(Path::to_path_buf)
        .or_else(|| settings.0.get("output").map(PathBuf::from))
        .ok_or_else(|| HedgeError::Config("missing --output directory for reports".into()))?;

    let defaults = BacktestConfig::default();
    let maturity_days = settings
        .merge("maturity_days", args.maturity_days)?
        .unwrap_or(defaults.maturity_days);
    let config = BacktestConfig {
        window: settings
            .merge("window", args.window)?
            .unwrap_or(defaults.window),
        issue_days: settings
            .merge("issue_days", args.issue_days)?
            .unwrap_or(defaults.issue_days),
        maturity_days,
        maturity_years: settings
            .merge("maturity_years", args.maturity_years)?
            .unwrap_or(maturity_days as f64 / 255.0),
        beta: settings.merge("beta", args.beta)?.unwrap_or(defaults.beta),
        gamma: settings
            .merge("gamma", args.gamma)?
            .unwrap_or(defaults.gamma),
        fee_floor: settings
            .merge("fee_floor", args.fee_floor)?
            .unwrap_or(defaults.fee_floor),
        rate: settings.merge("rate", args.rate)?.unwrap_or(defaults.rate),
        day_count_base: settings
            .merge("day_count_base", args.day_count_base)?
            .unwrap_or(defaults.day_count_base),
        min_sigma_daily: settings
            .merge("min_sigma_daily", None)?
            .unwrap_or(defaults.min_sigma_daily),
        strategy: Strategy::Expectations,
    };

    let series = backtest::read_price_csv(&input)?;
    let expectations = backtest::run_backtest(&series, &config)?;
    let mv_config = BacktestConfig {
        strategy: Strategy::MeanVariance,
        ..config
    };
    let mean_variance = backtest::run_backtest(&series, &mv_config)?;

    fs::create_dir_all(&out_dir)?;
    write_reports(&out_dir, &expectations, &mean_variance)?;

    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    for (e, m) in expectations.ledgers.iter().zip(&mean_variance.ledgers) {
        writeln!(
            lock,
            "{}: avg_price={:.2} buy_exp={:.2} sell_exp={:.2} buy_mv={:.2} sell_mv={:.2}",
            e.ticker,
            e.avg_price,
            e.final_buyer(),
            e.final_seller(),
            m.final_buyer(),
            m.final_seller()
        )?;
    }
    writeln!(lock, "reports written to {}", out_dir.display())?;
    Ok(ExitCode::SUCCESS)
}

/// Writes the three report files for a pair of runs over the same data.
pub fn write_reports(
    out_dir: &Path,
    expectations: &BacktestOutcome,
    mean_variance: &BacktestOutcome,
) -> Result<()> {
    let mut agg_exp = fs::File::create(out_dir.join("aggregate_expectations.csv"))?;
    backtest::write_aggregate_csv(&mut agg_exp, &expectations.aggregate)?;
    let mut agg_mv = fs::File::create(out_dir.join("aggregate_mv.csv"))?;
    backtest::write_aggregate_csv(&mut agg_mv, &mean_variance.aggregate)?;
    let mut per_asset = fs::File::create(out_dir.join("per_asset.csv"))?;
    backtest::write_per_asset_csv(&mut per_asset, expectations, mean_variance)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(
    args: VerifyArgs,
    settings: &Settings,
    format: Format,
    output: Option<&Path>,
) -> Result<ExitCode> {
    let defaults = VerifyOptions::default();
    let opts = VerifyOptions {
        seed: settings.merge("seed", args.seed)?.unwrap_or(defaults.seed),
        draws: settings
            .merge("draws", args.draws)?
            .unwrap_or(defaults.draws),
        paths: settings
            .merge("paths", args.paths)?
            .unwrap_or(defaults.paths),
        negative_control: args.negative_control,
    };
    let report = verify::run_verification(&opts)?;

    let mut sink = open_sink(output)?;
    match format {
        Format::Csv => {
            writeln!(
                sink,
                "name,closed_form,estimate,std_err,deviation_se,status"
            )?;
            for c in &report.checks {
                writeln!(
                    sink,
                    "{},{},{},{},{},{}",
                    c.name,
                    c.closed_form,
                    c.estimate,
                    c.std_err,
                    c.deviation_se,
                    if c.deviation_se <= verify::MAX_DEVIATION_SE {
                        "ok"
                    } else {
                        "fail"
                    }
                )?;
            }
        }
        Format::Json => writeln!(sink, "{}", report.to_json())?,
    }

    if report.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!(
            "verification failed: max deviation {:.3} standard errors",
            report.max_deviation_se()
        );
        Ok(ExitCode::from(4))
    }
}
