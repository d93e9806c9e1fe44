//! End-to-end checks of the `hedgekit` binary: every printed value must
//! equal the corresponding library call, exit codes must follow the
//! documented contract, and report files must be byte-stable.

use std::path::Path;
use std::process::{Command, Output};

use hedgekit::backtest::{self, BacktestConfig, Strategy};
use hedgekit::mc::{self, GbmSpec};
use hedgekit::pricing::{self, ContractTerms, MarketState};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hedgekit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn price_bs_matches_library_to_full_precision() {
    let out = run(&[
        "price",
        "--method",
        "bs",
        "--spot",
        "20",
        "--strike",
        "20",
        "--sigma",
        "1",
        "--rate",
        "0.05",
        "--maturity",
        "0.4932",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "method,price,hedge_ratio,expected_terminal,variance,stddev"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "bs");
    let printed: f64 = row[1].parse().unwrap();

    let market = MarketState::new(20.0, 0.05, 1.0, 0.05).unwrap();
    let contract = ContractTerms::new(20.0, 0.4932).unwrap();
    let want = pricing::price_black_scholes(&market, &contract).unwrap();
    assert_eq!(printed, want, "round-trip parse must be bit-exact");
}

#[test]
fn price_exp_at_drift_equal_rate_matches_bs_output() {
    let base = [
        "--spot",
        "20",
        "--strike",
        "22",
        "--sigma",
        "1",
        "--rate",
        "0.05",
        "--maturity",
        "0.4932",
    ];
    let mut exp_args = vec!["price", "--method", "exp", "--mu", "0.05"];
    exp_args.extend_from_slice(&base);
    let mut bs_args = vec!["price", "--method", "bs"];
    bs_args.extend_from_slice(&base);

    let exp_out = stdout_str(&run(&exp_args));
    let bs_out = stdout_str(&run(&bs_args));
    let price = |text: &str| -> f64 {
        text.lines()
            .nth(1)
            .unwrap()
            .split(',')
            .nth(1)
            .unwrap()
            .parse()
            .unwrap()
    };
    let (pe, bs) = (price(&exp_out), price(&bs_out));
    assert!((pe - bs).abs() <= 1e-12 * bs, "{pe} vs {bs}");
}

#[test]
fn price_mv_json_carries_the_full_quote() {
    let out = run(&[
        "price",
        "--method",
        "mv",
        "--spot",
        "20",
        "--strike",
        "20",
        "--mu",
        "0.1",
        "--sigma",
        "1",
        "--rate",
        "0.05",
        "--maturity",
        "0.4932",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();

    let market = MarketState::new(20.0, 0.1, 1.0, 0.05).unwrap();
    let contract = ContractTerms::new(20.0, 0.4932).unwrap();
    let quote = pricing::hedge_quote(&market, &contract).unwrap();
    assert_eq!(parsed["method"], "mv");
    assert_eq!(parsed["price"].as_f64().unwrap(), quote.price_mv);
    assert_eq!(parsed["hedge_ratio"].as_f64().unwrap(), quote.hedge_ratio);
    assert_eq!(parsed["variance"].as_f64().unwrap(), quote.variance);
    assert_eq!(parsed["stddev"].as_f64().unwrap(), quote.stddev);
}

#[test]
fn curve_columns_behave_over_the_grid() {
    let out = run(&[
        "curve",
        "--spot",
        "20",
        "--mu",
        "0.1",
        "--sigma",
        "1",
        "--rate",
        "0.05",
        "--maturity",
        "0.493150684931506849",
        "--k-min",
        "0.001",
        "--k-max",
        "40",
        "--k-step",
        "1",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "strike,price_bs,price_exp,price_mv,hedge_ratio,stddev_hedged,stddev_unhedged"
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 40);

    // tiny first strike: fully hedged and riskless
    assert!((rows[0][4] - 1.0).abs() < 1e-4);
    assert!(rows[0][5] < 1e-4 * 20.0);

    for row in &rows {
        let (k, bs, exp, mv, h, sd_hedged, sd_bare) =
            (row[0], row[1], row[2], row[3], row[4], row[5], row[6]);
        // at vanishing strike h sits at 1 up to representation noise;
        // away from it the bounds are strict
        if k >= 10.0 {
            assert!(h > 0.0 && h < 1.0, "h={h} at k={k}");
        } else {
            assert!(h > 0.0 && h <= 1.0 + 1e-9, "h={h} at k={k}");
        }
        assert!(sd_hedged <= sd_bare);
        // qualitative engine ordering with drift above the rate: the
        // drift-aware engines price above Black-Scholes-discounting
        assert!(mv <= exp + 1e-12);
        assert!(bs <= exp + 1e-12);
    }
}

#[test]
fn curve_output_is_deterministic() {
    let args = [
        "curve",
        "--spot",
        "20",
        "--mu",
        "0.1",
        "--sigma",
        "1",
        "--rate",
        "0.05",
        "--maturity",
        "0.4932",
        "--k-min",
        "10",
        "--k-max",
        "40",
        "--k-step",
        "0.5",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

fn write_fixture(path: &Path) {
    let series: Vec<_> = [
        ("AAA", 20.0, 0.10, 0.30, 11u64),
        ("BBB", 35.0, 0.05, 0.50, 12),
        ("CCC", 50.0, 0.20, 0.25, 13),
    ]
    .iter()
    .map(|&(ticker, spot, mu, sigma, seed)| {
        let spec = GbmSpec::new(spot, mu, sigma, 1.0, seed, 1).unwrap();
        mc::generate_gbm_series(&spec, ticker, 150, 1.0 / 365.0).unwrap()
    })
    .collect();
    let mut bytes = Vec::new();
    backtest::write_series_csv(&mut bytes, &series).unwrap();
    std::fs::write(path, bytes).unwrap();
}

#[test]
fn backtest_reports_zero_sum_and_byte_identical_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("fixture.csv");
    write_fixture(&input);

    let run_once = |out_name: &str| -> Vec<u8> {
        let out_dir = dir.path().join(out_name);
        let out = run(&[
            "backtest",
            "--input",
            input.to_str().unwrap(),
            "--output",
            out_dir.to_str().unwrap(),
            "--window",
            "30",
            "--issue-days",
            "40",
            "--maturity-days",
            "20",
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        let mut all = Vec::new();
        for name in [
            "aggregate_expectations.csv",
            "aggregate_mv.csv",
            "per_asset.csv",
        ] {
            all.extend(std::fs::read(out_dir.join(name)).unwrap());
        }
        all
    };

    let first = run_once("run1");
    let second = run_once("run2");
    assert_eq!(
        first, second,
        "reports must be byte-identical across reruns"
    );

    // zero-sum structure in the expectations aggregate
    let agg = std::fs::read_to_string(dir.path().join("run1/aggregate_expectations.csv")).unwrap();
    for line in agg.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let ab: f64 = cells[1].parse().unwrap();
        let as_: f64 = cells[2].parse().unwrap();
        assert_eq!(ab, -as_, "{line}");
    }

    // per-asset table: expectations columns are negations; mv turnover
    // dominance is covered by the acceptance suite
    let per_asset = std::fs::read_to_string(dir.path().join("run1/per_asset.csv")).unwrap();
    assert_eq!(
        per_asset.lines().next().unwrap(),
        "ticker,avg_price,buy_exp,sell_exp,buy_mv,sell_mv"
    );
    for line in per_asset.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let buy: f64 = cells[2].parse().unwrap();
        let sell: f64 = cells[3].parse().unwrap();
        assert_eq!(buy, -sell);
    }
}

#[test]
fn config_file_supplies_defaults_and_flags_take_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("hedgekit.conf");
    std::fs::write(
        &config,
        "# reference market\nspot = 20\nstrike = 20\nsigma = 1\nrate = 0.05\nmaturity = 0.4932\nmethod = bs\n",
    )
    .unwrap();

    // all values from the config file
    let out = bin()
        .env("HEDGEKIT_CONFIG", &config)
        .args(["price"])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let from_config: f64 = stdout_str(&out)
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();

    // an explicit flag overrides the file
    let out = bin()
        .env("HEDGEKIT_CONFIG", &config)
        .args(["price", "--strike", "25"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let overridden: f64 = stdout_str(&out)
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();

    let market = MarketState::new(20.0, 0.05, 1.0, 0.05).unwrap();
    let at_20 =
        pricing::price_black_scholes(&market, &ContractTerms::new(20.0, 0.4932).unwrap()).unwrap();
    let at_25 =
        pricing::price_black_scholes(&market, &ContractTerms::new(25.0, 0.4932).unwrap()).unwrap();
    assert_eq!(from_config, at_20);
    assert_eq!(overridden, at_25);
}

#[test]
fn exit_codes_follow_the_contract() {
    // usage: bad numeric input names the offending field
    let out = run(&[
        "price",
        "--method",
        "bs",
        "--spot",
        "-5",
        "--strike",
        "20",
        "--sigma",
        "1",
        "--rate",
        "0.05",
        "--maturity",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("spot"));

    // usage: unknown flag (clap)
    let out = run(&["price", "--not-a-flag", "1"]);
    assert_eq!(out.status.code(), Some(2));

    // data: malformed CSV reports file and line
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "date,ticker,close\n2005-01-01,AAA,not-a-number\n").unwrap();
    let out = run(&[
        "backtest",
        "--input",
        bad.to_str().unwrap(),
        "--output",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.csv"));

    // verification failure
    let out = run(&[
        "verify",
        "--paths",
        "100000",
        "--draws",
        "0",
        "--negative-control",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn verify_passes_and_reports_the_generator() {
    let out = run(&[
        "verify", "--paths", "150000", "--draws", "1", "--format", "json",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let parsed: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(parsed["passed"], true);
    assert_eq!(parsed["paths"], 150000);
    assert!(parsed["rng"].as_str().unwrap().contains("chacha12"));
    assert!(parsed["checks"].as_array().unwrap().len() >= 12);
    assert!(parsed["max_deviation_se"].as_f64().unwrap() <= 3.0);
}

#[test]
fn verify_csv_lists_every_check() {
    let out = run(&["verify", "--paths", "120000", "--draws", "0"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "name,closed_form,estimate,std_err,deviation_se,status"
    );
    assert_eq!(text.lines().count(), 13);
    assert!(text.contains("ref/price_exp"));
    assert!(text.contains("ref/payoff_sd"));
}

#[test]
fn mv_strategy_differs_from_expectations_in_reports() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("fixture.csv");
    write_fixture(&input);
    let out_dir = dir.path().join("out");
    let out = run(&[
        "backtest",
        "--input",
        input.to_str().unwrap(),
        "--output",
        out_dir.to_str().unwrap(),
        "--window",
        "30",
        "--issue-days",
        "40",
        "--maturity-days",
        "20",
    ]);
    assert!(out.status.success());

    // summary lines cover every asset
    let summary = stdout_str(&out);
    for ticker in ["AAA", "BBB", "CCC"] {
        assert!(summary.contains(ticker), "missing {ticker} in summary");
    }

    // mean-variance aggregate turnover exceeds the expectations one
    // (premium plus hedge position vs premium alone, same data)
    let read_turnover = |name: &str| -> Vec<f64> {
        std::fs::read_to_string(out_dir.join(name))
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
            .collect()
    };
    let exp_turn = read_turnover("aggregate_expectations.csv");
    let mv_turn = read_turnover("aggregate_mv.csv");
    assert_eq!(exp_turn.len(), 40);
    for (e, m) in exp_turn.iter().zip(&mv_turn) {
        assert!(m >= e, "mv turnover {m} below expectations {e}");
    }
}

#[test]
fn library_backtest_matches_cli_reports() {
    // the CLI must be a pure renderer: reproduce its files from library
    // calls alone
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("fixture.csv");
    write_fixture(&input);
    let out_dir = dir.path().join("out");
    let out = run(&[
        "backtest",
        "--input",
        input.to_str().unwrap(),
        "--output",
        out_dir.to_str().unwrap(),
        "--window",
        "30",
        "--issue-days",
        "40",
        "--maturity-days",
        "20",
    ]);
    assert!(out.status.success());

    let series = backtest::read_price_csv(&input).unwrap();
    let config = BacktestConfig {
        window: 30,
        issue_days: 40,
        maturity_days: 20,
        maturity_years: 20.0 / 255.0,
        ..BacktestConfig::default()
    };
    let exp_run = backtest::run_backtest(&series, &config).unwrap();
    let mv_run = backtest::run_backtest(
        &series,
        &BacktestConfig {
            strategy: Strategy::MeanVariance,
            ..config
        },
    )
    .unwrap();
    let mut expected = Vec::new();
    backtest::write_per_asset_csv(&mut expected, &exp_run, &mv_run).unwrap();
    let actual = std::fs::read(out_dir.join("per_asset.csv")).unwrap();
    assert_eq!(actual, expected);
}
