//! Closed-form vs Monte Carlo agreement suite: every pricing quantity the
//! crate computes analytically is re-estimated from seeded terminal-price
//! samples and compared in standard-error units.

use std::io::Write;

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{HedgeError, Result};
use crate::mc::{self, GbmSpec, McEstimate};
use crate::pricing::{self, ContractTerms, MarketState};
use crate::special;

/// How far an estimate may sit from its closed form, in standard errors.
pub const MAX_DEVIATION_SE: f64 = 3.0;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Randomized parameter sets checked in addition to the reference set.
    pub draws: usize,
    /// Monte Carlo paths per parameter set (at least 1e5).
    pub paths: usize,
    /// Re-derives the below-strike second moment with an inconsistent
    /// sign so the suite must fail; proves the checks have teeth.
    pub negative_control: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 42,
            draws: 3,
            paths: 1_000_000,
            negative_control: false,
        }
    }
}

/// One closed-form/estimate comparison.
#[derive(Debug, Clone)]
pub struct CheckResult {
    /// Parameter-set label plus quantity, e.g. `ref/price_exp`.
    pub name: String,
    pub closed_form: f64,
    pub estimate: f64,
    pub std_err: f64,
    pub deviation_se: f64,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub rng: &'static str,
    pub seed: u64,
    pub paths: usize,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn max_deviation_se(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| c.deviation_se)
            .fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.deviation_se <= MAX_DEVIATION_SE)
    }

    /// Plain-text table, one row per check.
    pub fn write_text(&self, w: &mut impl Write) -> Result<()> {
        writeln!(
            w,
            "# rng={} seed={} paths={}",
            self.rng, self.seed, self.paths
        )?;
        writeln!(
            w,
            "{:<22} {:>16} {:>16} {:>12} {:>8}  status",
            "check", "closed form", "estimate", "std err", "dev/se"
        )?;
        for c in &self.checks {
            writeln!(
                w,
                "{:<22} {:>16.8} {:>16.8} {:>12.3e} {:>8.3}  {}",
                c.name,
                c.closed_form,
                c.estimate,
                c.std_err,
                c.deviation_se,
                if c.deviation_se <= MAX_DEVIATION_SE {
                    "ok"
                } else {
                    "FAIL"
                }
            )?;
        }
        writeln!(
            w,
            "max deviation {:.3} se over {} checks: {}",
            self.max_deviation_se(),
            self.checks.len(),
            if self.passed() { "PASS" } else { "FAIL" }
        )?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rng": self.rng,
            "seed": self.seed,
            "paths": self.paths,
            "checks": self.checks.iter().map(|c| serde_json::json!({
                "name": c.name,
                "closed_form": c.closed_form,
                "estimate": c.estimate,
                "std_err": c.std_err,
                "deviation_se": c.deviation_se,
            })).collect::<Vec<_>>(),
            "max_deviation_se": self.max_deviation_se(),
            "passed": self.passed(),
        })
    }
}

struct ParamSet {
    label: String,
    market: MarketState,
    contract: ContractTerms,
    seed: u64,
}

fn reference_set(seed: u64) -> ParamSet {
    ParamSet {
        label: "ref".into(),
        market: MarketState::new(20.0, 0.1, 1.0, 0.05).expect("reference market"),
        contract: ContractTerms::new(20.0, 180.0 / 365.0).expect("reference contract"),
        seed,
    }
}

fn random_set(label: String, rng: &mut ChaCha12Rng, seed: u64) -> ParamSet {
    let mut u = || mc::uniform_open(rng.next_u64());
    let spot = 1.0 + 99.0 * u();
    let mu = -0.3 + 0.8 * u();
    let rate = 0.1 * u();
    let sigma = 0.1 + 1.4 * u();
    let horizon = 0.1 + 1.4 * u();
    let market = MarketState::new(spot, mu, sigma, rate).expect("draw ranges are valid");
    // strike drawn by standardized log-moneyness so both tails stay
    // well inside representable CDF range
    let params = special::lognormal_params(&market, horizon).expect("valid params");
    let z = -2.0 + 4.0 * u();
    let strike = (params.log_mean() + z * params.log_sd()).exp();
    ParamSet {
        label,
        market,
        contract: ContractTerms::new(strike, horizon).expect("strike > 0"),
        seed,
    }
}

fn check(name: String, closed_form: f64, est: McEstimate) -> CheckResult {
    CheckResult {
        name,
        closed_form,
        estimate: est.value,
        std_err: est.std_err,
        deviation_se: est.deviation_se(closed_form),
    }
}

fn run_set(set: &ParamSet, opts: &VerifyOptions, out: &mut Vec<CheckResult>) -> Result<()> {
    let market = &set.market;
    let contract = &set.contract;
    let t = contract.maturity();
    let k = contract.strike();
    let discount = (-market.rate() * t).exp();

    let params = special::lognormal_params(market, t)?;
    let tm = if opts.negative_control {
        special::tail_moments_inconsistent(&params, k)?
    } else {
        special::tail_moments(&params, k)?
    };

    let spec = GbmSpec::new(
        market.spot(),
        market.mu(),
        market.sigma(),
        t,
        set.seed,
        opts.paths,
    )?;
    let samples = mc::sample_terminal(&spec);
    let est = mc::tail_moment_estimates(&samples, k);

    let name = |q: &str| format!("{}/{q}", set.label);
    out.push(check(name("p_above"), tm.p_above, est.p_above));
    out.push(check(name("mean_above"), tm.mean_above, est.mean_above));
    out.push(check(name("mean_below"), tm.mean_below, est.mean_below));
    out.push(check(name("sq_above"), tm.sq_above, est.sq_above));
    out.push(check(name("sq_below"), tm.sq_below, est.sq_below));

    // the sum identities, checked against the sampled full moments
    let full_mean = mc::mean_estimate(&samples);
    out.push(check(name("sum_mean"), tm.full_mean(), full_mean));
    let squares: Vec<f64> = samples.iter().map(|&x| x * x).collect();
    out.push(check(
        name("sum_square"),
        tm.full_mean_square(),
        mc::mean_estimate(&squares),
    ));

    // discounted expected payoff
    let payoffs: Vec<f64> = samples.iter().map(|&x| (x - k).max(0.0)).collect();
    let discounted: Vec<f64> = payoffs.iter().map(|&p| discount * p).collect();
    out.push(check(
        name("price_exp"),
        pricing::price_expectations(market, contract)?,
        mc::mean_estimate(&discounted),
    ));

    // Black-Scholes against a drift-at-rate sample set
    let bs_market = MarketState::new(market.spot(), market.rate(), market.sigma(), market.rate())?;
    let bs_spec = GbmSpec::new(
        bs_market.spot(),
        bs_market.mu(),
        bs_market.sigma(),
        t,
        set.seed,
        opts.paths,
    )?;
    let bs_discounted: Vec<f64> = mc::sample_terminal(&bs_spec)
        .iter()
        .map(|&x| discount * (x - k).max(0.0))
        .collect();
    out.push(check(
        name("price_bs"),
        pricing::price_black_scholes(&bs_market, contract)?,
        mc::mean_estimate(&bs_discounted),
    ));

    // hedged portfolio mean and variance at the optimal ratio
    let h = pricing::hedge_ratio(market, contract)?;
    let portfolio: Vec<f64> = samples
        .iter()
        .map(|&x| if x >= k { (h - 1.0) * x + k } else { h * x })
        .collect();
    let (expected, variance) = pricing::portfolio_moments(market, contract, h)?;
    out.push(check(
        name("portfolio_mean"),
        expected,
        mc::mean_estimate(&portfolio),
    ));
    out.push(check(
        name("portfolio_var"),
        variance,
        mc::variance_estimate(&portfolio),
    ));

    // bare payoff risk
    out.push(check(
        name("payoff_sd"),
        pricing::stddev_unhedged(market, contract)?,
        mc::stddev_estimate(&payoffs),
    ));

    Ok(())
}

/// Runs the full agreement suite: the fixed reference parameter set plus
/// `opts.draws` randomized ones.
pub fn run_verification(opts: &VerifyOptions) -> Result<VerificationReport> {
    if opts.paths < 100_000 {
        return Err(HedgeError::Config(format!(
            "paths must be at least 100000, got {}",
            opts.paths
        )));
    }
    let mut sets = vec![reference_set(opts.seed)];
    let mut rng = ChaCha12Rng::seed_from_u64(opts.seed ^ 0x9e37_79b9_7f4a_7c15);
    for i in 0..opts.draws {
        let set_seed = opts
            .seed
            .wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(i as u64 + 1));
        sets.push(random_set(format!("draw{}", i + 1), &mut rng, set_seed));
    }

    let mut checks = Vec::new();
    for set in &sets {
        run_set(set, opts, &mut checks)?;
    }
    Ok(VerificationReport {
        rng: mc::RNG_DESCRIPTION,
        seed: opts.seed,
        paths: opts.paths,
        checks,
    })
}
