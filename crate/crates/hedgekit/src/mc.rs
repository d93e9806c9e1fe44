//! Seeded Monte Carlo for geometric Brownian motion: terminal-price
//! sampling, empirical tail-moment estimates with standard errors, and a
//! synthetic daily-series generator for backtest fixtures.
//!
//! Normal variates come from a ChaCha12 stream through the inverse-CDF
//! transform, and every reduction is a fixed-shape chunked/pairwise sum,
//! so results are identical for a given seed regardless of thread count.

use chrono::NaiveDate;
use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::error::{HedgeError, Result};
use crate::estimators::PriceSeries;
use crate::special::quantile_unchecked;

/// Identifies the generator for report headers.
pub const RNG_DESCRIPTION: &str = "chacha12 + inverse-cdf normals";

const CHUNK: usize = 1 << 16;

/// A geometric-Brownian-motion sampling job.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbmSpec {
    pub spot: f64,
    pub mu: f64,
    pub sigma: f64,
    /// Horizon in years.
    pub horizon: f64,
    pub seed: u64,
    pub paths: usize,
}

impl GbmSpec {
    pub fn new(
        spot: f64,
        mu: f64,
        sigma: f64,
        horizon: f64,
        seed: u64,
        paths: usize,
    ) -> Result<Self> {
        if !(spot > 0.0 && spot.is_finite()) {
            return Err(HedgeError::domain("spot", "finite and > 0", spot));
        }
        if !mu.is_finite() {
            return Err(HedgeError::domain("mu", "finite", mu));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(HedgeError::domain("sigma", "finite and > 0", sigma));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(HedgeError::domain("horizon", "finite and > 0", horizon));
        }
        if paths < 1 {
            return Err(HedgeError::Config("paths must be at least 1".into()));
        }
        Ok(Self {
            spot,
            mu,
            sigma,
            horizon,
            seed,
            paths,
        })
    }
}

#[inline]
pub(crate) fn uniform_open(bits: u64) -> f64 {
    // 53 high bits, offset half a step: strictly inside (0, 1)
    ((bits >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

#[inline]
fn standard_normal(rng: &mut ChaCha12Rng) -> f64 {
    quantile_unchecked(uniform_open(rng.next_u64()))
}

/// Terminal prices `S * exp((mu - sigma^2/2) T + sigma sqrt(T) Z)`.
///
/// Chunk `c` of the output is filled from stream `c + 1` of the seeded
/// generator, so the sequence depends only on `(seed, paths)`.
pub fn sample_terminal(spec: &GbmSpec) -> Vec<f64> {
    let drift = (spec.mu - 0.5 * spec.sigma * spec.sigma) * spec.horizon;
    let vol = spec.sigma * spec.horizon.sqrt();
    let mut out = vec![0.0f64; spec.paths];
    out.par_chunks_mut(CHUNK)
        .enumerate()
        .for_each(|(ci, chunk)| {
            let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
            rng.set_stream(ci as u64 + 1);
            for slot in chunk.iter_mut() {
                *slot = spec.spot * (drift + vol * standard_normal(&mut rng)).exp();
            }
        });
    out
}

/// Daily closes from iterated one-day steps of the same process;
/// `day_fraction` is the year fraction one row advances (e.g. 1/365).
pub fn generate_gbm_series(
    spec: &GbmSpec,
    ticker: &str,
    days: usize,
    day_fraction: f64,
) -> Result<PriceSeries> {
    if days < 2 {
        return Err(HedgeError::Config("days must be at least 2".into()));
    }
    if !(day_fraction > 0.0 && day_fraction.is_finite()) {
        return Err(HedgeError::domain(
            "day_fraction",
            "finite and > 0",
            day_fraction,
        ));
    }
    let drift = (spec.mu - 0.5 * spec.sigma * spec.sigma) * day_fraction;
    let vol = spec.sigma * day_fraction.sqrt();
    // stream 0 is reserved for series generation; terminal sampling
    // starts at stream 1
    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
    rng.set_stream(0);

    let epoch = NaiveDate::from_ymd_opt(2000, 1, 3).expect("valid fixture epoch");
    let mut log_price = spec.spot.ln();
    let mut rows = Vec::with_capacity(days);
    rows.push((epoch, spec.spot));
    for i in 1..days {
        log_price += drift + vol * standard_normal(&mut rng);
        rows.push((epoch + chrono::Days::new(i as u64), log_price.exp()));
    }
    PriceSeries::new(ticker, rows)
}

/// A Monte Carlo point estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_err: f64,
}

impl McEstimate {
    /// Deviation of `reference` from the estimate, in standard-error units.
    pub fn deviation_se(&self, reference: f64) -> f64 {
        if self.std_err == 0.0 {
            if (reference - self.value).abs() == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (reference - self.value).abs() / self.std_err
        }
    }
}

/// Sums `f(x)` over `xs` chunkwise, then pairwise over chunk totals;
/// deterministic and accurate for large inputs.
pub(crate) fn chunked_sum(xs: &[f64], f: impl Fn(f64) -> f64 + Sync) -> f64 {
    let partials: Vec<f64> = xs
        .par_chunks(4096)
        .map(|chunk| chunk.iter().map(|&x| f(x)).sum::<f64>())
        .collect();
    pairwise_sum(&partials)
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Sample mean with standard error `s / sqrt(N)`.
pub fn mean_estimate(xs: &[f64]) -> McEstimate {
    let n = xs.len() as f64;
    let mean = chunked_sum(xs, |x| x) / n;
    let ss = chunked_sum(xs, |x| (x - mean) * (x - mean));
    let var = ss / (n - 1.0);
    McEstimate {
        value: mean,
        std_err: (var / n).sqrt(),
    }
}

/// Sample variance (n-1 divisor) with its asymptotic standard error
/// `sqrt((m4 - s^4) / N)` from the fourth central moment.
pub fn variance_estimate(xs: &[f64]) -> McEstimate {
    let n = xs.len() as f64;
    let mean = chunked_sum(xs, |x| x) / n;
    let m2 = chunked_sum(xs, |x| (x - mean) * (x - mean)) / n;
    let m4 = chunked_sum(xs, |x| {
        let d = (x - mean) * (x - mean);
        d * d
    }) / n;
    let value = m2 * n / (n - 1.0);
    McEstimate {
        value,
        std_err: ((m4 - m2 * m2).max(0.0) / n).sqrt(),
    }
}

/// Sample standard deviation; the error propagates as `se(var) / (2 sd)`.
pub fn stddev_estimate(xs: &[f64]) -> McEstimate {
    let var = variance_estimate(xs);
    let sd = var.value.sqrt();
    McEstimate {
        value: sd,
        std_err: if sd > 0.0 {
            var.std_err / (2.0 * sd)
        } else {
            var.std_err
        },
    }
}

/// Empirical counterparts of the five truncated moments at `strike`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailMomentEstimates {
    pub p_above: McEstimate,
    pub mean_above: McEstimate,
    pub mean_below: McEstimate,
    pub sq_above: McEstimate,
    pub sq_below: McEstimate,
    pub strike: f64,
}

/// Indicator-weighted sample means of 1, x and x^2 over the two sides of
/// the strike, with standard errors.
pub fn mc_tail_moments(spec: &GbmSpec, strike: f64) -> Result<TailMomentEstimates> {
    if !(strike > 0.0 && strike.is_finite()) {
        return Err(HedgeError::domain("strike", "finite and > 0", strike));
    }
    let samples = sample_terminal(spec);
    Ok(tail_moment_estimates(&samples, strike))
}

/// Same as [`mc_tail_moments`] over an existing sample set.
pub fn tail_moment_estimates(samples: &[f64], strike: f64) -> TailMomentEstimates {
    let n = samples.len() as f64;
    let above = |x: f64| x >= strike;

    let mean_of = |f: &(dyn Fn(f64) -> f64 + Sync)| chunked_sum(samples, f) / n;
    let estimate = |term: &(dyn Fn(f64) -> f64 + Sync), sq_term: &(dyn Fn(f64) -> f64 + Sync)| {
        let value = mean_of(term);
        let second = mean_of(sq_term);
        McEstimate {
            value,
            std_err: ((second - value * value).max(0.0) / n).sqrt(),
        }
    };

    TailMomentEstimates {
        p_above: estimate(&|x| if above(x) { 1.0 } else { 0.0 }, &|x| {
            if above(x) {
                1.0
            } else {
                0.0
            }
        }),
        mean_above: estimate(&|x| if above(x) { x } else { 0.0 }, &|x| {
            if above(x) {
                x * x
            } else {
                0.0
            }
        }),
        mean_below: estimate(&|x| if above(x) { 0.0 } else { x }, &|x| {
            if above(x) {
                0.0
            } else {
                x * x
            }
        }),
        sq_above: estimate(&|x| if above(x) { x * x } else { 0.0 }, &|x| {
            if above(x) {
                x * x * x * x
            } else {
                0.0
            }
        }),
        sq_below: estimate(&|x| if above(x) { 0.0 } else { x * x }, &|x| {
            if above(x) {
                0.0
            } else {
                x * x * x * x
            }
        }),
        strike,
    }
}
