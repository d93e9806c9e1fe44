//! Standard-normal distribution function and truncated lognormal tail
//! moments — the building blocks every pricing formula is assembled from.
//!
//! The CDF is evaluated through a rational-approximation complementary
//! error function accurate to a couple of ulps, so downstream quantities
//! that difference nearby CDF values (hedge ratios in particular) do not
//! lose precision to the kernel.

use crate::error::{HedgeError, Result};
use crate::pricing::MarketState;

// erfc rational-approximation coefficients from FreeBSD's msun s_erf.c
// (Sun Microsystems, 1993), the same tables used by Go's math package.

#[rustfmt::skip]
#[allow(clippy::excessive_precision)]
mod coeffs {
    pub const ERX: f64 = 8.45062911510467529297e-01;

    // |x| < 0.84375
    pub const PP0: f64 =  1.28379167095512558561e-01;
    pub const PP1: f64 = -3.25042107247001499370e-01;
    pub const PP2: f64 = -2.84817495755985104766e-02;
    pub const PP3: f64 = -5.77027029648944159157e-03;
    pub const PP4: f64 = -2.37630166566501626084e-05;
    pub const QQ1: f64 =  3.97917223959155352819e-01;
    pub const QQ2: f64 =  6.50222499887672944485e-02;
    pub const QQ3: f64 =  5.08130628187576562776e-03;
    pub const QQ4: f64 =  1.32494738004321644526e-04;
    pub const QQ5: f64 = -3.96022827877536812320e-06;

    // 0.84375 <= |x| < 1.25
    pub const PA0: f64 = -2.36211856075265944077e-03;
    pub const PA1: f64 =  4.14856118683748331666e-01;
    pub const PA2: f64 = -3.72207876035701323847e-01;
    pub const PA3: f64 =  3.18346619901161753674e-01;
    pub const PA4: f64 = -1.10894694282396677476e-01;
    pub const PA5: f64 =  3.54783043256182359371e-02;
    pub const PA6: f64 = -2.16637559486879084300e-03;
    pub const QA1: f64 =  1.06420880400844228286e-01;
    pub const QA2: f64 =  5.40397917702171048937e-01;
    pub const QA3: f64 =  7.18286544141962662868e-02;
    pub const QA4: f64 =  1.26171219808761642112e-01;
    pub const QA5: f64 =  1.36370839120290507362e-02;
    pub const QA6: f64 =  1.19844998467991074170e-02;

    // 1.25 <= |x| < 1/0.35
    pub const RA0: f64 = -9.86494403484714822705e-03;
    pub const RA1: f64 = -6.93858572707181764372e-01;
    pub const RA2: f64 = -1.05586262253232909814e+01;
    pub const RA3: f64 = -6.23753324503260060396e+01;
    pub const RA4: f64 = -1.62396669462573470355e+02;
    pub const RA5: f64 = -1.84605092906711035994e+02;
    pub const RA6: f64 = -8.12874355063065934246e+01;
    pub const RA7: f64 = -9.81432934416914548592e+00;
    pub const SA1: f64 =  1.96512716674392571292e+01;
    pub const SA2: f64 =  1.37657754143519042600e+02;
    pub const SA3: f64 =  4.34565877475229228821e+02;
    pub const SA4: f64 =  6.45387271733267880336e+02;
    pub const SA5: f64 =  4.29008140027567833386e+02;
    pub const SA6: f64 =  1.08635005541779435134e+02;
    pub const SA7: f64 =  6.57024977031928170135e+00;
    pub const SA8: f64 = -6.04244152148580987438e-02;

    // 1/0.35 <= |x| < 28
    pub const RB0: f64 = -9.86494292470009928597e-03;
    pub const RB1: f64 = -7.99283237680523006574e-01;
    pub const RB2: f64 = -1.77579549177547519889e+01;
    pub const RB3: f64 = -1.60636384855821916062e+02;
    pub const RB4: f64 = -6.37566443368389627722e+02;
    pub const RB5: f64 = -1.02509513161107724954e+03;
    pub const RB6: f64 = -4.83519191608651397019e+02;
    pub const SB1: f64 =  3.03380607434824582924e+01;
    pub const SB2: f64 =  3.25792512996573918826e+02;
    pub const SB3: f64 =  1.53672958608443695994e+03;
    pub const SB4: f64 =  3.19985821950859553908e+03;
    pub const SB5: f64 =  2.55305040643316442583e+03;
    pub const SB6: f64 =  4.74528541206955367215e+02;
    pub const SB7: f64 = -2.24409524465858183362e+01;

    // 2^-56
    pub const TINY: f64 = 1.3877787807814456755e-17;
}

use coeffs::*;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Complementary error function, `erfc(x) = 1 - erf(x)`.
fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    if x == f64::NEG_INFINITY {
        return 2.0;
    }
    let sign = x < 0.0;
    let x = x.abs();

    if x < 0.84375 {
        let temp = if x < TINY {
            x
        } else {
            let z = x * x;
            let r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)));
            let s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))));
            let y = r / s;
            if x < 0.25 {
                x + x * y
            } else {
                0.5 + (x * y + (x - 0.5))
            }
        };
        return if sign { 1.0 + temp } else { 1.0 - temp };
    }
    if x < 1.25 {
        let s = x - 1.0;
        let p = PA0 + s * (PA1 + s * (PA2 + s * (PA3 + s * (PA4 + s * (PA5 + s * PA6)))));
        let q = 1.0 + s * (QA1 + s * (QA2 + s * (QA3 + s * (QA4 + s * (QA5 + s * QA6)))));
        return if sign {
            1.0 + ERX + p / q
        } else {
            1.0 - ERX - p / q
        };
    }
    if x < 28.0 {
        let s = 1.0 / (x * x);
        let (r, q) = if x < 1.0 / 0.35 {
            (
                RA0 + s
                    * (RA1 + s * (RA2 + s * (RA3 + s * (RA4 + s * (RA5 + s * (RA6 + s * RA7)))))),
                1.0 + s
                    * (SA1
                        + s * (SA2
                            + s * (SA3 + s * (SA4 + s * (SA5 + s * (SA6 + s * (SA7 + s * SA8))))))),
            )
        } else {
            if sign && x > 6.0 {
                return 2.0;
            }
            (
                RB0 + s * (RB1 + s * (RB2 + s * (RB3 + s * (RB4 + s * (RB5 + s * RB6))))),
                1.0 + s
                    * (SB1 + s * (SB2 + s * (SB3 + s * (SB4 + s * (SB5 + s * (SB6 + s * SB7)))))),
            )
        };
        // split x into a high part with the low word zeroed so that
        // x*x can be corrected exactly
        let z = f64::from_bits(x.to_bits() & 0xffff_ffff_0000_0000);
        let v = f64::exp(-z * z - 0.5625) * f64::exp((z - x) * (z + x) + r / q);
        return if sign { 2.0 - v / x } else { v / x };
    }
    if sign {
        2.0
    } else {
        0.0
    }
}

/// Raw standard-normal CDF without the finiteness check; internal hot path.
#[inline]
pub(crate) fn phi(x: f64) -> f64 {
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

/// Upper tail `1 - Phi(x)` evaluated directly through erfc, so it keeps
/// relative accuracy where the CDF saturates to 1.
#[inline]
pub(crate) fn phi_complement(x: f64) -> f64 {
    0.5 * erfc(x * FRAC_1_SQRT_2)
}

/// Standard-normal density.
#[inline]
pub fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / SQRT_2PI
}

/// Standard-normal distribution function.
///
/// Absolute error is a few ulps (well inside 1e-15). Arguments beyond
/// about ±8.3 saturate smoothly to 0 or 1 through the erfc tail, and the
/// extreme tail stays relatively accurate down to underflow near ±38.
pub fn std_normal_cdf(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(HedgeError::domain("x", "finite", x));
    }
    Ok(phi(x))
}

/// Standard-normal quantile (inverse CDF).
///
/// Rational initial guess refined with one Halley step against the CDF;
/// relative error is near machine precision for |x| < 8 and below 1.2e-9
/// in the far tails, where the refinement is skipped to avoid overflow.
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(HedgeError::domain("p", "strictly inside (0, 1)", p));
    }
    Ok(quantile_unchecked(p))
}

pub(crate) fn quantile_unchecked(p: f64) -> f64 {
    // Acklam's rational approximation.
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;

    let mut x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -((((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0))
    };

    // One Halley step; skipped in the far tail where pdf underflows.
    if x.abs() < 8.0 {
        let err = phi(x) - p;
        let u = err / std_normal_pdf(x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    x
}

/// Parameters of the lognormal law of the terminal price: the mean and
/// standard deviation of its logarithm over the quote horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LognormalParams {
    log_mean: f64,
    log_sd: f64,
}

impl LognormalParams {
    pub fn new(log_mean: f64, log_sd: f64) -> Result<Self> {
        if !log_mean.is_finite() {
            return Err(HedgeError::domain("log_mean", "finite", log_mean));
        }
        if !(log_sd > 0.0 && log_sd.is_finite()) {
            return Err(HedgeError::domain("log_sd", "finite and > 0", log_sd));
        }
        Ok(Self { log_mean, log_sd })
    }

    pub fn log_mean(&self) -> f64 {
        self.log_mean
    }

    pub fn log_sd(&self) -> f64 {
        self.log_sd
    }

    /// Mean of the terminal price itself.
    pub fn mean(&self) -> f64 {
        (self.log_mean + 0.5 * self.log_sd * self.log_sd).exp()
    }

    /// Second raw moment of the terminal price.
    pub fn mean_square(&self) -> f64 {
        (2.0 * (self.log_mean + self.log_sd * self.log_sd)).exp()
    }

    /// Density of the terminal price at `x`.
    pub fn density(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let z = (x.ln() - self.log_mean) / self.log_sd;
        std_normal_pdf(z) / (x * self.log_sd)
    }
}

/// Lognormal law of the price `horizon` years ahead of `market`.
pub fn lognormal_params(market: &MarketState, horizon: f64) -> Result<LognormalParams> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(HedgeError::domain("horizon", "finite and > 0", horizon));
    }
    let sigma = market.sigma();
    let log_mean = market.spot().ln() + (market.mu() - 0.5 * sigma * sigma) * horizon;
    LognormalParams::new(log_mean, sigma * horizon.sqrt())
}

/// The five truncated moments of the terminal-price law split at a strike:
/// mass, first and second moments above, first and second moments below.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailMoments {
    /// P(X >= K)
    pub p_above: f64,
    /// E[X; X >= K]
    pub mean_above: f64,
    /// E[X; X < K]
    pub mean_below: f64,
    /// E[X^2; X >= K]
    pub sq_above: f64,
    /// E[X^2; X < K]
    pub sq_below: f64,
    pub strike: f64,
}

impl TailMoments {
    /// E X, i.e. `mean_above + mean_below` with no truncation error.
    pub fn full_mean(&self) -> f64 {
        self.mean_above + self.mean_below
    }

    /// E X^2.
    pub fn full_mean_square(&self) -> f64 {
        self.sq_above + self.sq_below
    }
}

/// Closed-form truncated moments at `strike`.
///
/// The below-strike moments use the upper-tail complement directly rather
/// than `1 - CDF`, so both sides stay relatively accurate however deep in
/// or out of the money the strike sits; each above/below pair still sums
/// to the full moment within a few ulps.
pub fn tail_moments(params: &LognormalParams, strike: f64) -> Result<TailMoments> {
    if !(strike > 0.0 && strike.is_finite()) {
        return Err(HedgeError::domain("strike", "finite and > 0", strike));
    }
    let b = params.log_sd();
    let z = (params.log_mean() - strike.ln()) / b;
    let m1 = params.mean();
    let m2 = params.mean_square();
    Ok(TailMoments {
        p_above: phi(z),
        mean_above: m1 * phi(z + b),
        mean_below: m1 * phi_complement(z + b),
        sq_above: m2 * phi(z + 2.0 * b),
        sq_below: m2 * phi_complement(z + 2.0 * b),
        strike,
    })
}

/// Negative-control variant used by the verification suite: evaluates the
/// below-strike second moment with an inconsistent CDF argument (log-strike
/// entering with the opposite sign), which breaks the second-moment sum
/// identity. Never used by pricing.
pub(crate) fn tail_moments_inconsistent(
    params: &LognormalParams,
    strike: f64,
) -> Result<TailMoments> {
    let mut tm = tail_moments(params, strike)?;
    let b = params.log_sd();
    let bad_arg = 2.0 * b + (params.log_mean() + strike.ln()) / b;
    tm.sq_below = params.mean_square() * phi_complement(bad_arg);
    Ok(tm)
}
