//! Shared test oracles: adaptive Gauss-Kronrod quadrature over the
//! standardized log-price, a golden-section minimizer, and seeded draw
//! helpers. Everything here is independent of the closed forms it checks
//! (no tail-moment or hedge-ratio formulas, only direct integration of
//! the defining integrands).

#![allow(dead_code)]

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

// 15-point Kronrod nodes/weights (positive half) with the embedded
// 7-point Gauss rule; standard published values.
const KRONROD_NODES: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One G7/K15 panel: returns (integral, error estimate, integral of |f|).
fn gauss_kronrod(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64, f64) {
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (lo + hi);
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    let mut magnitude = 0.0;
    for (i, (&x, &w)) in KRONROD_NODES.iter().zip(&KRONROD_WEIGHTS).enumerate() {
        let (fp, fm) = (f(mid + half * x), f(mid - half * x));
        let pair = if x == 0.0 { fp } else { fp + fm };
        let abs_pair = if x == 0.0 {
            fp.abs()
        } else {
            fp.abs() + fm.abs()
        };
        kronrod += w * pair;
        magnitude += w * abs_pair;
        if i % 2 == 1 {
            gauss += GAUSS_WEIGHTS[i / 2] * pair;
        }
    }
    (
        kronrod * half,
        (kronrod - gauss).abs() * half,
        magnitude * half,
    )
}

fn adaptive(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, tol: f64, depth: u32) -> f64 {
    let (value, err, magnitude) = gauss_kronrod(f, lo, hi);
    // the second acceptance term is the rounding floor: once the error
    // estimate is dominated by eps-level noise of the panel sums, further
    // subdivision cannot reduce it and would recurse forever
    if err <= tol || err <= 100.0 * f64::EPSILON * magnitude || depth >= 48 {
        return value;
    }
    let mid = 0.5 * (lo + hi);
    adaptive(f, lo, mid, 0.5 * tol, depth + 1) + adaptive(f, mid, hi, 0.5 * tol, depth + 1)
}

/// Adaptive quadrature of `f` over `[lo, hi]` to absolute tolerance `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    if lo >= hi {
        return 0.0;
    }
    adaptive(&f, lo, hi, tol, 0)
}

pub fn std_normal_density(u: f64) -> f64 {
    (-0.5 * u * u).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// `Phi(x)` by integrating the density (for checking the CDF kernel).
pub fn quad_normal_cdf(x: f64) -> f64 {
    if x >= 0.0 {
        0.5 + integrate(std_normal_density, 0.0, x, 1e-13)
    } else {
        0.5 - integrate(std_normal_density, x, 0.0, 1e-13)
    }
}

/// Truncated moment `\int x^p f(x) dx` of a lognormal with log-mean `a` and
/// log-sd `b`, over `[strike, inf)` (`above = true`) or `(0, strike]`,
/// integrated in the standardized variable `u = (ln x - a)/b`.
///
/// The integrand is a shifted normal bump centered at `p*b`; 12 standard
/// deviations of padding keep the truncation error far below the 1e-12
/// relative target (tolerance scales with the untruncated moment).
pub fn quad_tail_moment(a: f64, b: f64, strike: f64, p: i32, above: bool) -> f64 {
    let uk = (strike.ln() - a) / b;
    let center = p as f64 * b;
    let scale = (p as f64 * a + 0.5 * (p as f64 * b).powi(2)).exp();
    let tol = 1e-12 * scale.max(1.0);
    let g = move |u: f64| (p as f64 * (a + b * u)).exp() * std_normal_density(u);
    if above {
        integrate(g, uk.max(center - 12.0), (center + 12.0).max(uk), tol)
    } else {
        integrate(g, center - 12.0, uk.min(center + 12.0), tol)
    }
}

/// Raw moment of the hedged terminal portfolio `F = (h-1)X + K` on
/// `{X >= K}`, `h X` below, by direct quadrature of the piecewise
/// integrand (split at the kink).
pub fn quad_portfolio_moment(a: f64, b: f64, strike: f64, h: f64, power: i32) -> f64 {
    let uk = (strike.ln() - a) / b;
    let scale = (2.0 * (a + b * b)).exp().max(1.0) * (1.0 + strike * strike);
    let tol = 1e-13 * scale;
    let lo = -13.0_f64;
    let hi = 2.0 * b + 13.0;
    let value = move |u: f64| {
        let x = (a + b * u).exp();
        let f = if x >= strike {
            (h - 1.0) * x + strike
        } else {
            h * x
        };
        f.powi(power)
    };
    let g = move |u: f64| value(u) * std_normal_density(u);
    integrate(g, lo, uk.clamp(lo, hi), tol) + integrate(g, uk.clamp(lo, hi), hi, tol)
}

/// Terminal portfolio variance at hedge ratio `h`, fully by quadrature.
///
/// Two passes: the mean first, then the centered square `(F - m)^2` as a
/// nonnegative integrand. Centering keeps the relative error on the
/// variance itself instead of amplifying it through `E F^2 - (E F)^2`
/// cancellation, which is what lets a minimizer search resolve the
/// optimum to 1e-6.
pub fn quad_portfolio_variance(a: f64, b: f64, strike: f64, h: f64) -> f64 {
    let mean = quad_portfolio_moment(a, b, strike, h, 1);
    let uk = (strike.ln() - a) / b;
    let scale = (2.0 * (a + b * b)).exp().max(1.0) * (1.0 + strike * strike);
    let tol = 1e-14 * scale;
    let lo = -13.0_f64;
    let hi = 2.0 * b + 13.0;
    let g = move |u: f64| {
        let x = (a + b * u).exp();
        let f = if x >= strike {
            (h - 1.0) * x + strike
        } else {
            h * x
        };
        (f - mean) * (f - mean) * std_normal_density(u)
    };
    integrate(g, lo, uk.clamp(lo, hi), tol) + integrate(g, uk.clamp(lo, hi), hi, tol)
}

/// Golden-section minimizer of a unimodal function on `[lo, hi]`.
pub fn golden_section_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Deterministic uniform draws for acceptance sweeps.
pub struct Draws(ChaCha12Rng);

impl Draws {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha12Rng::seed_from_u64(seed))
    }

    /// Uniform in the open interval (0, 1).
    pub fn unit(&mut self) -> f64 {
        ((self.0.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}

/// Relative error with an absolute floor: quantities that underflow to
/// the denormal range on both routes compare as equal.
pub fn rel_err_floored(x: f64, y: f64) -> f64 {
    let scale = x.abs().max(y.abs());
    if scale < 1e-280 {
        0.0
    } else {
        (x - y).abs() / scale
    }
}

/// Largest out-of-the-money standardized moneyness at which two
/// independently rounded closed-form price routes can still agree to
/// 1e-12 relative; beyond it the `mean_above - K * p_above` subtraction
/// amplifies argument rounding past the tolerance. Solves
/// `z^2 (z + 12) = 2000 * log_sd`, capped at 6.
pub fn collapse_moneyness_cap(log_sd: f64) -> f64 {
    let target = 2000.0 * log_sd;
    let mut z = target.cbrt();
    for _ in 0..30 {
        z = (target / (z + 12.0)).sqrt();
    }
    z.min(6.0)
}
