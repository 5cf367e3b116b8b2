//! Standard-normal density, distribution and quantile functions.
//!
//! The tails matter here: posterior reweighting evaluates Gaussian ratios at
//! tens of standard deviations, so the survival function and its logarithm
//! are implemented via `erfc` with an asymptotic branch instead of `1 - cdf`.

use std::f64::consts::PI;

const SQRT_2: f64 = std::f64::consts::SQRT_2;
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_67;

/// Standard normal density.
#[inline]
pub fn pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Log of the normal density with mean `mu` and variance `var`.
#[inline]
pub fn log_pdf_scaled(z: f64, mu: f64, var: f64) -> f64 {
    let d = z - mu;
    -0.5 * d * d / var - 0.5 * var.ln() - LN_SQRT_2PI
}

/// Normal density with mean `mu` and variance `var`.
#[inline]
pub fn pdf_scaled(z: f64, mu: f64, var: f64) -> f64 {
    log_pdf_scaled(z, mu, var).exp()
}

/// Standard normal CDF.
#[inline]
pub fn cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Standard normal survival function, accurate in the far right tail.
#[inline]
pub fn sf(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// log of the survival function; switches to the asymptotic expansion once
/// `erfc` underflows (x beyond ~37.5).
pub fn log_sf(x: f64) -> f64 {
    if x < 37.0 {
        sf(x).ln()
    } else {
        // Phi_bar(x) ~ pdf(x)/x * (1 - 1/x^2 + 3/x^4 - 15/x^6)
        let x2 = x * x;
        let corr = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
        -0.5 * x2 - LN_SQRT_2PI - x.ln() + corr.ln()
    }
}

/// log of P(a < Z < b) for a standard normal, stable when both endpoints sit
/// in the same far tail.
pub fn log_mass(a: f64, b: f64) -> f64 {
    debug_assert!(a <= b);
    if a <= 0.0 && b >= 0.0 {
        (cdf(b) - cdf(a)).ln()
    } else if a > 0.0 {
        // both in the right tail: mass = sf(a) - sf(b)
        let la = log_sf(a);
        let lb = log_sf(b);
        la + ln_one_minus_exp(lb - la)
    } else {
        // both in the left tail: mirror
        log_mass(-b, -a)
    }
}

#[inline]
fn ln_one_minus_exp(d: f64) -> f64 {
    // ln(1 - e^d) for d <= 0
    if d > -f64::EPSILON {
        f64::NEG_INFINITY
    } else if d > -0.693 {
        (-libm::expm1(d)).ln()
    } else {
        libm::log1p(-d.exp())
    }
}

/// Inverse of the standard normal CDF (Wichura's AS 241, double precision).
///
/// Valid for p in (0, 1); returns +-infinity at the endpoints.
pub fn quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        let num = poly(
            &[
                3.387_132_872_796_366_608e0,
                1.331_416_678_917_843_774_5e2,
                1.971_590_950_306_551_442_7e3,
                1.373_169_376_550_946_112_5e4,
                4.592_195_393_154_987_145_7e4,
                6.726_577_092_700_870_085_3e4,
                3.343_057_558_358_812_810_5e4,
                2.509_080_928_730_122_672_7e3,
            ],
            r,
        );
        let den = poly(
            &[
                1.0,
                4.231_333_070_160_091_125_2e1,
                6.871_870_074_920_579_083e2,
                5.394_196_021_424_751_107_7e3,
                2.121_379_430_158_659_586_7e4,
                3.930_789_580_009_271_061e4,
                2.872_908_573_572_194_267_4e4,
                5.226_495_278_852_854_561e3,
            ],
            r,
        );
        return q * num / den;
    }
    let mut r = if q < 0.0 { p } else { 1.0 - p };
    r = (-r.ln()).sqrt();
    let x = if r <= 5.0 {
        let r = r - 1.6;
        let num = poly(
            &[
                1.423_437_110_749_683_577_3e0,
                4.630_337_846_156_545_295_9e0,
                5.769_497_221_460_691_405_5e0,
                3.647_848_324_763_204_605e0,
                1.270_458_252_452_368_382_6e0,
                2.417_807_251_774_506_117_7e-1,
                2.272_384_498_926_918_458_3e-2,
                7.745_450_142_783_414_076_4e-4,
            ],
            r,
        );
        let den = poly(
            &[
                1.0,
                2.053_191_626_637_758_821_9e0,
                1.676_384_830_183_803_849_4e0,
                6.897_673_349_851_000_045_5e-1,
                1.481_039_764_274_800_745_9e-1,
                1.519_866_656_361_645_719_7e-2,
                5.475_938_084_995_344_946e-4,
                1.050_750_071_644_416_843_2e-9,
            ],
            r,
        );
        num / den
    } else {
        let r = r - 5.0;
        let num = poly(
            &[
                6.657_904_643_501_103_777_2e0,
                5.463_784_911_164_114_369_9e0,
                1.784_826_539_917_291_335_8e0,
                2.965_605_718_285_048_912_3e-1,
                2.653_218_952_657_612_309_3e-2,
                1.242_660_947_388_078_438_6e-3,
                2.711_555_568_743_487_578_2e-5,
                2.010_334_399_292_288_132_7e-7,
            ],
            r,
        );
        let den = poly(
            &[
                1.0,
                5.998_322_065_558_879_376_9e-1,
                1.369_298_809_227_358_053_1e-1,
                1.487_536_129_085_061_485_3e-2,
                7.868_691_311_456_132_591e-4,
                1.846_318_317_510_054_681_8e-5,
                1.421_511_758_316_445_888_7e-7,
                2.044_263_103_389_939_785_6e-15,
            ],
            r,
        );
        num / den
    };
    if q < 0.0 {
        -x
    } else {
        x
    }
}

#[inline]
fn poly(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Inverse Mills ratio pdf(x)/sf(x), with an asymptotic branch for large x.
pub fn hazard(x: f64) -> f64 {
    if x < 30.0 {
        pdf(x) / sf(x)
    } else {
        // pdf/sf ~ x / (1 - 1/x^2 + 3/x^4 - 15/x^6)
        let x2 = x * x;
        x / (1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2))
    }
}

/// Mean and variance of a normal(mu, var) truncated to [lo, hi].
/// Bounds may be infinite. Returns None when the truncation mass underflows.
pub fn truncated_moments(mu: f64, var: f64, lo: f64, hi: f64) -> Option<(f64, f64)> {
    debug_assert!(lo < hi);
    let sigma = var.sqrt();
    if sigma == 0.0 {
        return if mu >= lo && mu <= hi {
            Some((mu, 0.0))
        } else {
            None
        };
    }
    let a = (lo - mu) / sigma;
    let b = (hi - mu) / sigma;

    if a == f64::NEG_INFINITY && b == f64::INFINITY {
        return Some((mu, var));
    }
    // One-sided [a, inf): robust via the inverse Mills ratio.
    if b == f64::INFINITY {
        // mean = h(a), var = 1 + a*h(a) - h(a)^2 in standard units
        let h = hazard(a);
        let v = 1.0 - h * (h - a);
        return Some((mu + sigma * h, var * v.max(0.0)));
    }
    if a == f64::NEG_INFINITY {
        let (m, v) = truncated_moments(-mu, var, -hi, f64::INFINITY)?;
        return Some((-m, v));
    }
    let log_z = log_mass(a, b);
    if log_z < -700.0 {
        return None;
    }
    let z = log_z.exp();
    let (pa, pb) = (pdf(a), pdf(b));
    let delta = (pa - pb) / z;
    let m = mu + sigma * delta;
    let apa = if pa == 0.0 { 0.0 } else { a * pa };
    let bpb = if pb == 0.0 { 0.0 } else { b * pb };
    let v = var * (1.0 + (apa - bpb) / z - delta * delta);
    Some((m, v.max(0.0)))
}
