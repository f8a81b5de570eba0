//! Special functions in the unnormalized Gaussian convention.
//!
//! Throughout, `Erf(x) = int_0^x e^{-t^2} dt` and
//! `Erfc(x) = int_x^inf e^{-t^2} dt = sqrt(pi)/2 - Erf(x)`; these differ from
//! the usual `erf` by a factor `2/sqrt(pi)`.
//!
//! Values are computed from series and continued fractions for the
//! incomplete gamma function, which keeps `Erfc` accurate to full relative
//! precision far into the tail where a subtraction `sqrt(pi)/2 - Erf` would
//! lose every digit.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

pub const SQRT_PI: f64 = 1.772_453_850_905_516;
pub const HALF_SQRT_PI: f64 = 0.886_226_925_452_758;

/// Constant `K` in `|Erfc(x) / (e^{-x^2} / 2x) - 1| <= K / x^2` for `x >= 2`.
pub const ERFC_ASYMPTOTIC_K: f64 = 0.5;
/// Smallest argument accepted by [`erfc_asymptotic`].
pub const ERFC_ASYMPTOTIC_MIN: f64 = 2.0;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler gamma function for real arguments (poles give NaN).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        let s = (PI * x).sin();
        if s == 0.0 {
            return f64::NAN;
        }
        return PI / (s * gamma(1.0 - x));
    }
    if x > 150.0 {
        return ln_gamma(x).exp();
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// `ln |Gamma(x)|` for real `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    ln_gamma_complex(Complex64::new(x, 0.0)).re
}

const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// A logarithm of `Gamma(z)`; consistent under differences, which is all the
/// gamma-ratio callers need.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < 12.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - shift
}

fn check_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {x}")))
    }
}

/// `x^a e^{-x}` without intermediate overflow.
fn power_exp(a: f64, x: f64) -> f64 {
    (a * x.ln() - x).exp()
}

fn lower_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut k = 1.0;
    while term.abs() > sum.abs() * 1e-17 && k < 10_000.0 {
        term *= x / (a + k);
        sum += term;
        k += 1.0;
    }
    sum * power_exp(a, x)
}

fn upper_continued_fraction(a: f64, x: f64) -> f64 {
    power_exp(a, x) * continued_fraction_part(a, x)
}

/// `Gamma(a, x) / (x^a e^{-x})` by the Lentz continued fraction, `x >= a + 1`.
fn continued_fraction_part(a: f64, x: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..100_000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

fn exponential_integral_e1(x: f64) -> f64 {
    if x >= 1.0 {
        return upper_continued_fraction(0.0, x);
    }
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        term *= -x / k as f64;
        let add = -term / k as f64;
        sum += add;
        if add.abs() < 1e-18 {
            break;
        }
    }
    -EULER_GAMMA - x.ln() + sum
}

/// Upper incomplete gamma `Gamma(a, x) = int_x^inf t^{a-1} e^{-t} dt` for
/// real `a` and `x > 0`.
pub fn incomplete_gamma_upper(a: f64, x: f64) -> Result<f64> {
    check_finite("a", a)?;
    check_finite("x", x)?;
    if x <= 0.0 {
        return Err(Error::Domain(format!("Gamma({a}, {x}) needs x > 0")));
    }
    if a > 0.0 {
        if x >= a + 1.0 {
            Ok(upper_continued_fraction(a, x))
        } else {
            Ok(gamma(a) - lower_series(a, x))
        }
    } else if x > 1.0 {
        Ok(upper_continued_fraction(a, x))
    } else {
        let steps = (-a).floor() as i64 + 1;
        let base_a = a + steps as f64;
        let mut g = if base_a == 1.0 {
            // a was a non-positive integer: start from Gamma(0, x) = E1(x).
            exponential_integral_e1(x)
        } else {
            gamma(base_a) - lower_series(base_a, x)
        };
        let mut cur = if base_a == 1.0 { 0.0 } else { base_a };
        let target_steps = if base_a == 1.0 { steps - 1 } else { steps };
        for _ in 0..target_steps {
            cur -= 1.0;
            g = (g - power_exp(cur, x)) / cur;
        }
        Ok(g)
    }
}

/// `I(a, T) = int_T^inf t^a e^{-t^2} dt = Gamma((a+1)/2, T^2) / 2`, any real `a`, `T > 0`.
pub fn gaussian_tail_i(a: f64, t: f64) -> Result<f64> {
    check_finite("a", a)?;
    check_finite("T", t)?;
    if t <= 0.0 {
        return Err(Error::Domain(format!("tail start T = {t} must be > 0")));
    }
    incomplete_gamma_upper(0.5 * (a + 1.0), t * t).map(|g| 0.5 * g)
}

/// `e^{-x^2} sum 2^n x^{2n+1} / (2n+1)!!`, positive terms only.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    sum * (-x2).exp()
}

fn erfc_nonneg(x: f64) -> f64 {
    if x < 1.5 {
        HALF_SQRT_PI - erf_series(x)
    } else {
        0.5 * upper_continued_fraction(0.5, x * x)
    }
}

fn erf_nonneg(x: f64) -> f64 {
    if x < 1.5 {
        erf_series(x)
    } else {
        HALF_SQRT_PI - erfc_nonneg(x)
    }
}

fn check_nonneg(x: f64) -> Result<()> {
    check_finite("x", x)?;
    if x < 0.0 {
        return Err(Error::Domain(format!("x = {x} must be >= 0")));
    }
    Ok(())
}

/// `Erf(x) = int_0^x e^{-t^2} dt` for `x >= 0`.
pub fn erf_paper(x: f64) -> Result<f64> {
    check_nonneg(x)?;
    Ok(erf_nonneg(x))
}

/// `Erfc(x) = int_x^inf e^{-t^2} dt` for `x >= 0`, relative accuracy for large `x`.
pub fn erfc_paper(x: f64) -> Result<f64> {
    check_nonneg(x)?;
    Ok(erfc_nonneg(x))
}

/// `e^{x^2} Erfc(x)` for `x >= 0`, without underflow.
pub fn erfc_scaled(x: f64) -> Result<f64> {
    check_nonneg(x)?;
    Ok(if x < 1.5 {
        (x * x).exp() * erfc_nonneg(x)
    } else {
        0.5 * x * continued_fraction_part(0.5, x * x)
    })
}

/// `int_x^inf e^{-t^2} dt` for any real `x`.
pub fn erfc_signed(x: f64) -> f64 {
    if x < 0.0 {
        SQRT_PI - erfc_nonneg(-x)
    } else {
        erfc_nonneg(x)
    }
}

const GL10_X: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL10_W: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_4,
    0.219_086_362_515_982,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_14,
];

/// `int_a^b e^{-t^2} dt` for any real `a`, `b`, accurate when the interval
/// is short or deep in either tail.
pub fn erf_diff(a: f64, b: f64) -> f64 {
    if a > b {
        return -erf_diff(b, a);
    }
    if b - a <= 0.25 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = 0.0;
        for (x, w) in GL10_X.iter().zip(GL10_W) {
            let d = h * x;
            s += w * ((-(c - d) * (c - d)).exp() + (-(c + d) * (c + d)).exp());
        }
        return s * h;
    }
    if b <= 0.0 {
        return erf_diff(-b, -a);
    }
    if a >= 0.5 {
        erfc_nonneg(a) - erfc_nonneg(b)
    } else if a >= 0.0 {
        erf_nonneg(b) - erf_nonneg(a)
    } else {
        erf_nonneg(b) + erf_nonneg(-a)
    }
}

/// An accurate value next to the leading term of its asymptotic expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticEstimate {
    pub value: f64,
    pub leading_term: f64,
    /// Certified bound on `|value / leading_term - 1|`.
    pub relative_error_bound: f64,
}

impl AsymptoticEstimate {
    /// `|value / leading_term - 1|`.
    pub fn relative_error(&self) -> f64 {
        (self.value / self.leading_term - 1.0).abs()
    }
}

/// Leading term of `Erfc` for large `x`, with its certified relative error.
pub fn erfc_asymptotic(x: f64) -> Result<AsymptoticEstimate> {
    check_finite("x", x)?;
    if x < ERFC_ASYMPTOTIC_MIN {
        return Err(Error::Domain(format!(
            "asymptotic form needs x >= {ERFC_ASYMPTOTIC_MIN}, got {x}"
        )));
    }
    Ok(AsymptoticEstimate {
        value: erfc_nonneg(x),
        leading_term: 0.5 * (-x * x).exp() / x,
        relative_error_bound: ERFC_ASYMPTOTIC_K / (x * x),
    })
}

/// `Gamma(a, x)` against its leading term `x^{a-1} e^{-x}`; the bound is the
/// first omitted term `|a - 1| / x`, valid for `a <= 2` and `x >= 2`.
pub fn incomplete_gamma_asymptotic(a: f64, x: f64) -> Result<AsymptoticEstimate> {
    check_finite("a", a)?;
    if !(x >= 2.0) || a > 2.0 {
        return Err(Error::Domain(format!("asymptotic form needs x >= 2, a <= 2 (a = {a}, x = {x})")));
    }
    Ok(AsymptoticEstimate {
        value: incomplete_gamma_upper(a, x)?,
        leading_term: power_exp(a - 1.0, x),
        relative_error_bound: (a - 1.0).abs() / x,
    })
}
