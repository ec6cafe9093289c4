//! Error-function integrals of (complex) Gaussians over finite intervals.

use errorfunctions::{ComplexErrorFunctions, RealErrorFunctions};
use num_complex::Complex64;

const SQRT_PI: f64 = 1.772_453_850_905_516;

pub fn erfc(x: f64) -> f64 {
    RealErrorFunctions::erfc(x)
}

pub fn erfcx(x: f64) -> f64 {
    RealErrorFunctions::erfcx(x)
}

/// Mass of the density exp(−(x−μ)²/w²)/(w√π) on `[lo, hi]`.
pub fn gaussian_interval_mass(mu: f64, w: f64, lo: f64, hi: f64) -> f64 {
    let a = (lo - mu) / w;
    let b = (hi - mu) / w;
    if a >= 0.0 {
        0.5 * (erfc(a) - erfc(b))
    } else if b <= 0.0 {
        0.5 * (erfc(-b) - erfc(-a))
    } else {
        1.0 - 0.5 * erfc(-a) - 0.5 * erfc(b)
    }
}

/// Natural log of [`gaussian_interval_mass`], accurate deep in the tails.
pub fn ln_gaussian_interval_mass(mu: f64, w: f64, lo: f64, hi: f64) -> f64 {
    let a = (lo - mu) / w;
    let b = (hi - mu) / w;
    let tail = |a: f64, b: f64| {
        // ½(erfc a − erfc b) with 0 <= a < b
        let ratio = b.erfcx() / a.erfcx() * (a * a - b * b).exp();
        -a * a + (0.5 * a.erfcx()).ln() + (-ratio).ln_1p()
    };
    if a >= 0.0 {
        tail(a, b)
    } else if b <= 0.0 {
        tail(-b, -a)
    } else {
        gaussian_interval_mass(mu, w, lo, hi).ln()
    }
}

/// ∫_lo^hi exp(α u² + β u + γ) du for complex coefficients with Re α < 0.
///
/// Written in terms of erfcx so that neither large oscillation wavenumbers
/// (|Im β| ≫ 1) nor far tails overflow.
pub fn gaussian_segment_integral(alpha: Complex64, beta: Complex64, gamma: Complex64, lo: f64, hi: f64) -> Complex64 {
    debug_assert!(alpha.re < 0.0, "Re α must be negative, got {alpha}");
    if hi == lo {
        return Complex64::new(0.0, 0.0);
    }
    if hi < lo {
        return -gaussian_segment_integral(alpha, beta, gamma, hi, lo);
    }
    let s = (-alpha).sqrt();
    let shift = beta / (2.0 * s);
    let z = |u: f64| s * u - shift;
    let e = |u: f64| (alpha * u * u + beta * u + gamma).exp();
    let (z_lo, z_hi) = (z(lo), z(hi));
    let pref = SQRT_PI / (2.0 * s);
    let bracket = if z_lo.re >= 0.0 {
        e(lo) * z_lo.erfcx() - e(hi) * z_hi.erfcx()
    } else if z_hi.re < 0.0 {
        e(hi) * (-z_hi).erfcx() - e(lo) * (-z_lo).erfcx()
    } else {
        let g = (gamma - beta * beta / (4.0 * alpha)).exp();
        2.0 * g - e(lo) * (-z_lo).erfcx() - e(hi) * z_hi.erfcx()
    };
    pref * bracket
}
