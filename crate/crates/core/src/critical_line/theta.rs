//! Riemann–Siegel theta.

use std::f64::consts::{FRAC_PI_8, PI};

use num_complex::Complex64;
use serde::Serialize;

use super::constants::{STIRLING, THETA_SERIES};
use crate::error::{domain, Result};

/// Smallest argument accepted by [`theta`].
pub const THETA_MIN_T: f64 = 2.0;

/// Below this the asymptotic series is replaced by the log-gamma form.
const SERIES_FROM: f64 = 10.0;

/// Number of correction terms kept in the asymptotic series.
pub const DEFAULT_THETA_TERMS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThetaValue {
    pub t: f64,
    pub theta: f64,
}

/// theta(t) for t >= 2.
pub fn theta(t: f64) -> Result<ThetaValue> {
    if !(t >= THETA_MIN_T) || !t.is_finite() {
        return Err(domain("theta", t, "t >= 2"));
    }
    Ok(ThetaValue {
        t,
        theta: theta_unchecked(t),
    })
}

#[inline]
pub(crate) fn theta_unchecked(t: f64) -> f64 {
    if t >= SERIES_FROM {
        theta_series(t, DEFAULT_THETA_TERMS)
    } else {
        theta_loggamma(t)
    }
}

/// Asymptotic series with `terms` corrections beyond the constant.
pub fn theta_series(t: f64, terms: usize) -> f64 {
    let terms = terms.min(THETA_SERIES.len());
    let lead = 0.5 * t * (t / (2.0 * PI)).ln() - 0.5 * t - FRAC_PI_8;
    let r = 1.0 / t;
    let r2 = r * r;
    let mut acc = 0.0;
    for k in (0..terms).rev() {
        acc = acc * r2 + THETA_SERIES[k];
    }
    let mut th = lead + acc * r;
    // exponentially small piece of Im log Gamma(1/4 + it/2)
    if t < 40.0 {
        th += 0.5 * (-PI * t).exp().atan();
    }
    th
}

/// -(t/2) ln pi + Im log Gamma(1/4 + it/2), valid for all t >= 0.
pub(crate) fn theta_loggamma(t: f64) -> f64 {
    -0.5 * t * PI.ln() + im_log_gamma(Complex64::new(0.25, 0.5 * t))
}

/// Imaginary part of the principal branch of log Gamma for Re z > 0,
/// continuous along vertical lines.
fn im_log_gamma(z: Complex64) -> f64 {
    const SHIFT: usize = 12;
    let mut w = z;
    let mut sub = 0.0;
    for _ in 0..SHIFT {
        sub += w.arg();
        w += 1.0;
    }
    let lw = w.ln();
    let mut s = (w - 0.5) * lw - w;
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut pow = inv;
    for c in STIRLING.iter().take(14) {
        s += pow * *c;
        pow *= inv2;
    }
    s.im - sub
}

/// d theta / dt to a few parts in 1e-10 for t >= 10.
pub fn theta_prime(t: f64) -> f64 {
    let r2 = 1.0 / (t * t);
    0.5 * (t / (2.0 * PI)).ln() - r2 / 48.0 - 7.0 * r2 * r2 / 1920.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_and_loggamma_agree_on_overlap() {
        for &t in &[10.0, 12.5, 20.0, 35.0, 60.0] {
            let a = theta_series(t, DEFAULT_THETA_TERMS);
            let b = theta_loggamma(t);
            assert!((a - b).abs() < 1e-12, "t={t}: {a} vs {b}");
        }
    }

    #[test]
    fn rejects_small_argument() {
        assert!(theta(1.5).is_err());
        assert!(theta(f64::NAN).is_err());
        assert!(theta(2.0).is_ok());
    }

    #[test]
    fn derivative_matches_difference() {
        for &t in &[50.0f64, 1e3, 1e5] {
            let h = 1e-3 * t.sqrt();
            let d = (theta_unchecked(t + h) - theta_unchecked(t - h)) / (2.0 * h);
            assert!((d - theta_prime(t)).abs() < 1e-7, "t={t}");
        }
    }
}
