//! Chords of the curve y = phi1(t) = phi(t)/2.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;

use serde::Serialize;

use crate::critical_line::ZeroPair;
use crate::error::{domain, Error, Result};
use crate::ladder::{eps_hat, Ladder, Phi1Profile, SOLVE_MIN_T};

/// Grid points per gap when locating an inflection.
pub const INFLECTION_GRID: usize = 256;

/// Relative width at which the bisections in this module stop.
const BISECT_REL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Chord {
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "U")]
    pub u: f64,
    pub tan_alpha: f64,
    pub alpha: f64,
}

impl Chord {
    fn from_slope(t: f64, u: f64, tan_alpha: f64) -> Self {
        Chord {
            t,
            u,
            tan_alpha,
            alpha: tan_alpha.atan(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InflectionPoint {
    pub rho: f64,
    pub gamma: f64,
    pub gamma_prime: f64,
    pub beta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub gamma: f64,
    #[serde(rename = "U")]
    pub u: f64,
    pub tan_alpha: f64,
    pub alpha: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SecondClassWindow {
    pub gamma: f64,
    pub gamma_bar: f64,
    pub rho_bar: f64,
    /// slope of the chord from gamma to gamma_bar
    pub tan_alpha: f64,
}

/// How the band of the zero-anchored rotating chord is read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AngleReading {
    /// eta <= alpha <= pi/2 - eta
    #[default]
    Radians,
    /// eta <= alpha <= 1 - eta, alpha in radians as written
    Literal,
}

pub fn angle_in_band(alpha: f64, eta: f64, reading: AngleReading) -> bool {
    let hi = match reading {
        AngleReading::Radians => FRAC_PI_2 - eta,
        AngleReading::Literal => 1.0 - eta,
    };
    alpha >= eta && alpha <= hi
}

/// Chord over [T, T+U] from two direct solves.
pub fn chord(lad: &Ladder<'_>, t: f64, u: f64) -> Result<Chord> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(domain("chord", u, "U > 0"));
    }
    let a = lad.solve(t)?.phi;
    let b = lad.solve(t + u)?.phi;
    Ok(Chord::from_slope(t, u, (b - a) / (2.0 * u)))
}

/// Same chord read off an interpolated profile.
pub fn chord_from_profile(p: &Phi1Profile, t: f64, u: f64) -> Result<Chord> {
    if !(u > 0.0) || t < p.start() || t + u > p.end() * (1.0 + 1e-15) {
        return Err(domain("chord", u, "[T, T+U] inside the profile window"));
    }
    Ok(Chord::from_slope(t, u, p.phi1_delta(t + u, t) / u))
}

/// Mean distance between zeros near t, 2 pi / ln(t / 2 pi).
pub fn mean_gap(t: f64) -> f64 {
    2.0 * PI / (t / (2.0 * PI)).ln()
}

/// Default almost-parallel tolerance 2 ln ln T / ln T.
pub fn default_eta(t: f64) -> f64 {
    2.0 * eps_hat(t)
}

pub fn is_almost_parallel(c: &Chord, eta: Option<f64>) -> bool {
    let eta = eta.unwrap_or_else(|| default_eta(c.t));
    (c.tan_alpha - 1.0).abs() <= eta
}

/// Second difference of phi1 at t with step h, from increments.
pub fn second_difference(p: &Phi1Profile, t: f64, h: f64) -> f64 {
    p.phi1_delta(t + h, t) - p.phi1_delta(t, t - h)
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    while b - a > BISECT_REL * b {
        let m = 0.5 * (a + b);
        if (f(m) > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// First inflection of phi1 in (gamma, gamma'), on a profile covering the gap.
pub fn find_inflection_on(p: &Phi1Profile, pair: &ZeroPair) -> Result<InflectionPoint> {
    let (g, g1) = (pair.gamma, pair.gamma_prime);
    let h = (g1 - g) / INFLECTION_GRID as f64;
    let d2 = |t: f64| second_difference(p, t, h);
    let none = || Error::NoInflection {
        gamma: g,
        gamma_prime: g1,
    };
    let mut prev_t = g + h;
    let mut prev = d2(prev_t);
    let mut rho = None;
    for i in 2..INFLECTION_GRID - 1 {
        let t = g + h * i as f64;
        let v = d2(t);
        if prev > 0.0 && v <= 0.0 {
            rho = Some(bisect(d2, prev_t, t));
            break;
        }
        prev_t = t;
        prev = v;
    }
    let rho = rho.ok_or_else(none)?;
    let beta = (p.phi1_delta(rho, g) / (rho - g)).atan();
    Ok(InflectionPoint {
        rho,
        gamma: g,
        gamma_prime: g1,
        beta,
    })
}

pub fn find_inflection(lad: &Ladder<'_>, pair: &ZeroPair) -> Result<InflectionPoint> {
    if !(pair.gamma >= SOLVE_MIN_T) || !(pair.gamma_prime > pair.gamma) {
        return Err(domain("find_inflection", pair.gamma, "1e3 <= gamma < gamma'"));
    }
    let p = lad.profile_on(pair.gamma, pair.gamma_prime)?;
    find_inflection_on(&p, pair)
}

/// Rotating chord from gamma with U on a logarithmic grid from 1e-3 to
/// rho - gamma.
pub fn rotating_chord_scan(
    lad: &Ladder<'_>,
    gamma: f64,
    rho: f64,
    n_angles: usize,
) -> Result<Vec<ScanRow>> {
    if !(rho > gamma) || !(gamma >= SOLVE_MIN_T) {
        return Err(domain("rotating_chord_scan", rho, "1e3 <= gamma < rho"));
    }
    if n_angles < 2 {
        return Err(domain("rotating_chord_scan", n_angles as f64, "n_angles >= 2"));
    }
    let p = lad.profile_on(gamma, rho)?;
    scan_on(lad, &p, gamma, rho - gamma, n_angles)
}

fn scan_on(
    lad: &Ladder<'_>,
    p: &Phi1Profile,
    gamma: f64,
    width: f64,
    n: usize,
) -> Result<Vec<ScanRow>> {
    let lo = 1e-3f64.min(0.5 * width);
    let r = (width / lo).ln();
    let quad = lad.lab().quad();
    (0..n)
        .map(|k| {
            let u = lo * (r * k as f64 / (n - 1) as f64).exp();
            let u = if k == n - 1 { width } else { u };
            let c = chord_from_profile(p, gamma, u)?;
            let lhs = quad.integrate_z2(gamma, gamma + u, 1e-9)?.value;
            let rhs = u * gamma.ln() * c.tan_alpha;
            Ok(ScanRow {
                gamma,
                u,
                tan_alpha: c.tan_alpha,
                alpha: c.alpha,
                lhs,
                rhs,
                ratio: lhs / rhs,
            })
        })
        .collect()
}

pub fn write_scan_csv<W: Write>(w: &mut W, rows: &[ScanRow]) -> Result<()> {
    writeln!(w, "gamma,U,tan_alpha,lhs,rhs,ratio")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            crate::fmt_sig(r.gamma),
            crate::fmt_sig(r.u),
            crate::fmt_sig(r.tan_alpha),
            crate::fmt_sig(r.lhs),
            crate::fmt_sig(r.rhs),
            crate::fmt_sig(r.ratio)
        )?;
    }
    Ok(())
}

/// gamma_bar, the first zero at or past gamma + gamma^{1/3+2 eps}, and the
/// first crossing rho_bar of phi1 with the chord to it.
pub fn second_class_window(lad: &Ladder<'_>, gamma: f64) -> Result<SecondClassWindow> {
    if !(gamma >= SOLVE_MIN_T) {
        return Err(domain("second_class_window", gamma, "gamma >= 1e3"));
    }
    let u0 = lad.config().u0(gamma);
    let gamma_bar = crate::critical_line::next_zero(lad.lab().hz(), gamma + u0)?;
    let p = lad.profile_on(gamma, gamma_bar)?;
    second_class_on(&p, gamma, gamma_bar)
}

pub fn second_class_on(p: &Phi1Profile, gamma: f64, gamma_bar: f64) -> Result<SecondClassWindow> {
    let slope = p.phi1_delta(gamma_bar, gamma) / (gamma_bar - gamma);
    let gap = |t: f64| p.phi1_delta(t, gamma) - slope * (t - gamma);
    let step = mean_gap(gamma) / 16.0;
    let n = ((gamma_bar - gamma) / step).ceil() as usize;
    let step = (gamma_bar - gamma) / n as f64;
    let mut prev_t = gamma + step;
    let mut rho_bar = None;
    if gap(prev_t) < 0.0 {
        for i in 2..n {
            let t = gamma + step * i as f64;
            let v = gap(t);
            if v >= 0.0 {
                rho_bar = Some(bisect(gap, prev_t, t));
                break;
            }
            prev_t = t;
        }
    }
    let rho_bar = rho_bar.ok_or(Error::CrossingNotFound { gamma, gamma_bar })?;
    Ok(SecondClassWindow {
        gamma,
        gamma_bar,
        rho_bar,
        tan_alpha: slope,
    })
}

/// Gaps between consecutive zeros in [T, T+U]: (shorter than
/// A ln ln T / ln T, total).
pub fn short_gap_fraction(lad: &Ladder<'_>, t: f64, u: f64, a: f64) -> Result<(usize, usize)> {
    if !(u > 0.0) || !(t >= 10.0) {
        return Err(domain("short_gap_fraction", u, "T >= 10, U > 0"));
    }
    let zs = lad.lab().zeros().zeros_in(t, t + u);
    let bound = a * eps_hat(t);
    let total = zs.len().saturating_sub(1);
    let short = zs.windows(2).filter(|w| w[1] - w[0] < bound).count();
    Ok((short, total))
}
