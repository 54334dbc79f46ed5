//! Integrals of f(phi1(t)) w(t) with w = Z^2 or the normalised Z~^2.

use std::f64::consts::FRAC_PI_2;

use super::adaptive::adaptive_gl;
use super::IntegralResult;
use crate::error::{domain, Result};

/// What an integrand needs to know about a ladder near the window.
pub trait LadderMap {
    fn phi1(&self, t: f64) -> f64;
    /// Z^2(t) / (2 Phi'(phi(t)))
    fn ztilde2(&self, t: f64) -> f64;
    fn z2(&self, t: f64) -> f64;
    /// Length over which the weight is essentially polynomial.
    fn panel_width(&self, t: f64) -> f64;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    Z2,
    ZTilde2,
    /// Z^4(phi1(t)) Z^2(t)
    Z4OfPhi1TimesZ2,
}

/// Inverse square-root endpoint behaviour of the integrand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndpointSingularity {
    None,
    InverseSqrt,
}

/// int_a^b f(phi1(t)) w(t) dt to absolute tolerance `tol`.
pub fn integrate_composite<M, F>(
    f: F,
    weight: Weight,
    a: f64,
    b: f64,
    map: &M,
    singular: EndpointSingularity,
    tol: f64,
) -> Result<IntegralResult>
where
    M: LadderMap + ?Sized,
    F: Fn(f64) -> f64,
{
    if !(b > a) || !a.is_finite() || !b.is_finite() {
        return Err(domain("integrate_composite", a, "a < b"));
    }
    let g = |t: f64| {
        let x = map.phi1(t);
        let w = match weight {
            Weight::Z2 => map.z2(t),
            Weight::ZTilde2 => map.ztilde2(t),
            Weight::Z4OfPhi1TimesZ2 => {
                let zx = map.z2(x);
                zx * zx * map.z2(t)
            }
        };
        f(x) * w
    };
    let pw = map.panel_width(b);
    match singular {
        EndpointSingularity::None => {
            let n = ((b - a) / pw).ceil().max(1.0) as usize;
            adaptive_gl(g, a, b, n, tol, 4000 * n + 20_000)
        }
        EndpointSingularity::InverseSqrt => integrate_sin_substituted(g, a, b, pw, tol),
    }
}

/// int_a^b g(t) dt through t = m + r sin v, which removes (t-a)^(-1/2) and
/// (b-t)^(-1/2) endpoint behaviour.
pub fn integrate_sin_substituted<G: Fn(f64) -> f64>(
    g: G,
    a: f64,
    b: f64,
    panel: f64,
    tol: f64,
) -> Result<IntegralResult> {
    let m = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let n = (std::f64::consts::PI * r / panel).ceil().max(2.0) as usize;
    adaptive_gl(
        |v| {
            let (s, c) = v.sin_cos();
            g(m + r * s) * r * c
        },
        -FRAC_PI_2,
        FRAC_PI_2,
        n,
        tol,
        4000 * n + 40_000,
    )
}
