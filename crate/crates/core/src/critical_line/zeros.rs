//! Zeros of Z, the counting function N(t) and S(t).

use std::f64::consts::PI;
use std::sync::RwLock;

use serde::Serialize;

use super::hardy::HardyZ;
use super::theta::{theta_prime, theta_unchecked};
use crate::error::{domain, Error, Result};

/// Bisection stops once the bracket is this narrow.
pub const REFINE_WIDTH: f64 = 1e-9;

/// Sign grid spacing as a fraction of the mean zero gap pi / theta'(t).
pub const SCAN_FRACTION: f64 = 1.0 / 8.0;

/// |S(t)| larger than this means the table has missed zeros.
pub const S_BOUND: f64 = 3.0;

/// Consecutive zeros gamma < gamma_prime.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZeroPair {
    pub gamma: f64,
    pub gamma_prime: f64,
    pub refinement_width: f64,
}

fn scan_step(t: f64) -> f64 {
    let tt = t.max(20.0);
    (PI / theta_prime(tt)) * SCAN_FRACTION
}

fn sign(v: f64) -> bool {
    v >= 0.0
}

/// Bisects a sign change of Z on [a, b]; returns (midpoint, final width).
fn refine(hz: &HardyZ, mut a: f64, mut b: f64, mut za: f64) -> (f64, f64) {
    while b - a > REFINE_WIDTH {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let zm = hz.eval(m);
        if sign(zm) == sign(za) {
            a = m;
            za = zm;
        } else {
            b = m;
        }
    }
    (0.5 * (a + b), b - a)
}

/// Minimises sg * Z on [a, c] by golden section; returns the argmin and value.
fn dip(hz: &HardyZ, a: f64, c: f64, sg: f64) -> (f64, f64) {
    const R: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut c) = (a, c);
    let mut x1 = c - R * (c - a);
    let mut x2 = a + R * (c - a);
    let mut f1 = sg * hz.eval(x1);
    let mut f2 = sg * hz.eval(x2);
    for _ in 0..48 {
        if f1 < 0.0 || f2 < 0.0 {
            break;
        }
        if f1 < f2 {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - R * (c - a);
            f1 = sg * hz.eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + R * (c - a);
            f2 = sg * hz.eval(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Zeros of Z in [lo, hi) found by sign changes, ascending, with their
/// refinement widths. Three same-sign samples whose middle is smallest in
/// modulus trigger a search for a close pair the grid stepped over.
pub(crate) fn scan(hz: &HardyZ, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    let mut a = lo;
    let mut za = hz.eval(a);
    while a < hi {
        let b = (a + scan_step(a)).min(hi);
        let zb = hz.eval(b);
        if sign(za) != sign(zb) {
            out.push(refine(hz, a, b, za));
        } else {
            if let Some((p, zp)) = prev {
                if sign(zp) == sign(za) && za.abs() < zp.abs() && za.abs() < zb.abs() {
                    let sg = if sign(za) { 1.0 } else { -1.0 };
                    let (m, v) = dip(hz, p, b, sg);
                    if v < 0.0 {
                        let zm = hz.eval(m);
                        out.push(refine(hz, p, m, zp));
                        out.push(refine(hz, m, b, zm));
                        a = b;
                        za = zb;
                        prev = None;
                        continue;
                    }
                }
            }
        }
        prev = Some((a, za));
        a = b;
        za = zb;
    }
    out
}

/// Consecutive pairs with gamma in [lo, hi]; the last partner may lie past hi.
pub fn find_zeros(hz: &HardyZ, lo: f64, hi: f64) -> Result<Vec<ZeroPair>> {
    if !(lo >= 10.0) || !(hi > lo) || !hi.is_finite() {
        return Err(domain("find_zeros", lo, "10 <= lo < hi"));
    }
    let mut zs = scan(hz, lo, hi);
    // the successor of the last zero
    let mut a = hi;
    while zs.last().is_none_or(|z| z.0 <= hi) {
        if a > hi + 1e3 {
            return Err(Error::NoZero { t: hi });
        }
        let b = a + 4.0 * scan_step(a) / SCAN_FRACTION;
        zs.extend(scan(hz, a, b));
        a = b;
    }
    let mut pairs = Vec::new();
    for w in zs.windows(2) {
        if w[0].0 <= hi {
            pairs.push(ZeroPair {
                gamma: w[0].0,
                gamma_prime: w[1].0,
                refinement_width: w[0].1.max(w[1].1),
            });
        }
    }
    Ok(pairs)
}

/// First zero of Z strictly above t.
pub fn next_zero(hz: &HardyZ, t: f64) -> Result<f64> {
    let mut a = t;
    let mut za = hz.eval(a);
    let limit = t + 100.0;
    while a < limit {
        let b = a + scan_step(a);
        let zb = hz.eval(b);
        if sign(za) != sign(zb) {
            return Ok(refine(hz, a, b, za).0);
        }
        a = b;
        za = zb;
    }
    Err(Error::NoZero { t })
}

/// Lazily grown list of all zeros in (0, covered).
#[derive(Debug)]
pub struct ZeroTable {
    hz: HardyZ,
    inner: RwLock<(Vec<f64>, f64)>,
}

impl ZeroTable {
    pub fn new(hz: HardyZ) -> Self {
        ZeroTable {
            hz,
            inner: RwLock::new((Vec::new(), 0.0)),
        }
    }

    fn ensure(&self, t: f64) {
        if self.inner.read().unwrap().1 >= t {
            return;
        }
        let mut g = self.inner.write().unwrap();
        // Z has no zero below 14; start the scan at 10 so every sign is reliable.
        if g.1 < 10.0 {
            g.1 = 10.0;
        }
        let target = t.max(g.1 + 200.0);
        let from = g.1;
        let found = scan(&self.hz, from, target);
        g.0.extend(found.into_iter().map(|z| z.0));
        g.1 = target;
    }

    /// Number of zeros with 0 < gamma < t (no check of completeness).
    pub fn count_below(&self, t: f64) -> usize {
        self.ensure(t);
        let g = self.inner.read().unwrap();
        g.0.partition_point(|&z| z < t)
    }

    /// Zeros in [lo, hi).
    pub fn zeros_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        self.ensure(hi);
        let g = self.inner.read().unwrap();
        let a = g.0.partition_point(|&z| z < lo);
        let b = g.0.partition_point(|&z| z < hi);
        g.0[a..b].to_vec()
    }

    /// Zero ordinate nearest to t, if the table has one within `eps`.
    fn near_zero(&self, t: f64, eps: f64) -> bool {
        let g = self.inner.read().unwrap();
        let i = g.0.partition_point(|&z| z < t);
        let close = |j: usize| g.0.get(j).map(|z| (z - t).abs() < eps).unwrap_or(false);
        close(i) || (i > 0 && close(i - 1))
    }

    /// S(t) = N(t) - 1 - theta(t)/pi.
    pub fn s_of_t(&self, t: f64) -> Result<f64> {
        if !(t >= 10.0) || !t.is_finite() {
            return Err(domain("s_of_t", t, "t >= 10"));
        }
        let n = self.count_below(t);
        if self.near_zero(t, REFINE_WIDTH) {
            return Err(domain("s_of_t", t, "t must not be a zero ordinate"));
        }
        let s = n as f64 - 1.0 - theta_unchecked(t) / PI;
        if s.abs() > S_BOUND {
            return Err(Error::IncompleteZeros { t, s });
        }
        Ok(s)
    }
}
