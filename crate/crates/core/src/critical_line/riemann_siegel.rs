//! Riemann–Siegel main sum and remainder.

use std::f64::consts::PI;
use std::sync::OnceLock;

use super::constants::{RS_C0, RS_C1, RS_C2, RS_C3, RS_C4};

/// Largest remainder depth available.
pub const MAX_RS_DEPTH: usize = 5;

const RS_TABLES: [&[f64]; MAX_RS_DEPTH] = [&RS_C0, &RS_C1, &RS_C2, &RS_C3, &RS_C4];

/// C_k has the parity of k in w; PACKED[j][k] is the coefficient of
/// w^(2j + k % 2) in C_k.
const PACKED_LEN: usize = 40;

fn packed() -> &'static [[f64; MAX_RS_DEPTH]; PACKED_LEN] {
    static P: OnceLock<[[f64; MAX_RS_DEPTH]; PACKED_LEN]> = OnceLock::new();
    P.get_or_init(|| {
        let mut out = [[0.0; MAX_RS_DEPTH]; PACKED_LEN];
        for (k, c) in RS_TABLES.iter().enumerate() {
            for (i, &v) in c.iter().enumerate() {
                if i % 2 == k % 2 {
                    out[i / 2][k] = v;
                } else {
                    debug_assert!(v == 0.0);
                }
            }
        }
        out
    })
}

/// C_0(w) .. C_4(w), evaluated together.
#[inline]
fn correction_series(w: f64) -> [f64; MAX_RS_DEPTH] {
    let w2 = w * w;
    let mut acc = [0.0; MAX_RS_DEPTH];
    for row in packed().iter().rev() {
        for k in 0..MAX_RS_DEPTH {
            acc[k] = acc[k] * w2 + row[k];
        }
    }
    acc[1] *= w;
    acc[3] *= w;
    acc
}

/// Main-sum length N = floor(sqrt(t / 2 pi)).
#[inline]
pub(crate) fn main_len(t: f64) -> usize {
    (t / (2.0 * PI)).sqrt().floor() as usize
}

/// Remainder (-1)^(N-1) a^(-1/2) sum_k C_k(w) a^(-k), a = sqrt(t/2pi).
#[inline]
pub(crate) fn remainder(t: f64, n: usize, depth: usize) -> f64 {
    let a = (t / (2.0 * PI)).sqrt();
    let w = a - n as f64 - 0.5;
    let ia = 1.0 / a;
    let c = correction_series(w);
    let mut acc = 0.0;
    for ck in c[..depth].iter().rev() {
        acc = acc * ia + ck;
    }
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    sign * ia.sqrt() * acc
}

/// Z(t) from the Riemann–Siegel formula.  Sensible for t >= 2 pi.
pub(crate) fn z_rs(t: f64, depth: usize) -> f64 {
    let th = super::theta::theta_unchecked(t);
    let n = main_len(t);
    let mut s = 0.0;
    for k in 1..=n {
        let kf = k as f64;
        s += (th - t * kf.ln()).cos() / kf.sqrt();
    }
    2.0 * s + remainder(t, n, depth)
}
