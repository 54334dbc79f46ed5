//! Z^2 at the Gauss nodes of a run of equal panels.
//!
//! Above the Euler–Maclaurin range the main sum is advanced from node to node
//! by multiplying each term by a tabulated unit rotation, so the transcendental
//! work per node is only theta and the remainder.

use super::gauss::gl15;
use crate::critical_line::riemann_siegel::{main_len, remainder};
use crate::critical_line::theta::theta_unchecked;
use crate::critical_line::HardyZ;

pub const NODES: usize = 15;

const LANES: usize = 16;
/// Distinct node-to-node steps: the GL15 gaps are symmetric.
const STEPS: usize = 8;

/// Abscissa of node k of panel j; every consumer goes through this.
#[inline]
pub(crate) fn node_t(t0: f64, h: f64, j: usize, x: f64) -> f64 {
    t0 + h * (j as f64 + 0.5) + 0.5 * h * x
}

/// Z^2 at all nodes of `panels` panels [t0 + j h, t0 + (j+1) h], panel-major.
pub(crate) fn z2_panels(hz: &HardyZ, t0: f64, h: f64, panels: usize) -> Vec<f64> {
    let rule = gl15();
    let mut out = Vec::with_capacity(panels * NODES);
    if panels == 0 {
        return out;
    }
    if t0 < hz.em_below() {
        for j in 0..panels {
            for &x in &rule.nodes {
                out.push(hz.eval_sq(node_t(t0, h, j, x)));
            }
        }
        return out;
    }
    let depth = hz.rs_depth();
    let xs = &rule.nodes;
    let t_last = node_t(t0, h, panels - 1, xs[NODES - 1]);
    let nmax = main_len(t_last);

    let mut steps = [0.0; STEPS];
    steps[0] = h + 0.5 * h * (xs[0] - xs[NODES - 1]);
    for k in 1..STEPS {
        steps[k] = 0.5 * h * (xs[k] - xs[k - 1]);
    }
    let logs: Vec<f64> = (1..=nmax).map(|n| (n as f64).ln()).collect();
    let mut cr = vec![0.0; STEPS * nmax];
    let mut ci = vec![0.0; STEPS * nmax];
    for k in 0..STEPS {
        for (n, l) in logs.iter().enumerate() {
            let (s, c) = (steps[k] * l).sin_cos();
            cr[k * nmax + n] = c;
            ci[k * nmax + n] = s;
        }
    }

    let mut re: Vec<f64> = Vec::with_capacity(nmax);
    let mut im: Vec<f64> = Vec::with_capacity(nmax);
    let seed = |t: f64, n: usize, re: &mut Vec<f64>, im: &mut Vec<f64>| {
        let l = logs[n - 1];
        let (s, c) = (t * l).sin_cos();
        let a = 1.0 / (n as f64).sqrt();
        re.push(a * c);
        im.push(-a * s);
    };

    for j in 0..panels {
        for (k, &x) in xs.iter().enumerate() {
            let t = node_t(t0, h, j, x);
            let (mut sr, mut si) = if re.is_empty() {
                for n in 1..=main_len(t) {
                    seed(t, n, &mut re, &mut im);
                }
                (re.iter().sum(), im.iter().sum())
            } else {
                let m = re.len();
                let r = if k < STEPS { k } else { NODES - k };
                rotate_sum(&mut re, &mut im, &cr[r * nmax..r * nmax + m], &ci[r * nmax..r * nmax + m])
            };
            let n_here = main_len(t);
            while re.len() < n_here {
                let n = re.len() + 1;
                seed(t, n, &mut re, &mut im);
                sr += re[n - 1];
                si += im[n - 1];
            }
            let (s, c) = theta_unchecked(t).sin_cos();
            let z = 2.0 * (c * sr - s * si) + remainder(t, n_here, depth);
            out.push(z * z);
        }
    }
    out
}

/// p <- p * exp(-i d ln n) for every term, returning the new sum.
#[inline]
fn rotate_sum(re: &mut [f64], im: &mut [f64], cr: &[f64], ci: &[f64]) -> (f64, f64) {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("avx512f") {
            // SAFETY: the feature was detected at run time.
            return unsafe { rotate_sum_avx512(re, im, cr, ci) };
        }
    }
    rotate_sum_portable(re, im, cr, ci)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx512f")]
unsafe fn rotate_sum_avx512(re: &mut [f64], im: &mut [f64], cr: &[f64], ci: &[f64]) -> (f64, f64) {
    use std::arch::x86_64::*;
    let n = re.len();
    assert!(im.len() == n && cr.len() >= n && ci.len() >= n);
    let full = n - n % 16;
    let (pr, pi, pc, ps) = (re.as_mut_ptr(), im.as_mut_ptr(), cr.as_ptr(), ci.as_ptr());
    let mut ar0 = _mm512_setzero_pd();
    let mut ar1 = _mm512_setzero_pd();
    let mut ai0 = _mm512_setzero_pd();
    let mut ai1 = _mm512_setzero_pd();
    let mut i = 0;
    while i < full {
        let r0 = _mm512_loadu_pd(pr.add(i));
        let r1 = _mm512_loadu_pd(pr.add(i + 8));
        let m0 = _mm512_loadu_pd(pi.add(i));
        let m1 = _mm512_loadu_pd(pi.add(i + 8));
        let c0 = _mm512_loadu_pd(pc.add(i));
        let c1 = _mm512_loadu_pd(pc.add(i + 8));
        let s0 = _mm512_loadu_pd(ps.add(i));
        let s1 = _mm512_loadu_pd(ps.add(i + 8));
        let nr0 = _mm512_fmadd_pd(r0, c0, _mm512_mul_pd(m0, s0));
        let nr1 = _mm512_fmadd_pd(r1, c1, _mm512_mul_pd(m1, s1));
        let ni0 = _mm512_fmsub_pd(m0, c0, _mm512_mul_pd(r0, s0));
        let ni1 = _mm512_fmsub_pd(m1, c1, _mm512_mul_pd(r1, s1));
        _mm512_storeu_pd(pr.add(i), nr0);
        _mm512_storeu_pd(pr.add(i + 8), nr1);
        _mm512_storeu_pd(pi.add(i), ni0);
        _mm512_storeu_pd(pi.add(i + 8), ni1);
        ar0 = _mm512_add_pd(ar0, nr0);
        ar1 = _mm512_add_pd(ar1, nr1);
        ai0 = _mm512_add_pd(ai0, ni0);
        ai1 = _mm512_add_pd(ai1, ni1);
        i += 16;
    }
    let mut sr = _mm512_reduce_add_pd(_mm512_add_pd(ar0, ar1));
    let mut si = _mm512_reduce_add_pd(_mm512_add_pd(ai0, ai1));
    for k in full..n {
        let (r, m, c, s) = (re[k], im[k], cr[k], ci[k]);
        let nr = r.mul_add(c, m * s);
        let ni = m.mul_add(c, -(r * s));
        re[k] = nr;
        im[k] = ni;
        sr += nr;
        si += ni;
    }
    (sr, si)
}

fn rotate_sum_portable(re: &mut [f64], im: &mut [f64], cr: &[f64], ci: &[f64]) -> (f64, f64) {
    let mut ar = [0.0; LANES];
    let mut ai = [0.0; LANES];
    let n = re.len();
    let full = n - n % LANES;
    {
        let (re_h, re_t) = re.split_at_mut(full);
        let (im_h, im_t) = im.split_at_mut(full);
        for (((r8, i8), c8), s8) in re_h
            .chunks_exact_mut(LANES)
            .zip(im_h.chunks_exact_mut(LANES))
            .zip(cr[..full].chunks_exact(LANES))
            .zip(ci[..full].chunks_exact(LANES))
        {
            for l in 0..LANES {
                let r = r8[l] * c8[l] + i8[l] * s8[l];
                let i = i8[l] * c8[l] - r8[l] * s8[l];
                r8[l] = r;
                i8[l] = i;
                ar[l] += r;
                ai[l] += i;
            }
        }
        for (l, (r, i)) in re_t.iter_mut().zip(im_t.iter_mut()).enumerate() {
            let c = cr[full + l];
            let s = ci[full + l];
            let nr = *r * c + *i * s;
            let ni = *i * c - *r * s;
            *r = nr;
            *i = ni;
            ar[l] += nr;
            ai[l] += ni;
        }
    }
    (ar.iter().sum(), ai.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_matches_direct_evaluation() {
        let hz = HardyZ::default();
        for &(t0, h) in &[(1000.0, 0.9), (52_000.0, 0.7), (3.3e5, 0.55)] {
            let v = z2_panels(&hz, t0, h, 64);
            let xs = &gl15().nodes;
            let mut worst: f64 = 0.0;
            for j in 0..64 {
                for k in 0..NODES {
                    let t = node_t(t0, h, j, xs[k]);
                    let d = hz.eval_sq(t);
                    worst = worst.max((v[j * NODES + k] - d).abs() / d.max(1.0));
                }
            }
            // both paths carry ~1e-10 rad of phase rounding at this height
            assert!(worst < 1e-8, "t0={t0}: {worst}");
        }
    }

    #[test]
    fn crosses_main_sum_length_change() {
        // N(t) steps from 12 to 13 at t = 2 pi 169
        let hz = HardyZ::default();
        let t0 = 2.0 * std::f64::consts::PI * 169.0 - 10.0;
        let v = z2_panels(&hz, t0, 1.0, 20);
        let xs = &gl15().nodes;
        for j in 0..20 {
            for k in 0..NODES {
                let d = hz.eval_sq(node_t(t0, 1.0, j, xs[k]));
                assert!((v[j * NODES + k] - d).abs() < 1e-9 * d.max(1.0));
            }
        }
    }
}
