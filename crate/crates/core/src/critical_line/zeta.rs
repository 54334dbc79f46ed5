//! Euler–Maclaurin evaluation of zeta on the critical line.

use num_complex::Complex64;

use super::constants::BERNOULLI_OVER_FACT;

const EM_TERMS: usize = 26;

/// zeta(1/2 + it) for 0 <= t <= a few thousand.  Cost grows like t.
pub(crate) fn zeta_half(t: f64) -> Complex64 {
    let s = Complex64::new(0.5, t);
    let n = (t / 3.0).ceil() as usize + 30;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..n {
        let lk = (k as f64).ln();
        let (sn, cs) = (t * lk).sin_cos();
        sum += Complex64::new(cs, -sn) / (k as f64).sqrt();
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let (sn, cs) = (t * ln_n).sin_cos();
    // N^{-s}
    let n_s = Complex64::new(cs, -sn) / nf.sqrt();
    sum += n_s * nf / (s - 1.0) + 0.5 * n_s;
    // sum_k B_2k/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}
    let mut q = s * n_s / nf;
    for k in 1..=EM_TERMS {
        sum += q * BERNOULLI_OVER_FACT[k - 1];
        let j = (2 * k - 1) as f64;
        q *= (s + j) * (s + j + 1.0) / (nf * nf);
    }
    sum
}

/// Z(t) through Euler–Maclaurin; defined for all t >= 0.
pub(crate) fn z_em(t: f64) -> f64 {
    let th = super::theta::theta_loggamma(t);
    let (sn, cs) = th.sin_cos();
    let z = zeta_half(t);
    cs * z.re - sn * z.im
}
