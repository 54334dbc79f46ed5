//! Globally adaptive Gauss–Legendre integration.

use std::collections::BinaryHeap;

use super::gauss::gl15;
use super::IntegralResult;
use crate::error::{Error, Result};

#[derive(Debug)]
struct Piece {
    err: f64,
    a: f64,
    b: f64,
    value: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&o.err)
    }
}

fn gl<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64, evals: &mut usize) -> Result<f64> {
    let rule = gl15();
    let c = 0.5 * (lo + hi);
    let r = 0.5 * (hi - lo);
    let mut s = 0.0;
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let t = c + r * x;
        let v = f(t);
        if !v.is_finite() {
            return Err(Error::SingularInterior { t });
        }
        s += w * v;
    }
    *evals += rule.len();
    Ok(s * r)
}

fn split<F: FnMut(f64) -> f64>(
    f: &mut F,
    lo: f64,
    hi: f64,
    whole: f64,
    evals: &mut usize,
) -> Result<(Piece, Piece)> {
    let m = 0.5 * (lo + hi);
    let l = gl(f, lo, m, evals)?;
    let r = gl(f, m, hi, evals)?;
    let e = 0.5 * (whole - l - r).abs();
    Ok((
        Piece {
            err: e,
            a: lo,
            b: m,
            value: l,
        },
        Piece {
            err: e,
            a: m,
            b: hi,
            value: r,
        },
    ))
}

/// Splits [a, b] into `initial` equal pieces, then bisects the piece with the
/// largest error until the total error is below `abs_tol`.  The error of a
/// piece is the difference between its GL15 value and that of its halves.
pub fn adaptive_gl<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    initial: usize,
    abs_tol: f64,
    max_evals: usize,
) -> Result<IntegralResult> {
    if a == b {
        return Ok(IntegralResult::default());
    }
    let mut evals = 0usize;
    let n = initial.max(1);
    let step = (b - a) / n as f64;
    let mut heap = BinaryHeap::with_capacity(2 * n);
    for i in 0..n {
        let lo = a + step * i as f64;
        let hi = if i + 1 == n { b } else { a + step * (i + 1) as f64 };
        let whole = gl(&mut f, lo, hi, &mut evals)?;
        let (l, r) = split(&mut f, lo, hi, whole, &mut evals)?;
        heap.push(l);
        heap.push(r);
    }
    loop {
        let total_err: f64 = heap.iter().map(|p| p.err).sum();
        if total_err <= abs_tol {
            let value = super::grid::neumaier(heap.iter().map(|p| p.value));
            return Ok(IntegralResult {
                value,
                abs_error_estimate: total_err,
                evaluations: evals,
            });
        }
        if evals >= max_evals {
            return Err(Error::TolUnreachable {
                a,
                b,
                tol: abs_tol,
                estimate: total_err,
                evaluations: evals,
            });
        }
        let worst = heap.pop().expect("nonempty");
        if worst.b - worst.a <= 4.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs()) {
            // cannot split further; accept it
            heap.push(Piece { err: 0.0, ..worst });
            continue;
        }
        let (l, r) = split(&mut f, worst.a, worst.b, worst.value, &mut evals)?;
        heap.push(l);
        heap.push(r);
    }
}
