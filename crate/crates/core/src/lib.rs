//! Numerical laboratory for ladder solutions phi(T) of
//! int_0^mu exp(-2t/phi) Z^2(t) dt = int_0^T Z^2(t) dt and the asymptotic
//! statements built on them.

// !(x >= a) is used on purpose so that NaN lands in the error branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod critical_line;
pub mod error;
pub mod geometry;
pub mod lab;
pub mod ladder;
pub mod quadrature;
pub mod verify;

pub use error::{Error, Result};
pub use lab::Lab;

/// x rounded to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// x with 12 significant digits, shortest form.
pub fn fmt_sig(x: f64) -> String {
    format!("{}", round_sig(x))
}
