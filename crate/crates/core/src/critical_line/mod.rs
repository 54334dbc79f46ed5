//! Functions on the critical line: theta, Z, zeros, S(t) and pi(x).

mod constants;
pub mod hardy;
pub mod primes;
pub mod riemann_siegel;
pub mod theta;
pub(crate) mod zeta;
pub mod zeros;

pub use hardy::{abs_zeta, z, HardyZ, ZValue, DEFAULT_EM_BELOW, DEFAULT_RS_DEPTH};
pub use primes::{PrimeTable, DEFAULT_PRIME_LIMIT};
pub use theta::{theta, theta_prime, theta_series, ThetaValue, DEFAULT_THETA_TERMS};
pub use zeros::{find_zeros, next_zero, ZeroPair, ZeroTable};
