//! Ladder solutions phi(T) of J(phi) = F(T), with
//! J(x) = int_0^{a x ln x} exp(-2t/x) Z^2(t) dt and F(T) = int_0^T Z^2.

mod profile;

use std::collections::HashMap;
use std::sync::Mutex;

use serde::Serialize;

pub use profile::Phi1Profile;

use crate::error::{domain, Error, Result};
use crate::lab::Lab;

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Smallest T the solver accepts.
pub const SOLVE_MIN_T: f64 = 1e3;

const PROBES: usize = 16;
const BRACKET_HI: f64 = 2.2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LadderConfig {
    pub a_param: f64,
    pub epsilon: f64,
    pub tol_residual: f64,
    pub anchor_spacing: f64,
}

impl Default for LadderConfig {
    fn default() -> Self {
        LadderConfig {
            a_param: 7.0,
            epsilon: 0.01,
            tol_residual: 1e-8,
            anchor_spacing: 50.0,
        }
    }
}

impl LadderConfig {
    pub fn validate(&self) -> Result<()> {
        if !(7.0..=8.0).contains(&self.a_param) {
            return Err(Error::Config(format!("a_param must lie in [7, 8], got {}", self.a_param)));
        }
        if !(self.epsilon > 0.0) || self.epsilon >= 0.1 {
            return Err(Error::Config(format!("epsilon must lie in (0, 0.1), got {}", self.epsilon)));
        }
        if !(self.tol_residual > 0.0) || self.tol_residual > 1e-3 {
            return Err(Error::Config(format!(
                "tol_residual must lie in (0, 1e-3], got {}",
                self.tol_residual
            )));
        }
        if !(self.anchor_spacing > 0.0) {
            return Err(Error::Config("anchor_spacing must be positive".into()));
        }
        Ok(())
    }

    /// U0 = T^(1/3 + 2 eps)
    pub fn u0(&self, t: f64) -> f64 {
        t.powf(1.0 / 3.0 + 2.0 * self.epsilon)
    }

    /// U1 = T^(7/8 + 2 eps)
    pub fn u1(&self, t: f64) -> f64 {
        t.powf(7.0 / 8.0 + 2.0 * self.epsilon)
    }

    /// U2 = T^(1/2 + eps)
    pub fn u2(&self, t: f64) -> f64 {
        t.powf(0.5 + self.epsilon)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LadderPoint {
    #[serde(rename = "T")]
    pub t: f64,
    pub phi: f64,
    pub residual: f64,
    pub a_param: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhiDerivatives {
    pub phi_at: f64,
    pub phi_prime: f64,
    pub phi_second: f64,
}

/// g(t) = t (t/phi - 1) exp(-2t/phi) on [0, a phi ln phi].
pub fn g_weight(t: f64, phi: f64, a_param: f64) -> Result<f64> {
    if !(phi > 1.0) {
        return Err(domain("g_weight", phi, "phi > 1"));
    }
    let mu = a_param * phi * phi.ln();
    if !(0.0..=mu).contains(&t) {
        return Err(domain("g_weight", t, "0 <= t <= mu(phi)"));
    }
    Ok(t * (t / phi - 1.0) * (-2.0 * t / phi).exp())
}

/// The ladder for one configuration, memoising solves.
#[derive(Debug)]
pub struct Ladder<'a> {
    lab: &'a Lab,
    cfg: LadderConfig,
    memo: Mutex<HashMap<u64, LadderPoint>>,
}

impl<'a> Ladder<'a> {
    pub fn new(lab: &'a Lab, cfg: LadderConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Ladder {
            lab,
            cfg,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn lab(&self) -> &'a Lab {
        self.lab
    }

    pub fn config(&self) -> &LadderConfig {
        &self.cfg
    }

    fn j_tol(&self) -> f64 {
        (1e-3 * self.cfg.tol_residual).min(1e-12)
    }

    /// J(x) for the configured a.
    pub fn j(&self, x: f64) -> Result<f64> {
        Ok(self
            .lab
            .quad()
            .integrate_weighted(x, self.cfg.a_param, self.j_tol())?
            .value)
    }

    /// Solves J(x) = F(T).
    pub fn solve(&self, t: f64) -> Result<LadderPoint> {
        if !(t >= SOLVE_MIN_T) || !t.is_finite() {
            return Err(domain("solve_ladder", t, "T >= 1e3"));
        }
        if let Some(p) = self.memo.lock().unwrap().get(&t.to_bits()) {
            return Ok(*p);
        }
        let p = self.solve_uncached(t)?;
        self.memo.lock().unwrap().insert(t.to_bits(), p);
        Ok(p)
    }

    fn solve_uncached(&self, t: f64) -> Result<LadderPoint> {
        let ft = self.lab.quad().hl_cumulative(t)?;
        let g = |x: f64| -> Result<f64> { Ok(self.j(x)? - ft) };

        let mut lo = t;
        let mut hi = BRACKET_HI * t;
        let mut g_lo = g(lo)?;
        let mut g_hi = g(hi)?;
        for _ in 0..30 {
            if g_lo <= 0.0 {
                break;
            }
            hi = lo;
            g_hi = g_lo;
            lo /= 1.25;
            g_lo = g(lo)?;
        }
        for _ in 0..30 {
            if g_hi > 0.0 {
                break;
            }
            lo = hi;
            g_lo = g_hi;
            hi *= 1.25;
            g_hi = g(hi)?;
        }
        if !(g_lo <= 0.0 && g_hi > 0.0) {
            return Err(Error::Bracket {
                t,
                lo,
                hi,
                g_lo,
                g_hi,
            });
        }

        // monotonicity probe across the bracket
        let mut xs = Vec::with_capacity(PROBES);
        let mut gs = Vec::with_capacity(PROBES);
        for i in 0..PROBES {
            let x = lo + (hi - lo) * i as f64 / (PROBES - 1) as f64;
            let v = if i == 0 {
                g_lo
            } else if i == PROBES - 1 {
                g_hi
            } else {
                g(x)?
            };
            if let Some(&prev) = gs.last() {
                if !(v > prev) {
                    return Err(Error::NonMonotone {
                        t,
                        x0: *xs.last().unwrap(),
                        x1: x,
                    });
                }
            }
            xs.push(x);
            gs.push(v);
        }
        let k = gs.iter().position(|&v| v > 0.0).expect("bracket has a positive end");
        let (mut a, mut fa, mut b, mut fb) = (xs[k - 1], gs[k - 1], xs[k], gs[k]);

        // Illinois regula falsi
        let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
        let mut side = 0i8;
        for _ in 0..200 {
            if fa == 0.0 {
                best = (a, 0.0);
                break;
            }
            let mut x = (a * fb - b * fa) / (fb - fa);
            if !(x > a && x < b) {
                x = 0.5 * (a + b);
            }
            if x <= a || x >= b {
                break;
            }
            let fx = g(x)?;
            if fx.abs() < best.1.abs() {
                best = (x, fx);
            }
            if fx == 0.0 {
                break;
            }
            if fx < 0.0 {
                a = x;
                fa = fx;
                if side == -1 {
                    fb *= 0.5;
                }
                side = -1;
            } else {
                b = x;
                fb = fx;
                if side == 1 {
                    fa *= 0.5;
                }
                side = 1;
            }
            if b - a <= 4.0 * f64::EPSILON * b {
                break;
            }
        }
        let residual = best.1.abs() / ft;
        if residual > self.cfg.tol_residual {
            return Err(Error::Residual {
                t,
                residual,
                limit: self.cfg.tol_residual,
            });
        }
        Ok(LadderPoint {
            t,
            phi: best.0,
            residual,
            a_param: self.cfg.a_param,
        })
    }

    /// phi1(T) = phi(T) / 2.
    pub fn phi1(&self, t: f64) -> Result<f64> {
        Ok(0.5 * self.solve(t)?.phi)
    }

    /// t with phi1(t) = y: solves F(t) = J(2y) for t.
    pub fn phi1_inverse(&self, y: f64) -> Result<f64> {
        if !(y >= SOLVE_MIN_T) || !y.is_finite() {
            return Err(domain("phi1_inverse", y, "y >= 1e3"));
        }
        let target = self.j(2.0 * y)?;
        let q = self.lab.quad();
        let f = |t: f64| -> Result<f64> { Ok(q.hl_cumulative(t)? - target) };
        let gap = 2.0 * (1.0 - EULER_GAMMA) * self.lab.primes().prime_pi(2.0 * y)? as f64;
        let mut lo = y;
        let mut hi = y + gap.max(1.0);
        let mut f_lo = f(lo)?;
        let mut f_hi = f(hi)?;
        for _ in 0..30 {
            if f_lo <= 0.0 {
                break;
            }
            hi = lo;
            f_hi = f_lo;
            lo -= gap.max(1.0);
            f_lo = f(lo)?;
        }
        for _ in 0..30 {
            if f_hi >= 0.0 {
                break;
            }
            lo = hi;
            f_lo = f_hi;
            hi += gap.max(1.0);
            f_hi = f(hi)?;
        }
        if !(f_lo <= 0.0 && f_hi >= 0.0) {
            return Err(Error::Bracket {
                t: y,
                lo,
                hi,
                g_lo: f_lo,
                g_hi: f_hi,
            });
        }
        // bisection, with a secant step whenever it stays inside
        let (mut a, mut fa, mut b, mut fb) = (lo, f_lo, hi, f_hi);
        for i in 0..200 {
            if b - a <= 1e-12 * b {
                break;
            }
            let sec = a - fa * (b - a) / (fb - fa);
            let x = if i % 2 == 0 && sec > a && sec < b { sec } else { 0.5 * (a + b) };
            let fx = f(x)?;
            if fx == 0.0 {
                return Ok(x);
            }
            if fx < 0.0 {
                a = x;
                fa = fx;
            } else {
                b = x;
                fb = fx;
            }
        }
        Ok(if fa.abs() < fb.abs() { a } else { b })
    }

    fn mu(&self, phi: f64) -> (f64, f64, f64) {
        let a = self.cfg.a_param;
        (a * phi * phi.ln(), a * (phi.ln() + 1.0), a / phi)
    }

    /// Both terms of Phi'(phi): the integral and the boundary term.
    pub fn phi_prime_parts(&self, phi: f64) -> Result<(f64, f64)> {
        if !(phi >= SOLVE_MIN_T) || !phi.is_finite() {
            return Err(domain("phi_prime", phi, "phi >= 1e3"));
        }
        let q = self.lab.quad();
        let first = 2.0 / (phi * phi)
            * q.weighted_poly(phi, [0.0, 1.0, 0.0], self.cfg.a_param, self.j_tol())?.value;
        let (mu, dmu, _) = self.mu(phi);
        let damp = (-2.0 * self.cfg.a_param * phi.ln()).exp();
        let second = self.lab.hz().eval_sq(mu) * damp * dmu;
        Ok((first, second))
    }

    pub fn phi_prime(&self, phi: f64) -> Result<f64> {
        let (a, b) = self.phi_prime_parts(phi)?;
        Ok(a + b)
    }

    /// The boundary contribution Q[phi] to Phi''.
    pub fn q_term(&self, phi: f64) -> Result<f64> {
        if !(phi >= SOLVE_MIN_T) || !phi.is_finite() {
            return Err(domain("phi_second", phi, "phi >= 1e3"));
        }
        let hz = self.lab.hz();
        let (mu, m1, m2) = self.mu(phi);
        let z = hz.eval(mu);
        let h = 1e-4;
        let zp = (hz.eval(mu + h) - hz.eval(mu - h)) / (2.0 * h);
        let z2 = z * z;
        let damp = (-2.0 * self.cfg.a_param * phi.ln()).exp();
        Ok(damp
            * (4.0 / (phi * phi) * z2 * mu * m1 - 2.0 / phi * z2 * m1 * m1
                + 2.0 * z * zp * m1 * m1
                + z2 * m2))
    }

    pub fn phi_second(&self, phi: f64) -> Result<f64> {
        let q = self.q_term(phi)?;
        let p3 = phi * phi * phi;
        let main = self
            .lab
            .quad()
            .weighted_poly(phi, [0.0, -4.0 / p3, 4.0 / (p3 * phi)], self.cfg.a_param, self.j_tol())?
            .value;
        Ok(main + q)
    }

    pub fn derivatives(&self, phi: f64) -> Result<PhiDerivatives> {
        Ok(PhiDerivatives {
            phi_at: phi,
            phi_prime: self.phi_prime(phi)?,
            phi_second: self.phi_second(phi)?,
        })
    }

    /// Z~^2(t) = Z^2(t) / (2 Phi'(phi(t))) from a direct solve at t.
    pub fn ztilde2(&self, t: f64) -> Result<f64> {
        let phi = self.solve(t)?.phi;
        Ok(self.lab.hz().eval_sq(t) / (2.0 * self.phi_prime(phi)?))
    }

    /// Interpolated phi1 on [T, T+U], U <= T / ln T.
    pub fn profile(&self, t: f64, u: f64) -> Result<Phi1Profile> {
        if !(u > 0.0) || u > t / t.ln() {
            return Err(domain("phi1_profile", u, "0 < U <= T / ln T"));
        }
        Phi1Profile::build(self, t, t + u)
    }

    /// Profile on an arbitrary window; used where a formula's own window
    /// exceeds T / ln T at desk scale.
    pub fn profile_on(&self, a: f64, b: f64) -> Result<Phi1Profile> {
        if !(b > a) || !(a >= SOLVE_MIN_T) {
            return Err(domain("phi1_profile", a, "1e3 <= a < b"));
        }
        Phi1Profile::build(self, a, b)
    }

    /// (1 - c) pi(T), the predicted gap T - phi1(T).
    pub fn gap_prediction(&self, t: f64) -> Result<f64> {
        Ok((1.0 - EULER_GAMMA) * self.lab.primes().prime_pi(t)? as f64)
    }
}

/// ln ln T / ln T
pub fn eps_hat(t: f64) -> f64 {
    t.ln().ln() / t.ln()
}
