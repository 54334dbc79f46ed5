//! Integrals of Z^2: the cumulative Hardy–Littlewood integral, the
//! exponentially weighted ladder integral, and composite integrals with a
//! ladder inside the integrand.

mod adaptive;
pub mod cache;
mod composite;
mod gauss;
pub mod grid;
pub(crate) mod kernel;

use std::f64::consts::PI;
use std::path::Path;
use std::sync::{RwLock, RwLockReadGuard};

use serde::Serialize;

pub use adaptive::adaptive_gl;
pub use cache::{cache_file_name, CacheFormat};
pub use composite::{integrate_composite, integrate_sin_substituted, EndpointSingularity, LadderMap, Weight};
pub use gauss::{gl15, GaussRule};
pub use grid::{Cell, CriticalSampleGrid, GridSpec, DEFAULT_OVERSAMPLE, PANELS_PER_CELL};

use crate::critical_line::HardyZ;
use crate::error::{domain, Result};
use grid::{neumaier, panel_integrals};
use kernel::z2_panels;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct IntegralResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

/// Largest exponent 2 s / x for which a cell is integrated from its moments.
const MOMENT_BETA: f64 = 0.01;

/// The default truncation parameter a in mu(x) = a x ln x.
pub const DEFAULT_A_PARAM: f64 = 7.0;

/// Shared access to a growing sample grid.
#[derive(Debug)]
pub struct Quadrature {
    grid: RwLock<CriticalSampleGrid>,
    hz: HardyZ,
    spec: GridSpec,
}

impl Quadrature {
    pub fn new(spec: GridSpec) -> Result<Self> {
        Ok(Self::from_grid(CriticalSampleGrid::new(spec)?))
    }

    pub fn from_grid(g: CriticalSampleGrid) -> Self {
        Quadrature {
            hz: *g.hz(),
            spec: *g.spec(),
            grid: RwLock::new(g),
        }
    }

    pub fn hz(&self) -> &HardyZ {
        &self.hz
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn grid(&self) -> RwLockReadGuard<'_, CriticalSampleGrid> {
        self.grid.read().unwrap()
    }

    pub fn t_end(&self) -> f64 {
        self.grid().t_end()
    }

    /// Extends the grid past t.  Returns true when it grew.
    pub fn ensure(&self, t: f64) -> bool {
        if self.grid().t_end() > t {
            return false;
        }
        let mut g = self.grid.write().unwrap();
        if g.t_end() > t {
            return false;
        }
        let target = t.max(g.t_end() * 1.05);
        g.extend_to(target);
        true
    }

    pub fn save(&self, path: &Path, fmt: CacheFormat) -> Result<()> {
        cache::save(&self.grid(), path, fmt)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(Self::from_grid(cache::load(path)?))
    }

    /// F(t) = int_0^t Z^2 with its error estimate.
    pub fn hl_cumulative_with_error(&self, t: f64) -> Result<IntegralResult> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(domain("hl_cumulative", t, "t >= 0"));
        }
        if t == 0.0 {
            return Ok(IntegralResult::default());
        }
        self.ensure(t);
        let g = self.grid();
        let i = g.cell_index(t);
        let c = g.cells[i];
        let prior_err: f64 = g.cells[..i].iter().map(|c| c.err).sum();
        let (inner, lo, partial_err) = self.cell_prefix(&g, i, t);
        let partial = gl15().integrate(lo, t, |u| self.hz.eval_sq(u));
        Ok(IntegralResult {
            value: c.cum + inner + partial,
            abs_error_estimate: prior_err + partial_err,
            evaluations: 15,
        })
    }

    /// Sum of the full panels of cell i to the left of t, and where they end.
    fn cell_prefix(&self, g: &CriticalSampleGrid, i: usize, t: f64) -> (f64, f64, f64) {
        let c = g.cells[i];
        let j = (((t - c.t0) / c.h).floor().max(0.0) as usize).min(PANELS_PER_CELL - 1);
        if j == 0 {
            return (0.0, c.t0, 0.0);
        }
        let vals = if i < g.kept_cells {
            panel_integrals(&g.cell_z2(i)[..j * 15], c.h)
        } else {
            panel_integrals(&z2_panels(&self.hz, c.t0, c.h, j), c.h)
        };
        (neumaier(vals.into_iter()), c.t0 + c.h * j as f64, c.err * j as f64 / 64.0)
    }

    /// F(t).
    pub fn hl_cumulative(&self, t: f64) -> Result<f64> {
        Ok(self.hl_cumulative_with_error(t)?.value)
    }

    /// F at the panel boundaries of the grid inside [a, b] (both kept as
    /// boundaries), relative to F(a).  Returns (boundaries, F - F(a)).
    pub(crate) fn panel_table(&self, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        self.ensure(b);
        let g = self.grid();
        let mut ts = vec![a];
        let mut fs = vec![0.0];
        let ia = g.cell_index(a);
        let ib = g.cell_index(b);
        let mut acc = 0.0;
        let mut comp = 0.0;
        let add = |x: f64, acc: &mut f64, comp: &mut f64| {
            let t = *acc + x;
            if acc.abs() >= x.abs() {
                *comp += (*acc - t) + x;
            } else {
                *comp += (x - t) + *acc;
            }
            *acc = t;
        };
        let mut last = a;
        for i in ia..=ib {
            let c = g.cells[i];
            let z2 = g.cell_z2(i);
            let pan = panel_integrals(&z2, c.h);
            for (j, p) in pan.iter().enumerate() {
                let lo = c.t0 + c.h * j as f64;
                let hi = if j + 1 == PANELS_PER_CELL {
                    c.end()
                } else {
                    c.t0 + c.h * (j + 1) as f64
                };
                if hi <= a || lo >= b {
                    continue;
                }
                let piece = if lo >= a && hi <= b {
                    *p
                } else {
                    let l = lo.max(a);
                    let r = hi.min(b);
                    gl15().integrate(l, r, |u| self.hz.eval_sq(u))
                };
                add(piece, &mut acc, &mut comp);
                let end = hi.min(b);
                if end > last {
                    ts.push(end);
                    fs.push(acc + comp);
                    last = end;
                }
            }
        }
        Ok((ts, fs))
    }

    /// int_a^b Z^2 to relative tolerance `tol`.
    pub fn integrate_z2(&self, a: f64, b: f64, tol: f64) -> Result<IntegralResult> {
        if !(a >= 0.0) || !(b >= a) || !b.is_finite() {
            return Err(domain("integrate_z2", a, "0 <= a <= b"));
        }
        if !(tol > 0.0) {
            return Err(domain("integrate_z2", tol, "tol > 0"));
        }
        if a == b {
            return Ok(IntegralResult::default());
        }
        let pw = self.spec.panel_width(b);
        let cell = PANELS_PER_CELL as f64 * pw;
        let scale = (b - a) * (b / (2.0 * PI)).ln().max(1.0);
        if b - a <= 2.0 * cell {
            let n = ((b - a) / pw).ceil() as usize;
            return adaptive_gl(|t| self.hz.eval_sq(t), a, b, n, tol * scale, 2000 * (n + 8));
        }
        let fb = self.hl_cumulative_with_error(b)?;
        let fa = self.hl_cumulative_with_error(a)?;
        let value = fb.value - fa.value;
        let err = fb.abs_error_estimate + fa.abs_error_estimate;
        if err <= tol * value.abs().max(1e-300) {
            return Ok(IntegralResult {
                value,
                abs_error_estimate: err,
                evaluations: fb.evaluations + fa.evaluations,
            });
        }
        let n = ((b - a) / pw).ceil() as usize;
        adaptive_gl(|t| self.hz.eval_sq(t), a, b, n, tol * scale, 1000 * n + 10_000)
    }

    /// J(x) = int_0^mu exp(-2t/x) Z^2 with mu = a x ln x.
    pub fn integrate_weighted(&self, x: f64, a_param: f64, tol: f64) -> Result<IntegralResult> {
        self.weighted_poly(x, [1.0, 0.0, 0.0], a_param, tol)
    }

    /// int_0^mu P(t) exp(-2t/x) Z^2 for a quadratic P (coefficients in t).
    /// Past the point where the remaining weight is below tol the integral
    /// stops early.
    pub fn weighted_poly(&self, x: f64, p: [f64; 3], a_param: f64, tol: f64) -> Result<IntegralResult> {
        if !(x >= 2.0) || !x.is_finite() {
            return Err(domain("integrate_weighted", x, "x >= 2"));
        }
        if !(a_param > 0.0) || !(tol > 0.0) {
            return Err(domain("integrate_weighted", a_param, "a_param > 0, tol > 0"));
        }
        let mu = a_param * x * x.ln();
        let pabs = |t: f64| p[0].abs() + p[1].abs() * t + p[2].abs() * t * t;
        let tail = |t: f64| {
            let l = (t / (2.0 * PI)).ln().max(1.0) + 2.0;
            0.5 * x * (-2.0 * t / x).exp() * pabs(t) * l * (1.0 + 2.0 * x / t)
        };
        self.ensure((15.0 * x).min(mu * 1.01));
        loop {
            let g = self.grid();
            let mut sum = 0.0;
            let mut comp = 0.0;
            let mut scale = 0.0;
            let mut err = 0.0;
            let mut evals = 0usize;
            let mut done = false;
            for (i, c) in g.cells.iter().enumerate() {
                let end = c.end();
                let piece = if end <= mu {
                    self.weighted_cell(&g, i, x, &p, &mut evals)
                } else {
                    done = true;
                    self.weighted_partial(&g, i, x, &p, mu, &mut evals)
                };
                let t = sum + piece.0;
                comp += if sum.abs() >= piece.0.abs() {
                    (sum - t) + piece.0
                } else {
                    (piece.0 - t) + sum
                };
                sum = t;
                scale += piece.1;
                err += piece.2;
                if done {
                    break;
                }
                if end > x && tail(end) <= tol * scale {
                    err += tail(end);
                    done = true;
                    break;
                }
            }
            if done {
                return Ok(IntegralResult {
                    value: sum + comp,
                    abs_error_estimate: err,
                    evaluations: evals,
                });
            }
            let t_end = g.t_end();
            drop(g);
            self.ensure(t_end * 1.25);
        }
    }

    /// (value, value with |P|, error) for a whole cell.
    fn weighted_cell(&self, g: &CriticalSampleGrid, i: usize, x: f64, p: &[f64; 3], evals: &mut usize) -> (f64, f64, f64) {
        let c = &g.cells[i];
        let ctr = c.centre();
        let s = c.half_width();
        let beta = 2.0 * s / x;
        let damp = (-2.0 * ctr / x).exp();
        let pa = |t: f64| p[0].abs() + p[1].abs() * t + p[2].abs() * t * t;
        let wmax = (-2.0 * c.t0 / x).exp() * pa(c.end());
        if damp == 0.0 {
            return (0.0, 0.0, 0.0);
        }
        if beta <= MOMENT_BETA {
            let q = [
                p[0] + p[1] * ctr + p[2] * ctr * ctr,
                s * (p[1] + 2.0 * p[2] * ctr),
                s * s * p[2],
            ];
            let mut total = 0.0;
            for (k, qk) in q.iter().enumerate() {
                if *qk == 0.0 {
                    continue;
                }
                let mut term = 1.0;
                let mut acc = 0.0;
                for j in 0..(grid::MOMENTS - k) {
                    acc += term * c.moments[k + j];
                    term *= -beta / (j + 1) as f64;
                }
                total += qk * acc;
            }
            let v = damp * total;
            let scale = damp * pa(ctr) * c.moments[0];
            let trunc = beta.powi(6) / 720.0 * scale;
            (v, scale, c.err * wmax + trunc)
        } else {
            let z2 = g.cell_z2(i);
            *evals += if i < g.kept_cells { 0 } else { z2.len() };
            let rule = gl15();
            let mut v = 0.0;
            let mut sc = 0.0;
            for j in 0..PANELS_PER_CELL {
                for k in 0..15 {
                    let t = kernel::node_t(c.t0, c.h, j, rule.nodes[k]);
                    let w = 0.5 * c.h * rule.weights[k] * z2[j * 15 + k] * (-2.0 * t / x).exp();
                    v += w * (p[0] + p[1] * t + p[2] * t * t);
                    sc += w * pa(t);
                }
            }
            (v, sc, c.err * wmax)
        }
    }

    /// Cell i cut at mu.
    fn weighted_partial(&self, g: &CriticalSampleGrid, i: usize, x: f64, p: &[f64; 3], mu: f64, evals: &mut usize) -> (f64, f64, f64) {
        let c = &g.cells[i];
        let rule = gl15();
        let f = |t: f64| (-2.0 * t / x).exp() * (p[0] + p[1] * t + p[2] * t * t);
        let fa = |t: f64| {
            (-2.0 * t / x).exp() * (p[0].abs() + p[1].abs() * t + p[2].abs() * t * t)
        };
        let jfull = (((mu - c.t0) / c.h).floor().max(0.0) as usize).min(PANELS_PER_CELL);
        let z2 = if jfull > 0 { g.cell_z2(i) } else { std::borrow::Cow::Owned(Vec::new()) };
        let mut v = 0.0;
        let mut sc = 0.0;
        for j in 0..jfull {
            for k in 0..15 {
                let t = kernel::node_t(c.t0, c.h, j, rule.nodes[k]);
                let w = 0.5 * c.h * rule.weights[k] * z2[j * 15 + k];
                v += w * f(t);
                sc += w * fa(t);
            }
        }
        let lo = c.t0 + c.h * jfull as f64;
        if mu > lo {
            v += rule.integrate(lo, mu, |t| f(t) * self.hz.eval_sq(t));
            sc += rule.integrate(lo, mu, |t| fa(t) * self.hz.eval_sq(t));
            *evals += 30;
        }
        (v, sc, c.err * fa(c.t0))
    }
}
