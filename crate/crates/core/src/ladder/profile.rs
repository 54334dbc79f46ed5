//! phi1 on a window from exact solves at anchors.
//!
//! Between anchors phi is a cubic Hermite interpolant in the variable
//! F(t) - F(a), with end slopes dphi/dF = 1/Phi'(phi).  Since dF = Z^2 dt
//! this integrates dphi/dt = Z^2 / Phi'(phi) with Phi' interpolated, so the
//! profile is monotone wherever Z^2 >= 0 and exact at every anchor.

use std::io::Write;

use rayon::prelude::*;

use super::{Ladder, PhiDerivatives};
use crate::critical_line::HardyZ;
use crate::error::{domain, Error, Result};
use crate::quadrature::{gl15, GridSpec, LadderMap};

/// Largest relative deviation of the profile from a direct solve at the
/// midpoint of an anchor segment.
pub const MID_ANCHOR_LIMIT: f64 = 1e-5;

#[derive(Clone, Copy, Debug)]
struct Anchor {
    t: f64,
    /// F(t) - F(start)
    f: f64,
    phi: f64,
    d: PhiDerivatives,
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    m0: f64,
    a: f64,
    b: f64,
}

#[derive(Clone, Debug)]
pub struct Phi1Profile {
    start: f64,
    end: f64,
    ts: Vec<f64>,
    fs: Vec<f64>,
    anchors: Vec<Anchor>,
    segs: Vec<Segment>,
    hz: HardyZ,
    spec: GridSpec,
    max_mid_deviation: f64,
}

fn hermite(d: f64, dx: f64, m0: f64, m1: f64) -> Segment {
    Segment {
        m0,
        a: (3.0 * dx - d * (2.0 * m0 + m1)) / (d * d),
        b: (-2.0 * dx + d * (m0 + m1)) / (d * d * d),
    }
}

impl Segment {
    fn value(&self, s: f64) -> f64 {
        s * (self.m0 + s * (self.a + s * self.b))
    }
    fn slope(&self, s: f64) -> f64 {
        self.m0 + s * (2.0 * self.a + 3.0 * self.b * s)
    }
    /// value(s1) - value(s2) given ds = s1 - s2 accurately
    fn diff(&self, s1: f64, s2: f64, ds: f64) -> f64 {
        ds * (self.m0 + self.a * (s1 + s2) + self.b * (s1 * s1 + s1 * s2 + s2 * s2))
    }
}

impl Phi1Profile {
    pub(super) fn build(lad: &Ladder<'_>, start: f64, end: f64) -> Result<Self> {
        let quad = lad.lab().quad();
        let (ts, fs) = quad.panel_table(start, end)?;
        let hz = *quad.hz();
        let spec = *quad.spec();
        let spacing = lad.config().anchor_spacing;
        let n = ((end - start) / spacing).ceil().max(1.0) as usize;
        let at: Vec<f64> = (0..=n)
            .map(|i| if i == n { end } else { start + spacing * i as f64 })
            .collect();
        let mut p = Phi1Profile {
            start,
            end,
            ts,
            fs,
            anchors: Vec::new(),
            segs: Vec::new(),
            hz,
            spec,
            max_mid_deviation: 0.0,
        };
        let anchors: Result<Vec<Anchor>> = at
            .par_iter()
            .map(|&t| {
                let phi = lad.solve(t)?.phi;
                Ok(Anchor {
                    t,
                    f: p.rel_f(t),
                    phi,
                    d: lad.derivatives(phi)?,
                })
            })
            .collect();
        p.anchors = anchors?;
        p.anchors[0].f = 0.0;
        for w in p.anchors.windows(2) {
            let d = w[1].f - w[0].f;
            let dx = w[1].phi - w[0].phi;
            p.segs.push(hermite(d, dx, 1.0 / w[0].d.phi_prime, 1.0 / w[1].d.phi_prime));
        }
        // monotonicity of each cubic on [0, D]
        for (i, (s, w)) in p.segs.iter().zip(p.anchors.windows(2)).enumerate() {
            let d = w[1].f - w[0].f;
            let lo = s.slope(0.0).min(s.slope(d)).min(s.slope(0.5 * d));
            if !(lo > 0.0) {
                return Err(Error::ProfileDeviation {
                    t: p.anchors[i].t,
                    deviation: lo,
                    limit: 0.0,
                });
            }
        }
        let mids: Vec<f64> = p.anchors.windows(2).map(|w| 0.5 * (w[0].t + w[1].t)).collect();
        let devs: Result<Vec<(f64, f64)>> = mids
            .par_iter()
            .map(|&t| {
                let direct = lad.solve(t)?.phi;
                Ok((t, (p.phi(t) - direct).abs() / direct))
            })
            .collect();
        for (t, dev) in devs? {
            if dev > MID_ANCHOR_LIMIT {
                return Err(Error::ProfileDeviation {
                    t,
                    deviation: dev,
                    limit: MID_ANCHOR_LIMIT,
                });
            }
            p.max_mid_deviation = p.max_mid_deviation.max(dev);
        }
        Ok(p)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn max_mid_deviation(&self) -> f64 {
        self.max_mid_deviation
    }

    pub fn anchor_count(&self) -> usize {
        self.anchors.len()
    }

    fn check(&self, t: f64) -> f64 {
        debug_assert!(t >= self.start - 1e-9 * self.start && t <= self.end * (1.0 + 1e-12));
        t.clamp(self.start, self.end)
    }

    /// F(t) - F(start).
    pub fn rel_f(&self, t: f64) -> f64 {
        let t = self.check(t);
        let i = self.ts.partition_point(|&b| b <= t).saturating_sub(1);
        let lo = self.ts[i];
        if t == lo {
            return self.fs[i];
        }
        self.fs[i] + gl15().integrate(lo, t, |u| self.hz.eval_sq(u))
    }

    fn segment(&self, t: f64) -> usize {
        let i = self.anchors.partition_point(|a| a.t <= t);
        i.saturating_sub(1).min(self.segs.len() - 1)
    }

    /// phi(t) = 2 phi1(t).
    pub fn phi(&self, t: f64) -> f64 {
        let t = self.check(t);
        let i = self.segment(t);
        let a = &self.anchors[i];
        a.phi + self.segs[i].value(self.rel_f(t) - a.f)
    }

    pub fn phi1(&self, t: f64) -> f64 {
        0.5 * self.phi(t)
    }

    /// phi1(t1) - phi1(t2), accurate even when t1 - t2 is tiny.
    pub fn phi1_delta(&self, t1: f64, t2: f64) -> f64 {
        let (t1, t2) = (self.check(t1), self.check(t2));
        let i = self.segment(t1);
        if i != self.segment(t2) || (t1 - t2).abs() > 4.0 * self.spec.panel_width(t1) {
            return self.phi1(t1) - self.phi1(t2);
        }
        let a = &self.anchors[i];
        let (lo, hi) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
        // half-panel GL15 pieces are exact to rounding for Z^2
        let pw = self.spec.panel_width(hi);
        let n = ((hi - lo) / (0.5 * pw)).ceil().max(1.0) as usize;
        let w = (hi - lo) / n as f64;
        let mut ds: f64 = (0..n)
            .map(|k| {
                let a = lo + w * k as f64;
                let b = if k + 1 == n { hi } else { a + w };
                gl15().integrate(a, b, |u| self.hz.eval_sq(u))
            })
            .sum();
        if t1 < t2 {
            ds = -ds;
        }
        let s1 = self.rel_f(t1) - a.f;
        let s2 = s1 - ds;
        0.5 * self.segs[i].diff(s1, s2, ds)
    }

    /// Phi'(x) interpolated through the anchors (values and slopes Phi'').
    pub fn phi_prime_at(&self, x: f64) -> f64 {
        let i = self
            .anchors
            .partition_point(|a| a.phi <= x)
            .saturating_sub(1)
            .min(self.anchors.len() - 2);
        let (p, q) = (&self.anchors[i], &self.anchors[i + 1]);
        let h = q.phi - p.phi;
        let u = (x - p.phi) / h;
        let h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
        let h10 = u * (1.0 - u) * (1.0 - u);
        let h01 = u * u * (3.0 - 2.0 * u);
        let h11 = u * u * (u - 1.0);
        h00 * p.d.phi_prime + h10 * h * p.d.phi_second + h01 * q.d.phi_prime + h11 * h * q.d.phi_second
    }

    /// t in the window with phi1(t) = y.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        let x = 2.0 * y;
        let first = self.anchors[0].phi;
        let last = self.anchors[self.anchors.len() - 1].phi;
        if !(x >= first && x <= last) {
            return Err(domain("phi1_inverse", y, "inside the profile image"));
        }
        let i = self
            .anchors
            .partition_point(|a| a.phi <= x)
            .saturating_sub(1)
            .min(self.segs.len() - 1);
        let (a, b) = (&self.anchors[i], &self.anchors[i + 1]);
        let seg = self.segs[i];
        let d = b.f - a.f;
        // s in [0, d] with seg.value(s) = x - a.phi
        let target = x - a.phi;
        let (mut lo, mut hi) = (0.0, d);
        let mut s = d * target / (b.phi - a.phi).max(f64::MIN_POSITIVE);
        for _ in 0..100 {
            let r = seg.value(s) - target;
            if r > 0.0 {
                hi = s;
            } else {
                lo = s;
            }
            let step = r / seg.slope(s);
            let next = s - step;
            s = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
            if (hi - lo) <= 1e-15 * d.max(1.0) || step.abs() <= 1e-16 * d.max(1.0) {
                break;
            }
        }
        self.t_of_rel_f(a.f + s)
    }

    /// t with F(t) - F(start) = v.
    fn t_of_rel_f(&self, v: f64) -> Result<f64> {
        let j = self.fs.partition_point(|&f| f <= v).saturating_sub(1).min(self.ts.len() - 2);
        let (mut lo, mut hi) = (self.ts[j], self.ts[j + 1]);
        let mut t = lo + (hi - lo) * (v - self.fs[j]) / (self.fs[j + 1] - self.fs[j]).max(f64::MIN_POSITIVE);
        for _ in 0..200 {
            let r = self.rel_f(t) - v;
            if r > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let z2 = self.hz.eval_sq(t);
            let next = if z2 > 0.0 { t - r / z2 } else { f64::NAN };
            let nt = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
            if (nt - t).abs() <= 1e-15 * t || hi - lo <= 4.0 * f64::EPSILON * t {
                return Ok(nt);
            }
            t = nt;
        }
        Ok(t)
    }

    /// Writes `t,phi1` at n + 1 equally spaced points.
    pub fn dump_csv<W: Write>(&self, w: &mut W, n: usize) -> Result<()> {
        writeln!(w, "t,phi1")?;
        for i in 0..=n {
            let t = self.start + (self.end - self.start) * i as f64 / n.max(1) as f64;
            writeln!(w, "{},{}", crate::fmt_sig(t), crate::fmt_sig(self.phi1(t)))?;
        }
        Ok(())
    }
}

impl LadderMap for Phi1Profile {
    fn phi1(&self, t: f64) -> f64 {
        Phi1Profile::phi1(self, t)
    }
    fn ztilde2(&self, t: f64) -> f64 {
        let x = self.phi(t);
        self.hz.eval_sq(t) / (2.0 * self.phi_prime_at(x))
    }
    fn z2(&self, t: f64) -> f64 {
        self.hz.eval_sq(t)
    }
    fn panel_width(&self, t: f64) -> f64 {
        self.spec.panel_width(t)
    }
}
