//! Hardy's Z function and |zeta| on the critical line.

use serde::Serialize;

use super::riemann_siegel::{z_rs, MAX_RS_DEPTH};
use super::zeta::z_em;
use crate::error::{domain, Error, Result};

/// Riemann–Siegel is used from here on; Euler–Maclaurin below.
pub const DEFAULT_EM_BELOW: f64 = 400.0;
pub const DEFAULT_RS_DEPTH: usize = MAX_RS_DEPTH;
/// Smallest argument accepted by the checked entry points.
pub const Z_MIN_T: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZValue {
    pub t: f64,
    pub z: f64,
}

/// Evaluator for Z(t), t >= 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HardyZ {
    rs_depth: usize,
    em_below: f64,
}

impl Default for HardyZ {
    fn default() -> Self {
        HardyZ {
            rs_depth: DEFAULT_RS_DEPTH,
            em_below: DEFAULT_EM_BELOW,
        }
    }
}

impl HardyZ {
    /// `rs_depth` correction terms C0..C(depth-1); Euler–Maclaurin below `em_below`.
    pub fn new(rs_depth: usize, em_below: f64) -> Result<Self> {
        if rs_depth == 0 || rs_depth > MAX_RS_DEPTH {
            return Err(Error::Config(format!(
                "rs_depth must be in 1..={MAX_RS_DEPTH}, got {rs_depth}"
            )));
        }
        if !(em_below >= 2.0 * std::f64::consts::PI) || em_below > 5e4 {
            return Err(Error::Config(format!(
                "em_below must lie in [2 pi, 5e4], got {em_below}"
            )));
        }
        Ok(HardyZ { rs_depth, em_below })
    }

    pub fn rs_depth(&self) -> usize {
        self.rs_depth
    }

    pub fn em_below(&self) -> f64 {
        self.em_below
    }

    /// Z(t) without argument checks.
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        if t < self.em_below {
            z_em(t)
        } else {
            z_rs(t, self.rs_depth)
        }
    }

    #[inline]
    pub fn eval_sq(&self, t: f64) -> f64 {
        let z = self.eval(t);
        z * z
    }

    pub fn z(&self, t: f64) -> Result<ZValue> {
        if !(t >= Z_MIN_T) || !t.is_finite() {
            return Err(domain("z", t, "t >= 2"));
        }
        Ok(ZValue { t, z: self.eval(t) })
    }

    pub fn abs_zeta(&self, t: f64) -> Result<f64> {
        Ok(self.z(t)?.z.abs())
    }
}

/// Z(t) with the default evaluator.
pub fn z(t: f64) -> Result<ZValue> {
    HardyZ::default().z(t)
}

/// |zeta(1/2 + it)| = |Z(t)|.
pub fn abs_zeta(t: f64) -> Result<f64> {
    HardyZ::default().abs_zeta(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_negative() {
        assert!(z(-1.0).is_err());
        assert!(z(1.5).is_err());
        assert!(z(f64::INFINITY).is_err());
        assert!(HardyZ::new(0, 400.0).is_err());
        assert!(HardyZ::new(6, 400.0).is_err());
    }

    #[test]
    fn switch_point_is_seamless() {
        let h = HardyZ::default();
        let t = DEFAULT_EM_BELOW;
        let a = z_em(t);
        let b = z_rs(t, h.rs_depth());
        assert!((a - b).abs() < 1e-8, "{a} {b}");
    }
}
