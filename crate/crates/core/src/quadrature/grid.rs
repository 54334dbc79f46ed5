//! The critical sample grid: Z^2 on Gauss panels from t = 0 upward.
//!
//! Panels are grouped in cells of equal width.  A cell stores the running
//! integral at its left end, an error estimate and the scaled moments
//! m_j = int_cell Z^2 u^j dt, u = (t - centre) / half_width, which is all a
//! slowly varying weight needs.

use std::borrow::Cow;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gauss::{gl15, gl15_cos_error};
use super::kernel::{node_t, z2_panels, NODES};
use crate::critical_line::HardyZ;
use crate::error::{Error, Result};

pub const PANELS_PER_CELL: usize = 64;
pub const CELL_NODES: usize = PANELS_PER_CELL * NODES;
pub const MOMENTS: usize = 8;
pub const MAX_PANEL: f64 = 2.0;
pub const DEFAULT_OVERSAMPLE: f64 = 5.0;
/// Node values are retained for cells starting below this ordinate.
pub const DEFAULT_KEEP_BELOW: f64 = 2.5e5;

const BATCH: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// GL15 panels hold 15 / oversample periods of the fastest component of Z^2
    pub oversample: f64,
    pub rs_depth: usize,
    pub em_below: f64,
    pub keep_below: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            oversample: DEFAULT_OVERSAMPLE,
            rs_depth: crate::critical_line::DEFAULT_RS_DEPTH,
            em_below: crate::critical_line::DEFAULT_EM_BELOW,
            keep_below: DEFAULT_KEEP_BELOW,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<HardyZ> {
        if !(self.oversample >= 4.0) || self.oversample > 64.0 {
            return Err(Error::Config(format!(
                "oversample must lie in [4, 64], got {}",
                self.oversample
            )));
        }
        if !(self.keep_below >= 0.0) {
            return Err(Error::Config("keep_below must be nonnegative".into()));
        }
        HardyZ::new(self.rs_depth, self.em_below)
    }

    /// Gauss panel width at ordinate t.
    pub fn panel_width(&self, t: f64) -> f64 {
        let l = (t / (2.0 * PI)).ln();
        if l <= 0.0 {
            return MAX_PANEL;
        }
        (NODES as f64 * 2.0 * PI / l / self.oversample).min(MAX_PANEL)
    }

    /// Panel width for the cell starting at t0; valid over the whole cell.
    pub fn cell_panel_width(&self, t0: f64) -> f64 {
        let h1 = self.panel_width(t0);
        self.panel_width(t0 + PANELS_PER_CELL as f64 * h1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell {
    pub t0: f64,
    pub h: f64,
    /// int_0^t0 Z^2
    pub cum: f64,
    pub err: f64,
    pub moments: [f64; MOMENTS],
}

impl Cell {
    pub fn end(&self) -> f64 {
        self.t0 + PANELS_PER_CELL as f64 * self.h
    }
    pub fn centre(&self) -> f64 {
        self.t0 + 0.5 * PANELS_PER_CELL as f64 * self.h
    }
    pub fn half_width(&self) -> f64 {
        0.5 * PANELS_PER_CELL as f64 * self.h
    }
}

pub(crate) struct CellData {
    pub integral: f64,
    pub err: f64,
    pub moments: [f64; MOMENTS],
    pub z2: Vec<f64>,
}

/// Per-panel integrals from node values.
pub(crate) fn panel_integrals(z2: &[f64], h: f64) -> Vec<f64> {
    let w = &gl15().weights;
    z2.chunks_exact(NODES)
        .map(|p| 0.5 * h * p.iter().zip(w).map(|(a, b)| a * b).sum::<f64>())
        .collect()
}

pub(crate) fn reduce_cell(t0: f64, h: f64, z2: Vec<f64>) -> CellData {
    let rule = gl15();
    let c = t0 + 0.5 * PANELS_PER_CELL as f64 * h;
    let s = 0.5 * PANELS_PER_CELL as f64 * h;
    let panels = panel_integrals(&z2, h);
    let integral = neumaier(panels.iter().copied());
    let mut moments = [0.0; MOMENTS];
    let mut err_sum = 0.0;
    for j in 0..PANELS_PER_CELL {
        let mut pmax: f64 = 0.0;
        for k in 0..NODES {
            let t = node_t(t0, h, j, rule.nodes[k]);
            let v = z2[j * NODES + k];
            pmax = pmax.max(v);
            let wv = 0.5 * h * rule.weights[k] * v;
            let u = (t - c) / s;
            let mut p = 1.0;
            for m in moments.iter_mut() {
                *m += wv * p;
                p *= u;
            }
        }
        err_sum += 0.5 * h * pmax;
    }
    let end = t0 + PANELS_PER_CELL as f64 * h;
    let omega = 0.5 * h * (end / (2.0 * PI)).ln().max(1.0);
    let err = 2.0 * err_sum * gl15_cos_error(omega) + 1e-16 * integral.abs();
    CellData {
        integral,
        err,
        moments,
        z2,
    }
}

/// Compensated sum.
pub(crate) fn neumaier<I: Iterator<Item = f64>>(it: I) -> f64 {
    let mut s = 0.0;
    let mut c = 0.0;
    for x in it {
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    s + c
}

#[derive(Clone, Debug)]
pub struct CriticalSampleGrid {
    spec: GridSpec,
    hz: HardyZ,
    pub(crate) cells: Vec<Cell>,
    /// node values of cells 0..kept_cells
    pub(crate) kept: Vec<f64>,
    pub(crate) kept_cells: usize,
    sum: (f64, f64),
}

impl CriticalSampleGrid {
    pub fn new(spec: GridSpec) -> Result<Self> {
        let hz = spec.validate()?;
        Ok(CriticalSampleGrid {
            spec,
            hz,
            cells: Vec::new(),
            kept: Vec::new(),
            kept_cells: 0,
            sum: (0.0, 0.0),
        })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn hz(&self) -> &HardyZ {
        &self.hz
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Right end of the covered range.
    pub fn t_end(&self) -> f64 {
        self.cells.last().map(|c| c.end()).unwrap_or(0.0)
    }

    /// int_0^t_end Z^2.
    pub fn total(&self) -> f64 {
        self.sum.0 + self.sum.1
    }

    pub(crate) fn push_cell(&mut self, t0: f64, h: f64, d: CellData) {
        let cum = self.total();
        self.cells.push(Cell {
            t0,
            h,
            cum,
            err: d.err,
            moments: d.moments,
        });
        if self.kept_cells + 1 == self.cells.len() && t0 < self.spec.keep_below {
            self.kept.extend_from_slice(&d.z2);
            self.kept_cells += 1;
        }
        // Neumaier running sum
        let (s, c) = self.sum;
        let x = d.integral;
        let t = s + x;
        let c = if s.abs() >= x.abs() {
            c + ((s - t) + x)
        } else {
            c + ((x - t) + s)
        };
        self.sum = (t, c);
    }

    /// Grows the grid until it covers [0, t].
    pub fn extend_to(&mut self, t: f64) {
        while self.t_end() < t {
            let mut layout = Vec::with_capacity(BATCH);
            let mut a = self.t_end();
            while layout.len() < BATCH && (layout.is_empty() || a < t) {
                let h = self.spec.cell_panel_width(a);
                layout.push((a, h));
                a += PANELS_PER_CELL as f64 * h;
            }
            let hz = self.hz;
            let data: Vec<CellData> = layout
                .par_iter()
                .map(|&(t0, h)| reduce_cell(t0, h, z2_panels(&hz, t0, h, PANELS_PER_CELL)))
                .collect();
            for ((t0, h), d) in layout.into_iter().zip(data) {
                self.push_cell(t0, h, d);
            }
        }
    }

    /// Index of the cell containing t (t < t_end).
    pub fn cell_index(&self, t: f64) -> usize {
        let i = self.cells.partition_point(|c| c.t0 <= t);
        i.saturating_sub(1)
    }

    /// Node values of cell i, from the retained store or recomputed.
    pub fn cell_z2(&self, i: usize) -> Cow<'_, [f64]> {
        if i < self.kept_cells {
            Cow::Borrowed(&self.kept[i * CELL_NODES..(i + 1) * CELL_NODES])
        } else {
            let c = &self.cells[i];
            Cow::Owned(z2_panels(&self.hz, c.t0, c.h, PANELS_PER_CELL))
        }
    }

    pub(crate) fn from_parts(
        spec: GridSpec,
        cells: Vec<Cell>,
        kept: Vec<f64>,
        kept_cells: usize,
        total: f64,
    ) -> Result<Self> {
        let hz = spec.validate()?;
        Ok(CriticalSampleGrid {
            spec,
            hz,
            cells,
            kept,
            kept_cells,
            sum: (total, 0.0),
        })
    }

    pub(crate) fn running_sum(&self) -> (f64, f64) {
        self.sum
    }

    pub(crate) fn set_running_sum(&mut self, s: (f64, f64)) {
        self.sum = s;
    }
}
