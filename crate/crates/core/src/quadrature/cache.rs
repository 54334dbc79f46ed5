//! On-disk form of the sample grid.
//!
//! Binary layout (little endian): magic, version, spec, cell count, kept cell
//! count, running sum, then per cell t0 h cum err m0..m7, then the retained
//! node values.  The CSV form lists every node as `t,z2` after a header line
//! and is rebuilt into cells on load.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::gauss::gl15;
use super::grid::{reduce_cell, Cell, CriticalSampleGrid, GridSpec, CELL_NODES, MOMENTS, PANELS_PER_CELL};
use super::kernel::node_t;
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"JLLGRID\0";
const VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheFormat {
    Binary,
    Csv,
}

impl CacheFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            CacheFormat::Binary => "bin",
            CacheFormat::Csv => "csv",
        }
    }

    /// Format implied by a file name; binary unless it ends in `.csv`.
    pub fn from_path(p: &Path) -> CacheFormat {
        match p.extension().and_then(|e| e.to_str()) {
            Some("csv") => CacheFormat::Csv,
            _ => CacheFormat::Binary,
        }
    }
}

/// File name that identifies a grid configuration.
pub fn cache_file_name(spec: &GridSpec, fmt: CacheFormat) -> String {
    format!(
        "grid-os{}-d{}-em{}.{}",
        spec.oversample,
        spec.rs_depth,
        spec.em_below,
        fmt.extension()
    )
}

fn put_f64(w: &mut impl Write, v: f64) -> std::io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

fn put_u64(w: &mut impl Write, v: u64) -> std::io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

fn get_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b).map_err(truncated)?;
    Ok(f64::from_le_bytes(b))
}

fn get_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b).map_err(truncated)?;
    Ok(u64::from_le_bytes(b))
}

fn truncated(e: std::io::Error) -> Error {
    Error::Cache(format!("truncated or unreadable: {e}"))
}

pub fn save(grid: &CriticalSampleGrid, path: &Path, fmt: CacheFormat) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("partial");
    {
        let mut w = BufWriter::new(File::create(&tmp)?);
        match fmt {
            CacheFormat::Binary => save_binary(grid, &mut w)?,
            CacheFormat::Csv => save_csv(grid, &mut w)?,
        }
        w.flush()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn save_binary(g: &CriticalSampleGrid, w: &mut impl Write) -> Result<()> {
    let s = g.spec();
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(s.rs_depth as u32).to_le_bytes())?;
    put_f64(w, s.oversample)?;
    put_f64(w, s.em_below)?;
    put_f64(w, s.keep_below)?;
    put_u64(w, g.cells.len() as u64)?;
    put_u64(w, g.kept_cells as u64)?;
    let (a, b) = g.running_sum();
    put_f64(w, a)?;
    put_f64(w, b)?;
    for c in &g.cells {
        put_f64(w, c.t0)?;
        put_f64(w, c.h)?;
        put_f64(w, c.cum)?;
        put_f64(w, c.err)?;
        for m in &c.moments {
            put_f64(w, *m)?;
        }
    }
    for v in &g.kept {
        put_f64(w, *v)?;
    }
    Ok(())
}

fn save_csv(g: &CriticalSampleGrid, w: &mut impl Write) -> Result<()> {
    let s = g.spec();
    writeln!(
        w,
        "# oversample={} rs_depth={} em_below={} keep_below={} cells={}",
        s.oversample,
        s.rs_depth,
        s.em_below,
        s.keep_below,
        g.cells.len()
    )?;
    writeln!(w, "t,z2")?;
    let xs = &gl15().nodes;
    for (i, c) in g.cells.iter().enumerate() {
        let z2 = g.cell_z2(i);
        for j in 0..PANELS_PER_CELL {
            for (k, &x) in xs.iter().enumerate() {
                writeln!(w, "{:e},{:e}", node_t(c.t0, c.h, j, x), z2[j * 15 + k])?;
            }
        }
    }
    Ok(())
}

pub fn load(path: &Path) -> Result<CriticalSampleGrid> {
    let f = File::open(path)?;
    let mut r = BufReader::new(f);
    match CacheFormat::from_path(path) {
        CacheFormat::Binary => load_binary(&mut r),
        CacheFormat::Csv => load_csv(&mut r),
    }
}

fn load_binary(r: &mut impl Read) -> Result<CriticalSampleGrid> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic).map_err(truncated)?;
    if &magic != MAGIC {
        return Err(Error::Cache("not a grid file".into()));
    }
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4).map_err(truncated)?;
    let version = u32::from_le_bytes(b4);
    if version != VERSION {
        return Err(Error::Cache(format!("unsupported version {version}")));
    }
    r.read_exact(&mut b4).map_err(truncated)?;
    let rs_depth = u32::from_le_bytes(b4) as usize;
    let spec = GridSpec {
        rs_depth,
        oversample: get_f64(r)?,
        em_below: get_f64(r)?,
        keep_below: get_f64(r)?,
    };
    let n = get_u64(r)? as usize;
    let kept_cells = get_u64(r)? as usize;
    if kept_cells > n || n > 1 << 32 {
        return Err(Error::Cache("inconsistent cell counts".into()));
    }
    let sum = (get_f64(r)?, get_f64(r)?);
    let mut cells = Vec::with_capacity(n);
    for _ in 0..n {
        let t0 = get_f64(r)?;
        let h = get_f64(r)?;
        let cum = get_f64(r)?;
        let err = get_f64(r)?;
        let mut moments = [0.0; MOMENTS];
        for m in moments.iter_mut() {
            *m = get_f64(r)?;
        }
        cells.push(Cell {
            t0,
            h,
            cum,
            err,
            moments,
        });
    }
    let mut raw = vec![0u8; kept_cells * CELL_NODES * 8];
    r.read_exact(&mut raw).map_err(truncated)?;
    let kept = raw
        .chunks_exact(8)
        .map(|b| f64::from_le_bytes(b.try_into().unwrap()))
        .collect();
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::Cache("trailing bytes".into()));
    }
    check_layout(&spec, &cells)?;
    let mut g = CriticalSampleGrid::from_parts(spec, cells, kept, kept_cells, 0.0)?;
    g.set_running_sum(sum);
    Ok(g)
}

fn check_layout(spec: &GridSpec, cells: &[Cell]) -> Result<()> {
    let mut a = 0.0;
    for (i, c) in cells.iter().enumerate() {
        let h = spec.cell_panel_width(a);
        if c.t0 != a || c.h != h {
            return Err(Error::Cache(format!("cell {i} does not match the layout")));
        }
        a += PANELS_PER_CELL as f64 * h;
    }
    Ok(())
}

fn parse_header(line: &str) -> Result<GridSpec> {
    let mut spec = GridSpec::default();
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| Error::Cache("missing header".into()))?;
    for kv in body.split_whitespace() {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Cache(format!("bad header field {kv}")))?;
        let bad = |_| Error::Cache(format!("bad value in {kv}"));
        match k {
            "oversample" => spec.oversample = v.parse().map_err(bad)?,
            "rs_depth" => spec.rs_depth = v.parse().map_err(|_| Error::Cache(kv.into()))?,
            "em_below" => spec.em_below = v.parse().map_err(bad)?,
            "keep_below" => spec.keep_below = v.parse().map_err(bad)?,
            "cells" => {}
            _ => return Err(Error::Cache(format!("unknown header field {k}"))),
        }
    }
    Ok(spec)
}

fn load_csv(r: &mut impl BufRead) -> Result<CriticalSampleGrid> {
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| Error::Cache("empty file".into()))??;
    let spec = parse_header(&header)?;
    let cols = lines.next().ok_or_else(|| Error::Cache("missing column line".into()))??;
    if cols.trim() != "t,z2" {
        return Err(Error::Cache("expected columns t,z2".into()));
    }
    let mut g = CriticalSampleGrid::new(spec)?;
    let xs = &gl15().nodes;
    let mut buf = Vec::with_capacity(CELL_NODES);
    let mut a = 0.0;
    let mut h = spec.cell_panel_width(a);
    for (ln, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (ts, zs) = line
            .split_once(',')
            .ok_or_else(|| Error::Cache(format!("line {}: expected t,z2", ln + 3)))?;
        let t: f64 = ts
            .trim()
            .parse()
            .map_err(|_| Error::Cache(format!("line {}: bad t", ln + 3)))?;
        let z2: f64 = zs
            .trim()
            .parse()
            .map_err(|_| Error::Cache(format!("line {}: bad z2", ln + 3)))?;
        let idx = buf.len();
        let expect = node_t(a, h, idx / 15, xs[idx % 15]);
        if (t - expect).abs() > 1e-12 * expect.max(1.0) {
            return Err(Error::Cache(format!("line {}: node {t} off the layout", ln + 3)));
        }
        buf.push(z2);
        if buf.len() == CELL_NODES {
            let d = reduce_cell(a, h, std::mem::take(&mut buf));
            g.push_cell(a, h, d);
            a += PANELS_PER_CELL as f64 * h;
            h = spec.cell_panel_width(a);
        }
    }
    if !buf.is_empty() {
        return Err(Error::Cache("incomplete final cell".into()));
    }
    Ok(g)
}
