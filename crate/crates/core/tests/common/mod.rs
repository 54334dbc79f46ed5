//! Shared laboratory for the integration tests, backed by a grid cache
//! under the cargo target directory.
#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::OnceLock;

use jll_core::ladder::{Ladder, LadderConfig};
use jll_core::quadrature::{CacheFormat, GridSpec};
use jll_core::Lab;

/// Grid coverage sufficient for solves up to T = 1e5.
pub const GRID_END: f64 = 4e6;

pub fn cache_dir() -> PathBuf {
    let d = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("jll-cache");
    std::fs::create_dir_all(&d).unwrap();
    d
}

pub fn lab() -> &'static Lab {
    static LAB: OnceLock<Lab> = OnceLock::new();
    LAB.get_or_init(|| {
        let mut lab = Lab::with_cache_dir(GridSpec::default(), &cache_dir(), CacheFormat::Binary)
            .unwrap();
        lab.quad().ensure(GRID_END);
        lab.persist().unwrap();
        lab
    })
}

pub fn ladder() -> Ladder<'static> {
    Ladder::new(lab(), LadderConfig::default()).unwrap()
}

pub fn table(name: &str) -> Vec<Vec<String>> {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split(',').map(|s| s.trim().to_string()).collect())
        .collect()
}

pub fn num(s: &str) -> f64 {
    s.parse().unwrap()
}
