//! Shared state: the sample grid, the prime sieve and the zero table.

use std::path::{Path, PathBuf};

use crate::critical_line::{HardyZ, PrimeTable, ZeroTable, DEFAULT_PRIME_LIMIT};
use crate::error::Result;
use crate::quadrature::{cache_file_name, CacheFormat, GridSpec, Quadrature};

#[derive(Debug)]
pub struct Lab {
    quad: Quadrature,
    primes: PrimeTable,
    zeros: ZeroTable,
    cache_file: Option<PathBuf>,
    loaded_end: f64,
}

impl Lab {
    /// In-memory laboratory with no cache file.
    pub fn new(spec: GridSpec) -> Result<Self> {
        let quad = Quadrature::new(spec)?;
        Ok(Self::assemble(quad, None, DEFAULT_PRIME_LIMIT))
    }

    /// Laboratory backed by `dir`: an existing grid for `spec` is loaded, and
    /// [`Lab::persist`] writes it back after growth.
    pub fn with_cache_dir(spec: GridSpec, dir: &Path, fmt: CacheFormat) -> Result<Self> {
        let file = dir.join(cache_file_name(&spec, fmt));
        let quad = if file.exists() {
            let q = Quadrature::load(&file)?;
            if *q.spec() != spec {
                Quadrature::new(spec)?
            } else {
                q
            }
        } else {
            Quadrature::new(spec)?
        };
        Ok(Self::assemble(quad, Some(file), DEFAULT_PRIME_LIMIT))
    }

    fn assemble(quad: Quadrature, cache_file: Option<PathBuf>, prime_limit: u64) -> Self {
        let hz = *quad.hz();
        let loaded_end = quad.t_end();
        Lab {
            quad,
            primes: PrimeTable::new(prime_limit),
            zeros: ZeroTable::new(hz),
            cache_file,
            loaded_end,
        }
    }

    pub fn with_prime_limit(mut self, limit: u64) -> Self {
        self.primes = PrimeTable::new(limit);
        self
    }

    pub fn quad(&self) -> &Quadrature {
        &self.quad
    }

    pub fn hz(&self) -> &HardyZ {
        self.quad.hz()
    }

    pub fn primes(&self) -> &PrimeTable {
        &self.primes
    }

    pub fn zeros(&self) -> &ZeroTable {
        &self.zeros
    }

    pub fn cache_file(&self) -> Option<&Path> {
        self.cache_file.as_deref()
    }

    /// Writes the grid to the cache file when it has grown since loading.
    pub fn persist(&mut self) -> Result<bool> {
        let Some(file) = self.cache_file.clone() else {
            return Ok(false);
        };
        let end = self.quad.t_end();
        if end <= self.loaded_end && file.exists() {
            return Ok(false);
        }
        self.quad.save(&file, CacheFormat::from_path(&file))?;
        self.loaded_end = end;
        Ok(true)
    }
}
