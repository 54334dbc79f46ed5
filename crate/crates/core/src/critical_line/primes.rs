//! Prime counting with a segmented, odd-only sieve.

use std::sync::RwLock;

use crate::error::{domain, Error, Result};

pub const DEFAULT_PRIME_LIMIT: u64 = 100_000_000;

const SEGMENT_WORDS: usize = 1 << 12;
const MIN_BUILD: u64 = 1 << 20;

#[derive(Debug, Default)]
struct Sieve {
    /// bit i of the bitmap is set when 2i+1 is prime
    bits: Vec<u64>,
    /// primes among odd numbers below 128 * w
    before: Vec<u32>,
    /// largest integer covered
    upto: u64,
}

impl Sieve {
    fn build(n: u64) -> Sieve {
        let odd = n.div_ceil(2); // odd numbers 1, 3, ..., <= n (plus slack)
        let words = odd.div_ceil(64) as usize;
        let mut bits = vec![!0u64; words];
        bits[0] &= !1; // 1 is not prime
        let root = (n as f64).sqrt() as u64 + 1;
        let base = small_primes(root);
        let seg_bits = (SEGMENT_WORDS * 64) as u64;
        let total_bits = words as u64 * 64;
        let mut lo = 0u64;
        while lo < total_bits {
            let hi = (lo + seg_bits).min(total_bits);
            for &p in &base {
                // odd multiples of p from max(p*p, first in segment)
                let first_val = 2 * lo + 1;
                let mut m = first_val.div_ceil(p) * p;
                if m.is_multiple_of(2) {
                    m += p;
                }
                m = m.max(p * p);
                let mut i = (m - 1) / 2;
                while i < hi {
                    bits[(i / 64) as usize] &= !(1u64 << (i % 64));
                    i += p;
                }
            }
            lo = hi;
        }
        let mut before = Vec::with_capacity(words + 1);
        let mut acc = 0u32;
        for w in &bits {
            before.push(acc);
            acc += w.count_ones();
        }
        before.push(acc);
        Sieve {
            bits,
            before,
            upto: total_bits * 2 - 1,
        }
    }

    fn pi(&self, n: u64) -> u64 {
        if n < 2 {
            return 0;
        }
        let idx = (n - 1) / 2; // last odd index <= n
        let w = (idx / 64) as usize;
        let b = idx % 64;
        let mask = if b == 63 { !0 } else { (1u64 << (b + 1)) - 1 };
        1 + self.before[w] as u64 + (self.bits[w] & mask).count_ones() as u64
    }

    fn is_prime(&self, n: u64) -> bool {
        if n == 2 {
            return true;
        }
        if n < 2 || n.is_multiple_of(2) {
            return false;
        }
        let i = (n - 1) / 2;
        self.bits[(i / 64) as usize] >> (i % 64) & 1 == 1
    }
}

fn small_primes(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut comp = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 3..=n {
        if i % 2 == 1 && !comp[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                comp[j] = true;
                j += 2 * i;
            }
        }
    }
    out
}

/// pi(x) for 0 <= x <= limit.  The sieve grows on demand.
#[derive(Debug)]
pub struct PrimeTable {
    limit: u64,
    sieve: RwLock<Sieve>,
}

impl Default for PrimeTable {
    fn default() -> Self {
        PrimeTable::new(DEFAULT_PRIME_LIMIT)
    }
}

impl PrimeTable {
    pub fn new(limit: u64) -> Self {
        PrimeTable {
            limit,
            sieve: RwLock::new(Sieve::default()),
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    fn ensure(&self, n: u64) -> Result<()> {
        if n > self.limit {
            return Err(Error::LimitExceeded {
                requested: n,
                limit: self.limit,
            });
        }
        if self.sieve.read().unwrap().upto >= n {
            return Ok(());
        }
        let mut g = self.sieve.write().unwrap();
        if g.upto < n {
            let want = n.saturating_mul(2).max(MIN_BUILD).min(self.limit.max(n));
            *g = Sieve::build(want);
        }
        Ok(())
    }

    /// Number of primes p <= x.
    pub fn prime_pi(&self, x: f64) -> Result<u64> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(domain("prime_pi", x, "x >= 0"));
        }
        let n = x.floor() as u64;
        self.ensure(n)?;
        Ok(self.sieve.read().unwrap().pi(n))
    }

    /// Primes in the half-open interval (lo, hi].
    pub fn primes_between(&self, lo: f64, hi: f64) -> Result<Vec<u64>> {
        let a = lo.max(0.0).floor() as u64;
        let b = hi.max(0.0).floor() as u64;
        self.ensure(b)?;
        let g = self.sieve.read().unwrap();
        Ok(((a + 1)..=b).filter(|&n| g.is_prime(n)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let t = PrimeTable::new(1000);
        let expect = [0, 0, 1, 2, 2, 3, 3, 4, 4, 4, 4, 5];
        for (n, &e) in expect.iter().enumerate() {
            assert_eq!(t.prime_pi(n as f64).unwrap(), e, "n={n}");
        }
        assert_eq!(t.prime_pi(2.999).unwrap(), 1);
        assert_eq!(t.prime_pi(1000.0).unwrap(), 168);
        assert!(t.prime_pi(1001.0).is_err());
        assert!(t.prime_pi(-1.0).is_err());
    }

    #[test]
    fn reference_counts() {
        let t = PrimeTable::default();
        assert_eq!(t.prime_pi(1e4).unwrap(), 1229);
        assert_eq!(t.prime_pi(1e6).unwrap(), 78498);
        assert_eq!(t.prime_pi(1e7).unwrap(), 664579);
    }

    #[test]
    fn between_matches_counts() {
        let t = PrimeTable::default();
        let ps = t.primes_between(1e5, 1e5 + 500.0).unwrap();
        let d = t.prime_pi(1e5 + 500.0).unwrap() - t.prime_pi(1e5).unwrap();
        assert_eq!(ps.len() as u64, d);
    }
}
