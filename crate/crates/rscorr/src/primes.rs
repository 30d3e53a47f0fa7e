//! Segmented sieve of Eratosthenes with O(1)-amortized prime counting.
//!
//! The table stores one bit per odd number (`bit i` set means `2i + 1` is
//! composite, with 1 marked composite) plus cumulative zero-bit checkpoints
//! every 2^16 integers, so `pi(x)` scans at most 512 words. Tables can be
//! persisted to a checksummed cache file and reloaded.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::util::map_ranges;

/// Magic bytes opening a sieve cache file.
pub const CACHE_MAGIC: &[u8; 5] = b"BCSV1";
/// Integer span between consecutive prime-count checkpoints.
pub const CHECKPOINT_STRIDE: u64 = 1 << 16;
/// Hard ceiling on table limits.
pub const MAX_LIMIT: u64 = 1 << 40;

/// Checkpoint stride in bitmap words: 2^16 integers = 2^15 odd bits.
const WORDS_PER_CHECKPOINT: usize = (CHECKPOINT_STRIDE / 2 / 64) as usize;
/// Bitmap bits sieved per segment (128 KiB of bitmap, ~L2 sized).
const SEGMENT_BITS: u64 = 1 << 20;

#[derive(Debug, Error)]
pub enum PrimesError {
    #[error("table limit must be at least 2, got {0}")]
    LimitTooSmall(u64),
    #[error("table limit {0} exceeds the 2^40 ceiling")]
    LimitTooLarge(u64),
    #[error("cache io: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache has wrong magic bytes")]
    BadMagic,
    #[error("cache length does not match its stated limit")]
    BadLength,
    #[error("cache checksum mismatch")]
    BadChecksum,
}

/// Primality table for `[0, limit]`.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    odd_composite: Vec<u64>,
    zero_checkpoints: Vec<u64>,
}

fn bit_count(limit: u64) -> u64 {
    ((limit - 1) >> 1) + 1
}

fn word_count(limit: u64) -> usize {
    bit_count(limit).div_ceil(64) as usize
}

#[inline]
fn set_bit(bits: &mut [u64], idx: u64) {
    bits[(idx >> 6) as usize] |= 1u64 << (idx & 63);
}

/// Build the table for `[0, limit]`.
pub fn build_table(limit: u64) -> Result<PrimeTable, PrimesError> {
    if limit < 2 {
        return Err(PrimesError::LimitTooSmall(limit));
    }
    if limit > MAX_LIMIT {
        return Err(PrimesError::LimitTooLarge(limit));
    }
    let n_bits = bit_count(limit);
    let mut bits = vec![0u64; word_count(limit)];

    // Odd base primes up to sqrt(limit), by a plain sieve.
    let root = limit.isqrt();
    let base: Vec<u64> = {
        let mut small = vec![true; (root + 1) as usize];
        let mut p = 2u64;
        while p * p <= root {
            if small[p as usize] {
                let mut m = p * p;
                while m <= root {
                    small[m as usize] = false;
                    m += p;
                }
            }
            p += 1;
        }
        (3..=root).step_by(2).filter(|&q| small[q as usize]).collect()
    };

    let mut seg_lo = 0u64;
    while seg_lo < n_bits {
        let seg_hi = (seg_lo + SEGMENT_BITS).min(n_bits);
        let lo_val = 2 * seg_lo + 1;
        let hi_val = 2 * (seg_hi - 1) + 1;
        for &p in &base {
            if p * p > hi_val {
                break;
            }
            let start = if p * p >= lo_val {
                p * p
            } else {
                let mut m = lo_val.div_ceil(p) * p;
                if m % 2 == 0 {
                    m += p;
                }
                m
            };
            let mut idx = start >> 1;
            while idx < seg_hi {
                set_bit(&mut bits, idx);
                idx += p;
            }
        }
        seg_lo = seg_hi;
    }
    set_bit(&mut bits, 0); // 1 is not prime

    Ok(finish_table(limit, bits))
}

/// Force tail bits, then attach the checkpoint index.
fn finish_table(limit: u64, mut bits: Vec<u64>) -> PrimeTable {
    let n_bits = bit_count(limit);
    for idx in n_bits..(bits.len() as u64 * 64) {
        set_bit(&mut bits, idx);
    }
    let mut zero_checkpoints = Vec::with_capacity(bits.len() / WORDS_PER_CHECKPOINT + 2);
    zero_checkpoints.push(0);
    let mut acc = 0u64;
    for (wi, w) in bits.iter().enumerate() {
        acc += (!w).count_ones() as u64;
        if (wi + 1) % WORDS_PER_CHECKPOINT == 0 {
            zero_checkpoints.push(acc);
        }
    }
    PrimeTable {
        limit,
        odd_composite: bits,
        zero_checkpoints,
    }
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// # Panics
    /// Panics when `n > limit`.
    pub fn is_prime(&self, n: u64) -> bool {
        assert!(n <= self.limit, "{n} beyond table limit {}", self.limit);
        if n < 2 {
            return false;
        }
        if n == 2 {
            return true;
        }
        if n % 2 == 0 {
            return false;
        }
        self.odd_composite[(n >> 1 >> 6) as usize] & (1u64 << ((n >> 1) & 63)) == 0
    }

    /// Zero bits among indices `0..=e`.
    fn zero_count_through(&self, e: u64) -> u64 {
        let w = (e >> 6) as usize;
        let snap = w / WORDS_PER_CHECKPOINT;
        let mut count = self.zero_checkpoints[snap];
        for wi in snap * WORDS_PER_CHECKPOINT..w {
            count += (!self.odd_composite[wi]).count_ones() as u64;
        }
        let mask = if e & 63 == 63 {
            !0u64
        } else {
            (1u64 << ((e & 63) + 1)) - 1
        };
        count + ((!self.odd_composite[w]) & mask).count_ones() as u64
    }

    /// Prime counting function.
    ///
    /// # Panics
    /// Panics when `x > limit`.
    pub fn pi(&self, x: u64) -> u64 {
        assert!(x <= self.limit, "{x} beyond table limit {}", self.limit);
        if x < 2 {
            return 0;
        }
        1 + self.zero_count_through((x - 1) >> 1)
    }

    /// Primes `p <= x` with `p % m == l`. No coprimality requirement on
    /// `(l, m)`.
    ///
    /// # Panics
    /// Panics when `x > limit`, `m = 0`, or `l >= m`.
    pub fn pi_ap(&self, x: u64, m: u64, l: u64) -> u64 {
        assert!(m >= 1, "modulus must be positive");
        assert!(l < m, "residue {l} not reduced mod {m}");
        self.iterate_primes(2, x).filter(|p| p % m == l).count() as u64
    }

    /// Iterate the primes in `[lo, hi]` in increasing order. An inverted
    /// range is empty.
    ///
    /// # Panics
    /// Panics when `hi > limit`.
    pub fn iterate_primes(&self, lo: u64, hi: u64) -> PrimeIter<'_> {
        assert!(hi <= self.limit, "{hi} beyond table limit {}", self.limit);
        PrimeIter::new(self, lo, hi)
    }

    /// Prime powers `p^v <= limit` as `(p^v, ln p)`, sorted ascending.
    ///
    /// # Panics
    /// Panics when `limit > self.limit()`.
    pub fn prime_powers(&self, limit: u64) -> Vec<(u64, f64)> {
        assert!(limit <= self.limit);
        let mut out: Vec<(u64, f64)> = self
            .iterate_primes(2, limit)
            .map(|p| (p, (p as f64).ln()))
            .collect();
        for p in self.iterate_primes(2, limit.isqrt()) {
            let lp = (p as f64).ln();
            let mut q = p * p;
            loop {
                out.push((q, lp));
                match q.checked_mul(p) {
                    Some(next) if next <= limit => q = next,
                    _ => break,
                }
            }
        }
        out.sort_unstable_by_key(|&(n, _)| n);
        out
    }

    /// Write the table to a cache file: magic, limit (LE), bitmap words
    /// (LE), then a CRC32 of the payload (everything after the magic).
    pub fn save_cache(&self, path: &Path) -> Result<(), PrimesError> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(CACHE_MAGIC)?;
        let mut hasher = crc32fast::Hasher::new();
        let limit_bytes = self.limit.to_le_bytes();
        hasher.update(&limit_bytes);
        w.write_all(&limit_bytes)?;
        for word in &self.odd_composite {
            let b = word.to_le_bytes();
            hasher.update(&b);
            w.write_all(&b)?;
        }
        w.write_all(&hasher.finalize().to_le_bytes())?;
        w.flush()?;
        Ok(())
    }

    /// Reload a table written by [`PrimeTable::save_cache`]. Rejects wrong
    /// magic, limits outside `[2, 2^40]`, size mismatches, and checksum
    /// failures. Checkpoints are recomputed, not stored.
    pub fn load_cache(path: &Path) -> Result<PrimeTable, PrimesError> {
        let mut r = BufReader::new(File::open(path)?);
        let mut magic = [0u8; 5];
        read_exact_or_short(&mut r, &mut magic)?;
        if &magic != CACHE_MAGIC {
            return Err(PrimesError::BadMagic);
        }
        let mut limit_bytes = [0u8; 8];
        read_exact_or_short(&mut r, &mut limit_bytes)?;
        let limit = u64::from_le_bytes(limit_bytes);
        if limit < 2 {
            return Err(PrimesError::LimitTooSmall(limit));
        }
        if limit > MAX_LIMIT {
            return Err(PrimesError::LimitTooLarge(limit));
        }
        let words = word_count(limit);
        let mut payload = vec![0u8; words * 8];
        read_exact_or_short(&mut r, &mut payload)?;
        let mut crc_bytes = [0u8; 4];
        read_exact_or_short(&mut r, &mut crc_bytes)?;
        if r.read(&mut [0u8; 1])? != 0 {
            return Err(PrimesError::BadLength);
        }
        let mut hasher = crc32fast::Hasher::new();
        hasher.update(&limit_bytes);
        hasher.update(&payload);
        if hasher.finalize() != u32::from_le_bytes(crc_bytes) {
            return Err(PrimesError::BadChecksum);
        }
        let bits = payload
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(finish_table(limit, bits))
    }

    /// Count primes in `[lo, hi]` by splitting the range over worker
    /// threads. Exact, order-independent.
    pub fn count_primes(&self, lo: u64, hi: u64, workers: usize) -> u64 {
        if lo > hi {
            return 0;
        }
        map_ranges(lo, hi, workers, |a, b| {
            self.iterate_primes(a, b).count() as u64
        })
        .into_iter()
        .sum()
    }
}

fn read_exact_or_short(r: &mut impl Read, buf: &mut [u8]) -> Result<(), PrimesError> {
    r.read_exact(buf).map_err(|e| {
        if e.kind() == std::io::ErrorKind::UnexpectedEof {
            PrimesError::BadLength
        } else {
            PrimesError::Io(e)
        }
    })
}

/// Iterator over the primes of a closed range, word-skipping through the
/// bitmap.
pub struct PrimeIter<'a> {
    bits: &'a [u64],
    emit_two: bool,
    scanning: bool,
    wi: usize,
    last_word: usize,
    end_mask: u64,
    avail: u64,
}

impl<'a> PrimeIter<'a> {
    fn new(table: &'a PrimeTable, lo: u64, hi: u64) -> Self {
        let emit_two = lo <= 2 && 2 <= hi;
        let v_lo = lo.max(3);
        if v_lo > hi {
            return PrimeIter {
                bits: &table.odd_composite,
                emit_two,
                scanning: false,
                wi: 0,
                last_word: 0,
                end_mask: 0,
                avail: 0,
            };
        }
        let start_idx = v_lo >> 1;
        let end_idx = (hi - 1) >> 1;
        let wi = (start_idx >> 6) as usize;
        let last_word = (end_idx >> 6) as usize;
        let start_mask = !0u64 << (start_idx & 63);
        let end_mask = if end_idx & 63 == 63 {
            !0u64
        } else {
            (1u64 << ((end_idx & 63) + 1)) - 1
        };
        let mut avail = !table.odd_composite[wi] & start_mask;
        if wi == last_word {
            avail &= end_mask;
        }
        PrimeIter {
            bits: &table.odd_composite,
            emit_two,
            scanning: true,
            wi,
            last_word,
            end_mask,
            avail,
        }
    }
}

impl Iterator for PrimeIter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.emit_two {
            self.emit_two = false;
            return Some(2);
        }
        while self.scanning {
            if self.avail != 0 {
                let tz = self.avail.trailing_zeros() as u64;
                self.avail &= self.avail - 1;
                let idx = (self.wi as u64) * 64 + tz;
                return Some(2 * idx + 1);
            }
            if self.wi == self.last_word {
                self.scanning = false;
                break;
            }
            self.wi += 1;
            self.avail = !self.bits[self.wi];
            if self.wi == self.last_word {
                self.avail &= self.end_mask;
            }
        }
        None
    }
}

/// Von Mangoldt function: `ln p` when `n = p^v`, else 0. Detects prime
/// powers by exact integer roots for every exponent up to `log2 n`, with
/// trial-division primality on the base. Needs no table.
///
/// # Panics
/// Panics for `n = 0`.
pub fn mangoldt(n: u64) -> f64 {
    assert!(n >= 1, "mangoldt undefined at 0");
    if n == 1 {
        return 0.0;
    }
    for nu in 1..=n.ilog2() {
        let r = integer_root(n, nu);
        if pow_u64(r, nu) == Some(n) && is_prime_trial(r) {
            return (r as f64).ln();
        }
    }
    0.0
}

fn pow_u64(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

/// Largest `r` with `r^nu <= n`.
fn integer_root(n: u64, nu: u32) -> u64 {
    if nu == 1 {
        return n;
    }
    let mut lo = 1u64;
    let mut hi = 1u64 << (64 / nu + 1).min(63);
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        match pow_u64(mid, nu) {
            Some(v) if v <= n => lo = mid,
            _ => hi = mid - 1,
        }
    }
    lo
}

fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: plain trial division.
    fn oracle_is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2u64;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn rejects_bad_limits() {
        assert!(matches!(build_table(0), Err(PrimesError::LimitTooSmall(0))));
        assert!(matches!(build_table(1), Err(PrimesError::LimitTooSmall(1))));
        assert!(matches!(
            build_table(MAX_LIMIT + 1),
            Err(PrimesError::LimitTooLarge(_))
        ));
    }

    #[test]
    fn matches_trial_division() {
        let t = build_table(10_000).unwrap();
        let mut count = 0u64;
        for n in 0..=10_000u64 {
            let expected = oracle_is_prime(n);
            assert_eq!(t.is_prime(n), expected, "is_prime({n})");
            if expected {
                count += 1;
            }
            assert_eq!(t.pi(n), count, "pi({n})");
        }
    }

    #[test]
    fn counting_checkpoints() {
        let t = build_table(1_000_000).unwrap();
        assert_eq!(t.pi(10), 4);
        assert_eq!(t.pi(100), 25);
        assert_eq!(t.pi(1_000), 168);
        assert_eq!(t.pi(10_000), 1_229);
        assert_eq!(t.pi(100_000), 9_592);
        assert_eq!(t.pi(1_000_000), 78_498);
        // Checkpoint boundaries themselves.
        let small = build_table(200_000).unwrap();
        for x in [65_535, 65_536, 65_537, 131_071, 131_072, 131_073] {
            assert_eq!(small.pi(x), t.pi(x), "pi({x}) across table sizes");
        }
    }

    #[test]
    fn iterator_boundaries() {
        let t = build_table(1_000).unwrap();
        let got: Vec<u64> = t.iterate_primes(10, 30).collect();
        assert_eq!(got, vec![11, 13, 17, 19, 23, 29]);
        assert_eq!(t.iterate_primes(0, 2).collect::<Vec<_>>(), vec![2]);
        assert_eq!(t.iterate_primes(2, 2).collect::<Vec<_>>(), vec![2]);
        assert_eq!(t.iterate_primes(3, 3).collect::<Vec<_>>(), vec![3]);
        assert_eq!(t.iterate_primes(24, 28).count(), 0);
        assert_eq!(t.iterate_primes(20, 10).count(), 0);
        let all: Vec<u64> = t.iterate_primes(0, 1_000).collect();
        assert_eq!(all.len(), 168);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for &p in &all {
            assert!(oracle_is_prime(p));
        }
    }

    #[test]
    fn parallel_count_matches_pi() {
        let t = build_table(500_000).unwrap();
        for workers in [1, 3, 8] {
            assert_eq!(t.count_primes(0, 500_000, workers), t.pi(500_000));
            assert_eq!(
                t.count_primes(100_000, 400_000, workers),
                t.pi(400_000) - t.pi(100_000)
            );
        }
    }

    #[test]
    fn arithmetic_progressions() {
        let t = build_table(10_000).unwrap();
        // Frozen from direct enumeration: 5, 13, 17 are the primes <= 20
        // congruent to 1 mod 4.
        assert_eq!(t.pi_ap(20, 4, 1), 3);
        // Primes splitting across residues plus primes dividing m recover pi.
        for m in [2u64, 3, 4, 8] {
            let coprime_sum: u64 = (0..m)
                .filter(|&l| gcd(l, m) == 1)
                .map(|l| t.pi_ap(10_000, m, l))
                .sum();
            let dividing = t.iterate_primes(2, 10_000).filter(|p| m % p == 0).count() as u64;
            assert_eq!(coprime_sum + dividing, t.pi(10_000), "partition mod {m}");
        }
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn mangoldt_values() {
        assert_eq!(mangoldt(1), 0.0);
        assert!((mangoldt(2) - 2f64.ln()).abs() < 1e-12);
        assert!((mangoldt(8) - 2f64.ln()).abs() < 1e-12);
        assert!((mangoldt(81) - 3f64.ln()).abs() < 1e-12);
        assert_eq!(mangoldt(12), 0.0);
        assert_eq!(mangoldt(100), 0.0);
        // Chebyshev: the weighted count stays near x.
        let mut acc = 0.0;
        for n in 1..=100_000u64 {
            acc += mangoldt(n);
        }
        let ratio = acc / 100_000.0;
        assert!((0.9..=1.1).contains(&ratio), "psi ratio {ratio}");
    }

    #[test]
    fn prime_power_enumeration() {
        let t = build_table(100).unwrap();
        let pp = t.prime_powers(100);
        assert_eq!(pp.len(), 35);
        assert!(pp.windows(2).all(|w| w[0].0 < w[1].0));
        let direct: f64 = (1..=100u64).map(mangoldt).sum();
        let listed: f64 = pp.iter().map(|&(_, l)| l).sum();
        assert!((direct - listed).abs() < 1e-9);
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("table.sieve");
        let t = build_table(300_000).unwrap();
        t.save_cache(&path).unwrap();
        let loaded = PrimeTable::load_cache(&path).unwrap();
        assert_eq!(loaded.limit(), 300_000);
        assert_eq!(loaded.odd_composite, t.odd_composite);
        assert_eq!(loaded.zero_checkpoints, t.zero_checkpoints);
        assert_eq!(loaded.pi(300_000), t.pi(300_000));
    }

    #[test]
    fn cache_rejects_damage() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("table.sieve");
        build_table(10_000).unwrap().save_cache(&path).unwrap();
        let good = std::fs::read(&path).unwrap();

        let mut wrong_magic = good.clone();
        wrong_magic[0] ^= 0xff;
        std::fs::write(&path, &wrong_magic).unwrap();
        assert!(matches!(
            PrimeTable::load_cache(&path),
            Err(PrimesError::BadMagic)
        ));

        let mut flipped = good.clone();
        let mid = flipped.len() / 2;
        flipped[mid] ^= 0x10;
        std::fs::write(&path, &flipped).unwrap();
        assert!(matches!(
            PrimeTable::load_cache(&path),
            Err(PrimesError::BadChecksum)
        ));

        let truncated = &good[..good.len() - 3];
        std::fs::write(&path, truncated).unwrap();
        assert!(matches!(
            PrimeTable::load_cache(&path),
            Err(PrimesError::BadLength)
        ));

        let mut padded = good.clone();
        padded.push(0);
        std::fs::write(&path, &padded).unwrap();
        assert!(matches!(
            PrimeTable::load_cache(&path),
            Err(PrimesError::BadLength)
        ));
    }
}
