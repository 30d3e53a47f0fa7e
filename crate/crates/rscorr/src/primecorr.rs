//! Sign and exponential sums over primes built from the block-counting
//! kernel, plus convergence tables against the prime-counting normalizer
//! and an odd-integer baseline.
//!
//! Two numeric paths: whenever every phase weight is a multiple of 1/2 the
//! summands are exactly `+1`/`-1` and everything runs in integer
//! arithmetic; otherwise sums accumulate as complex numbers with
//! compensated summation (error of order `eps * pi(N)`). Integer partial
//! sums reduce order-independently; complex partials are folded in
//! ascending subrange order so a fixed worker count reproduces results
//! bit for bit.

use num_complex::Complex64;

use crate::digital::{delta, phase_decompose, r11, reduce_cycles, s2, v2, AlphaVector};
use crate::primes::PrimeTable;
use crate::util::{map_ranges, Kahan};

/// `e(x) = exp(2 pi i x)` with `x` measured in cycles.
pub fn e(cycles: f64) -> Complex64 {
    let angle = std::f64::consts::TAU * reduce_cycles(cycles);
    let (sin, cos) = angle.sin_cos();
    Complex64::new(cos, sin)
}

/// A phase in cycles, kept reduced into `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitPhase(f64);

impl UnitPhase {
    pub fn new(cycles: f64) -> Self {
        UnitPhase(reduce_cycles(cycles))
    }

    pub fn cycles(self) -> f64 {
        self.0
    }

    pub fn to_complex(self) -> Complex64 {
        e(self.0)
    }
}

/// Result of a phase sum: exact on the half-integer path, complex
/// otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SumValue {
    Exact(i64),
    Approx(Complex64),
}

impl SumValue {
    pub fn to_complex(self) -> Complex64 {
        match self {
            SumValue::Exact(v) => Complex64::new(v as f64, 0.0),
            SumValue::Approx(z) => z,
        }
    }

    pub fn magnitude(self) -> f64 {
        match self {
            SumValue::Exact(v) => v.unsigned_abs() as f64,
            SumValue::Approx(z) => z.norm(),
        }
    }
}

/// Offset pattern of a sign sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrKind {
    /// All offsets `0..=k`.
    Consecutive,
    /// Endpoints `{0, k}` only.
    Pair,
}

/// Digit function driving an odd-integer baseline sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DigitFunc {
    R11,
    S2,
}

#[inline]
fn kind_parity(kind: CorrKind, func: DigitFunc, n: u64, k: usize) -> u32 {
    let digit = |x: u64| match func {
        DigitFunc::R11 => r11(x),
        DigitFunc::S2 => s2(x),
    };
    let mut parity = 0u32;
    match kind {
        CorrKind::Consecutive => {
            for i in 0..=k as u64 {
                parity ^= digit(n + i);
            }
        }
        CorrKind::Pair => {
            parity = digit(n) ^ digit(n + k as u64);
        }
    }
    parity & 1
}

#[inline]
fn sign_term(kind: CorrKind, func: DigitFunc, n: u64, k: usize) -> i64 {
    1 - 2 * kind_parity(kind, func, n, k) as i64
}

/// `sum over primes p <= n_limit` of the product of `k + 1` consecutive
/// sequence values `rs(p) rs(p+1) ... rs(p+k)`, as an exact integer.
///
/// # Panics
/// Panics when `n_limit` exceeds the table limit.
pub fn s_k_sum(table: &PrimeTable, n_limit: u64, k: usize, workers: usize) -> i64 {
    assert!(n_limit <= table.limit(), "n_limit exceeds the sieve table");
    map_ranges(2, n_limit, workers, |lo, hi| {
        let mut acc = 0i64;
        for p in table.iterate_primes(lo, hi) {
            acc += sign_term(CorrKind::Consecutive, DigitFunc::R11, p, k);
        }
        acc
    })
    .into_iter()
    .sum()
}

/// `sum over primes p <= n_limit` of `rs(p) rs(p+k)`, as an exact integer.
/// `k = 0` returns `pi(n_limit)`.
///
/// # Panics
/// Panics when `n_limit` exceeds the table limit.
pub fn u_k_sum(table: &PrimeTable, n_limit: u64, k: usize, workers: usize) -> i64 {
    assert!(n_limit <= table.limit(), "n_limit exceeds the sieve table");
    map_ranges(2, n_limit, workers, |lo, hi| {
        let mut acc = 0i64;
        for p in table.iterate_primes(lo, hi) {
            acc += sign_term(CorrKind::Pair, DigitFunc::R11, p, k);
        }
        acc
    })
    .into_iter()
    .sum()
}

/// Raw weighted phase `sum of alpha_i * r11(n + i)`, in cycles, not
/// reduced.
#[inline]
fn raw_phase(alpha: &AlphaVector, n: u64) -> f64 {
    let mut acc = 0f64;
    for (i, &a) in alpha.components().iter().enumerate() {
        if a != 0.0 {
            acc += a * r11(n + i as u64) as f64;
        }
    }
    acc
}

/// General complex path of [`s_alpha_sum`], usable with any weights.
pub fn s_alpha_complex(
    table: &PrimeTable,
    n_limit: u64,
    alpha: &AlphaVector,
    workers: usize,
) -> Complex64 {
    assert!(n_limit <= table.limit(), "n_limit exceeds the sieve table");
    let chunks = map_ranges(2, n_limit, workers, |lo, hi| {
        let mut re = Kahan::default();
        let mut im = Kahan::default();
        for p in table.iterate_primes(lo, hi) {
            let z = e(raw_phase(alpha, p));
            re.add(z.re);
            im.add(z.im);
        }
        Complex64::new(re.value(), im.value())
    });
    chunks
        .into_iter()
        .fold(Complex64::new(0.0, 0.0), |acc, z| acc + z)
}

/// `sum over primes p <= n_limit` of
/// `e(alpha_0 r11(p) + ... + alpha_k r11(p + k))`.
///
/// When every weight is a multiple of 1/2 each summand is `+1` or `-1`
/// and the sum is returned as an exact integer; otherwise the complex
/// path of [`s_alpha_complex`] is used.
///
/// # Panics
/// Panics when `n_limit` exceeds the table limit.
pub fn s_alpha_sum(
    table: &PrimeTable,
    n_limit: u64,
    alpha: &AlphaVector,
    workers: usize,
) -> SumValue {
    assert!(n_limit <= table.limit(), "n_limit exceeds the sieve table");
    if !alpha.is_half_integral() {
        return SumValue::Approx(s_alpha_complex(table, n_limit, alpha, workers));
    }
    // Offsets whose doubled weight is odd are exactly the ones that
    // contribute `r11(p + i)` to the sign parity.
    let odd_offsets: Vec<u64> = alpha
        .components()
        .iter()
        .enumerate()
        .filter(|(_, &a)| ((2.0 * a) as i64) & 1 == 1)
        .map(|(i, _)| i as u64)
        .collect();
    let total: i64 = map_ranges(2, n_limit, workers, |lo, hi| {
        let mut acc = 0i64;
        for p in table.iterate_primes(lo, hi) {
            let mut parity = 0u32;
            for &i in &odd_offsets {
                parity ^= r11(p + i);
            }
            acc += 1 - 2 * (parity & 1) as i64;
        }
        acc
    })
    .into_iter()
    .sum();
    SumValue::Exact(total)
}

/// Cross-check path of [`s_alpha_sum`]: every phase is produced by the
/// aggregated block recursion (`phase_decompose`) instead of direct block
/// counting. Always complex.
pub fn s_alpha_sum_via_decomposition(
    table: &PrimeTable,
    n_limit: u64,
    alpha: &AlphaVector,
    workers: usize,
) -> Complex64 {
    assert!(n_limit <= table.limit(), "n_limit exceeds the sieve table");
    let chunks = map_ranges(2, n_limit, workers, |lo, hi| {
        let mut re = Kahan::default();
        let mut im = Kahan::default();
        for p in table.iterate_primes(lo, hi) {
            let z = e(phase_decompose(alpha, p));
            re.add(z.re);
            im.add(z.im);
        }
        Complex64::new(re.value(), im.value())
    });
    chunks
        .into_iter()
        .fold(Complex64::new(0.0, 0.0), |acc, z| acc + z)
}

/// Von Mangoldt weighted phase sum
/// `sum over n <= n_limit` of `Lambda(n) e(sum of alpha_i r11(n + i))`.
///
/// # Panics
/// Panics when `n_limit` exceeds the table limit.
pub fn psi_sum(table: &PrimeTable, n_limit: u64, alpha: &AlphaVector) -> Complex64 {
    assert!(n_limit <= table.limit(), "n_limit exceeds the sieve table");
    let mut re = Kahan::default();
    let mut im = Kahan::default();
    for (q, weight) in table.prime_powers(n_limit) {
        let z = e(raw_phase(alpha, q));
        re.add(weight * z.re);
        im.add(weight * z.im);
    }
    Complex64::new(re.value(), im.value())
}

/// `max over m <= n_limit` of `|psi_sum(m, alpha)|`, in one sweep over the
/// prime powers (the partial sum only moves at prime powers).
///
/// # Panics
/// Panics when `n_limit` exceeds the table limit.
pub fn psi_prefix_max(table: &PrimeTable, n_limit: u64, alpha: &AlphaVector) -> f64 {
    assert!(n_limit <= table.limit(), "n_limit exceeds the sieve table");
    let mut re = Kahan::default();
    let mut im = Kahan::default();
    let mut best = 0f64;
    for (q, weight) in table.prime_powers(n_limit) {
        let z = e(raw_phase(alpha, q));
        re.add(weight * z.re);
        im.add(weight * z.im);
        let norm_sq = re.value() * re.value() + im.value() * im.value();
        best = best.max(norm_sq);
    }
    best.sqrt()
}

/// `sum over odd primes 2 < p <= n_limit` of
/// `e(sum of b_i v2(p + i) + sum of a_i delta(p, i))` with `i` running
/// over `1..=k`. The even prime is excluded so every `v2(p + i)` with odd
/// `i` is positive and the valuation profile machinery applies.
///
/// # Panics
/// Panics when `b` and `a` differ in length, are empty, or `n_limit`
/// exceeds the table limit.
pub fn v_ba_sum(
    table: &PrimeTable,
    n_limit: u64,
    b: &[f64],
    a: &[f64],
    workers: usize,
) -> Complex64 {
    assert!(!b.is_empty(), "need at least one offset weight");
    assert_eq!(b.len(), a.len(), "b and a must share a length");
    assert!(n_limit <= table.limit(), "n_limit exceeds the sieve table");
    let chunks = map_ranges(3, n_limit, workers, |lo, hi| {
        let mut re = Kahan::default();
        let mut im = Kahan::default();
        for p in table.iterate_primes(lo, hi) {
            let mut phase = 0f64;
            for (j, (&bw, &aw)) in b.iter().zip(a).enumerate() {
                let i = j as u64 + 1;
                if bw != 0.0 {
                    phase += bw * v2(p + i) as f64;
                }
                if aw != 0.0 {
                    phase += aw * delta(p, i) as f64;
                }
            }
            let z = e(phase);
            re.add(z.re);
            im.add(z.im);
        }
        Complex64::new(re.value(), im.value())
    });
    chunks
        .into_iter()
        .fold(Complex64::new(0.0, 0.0), |acc, z| acc + z)
}

/// One row of a convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergencePoint {
    pub n_limit: u64,
    pub k: usize,
    /// Exact integer sum over primes up to `n_limit`.
    pub raw: i64,
    pub pi_n: u64,
    /// `raw / pi_n`; always in `[-1, 1]` since each summand is a sign.
    pub ratio: f64,
}

/// Sign sums at every grid point, computed in one incremental sweep:
/// each grid interval is summed once and accumulated.
///
/// # Panics
/// Panics when the grid is empty, not strictly increasing, starts below 2,
/// or ends past the table limit.
pub fn convergence_table(
    table: &PrimeTable,
    k: usize,
    kind: CorrKind,
    grid: &[u64],
    workers: usize,
) -> Vec<ConvergencePoint> {
    assert!(!grid.is_empty(), "grid must be nonempty");
    assert!(
        grid.windows(2).all(|w| w[0] < w[1]),
        "grid must be strictly increasing"
    );
    assert!(grid[0] >= 2, "grid must start at 2 or later");
    assert!(
        *grid.last().unwrap() <= table.limit(),
        "grid exceeds the sieve table"
    );
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = 0i64;
    let mut prev = 1u64;
    for &g in grid {
        acc += map_ranges(prev + 1, g, workers, |lo, hi| {
            let mut part = 0i64;
            for p in table.iterate_primes(lo, hi) {
                part += sign_term(kind, DigitFunc::R11, p, k);
            }
            part
        })
        .into_iter()
        .sum::<i64>();
        let pi_n = table.pi(g);
        out.push(ConvergencePoint {
            n_limit: g,
            k,
            raw: acc,
            pi_n,
            ratio: acc as f64 / pi_n as f64,
        });
        prev = g;
    }
    out
}

/// Baseline sum over odd integers:
/// `sum over odd n <= n_limit` of `(-1)^p` where `p` is the chosen digit
/// function folded over the offset pattern. With `func = S2` this is the
/// odd-indexed analogue whose normalized limit is classical; with
/// `func = R11` it is the side-by-side companion of the prime sums.
pub fn odd_integer_sum(
    n_limit: u64,
    k: usize,
    kind: CorrKind,
    func: DigitFunc,
    workers: usize,
) -> i64 {
    if n_limit == 0 {
        return 0;
    }
    map_ranges(0, (n_limit - 1) / 2, workers, |lo, hi| {
        let mut acc = 0i64;
        for idx in lo..=hi {
            acc += sign_term(kind, func, 2 * idx + 1, k);
        }
        acc
    })
    .into_iter()
    .sum()
}
