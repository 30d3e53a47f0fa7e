//! Correlation-measure search and spectral diagnostics on finite
//! plus-minus-one windows.
//!
//! The correlation value of a window `S` at delays `D = (d_1 < ... < d_k)`
//! and anchor count `M` is `V = sum over n < M of S[n+d_1] * ... * S[n+d_k]`;
//! the order-`k` correlation measure is the maximum of `|V|` over all valid
//! `(M, D)`. The exact search factors the delay space through gap vectors:
//! for a fixed gap shape the values `V(d_1, M)` are differences of one
//! prefix-sum array, so each shape costs one linear scan and the whole
//! search stays within `O(N^k)`.

use thiserror::Error;

use crate::digital::{r11, rudin_shapiro};
use crate::util::map_ranges;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorrError {
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("estimated work {estimated} exceeds budget {budget}")]
    BudgetExceeded { estimated: u64, budget: u64 },
}

fn invalid(msg: impl Into<String>) -> CorrError {
    CorrError::InvalidQuery(msg.into())
}

/// First `len` values of the Rudin-Shapiro sequence as `+1`/`-1` entries.
pub fn rs_window(len: usize) -> Vec<i8> {
    (0..len as u64).map(|n| rudin_shapiro(n) as i8).collect()
}

/// A single correlation evaluation point on a window of length `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationQuery {
    pub n: usize,
    pub delays: Vec<usize>,
    pub m: usize,
}

impl CorrelationQuery {
    pub fn k(&self) -> usize {
        self.delays.len()
    }

    pub fn validate(&self) -> Result<(), CorrError> {
        if self.delays.len() < 2 {
            return Err(invalid("need at least two delays"));
        }
        if !self.delays.windows(2).all(|w| w[0] < w[1]) {
            return Err(invalid("delays must be strictly increasing"));
        }
        if self.m < 1 {
            return Err(invalid("anchor count must be at least 1"));
        }
        let d_last = *self.delays.last().unwrap();
        if self.m + d_last > self.n {
            return Err(invalid("m + last delay must not exceed the window"));
        }
        Ok(())
    }
}

/// Correlation value `V` for one query.
pub fn v_sum(seq: &[i8], query: &CorrelationQuery) -> Result<i64, CorrError> {
    if seq.len() != query.n {
        return Err(invalid("sequence length differs from the query window"));
    }
    query.validate()?;
    let mut acc = 0i64;
    for pos in 0..query.m {
        let mut prod = 1i32;
        for &d in &query.delays {
            prod *= seq[pos + d] as i32;
        }
        acc += prod as i64;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Full delay range; the gap-shape scan, restricted to `k <= 3`.
    Exact,
    /// Delays capped by `d_max`, enumerated directly.
    Bounded,
}

/// Search result: the measure and the first witness in
/// (lexicographic delays, then anchor count) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationReport {
    pub value: u64,
    pub delays: Vec<usize>,
    pub m: usize,
}

/// Default cap on the estimated number of inner-loop operations.
pub const DEFAULT_SEARCH_BUDGET: u64 = 4_000_000_000;

/// Maximum of `|V|` over every valid `(M, D)` with `d_k <= d_max`
/// (exact mode requires `d_max = n`, meaning the full range).
///
/// Ties are broken by the lexicographically smallest delay vector, then the
/// smallest anchor count. A `budget` of `None` uses
/// [`DEFAULT_SEARCH_BUDGET`].
pub fn correlation_measure(
    seq: &[i8],
    k: usize,
    d_max: usize,
    mode: SearchMode,
    budget: Option<u64>,
) -> Result<CorrelationReport, CorrError> {
    let n = seq.len();
    if k < 2 {
        return Err(invalid("order k must be at least 2"));
    }
    if k > n {
        return Err(invalid("order k exceeds the window length"));
    }
    let budget = budget.unwrap_or(DEFAULT_SEARCH_BUDGET);
    match mode {
        SearchMode::Exact => {
            if k > 3 {
                return Err(invalid("exact mode supports k <= 3"));
            }
            if d_max != n {
                return Err(invalid("exact mode scans the full range; pass d_max = n"));
            }
            exact_search(seq, k, budget)
        }
        SearchMode::Bounded => {
            if d_max >= n {
                return Err(invalid("bounded mode needs d_max < n"));
            }
            if d_max + 1 < k {
                return Err(invalid("d_max leaves fewer than k delay slots"));
            }
            bounded_search(seq, k, d_max, budget)
        }
    }
}

/// Advance a strictly increasing tuple over `0..=max_value` to its
/// lexicographic successor. Returns false past the last tuple.
fn advance_tuple(tuple: &mut [usize], max_value: usize) -> bool {
    let k = tuple.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if tuple[i] < max_value - (k - 1 - i) {
            tuple[i] += 1;
            for j in i + 1..k {
                tuple[j] = tuple[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Number of strictly increasing `k`-tuples over `0..=max_value`,
/// saturating.
fn tuple_count(max_value: usize, k: usize) -> u64 {
    let n = max_value as u128 + 1;
    let mut acc = 1u128;
    for i in 0..k as u128 {
        acc = acc.saturating_mul(n - i);
        if acc > u128::from(u64::MAX) * (i as u128 + 1) {
            return u64::MAX;
        }
    }
    for i in 1..=k as u128 {
        acc /= i;
    }
    acc.min(u128::from(u64::MAX)) as u64
}

/// Products along one gap shape: `t[pos] = seq[pos] * prod of seq[pos+g]`.
#[inline]
fn shape_product(seq: &[i8], gaps: &[usize], pos: usize) -> i64 {
    let mut prod = seq[pos] as i32;
    for &g in gaps {
        prod *= seq[pos + g] as i32;
    }
    prod as i64
}

/// One linear scan of a gap shape: the largest `|P_j - P_i|` over
/// `0 <= i < j <= L` for `P` the prefix sums of the shape products.
fn scan_shape(seq: &[i8], gaps: &[usize]) -> u64 {
    let last = *gaps.last().unwrap();
    let mut p = 0i64;
    let (mut lo, mut hi) = (0i64, 0i64);
    let mut best = 0i64;
    for pos in 0..seq.len() - last {
        p += shape_product(seq, gaps, pos);
        best = best.max(p - lo).max(hi - p);
        lo = lo.min(p);
        hi = hi.max(p);
    }
    best as u64
}

fn exact_search(seq: &[i8], k: usize, budget: u64) -> Result<CorrelationReport, CorrError> {
    let n = seq.len();
    let shapes = tuple_count(n - 2, k - 1); // gap values live in 1..=n-1
    let estimated = shapes.saturating_mul(n as u64).saturating_mul(2);
    if estimated > budget {
        return Err(CorrError::BudgetExceeded { estimated, budget });
    }

    // Pass 1: the measure itself.
    let mut gaps: Vec<usize> = (1..k).collect();
    let mut best = 0u64;
    loop {
        best = best.max(scan_shape(seq, &gaps));
        if !advance_tuple(&mut gaps, n - 1) {
            break;
        }
    }

    // Pass 2: the lexicographically first witness among shapes attaining
    // the measure. A candidate shape's smallest anchor offset comes from
    // suffix extrema of its prefix array.
    let mut prefix = Vec::with_capacity(n + 1);
    let mut suf_min = Vec::with_capacity(n + 1);
    let mut suf_max = Vec::with_capacity(n + 1);
    let mut winner: Option<(usize, Vec<usize>)> = None;
    let mut gaps: Vec<usize> = (1..k).collect();
    loop {
        if scan_shape(seq, &gaps) == best {
            let len = seq.len() - gaps.last().unwrap();
            prefix.clear();
            prefix.push(0i64);
            for pos in 0..len {
                prefix.push(prefix[pos] + shape_product(seq, &gaps, pos));
            }
            suf_min.clear();
            suf_min.resize(len + 1, i64::MAX);
            suf_max.clear();
            suf_max.resize(len + 1, i64::MIN);
            for j in (1..=len).rev() {
                suf_min[j - 1] = suf_min[j].min(prefix[j]);
                suf_max[j - 1] = suf_max[j].max(prefix[j]);
            }
            // suf_min[i] / suf_max[i] now cover prefix indices i+1..=len
            // shifted down by one slot: entry i holds extrema of j > i.
            let bi = best as i64;
            for i in 0..len {
                let reach_up = suf_max[i] != i64::MIN && suf_max[i] - prefix[i] == bi;
                let reach_down = suf_min[i] != i64::MAX && prefix[i] - suf_min[i] == bi;
                if reach_up || reach_down {
                    let candidate = (i, gaps.clone());
                    let better = match &winner {
                        None => true,
                        Some((wi, wg)) => candidate.0 < *wi || (candidate.0 == *wi && candidate.1 < *wg),
                    };
                    if better {
                        winner = Some(candidate);
                    }
                    break;
                }
            }
        }
        if !advance_tuple(&mut gaps, n - 1) {
            break;
        }
    }

    let (d1, gaps) = winner.expect("a positive measure always has a witness");
    let len = seq.len() - gaps.last().unwrap();
    let mut p = 0i64;
    let mut at_d1 = 0i64;
    let mut m = 0usize;
    for pos in 0..len {
        if pos == d1 {
            at_d1 = p;
        }
        p += shape_product(seq, &gaps, pos);
        if pos + 1 > d1 && (p - at_d1).unsigned_abs() == best {
            m = pos + 1 - d1;
            break;
        }
    }
    let mut delays = vec![d1];
    delays.extend(gaps.iter().map(|g| d1 + g));
    Ok(CorrelationReport {
        value: best,
        delays,
        m,
    })
}

fn bounded_search(
    seq: &[i8],
    k: usize,
    d_max: usize,
    budget: u64,
) -> Result<CorrelationReport, CorrError> {
    let n = seq.len();
    let combos = tuple_count(d_max, k);
    let estimated = combos.saturating_mul(n as u64);
    if estimated > budget {
        return Err(CorrError::BudgetExceeded { estimated, budget });
    }
    let mut delays: Vec<usize> = (0..k).collect();
    let mut best = 0u64;
    let mut witness: Option<(Vec<usize>, usize)> = None;
    loop {
        let d_last = *delays.last().unwrap();
        let mut p = 0i64;
        for pos in 0..n - d_last {
            let mut prod = 1i32;
            for &d in &delays {
                prod *= seq[pos + d] as i32;
            }
            p += prod as i64;
            if p.unsigned_abs() > best {
                best = p.unsigned_abs();
                witness = Some((delays.clone(), pos + 1));
            }
        }
        if !advance_tuple(&mut delays, d_max) {
            break;
        }
    }
    let (delays, m) = witness.ok_or_else(|| invalid("empty search space"))?;
    Ok(CorrelationReport {
        value: best,
        delays,
        m,
    })
}

/// Sum of the products of four consecutive sequence values over a full
/// power-of-two block: `sum over n < 2^m` of
/// `rs(n) rs(n+1) rs(n+2) rs(n+3)`. Closed form: `-2^(m-1)` — the sign
/// is fixed by direct evaluation; the classical statement of this sum
/// quotes the magnitude `2^(m-1)`.
///
/// # Panics
/// Panics when `m` is outside `4..=26`.
pub fn consecutive_product_sum(m: u32) -> i64 {
    assert!((4..=26).contains(&m), "m must be in 4..=26");
    let mut acc = 0i64;
    for n in 0..1u64 << m {
        let parity = (r11(n) ^ r11(n + 1) ^ r11(n + 2) ^ r11(n + 3)) & 1;
        acc += 1 - 2 * parity as i64;
    }
    acc
}

/// Plain pair correlation `sum over n < len` of `rs(n) rs(n+d)`.
/// `d = 0` returns `len` and serves as a scale reference.
pub fn pair_correlation_sum(len: u64, d: u64) -> i64 {
    let mut acc = 0i64;
    for n in 0..len {
        let parity = (r11(n) ^ r11(n + d)) & 1;
        acc += 1 - 2 * parity as i64;
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubwordReport {
    /// Distinct length-`k` factors of the prefix.
    pub count: u64,
    /// True when no new factor appeared in the second half of the prefix.
    pub stabilized: bool,
}

/// Count the distinct length-`k` factors of the first `prefix_len`
/// sequence values.
///
/// # Panics
/// Panics when `k` is outside `1..=24` or `prefix_len < 2^(k+4)`.
pub fn subword_complexity(prefix_len: u64, k: u32) -> SubwordReport {
    assert!((1..=24).contains(&k), "k must be in 1..=24");
    assert!(
        prefix_len >= 1u64 << (k + 4),
        "prefix must cover at least 2^(k+4) values"
    );
    let mask = (1u64 << k) - 1;
    let mut seen = vec![0u64; (1usize << k).div_ceil(64)];
    let mut code = 0u64;
    for j in 0..(k - 1) as u64 {
        code = (code << 1) | (r11(j) & 1) as u64;
    }
    let mut count = 0u64;
    let mut last_new = 0u64;
    for start in 0..=prefix_len - k as u64 {
        code = ((code << 1) | (r11(start + k as u64 - 1) & 1) as u64) & mask;
        let w = (code >> 6) as usize;
        let bit = 1u64 << (code & 63);
        if seen[w] & bit == 0 {
            seen[w] |= bit;
            count += 1;
            last_new = start;
        }
    }
    SubwordReport {
        count,
        stabilized: last_new < prefix_len / 2,
    }
}

/// Sup over the grid `theta_j = j / grid` (in cycles) of the partial
/// exponential sum `|sum over x < n of rs(x) e(x theta)|`, computed by one
/// complex rotation per term.
///
/// # Panics
/// Panics when `n = 0` or `grid < 4n`.
pub fn sup_norm_grid(n: u64, grid: u64, workers: usize) -> f64 {
    assert!(n >= 1, "window must be nonempty");
    assert!(grid >= 4 * n, "grid needs at least 4n points");
    let signs: Vec<f64> = (0..n).map(|x| rudin_shapiro(x) as f64).collect();
    let chunk_max = map_ranges(0, grid - 1, workers, |a, b| {
        let mut best = 0f64;
        for j in a..=b {
            let angle = std::f64::consts::TAU * (j as f64 / grid as f64);
            let (wi, wr) = angle.sin_cos();
            let (mut zr, mut zi) = (1f64, 0f64);
            let (mut sr, mut si) = (0f64, 0f64);
            for &s in &signs {
                sr += s * zr;
                si += s * zi;
                let next_zr = zr * wr - zi * wi;
                zi = zr * wi + zi * wr;
                zr = next_zr;
            }
            let norm = (sr * sr + si * si).sqrt();
            best = best.max(norm);
        }
        best
    });
    chunk_max.into_iter().fold(0f64, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_signs(rng: &mut StdRng, n: usize) -> Vec<i8> {
        (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect()
    }

    /// Independent oracle: try every delay pair and anchor count.
    fn oracle_order2(seq: &[i8]) -> CorrelationReport {
        let n = seq.len();
        let mut best = 0u64;
        let mut delays = Vec::new();
        let mut m = 0usize;
        for d1 in 0..n {
            for d2 in d1 + 1..n {
                let mut p = 0i64;
                for pos in 0..n - d2 {
                    p += (seq[pos + d1] as i64) * (seq[pos + d2] as i64);
                    if p.unsigned_abs() > best {
                        best = p.unsigned_abs();
                        delays = vec![d1, d2];
                        m = pos + 1;
                    }
                }
            }
        }
        CorrelationReport {
            value: best,
            delays,
            m,
        }
    }

    #[test]
    fn v_sum_basics() {
        let ones = vec![1i8; 16];
        let q = CorrelationQuery {
            n: 16,
            delays: vec![0, 3],
            m: 13,
        };
        assert_eq!(v_sum(&ones, &q).unwrap(), 13);

        let bad = CorrelationQuery {
            n: 16,
            delays: vec![3, 0],
            m: 2,
        };
        assert!(matches!(
            v_sum(&ones, &bad),
            Err(CorrError::InvalidQuery(_))
        ));
        let overrun = CorrelationQuery {
            n: 16,
            delays: vec![0, 10],
            m: 7,
        };
        assert!(v_sum(&ones, &overrun).is_err());
    }

    #[test]
    fn v_sum_matches_direct_loop() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..50 {
            let n = rng.gen_range(8..64usize);
            let seq = random_signs(&mut rng, n);
            let k = rng.gen_range(2..=4usize);
            let mut delays: Vec<usize> = Vec::new();
            while delays.len() < k {
                let d = rng.gen_range(0..n - 1);
                if !delays.contains(&d) {
                    delays.push(d);
                }
            }
            delays.sort_unstable();
            let d_last = *delays.last().unwrap();
            if n - d_last < 1 {
                continue;
            }
            let m = rng.gen_range(1..=n - d_last);
            let q = CorrelationQuery {
                n,
                delays: delays.clone(),
                m,
            };
            let mut direct = 0i64;
            for pos in 0..m {
                let mut prod = 1i64;
                for &d in &delays {
                    prod *= seq[pos + d] as i64;
                }
                direct += prod;
            }
            assert_eq!(v_sum(&seq, &q).unwrap(), direct);
        }
    }

    #[test]
    fn exact_matches_oracle() {
        let mut rng = StdRng::seed_from_u64(7);
        for n in [32usize, 64, 128] {
            for _ in 0..4 {
                let seq = random_signs(&mut rng, n);
                let fast = correlation_measure(&seq, 2, n, SearchMode::Exact, None).unwrap();
                let slow = oracle_order2(&seq);
                assert_eq!(fast, slow, "window length {n}");
            }
        }
        let rs = rs_window(256);
        let fast = correlation_measure(&rs, 2, 256, SearchMode::Exact, None).unwrap();
        let slow = oracle_order2(&rs);
        assert_eq!(fast, slow);
    }

    #[test]
    fn witnesses_reproduce_their_value() {
        let mut rng = StdRng::seed_from_u64(11);
        for k in 2..=3usize {
            let seq = random_signs(&mut rng, 96);
            let report = correlation_measure(&seq, k, 96, SearchMode::Exact, None).unwrap();
            let q = CorrelationQuery {
                n: 96,
                delays: report.delays.clone(),
                m: report.m,
            };
            assert_eq!(v_sum(&seq, &q).unwrap().unsigned_abs(), report.value);
        }
    }

    #[test]
    fn bounded_agrees_with_exact_on_full_range() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..4 {
            let seq = random_signs(&mut rng, 80);
            let exact = correlation_measure(&seq, 2, 80, SearchMode::Exact, None).unwrap();
            let bounded = correlation_measure(&seq, 2, 79, SearchMode::Bounded, None).unwrap();
            assert_eq!(exact, bounded);
        }
    }

    #[test]
    fn bounded_never_exceeds_exact() {
        let mut rng = StdRng::seed_from_u64(17);
        let seq = random_signs(&mut rng, 128);
        let exact = correlation_measure(&seq, 2, 128, SearchMode::Exact, None).unwrap();
        let bounded = correlation_measure(&seq, 2, 16, SearchMode::Bounded, None).unwrap();
        assert!(bounded.value <= exact.value);
    }

    #[test]
    fn search_guards() {
        let seq = rs_window(64);
        assert!(matches!(
            correlation_measure(&seq, 1, 64, SearchMode::Exact, None),
            Err(CorrError::InvalidQuery(_))
        ));
        assert!(matches!(
            correlation_measure(&seq, 4, 64, SearchMode::Exact, None),
            Err(CorrError::InvalidQuery(_))
        ));
        assert!(matches!(
            correlation_measure(&seq, 2, 32, SearchMode::Exact, None),
            Err(CorrError::InvalidQuery(_))
        ));
        assert!(matches!(
            correlation_measure(&seq, 2, 64, SearchMode::Bounded, None),
            Err(CorrError::InvalidQuery(_))
        ));
        assert!(matches!(
            correlation_measure(&seq, 2, 63, SearchMode::Exact, Some(10)),
            Err(CorrError::InvalidQuery(_))
        ));
        assert!(matches!(
            correlation_measure(&seq, 2, 64, SearchMode::Exact, Some(10)),
            Err(CorrError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn order4_block_sums() {
        for m in 4..=12u32 {
            assert_eq!(consecutive_product_sum(m), -(1i64 << (m - 1)), "m={m}");
        }
    }

    #[test]
    fn pair_correlation_reference() {
        assert_eq!(pair_correlation_sum(1 << 12, 0), 1 << 12);
        // Independent slow evaluation.
        let seq = rs_window((1 << 10) + 3);
        for d in [1u64, 2, 3] {
            let direct: i64 = (0..1 << 10)
                .map(|n| (seq[n] as i64) * (seq[n + d as usize] as i64))
                .sum();
            assert_eq!(pair_correlation_sum(1 << 10, d), direct, "d={d}");
        }
    }

    #[test]
    fn subword_counts_small() {
        assert_eq!(subword_complexity(1 << 5, 1).count, 2);
        assert_eq!(subword_complexity(1 << 6, 2).count, 4);
        assert_eq!(subword_complexity(1 << 7, 3).count, 8);
    }

    #[test]
    fn subword_matches_set_oracle() {
        let seq = rs_window(1 << 12);
        for k in 1..=8u32 {
            let mut set = std::collections::HashSet::new();
            for w in seq.windows(k as usize) {
                set.insert(w.to_vec());
            }
            let report = subword_complexity(1 << 12, k);
            assert_eq!(report.count, set.len() as u64, "k={k}");
        }
    }

    #[test]
    fn sup_norm_basics() {
        assert!((sup_norm_grid(1, 8, 1) - 1.0).abs() < 1e-12);
        // Direct evaluation oracle at a tiny size.
        let n = 8u64;
        let grid = 64u64;
        let seq = rs_window(n as usize);
        let mut direct_best = 0f64;
        for j in 0..grid {
            let theta = j as f64 / grid as f64;
            let (mut re, mut im) = (0f64, 0f64);
            for (x, &s) in seq.iter().enumerate() {
                let angle = std::f64::consts::TAU * theta * x as f64;
                re += s as f64 * angle.cos();
                im += s as f64 * angle.sin();
            }
            direct_best = direct_best.max((re * re + im * im).sqrt());
        }
        for workers in [1usize, 3] {
            let fast = sup_norm_grid(n, grid, workers);
            assert!((fast - direct_best).abs() < 1e-9, "workers={workers}");
        }
    }
}
