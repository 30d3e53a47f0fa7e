//! Digit-level kernels for base-2 expansions.
//!
//! Everything operates on `u64` values through bitwise arithmetic: the
//! overlapping block counts `r11` and `r01`, the digit sum `s2`, the 2-adic
//! valuation `v2`, and the recursion that rewrites `r11(n + i)` as
//! `r11(n) + i - sum of v2(n + j) + delta(n, i)`. The Rudin-Shapiro
//! sequence itself is `(-1)^r11(n)`.

/// Number of (overlapping) `11` blocks in the binary expansion of `n`.
#[inline]
pub fn r11(n: u64) -> u32 {
    (n & (n >> 1)).count_ones()
}

/// Number of (overlapping) `01` blocks in the binary expansion of `n`,
/// read with a leading zero in front of the most significant bit.
#[inline]
pub fn r01(n: u64) -> u32 {
    // The logical right shift supplies the leading-zero context for the
    // top set bit, so `n=1` ("01") correctly counts one block.
    (n & !(n >> 1)).count_ones()
}

/// Binary digit sum of `n`.
#[inline]
pub fn s2(n: u64) -> u32 {
    n.count_ones()
}

/// 2-adic valuation of `n`.
///
/// # Panics
/// Panics for `n = 0`, where the valuation is infinite.
#[inline]
pub fn v2(n: u64) -> u32 {
    assert!(n != 0, "v2(0) is infinite");
    n.trailing_zeros()
}

/// 2-adic valuation of `n!`, via the digit-sum form `n - s2(n)`.
#[inline]
pub fn v2_factorial(n: u64) -> u64 {
    n - s2(n) as u64
}

/// Rudin-Shapiro value `(-1)^r11(n)`.
#[inline]
pub fn rudin_shapiro(n: u64) -> i32 {
    1 - 2 * (r11(n) & 1) as i32
}

/// Boundary term `delta(n, i) = r01(n) - r01(n + i)`.
///
/// # Panics
/// Panics for `i = 0` or when `n + i` overflows.
#[inline]
pub fn delta(n: u64, i: u64) -> i64 {
    assert!(i >= 1, "delta needs i >= 1");
    let m = n.checked_add(i).expect("n + i overflows u64");
    r01(n) as i64 - r01(m) as i64
}

/// The single-step case analysis of `delta(n, 1)`.
///
/// With `u = v2(n + 1)` and `epsilon` the bit of weight `u + 1` in `n + 1`:
/// `(0,0) -> -1`, `(0,1) -> 0`, `(u>0,0) -> 0`, `(u>0,1) -> +1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValuationCase {
    pub u: u32,
    pub epsilon: u8,
    pub delta: i64,
}

/// Classify `n` by the valuation pattern of `n + 1` and read `delta(n, 1)`
/// off the case table instead of counting blocks.
pub fn delta_case(n: u64) -> ValuationCase {
    let m = n.checked_add(1).expect("n + 1 overflows u64");
    let u = v2(m);
    let epsilon = if u >= 63 { 0 } else { ((m >> (u + 1)) & 1) as u8 };
    let delta = match (u, epsilon) {
        (0, 0) => -1,
        (0, 1) => 0,
        (_, 0) => 0,
        (_, 1) => 1,
        _ => unreachable!("epsilon is a single bit"),
    };
    ValuationCase { u, epsilon, delta }
}

/// One step of the block recursion: returns
/// `r11(n) + 1 - v2(n + 1) + delta(n, 1)`, which equals `r11(n + 1)`.
///
/// The boundary term is read from the case table so that this path and the
/// direct bit count stay independent of each other.
pub fn r11_step(n: u64) -> i64 {
    r11(n) as i64 + 1 - v2(n + 1) as i64 + delta_case(n).delta
}

/// `i`-fold iterate of the block recursion: returns
/// `r11(n) + i - sum of v2(n + j) for j in 1..=i + delta(n, i)`,
/// which equals `r11(n + i)`.
///
/// # Panics
/// Panics for `i = 0` or when `n + i` overflows.
pub fn r11_iterate(n: u64, i: u64) -> i64 {
    assert!(i >= 1, "r11_iterate needs i >= 1");
    let mut vsum = 0i64;
    for j in 1..=i {
        vsum += v2(n.checked_add(j).expect("n + i overflows u64")) as i64;
    }
    r11(n) as i64 + i as i64 - vsum + delta(n, i)
}

/// Real phase vector `(alpha_0, ..., alpha_k)` applied to shifted `r11`
/// values. The weighted phase of `n` is `sum of alpha_i * r11(n + i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaVector {
    components: Vec<f64>,
}

impl AlphaVector {
    /// # Panics
    /// Panics when `components` is empty or contains a non-finite value.
    pub fn new(components: Vec<f64>) -> Self {
        assert!(!components.is_empty(), "alpha vector needs alpha_0");
        assert!(
            components.iter().all(|a| a.is_finite()),
            "alpha components must be finite"
        );
        AlphaVector { components }
    }

    /// Shift order `k` (the vector has `k + 1` components).
    pub fn k(&self) -> usize {
        self.components.len() - 1
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn get(&self, i: usize) -> f64 {
        self.components[i]
    }

    /// `sum of j * alpha_j` for `j in 1..=k`.
    pub fn index_weighted_sum(&self) -> f64 {
        self.components
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, &a)| j as f64 * a)
            .sum()
    }

    /// Tail sum `sum of alpha_j` for `j in i..=k`.
    ///
    /// # Panics
    /// Panics when `i > k`.
    pub fn tail_sum(&self, i: usize) -> f64 {
        assert!(i <= self.k(), "tail_sum index out of range");
        self.components[i..].iter().sum()
    }

    /// True when every component is an integer multiple of 1/2. Half
    /// integers are exactly representable in binary floating point, so the
    /// test is exact.
    pub fn is_half_integral(&self) -> bool {
        self.components.iter().all(|a| (a * 2.0).fract() == 0.0)
    }
}

/// Reduce a phase in cycles into `[0, 1)`.
#[inline]
pub fn reduce_cycles(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Distance from `x` to the nearest integer, in `[0, 1/2]`.
#[inline]
pub fn nearest_int_norm(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// Weighted phase `sum of alpha_i * r11(n + i)`, reduced into `[0, 1)`.
pub fn phase_direct(alpha: &AlphaVector, n: u64) -> f64 {
    let mut acc = 0.0;
    for (i, &a) in alpha.components().iter().enumerate() {
        acc += a * r11(n + i as u64) as f64;
    }
    reduce_cycles(acc)
}

/// Same phase as [`phase_direct`], evaluated through the aggregated block
/// recursion:
/// `index_weighted_sum + tail_sum(0) * r11(n)
///  - sum of tail_sum(i) * v2(n + i) + sum of alpha_i * delta(n, i)`,
/// reduced into `[0, 1)`. The two agree modulo 1.
pub fn phase_decompose(alpha: &AlphaVector, n: u64) -> f64 {
    let k = alpha.k();
    let mut acc = alpha.index_weighted_sum() + alpha.tail_sum(0) * r11(n) as f64;
    for i in 1..=k {
        acc -= alpha.tail_sum(i) * v2(n + i as u64) as f64;
        acc += alpha.get(i) * delta(n, i as u64) as f64;
    }
    reduce_cycles(acc)
}
