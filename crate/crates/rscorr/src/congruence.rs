//! Simultaneous congruences with non-coprime moduli, and the 2-adic
//! valuation patterns they encode.
//!
//! `crt_solve` merges constraints pairwise over the extended gcd; an
//! incompatible pair is a normal `None` return, not an error. On top of it
//! sit the power-of-two systems that pin `v2(x + i)` for `i = 1..=k`, the
//! valuation profile of a shifted prime, and the enumeration of boundary
//! difference vectors observed along the odd primes.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::digital::{delta, v2};
use crate::primes::PrimeTable;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CongruenceError {
    #[error("empty congruence system")]
    EmptySystem,
    #[error("combined modulus exceeds 2^63")]
    ModulusOverflow,
}

/// The residues `x` with `x % modulus == residue`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidueClass {
    residue: u64,
    modulus: u64,
}

impl ResidueClass {
    /// # Panics
    /// Panics when `modulus = 0`. The residue is reduced.
    pub fn new(residue: u64, modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        ResidueClass {
            residue: residue % modulus,
            modulus,
        }
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn contains(&self, x: u64) -> bool {
        x % self.modulus == self.residue
    }
}

/// A conjunction of residue classes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CongruenceSystem {
    classes: Vec<ResidueClass>,
}

impl CongruenceSystem {
    pub fn new(classes: Vec<ResidueClass>) -> Self {
        CongruenceSystem { classes }
    }

    pub fn classes(&self) -> &[ResidueClass] {
        &self.classes
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0, s0, t0)
}

/// Solve the system. `Ok(None)` means the constraints are incompatible;
/// the error cases are an empty system and a combined modulus above 2^63.
///
/// The solution class has modulus `lcm` of all moduli and contains exactly
/// the `x` satisfying every constraint.
pub fn crt_solve(system: &CongruenceSystem) -> Result<Option<ResidueClass>, CongruenceError> {
    let classes = system.classes();
    if classes.is_empty() {
        return Err(CongruenceError::EmptySystem);
    }
    let mut r = classes[0].residue() as i128;
    let mut m = classes[0].modulus() as i128;
    for class in &classes[1..] {
        let a = class.residue() as i128;
        let n = class.modulus() as i128;
        let (g, inv, _) = ext_gcd(m, n);
        let diff = a - r;
        if diff % g != 0 {
            return Ok(None);
        }
        let lcm = m / g * n;
        if lcm > 1i128 << 63 {
            return Err(CongruenceError::ModulusOverflow);
        }
        // r' = r + m * t with t = (diff / g) * inv(m / g) mod (n / g);
        // inv comes from the Bezout coefficient of m in ext_gcd(m, n),
        // which inverts m / g modulo n / g.
        let step = n / g;
        let t = ((diff / g) % step * (inv % step)) % step;
        r += m * t;
        m = lcm;
        r = r.rem_euclid(m);
    }
    Ok(Some(ResidueClass::new(r as u64, m as u64)))
}

/// The congruence system pinning the valuation pattern of `x + i`:
/// constraint `i` (1-based) is
/// `x = 2^u[i] + eps[i] * 2^(u[i] + 1) - i  (mod 2^(u[i] + 2))`,
/// whose solutions satisfy `v2(x + i) = u[i]` with `eps[i]` the next bit
/// of `x + i`.
///
/// # Panics
/// Panics when the slices are empty or of different lengths, when some
/// `u[i] > 60`, or when some `eps[i] > 1`.
pub fn valuation_pattern_system(u: &[u32], eps: &[u8]) -> CongruenceSystem {
    assert!(!u.is_empty(), "pattern needs at least one constraint");
    assert_eq!(u.len(), eps.len(), "u and eps lengths differ");
    let classes = u
        .iter()
        .zip(eps.iter())
        .enumerate()
        .map(|(idx, (&ui, &ei))| {
            assert!(ui <= 60, "valuation {ui} too large for a u64 modulus");
            assert!(ei <= 1, "eps must be a bit");
            let i = idx as i128 + 1;
            let modulus = 1u64 << (ui + 2);
            let a = (1i128 << ui) + (ei as i128) * (1i128 << (ui + 1)) - i;
            ResidueClass::new(a.rem_euclid(modulus as i128) as u64, modulus)
        })
        .collect();
    CongruenceSystem::new(classes)
}

/// Valuations `u[j] = v2(p + j)` for `j = 1..=k`, plus the (1-based) index
/// of the largest one. Ties take the smallest index; ties only happen when
/// the maximum is small enough that no structural claim applies.
///
/// # Panics
/// Panics when `p` is even or `p <= 2`, or `k < 2`.
pub fn valuation_profile(p: u64, k: usize) -> (usize, Vec<u32>) {
    assert!(p > 2 && p % 2 == 1, "need an odd p > 2");
    assert!(k >= 2, "profile needs k >= 2");
    let vals: Vec<u32> = (1..=k as u64).map(|j| v2(p + j)).collect();
    let mut arg = 0usize;
    for (j, &uj) in vals.iter().enumerate() {
        if uj > vals[arg] {
            arg = j;
        }
    }
    (arg + 1, vals)
}

/// Boundary difference vector `(delta(n, 1), ..., delta(n, k))`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DeltaVector(Vec<i64>);

impl DeltaVector {
    /// # Panics
    /// Panics when `k = 0`.
    pub fn at_point(n: u64, k: usize) -> Self {
        assert!(k >= 1, "delta vector needs k >= 1");
        DeltaVector((1..=k as u64).map(|i| delta(n, i)).collect())
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }
}

/// The set of distinct difference vectors observed at odd primes
/// `2 < p <= n_limit`.
///
/// # Panics
/// Panics when `k` is outside `1..=12` or `n_limit` exceeds the table.
pub fn enumerate_delta_vectors(
    table: &PrimeTable,
    k: usize,
    n_limit: u64,
) -> BTreeSet<DeltaVector> {
    assert!((1..=12).contains(&k), "k must be in 1..=12");
    let mut set = BTreeSet::new();
    for p in table.iterate_primes(3, n_limit) {
        set.insert(DeltaVector::at_point(p, k));
    }
    set
}
