//! Weighted exponential sums over primes: the exact integer path for
//! half-integral weights, the complex path for general weights, the von
//! Mangoldt companion sum, and the identity splitting the phase into a
//! valuation part and a boundary part.

use rscorr::digital::{r11, AlphaVector};
use rscorr::primecorr::{e, psi_sum, s_alpha_sum, v_ba_sum, SumValue};
use rscorr::primes::build_table;

fn main() {
    let table = build_table(1_000_000).expect("sieve build");
    let n = 100_000u64;

    let half = AlphaVector::new(vec![0.5, 0.5]);
    match s_alpha_sum(&table, n, &half, 1) {
        SumValue::Exact(v) => println!("weights (1/2, 1/2), N = {n}: exact integer sum {v}"),
        SumValue::Approx(z) => println!("unexpected complex value {z}"),
    }

    // Total weight 1 (an integer), which the split identity below needs.
    let generic = AlphaVector::new(vec![0.58, 0.27, 0.15]);
    let z = s_alpha_sum(&table, n, &generic, 1).to_complex();
    println!(
        "weights {:?}, N = {n}: complex sum {:.4} + {:.4}i (|.| = {:.4})",
        generic.components(),
        z.re,
        z.im,
        z.norm()
    );

    let psi = psi_sum(&table, n, &generic);
    println!("von Mangoldt weighted companion: {:.4} + {:.4}i", psi.re, psi.im);

    // Full phase = prefactor * (valuation + boundary phases over odd
    // primes) + the lone term at p = 2.
    let k = generic.k();
    let b: Vec<f64> = (1..=k).map(|i| -generic.tail_sum(i)).collect();
    let a: Vec<f64> = generic.components()[1..].to_vec();
    let phase_at_two: f64 = generic
        .components()
        .iter()
        .enumerate()
        .map(|(i, &w)| w * r11(2 + i as u64) as f64)
        .sum();
    let split = e(generic.index_weighted_sum()) * v_ba_sum(&table, n, &b, &a, 1) + e(phase_at_two);
    println!(
        "valuation/boundary split: {:.4} + {:.4}i (deviation {:.2e})",
        split.re,
        split.im,
        (z - split).norm()
    );
}
