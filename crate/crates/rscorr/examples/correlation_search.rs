//! Correlation-measure searches: the exact order-2 maximum on a sequence
//! prefix with its witness, a bounded order-3 search, a random baseline,
//! and the exponentially large order-4 consecutive block sums.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rscorr::corrmeasure::{
    consecutive_product_sum, correlation_measure, rs_window, SearchMode,
};

fn main() {
    let n = 4096usize;
    let seq = rs_window(n);
    let exact = correlation_measure(&seq, 2, n, SearchMode::Exact, None).unwrap();
    println!(
        "order-2 exact on the length-{n} prefix: value {} (delays {:?}, window {})",
        exact.value, exact.delays, exact.m
    );
    println!("  lower reference N/6 = {:.1}", n as f64 / 6.0);

    let mut rng = StdRng::seed_from_u64(99);
    let random: Vec<i8> = (0..n).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    let baseline = correlation_measure(&random, 2, n, SearchMode::Exact, None).unwrap();
    println!("order-2 exact on a seeded random sequence: value {}", baseline.value);

    let bounded = correlation_measure(&seq, 3, 64, SearchMode::Bounded, None).unwrap();
    println!(
        "order-3 bounded search, delays below 64: value {} (delays {:?}, window {})",
        bounded.value, bounded.delays, bounded.m
    );

    println!("\nconsecutive four-fold products over n < 2^M sum to -2^(M-1):");
    for m in 4..=12u32 {
        println!("  M = {m:>2}: {:>6}", consecutive_product_sum(m));
    }
}
