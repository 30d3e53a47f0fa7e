//! Sign sums along primes shrink relative to the prime count: the
//! normalized ratio decays toward zero as the cutoff grows.

use rscorr::primecorr::{convergence_table, CorrKind};
use rscorr::primes::build_table;

fn main() {
    let table = build_table(1_000_000).expect("sieve build");
    let grid = [1_000u64, 10_000, 100_000, 1_000_000];

    for kind in [CorrKind::Consecutive, CorrKind::Pair] {
        for k in 1..=3usize {
            println!("{kind:?} blocks, k = {k}:");
            println!("{:>9} {:>7} {:>7} {:>9}", "N", "pi(N)", "sum", "ratio");
            for row in convergence_table(&table, k, kind, &grid, 1) {
                println!(
                    "{:>9} {:>7} {:>7} {:>9.5}",
                    row.n_limit, row.pi_n, row.raw, row.ratio
                );
            }
            println!();
        }
    }
}
