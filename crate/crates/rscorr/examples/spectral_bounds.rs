//! Two structural fingerprints of the sequence: the sup norm of its
//! trigonometric polynomial stays within a constant multiple of sqrt(N),
//! and the number of distinct length-k factors grows only linearly.

use rscorr::corrmeasure::{sup_norm_grid, subword_complexity};

fn main() {
    println!("sup |sum of r_n e(n theta)| on an 8N grid:");
    println!("{:>6} {:>10} {:>12}", "N", "sup", "sup/sqrt(N)");
    for exp in [8u32, 10, 12] {
        let n = 1u64 << exp;
        let sup = sup_norm_grid(n, 8 * n, 1);
        println!("{n:>6} {sup:>10.3} {:>12.4}", sup / (n as f64).sqrt());
    }

    println!("\ndistinct length-k factors of a 2^18 prefix (8k-8 from k = 8 on):");
    println!("{:>3} {:>7} {:>7} {:>11}", "k", "count", "8k-8", "stabilized");
    for k in 1..=12u32 {
        let rep = subword_complexity(1 << 18, k);
        println!(
            "{k:>3} {:>7} {:>7} {:>11}",
            rep.count,
            8 * i64::from(k) - 8,
            rep.stabilized
        );
    }
}
