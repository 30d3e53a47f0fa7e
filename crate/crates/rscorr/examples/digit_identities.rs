//! The digit kernels and the exact identities tying them together:
//! `s2 = r11 + r01`, `n = r11(n) + v2(n!) + r01(n)`, the one-step
//! recursion with its four-case boundary term, and the aggregated phase
//! decomposition.

use rscorr::digital::{
    delta_case, phase_decompose, phase_direct, r01, r11, r11_step, s2, v2_factorial, AlphaVector,
};

fn main() {
    println!("{:>3} {:>3} {:>4} {:>4} {:>7} {:>12} {:>10}", "n", "s2", "r11", "r01", "v2(n!)", "r11+v2!+r01", "s2=r11+r01");
    for n in 0..13u64 {
        let split = r11(n) as u64 + v2_factorial(n) + r01(n) as u64;
        println!(
            "{n:>3} {:>3} {:>4} {:>4} {:>7} {:>12} {:>10}",
            s2(n),
            r11(n),
            r01(n),
            v2_factorial(n),
            split,
            s2(n) == r11(n) + r01(n)
        );
    }

    println!("\none-step recursion, boundary term read from the case table:");
    println!("{:>3} {:>3} {:>4} {:>6} {:>9} {:>7}", "n", "u", "eps", "delta", "r11(n+1)", "step");
    for n in 19..27u64 {
        let case = delta_case(n);
        println!(
            "{n:>3} {:>3} {:>4} {:>6} {:>9} {:>7}",
            case.u,
            case.epsilon,
            case.delta,
            r11(n + 1),
            r11_step(n)
        );
    }

    let alpha = AlphaVector::new(vec![0.3, -0.7, 1.1]);
    println!("\naggregated phase for weights {:?}:", alpha.components());
    println!("  index-weighted sum {:.4}, leading tail sum {:.4}", alpha.index_weighted_sum(), alpha.tail_sum(0));
    for n in [5u64, 100, 4096, 123_456] {
        println!(
            "  n = {n:>6}: direct {:.6}  decomposed {:.6}",
            phase_direct(&alpha, n),
            phase_decompose(&alpha, n)
        );
    }
}
