//! Generate the sequence three ways: by block counting, by sign, and by
//! running the four-state automaton on binary digits.

use rscorr::dfao::{dfao_eval, rudin_shapiro_dfao, to_binary};
use rscorr::digital::{r11, rudin_shapiro};

fn main() {
    let auto = rudin_shapiro_dfao();

    println!("{:>4} {:>10} {:>4} {:>6} {:>9}", "n", "binary", "r11", "sign", "automaton");
    for n in 0..16u64 {
        let bits: String = to_binary(n).bits().iter().map(|b| char::from(b'0' + b)).collect();
        println!(
            "{n:>4} {bits:>10} {:>4} {:>6} {:>9}",
            r11(n),
            rudin_shapiro(n),
            dfao_eval(&auto, n)
        );
    }

    let mut agree = 0u64;
    let limit = 100_000u64;
    for n in 0..limit {
        if dfao_eval(&auto, n) == rudin_shapiro(n) {
            agree += 1;
        }
    }
    println!("\nautomaton vs popcount sign on n < {limit}: {agree} agreements");

    let plus: i64 = (0..limit).map(|n| i64::from(rudin_shapiro(n))).sum();
    println!("partial sum of the first {limit} signs: {plus}");
}
