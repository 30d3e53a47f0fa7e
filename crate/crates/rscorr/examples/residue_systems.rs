//! Congruence machinery: non-coprime CRT solving, valuation-pattern
//! systems and their solvability, the valuation profile of shifted
//! primes, and the distinct boundary-difference vectors they produce.

use rscorr::congruence::{
    crt_solve, enumerate_delta_vectors, valuation_pattern_system, valuation_profile,
    CongruenceSystem, ResidueClass,
};
use rscorr::primes::build_table;

fn main() {
    let system = CongruenceSystem::new(vec![
        ResidueClass::new(2, 6),
        ResidueClass::new(5, 9),
    ]);
    println!("x = 2 (mod 6), x = 5 (mod 9)  ->  {:?}", crt_solve(&system).unwrap());

    let clash = CongruenceSystem::new(vec![
        ResidueClass::new(1, 4),
        ResidueClass::new(3, 8),
    ]);
    println!("x = 1 (mod 4), x = 3 (mod 8)  ->  {:?}", crt_solve(&clash).unwrap());

    // The first pattern clashes mod 4; the second is read off x = 5 and
    // must therefore solve.
    println!("\nvaluation patterns v2(x + i) = u_i with following bit eps_i:");
    for (u, eps) in [(vec![1u32, 0], vec![0u8, 0]), (vec![1, 0], vec![1, 1])] {
        let system = valuation_pattern_system(&u, &eps);
        let classes: Vec<String> = system
            .classes()
            .iter()
            .map(|c| format!("{}:{}", c.residue(), c.modulus()))
            .collect();
        println!(
            "  u = {u:?}, eps = {eps:?}  ->  {}  solution {:?}",
            classes.join(" "),
            crt_solve(&system).unwrap()
        );
    }

    println!("\nvaluation profiles of p + 1 .. p + k (argmax offset first):");
    for p in [5u64, 7, 127, 257] {
        let (argmax, profile) = valuation_profile(p, 6);
        println!("  p = {p:>4}: argmax offset {argmax}, u = {profile:?}");
    }

    let table = build_table(100_000).expect("sieve build");
    println!("\ndistinct boundary-difference vectors at odd primes below 10^5:");
    for k in 1..=6usize {
        let set = enumerate_delta_vectors(&table, k, 100_000);
        println!("  k = {k}: {} vectors", set.len());
    }
    let l3 = enumerate_delta_vectors(&table, 3, 100_000);
    for v in &l3 {
        println!("    k = 3 vector {:?}", v.components());
    }
}
