//! Digit-block calculus for the Rudin-Shapiro sequence.
//!
//! The Rudin-Shapiro sequence is `(-1)^r11(n)`, where `r11(n)` counts the
//! overlapping `11` blocks in the binary expansion of `n`. This crate
//! provides the exact digit kernels and their recursion ([`digital`]), the
//! output automaton ([`dfao`]), a segmented prime sieve with cached tables
//! ([`primes`]), congruence solving for 2-adic valuation patterns
//! ([`congruence`]), correlation-measure search and spectral diagnostics on
//! finite windows ([`corrmeasure`]), exponential and correlation sums along
//! the primes ([`primecorr`]), and a table-emitting command line ([`cli`]).
//!
//! Start with the `examples/` directory: each example is a runnable tour of
//! one capability.

pub mod cli;
pub mod congruence;
pub mod corrmeasure;
pub mod dfao;
pub mod digital;
pub mod primecorr;
pub mod primes;
mod util;
