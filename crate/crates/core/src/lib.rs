//! Exact number-theoretic tools for approximating a real number by one or two
//! rationals with bounded denominators, the modular hyperbola `xy ≡ c (mod q)`,
//! exponential sums and Dirichlet characters, plus sweeps that tabulate the
//! related conjectures at small scale.

pub mod arith;
pub mod characters;
pub mod duo;
pub mod error;
pub mod guard;
pub mod harmonic;
pub mod hyperbola;
pub mod lab;
pub mod rational;
pub mod report;
pub mod sieve;
pub mod single;

pub use error::{Error, Result};
pub use rational::Rational;
