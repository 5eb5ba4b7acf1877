//! Exact and modular evaluation of alternating multiple harmonic sums,
//! together with a registry of congruences (mod p, p², p³, p⁴) that a
//! verifier can sweep over prime ranges with two independent backends.

pub mod bernoulli;
pub mod error;
pub mod exact;
pub mod identities;
pub mod mhs;
pub mod modular;
pub mod padic;
pub mod poly;
pub mod primes;
pub mod registry;

pub use error::{ArithError, ArithResult};
pub use mhs::Signature;
pub use modular::Residue;
