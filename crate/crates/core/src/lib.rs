//! Desk-scale simulator and verification harness for free-energy-bounded
//! cryptography.
//!
//! Parties in this model pay for exactly one thing: erasing bits. Reversible
//! computation is free, registers of uniformly mixed bits are free, and one
//! blank (guaranteed-zero) bit is interconvertible with one unit of free
//! energy. On top of that accounting the crate implements proofs of
//! thermodynamical work (direct, sampling, hashing), secret sharing of free
//! energy, unforgeable banknotes and tickets, and light-cone-checked
//! positioning, together with exact brute-force oracles and a Monte Carlo
//! soundness harness for the corresponding bounds.

pub mod bits;
pub mod rng;
pub mod resource;

pub mod hashing;
pub mod sampling;

pub mod adversary;
pub mod protocols;

pub mod money;
pub mod spacetime;

pub mod harness;

pub use bits::BitString;
pub use resource::{
    FreeEnergyLedger, PartyId, Provenance, RegisterId, ResourceError, World,
};
pub use rng::{PurposeStream, RunEntropy, StreamRng};
