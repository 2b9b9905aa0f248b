//! Majority-logic decoding of binary Reed-Muller codes RM(r, m) in the
//! regime m >= 3, 1 <= r <= m/2.
//!
//! The crate builds the finite-geometry tables (partial spreads, coset
//! systems, index maps) behind two hard-decision decoders -- a two-step
//! baseline and an improved variant with far fewer check-sums -- and
//! provides encoding, a brute-force nearest-codeword oracle, call-count
//! accounting, gate-level netlist synthesis, and verification campaigns.

pub mod circuit;
pub mod code;
pub mod decode_chen;
pub mod decode_new;
pub mod geometry;
pub mod gf2;
pub mod harness;
pub mod metrics;
