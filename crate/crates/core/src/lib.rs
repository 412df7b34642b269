//! Exact marginalization over arithmetic circuits that compute multilinear
//! polynomials.
//!
//! A function `f: {0,1}ⁿ → ℚ` has a unique multilinear polynomial `p`. When
//! a circuit computes `p`, plain marginals, Hamming-weight marginals and
//! virtual-evidence marginals all reduce to evaluating the circuit at a few
//! rational points. Everything here is exact: values are [`Rational`]s and
//! no floating point is involved.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod affine;
pub mod bits;
pub mod certify;
pub mod circuit;
pub mod degree;
pub mod error;
pub mod eval;
pub mod gen;
pub mod limits;
pub mod multilinear;
pub mod poly;
pub mod query;
pub mod rational;

pub use certify::{Certificate, MultilinearCircuit, SemanticMode, Verdict};
pub use circuit::{Circuit, CircuitBuilder, Node, NodeId};
pub use error::Error;
pub use limits::Limits;
pub use query::{Evidence, EvidenceString, HammingProfile, VirtualEvidence};
pub use rational::Rational;
