//! Branched-cover lift calculus for satellite patterns on the knot
//! concordance group.
//!
//! The library computes lift data for pattern curves in cyclic branched
//! covers, checks the hypotheses of the obstruction theorems, and emits
//! verdicts together with constructive certificates: twist-cobordism
//! sequences, clasper-equivalence records, and d-invariant inequality
//! chains. All arithmetic is exact; no floating point appears in any
//! production path.

pub mod cobordism;
pub mod corpus;
pub mod covering;
pub mod diagram;
pub mod dinv;
pub mod exact;
pub mod pipeline;
pub mod report;
pub mod seifert;

pub use exact::{Int, IntMatrix, IntPoly, Rat};
