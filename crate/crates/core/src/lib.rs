//! Combinatorics of standard modules for classical p-adic groups: segment
//! arithmetic, the rearrangement algorithm on alpha-blocks, first occurrence
//! indices in paired Witt towers, explicit theta lifts, and a formal
//! Jacquet-module ring used to cross-check multiplicity counts.

pub mod check;
pub mod corpus;
pub mod dsl;
pub mod error;
pub mod grothendieck;
pub mod halfint;
pub mod json;
pub mod lifts;
pub mod model;
pub mod occurrence;
pub mod rearrange;
pub mod segment;
pub mod tempered;

pub use error::{CoreError, Result};
pub use halfint::HalfInt;
pub use model::{AlphaBlock, Form, GLFactor, Pair, Side, StandardModule};
pub use segment::Segment;
pub use tempered::TemperedToken;
