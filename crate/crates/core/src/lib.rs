//! Finite orthomodular lattices and the constructions built on them:
//! validation, center and central decomposition, the canonical necessity
//! operator, Boolean blocks and two-valued homomorphisms, global valuation
//! search, actualization, Greechie pasting, and ray-derived contexts.

pub mod clique;
pub mod error;
pub mod greechie;
pub mod lattice;
pub mod modal;
pub mod valuation;

pub use error::{Error, Result};
pub use lattice::FiniteOrtholattice;
