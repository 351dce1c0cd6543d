//! Exact computations for Ore semigroup dilations.
//!
//! The crate covers groups of fractions of Ore monoids, extension of
//! circle-valued multipliers, minimal unitary dilations of projective
//! isometric representations, minimal automorphic dilations of injective
//! endomorphism actions, twisted crossed products realized through the corner
//! `i(1)(B ⋊ G)i(1)`, and the finite-adele model of the Bost–Connes system.
//! Every quantity is exact: phases live in `ℚ/ℤ` and scalars in cyclotomic
//! fields.

pub mod dilation;
pub mod adele;
pub mod crossed;
pub mod error;
pub mod limit;
pub mod multiplier;
pub mod ore;
pub mod scalar;
pub mod suites;

pub use error::{Error, Result};
