//! Orthogonal Grassmannians over small finite fields.
//!
//! Builds the totally singular subspaces of a parabolic quadric, embeds them
//! through Plücker coordinates, and studies the resulting projective-system
//! codes, polar caps and their sign matrices.

pub mod cache;
pub mod caps;
pub mod cli;
pub mod clique;
pub mod codes;
pub mod error;
pub mod field;
pub mod grassmann;
pub mod gray;
pub mod hadamard;
pub mod linalg;
pub mod quadform;
pub mod spreads;
pub mod suite;

pub use error::{Error, Result};
pub use field::{Felt, FieldSpec};
