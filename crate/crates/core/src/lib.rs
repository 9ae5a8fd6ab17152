//! Quotient and comprehension chains for several notions of partial computation,
//! the assert maps and instruments derived from them, and a harness that checks
//! the adjunction laws.

pub mod chain;
pub mod discrete;
pub mod dist;
pub mod error;
pub mod harness;
pub mod linear;
pub mod ring;
pub mod tolerance;
pub mod vn;

pub use chain::{
    derive_assert, derive_instrument, falsum, hom_check, kleisli_compose, left_composite, side_effect, truth, Chain,
    Comprehension, Measurement, PredObject, Quotient, SideEffect, Summand,
};
pub use error::{Error, Result};
pub use tolerance::Tolerances;
