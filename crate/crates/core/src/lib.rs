//! Effective topology on numbered sets.
//!
//! Points, opens and bases are all named by naturals that index step
//! programs held in a [`kernel::Registry`]. Every potentially divergent
//! question is answered under an explicit fuel budget, so a negative answer is
//! always `NotYet` and never a refutation.

pub mod cli;
pub mod error;
pub mod kernel;
pub mod metric;
pub mod numberings;
pub mod reals;
pub mod topology;

pub use error::{Error, Result};
pub use kernel::{Fuel, Nat, ProgramIndex, Registry};
