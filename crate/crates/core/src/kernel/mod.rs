//! Registry of resumable step programs, pairing, and fair dovetailing.
//!
//! A name is a natural. Programs advance one step per call of
//! [`StepProgram::step`], carrying all progress in an explicit [`State`], so a
//! run interrupted at any fuel can be resumed and reproduces the same trace.

pub mod builtins;
pub mod dovetail;
pub mod pairing;
mod program;
mod registry;
pub mod schedule;
pub mod script;
mod state;

pub use program::{StepProgram, StepResult};
pub use registry::{ProgramIndex, Registry, Run};
pub use state::State;

pub type Nat = num_bigint::BigUint;

/// Step budget for a fuel-bounded run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fuel(pub u64);

impl Fuel {
    pub const DEFAULT: Fuel = Fuel(100_000);
}

pub fn nat(v: u64) -> Nat {
    Nat::from(v)
}

/// Narrows a natural to `u64`, saturating; used for loop counters held in states.
pub fn small(n: &Nat) -> u64 {
    use num_traits::ToPrimitive;
    n.to_u64().unwrap_or(u64::MAX)
}
