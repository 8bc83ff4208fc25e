use crate::error::Result;
use crate::kernel::{Fuel, Nat, ProgramIndex, Registry};
use crate::numberings::Decision;

use std::sync::Arc;

/// A formal inclusion `⊆̊` on basic names: reflexive, transitive, and sound
/// (`b₁ ⊆̊ b₂` implies the denoted sets are included).
pub trait FormalInclusion: Send + Sync {
    fn check(&self, reg: &Registry, b1: &Nat, b2: &Nat, fuel: Fuel) -> Result<Decision>;
}

/// Name equality: the formal inclusion of Lacombe bases.
pub struct NameEquality;

impl FormalInclusion for NameEquality {
    fn check(&self, _: &Registry, b1: &Nat, b2: &Nat, _: Fuel) -> Result<Decision> {
        Ok(if b1 == b2 { Decision::Yes } else { Decision::No })
    }
}

/// A numbered basis with membership, the whole-space cover `G₁`, and the
/// intersection refiner `G₂`.
///
/// `member(⟨b,p⟩)` halts iff `p ∈ β(b)`. `g1` is a stream program over
/// `⟨n,k⟩`; `g2` over `⟨⟨n,⟨b₁,b₂⟩⟩,k⟩`. Streams use emit coding.
#[derive(Clone)]
pub struct SpreenBasis {
    pub member: ProgramIndex,
    pub g1: ProgramIndex,
    pub g2: ProgramIndex,
    pub inclusion: Arc<dyn FormalInclusion>,
}

impl std::fmt::Debug for SpreenBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpreenBasis")
            .field("member", &self.member)
            .field("g1", &self.g1)
            .field("g2", &self.g2)
            .finish_non_exhaustive()
    }
}
