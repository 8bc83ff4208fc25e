//! The Ershov topology: every semi-decidable set of names is open, and
//! every computable map out of it is effectively continuous.

use crate::error::Result;
use crate::kernel::builtins::Compose;
use crate::kernel::{Fuel, Nat, Registry};
use crate::numberings::{sd_member, Realizer, SemiDecidableName, Verdict};

use super::SpreenOpenName;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ErshovOpen(pub SemiDecidableName);

pub fn ershov_open(a: SemiDecidableName) -> ErshovOpen {
    ErshovOpen(a)
}

pub fn ershov_member(reg: &Registry, o: ErshovOpen, n: &Nat, fuel: Fuel) -> Result<Verdict> {
    sd_member(reg, o.0, n, fuel)
}

/// `f⁻¹(O)` is semi-decided by running `f` and then `O`.
pub fn ershov_preimage(reg: &Registry, f: Realizer, o: ErshovOpen) -> ErshovOpen {
    ErshovOpen(SemiDecidableName(reg.script(Compose { outer: o.0 .0, inner: f.0 })))
}

/// Any effective open of a computable topology is Ershov open.
pub fn spreen_to_ershov(reg: &Registry, o: &SpreenOpenName) -> Result<ErshovOpen> {
    Ok(ErshovOpen(o.parts(reg)?.0))
}
