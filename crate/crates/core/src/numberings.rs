//! Names for semi-decidable, decidable and c.e. sets, and for realizers.
//!
//! A c.e. name `e` denotes `{v : φ_e(k) = v + 1 for some k}`; an output of
//! `0` is a skipped slot, so the empty set and every finite set are
//! enumerable by total programs.

use std::fmt;

use crate::error::Result;
use crate::kernel::builtins::{emitted, Const, Diverge, Emitter, ExistsSearch, Guard};
use crate::kernel::dovetail::enumerate;
use crate::kernel::pairing::{pair, unpair};
use crate::kernel::script::{expect, reg_small, Action, Outcome, Routine};
use crate::kernel::{Fuel, Nat, ProgramIndex, Registry, StepResult};

/// Halts exactly on names of members.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SemiDecidableName(pub ProgramIndex);

/// Total; halts with 1 on members and 0 elsewhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DecidableName(pub ProgramIndex);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CeName(pub ProgramIndex);

/// Maps names to names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Realizer(pub ProgramIndex);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpaceHandle(pub String);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    NotYet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    Yes,
    No,
    NotYet,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "YES",
            Verdict::NotYet => "NOT_YET",
        })
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Yes => "YES",
            Decision::No => "NO",
            Decision::NotYet => "NOT_YET",
        })
    }
}

impl From<Verdict> for Decision {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Yes => Decision::Yes,
            Verdict::NotYet => Decision::NotYet,
        }
    }
}

pub fn sd_member(reg: &Registry, a: SemiDecidableName, n: &Nat, fuel: Fuel) -> Result<Verdict> {
    Ok(sd_member_counted(reg, a, n, fuel)?.0)
}

/// Membership verdict together with the steps it consumed.
pub fn sd_member_counted(
    reg: &Registry,
    a: SemiDecidableName,
    n: &Nat,
    fuel: Fuel,
) -> Result<(Verdict, u64)> {
    let run = reg.run_counted(a.0, n, fuel)?;
    let verdict = match run.result {
        StepResult::Halted(_) => Verdict::Yes,
        StepResult::Running(_) => Verdict::NotYet,
    };
    Ok((verdict, run.steps))
}

pub fn sd_always(reg: &Registry) -> SemiDecidableName {
    SemiDecidableName(reg.register(Const(Nat::default())))
}

pub fn sd_never(reg: &Registry) -> SemiDecidableName {
    SemiDecidableName(reg.register(Diverge))
}

pub fn sd_predicate(reg: &Registry, name: &'static str, pred: fn(&Nat) -> bool) -> SemiDecidableName {
    SemiDecidableName(reg.register(Guard { name, pred }))
}

#[derive(Clone, Debug)]
struct SdIntersect {
    a: ProgramIndex,
    b: ProgramIndex,
}

impl Routine for SdIntersect {
    fn next(&self, _: &Registry, input: &Nat, regs: &mut Vec<Nat>, _: Option<Outcome>) -> Result<Action> {
        let pc = reg_small(regs, 0);
        *regs = vec![Nat::from(pc + 1)];
        Ok(match pc {
            0 => Action::Call(self.a, input.clone()),
            1 => Action::Call(self.b, input.clone()),
            _ => Action::Halt(Nat::default()),
        })
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}", self.a.0, self.b.0))
    }
}

pub fn sd_intersect(reg: &Registry, a: SemiDecidableName, b: SemiDecidableName) -> SemiDecidableName {
    SemiDecidableName(reg.script(SdIntersect { a: a.0, b: b.0 }))
}

/// `⟨n,k⟩`: look up the `k`-th enumerated code and run it on `n`.
#[derive(Clone, Debug)]
struct UnionBody {
    codes: ProgramIndex,
}

impl Routine for UnionBody {
    fn next(&self, reg: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        let (n, k) = unpair(input);
        let pc = reg_small(regs, 0);
        *regs = vec![Nat::from(pc + 1)];
        Ok(match pc {
            0 => Action::Call(self.codes, k),
            1 => match emitted(&expect(last)?).and_then(|c| reg.resolve(&c)) {
                Some(a) => Action::Call(a, n),
                None => Action::Diverge,
            },
            _ => Action::Halt(Nat::default()),
        })
    }
    fn key(&self) -> Option<String> {
        Some(self.codes.0.to_string())
    }
}

/// Union of a c.e. family of semi-decidable sets, given by their codes.
pub fn sd_union_ce(reg: &Registry, codes: CeName) -> SemiDecidableName {
    let body = reg.script(UnionBody { codes: codes.0 });
    SemiDecidableName(reg.register(ExistsSearch { body }))
}

/// Enumerated values within the fuel budget, deduplicated, in discovery order.
pub fn ce_enumerate(reg: &Registry, c: CeName, fuel: Fuel) -> Result<Vec<Nat>> {
    let mut d = enumerate(c.0, None);
    d.run_fuel(reg, fuel)?;
    let mut seen = std::collections::HashSet::new();
    Ok(d.values().filter(|v| seen.insert((*v).clone())).cloned().collect())
}

pub fn ce_from_fn(reg: &Registry, name: &'static str, f: fn(&Nat) -> Option<Nat>) -> CeName {
    CeName(reg.register(Emitter { name, f }))
}

pub fn ce_empty(reg: &Registry) -> CeName {
    CeName(reg.register(Const(Nat::default())))
}

/// Finite c.e. set enumerated by a total program.
pub fn ce_finite(reg: &Registry, values: &[Nat]) -> CeName {
    CeName(reg.register(FiniteList(values.to_vec())))
}

#[derive(Clone, Debug)]
struct FiniteList(Vec<Nat>);

impl crate::kernel::StepProgram for FiniteList {
    fn step(&self, _: &Registry, input: &Nat, _: crate::kernel::State) -> Result<StepResult> {
        let v = crate::kernel::small(input);
        let out = usize::try_from(v).ok().and_then(|i| self.0.get(i)).cloned();
        Ok(StepResult::Halted(crate::kernel::builtins::emit(out)))
    }
    fn key(&self) -> Option<String> {
        Some(self.0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
    }
}

pub fn decidable_predicate(reg: &Registry, name: &'static str, f: fn(&Nat) -> bool) -> DecidableName {
    DecidableName(reg.register(DecidablePrimitive { name, f }))
}

#[derive(Clone, Debug)]
struct DecidablePrimitive {
    name: &'static str,
    f: fn(&Nat) -> bool,
}

impl crate::kernel::StepProgram for DecidablePrimitive {
    fn step(&self, _: &Registry, input: &Nat, _: crate::kernel::State) -> Result<StepResult> {
        Ok(StepResult::Halted(Nat::from((self.f)(input) as u32)))
    }
    fn key(&self) -> Option<String> {
        Some(self.name.to_string())
    }
}

pub fn decide(reg: &Registry, d: DecidableName, n: &Nat, fuel: Fuel) -> Result<Decision> {
    Ok(match reg.run(d.0, n, fuel)? {
        StepResult::Halted(v) if v == Nat::default() => Decision::No,
        StepResult::Halted(_) => Decision::Yes,
        StepResult::Running(_) => Decision::NotYet,
    })
}

#[derive(Clone, Debug)]
struct OnlyOnes(ProgramIndex);

impl Routine for OnlyOnes {
    fn next(&self, _: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        if regs.is_empty() {
            regs.push(Nat::from(1u32));
            return Ok(Action::Call(self.0, input.clone()));
        }
        Ok(if expect(last)? == Nat::default() { Action::Diverge } else { Action::Halt(Nat::default()) })
    }
    fn key(&self) -> Option<String> {
        Some(self.0 .0.to_string())
    }
}

pub fn decidable_to_sd(reg: &Registry, d: DecidableName) -> SemiDecidableName {
    SemiDecidableName(reg.script(OnlyOnes(d.0)))
}

pub fn apply_realizer(reg: &Registry, r: Realizer, n: &Nat, fuel: Fuel) -> Result<Option<Nat>> {
    Ok(reg.run(r.0, n, fuel)?.halted().cloned())
}

pub fn product_name(a: &Nat, b: &Nat) -> Nat {
    pair(a, b)
}

pub fn product_split(n: &Nat) -> (Nat, Nat) {
    unpair(n)
}
