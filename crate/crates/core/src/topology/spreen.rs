//! Spreen opens `⟨A, F⟩`: a semi-decidable set `A` of point names and a
//! stream program `F` with `⟨n,k⟩ ↦` emit-coded basic names whose union,
//! for `n ∈ A`, lies inside the open and contains the point.

use crate::error::Result;
use crate::kernel::builtins::{emit, emitted, Compose, Curry};
use crate::kernel::dovetail::{enumerate, Dovetail, EnumeratorSource};
use crate::kernel::pairing::{interleave_split, pair, unpair};
use crate::kernel::script::{expect, reg_get, reg_set, reg_small, Action, Outcome, Routine};
use crate::kernel::{Fuel, Nat, ProgramIndex, Registry, State, StepProgram, StepResult};
use crate::numberings::{
    ce_finite, sd_always, sd_intersect, sd_member_counted, sd_never, sd_union_ce, CeName, Decision,
    Realizer, SemiDecidableName, Verdict,
};

use super::{FormalInclusion, SpreenBasis};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpreenOpenName(pub Nat);

impl SpreenOpenName {
    pub fn new(a: SemiDecidableName, f: ProgramIndex) -> Self {
        SpreenOpenName(pair(&a.0.name(), &f.name()))
    }

    pub fn parts(&self, reg: &Registry) -> Result<(SemiDecidableName, ProgramIndex)> {
        let (a, f) = unpair(&self.0);
        Ok((SemiDecidableName(reg.resolve_or_err(&a)?), reg.resolve_or_err(&f)?))
    }
}

pub fn spreen_member(reg: &Registry, o: &SpreenOpenName, n: &Nat, fuel: Fuel) -> Result<Verdict> {
    Ok(spreen_member_counted(reg, o, n, fuel)?.0)
}

pub fn spreen_member_counted(reg: &Registry, o: &SpreenOpenName, n: &Nat, fuel: Fuel) -> Result<(Verdict, u64)> {
    let (a, _) = o.parts(reg)?;
    sd_member_counted(reg, a, n, fuel)
}

/// The basic names `F(n)` in canonical dovetail order.
pub fn spreen_stream(reg: &Registry, o: &SpreenOpenName, n: &Nat) -> Result<Dovetail<EnumeratorSource>> {
    let (_, f) = o.parts(reg)?;
    Ok(enumerate(f, Some(n.clone())))
}

/// `⟨n,k⟩ ↦ b` for every `n` and `k`.
#[derive(Clone, Debug)]
pub struct ConstStream(pub Nat);

impl StepProgram for ConstStream {
    fn step(&self, _: &Registry, _: &Nat, _: State) -> Result<StepResult> {
        Ok(StepResult::Halted(emit(Some(self.0.clone()))))
    }
    fn key(&self) -> Option<String> {
        Some(self.0.to_string())
    }
}

pub fn basic_as_open(reg: &Registry, basis: &SpreenBasis, b: &Nat) -> SpreenOpenName {
    BasicAsOpen { member: basis.member }.open(reg, b)
}

/// Realizer `b ↦ basic_as_open(b)`: the basic-preimage map of the identity.
#[derive(Clone, Debug)]
pub struct BasicAsOpen {
    pub member: ProgramIndex,
}

impl BasicAsOpen {
    pub fn open(&self, reg: &Registry, b: &Nat) -> SpreenOpenName {
        let a = reg.script(Curry { prog: self.member, fixed: b.clone() });
        SpreenOpenName::new(SemiDecidableName(a), reg.register(ConstStream(b.clone())))
    }
}

impl StepProgram for BasicAsOpen {
    fn step(&self, reg: &Registry, input: &Nat, _: State) -> Result<StepResult> {
        Ok(StepResult::Halted(self.open(reg, input).0))
    }
    fn key(&self) -> Option<String> {
        Some(self.member.0.to_string())
    }
}

pub fn whole_space_open(reg: &Registry, basis: &SpreenBasis) -> SpreenOpenName {
    SpreenOpenName::new(sd_always(reg), basis.g1)
}

pub fn empty_open(reg: &Registry) -> SpreenOpenName {
    SpreenOpenName::new(sd_never(reg), reg.register(crate::kernel::builtins::Const(Nat::default())))
}

/// `k ↦` the `A`-part of the `k`-th enumerated open code.
#[derive(Clone, Debug)]
struct ProjectA {
    codes: ProgramIndex,
}

impl Routine for ProjectA {
    fn next(&self, _: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        if regs.is_empty() {
            regs.push(Nat::from(1u32));
            return Ok(Action::Call(self.codes, input.clone()));
        }
        Ok(Action::Halt(emit(emitted(&expect(last)?).map(|o| unpair(&o).0))))
    }
    fn key(&self) -> Option<String> {
        Some(self.codes.0.to_string())
    }
}

/// `⟨n,k⟩` with `k ↦ (i,m)`: position `m` of the `i`-th part's stream,
/// gated by the part's membership test.
#[derive(Clone, Debug)]
struct UnionStream {
    codes: ProgramIndex,
}

impl Routine for UnionStream {
    fn next(&self, reg: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        let (n, k) = unpair(input);
        let (i, m) = interleave_split(&k);
        let pc = reg_small(regs, 0);
        reg_set(regs, 0, Nat::from(pc + 1));
        match pc {
            0 => Ok(Action::Call(self.codes, i)),
            1 => {
                let Some(code) = emitted(&expect(last)?) else { return Ok(Action::Halt(Nat::default())) };
                let (a, f) = unpair(&code);
                match (reg.resolve(&a), reg.resolve(&f)) {
                    (Some(a), Some(_)) => {
                        reg_set(regs, 1, f);
                        Ok(Action::Call(a, n))
                    }
                    _ => Ok(Action::Halt(Nat::default())),
                }
            }
            2 => Ok(Action::Call(reg.resolve_or_err(&reg_get(regs, 1))?, pair(&n, &m))),
            _ => Ok(Action::Halt(expect(last)?)),
        }
    }
    fn key(&self) -> Option<String> {
        Some(self.codes.0.to_string())
    }
}

/// Union of a c.e. family of opens given by a c.e. name of their codes.
pub fn spreen_union(reg: &Registry, codes: CeName) -> SpreenOpenName {
    let a_codes = CeName(reg.script(ProjectA { codes: codes.0 }));
    let a = sd_union_ce(reg, a_codes);
    SpreenOpenName::new(a, reg.script(UnionStream { codes: codes.0 }))
}

pub fn spreen_union_of(reg: &Registry, opens: &[SpreenOpenName]) -> SpreenOpenName {
    let codes: Vec<Nat> = opens.iter().map(|o| o.0.clone()).collect();
    spreen_union(reg, ce_finite(reg, &codes))
}

/// `⟨n,k⟩` with `k ↦ (⟨i,j⟩, m)`: position `m` of `G₂(n, F₁(n)ᵢ, F₂(n)ⱼ)`.
#[derive(Clone, Debug)]
struct IntersectStream {
    f1: ProgramIndex,
    f2: ProgramIndex,
    g2: ProgramIndex,
}

impl Routine for IntersectStream {
    fn next(&self, _: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        let (n, k) = unpair(input);
        let (ij, m) = interleave_split(&k);
        let (i, j) = unpair(&ij);
        let pc = reg_small(regs, 0);
        reg_set(regs, 0, Nat::from(pc + 1));
        match pc {
            0 => Ok(Action::Call(self.f1, pair(&n, &i))),
            1 => match emitted(&expect(last)?) {
                Some(u1) => {
                    reg_set(regs, 1, u1);
                    Ok(Action::Call(self.f2, pair(&n, &j)))
                }
                None => Ok(Action::Halt(Nat::default())),
            },
            2 => match emitted(&expect(last)?) {
                Some(u2) => {
                    let arg = pair(&n, &pair(&reg_get(regs, 1), &u2));
                    Ok(Action::Call(self.g2, pair(&arg, &m)))
                }
                None => Ok(Action::Halt(Nat::default())),
            },
            _ => Ok(Action::Halt(expect(last)?)),
        }
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}:{}", self.f1.0, self.f2.0, self.g2.0))
    }
}

pub fn spreen_intersect(
    reg: &Registry,
    basis: &SpreenBasis,
    o1: &SpreenOpenName,
    o2: &SpreenOpenName,
) -> Result<SpreenOpenName> {
    let (a1, f1) = o1.parts(reg)?;
    let (a2, f2) = o2.parts(reg)?;
    let a = sd_intersect(reg, a1, a2);
    Ok(SpreenOpenName::new(a, reg.script(IntersectStream { f1, f2, g2: basis.g2 })))
}

/// `⟨n,k⟩` with `k ↦ (i,j)`: position `j` of the stream of
/// `pre(F_o(f(n))ᵢ)` evaluated at `n`.
#[derive(Clone, Debug)]
struct PreimageStream {
    f: ProgramIndex,
    fo: ProgramIndex,
    pre: ProgramIndex,
}

impl Routine for PreimageStream {
    fn next(&self, reg: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        let (n, k) = unpair(input);
        let (i, j) = interleave_split(&k);
        let pc = reg_small(regs, 0);
        reg_set(regs, 0, Nat::from(pc + 1));
        match pc {
            0 => Ok(Action::Call(self.f, n)),
            1 => Ok(Action::Call(self.fo, pair(&expect(last)?, &i))),
            2 => match emitted(&expect(last)?) {
                Some(b) => Ok(Action::Call(self.pre, b)),
                None => Ok(Action::Halt(Nat::default())),
            },
            3 => {
                let (_, fp) = unpair(&expect(last)?);
                Ok(Action::Call(reg.resolve_or_err(&fp)?, pair(&n, &j)))
            }
            _ => Ok(Action::Halt(expect(last)?)),
        }
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}:{}", self.f.0, self.fo.0, self.pre.0))
    }
}

/// Preimage under a realizer `f`, given a realizer `pre` of basic preimages
/// (`b ↦` open code of `f⁻¹(β(b))`).
pub fn spreen_preimage(reg: &Registry, f: Realizer, pre: Realizer, o: &SpreenOpenName) -> Result<SpreenOpenName> {
    let (a, fo) = o.parts(reg)?;
    let a = reg.script(Compose { outer: a.0, inner: f.0 });
    let stream = reg.script(PreimageStream { f: f.0, fo, pre: pre.0 });
    Ok(SpreenOpenName::new(SemiDecidableName(a), stream))
}

/// `b ⊆̊ (u_k)`: some element of the sequence formally contains `b`.
pub fn incl_in_sequence(
    reg: &Registry,
    inc: &dyn FormalInclusion,
    b: &Nat,
    seq: &[Nat],
    fuel: Fuel,
) -> Result<Decision> {
    let mut all_no = true;
    for u in seq {
        match inc.check(reg, b, u, fuel)? {
            Decision::Yes => return Ok(Decision::Yes),
            Decision::No => {}
            Decision::NotYet => all_no = false,
        }
    }
    Ok(if all_no && !seq.is_empty() { Decision::No } else { Decision::NotYet })
}

/// `(u_p) ⊆̊ (w_k)`: every `u_p` is formally inside some `w_k`.
pub fn seq_incl_seq(
    reg: &Registry,
    inc: &dyn FormalInclusion,
    us: &[Nat],
    ws: &[Nat],
    fuel: Fuel,
) -> Result<Decision> {
    let mut out = Decision::Yes;
    for u in us {
        match incl_in_sequence(reg, inc, u, ws, fuel)? {
            Decision::Yes => {}
            Decision::No => return Ok(Decision::No),
            Decision::NotYet => out = Decision::NotYet,
        }
    }
    Ok(out)
}

/// Sampled check of `o₁ ⊆̊ o₂`: at each point confirmed in `O₁`, membership
/// in `O₂` and `F₁(p) ⊆̊ F₂(p)` on stream prefixes of `stages` dovetail stages.
pub fn open_formal_incl_sampled(
    reg: &Registry,
    inc: &dyn FormalInclusion,
    o1: &SpreenOpenName,
    o2: &SpreenOpenName,
    points: &[Nat],
    stages: u64,
    fuel: Fuel,
) -> Result<Decision> {
    let mut out = Decision::Yes;
    for p in points {
        if spreen_member(reg, o1, p, fuel)? != Verdict::Yes {
            continue;
        }
        if spreen_member(reg, o2, p, fuel)? != Verdict::Yes {
            out = Decision::NotYet;
            continue;
        }
        let mut s1 = spreen_stream(reg, o1, p)?;
        let mut s2 = spreen_stream(reg, o2, p)?;
        let u: Vec<Nat> = s1.run_stages(reg, stages, fuel)?.iter().map(|e| e.value.clone()).collect();
        let w: Vec<Nat> = s2.run_stages(reg, stages, fuel)?.iter().map(|e| e.value.clone()).collect();
        match seq_incl_seq(reg, inc, &u, &w, fuel)? {
            Decision::Yes => {}
            Decision::No => return Ok(Decision::No),
            Decision::NotYet => out = Decision::NotYet,
        }
    }
    Ok(out)
}
