//! Lacombe opens: c.e. unions of basic sets, and the conversions between
//! Lacombe and Spreen representations.

use std::sync::Arc;

use crate::error::Result;
use crate::kernel::builtins::{emit, emitted, ExistsSearch};
use crate::kernel::pairing::{interleave_split, pair, unpair};
use crate::kernel::script::{expect, reg_get, reg_set, reg_small, Action, Outcome, Routine};
use crate::kernel::{Fuel, Nat, ProgramIndex, Registry, State, StepProgram, StepResult};
use crate::metric::DenseSequence;
use crate::numberings::{ce_enumerate, sd_member, CeName, SemiDecidableName, Verdict};

use super::{NameEquality, SpreenBasis, SpreenOpenName};

/// Basis numbering given by `member(⟨b,n⟩)`, a c.e. cover of the whole space
/// and an intersector `⟨b₁,b₂⟩ ↦` c.e. name whose union is `β(b₁) ∩ β(b₂)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LacombeBasisData {
    pub member: ProgramIndex,
    pub cover: CeName,
    pub intersector: ProgramIndex,
}

impl LacombeBasisData {
    pub fn intersection(&self, reg: &Registry, b1: &Nat, b2: &Nat, fuel: Fuel) -> Result<CeName> {
        Ok(CeName(reg.resolve_or_err(&reg.evaluate(self.intersector, &pair(b1, b2), fuel)?)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LacombeOpenName(pub CeName);

/// `⟨n,k⟩` halts with `b` iff the `k`-th enumerated basic `b` contains `n`.
#[derive(Clone, Debug)]
struct LacombeBody {
    l: ProgramIndex,
    member: ProgramIndex,
}

impl Routine for LacombeBody {
    fn next(&self, _: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        let (n, k) = unpair(input);
        let pc = reg_small(regs, 0);
        reg_set(regs, 0, Nat::from(pc + 1));
        match pc {
            0 => Ok(Action::Call(self.l, k)),
            1 => match emitted(&expect(last)?) {
                Some(b) => {
                    reg_set(regs, 1, b.clone());
                    Ok(Action::Call(self.member, pair(&b, &n)))
                }
                None => Ok(Action::Diverge),
            },
            _ => Ok(Action::Halt(reg_get(regs, 1))),
        }
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}", self.l.0, self.member.0))
    }
}

pub fn lacombe_sd(reg: &Registry, member: ProgramIndex, l: LacombeOpenName) -> SemiDecidableName {
    let body = reg.script(LacombeBody { l: l.0 .0, member });
    SemiDecidableName(reg.register(ExistsSearch { body }))
}

pub fn lacombe_member(reg: &Registry, lb: &LacombeBasisData, l: LacombeOpenName, n: &Nat, fuel: Fuel) -> Result<Verdict> {
    sd_member(reg, lacombe_sd(reg, lb.member, l), n, fuel)
}

pub fn lacombe_enumerate(reg: &Registry, l: LacombeOpenName, fuel: Fuel) -> Result<Vec<Nat>> {
    ce_enumerate(reg, l.0, fuel)
}

/// `⟨n,k⟩ ↦` the `k`-th enumerated basic if it contains `n`.
#[derive(Clone, Debug)]
struct FilteredStream {
    l: ProgramIndex,
    member: ProgramIndex,
}

impl Routine for FilteredStream {
    fn next(&self, _: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        let (n, k) = unpair(input);
        let pc = reg_small(regs, 0);
        reg_set(regs, 0, Nat::from(pc + 1));
        match pc {
            0 => Ok(Action::Call(self.l, k)),
            1 => match emitted(&expect(last)?) {
                Some(b) => {
                    reg_set(regs, 1, b.clone());
                    Ok(Action::Call(self.member, pair(&b, &n)))
                }
                None => Ok(Action::Halt(emit(None))),
            },
            _ => Ok(Action::Halt(emit(Some(reg_get(regs, 1))))),
        }
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}", self.l.0, self.member.0))
    }
}

pub fn lacombe_to_spreen(reg: &Registry, lb: &LacombeBasisData, l: LacombeOpenName) -> SpreenOpenName {
    let a = lacombe_sd(reg, lb.member, l);
    SpreenOpenName::new(a, reg.script(FilteredStream { l: l.0 .0, member: lb.member }))
}

/// `⟨⟨n,⟨b₁,b₂⟩⟩, k⟩ ↦` the `k`-th basic of `b₁ ∩ b₂` if it contains `n`.
#[derive(Clone, Debug)]
struct FilteredIntersector {
    intersector: ProgramIndex,
    member: ProgramIndex,
}

impl Routine for FilteredIntersector {
    fn next(&self, reg: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        let (arg, k) = unpair(input);
        let (n, bs) = unpair(&arg);
        let pc = reg_small(regs, 0);
        reg_set(regs, 0, Nat::from(pc + 1));
        match pc {
            0 => Ok(Action::Call(self.intersector, bs)),
            1 => Ok(Action::Call(reg.resolve_or_err(&expect(last)?)?, k)),
            2 => match emitted(&expect(last)?) {
                Some(b) => {
                    reg_set(regs, 1, b.clone());
                    Ok(Action::Call(self.member, pair(&b, &n)))
                }
                None => Ok(Action::Halt(emit(None))),
            },
            _ => Ok(Action::Halt(emit(Some(reg_get(regs, 1))))),
        }
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}", self.intersector.0, self.member.0))
    }
}

/// A Lacombe basis read as a Spreen basis with formal inclusion `=`.
pub fn lacombe_as_spreen_basis(reg: &Registry, lb: &LacombeBasisData) -> SpreenBasis {
    SpreenBasis {
        member: lb.member,
        g1: reg.script(FilteredStream { l: lb.cover.0, member: lb.member }),
        g2: reg.script(FilteredIntersector { intersector: lb.intersector, member: lb.member }),
        inclusion: Arc::new(NameEquality),
    }
}

/// `k ↦ (i,p)`: the `p`-th stream basic at `u_i` once `u_i ∈ A`.
#[derive(Clone, Debug)]
struct DenseStream {
    dense: ProgramIndex,
    a: ProgramIndex,
    f: ProgramIndex,
}

impl Routine for DenseStream {
    fn next(&self, _: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        let (i, p) = interleave_split(input);
        let pc = reg_small(regs, 0);
        reg_set(regs, 0, Nat::from(pc + 1));
        match pc {
            0 => Ok(Action::Call(self.dense, i)),
            1 => {
                let u = expect(last)?;
                reg_set(regs, 1, u.clone());
                Ok(Action::Call(self.a, u))
            }
            2 => Ok(Action::Call(self.f, pair(&reg_get(regs, 1), &p))),
            _ => Ok(Action::Halt(expect(last)?)),
        }
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}:{}", self.dense.0, self.a.0, self.f.0))
    }
}

/// Enumerates `F(u_i)(p)` over dense points `u_i` confirmed in the open.
pub fn spreen_to_lacombe(reg: &Registry, dense: DenseSequence, o: &SpreenOpenName) -> Result<LacombeOpenName> {
    let (a, f) = o.parts(reg)?;
    Ok(LacombeOpenName(CeName(reg.script(DenseStream { dense: dense.0, a: a.0, f }))))
}

/// `k ↦ (i,p)`: position `p` of `G₁(u_i)`.
#[derive(Clone, Debug)]
struct DenseCover {
    dense: ProgramIndex,
    g1: ProgramIndex,
}

impl Routine for DenseCover {
    fn next(&self, _: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        let (i, p) = interleave_split(input);
        let pc = reg_small(regs, 0);
        reg_set(regs, 0, Nat::from(pc + 1));
        match pc {
            0 => Ok(Action::Call(self.dense, i)),
            1 => Ok(Action::Call(self.g1, pair(&expect(last)?, &p))),
            _ => Ok(Action::Halt(expect(last)?)),
        }
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}", self.dense.0, self.g1.0))
    }
}

/// `k ↦ (i,p)`: position `p` of `G₂(u_i, b₁, b₂)` once `u_i ∈ β(b₁) ∩ β(b₂)`.
#[derive(Clone, Debug)]
struct DenseIntersection {
    dense: ProgramIndex,
    member: ProgramIndex,
    g2: ProgramIndex,
    b1: Nat,
    b2: Nat,
}

impl Routine for DenseIntersection {
    fn next(&self, _: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        let (i, p) = interleave_split(input);
        let pc = reg_small(regs, 0);
        reg_set(regs, 0, Nat::from(pc + 1));
        match pc {
            0 => Ok(Action::Call(self.dense, i)),
            1 => {
                let u = expect(last)?;
                reg_set(regs, 1, u.clone());
                Ok(Action::Call(self.member, pair(&self.b1, &u)))
            }
            2 => Ok(Action::Call(self.member, pair(&self.b2, &reg_get(regs, 1)))),
            3 => {
                let arg = pair(&reg_get(regs, 1), &pair(&self.b1, &self.b2));
                Ok(Action::Call(self.g2, pair(&arg, &p)))
            }
            _ => Ok(Action::Halt(expect(last)?)),
        }
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}:{}:{}:{}", self.dense.0, self.member.0, self.g2.0, self.b1, self.b2))
    }
}

/// Realizer `⟨b₁,b₂⟩ ↦` a c.e. name of `DenseIntersection`.
#[derive(Clone, Debug)]
struct DenseIntersector {
    dense: ProgramIndex,
    member: ProgramIndex,
    g2: ProgramIndex,
}

impl StepProgram for DenseIntersector {
    fn step(&self, reg: &Registry, input: &Nat, _: State) -> Result<StepResult> {
        let (b1, b2) = unpair(input);
        let i = reg.script(DenseIntersection { dense: self.dense, member: self.member, g2: self.g2, b1, b2 });
        Ok(StepResult::Halted(i.name()))
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}:{}", self.dense.0, self.member.0, self.g2.0))
    }
}

pub fn spreen_basis_to_lacombe_basis(reg: &Registry, basis: &SpreenBasis, dense: DenseSequence) -> LacombeBasisData {
    LacombeBasisData {
        member: basis.member,
        cover: CeName(reg.script(DenseCover { dense: dense.0, g1: basis.g1 })),
        intersector: reg.register(DenseIntersector { dense: dense.0, member: basis.member, g2: basis.g2 }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{ball, balls_spreen_basis, default_dense, ExactPoint, MetricSpace};
    use crate::numberings::ce_finite;
    use crate::reals::{rational, Rational};
    use crate::topology::{basic_as_open, spreen_member, spreen_stream};

    const FUEL: Fuel = Fuel(100_000);

    fn line(reg: &Registry, s: &MetricSpace, c: Rational, r: Rational) -> Nat {
        ball(reg, s, &ExactPoint::Line(c), r).unwrap().0
    }

    #[test]
    fn filtered_stream_keeps_containing_balls() {
        let reg = Registry::new();
        let q = MetricSpace::rationals(&reg);
        let basis = balls_spreen_basis(&reg, &q);
        let bs = [
            line(&reg, &q, rational(0, 1), rational(1, 1)),
            line(&reg, &q, rational(5, 1), rational(1, 1)),
            line(&reg, &q, rational(-1, 2), rational(1, 1)),
        ];
        let lb = spreen_basis_to_lacombe_basis(&reg, &basis, default_dense(&reg, &q).unwrap());
        let l = LacombeOpenName(ce_finite(&reg, &bs));
        let o = lacombe_to_spreen(&reg, &lb, l);
        let zero = q.point_name(&reg, &ExactPoint::Line(rational(0, 1))).unwrap();
        assert_eq!(spreen_member(&reg, &o, &zero, FUEL).unwrap(), Verdict::Yes);
        let mut d = spreen_stream(&reg, &o, &zero).unwrap();
        d.run_stages(&reg, 30, FUEL).unwrap();
        let mut got: Vec<Nat> = d.values().cloned().collect();
        got.dedup();
        assert_eq!(got, vec![bs[0].clone(), bs[2].clone()]);
    }

    #[test]
    fn spreen_ball_converts_to_balls_inside() {
        let reg = Registry::new();
        let q = MetricSpace::rationals(&reg);
        let basis = balls_spreen_basis(&reg, &q);
        let b = line(&reg, &q, rational(0, 1), rational(1, 1));
        let o = basic_as_open(&reg, &basis, &b);
        let l = spreen_to_lacombe(&reg, default_dense(&reg, &q).unwrap(), &o).unwrap();
        let got = lacombe_enumerate(&reg, l, Fuel(20_000)).unwrap();
        assert!(!got.is_empty());
        assert!(got.iter().all(|v| *v == b));
    }

    #[test]
    fn intersector_stays_inside_both() {
        let reg = Registry::new();
        let q = MetricSpace::rationals(&reg);
        let basis = balls_spreen_basis(&reg, &q);
        let lb = spreen_basis_to_lacombe_basis(&reg, &basis, default_dense(&reg, &q).unwrap());
        let b1 = line(&reg, &q, rational(0, 1), rational(1, 1));
        let b2 = line(&reg, &q, rational(1, 2), rational(1, 1));
        let c = lb.intersection(&reg, &b1, &b2, FUEL).unwrap();
        let got = ce_enumerate(&reg, c, Fuel(50_000)).unwrap();
        assert!(got.len() > 5);
        for v in got {
            for outer in [&b1, &b2] {
                assert_eq!(basis.inclusion.check(&reg, &v, outer, FUEL).unwrap(), crate::numberings::Decision::Yes);
            }
        }
    }
}
