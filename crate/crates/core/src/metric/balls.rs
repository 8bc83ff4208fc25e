//! Basic balls `⟨center, radius⟩`, their formal inclusion, and the
//! intersection radius `Θ(x,b₁,b₂) = min(r₁ - d(x,c₁), r₂ - d(x,c₂))`.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::builtins::{emit, Curry};
use crate::kernel::pairing::{pair, unpair};
use crate::kernel::script::{expect, reg_get, reg_set, reg_small, Action, Outcome, Routine, Sub};
use crate::kernel::{small, Fuel, Nat, ProgramIndex, Registry, State, StepProgram, StepResult};
use crate::numberings::{Decision, SemiDecidableName, Verdict};
use crate::reals::{
    cauchy_add, cauchy_min, cauchy_sub, cq_decode, exceeds_dyadic, lt_program, rational_real,
    CauchyReal, Rational, Surd,
};
use crate::topology::{FormalInclusion, SpreenBasis};

use super::{exact_radius, ExactPoint, MetricSpace, SETUP_FUEL};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BallName(pub Nat);

impl BallName {
    pub fn new(center: &Nat, radius: CauchyReal) -> BallName {
        BallName(pair(center, &radius.0.name()))
    }

    pub fn center(&self) -> Nat {
        unpair(&self.0).0
    }

    pub fn radius(&self, reg: &Registry) -> Result<CauchyReal> {
        Ok(CauchyReal(reg.resolve_or_err(&unpair(&self.0).1)?))
    }
}

/// Ball with an exact center and rational radius.
pub fn ball(reg: &Registry, space: &MetricSpace, center: &ExactPoint, radius: Rational) -> Result<BallName> {
    let c = space
        .point_name(reg, center)
        .ok_or_else(|| Error::Invalid(format!("{center} is not a point of {}", space.handle.0)))?;
    Ok(BallName::new(&c, rational_real(reg, radius)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InclusionMode {
    /// Decide `d(c₁,c₂) + r₁ ≤ r₂` on exactly known data.
    Exact,
    /// Confirm `d + r₁ < r₂` or refute by `r₂ < d + r₁`, within fuel.
    Semidecide,
}

/// `⟨b,p⟩` halts iff `d(c,p) < r` for `b = ⟨c,r⟩`.
#[derive(Clone, Debug)]
pub struct BallMember {
    pub dist: ProgramIndex,
}

impl Routine for BallMember {
    fn next(&self, reg: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        // registers: pc, distance name, n, d_n
        let (b, p) = unpair(input);
        let (c, r) = unpair(&b);
        match reg_small(regs, 0) {
            0 => {
                reg_set(regs, 0, Nat::from(1u32));
                Ok(Action::Call(self.dist, pair(&c, &p)))
            }
            1 => {
                let d = expect(last)?;
                *regs = vec![Nat::from(2u32), d.clone(), Nat::default(), Nat::default()];
                Ok(Action::Call(reg.resolve_or_err(&d)?, Nat::default()))
            }
            2 => {
                regs[0] = Nat::from(3u32);
                regs[3] = expect(last)?;
                Ok(Action::Call(reg.resolve_or_err(&r)?, regs[2].clone()))
            }
            _ => {
                let n = reg_get(regs, 2);
                let gap = cq_decode(&expect(last)?) - cq_decode(&regs[3]);
                if exceeds_dyadic(&gap, small(&n), 1) {
                    return Ok(Action::Halt(Nat::default()));
                }
                regs[0] = Nat::from(2u32);
                regs[2] = &n + 1u32;
                Ok(Action::Call(reg.resolve_or_err(&regs[1])?, regs[2].clone()))
            }
        }
    }
    fn key(&self) -> Option<String> {
        Some(self.dist.0.to_string())
    }
}

pub fn ball_member_program(reg: &Registry, space: &MetricSpace) -> ProgramIndex {
    reg.script(BallMember { dist: space.distance.0 })
}

pub fn ball_sd(reg: &Registry, space: &MetricSpace, b: &BallName) -> SemiDecidableName {
    let member = ball_member_program(reg, space);
    SemiDecidableName(reg.script(Curry { prog: member, fixed: b.0.clone() }))
}

pub fn ball_member(reg: &Registry, space: &MetricSpace, b: &BallName, p: &Nat, fuel: Fuel) -> Result<Verdict> {
    let member = ball_member_program(reg, space);
    Ok(match reg.run(member, &pair(&b.0, p), fuel)? {
        StepResult::Halted(_) => Verdict::Yes,
        StepResult::Running(_) => Verdict::NotYet,
    })
}

fn exact_parts(reg: &Registry, space: &MetricSpace, b1: &BallName, b2: &BallName) -> Result<(Surd, Surd, Surd)> {
    let not_exact = || Error::NotExact(format!("balls on {} lack exact data", space.handle.0));
    let d = space.exact_distance(reg, &b1.center(), &b2.center()).ok_or_else(not_exact)?;
    let r1 = exact_radius(reg, b1.radius(reg)?).ok_or_else(not_exact)?;
    let r2 = exact_radius(reg, b2.radius(reg)?).ok_or_else(not_exact)?;
    Ok((d, r1, r2))
}

/// Formal inclusion `b₁ ⊆̊ b₂`, i.e. `d(c₁,c₂) + r₁ ≤ r₂`.
pub fn ball_formal_incl(
    reg: &Registry,
    space: &MetricSpace,
    b1: &BallName,
    b2: &BallName,
    mode: InclusionMode,
    fuel: Fuel,
) -> Result<Decision> {
    match mode {
        InclusionMode::Exact => {
            let (d, r1, r2) = exact_parts(reg, space, b1, b2)?;
            let slack = &(&r2 - &r1) - &d;
            match slack.signum() {
                Some(Ordering::Less) => Ok(Decision::No),
                Some(_) => Ok(Decision::Yes),
                None => Err(Error::NotExact(format!("sign of {slack}"))),
            }
        }
        InclusionMode::Semidecide => {
            let d = space.distance(reg, &b1.center(), &b2.center())?;
            let lhs = cauchy_add(reg, d, b1.radius(reg)?);
            let r2 = b2.radius(reg)?;
            let mut yes = Sub::start(reg, lt_program(reg, lhs, r2), Nat::default())?;
            let mut no = Sub::start(reg, lt_program(reg, r2, lhs), Nat::default())?;
            for spent in 0..fuel.0 {
                let sub = if spent % 2 == 0 { &mut yes } else { &mut no };
                if sub.advance(reg)?.is_some() {
                    return Ok(if spent % 2 == 0 { Decision::Yes } else { Decision::No });
                }
            }
            Ok(Decision::NotYet)
        }
    }
}

/// `min(r₁ - d₁, r₂ - d₂)`, exact whenever all four parts are.
pub fn theta_from(reg: &Registry, r1: CauchyReal, d1: CauchyReal, r2: CauchyReal, d2: CauchyReal) -> CauchyReal {
    let s1 = cauchy_sub(reg, r1, d1);
    let s2 = cauchy_sub(reg, r2, d2);
    cauchy_min(reg, s1, s2)
}

pub fn theta(reg: &Registry, space: &MetricSpace, x: &Nat, b1: &BallName, b2: &BallName) -> Result<CauchyReal> {
    let d1 = space.distance(reg, x, &b1.center())?;
    let d2 = space.distance(reg, x, &b2.center())?;
    Ok(theta_from(reg, b1.radius(reg)?, d1, b2.radius(reg)?, d2))
}

/// With `F(z) = r - d(c,z)`: `d(x,z) ≤ F(x)/3` implies `d(x,z) + F(x)/3 ≤ F(z)`.
/// Returns whether the implication holds on the given exact instance.
pub fn check_third_lemma(reg: &Registry, space: &MetricSpace, b: &BallName, x: &Nat, z: &Nat) -> Result<bool> {
    let not_exact = || Error::NotExact("third lemma needs exact data".into());
    let c = b.center();
    let r = exact_radius(reg, b.radius(reg)?).ok_or_else(not_exact)?;
    let dist = |p: &Nat, q: &Nat| space.exact_distance(reg, p, q).ok_or_else(not_exact);
    let fx = &r - &dist(&c, x)?;
    if fx.signum() != Some(Ordering::Greater) {
        return Err(Error::Invalid("the point lies outside the ball".into()));
    }
    let fz = &r - &dist(&c, z)?;
    let third = fx.scale(&crate::reals::rational(1, 3));
    let dxz = dist(x, z)?;
    let premise = (&third - &dxz).signum().ok_or_else(not_exact)?;
    if premise == Ordering::Less {
        return Ok(true);
    }
    let conclusion = (&(&fz - &dxz) - &third).signum().ok_or_else(not_exact)?;
    Ok(conclusion != Ordering::Less)
}

/// `⟨n,k⟩ ↦ ⟨n, 1⟩`: every point's stream is the unit ball around it.
#[derive(Clone, Debug)]
pub struct G1Ball {
    pub one: ProgramIndex,
}

impl StepProgram for G1Ball {
    fn step(&self, _: &Registry, input: &Nat, _: State) -> Result<StepResult> {
        let (n, _) = unpair(input);
        Ok(StepResult::Halted(emit(Some(pair(&n, &self.one.name())))))
    }
    fn key(&self) -> Option<String> {
        Some(self.one.0.to_string())
    }
}

/// `⟨⟨n,⟨b₁,b₂⟩⟩,k⟩ ↦ ⟨n, Θ(n,b₁,b₂)⟩` for every `k`.
#[derive(Clone, Debug)]
pub struct G2Ball {
    pub dist: ProgramIndex,
}

impl Routine for G2Ball {
    fn next(&self, reg: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        let (arg, _) = unpair(input);
        let (n, bs) = unpair(&arg);
        let (b1, b2) = unpair(&bs);
        let (b1, b2) = (BallName(b1), BallName(b2));
        let pc = reg_small(regs, 0);
        reg_set(regs, 0, Nat::from(pc + 1));
        match pc {
            0 => Ok(Action::Call(self.dist, pair(&n, &b1.center()))),
            1 => {
                reg_set(regs, 1, expect(last)?);
                Ok(Action::Call(self.dist, pair(&n, &b2.center())))
            }
            _ => {
                let d1 = CauchyReal(reg.resolve_or_err(&regs[1])?);
                let d2 = CauchyReal(reg.resolve_or_err(&expect(last)?)?);
                let t = theta_from(reg, b1.radius(reg)?, d1, b2.radius(reg)?, d2);
                Ok(Action::Halt(emit(Some(pair(&n, &t.0.name())))))
            }
        }
    }
    fn key(&self) -> Option<String> {
        Some(self.dist.0.to_string())
    }
}

/// Ball inclusion on a fixed space.
pub struct BallInclusion {
    pub space: Arc<MetricSpace>,
    pub mode: InclusionMode,
}

impl FormalInclusion for BallInclusion {
    fn check(&self, reg: &Registry, b1: &Nat, b2: &Nat, fuel: Fuel) -> Result<Decision> {
        ball_formal_incl(reg, &self.space, &BallName(b1.clone()), &BallName(b2.clone()), self.mode, fuel)
    }
}

/// The metric balls as a Spreen basis with `G₁ = unit balls` and `G₂ = Θ`.
pub fn balls_spreen_basis(reg: &Registry, space: &Arc<MetricSpace>) -> SpreenBasis {
    let one = rational_real(reg, crate::reals::rational(1, 1)).0;
    SpreenBasis {
        member: ball_member_program(reg, space),
        g1: reg.register(G1Ball { one }),
        g2: reg.script(G2Ball { dist: space.distance.0 }),
        inclusion: Arc::new(BallInclusion { space: space.clone(), mode: InclusionMode::Exact }),
    }
}

/// Evaluates the radius name of a ball to a rational at precision `n`.
pub fn radius_approx(reg: &Registry, b: &BallName, n: u64) -> Result<Rational> {
    let r = reg.evaluate(b.radius(reg)?.0, &Nat::from(n), SETUP_FUEL)?;
    Ok(cq_decode(&r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reals::rational;

    fn line(q: Rational) -> ExactPoint {
        ExactPoint::Line(q)
    }

    #[test]
    fn membership_on_rationals() {
        let reg = Registry::new();
        let s = MetricSpace::rationals(&reg);
        let b = ball(&reg, &s, &line(rational(0, 1)), rational(1, 1)).unwrap();
        let half = s.point_name(&reg, &line(rational(1, 2))).unwrap();
        let one = s.point_name(&reg, &line(rational(1, 1))).unwrap();
        assert_eq!(ball_member(&reg, &s, &b, &half, Fuel(10_000)).unwrap(), Verdict::Yes);
        assert_eq!(ball_member(&reg, &s, &b, &one, Fuel(10_000)).unwrap(), Verdict::NotYet);
    }

    #[test]
    fn formal_inclusion_is_not_actual_inclusion() {
        let reg = Registry::new();
        let s = MetricSpace::unit_interval(&reg);
        let big = ball(&reg, &s, &line(rational(1, 2)), rational(2, 1)).unwrap();
        let small_ = ball(&reg, &s, &line(rational(1, 2)), rational(1, 1)).unwrap();
        let exact = ball_formal_incl(&reg, &s, &big, &small_, InclusionMode::Exact, Fuel(0)).unwrap();
        assert_eq!(exact, Decision::No);
        let semi = ball_formal_incl(&reg, &s, &big, &small_, InclusionMode::Semidecide, Fuel(1_000)).unwrap();
        assert_eq!(semi, Decision::No);
        let back = ball_formal_incl(&reg, &s, &small_, &big, InclusionMode::Exact, Fuel(0)).unwrap();
        assert_eq!(back, Decision::Yes);
    }

    #[test]
    fn equal_balls_are_not_yet_in_semidecide_mode() {
        let reg = Registry::new();
        let s = MetricSpace::rationals(&reg);
        let b = ball(&reg, &s, &line(rational(0, 1)), rational(1, 1)).unwrap();
        assert_eq!(ball_formal_incl(&reg, &s, &b, &b, InclusionMode::Exact, Fuel(0)).unwrap(), Decision::Yes);
        let semi = ball_formal_incl(&reg, &s, &b, &b, InclusionMode::Semidecide, Fuel(2_000)).unwrap();
        assert_eq!(semi, Decision::NotYet);
    }

    #[test]
    fn theta_on_the_epsilon_fixture() {
        let reg = Registry::new();
        let s = MetricSpace::unit_interval(&reg);
        let z = s.point_name(&reg, &line(rational(1, 1))).unwrap();
        for eps in [rational(1, 2), rational(1, 10), rational(1, 1000)] {
            let b1 = ball(&reg, &s, &line(rational(1, 2)), rational(1, 2) + &eps).unwrap();
            let b2 = ball(&reg, &s, &line(rational(1, 1)), rational(1, 1)).unwrap();
            let t = theta(&reg, &s, &z, &b1, &b2).unwrap();
            assert_eq!(exact_radius(&reg, t).unwrap().as_rational(), Some(&eps));
        }
    }

    #[test]
    fn third_lemma_fixture() {
        let reg = Registry::new();
        let s = MetricSpace::rationals(&reg);
        let b = ball(&reg, &s, &line(rational(0, 1)), rational(1, 1)).unwrap();
        let x = s.point_name(&reg, &line(rational(1, 2))).unwrap();
        let z = s.point_name(&reg, &line(rational(2, 3))).unwrap();
        assert!(check_third_lemma(&reg, &s, &b, &x, &z).unwrap());
    }
}
