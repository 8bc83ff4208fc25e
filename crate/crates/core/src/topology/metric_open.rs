//! Direct metric opens `⟨A, F⟩`: `F` maps a point name to a left-computable
//! radius with `B(x, F(x)) ⊆ O` for every `x ∈ O`.

use std::sync::Arc;

use crate::error::Result;
use crate::kernel::builtins::{emit, emitted};
use crate::kernel::pairing::{pair, unpair};
use crate::kernel::script::{expect, reg_get, reg_set, reg_small, Action, Outcome, Routine};
use crate::kernel::{Fuel, Nat, ProgramIndex, Registry};
use crate::metric::{ball_sd, BallName, MetricSpace};
use crate::numberings::{sd_member, SemiDecidableName, Verdict};
use crate::reals::{
    cauchy_sub, cauchy_to_left, cq_decode, exact_value, left_exact, rational, rational_real, CauchyReal,
    LeftReal, Rational,
};

use super::{SpreenOpenName, ConstStream};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MetricOpenName(pub Nat);

impl MetricOpenName {
    pub fn parts(&self, reg: &Registry) -> Result<(SemiDecidableName, ProgramIndex)> {
        let (a, f) = unpair(&self.0);
        Ok((SemiDecidableName(reg.resolve_or_err(&a)?), reg.resolve_or_err(&f)?))
    }
}

/// The caller asserts that `F(x)` is a left radius with `B(x, F(x)) ⊆ A`.
pub fn metric_open(a: SemiDecidableName, f: ProgramIndex) -> MetricOpenName {
    MetricOpenName(pair(&a.0.name(), &f.name()))
}

pub fn metric_member(reg: &Registry, o: &MetricOpenName, n: &Nat, fuel: Fuel) -> Result<Verdict> {
    let (a, _) = o.parts(reg)?;
    sd_member(reg, a, n, fuel)
}

/// `F(n)` as a left real.
pub fn metric_radius(reg: &Registry, o: &MetricOpenName, n: &Nat, fuel: Fuel) -> Result<LeftReal> {
    let (_, f) = o.parts(reg)?;
    Ok(LeftReal(reg.resolve_or_err(&reg.evaluate(f, n, fuel)?)?))
}

/// Left name of `r - d` with an exact fast path; non-positive slack is
/// harmless because only positive terms are ever used as radii.
fn slack(reg: &Registry, r: CauchyReal, d: CauchyReal) -> LeftReal {
    let diff = cauchy_sub(reg, r, d);
    match exact_value(reg, diff).and_then(|s| s.as_rational().cloned()) {
        Some(q) => left_exact(reg, q),
        None => cauchy_to_left(reg, diff),
    }
}

/// `x ↦ r - d(c, x)`: the radius program of a ball as a metric open.
#[derive(Clone, Debug)]
struct BallSlack {
    dist: ProgramIndex,
    center: Nat,
    radius: ProgramIndex,
}

impl Routine for BallSlack {
    fn next(&self, reg: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        if regs.is_empty() {
            regs.push(Nat::from(1u32));
            return Ok(Action::Call(self.dist, pair(&self.center, input)));
        }
        let d = CauchyReal(reg.resolve_or_err(&expect(last)?)?);
        Ok(Action::Halt(slack(reg, CauchyReal(self.radius), d).0.name()))
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}:{}", self.dist.0, self.center, self.radius.0))
    }
}

pub fn ball_metric_open(reg: &Registry, space: &MetricSpace, b: &BallName) -> Result<MetricOpenName> {
    let f = reg.script(BallSlack { dist: space.distance.0, center: b.center(), radius: b.radius(reg)?.0 });
    Ok(metric_open(ball_sd(reg, space, b), f))
}

/// The interval `(lo, hi)` of a line space, as the ball around its midpoint.
/// Its radius program is `x ↦ min(x - lo, hi - x)`.
pub fn interval_open(reg: &Registry, space: &MetricSpace, lo: &Rational, hi: &Rational) -> Result<MetricOpenName> {
    let mid = (lo + hi) * rational(1, 2);
    let half = (hi - lo) * rational(1, 2);
    let center = crate::metric::ExactPoint::Line(mid);
    let b = crate::metric::ball(reg, space, &center, half)?;
    ball_metric_open(reg, space, &b)
}

/// `⟨n,k⟩ ↦ ⟨n, q⟩` for the `k`-th term `q` of `F(n)` when `q > 0`.
#[derive(Clone, Debug)]
struct RadiusBalls {
    f: ProgramIndex,
}

impl Routine for RadiusBalls {
    fn next(&self, reg: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        let (n, k) = unpair(input);
        let pc = reg_small(regs, 0);
        reg_set(regs, 0, Nat::from(pc + 1));
        match pc {
            0 => Ok(Action::Call(self.f, n)),
            1 => Ok(Action::Call(reg.resolve_or_err(&expect(last)?)?, k)),
            _ => {
                let q = cq_decode(&expect(last)?);
                if q > Rational::default() {
                    let r = rational_real(reg, q);
                    Ok(Action::Halt(emit(Some(BallName::new(&n, r).0))))
                } else {
                    Ok(Action::Halt(emit(None)))
                }
            }
        }
    }
    fn key(&self) -> Option<String> {
        Some(self.f.0.to_string())
    }
}

pub fn metric_to_spreen(reg: &Registry, o: &MetricOpenName) -> Result<SpreenOpenName> {
    let (a, f) = o.parts(reg)?;
    Ok(SpreenOpenName::new(a, reg.script(RadiusBalls { f })))
}

/// `k ↦` left code of `r - d(n, m)` for the `k`-th stream ball `⟨m, r⟩` at `n`.
#[derive(Clone, Debug)]
struct SlackCodes {
    stream: ProgramIndex,
    dist: ProgramIndex,
    point: Nat,
}

impl Routine for SlackCodes {
    fn next(&self, reg: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        let pc = reg_small(regs, 0);
        reg_set(regs, 0, Nat::from(pc + 1));
        match pc {
            0 => Ok(Action::Call(self.stream, pair(&self.point, input))),
            1 => match emitted(&expect(last)?) {
                Some(b) => {
                    let (m, r) = unpair(&b);
                    reg_set(regs, 1, r);
                    Ok(Action::Call(self.dist, pair(&self.point, &m)))
                }
                None => Ok(Action::Halt(emit(None))),
            },
            _ => {
                let d = CauchyReal(reg.resolve_or_err(&expect(last)?)?);
                let r = CauchyReal(reg.resolve_or_err(&reg_get(regs, 1))?);
                Ok(Action::Halt(emit(Some(slack(reg, r, d).0.name()))))
            }
        }
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}:{}", self.stream.0, self.dist.0, self.point))
    }
}

/// `n ↦ sup_k (r_k - d(n, m_k))` over the stream balls `⟨m_k, r_k⟩` at `n`.
#[derive(Clone, Debug)]
struct SupRadius {
    stream: ProgramIndex,
    dist: ProgramIndex,
}

impl crate::kernel::StepProgram for SupRadius {
    fn step(&self, reg: &Registry, input: &Nat, _: crate::kernel::State) -> Result<crate::kernel::StepResult> {
        let codes = reg.script(SlackCodes { stream: self.stream, dist: self.dist, point: input.clone() });
        let sup = crate::reals::left_sup(reg, crate::numberings::CeName(codes));
        Ok(crate::kernel::StepResult::Halted(sup.0.name()))
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}", self.stream.0, self.dist.0))
    }
}

/// Requires an open over the ball basis of `space`.
pub fn spreen_to_metric(reg: &Registry, space: &Arc<MetricSpace>, o: &SpreenOpenName) -> Result<MetricOpenName> {
    let (a, stream) = o.parts(reg)?;
    Ok(metric_open(a, reg.register(SupRadius { stream, dist: space.distance.0 })))
}

/// Ball `B(n, q)` as a one-element stream, for fixtures.
pub fn point_ball_stream(reg: &Registry, b: &BallName) -> ProgramIndex {
    reg.register(ConstStream(b.0.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{ExactPoint, SETUP_FUEL};
    use crate::reals::left_term;

    #[test]
    fn interval_radius_at_half() {
        let reg = Registry::new();
        let q = MetricSpace::rationals(&reg);
        let o = interval_open(&reg, &q, &rational(0, 1), &rational(1, 1)).unwrap();
        let half = q.point_name(&reg, &ExactPoint::Line(rational(1, 2))).unwrap();
        assert_eq!(metric_member(&reg, &o, &half, Fuel(10_000)).unwrap(), Verdict::Yes);
        let l = metric_radius(&reg, &o, &half, SETUP_FUEL).unwrap();
        let t = left_term(&reg, l, 30, SETUP_FUEL).unwrap().unwrap();
        assert!(t < rational(1, 2) && t > rational(1, 2) - crate::reals::dyadic(20));
    }

    #[test]
    fn spreen_roundtrip_keeps_radius() {
        let reg = Registry::new();
        let q = MetricSpace::rationals(&reg);
        let o = interval_open(&reg, &q, &rational(0, 1), &rational(1, 1)).unwrap();
        let back = spreen_to_metric(&reg, &q, &metric_to_spreen(&reg, &o).unwrap()).unwrap();
        let x = q.point_name(&reg, &ExactPoint::Line(rational(1, 4))).unwrap();
        assert_eq!(metric_member(&reg, &back, &x, Fuel(10_000)).unwrap(), Verdict::Yes);
        let l = metric_radius(&reg, &back, &x, SETUP_FUEL).unwrap();
        let t = left_term(&reg, l, 6, SETUP_FUEL).unwrap().unwrap();
        assert!(t > Rational::default() && t < rational(1, 4));
    }
}
