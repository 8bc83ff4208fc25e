//! Nogina opens `⟨A, C⟩` (a point name in `A` is mapped by `C` to a basic
//! name around it inside the open) and the Moschovakis conversion to
//! Lacombe form through a universal sequence of dense names.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::builtins::{emit, emitted};
use crate::kernel::pairing::{pair, unpair};
use crate::kernel::script::{expect, reg_get, reg_set, reg_small, Action, Outcome, Routine};
use crate::kernel::{Fuel, Nat, ProgramIndex, Registry};
use crate::metric::{ball_sd, theta_from, BallName, DenseSequence, MetricSpace, Pnk};
use crate::numberings::{sd_member, CeName, SemiDecidableName, Verdict};
use crate::reals::{exact_real, lt_program, CauchyReal, Surd, dyadic};

use super::LacombeOpenName;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NoginaOpenName(pub Nat);

impl NoginaOpenName {
    pub fn new(a: SemiDecidableName, c: ProgramIndex) -> Self {
        NoginaOpenName(pair(&a.0.name(), &c.name()))
    }

    pub fn parts(&self, reg: &Registry) -> Result<(SemiDecidableName, ProgramIndex)> {
        let (a, c) = unpair(&self.0);
        Ok((SemiDecidableName(reg.resolve_or_err(&a)?), reg.resolve_or_err(&c)?))
    }
}

pub fn nogina_member(reg: &Registry, o: &NoginaOpenName, n: &Nat, fuel: Fuel) -> Result<Verdict> {
    sd_member(reg, o.parts(reg)?.0, n, fuel)
}

/// `w ↦ B(w, Θ(w, b, b))` for a fixed ball `b`.
#[derive(Clone, Debug)]
struct ThetaCenter {
    dist: ProgramIndex,
    center: Nat,
    radius: ProgramIndex,
}

impl Routine for ThetaCenter {
    fn next(&self, reg: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        if regs.is_empty() {
            regs.push(Nat::from(1u32));
            return Ok(Action::Call(self.dist, pair(input, &self.center)));
        }
        let d = CauchyReal(reg.resolve_or_err(&expect(last)?)?);
        let r = CauchyReal(self.radius);
        Ok(Action::Halt(BallName::new(input, theta_from(reg, r, d, r, d)).0))
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}:{}", self.dist.0, self.center, self.radius.0))
    }
}

/// A ball as a Nogina open, with `C(w) = B(w, r - d(w, c))`.
pub fn ball_nogina_open(reg: &Registry, space: &MetricSpace, b: &BallName) -> Result<NoginaOpenName> {
    let c = reg.script(ThetaCenter { dist: space.distance.0, center: b.center(), radius: b.radius(reg)?.0 });
    Ok(NoginaOpenName::new(ball_sd(reg, space, b), c))
}

/// `t ↦ u_{φ_k(t)}` while `φ_n(n)` runs for more than `t` steps, then
/// constant at its halting step.
pub fn moschovakis_pnk(reg: &Registry, n: ProgramIndex, k: ProgramIndex, dense: DenseSequence) -> ProgramIndex {
    reg.script(Pnk { n, k, dense: dense.0 })
}

// Registers of `UniversalNames`.
const PC: usize = 0;
const T0: usize = 1;
const T: usize = 2;
const LIMIT_POINT: usize = 3;
const JS: usize = 4;

const PC_EVEN: u64 = 10;

/// Emits on `2i` the dense name `u_i`, and on `2m+1` with `m = ⟨n,k⟩` the
/// limit of `P_{n,k}` once three semi-decidable filters pass: `φ_n(n)`
/// halts at some step `t₀`; `φ_k(t)` halts for all `t ≤ t₀`; and
/// `d(u_{φ_k(t)}, u_{φ_k(t₀)}) < 2^{-t}` for every `t < t₀`.
#[derive(Clone, Debug)]
struct UniversalNames {
    dense: ProgramIndex,
    dist: ProgramIndex,
    limit: ProgramIndex,
}

impl UniversalNames {
    fn finish(&self, reg: &Registry, input: &Nat, regs: &mut [Nat]) -> Result<Action> {
        let (n, k) = unpair(&(input >> 1u32));
        let p = reg.script(Pnk { n: reg.resolve_or_err(&n)?, k: reg.resolve_or_err(&k)?, dense: self.dense });
        regs[PC] = Nat::from(7u32);
        Ok(Action::Call(self.limit, p.name()))
    }

    fn compare(&self, regs: &mut [Nat]) -> Action {
        regs[PC] = Nat::from(4u32);
        let t = reg_small(regs, T) as usize;
        Action::Call(self.dense, regs[JS + t].clone())
    }
}

impl Routine for UniversalNames {
    fn next(&self, reg: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        if regs.is_empty() {
            if !input.bit(0) {
                *regs = vec![Nat::from(PC_EVEN)];
                return Ok(Action::Call(self.dense, input >> 1u32));
            }
            let (n, k) = unpair(&(input >> 1u32));
            let (Some(n), Some(_)) = (reg.resolve(&n), reg.resolve(&k)) else {
                return Ok(Action::Halt(emit(None)));
            };
            *regs = vec![Nat::from(1u32), Nat::default(), Nat::default(), Nat::default()];
            return Ok(Action::Call(n, n.name()));
        }
        let (_, k) = unpair(&(input >> 1u32));
        let k = reg.resolve_or_err(&k)?;
        match reg_small(regs, PC) {
            PC_EVEN => Ok(Action::Halt(emit(Some(expect(last)?)))),
            1 => {
                let Some(Outcome::Halted { steps, .. }) = last else {
                    return Err(Error::MalformedState("universal names: filter one"));
                };
                regs[T0] = Nat::from(steps);
                regs[PC] = Nat::from(2u32);
                Ok(Action::Call(k, Nat::default()))
            }
            2 => {
                regs.push(expect(last)?);
                let t = reg_small(regs, T);
                let t0 = reg_small(regs, T0);
                if t < t0 {
                    regs[T] = Nat::from(t + 1);
                    return Ok(Action::Call(k, Nat::from(t + 1)));
                }
                if t0 == 0 {
                    return self.finish(reg, input, regs);
                }
                regs[PC] = Nat::from(3u32);
                Ok(Action::Call(self.dense, regs[JS + t0 as usize].clone()))
            }
            3 => {
                regs[LIMIT_POINT] = expect(last)?;
                regs[T] = Nat::default();
                Ok(self.compare(regs))
            }
            4 => {
                regs[PC] = Nat::from(5u32);
                Ok(Action::Call(self.dist, pair(&expect(last)?, &regs[LIMIT_POINT])))
            }
            5 => {
                let d = CauchyReal(reg.resolve_or_err(&expect(last)?)?);
                let bound = exact_real(reg, Surd::from(dyadic(reg_small(regs, T))));
                regs[PC] = Nat::from(6u32);
                Ok(Action::Call(lt_program(reg, d, bound), Nat::default()))
            }
            6 => {
                let t = reg_small(regs, T) + 1;
                regs[T] = Nat::from(t);
                if t < reg_small(regs, T0) {
                    Ok(self.compare(regs))
                } else {
                    self.finish(reg, input, regs)
                }
            }
            _ => Ok(Action::Halt(emit(Some(expect(last)?)))),
        }
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}:{}", self.dense.0, self.dist.0, self.limit.0))
    }
}

/// Universal sequence of names over a space with a limit algorithm: the
/// dense names themselves, plus limits of every `P_{n,k}` that passes the
/// exponential-speed filters.
pub fn universal_dense_names(reg: &Registry, space: &MetricSpace, dense: DenseSequence) -> Result<CeName> {
    let limit = space
        .limit
        .ok_or_else(|| Error::Invalid(format!("{} has no limit algorithm", space.handle.0)))?;
    Ok(CeName(reg.script(UniversalNames { dense: dense.0, dist: space.distance.0, limit: limit.0 })))
}

/// `k ↦ C(w_k)` for universal names `w_k` confirmed in `A`.
#[derive(Clone, Debug)]
struct NoginaBalls {
    names: ProgramIndex,
    a: ProgramIndex,
    c: ProgramIndex,
}

impl Routine for NoginaBalls {
    fn next(&self, _: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        let pc = reg_small(regs, 0);
        reg_set(regs, 0, Nat::from(pc + 1));
        match pc {
            0 => Ok(Action::Call(self.names, input.clone())),
            1 => match emitted(&expect(last)?) {
                Some(w) => {
                    reg_set(regs, 1, w.clone());
                    Ok(Action::Call(self.a, w))
                }
                None => Ok(Action::Halt(emit(None))),
            },
            2 => Ok(Action::Call(self.c, reg_get(regs, 1))),
            _ => Ok(Action::Halt(emit(Some(expect(last)?)))),
        }
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}:{}", self.names.0, self.a.0, self.c.0))
    }
}

pub fn nogina_to_lacombe(
    reg: &Registry,
    space: &Arc<MetricSpace>,
    dense: DenseSequence,
    o: &NoginaOpenName,
) -> Result<LacombeOpenName> {
    let names = universal_dense_names(reg, space, dense)?;
    let (a, c) = o.parts(reg)?;
    Ok(LacombeOpenName(CeName(reg.script(NoginaBalls { names: names.0, a: a.0, c }))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::builtins::{HaltAfter, Identity};
    use crate::metric::{ball, cauchy_completion, default_dense, ExactPoint};
    use crate::numberings::ce_enumerate;
    use crate::reals::rational;

    #[test]
    fn pnk_freezes_at_halting_step() {
        let reg = Registry::new();
        let q = MetricSpace::rationals(&reg);
        let dense = default_dense(&reg, &q).unwrap();
        let n = reg.register(HaltAfter { steps: 3, output: Nat::default() });
        let p = moschovakis_pnk(&reg, n, reg.register(Identity), dense);
        let got: Vec<Nat> = (0..7u32).map(|t| reg.evaluate(p, &Nat::from(t), Fuel(10_000)).unwrap()).collect();
        let u = |j: u32| reg.evaluate(dense.0, &Nat::from(j), Fuel(10)).unwrap();
        assert_eq!(got, vec![u(0), u(1), u(2), u(3), u(3), u(3), u(3)]);
    }

    #[test]
    fn nogina_ball_converts_to_inner_balls() {
        let reg = Registry::new();
        let base = MetricSpace::rationals(&reg);
        let c = cauchy_completion(&reg, &base);
        let dense = default_dense(&reg, &c).unwrap();
        let b = ball(&reg, &c, &ExactPoint::Line(rational(0, 1)), rational(1, 1)).unwrap();
        let o = ball_nogina_open(&reg, &c, &b).unwrap();
        let l = nogina_to_lacombe(&reg, &c, dense, &o).unwrap();
        let got = ce_enumerate(&reg, l.0, Fuel(200_000)).unwrap();
        assert!(got.len() > 3);
        let inc = crate::metric::BallInclusion { space: c.clone(), mode: crate::metric::InclusionMode::Exact };
        for v in got {
            let d = crate::topology::FormalInclusion::check(&inc, &reg, &v, &b.0, Fuel(10_000)).unwrap();
            assert_eq!(d, crate::numberings::Decision::Yes);
        }
    }
}
