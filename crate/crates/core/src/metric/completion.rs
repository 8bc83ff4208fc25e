use std::sync::Arc;

use crate::error::Result;
use crate::kernel::builtins::Const;
use crate::kernel::pairing::{pair, unpair};
use crate::kernel::script::{expect, reg_get, reg_set, reg_small, Action, Outcome, Routine, Scripted};
use crate::kernel::{Fuel, Nat, ProgramIndex, Registry, State, StepProgram, StepResult};
use crate::reals::{exact_real, ExactReal};

use super::{ExactPoint, MetricSpace};

/// Budget the exact tier spends recognizing an eventually constant sequence.
const DECODE_FUEL: Fuel = Fuel(100_000);

/// `⟨s,s'⟩ ↦` Cauchy name of the completed distance; exact when both names
/// are readable by the exact tier.
#[derive(Clone, Debug)]
pub struct CompletionDistance {
    pub base: Arc<MetricSpace>,
}

impl StepProgram for CompletionDistance {
    fn step(&self, reg: &Registry, input: &Nat, _: State) -> Result<StepResult> {
        let (a, b) = unpair(input);
        let exact = self.base.exact_kind().and_then(|kind| {
            let x = decode(reg, &self.base, &a, 4)?;
            let y = decode(reg, &self.base, &b, 4)?;
            kind.distance(&x, &y)
        });
        let out = match exact {
            Some(d) => exact_real(reg, d).0,
            None => reg.script(LimitDistance {
                dist: self.base.distance.0,
                a: reg.resolve_or_err(&a)?,
                b: reg.resolve_or_err(&b)?,
            }),
        };
        Ok(StepResult::Halted(out.name()))
    }
    fn key(&self) -> Option<String> {
        Some(self.base.handle.0.clone())
    }
}

/// `n ↦ d(a_k, b_k)` at precision `k = n + 3`; total error below `3·2^{-k}`.
#[derive(Clone, Debug)]
pub struct LimitDistance {
    pub dist: ProgramIndex,
    pub a: ProgramIndex,
    pub b: ProgramIndex,
}

impl Routine for LimitDistance {
    fn next(&self, reg: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        let k = input + 3u32;
        let pc = reg_small(regs, 0);
        reg_set(regs, 0, Nat::from(pc + 1));
        Ok(match pc {
            0 => Action::Call(self.a, k),
            1 => {
                reg_set(regs, 1, expect(last)?);
                Action::Call(self.b, k)
            }
            2 => Action::Call(self.dist, pair(&reg_get(regs, 1), &expect(last)?)),
            3 => Action::Call(reg.resolve_or_err(&expect(last)?)?, k),
            _ => Action::Halt(expect(last)?),
        })
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}:{}", self.dist.0, self.a.0, self.b.0))
    }
}

/// Limit algorithm of the completion: `t ↦ DiagonalLimit(t)`.
#[derive(Clone, Debug)]
pub struct CompletionLimit;

impl StepProgram for CompletionLimit {
    fn step(&self, reg: &Registry, input: &Nat, _: State) -> Result<StepResult> {
        let t = reg.resolve_or_err(input)?;
        Ok(StepResult::Halted(reg.script(DiagonalLimit { seq: t }).name()))
    }
    fn key(&self) -> Option<String> {
        Some(String::new())
    }
}

/// `k ↦ (seq(k+2))(k+2)`: within `2^{-(k+1)}` of the limit.
#[derive(Clone, Debug)]
pub struct DiagonalLimit {
    pub seq: ProgramIndex,
}

impl Routine for DiagonalLimit {
    fn next(&self, reg: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        let k2 = input + 2u32;
        let pc = reg_small(regs, 0);
        reg_set(regs, 0, Nat::from(pc + 1));
        Ok(match pc {
            0 => Action::Call(self.seq, k2),
            1 => Action::Call(reg.resolve_or_err(&expect(last)?)?, k2),
            _ => Action::Halt(expect(last)?),
        })
    }
    fn key(&self) -> Option<String> {
        Some(self.seq.0.to_string())
    }
}

/// `P_{n,k}(t) = u_{φ_k(t)}` while `φ_n(n)` has not halted within `t`
/// steps, and `u_{φ_k(t₀)}` once it halts at step `t₀ ≤ t`.
#[derive(Clone, Debug)]
pub struct Pnk {
    pub n: ProgramIndex,
    pub k: ProgramIndex,
    pub dense: ProgramIndex,
}

impl Pnk {
    /// The step at which `φ_n(n)` halts, if it does within `fuel`.
    pub fn halting_step(&self, reg: &Registry, fuel: Fuel) -> Result<Option<u64>> {
        let run = reg.run_counted(self.n, &self.n.name(), fuel)?;
        Ok(run.result.halted().map(|_| run.steps))
    }
}

impl Routine for Pnk {
    fn next(&self, _: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        let pc = reg_small(regs, 0);
        reg_set(regs, 0, Nat::from(pc + 1));
        Ok(match pc {
            0 => Action::Try(self.n, self.n.name(), crate::kernel::small(input)),
            1 => {
                let t = match last {
                    Some(Outcome::Halted { steps, .. }) => Nat::from(steps),
                    _ => input.clone(),
                };
                Action::Call(self.k, t)
            }
            2 => Action::Call(self.dense, expect(last)?),
            _ => Action::Halt(expect(last)?),
        })
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}:{}", self.n.0, self.k.0, self.dense.0))
    }
}

/// Exact value of a completion name: constant sequences, exact rationals,
/// and limits of eventually constant `P_{n,k}` sequences.
pub(super) fn decode(reg: &Registry, base: &Arc<MetricSpace>, name: &Nat, depth: u32) -> Option<ExactPoint> {
    let i = reg.resolve(name)?;
    if let Some(Const(v)) = reg.downcast::<Const>(i) {
        return base.exact_point(reg, &v);
    }
    if let Some(ExactReal(s)) = reg.downcast::<ExactReal>(i) {
        let q = s.as_rational()?.clone();
        return match base.exact_point(reg, &crate::reals::cq_encode(&q))? {
            ExactPoint::Line(x) => Some(ExactPoint::Line(x)),
            _ => None,
        };
    }
    if depth == 0 {
        return None;
    }
    let Scripted(DiagonalLimit { seq }) = reg.downcast::<Scripted<DiagonalLimit>>(i)?;
    let Scripted(p) = reg.downcast::<Scripted<Pnk>>(seq)?;
    let t0 = p.halting_step(reg, DECODE_FUEL).ok()??;
    let j = reg.evaluate(p.k, &Nat::from(t0), DECODE_FUEL).ok()?;
    let u = reg.evaluate(p.dense, &j, DECODE_FUEL).ok()?;
    decode(reg, base, &u, depth - 1)
}
