use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::kernel::builtins::emitted;
use crate::kernel::pairing::unpair;
use crate::kernel::script::{expect, reg_get, reg_set, reg_small, Action, Outcome, Routine};
use crate::kernel::{small, Nat, ProgramIndex, Registry, State, StepProgram, StepResult};

use super::{cq_decode, cq_encode, dyadic, Rational, Surd};

/// Constant real with an exactly known value.
#[derive(Clone, Debug)]
pub struct ExactReal(pub Surd);

impl StepProgram for ExactReal {
    fn step(&self, _: &Registry, input: &Nat, _: State) -> Result<StepResult> {
        Ok(StepResult::Halted(cq_encode(&self.0.approx(small(input)))))
    }
    fn key(&self) -> Option<String> {
        Some(self.0.to_string())
    }
}

/// `√q` by interval halving, one halving per step.
#[derive(Clone, Debug)]
pub struct SqrtBisect(pub Rational);

impl StepProgram for SqrtBisect {
    fn step(&self, _: &Registry, input: &Nat, state: State) -> Result<StepResult> {
        const OWNER: &str = "sqrt-bisect";
        let n = small(input);
        // invariant: lo/2^k ≤ √q ≤ hi/2^k
        let (lo, hi, k) = match state {
            State::Init => {
                let top = self.0.ceil().to_integer().max(BigInt::one());
                (BigUint::zero(), top.magnitude().clone(), 0u64)
            }
            s => {
                let mut it = s.into_list(OWNER)?.into_iter();
                let mut next = || it.next().ok_or(crate::Error::MalformedState(OWNER))?.into_nat(OWNER);
                (next()?, next()?, small(&next()?))
            }
        };
        // stop once hi - lo < 2^{1-n}, i.e. (hi - lo)·2^n < 2^{k+1}
        if ((&hi - &lo) << n) < (BigUint::one() << (k + 1)) {
            let mid = Rational::new(BigInt::from(&lo + &hi), BigInt::one() << (k + 1));
            return Ok(StepResult::Halted(cq_encode(&mid)));
        }
        let m = &lo + &hi;
        let p = self.0.numer().magnitude();
        let d = self.0.denom().magnitude();
        let (lo, hi) = if &m * &m * d <= (p << (2 * (k + 1))) { (m, hi << 1) } else { (lo << 1, m) };
        Ok(StepResult::Running(State::List(vec![
            State::Nat(lo),
            State::Nat(hi),
            State::num(k + 1),
        ])))
    }
    fn key(&self) -> Option<String> {
        Some(self.0.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Min,
}

/// Pointwise combination using `(n+1)`-approximations of both arguments.
#[derive(Clone, Debug)]
pub struct CauchyBinary {
    pub op: Op,
    pub a: ProgramIndex,
    pub b: ProgramIndex,
}

impl Routine for CauchyBinary {
    fn next(&self, _: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        let n1 = input + 1u32;
        match reg_small(regs, 0) {
            0 => {
                reg_set(regs, 0, Nat::from(1u32));
                Ok(Action::Call(self.a, n1))
            }
            1 => {
                reg_set(regs, 0, Nat::from(2u32));
                reg_set(regs, 1, expect(last)?);
                Ok(Action::Call(self.b, n1))
            }
            _ => {
                let x = cq_decode(&reg_get(regs, 1));
                let y = cq_decode(&expect(last)?);
                let v = match self.op {
                    Op::Add => x + y,
                    Op::Sub => x - y,
                    Op::Min => x.min(y),
                };
                Ok(Action::Halt(cq_encode(&v)))
            }
        }
    }
    fn key(&self) -> Option<String> {
        Some(format!("{:?}:{}:{}", self.op, self.a.0, self.b.0))
    }
}

/// `n ↦ x_{n+2}(n+2)` for a sequence `k ↦ x_k` of Cauchy names.
#[derive(Clone, Debug)]
pub struct CauchyLimit {
    pub seq: ProgramIndex,
}

impl Routine for CauchyLimit {
    fn next(&self, reg: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        let n2 = input + 2u32;
        let pc = reg_small(regs, 0);
        reg_set(regs, 0, Nat::from(pc + 1));
        Ok(match pc {
            0 => Action::Call(self.seq, n2),
            1 => Action::Call(reg.resolve_or_err(&expect(last)?)?, n2),
            _ => Action::Halt(expect(last)?),
        })
    }
    fn key(&self) -> Option<String> {
        Some(self.seq.0.to_string())
    }
}

/// `l_n = max_{k≤n}(x_k - 2^{-k})`.
#[derive(Clone, Debug)]
pub struct LeftOfCauchy {
    pub x: ProgramIndex,
}

impl Routine for LeftOfCauchy {
    fn next(&self, _: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        let Some(out) = last else {
            *regs = vec![Nat::zero(), Nat::zero()];
            return Ok(Action::Call(self.x, Nat::zero()));
        };
        let k = reg_small(regs, 0);
        let cand = cq_decode(&out.value()?) - dyadic(k);
        let best = if k == 0 { cand } else { cq_decode(&regs[1]).max(cand) };
        if k >= small(input) {
            return Ok(Action::Halt(cq_encode(&best)));
        }
        *regs = vec![Nat::from(k + 1), cq_encode(&best)];
        Ok(Action::Call(self.x, Nat::from(k + 1)))
    }
    fn key(&self) -> Option<String> {
        Some(self.x.0.to_string())
    }
}

#[derive(Clone, Debug)]
pub struct LeftExact(pub Rational);

impl StepProgram for LeftExact {
    fn step(&self, _: &Registry, input: &Nat, _: State) -> Result<StepResult> {
        let n = small(input);
        let q = &self.0;
        let term = if q.is_positive() { q - q * dyadic(n + 1) } else { q - dyadic(n) };
        Ok(StepResult::Halted(cq_encode(&term)))
    }
    fn key(&self) -> Option<String> {
        Some(self.0.to_string())
    }
}

/// `+∞`: the terms `0, 1, 2, …`.
#[derive(Clone, Debug)]
pub struct LeftUnbounded;

impl StepProgram for LeftUnbounded {
    fn step(&self, _: &Registry, input: &Nat, _: State) -> Result<StepResult> {
        Ok(StepResult::Halted(cq_encode(&Rational::from(BigInt::from(input.clone())))))
    }
    fn key(&self) -> Option<String> {
        Some(String::new())
    }
}

#[derive(Clone, Debug)]
pub struct LeftMin {
    pub a: ProgramIndex,
    pub b: ProgramIndex,
}

impl Routine for LeftMin {
    fn next(&self, _: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        match reg_small(regs, 0) {
            0 => {
                reg_set(regs, 0, Nat::from(1u32));
                Ok(Action::Call(self.a, input.clone()))
            }
            1 => {
                reg_set(regs, 0, Nat::from(2u32));
                reg_set(regs, 1, expect(last)?);
                Ok(Action::Call(self.b, input.clone()))
            }
            _ => {
                let v = cq_decode(&regs[1]).min(cq_decode(&expect(last)?));
                Ok(Action::Halt(cq_encode(&v)))
            }
        }
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}", self.a.0, self.b.0))
    }
}

#[derive(Clone, Debug)]
pub struct LeftScale {
    pub a: ProgramIndex,
    pub c: Rational,
}

impl Routine for LeftScale {
    fn next(&self, _: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        if regs.is_empty() {
            regs.push(Nat::one());
            return Ok(Action::Call(self.a, input.clone()));
        }
        Ok(Action::Halt(cq_encode(&(cq_decode(&expect(last)?) * &self.c))))
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}", self.a.0, self.c))
    }
}

/// Term `n` is the largest value among tasks `j = ⟨k,m⟩ ≤ N` (member `k`,
/// term `m`) that finish within `N` steps, for the least `N ≥ n` where any
/// task finishes. The finishing set only grows with `N`, so terms never drop.
#[derive(Clone, Debug)]
pub struct LeftSup {
    pub codes: ProgramIndex,
}

// registers: bound N, task j, phase, have, best
const N: usize = 0;
const J: usize = 1;
const PHASE: usize = 2;
const HAVE: usize = 3;
const BEST: usize = 4;

impl LeftSup {
    fn start_task(&self, regs: &mut [Nat]) -> Action {
        let (k, _) = unpair(&regs[J]);
        regs[PHASE] = Nat::one();
        Action::Try(self.codes, k, small(&regs[N]))
    }

    fn next_task(&self, regs: &mut [Nat]) -> Action {
        regs[J] += 1u32;
        if regs[J] > regs[N] {
            if regs[HAVE].is_one() {
                return Action::Halt(regs[BEST].clone());
            }
            regs[N] += 1u32;
            regs[J] = Nat::zero();
        }
        self.start_task(regs)
    }
}

impl Routine for LeftSup {
    fn next(&self, reg: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        if regs.is_empty() {
            *regs = vec![input.clone(), Nat::zero(), Nat::zero(), Nat::zero(), Nat::zero()];
            return Ok(self.start_task(regs));
        }
        let halted = match last {
            Some(Outcome::Halted { value, .. }) => Some(value),
            _ => None,
        };
        if regs[PHASE].is_one() {
            let member = halted.as_ref().and_then(emitted).and_then(|c| reg.resolve(&c));
            if let Some(l) = member {
                let (_, m) = unpair(&regs[J]);
                regs[PHASE] = Nat::from(2u32);
                return Ok(Action::Try(l, m, small(&regs[N])));
            }
        } else if let Some(v) = halted {
            let q = cq_decode(&v);
            if !regs[HAVE].is_one() || q > cq_decode(&regs[BEST]) {
                regs[BEST] = cq_encode(&q);
            }
            regs[HAVE] = Nat::one();
        }
        Ok(self.next_task(regs))
    }
    fn key(&self) -> Option<String> {
        Some(self.codes.0.to_string())
    }
}

/// `gap > 2^{shift-n}` without building the dyadic rational.
pub(crate) fn exceeds_dyadic(gap: &Rational, n: u64, shift: u64) -> bool {
    gap.is_positive() && (gap.numer().magnitude() << n) > (gap.denom().magnitude() << shift)
}

/// Halts iff some `n` has `a_n + 2^{-n} < b_n - 2^{-n}`.
#[derive(Clone, Debug)]
pub struct LtSearch {
    pub a: ProgramIndex,
    pub b: ProgramIndex,
}

impl Routine for LtSearch {
    fn next(&self, _: &Registry, _: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        // registers: n, phase, a_n
        if regs.is_empty() {
            *regs = vec![Nat::zero(), Nat::one(), Nat::zero()];
            return Ok(Action::Call(self.a, Nat::zero()));
        }
        let n = regs[0].clone();
        if regs[1].is_one() {
            regs[1] = Nat::from(2u32);
            regs[2] = expect(last)?;
            return Ok(Action::Call(self.b, n));
        }
        let gap = cq_decode(&expect(last)?) - cq_decode(&regs[2]);
        if exceeds_dyadic(&gap, small(&n), 1) {
            return Ok(Action::Halt(n));
        }
        regs[0] += 1u32;
        regs[1] = Nat::one();
        Ok(Action::Call(self.a, regs[0].clone()))
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}", self.a.0, self.b.0))
    }
}

/// Halts iff some `n` has `a_n + 2^{-n} < l_n` for a Cauchy `a` and left `l`.
#[derive(Clone, Debug)]
pub struct LtLeft {
    pub a: ProgramIndex,
    pub l: ProgramIndex,
}

impl Routine for LtLeft {
    fn next(&self, _: &Registry, _: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        if regs.is_empty() {
            *regs = vec![Nat::zero(), Nat::one(), Nat::zero()];
            return Ok(Action::Call(self.a, Nat::zero()));
        }
        let n = regs[0].clone();
        if regs[1].is_one() {
            regs[1] = Nat::from(2u32);
            regs[2] = expect(last)?;
            return Ok(Action::Call(self.l, n));
        }
        let gap = cq_decode(&expect(last)?) - cq_decode(&regs[2]);
        if exceeds_dyadic(&gap, small(&n), 0) {
            return Ok(Action::Halt(n));
        }
        regs[0] += 1u32;
        regs[1] = Nat::one();
        Ok(Action::Call(self.a, regs[0].clone()))
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}", self.a.0, self.l.0))
    }
}
