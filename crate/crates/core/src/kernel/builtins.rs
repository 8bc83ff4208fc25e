//! Primitive programs and the generic combinators every construction uses.

use crate::error::{Error, Result};

use super::pairing::pair;
use super::schedule::Schedule;
use super::script::{expect, reg_small, Action, Outcome, Routine, Sub};
use super::{small, Nat, ProgramIndex, Registry, State, StepProgram, StepResult};

/// Halts after one step with a fixed output.
#[derive(Clone, Debug)]
pub struct Const(pub Nat);

impl StepProgram for Const {
    fn step(&self, _: &Registry, _: &Nat, _: State) -> Result<StepResult> {
        Ok(StepResult::Halted(self.0.clone()))
    }
    fn key(&self) -> Option<String> {
        Some(self.0.to_string())
    }
}

#[derive(Clone, Debug)]
pub struct Identity;

impl StepProgram for Identity {
    fn step(&self, _: &Registry, input: &Nat, _: State) -> Result<StepResult> {
        Ok(StepResult::Halted(input.clone()))
    }
    fn key(&self) -> Option<String> {
        Some(String::new())
    }
}

#[derive(Clone, Debug)]
pub struct Diverge;

impl StepProgram for Diverge {
    fn step(&self, _: &Registry, _: &Nat, state: State) -> Result<StepResult> {
        Ok(StepResult::Running(state))
    }
    fn key(&self) -> Option<String> {
        Some(String::new())
    }
}

/// Halts with `output` once exactly `steps` steps have been taken.
#[derive(Clone, Debug)]
pub struct HaltAfter {
    pub steps: u64,
    pub output: Nat,
}

impl StepProgram for HaltAfter {
    fn start(&self, _: &Nat) -> StepResult {
        if self.steps == 0 {
            StepResult::Halted(self.output.clone())
        } else {
            StepResult::Running(State::num(0u32))
        }
    }
    fn step(&self, _: &Registry, _: &Nat, state: State) -> Result<StepResult> {
        let done = small(&state.into_nat("halt-after")?) + 1;
        Ok(if done >= self.steps {
            StepResult::Halted(self.output.clone())
        } else {
            StepResult::Running(State::num(done))
        })
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}", self.steps, self.output))
    }
}

/// A total one-step function given by a Rust function pointer.
#[derive(Clone, Debug)]
pub struct Primitive {
    pub name: &'static str,
    pub f: fn(&Nat) -> Nat,
}

impl StepProgram for Primitive {
    fn step(&self, _: &Registry, input: &Nat, _: State) -> Result<StepResult> {
        Ok(StepResult::Halted((self.f)(input)))
    }
    fn key(&self) -> Option<String> {
        Some(self.name.to_string())
    }
    fn label(&self) -> String {
        self.name.to_string()
    }
}

/// Halts (with 0) exactly on inputs satisfying the predicate.
#[derive(Clone, Debug)]
pub struct Guard {
    pub name: &'static str,
    pub pred: fn(&Nat) -> bool,
}

impl StepProgram for Guard {
    fn step(&self, _: &Registry, input: &Nat, state: State) -> Result<StepResult> {
        Ok(if (self.pred)(input) {
            StepResult::Halted(Nat::default())
        } else {
            StepResult::Running(state)
        })
    }
    fn key(&self) -> Option<String> {
        Some(self.name.to_string())
    }
    fn label(&self) -> String {
        self.name.to_string()
    }
}

/// An enumerator in emit coding: `k ↦ 1 + f(k)` or `0` when `f(k)` is absent.
#[derive(Clone, Debug)]
pub struct Emitter {
    pub name: &'static str,
    pub f: fn(&Nat) -> Option<Nat>,
}

impl StepProgram for Emitter {
    fn step(&self, _: &Registry, input: &Nat, _: State) -> Result<StepResult> {
        Ok(StepResult::Halted(emit((self.f)(input))))
    }
    fn key(&self) -> Option<String> {
        Some(self.name.to_string())
    }
    fn label(&self) -> String {
        self.name.to_string()
    }
}

/// Emit coding of an optional value.
pub fn emit(v: Option<Nat>) -> Nat {
    v.map_or_else(Nat::default, |v| v + 1u32)
}

/// Inverse of [`emit`].
pub fn emitted(code: &Nat) -> Option<Nat> {
    (*code != Nat::default()).then(|| code - 1u32)
}

/// `k ↦ φ_p(⟨fixed, k⟩)`.
#[derive(Clone, Debug)]
pub struct Curry {
    pub prog: ProgramIndex,
    pub fixed: Nat,
}

impl Routine for Curry {
    fn next(&self, _: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        if regs.is_empty() {
            regs.push(Nat::from(1u32));
            return Ok(Action::Call(self.prog, pair(&self.fixed, input)));
        }
        Ok(Action::Halt(expect(last)?))
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}", self.prog.0, self.fixed))
    }
}

/// `x ↦ φ_outer(φ_inner(x))`.
#[derive(Clone, Debug)]
pub struct Compose {
    pub outer: ProgramIndex,
    pub inner: ProgramIndex,
}

impl Routine for Compose {
    fn next(&self, _: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        let pc = reg_small(regs, 0);
        regs.clear();
        regs.push(Nat::from(pc + 1));
        Ok(match pc {
            0 => Action::Call(self.inner, input.clone()),
            1 => Action::Call(self.outer, expect(last)?),
            _ => Action::Halt(expect(last)?),
        })
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}", self.outer.0, self.inner.0))
    }
}

/// Halts with `⟨k, v⟩` for the first `k` (in dovetail order) such that
/// `φ_body(⟨x, k⟩) = v`; diverges if no such `k` exists.
#[derive(Clone, Debug)]
pub struct ExistsSearch {
    pub body: ProgramIndex,
}

const SEARCH: &str = "exists-search";

impl StepProgram for ExistsSearch {
    fn step(&self, reg: &Registry, input: &Nat, state: State) -> Result<StepResult> {
        let (mut sched, mut tasks) = match state {
            State::Init => (Schedule::new(), Vec::new()),
            s => {
                let mut it = s.into_list(SEARCH)?.into_iter();
                let mut field = || it.next().ok_or(Error::MalformedState(SEARCH));
                let stage = small(&field()?.into_nat(SEARCH)?);
                let pos = small(&field()?.into_nat(SEARCH)?);
                (Schedule::from_parts(stage, pos), field()?.into_list(SEARCH)?)
            }
        };
        let j = sched.current();
        let k = Nat::from(j);
        let mut sub = if (j as usize) < tasks.len() {
            Sub::decode(std::mem::take(&mut tasks[j as usize]))?
        } else {
            Sub::start(reg, self.body, pair(input, &k))?
        };
        if let Some(v) = sub.advance(reg)? {
            return Ok(StepResult::Halted(pair(&k, &v)));
        }
        if (j as usize) < tasks.len() {
            tasks[j as usize] = sub.encode();
        } else {
            tasks.push(sub.encode());
        }
        sched.advance();
        Ok(StepResult::Running(State::List(vec![
            State::num(sched.stage()),
            State::num(sched.pos()),
            State::List(tasks),
        ])))
    }
    fn key(&self) -> Option<String> {
        Some(self.body.0.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{nat, Fuel};

    #[test]
    fn const_and_identity_halt_in_one_step() {
        let reg = Registry::new();
        let c = reg.register(Const(nat(0)));
        assert_eq!(reg.run(c, &nat(9), Fuel(1)).unwrap(), StepResult::Halted(nat(0)));
        let id = reg.register(Identity);
        assert_eq!(reg.run(id, &nat(42), Fuel(1)).unwrap(), StepResult::Halted(nat(42)));
        assert!(reg.run(id, &nat(42), Fuel(0)).unwrap().halted().is_none());
    }

    #[test]
    fn halt_after_counts_exactly() {
        let reg = Registry::new();
        let h = reg.register(HaltAfter { steps: 5, output: nat(7) });
        assert!(reg.run(h, &nat(0), Fuel(4)).unwrap().halted().is_none());
        assert_eq!(reg.run(h, &nat(0), Fuel(5)).unwrap(), StepResult::Halted(nat(7)));
        let z = reg.register(HaltAfter { steps: 0, output: nat(1) });
        assert_eq!(reg.run(z, &nat(0), Fuel(0)).unwrap(), StepResult::Halted(nat(1)));
    }

    #[test]
    fn unknown_index_is_an_error() {
        let reg = Registry::new();
        assert!(matches!(
            reg.run(ProgramIndex(3), &nat(0), Fuel(10)),
            Err(Error::UnknownProgram(_))
        ));
    }

    #[test]
    fn interning_shares_indices() {
        let reg = Registry::new();
        let a = reg.register(Const(nat(3)));
        let b = reg.register(Const(nat(3)));
        let c = reg.register(Const(nat(4)));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn resume_matches_uninterrupted_run() {
        let reg = Registry::new();
        let h = reg.register(HaltAfter { steps: 9, output: nat(1) });
        let slow = reg.script(Compose { outer: h, inner: h });
        let full = reg.run_counted(slow, &nat(0), Fuel(100)).unwrap();
        let part = reg.run_counted(slow, &nat(0), Fuel(7)).unwrap();
        let StepResult::Running(state) = part.result else { panic!("halted early") };
        let rest = reg.resume(slow, &nat(0), state, Fuel(100)).unwrap();
        assert_eq!(rest.result, full.result);
        assert_eq!(part.steps + rest.steps, full.steps);
    }

    #[test]
    fn compose_and_curry() {
        let reg = Registry::new();
        let double = reg.register(Primitive { name: "double", f: |n| n * 2u32 });
        let succ = reg.register(Primitive { name: "succ", f: |n| n + 1u32 });
        let c = reg.script(Compose { outer: double, inner: succ });
        assert_eq!(reg.evaluate(c, &nat(4), Fuel(100)).unwrap(), nat(10));
        let fst = reg.register(Primitive { name: "fst", f: |n| crate::kernel::pairing::unpair(n).0 });
        let cur = reg.script(Curry { prog: fst, fixed: nat(11) });
        assert_eq!(reg.evaluate(cur, &nat(3), Fuel(100)).unwrap(), nat(11));
    }

    #[test]
    fn exists_search_finds_a_late_witness() {
        let reg = Registry::new();
        // ⟨x,k⟩ halts iff k == x.
        let body = reg.register(Guard {
            name: "diag",
            pred: |n| {
                let (x, k) = crate::kernel::pairing::unpair(n);
                x == k
            },
        });
        let s = reg.register(ExistsSearch { body });
        let out = reg.evaluate(s, &nat(12), Fuel(10_000)).unwrap();
        assert_eq!(crate::kernel::pairing::unpair(&out).0, nat(12));
    }
}
