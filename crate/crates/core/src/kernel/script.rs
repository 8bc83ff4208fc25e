//! Register scripts: composite programs written as a sequence of sub-calls.
//!
//! A [`Routine`] is consulted whenever its pending sub-call finishes and
//! decides the next action. [`Scripted`] turns it into a step program in
//! which each step either advances the pending sub-call by one step or
//! consults the routine once.

use num_traits::ToPrimitive;

use crate::error::{Error, Result};

use super::{small, Nat, ProgramIndex, Registry, State, StepProgram, StepResult};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Halted { value: Nat, steps: u64 },
    Timeout,
}

impl Outcome {
    pub fn value(self) -> Result<Nat> {
        match self {
            Outcome::Halted { value, .. } => Ok(value),
            Outcome::Timeout => Err(Error::MalformedState("expected a halted sub-call")),
        }
    }
}

pub fn expect(last: Option<Outcome>) -> Result<Nat> {
    last.ok_or(Error::MalformedState("missing sub-call result"))?.value()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Action {
    /// Run `φ_p(x)` to completion, however long it takes.
    Call(ProgramIndex, Nat),
    /// Run `φ_p(x)` for at most the given number of steps.
    Try(ProgramIndex, Nat, u64),
    Halt(Nat),
    Diverge,
}

pub trait Routine: Send + Sync + 'static {
    fn next(
        &self,
        reg: &Registry,
        input: &Nat,
        regs: &mut Vec<Nat>,
        last: Option<Outcome>,
    ) -> Result<Action>;

    fn key(&self) -> Option<String> {
        None
    }
}

#[derive(Clone, Debug)]
pub struct Scripted<R>(pub R);

impl Registry {
    pub fn script<R: Routine>(&self, routine: R) -> ProgramIndex {
        self.register(Scripted(routine))
    }
}

/// A sub-computation carried inside another program's state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sub {
    pub prog: ProgramIndex,
    pub input: Nat,
    pub used: u64,
    pub status: SubStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubStatus {
    Running(State),
    Done(Nat),
}

impl Sub {
    pub fn start(reg: &Registry, prog: ProgramIndex, input: Nat) -> Result<Sub> {
        let status = match reg.program(prog)?.start(&input) {
            StepResult::Halted(v) => SubStatus::Done(v),
            StepResult::Running(s) => SubStatus::Running(s),
        };
        Ok(Sub { prog, input, used: 0, status })
    }

    /// One step of work. Returns the output once halted.
    pub fn advance(&mut self, reg: &Registry) -> Result<Option<Nat>> {
        let state = match &mut self.status {
            SubStatus::Done(v) => return Ok(Some(v.clone())),
            SubStatus::Running(s) => std::mem::take(s),
        };
        let p = reg.program(self.prog)?;
        self.used += 1;
        match p.step(reg, &self.input, state)? {
            StepResult::Halted(v) => {
                self.status = SubStatus::Done(v.clone());
                Ok(Some(v))
            }
            StepResult::Running(s) => {
                self.status = SubStatus::Running(s);
                Ok(None)
            }
        }
    }

    pub fn encode(self) -> State {
        let status = match self.status {
            SubStatus::Running(s) => State::List(vec![State::num(0u32), s]),
            SubStatus::Done(v) => State::List(vec![State::num(1u32), State::Nat(v)]),
        };
        State::List(vec![
            State::Nat(self.prog.name()),
            State::Nat(self.input),
            State::num(self.used),
            status,
        ])
    }

    pub fn decode(state: State) -> Result<Sub> {
        const OWNER: &str = "sub-computation";
        let mut it = state.into_list(OWNER)?.into_iter();
        let mut field = || it.next().ok_or(Error::MalformedState(OWNER));
        let prog = field()?.into_nat(OWNER)?;
        let prog = ProgramIndex(prog.to_usize().ok_or(Error::MalformedState(OWNER))?);
        let input = field()?.into_nat(OWNER)?;
        let used = small(&field()?.into_nat(OWNER)?);
        let mut st = field()?.into_list(OWNER)?.into_iter();
        let tag = st.next().ok_or(Error::MalformedState(OWNER))?.into_nat(OWNER)?;
        let body = st.next().ok_or(Error::MalformedState(OWNER))?;
        let status = if tag == Nat::from(0u32) {
            SubStatus::Running(body)
        } else {
            SubStatus::Done(body.into_nat(OWNER)?)
        };
        Ok(Sub { prog, input, used, status })
    }
}

enum Phase {
    Ready(Option<Outcome>),
    Pending(Sub, Option<u64>),
    Stuck,
}

const OWNER: &str = "script";

fn encode(regs: Vec<Nat>, phase: Phase) -> State {
    let regs = State::List(regs.into_iter().map(State::Nat).collect());
    let phase = match phase {
        Phase::Ready(None) => vec![State::num(0u32)],
        Phase::Ready(Some(Outcome::Halted { value, steps })) => {
            vec![State::num(1u32), State::Nat(value), State::num(steps)]
        }
        Phase::Ready(Some(Outcome::Timeout)) => vec![State::num(2u32)],
        Phase::Pending(sub, limit) => vec![
            State::num(3u32),
            sub.encode(),
            State::num(limit.map_or(0, |l| l + 1)),
        ],
        Phase::Stuck => vec![State::num(4u32)],
    };
    State::List(vec![regs, State::List(phase)])
}

fn decode(state: State) -> Result<(Vec<Nat>, Phase)> {
    if state == State::Init {
        return Ok((Vec::new(), Phase::Ready(None)));
    }
    let mut top = state.into_list(OWNER)?.into_iter();
    let regs = top.next().ok_or(Error::MalformedState(OWNER))?.into_list(OWNER)?;
    let regs = regs.into_iter().map(|r| r.into_nat(OWNER)).collect::<Result<Vec<_>>>()?;
    let mut ph = top.next().ok_or(Error::MalformedState(OWNER))?.into_list(OWNER)?.into_iter();
    let mut field = || ph.next().ok_or(Error::MalformedState(OWNER));
    let tag = small(&field()?.into_nat(OWNER)?);
    let phase = match tag {
        0 => Phase::Ready(None),
        1 => {
            let value = field()?.into_nat(OWNER)?;
            let steps = small(&field()?.into_nat(OWNER)?);
            Phase::Ready(Some(Outcome::Halted { value, steps }))
        }
        2 => Phase::Ready(Some(Outcome::Timeout)),
        3 => {
            let sub = Sub::decode(field()?)?;
            let limit = small(&field()?.into_nat(OWNER)?);
            Phase::Pending(sub, limit.checked_sub(1))
        }
        _ => Phase::Stuck,
    };
    Ok((regs, phase))
}

impl<R: Routine> Scripted<R> {
    fn act(
        &self,
        reg: &Registry,
        input: &Nat,
        mut regs: Vec<Nat>,
        last: Option<Outcome>,
    ) -> Result<StepResult> {
        let phase = match self.0.next(reg, input, &mut regs, last)? {
            Action::Halt(v) => return Ok(StepResult::Halted(v)),
            Action::Diverge => Phase::Stuck,
            Action::Call(p, x) => Phase::Pending(Sub::start(reg, p, x)?, None),
            Action::Try(p, x, limit) => {
                let sub = Sub::start(reg, p, x)?;
                if limit == 0 && matches!(sub.status, SubStatus::Running(_)) {
                    Phase::Ready(Some(Outcome::Timeout))
                } else {
                    Phase::Pending(sub, Some(limit))
                }
            }
        };
        Ok(StepResult::Running(encode(regs, phase)))
    }
}

impl<R: Routine> StepProgram for Scripted<R> {
    fn step(&self, reg: &Registry, input: &Nat, state: State) -> Result<StepResult> {
        let (regs, phase) = decode(state)?;
        match phase {
            Phase::Stuck => Ok(StepResult::Running(encode(regs, Phase::Stuck))),
            Phase::Ready(last) => self.act(reg, input, regs, last),
            Phase::Pending(mut sub, limit) => {
                if let SubStatus::Done(v) = &sub.status {
                    let last = Outcome::Halted { value: v.clone(), steps: sub.used };
                    return self.act(reg, input, regs, Some(last));
                }
                match sub.advance(reg)? {
                    Some(value) => {
                        let last = Outcome::Halted { value, steps: sub.used };
                        self.act(reg, input, regs, Some(last))
                    }
                    None if limit == Some(sub.used) => {
                        self.act(reg, input, regs, Some(Outcome::Timeout))
                    }
                    None => Ok(StepResult::Running(encode(regs, Phase::Pending(sub, limit)))),
                }
            }
        }
    }

    fn key(&self) -> Option<String> {
        self.0.key()
    }

    fn label(&self) -> String {
        let full = std::any::type_name::<R>();
        full.rsplit("::").next().unwrap_or(full).to_string()
    }
}

/// Reads register `i`, treating missing registers as zero.
pub fn reg_get(regs: &[Nat], i: usize) -> Nat {
    regs.get(i).cloned().unwrap_or_default()
}

pub fn reg_set(regs: &mut Vec<Nat>, i: usize, v: Nat) {
    if regs.len() <= i {
        regs.resize(i + 1, Nat::default());
    }
    regs[i] = v;
}

pub fn reg_small(regs: &[Nat], i: usize) -> u64 {
    regs.get(i).map_or(0, small)
}
