use std::any::{Any, TypeId};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, RwLock};

use num_traits::ToPrimitive;

use crate::error::{Error, Result};

use super::{Fuel, Nat, State, StepProgram, StepResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProgramIndex(pub usize);

impl ProgramIndex {
    pub fn name(self) -> Nat {
        Nat::from(self.0)
    }
}

impl fmt::Display for ProgramIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "φ{}", self.0)
    }
}

/// Outcome of a fuel-bounded run together with the steps it consumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub result: StepResult,
    pub steps: u64,
}

/// Append-only table `i ↦ φ_i`. Indices are stable for the registry's lifetime.
#[derive(Default)]
pub struct Registry {
    programs: RwLock<Vec<Arc<dyn StepProgram>>>,
    interned: Mutex<HashMap<(TypeId, String), ProgramIndex>>,
}

impl fmt::Debug for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry").field("len", &self.len()).finish()
    }
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register<P: StepProgram>(&self, program: P) -> ProgramIndex {
        match program.key() {
            Some(key) => {
                let mut interned = self.interned.lock().expect("intern table poisoned");
                let slot = (TypeId::of::<P>(), key);
                if let Some(&i) = interned.get(&slot) {
                    return i;
                }
                let i = self.push(Arc::new(program));
                interned.insert(slot, i);
                i
            }
            None => self.push(Arc::new(program)),
        }
    }

    fn push(&self, program: Arc<dyn StepProgram>) -> ProgramIndex {
        let mut programs = self.programs.write().expect("registry poisoned");
        programs.push(program);
        ProgramIndex(programs.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.programs.read().expect("registry poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn program(&self, i: ProgramIndex) -> Result<Arc<dyn StepProgram>> {
        self.programs
            .read()
            .expect("registry poisoned")
            .get(i.0)
            .cloned()
            .ok_or_else(|| Error::UnknownProgram(i.name()))
    }

    /// Reads a natural as a program index if one is registered under it.
    pub fn resolve(&self, n: &Nat) -> Option<ProgramIndex> {
        let i = n.to_usize()?;
        (i < self.len()).then_some(ProgramIndex(i))
    }

    pub fn resolve_or_err(&self, n: &Nat) -> Result<ProgramIndex> {
        self.resolve(n).ok_or_else(|| Error::UnknownProgram(n.clone()))
    }

    /// Recovers the concrete program behind an index.
    pub fn downcast<T: StepProgram + Clone>(&self, i: ProgramIndex) -> Option<T> {
        let p = self.program(i).ok()?;
        let any: &dyn Any = p.as_ref();
        any.downcast_ref::<T>().cloned()
    }

    pub fn run(&self, i: ProgramIndex, input: &Nat, fuel: Fuel) -> Result<StepResult> {
        Ok(self.run_counted(i, input, fuel)?.result)
    }

    pub fn run_counted(&self, i: ProgramIndex, input: &Nat, fuel: Fuel) -> Result<Run> {
        let p = self.program(i)?;
        match p.start(input) {
            StepResult::Halted(v) => Ok(Run { result: StepResult::Halted(v), steps: 0 }),
            StepResult::Running(s) => self.drive(p.as_ref(), input, s, fuel),
        }
    }

    /// Continues a run from a state previously returned as `Running`.
    pub fn resume(&self, i: ProgramIndex, input: &Nat, state: State, fuel: Fuel) -> Result<Run> {
        let p = self.program(i)?;
        self.drive(p.as_ref(), input, state, fuel)
    }

    fn drive(&self, p: &dyn StepProgram, input: &Nat, mut state: State, fuel: Fuel) -> Result<Run> {
        for used in 0..fuel.0 {
            match p.step(self, input, state)? {
                StepResult::Halted(v) => {
                    return Ok(Run { result: StepResult::Halted(v), steps: used + 1 })
                }
                StepResult::Running(s) => state = s,
            }
        }
        Ok(Run { result: StepResult::Running(state), steps: fuel.0 })
    }

    /// Runs a program expected to halt quickly (realizers of primitive data).
    pub fn evaluate(&self, i: ProgramIndex, input: &Nat, fuel: Fuel) -> Result<Nat> {
        match self.run(i, input, fuel)? {
            StepResult::Halted(v) => Ok(v),
            StepResult::Running(_) => Err(Error::SetupDiverged(fuel.0)),
        }
    }
}
