use std::any::Any;

use crate::error::Result;

use super::{Nat, Registry, State};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepResult {
    Halted(Nat),
    Running(State),
}

impl StepResult {
    pub fn halted(&self) -> Option<&Nat> {
        match self {
            StepResult::Halted(v) => Some(v),
            StepResult::Running(_) => None,
        }
    }
}

/// A program advanced one transformer invocation at a time.
///
/// `step` may consult and extend the registry (runtime composition), but must
/// not block on unbounded work: one call is one unit of fuel.
pub trait StepProgram: Any + Send + Sync {
    /// State before the first step. Returning `Halted` models a zero-step halt.
    fn start(&self, _input: &Nat) -> StepResult {
        StepResult::Running(State::Init)
    }

    fn step(&self, reg: &Registry, input: &Nat, state: State) -> Result<StepResult>;

    /// Structural identity; programs with equal keys share one index.
    fn key(&self) -> Option<String> {
        None
    }

    fn label(&self) -> String {
        let full = std::any::type_name::<Self>();
        full.rsplit("::").next().unwrap_or(full).to_string()
    }
}
