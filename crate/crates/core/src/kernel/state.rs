use crate::error::{Error, Result};

use super::Nat;

/// Serialized progress of a program. Plain data, so runs are replayable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub enum State {
    #[default]
    Init,
    Nat(Nat),
    List(Vec<State>),
}

impl State {
    pub fn num(v: impl Into<Nat>) -> State {
        State::Nat(v.into())
    }

    pub fn into_nat(self, owner: &'static str) -> Result<Nat> {
        match self {
            State::Nat(n) => Ok(n),
            _ => Err(Error::MalformedState(owner)),
        }
    }

    pub fn into_list(self, owner: &'static str) -> Result<Vec<State>> {
        match self {
            State::List(v) => Ok(v),
            _ => Err(Error::MalformedState(owner)),
        }
    }
}
