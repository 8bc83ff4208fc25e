//! Fuel-bounded enumeration of c.e. families under the triangular schedule.

use crate::error::Result;

use super::builtins::emitted;
use super::pairing::pair;
use super::schedule::Schedule;
use super::script::Sub;
use super::{Fuel, Nat, ProgramIndex, Registry};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Emission {
    pub stage: u64,
    pub task: u64,
    pub value: Nat,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tick {
    pub emitted: Option<Nat>,
    pub finished: bool,
}

/// A process the dovetailer can advance one step at a time.
pub trait Task {
    fn tick(&mut self, reg: &Registry) -> Result<Tick>;
}

/// The `j`-th member of a family, or `None` past the end of a finite family.
pub trait TaskSource {
    type Task: Task;
    fn task(&mut self, reg: &Registry, j: u64) -> Result<Option<Self::Task>>;
}

/// A single run of `φ_p(x)`; emits its (optionally emit-decoded) output.
pub struct Computation {
    sub: Option<Sub>,
    coded: bool,
}

impl Computation {
    pub fn new(reg: &Registry, prog: ProgramIndex, input: Nat, coded: bool) -> Result<Self> {
        Ok(Computation { sub: Some(Sub::start(reg, prog, input)?), coded })
    }
}

impl Task for Computation {
    fn tick(&mut self, reg: &Registry) -> Result<Tick> {
        let Some(sub) = self.sub.as_mut() else {
            return Ok(Tick { emitted: None, finished: true });
        };
        let out = sub.advance(reg)?;
        match out {
            None => Ok(Tick::default()),
            Some(v) => {
                self.sub = None;
                let emitted = if self.coded { emitted(&v) } else { Some(v) };
                Ok(Tick { emitted, finished: true })
            }
        }
    }
}

/// The tasks `k ↦ φ_p(k)` (or `φ_p(⟨n,k⟩)` with a prefix) of an enumerator.
pub struct EnumeratorSource {
    pub prog: ProgramIndex,
    pub prefix: Option<Nat>,
}

impl TaskSource for EnumeratorSource {
    type Task = Computation;
    fn task(&mut self, reg: &Registry, j: u64) -> Result<Option<Computation>> {
        let k = Nat::from(j);
        let input = match &self.prefix {
            Some(n) => pair(n, &k),
            None => k,
        };
        Computation::new(reg, self.prog, input, true).map(Some)
    }
}

/// A family given by a closure over task indices.
pub struct FnSource<F>(pub F);

impl<T: Task, F: FnMut(&Registry, u64) -> Result<Option<T>>> TaskSource for FnSource<F> {
    type Task = T;
    fn task(&mut self, reg: &Registry, j: u64) -> Result<Option<T>> {
        (self.0)(reg, j)
    }
}

enum Slot<T> {
    Live(T),
    Dead,
}

/// Merges the outputs of a family of processes.
///
/// A value emitted at own step `s` of task `j` is recorded no later than
/// stage `j + s - 1`. Failing tasks are retired without stopping the rest.
pub struct Dovetail<S: TaskSource> {
    source: S,
    slots: Vec<Slot<S::Task>>,
    family_len: Option<u64>,
    schedule: Schedule,
    steps: u64,
    failures: u64,
    emissions: Vec<Emission>,
}

impl<S: TaskSource> Dovetail<S> {
    pub fn new(source: S) -> Self {
        Dovetail {
            source,
            slots: Vec::new(),
            family_len: None,
            schedule: Schedule::new(),
            steps: 0,
            failures: 0,
            emissions: Vec::new(),
        }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn stage(&self) -> u64 {
        self.schedule.stage()
    }

    pub fn failures(&self) -> u64 {
        self.failures
    }

    pub fn emissions(&self) -> &[Emission] {
        &self.emissions
    }

    pub fn values(&self) -> impl Iterator<Item = &Nat> {
        self.emissions.iter().map(|e| &e.value)
    }

    fn exhausted(&self) -> bool {
        self.family_len.is_some() && self.slots.iter().all(|s| matches!(s, Slot::Dead))
    }

    /// Spends one step on the next live task. Returns `false` once no task
    /// can ever run again.
    pub fn advance(&mut self, reg: &Registry) -> Result<bool> {
        loop {
            if self.exhausted() {
                return Ok(false);
            }
            let j = self.schedule.current();
            let stage = self.schedule.stage();
            self.schedule.advance();
            if j as usize == self.slots.len() && self.family_len.is_none() {
                match self.source.task(reg, j) {
                    Ok(Some(t)) => self.slots.push(Slot::Live(t)),
                    Ok(None) => self.family_len = Some(j),
                    Err(_) => {
                        self.failures += 1;
                        self.slots.push(Slot::Dead);
                    }
                }
            }
            let Some(Slot::Live(task)) = self.slots.get_mut(j as usize) else {
                continue;
            };
            self.steps += 1;
            match task.tick(reg) {
                Ok(tick) => {
                    if let Some(value) = tick.emitted {
                        self.emissions.push(Emission { stage, task: j, value });
                    }
                    if tick.finished {
                        self.slots[j as usize] = Slot::Dead;
                    }
                }
                Err(_) => {
                    self.failures += 1;
                    self.slots[j as usize] = Slot::Dead;
                }
            }
            return Ok(true);
        }
    }

    /// Runs until `fuel` steps in total have been spent.
    pub fn run_fuel(&mut self, reg: &Registry, fuel: Fuel) -> Result<&[Emission]> {
        while self.steps < fuel.0 && self.advance(reg)? {}
        Ok(&self.emissions)
    }

    /// Runs until `pred` holds of some new emission or the fuel runs out.
    pub fn run_until(
        &mut self,
        reg: &Registry,
        fuel: Fuel,
        mut pred: impl FnMut(&Emission) -> bool,
    ) -> Result<Option<Emission>> {
        let mut seen = self.emissions.len();
        while self.steps < fuel.0 {
            if !self.advance(reg)? {
                break;
            }
            while seen < self.emissions.len() {
                if pred(&self.emissions[seen]) {
                    return Ok(Some(self.emissions[seen].clone()));
                }
                seen += 1;
            }
        }
        Ok(None)
    }

    /// Runs through stage `last_stage` inclusive, or until the fuel runs out.
    pub fn run_stages(&mut self, reg: &Registry, last_stage: u64, fuel: Fuel) -> Result<&[Emission]> {
        while self.schedule.stage() <= last_stage && self.steps < fuel.0 && self.advance(reg)? {}
        Ok(&self.emissions)
    }

    /// Runs until `count` emissions exist or the fuel runs out.
    pub fn run_count(&mut self, reg: &Registry, count: usize, fuel: Fuel) -> Result<&[Emission]> {
        while self.emissions.len() < count && self.steps < fuel.0 && self.advance(reg)? {}
        Ok(&self.emissions)
    }
}

impl<S: TaskSource> Task for Dovetail<S> {
    fn tick(&mut self, reg: &Registry) -> Result<Tick> {
        let before = self.emissions.len();
        let alive = self.advance(reg)?;
        Ok(Tick {
            emitted: self.emissions.get(before).map(|e| e.value.clone()),
            finished: !alive,
        })
    }
}

/// The emissions of an enumerator program in canonical order.
pub fn enumerate(prog: ProgramIndex, prefix: Option<Nat>) -> Dovetail<EnumeratorSource> {
    Dovetail::new(EnumeratorSource { prog, prefix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::builtins::{Emitter, HaltAfter};
    use crate::kernel::{nat, small};
    use proptest::prelude::*;

    #[test]
    fn squares_enumerated_in_order() {
        let reg = Registry::new();
        let sq = reg.register(Emitter { name: "square", f: |k| Some(k * k) });
        let mut d = enumerate(sq, None);
        d.run_count(&reg, 6, Fuel(10_000)).unwrap();
        let got: Vec<u64> = d.values().map(small).collect();
        assert_eq!(got, vec![0, 1, 4, 9, 16, 25]);
    }

    #[test]
    fn prefix_is_monotone_in_fuel() {
        let reg = Registry::new();
        let sq = reg.register(Emitter { name: "square", f: |k| Some(k * k) });
        let mut short = enumerate(sq, None);
        short.run_fuel(&reg, Fuel(20)).unwrap();
        let mut long = enumerate(sq, None);
        long.run_fuel(&reg, Fuel(200)).unwrap();
        assert!(long.emissions().starts_with(short.emissions()));
    }

    proptest! {
        // Task j emits j after s_j steps; the emission lands by stage j + s_j - 1.
        #[test]
        fn fairness_bound(delays in proptest::collection::vec(1u64..20, 1..15)) {
            let reg = Registry::new();
            let progs: Vec<_> = delays
                .iter()
                .enumerate()
                .map(|(j, &s)| reg.register(HaltAfter { steps: s, output: nat(j as u64) }))
                .collect();
            let n = progs.len() as u64;
            let mut d = Dovetail::new(FnSource(|reg: &Registry, j: u64| {
                if j < n {
                    Computation::new(reg, progs[j as usize], nat(0), false).map(Some)
                } else {
                    Ok(None)
                }
            }));
            d.run_fuel(&reg, Fuel(100_000)).unwrap();
            prop_assert_eq!(d.emissions().len(), delays.len());
            for e in d.emissions() {
                let j = e.task;
                let s = delays[j as usize];
                prop_assert_eq!(small(&e.value), j);
                prop_assert!(e.stage < j + s);
                prop_assert!(e.stage <= j.max(s) + j);
            }
        }
    }

    #[test]
    fn nested_dovetail_merges_family() {
        let reg = Registry::new();
        // member m emits only m, repeatedly
        let only = reg.register(Emitter { name: "fst", f: |n| Some(crate::kernel::pairing::unpair(n).0) });
        let mut d = Dovetail::new(FnSource(move |_: &Registry, m: u64| {
            Ok(Some(enumerate(only, Some(nat(m)))))
        }));
        d.run_fuel(&reg, Fuel(2_000)).unwrap();
        for m in 0..8u64 {
            assert!(d.values().any(|v| *v == nat(m)), "member {m} missing");
        }
    }
}
