//! Total dense sequences `j ↦ point name`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernel::builtins::{Const, Identity};
use crate::kernel::pairing::{pair, unpair};
use crate::kernel::script::{expect, reg_small, Action, Outcome, Routine};
use crate::kernel::{Nat, ProgramIndex, Registry, State, StepProgram, StepResult};
use crate::reals::{cq_encode, Rational};

use super::{ExactKind, Geometry, MetricSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DenseSequence(pub ProgramIndex);

/// Stern's diatomic pair `(fusc(i), fusc(i+1))`.
fn fusc_pair(i: &Nat) -> (Nat, Nat) {
    let (mut a, mut b) = (Nat::one(), Nat::zero());
    let mut n = i.clone();
    while !n.is_zero() {
        if n.bit(0) {
            b += &a;
        } else {
            a += &b;
        }
        n >>= 1u32;
    }
    (b, a)
}

/// `i ≥ 1 ↦ fusc(i)/fusc(i+1)`: every positive rational exactly once.
pub fn calkin_wilf(i: &Nat) -> Rational {
    let (p, _) = fusc_pair(i);
    let (q, _) = fusc_pair(&(i + 1u32));
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// `0, 1, -1, 1/2, -1/2, 2, -2, …`.
pub fn signed_rational(j: &Nat) -> Rational {
    if j.is_zero() {
        return Rational::zero();
    }
    let i: Nat = (j + 1u32) >> 1u32;
    let q = calkin_wilf(&i);
    if j.bit(0) {
        q
    } else {
        -q
    }
}

/// `0, 1`, then `q/(1+q)` along the positive rationals: all of `[0,1] ∩ ℚ`.
pub fn unit_rational(j: &Nat) -> Rational {
    match num_traits::ToPrimitive::to_u64(j) {
        Some(0) => Rational::zero(),
        Some(1) => Rational::one(),
        _ => {
            let q = calkin_wilf(&(j - 1u32));
            &q / (Rational::one() + &q)
        }
    }
}

#[derive(Clone, Debug)]
struct RationalsDense;

impl StepProgram for RationalsDense {
    fn step(&self, _: &Registry, input: &Nat, _: State) -> Result<StepResult> {
        Ok(StepResult::Halted(cq_encode(&signed_rational(input))))
    }
    fn key(&self) -> Option<String> {
        Some(String::new())
    }
}

#[derive(Clone, Debug)]
struct UnitDense;

impl StepProgram for UnitDense {
    fn step(&self, _: &Registry, input: &Nat, _: State) -> Result<StepResult> {
        Ok(StepResult::Halted(cq_encode(&unit_rational(input))))
    }
    fn key(&self) -> Option<String> {
        Some(String::new())
    }
}

#[derive(Clone, Debug)]
struct SquareDense;

impl StepProgram for SquareDense {
    fn step(&self, _: &Registry, input: &Nat, _: State) -> Result<StepResult> {
        let (a, b) = unpair(input);
        Ok(StepResult::Halted(pair(&cq_encode(&unit_rational(&a)), &cq_encode(&unit_rational(&b)))))
    }
    fn key(&self) -> Option<String> {
        Some(String::new())
    }
}

/// `j ↦ Const(base(j))`: constant sequences as completion names.
#[derive(Clone, Debug)]
struct EmbedDense {
    base: ProgramIndex,
}

impl Routine for EmbedDense {
    fn next(&self, reg: &Registry, input: &Nat, regs: &mut Vec<Nat>, last: Option<Outcome>) -> Result<Action> {
        if reg_small(regs, 0) == 0 {
            *regs = vec![Nat::one()];
            return Ok(Action::Call(self.base, input.clone()));
        }
        Ok(Action::Halt(reg.register(Const(expect(last)?)).name()))
    }
    fn key(&self) -> Option<String> {
        Some(self.base.0.to_string())
    }
}

/// The standard dense sequence of a space, when it has one.
pub fn default_dense(reg: &Registry, space: &Arc<MetricSpace>) -> Result<DenseSequence> {
    let p = match &space.geometry {
        Geometry::Exact(ExactKind::Rationals) => reg.register(RationalsDense),
        Geometry::Exact(ExactKind::UnitInterval) => reg.register(UnitDense),
        Geometry::Exact(ExactKind::UnitSquare) => reg.register(SquareDense),
        Geometry::Exact(ExactKind::Discrete) => reg.register(Identity),
        Geometry::Exact(k) => {
            return Err(Error::Invalid(format!("no standard dense sequence on {}", k.label())))
        }
        Geometry::Completion(base) => {
            let inner = default_dense(reg, base)?;
            reg.script(EmbedDense { base: inner.0 })
        }
    };
    Ok(DenseSequence(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reals::rational;
    use std::collections::HashSet;

    #[test]
    fn calkin_wilf_prefix() {
        let got: Vec<Rational> = (1u32..8).map(|i| calkin_wilf(&Nat::from(i))).collect();
        let want = [(1, 1), (1, 2), (2, 1), (1, 3), (3, 2), (2, 3), (3, 1)];
        assert_eq!(got, want.iter().map(|&(p, q)| rational(p, q)).collect::<Vec<_>>());
    }

    #[test]
    fn small_rationals_appear_once() {
        let seen: Vec<Rational> = (0u32..4000).map(|j| signed_rational(&Nat::from(j))).collect();
        let set: HashSet<_> = seen.iter().cloned().collect();
        assert_eq!(set.len(), seen.len());
        for p in -6i64..=6 {
            for q in 1i64..=6 {
                assert!(set.contains(&rational(p, q)), "{p}/{q} missing");
            }
        }
        let unit: HashSet<Rational> = (0u32..2000).map(|j| unit_rational(&Nat::from(j))).collect();
        for q in 1i64..=6 {
            for p in 0..=q {
                assert!(unit.contains(&rational(p, q)));
            }
        }
    }
}
