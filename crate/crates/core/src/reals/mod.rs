//! Rationals, Cauchy reals and left reals as step programs.
//!
//! A Cauchy name `x` answers `n` with a rational within strict `2^{-n}` of
//! its value. A left name answers `n` with the `n`-th term of a
//! nondecreasing sequence of rationals strictly below its value and
//! converging to it; an unbounded sequence names `+∞`.

mod programs;
pub(crate) use programs::exceeds_dyadic;
pub mod surd;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::kernel::pairing::{pair3, unpair3};
use crate::kernel::{Fuel, Nat, ProgramIndex, Registry, StepResult};
use crate::numberings::{CeName, Verdict};

pub use programs::{
    CauchyBinary, CauchyLimit, ExactReal, LeftExact, LeftMin, LeftOfCauchy, LeftScale, LeftSup,
    LeftUnbounded, LtLeft, LtSearch, Op, SqrtBisect,
};
pub use surd::Surd;

pub type Rational = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CauchyReal(pub ProgramIndex);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LeftReal(pub ProgramIndex);

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `2^{-n}`.
pub fn dyadic(n: u64) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << n)
}

/// `⟨p,q,r⟩ ↦ (-1)^p · q/(r+1)`.
pub fn cq_decode(name: &Nat) -> Rational {
    let (p, q, r) = unpair3(name);
    let mut v = Rational::new(BigInt::from(q), BigInt::from(r + 1u32));
    if p % 2u32 == Nat::one() {
        v = -v;
    }
    v
}

/// Canonical name: sign bit, reduced numerator and denominator minus one.
pub fn cq_encode(q: &Rational) -> Nat {
    let p = Nat::from(q.is_negative() as u32);
    let num = q.numer().magnitude().clone();
    let den = q.denom().magnitude().clone();
    pair3(&p, &num, &(den - 1u32))
}

/// Reads `-3/7`, `5`, `0/1`; rejects empty parts, repeated slashes and zero
/// denominators.
pub fn parse_rational(text: &str) -> Result<Rational> {
    parse_rational_at(text, 0)
}

pub(crate) fn parse_rational_at(text: &str, offset: usize) -> Result<Rational> {
    let t = text.trim();
    let lead = text.len() - text.trim_start().len() + offset;
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let col = lead + neg as usize;
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let digits = |s: &str, at: usize| -> Result<BigInt> {
        if s.is_empty() {
            return Err(Error::parse(at, "expected digits"));
        }
        if let Some(i) = s.find(|c: char| !c.is_ascii_digit()) {
            return Err(Error::parse(at + i, format!("unexpected character {:?}", s[i..].chars().next().unwrap())));
        }
        Ok(BigInt::parse_bytes(s.as_bytes(), 10).expect("digits checked"))
    };
    let n = digits(num, col)?;
    let d = match den {
        Some(d) => {
            let at = col + num.len() + 1;
            let v = digits(d, at)?;
            if v.is_zero() {
                return Err(Error::parse(at, "zero denominator"));
            }
            v
        }
        None => BigInt::one(),
    };
    let v = Rational::new(n, d);
    Ok(if neg { -v } else { v })
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn exact_real(reg: &Registry, s: Surd) -> CauchyReal {
    CauchyReal(reg.register(ExactReal(s)))
}

pub fn rational_real(reg: &Registry, q: Rational) -> CauchyReal {
    exact_real(reg, Surd::from(q))
}

/// The exact value behind a name registered through [`exact_real`].
pub fn exact_value(reg: &Registry, x: CauchyReal) -> Option<Surd> {
    reg.downcast::<ExactReal>(x.0).map(|e| e.0)
}

pub fn sqrt_bisect(reg: &Registry, q: Rational) -> CauchyReal {
    assert!(!q.is_negative(), "square root of a negative rational");
    CauchyReal(reg.register(SqrtBisect(q)))
}

fn binary(reg: &Registry, op: Op, a: CauchyReal, b: CauchyReal) -> CauchyReal {
    if let (Some(x), Some(y)) = (exact_value(reg, a), exact_value(reg, b)) {
        let exact = match op {
            Op::Add => Some(&x + &y),
            Op::Sub => Some(&x - &y),
            Op::Min => x.try_min(&y),
        };
        if let Some(v) = exact {
            return exact_real(reg, v);
        }
    }
    CauchyReal(reg.script(CauchyBinary { op, a: a.0, b: b.0 }))
}

pub fn cauchy_add(reg: &Registry, a: CauchyReal, b: CauchyReal) -> CauchyReal {
    binary(reg, Op::Add, a, b)
}

pub fn cauchy_sub(reg: &Registry, a: CauchyReal, b: CauchyReal) -> CauchyReal {
    binary(reg, Op::Sub, a, b)
}

pub fn cauchy_min(reg: &Registry, a: CauchyReal, b: CauchyReal) -> CauchyReal {
    binary(reg, Op::Min, a, b)
}

/// Limit of a fast-converging sequence: `seq(k)` names a Cauchy real within
/// `2^{-k}` of the limit.
pub fn limit(reg: &Registry, seq: ProgramIndex) -> CauchyReal {
    CauchyReal(reg.script(CauchyLimit { seq }))
}

pub fn cauchy_approx(reg: &Registry, x: CauchyReal, n: u64, fuel: Fuel) -> Result<Option<Rational>> {
    Ok(reg.run(x.0, &Nat::from(n), fuel)?.halted().map(cq_decode))
}

pub fn lt_program(reg: &Registry, a: CauchyReal, b: CauchyReal) -> ProgramIndex {
    reg.script(LtSearch { a: a.0, b: b.0 })
}

/// Confirms `a < b` (`Less`) or `b < a` (`Greater`) by running both
/// semi-decisions with doubling budgets up to `fuel` each.
pub fn race_lt(reg: &Registry, a: CauchyReal, b: CauchyReal, fuel: Fuel) -> Result<Option<std::cmp::Ordering>> {
    let mut f = 64u64.min(fuel.0);
    loop {
        if semidecide_lt(reg, a, b, Fuel(f))? == Verdict::Yes {
            return Ok(Some(std::cmp::Ordering::Less));
        }
        if semidecide_lt(reg, b, a, Fuel(f))? == Verdict::Yes {
            return Ok(Some(std::cmp::Ordering::Greater));
        }
        if f >= fuel.0 {
            return Ok(None);
        }
        f = (f * 2).min(fuel.0);
    }
}

/// YES iff some `n` has `a_n + 2^{-n} < b_n - 2^{-n}`; never refutes.
pub fn semidecide_lt(reg: &Registry, a: CauchyReal, b: CauchyReal, fuel: Fuel) -> Result<Verdict> {
    let p = lt_program(reg, a, b);
    Ok(verdict(reg.run(p, &Nat::default(), fuel)?))
}

/// YES iff some `n` has `a_n + 2^{-n} < l_n`.
pub fn semidecide_lt_left(reg: &Registry, a: CauchyReal, l: LeftReal, fuel: Fuel) -> Result<Verdict> {
    let p = reg.script(LtLeft { a: a.0, l: l.0 });
    Ok(verdict(reg.run(p, &Nat::default(), fuel)?))
}

fn verdict(r: StepResult) -> Verdict {
    match r {
        StepResult::Halted(_) => Verdict::Yes,
        StepResult::Running(_) => Verdict::NotYet,
    }
}

/// `l_n = max_{k≤n} (x_k - 2^{-k})`.
pub fn cauchy_to_left(reg: &Registry, x: CauchyReal) -> LeftReal {
    LeftReal(reg.script(LeftOfCauchy { x: x.0 }))
}

/// Terms `q·(1 - 2^{-(n+1)})` for `q > 0`, otherwise `q - 2^{-n}`.
pub fn left_exact(reg: &Registry, q: Rational) -> LeftReal {
    LeftReal(reg.register(LeftExact(q)))
}

pub fn left_unbounded(reg: &Registry) -> LeftReal {
    LeftReal(reg.register(LeftUnbounded))
}

pub fn left_min(reg: &Registry, a: LeftReal, b: LeftReal) -> LeftReal {
    LeftReal(reg.script(LeftMin { a: a.0, b: b.0 }))
}

/// Multiplies by a positive rational.
pub fn left_scale(reg: &Registry, a: LeftReal, c: Rational) -> LeftReal {
    assert!(c.is_positive(), "left reals scale only by positive factors");
    LeftReal(reg.script(LeftScale { a: a.0, c }))
}

/// Supremum of a c.e. family of left reals given by their codes.
pub fn left_sup(reg: &Registry, codes: CeName) -> LeftReal {
    LeftReal(reg.script(LeftSup { codes: codes.0 }))
}

pub fn left_term(reg: &Registry, l: LeftReal, n: u64, fuel: Fuel) -> Result<Option<Rational>> {
    Ok(reg.run(l.0, &Nat::from(n), fuel)?.halted().map(cq_decode))
}

/// Sign of a rational as `-1`, `0` or `1`.
pub fn sign(q: &Rational) -> i8 {
    match q.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
