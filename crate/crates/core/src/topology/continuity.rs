//! Effective metric continuity: a modulus `φ(x, ε)` promises
//! `d(x,y) < φ(x,ε) ⟹ d(f(x),f(y)) < ε`. The harness samples triples and
//! confirms or refutes the conclusion whenever the premise is confirmed.

use std::cmp::Ordering;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernel::builtins::{Identity, Primitive};
use crate::kernel::pairing::{pair, unpair};
use crate::kernel::{Fuel, Nat, ProgramIndex, Registry, State, StepProgram, StepResult};
use crate::metric::sampling::{perturb, sample_point, sample_rational};
use crate::metric::{exact_radius, BallName, ExactPoint, MetricSpace, SETUP_FUEL};
use crate::topology::{BasicAsOpen, SpreenBasis};
use crate::numberings::{Realizer, Verdict};
use crate::reals::{
    cq_decode, cq_encode, exact_real, left_exact, left_min, left_scale, left_term, rational, rational_real,
    race_lt, semidecide_lt_left, LeftReal, Rational,
};

/// Maps `ℚ → ℚ` shipped as realizers on `c_Q` names.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapId {
    Identity,
    Double,
    Half,
    Square,
}

impl FromStr for MapId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "identity" => MapId::Identity,
            "double" => MapId::Double,
            "half" => MapId::Half,
            "square" => MapId::Square,
            _ => return Err(Error::Invalid(format!("unknown function id `{s}`"))),
        })
    }
}

fn lift(f: fn(Rational) -> Rational, n: &Nat) -> Nat {
    cq_encode(&f(cq_decode(n)))
}

pub fn map_realizer(reg: &Registry, id: MapId) -> Realizer {
    let prim = |name, f| reg.register(Primitive { name, f });
    Realizer(match id {
        MapId::Identity => reg.register(Identity),
        MapId::Double => prim("double", |n| lift(|x| x * rational(2, 1), n)),
        MapId::Half => prim("half", |n| lift(|x| x * rational(1, 2), n)),
        MapId::Square => prim("square", |n| lift(|x| &x * &x, n)),
    })
}

/// `B(c, r) ↦` the open `B(c/a, r/|a|)` for the linear map `x ↦ a·x`.
#[derive(Clone, Debug)]
pub struct LinearPreimage {
    pub member: ProgramIndex,
    pub a: Rational,
}

impl StepProgram for LinearPreimage {
    fn step(&self, reg: &Registry, input: &Nat, _: State) -> Result<StepResult> {
        let b = BallName(input.clone());
        let r = exact_radius(reg, b.radius(reg)?)
            .ok_or_else(|| Error::NotExact("linear preimage needs an exact radius".into()))?;
        let c = cq_decode(&b.center()) / &self.a;
        let r = r.scale(&(Rational::from_integer(1.into()) / num_traits::Signed::abs(&self.a)));
        let pre = BallName::new(&cq_encode(&c), exact_real(reg, r));
        Ok(StepResult::Halted(BasicAsOpen { member: self.member }.open(reg, &pre.0).0))
    }
    fn key(&self) -> Option<String> {
        Some(format!("{}:{}", self.member.0, self.a))
    }
}

/// Basic preimages for the linear maps among [`MapId`]; `None` for squaring.
pub fn basic_preimage(reg: &Registry, basis: &SpreenBasis, id: MapId) -> Option<Realizer> {
    let a = match id {
        MapId::Identity => rational(1, 1),
        MapId::Double => rational(2, 1),
        MapId::Half => rational(1, 2),
        MapId::Square => return None,
    };
    Some(Realizer(reg.register(LinearPreimage { member: basis.member, a })))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModulusId {
    /// `φ(x, ε) = ε`.
    Eps,
    /// `φ(x, ε) = ε/2`.
    HalfEps,
    /// `φ(x, ε) = min(1, ε/(2|x|+1))`, a modulus for squaring on `ℚ`.
    SquareLocal,
}

impl FromStr for ModulusId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "eps" => ModulusId::Eps,
            "half-eps" => ModulusId::HalfEps,
            "square-local" => ModulusId::SquareLocal,
            _ => return Err(Error::Invalid(format!("unknown modulus id `{s}`"))),
        })
    }
}

/// `⟨x, ε⟩ ↦ φ(x, ε)` on left-real codes.
#[derive(Clone, Debug)]
pub struct Modulus(pub ModulusId);

impl StepProgram for Modulus {
    fn step(&self, reg: &Registry, input: &Nat, _: State) -> Result<StepResult> {
        let (x, eps) = unpair(input);
        let eps = LeftReal(reg.resolve_or_err(&eps)?);
        let out = match self.0 {
            ModulusId::Eps => eps,
            ModulusId::HalfEps => left_scale(reg, eps, rational(1, 2)),
            ModulusId::SquareLocal => {
                let c = rational(1, 1) / (num_traits::Signed::abs(&cq_decode(&x)) * rational(2, 1) + rational(1, 1));
                left_min(reg, left_exact(reg, rational(1, 1)), left_scale(reg, eps, c))
            }
        };
        Ok(StepResult::Halted(out.0.name()))
    }
    fn key(&self) -> Option<String> {
        Some(format!("{:?}", self.0))
    }
}

pub fn modulus_program(reg: &Registry, id: ModulusId) -> ProgramIndex {
    reg.register(Modulus(id))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub x: ExactPoint,
    pub y: ExactPoint,
    pub eps: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SampleOutcome {
    /// Premise and conclusion both confirmed.
    Ok,
    /// Premise confirmed and `d(f(x), f(y)) > ε` confirmed.
    Violation(Box<Witness>),
    Inconclusive,
}

pub struct ModulusCheck<'a> {
    pub domain: &'a MetricSpace,
    pub codomain: &'a MetricSpace,
    pub f: Realizer,
    pub phi: ProgramIndex,
    pub fuel: Fuel,
}

#[derive(Clone, Debug)]
pub struct ModulusConfig {
    pub samples: usize,
    pub seed: u64,
    pub lo: Rational,
    pub hi: Rational,
    pub max_den: u64,
}

#[derive(Clone, Debug, Default)]
pub struct ModulusReport {
    pub ok: usize,
    pub inconclusive: usize,
    pub violations: Vec<Witness>,
}

impl ModulusCheck<'_> {
    fn name(&self, space: &MetricSpace, reg: &Registry, p: &ExactPoint) -> Result<Nat> {
        space
            .point_name(reg, p)
            .ok_or_else(|| Error::Invalid(format!("{p} is not a point of {}", space.handle.0)))
    }

    /// `φ(x, ε)` as a left real.
    pub fn delta(&self, reg: &Registry, x: &ExactPoint, eps: &Rational) -> Result<LeftReal> {
        let xn = self.name(self.domain, reg, x)?;
        let e = left_exact(reg, eps.clone());
        Ok(LeftReal(reg.resolve_or_err(&reg.evaluate(self.phi, &pair(&xn, &e.0.name()), SETUP_FUEL)?)?))
    }

    pub fn check_triple(&self, reg: &Registry, x: &ExactPoint, y: &ExactPoint, eps: &Rational) -> Result<SampleOutcome> {
        let (xn, yn) = (self.name(self.domain, reg, x)?, self.name(self.domain, reg, y)?);
        let delta = self.delta(reg, x, eps)?;
        let d = self.domain.distance(reg, &xn, &yn)?;
        if semidecide_lt_left(reg, d, delta, self.fuel)? != Verdict::Yes {
            return Ok(SampleOutcome::Inconclusive);
        }
        let fx = reg.evaluate(self.f.0, &xn, SETUP_FUEL)?;
        let fy = reg.evaluate(self.f.0, &yn, SETUP_FUEL)?;
        let d2 = self.codomain.distance(reg, &fx, &fy)?;
        let e = rational_real(reg, eps.clone());
        Ok(match race_lt(reg, d2, e, self.fuel)? {
            Some(Ordering::Less) => SampleOutcome::Ok,
            Some(_) => SampleOutcome::Violation(Box::new(Witness { x: x.clone(), y: y.clone(), eps: eps.clone() })),
            None => SampleOutcome::Inconclusive,
        })
    }

    /// First positive term of `φ(x, ε)`, a rational lower bound for `δ`.
    fn delta_lower(&self, reg: &Registry, x: &ExactPoint, eps: &Rational) -> Result<Option<Rational>> {
        let delta = self.delta(reg, x, eps)?;
        for n in 0..=40 {
            if let Some(q) = left_term(reg, delta, n, self.fuel)? {
                if q > Rational::default() {
                    return Ok(Some(q));
                }
            }
        }
        Ok(None)
    }

    pub fn run(&self, reg: &Registry, cfg: &ModulusConfig) -> Result<ModulusReport> {
        let kind = self
            .domain
            .exact_kind()
            .ok_or_else(|| Error::NotExact(format!("sampling needs an exact domain, got {}", self.domain.handle.0)))?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut report = ModulusReport::default();
        for _ in 0..cfg.samples {
            let x = sample_point(kind, &mut rng, &cfg.lo, &cfg.hi, cfg.max_den);
            let eps = sample_rational(&mut rng, &rational(1, 100), &rational(1, 1), 100);
            let Some(lb) = self.delta_lower(reg, &x, &eps)? else {
                report.inconclusive += 1;
                continue;
            };
            let y = perturb(kind, &x, &lb, &mut rng);
            match self.check_triple(reg, &x, &y, &eps)? {
                SampleOutcome::Ok => report.ok += 1,
                SampleOutcome::Violation(w) => report.violations.push(*w),
                SampleOutcome::Inconclusive => report.inconclusive += 1,
            }
        }
        Ok(report)
    }
}
