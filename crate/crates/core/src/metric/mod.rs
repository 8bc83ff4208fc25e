//! Computable metric spaces over numbered point sets.
//!
//! Each space carries a distance realizer `⟨a,b⟩ ↦ Cauchy name of d(a,b)`.
//! Spaces with rational (or quadratic-surd) geometry also expose an exact
//! tier that decodes names and compares distances without fuel.

pub mod balls;
mod completion;
pub mod dense;
pub mod sampling;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::kernel::builtins::Const;
use crate::kernel::pairing::{pair, unpair};
use crate::kernel::{Fuel, Nat, Registry, State, StepProgram, StepResult};
use crate::numberings::{Realizer, SpaceHandle};
use crate::reals::{cq_decode, cq_encode, exact_real, CauchyReal, ExactReal, Rational, Surd};

pub use completion::{CompletionDistance, CompletionLimit, DiagonalLimit, LimitDistance, Pnk};
pub use balls::*;
pub use dense::{default_dense, DenseSequence};

/// Fuel granted to realizers of primitive data (distances, radii).
pub const SETUP_FUEL: Fuel = Fuel(1_000_000);

/// A decidable stand-in for the oracle set `X` in parity spaces.
#[derive(Clone, Copy)]
pub struct Predicate {
    pub id: &'static str,
    pub test: fn(&Nat) -> bool,
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id)
    }
}

fn is_square(n: &Nat) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

fn is_prime(n: &Nat) -> bool {
    let Some(v) = num_traits::ToPrimitive::to_u64(n) else { return false };
    v >= 2 && (2..).take_while(|d| d * d <= v).all(|d| v % d != 0)
}

pub const PREDICATES: [Predicate; 4] = [
    Predicate { id: "squares", test: is_square },
    Predicate { id: "primes", test: is_prime },
    Predicate { id: "all", test: |_| true },
    Predicate { id: "none", test: |_| false },
];

pub fn predicate(id: &str) -> Option<Predicate> {
    PREDICATES.iter().copied().find(|p| p.id == id)
}

#[derive(Clone, Copy, Debug)]
pub enum ExactKind {
    /// `c_Q` names, `d(x,y) = |x-y|`.
    Rationals,
    /// `[0,1] ∩ ℚ` under `c_Q`.
    UnitInterval,
    /// `([0,1] ∩ ℚ)²` named by `⟨c_Q, c_Q⟩`, Euclidean distance.
    UnitSquare,
    /// `ℕ` under the identity numbering, `d = [a ≠ b]`.
    Discrete,
    /// `Y = 2X ∪ (2X+1)` with the discrete metric.
    ParityOracle(Predicate),
    /// `Y = 2ℕ ∪ (2X+1)` with `d(n,m) = |n-m|`.
    ParityLine(Predicate),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactPoint {
    Line(Rational),
    Plane(Rational, Rational),
    Discrete(Nat),
}

impl fmt::Display for ExactPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::reals::format_rational as r;
        match self {
            ExactPoint::Line(x) => f.write_str(&r(x)),
            ExactPoint::Plane(x, y) => write!(f, "{},{}", r(x), r(y)),
            ExactPoint::Discrete(n) => write!(f, "{n}"),
        }
    }
}

impl ExactKind {
    fn label(&self) -> String {
        match self {
            ExactKind::Rationals => "rationals".into(),
            ExactKind::UnitInterval => "unit-interval".into(),
            ExactKind::UnitSquare => "unit-square".into(),
            ExactKind::Discrete => "discrete".into(),
            ExactKind::ParityOracle(p) => format!("parity-oracle:{}", p.id),
            ExactKind::ParityLine(p) => format!("parity-line:{}", p.id),
        }
    }

    pub fn decode(&self, name: &Nat) -> ExactPoint {
        match self {
            ExactKind::Rationals | ExactKind::UnitInterval => ExactPoint::Line(cq_decode(name)),
            ExactKind::UnitSquare => {
                let (a, b) = unpair(name);
                ExactPoint::Plane(cq_decode(&a), cq_decode(&b))
            }
            _ => ExactPoint::Discrete(name.clone()),
        }
    }

    pub fn encode(&self, p: &ExactPoint) -> Option<Nat> {
        match (self, p) {
            (ExactKind::Rationals | ExactKind::UnitInterval, ExactPoint::Line(x)) => Some(cq_encode(x)),
            (ExactKind::UnitSquare, ExactPoint::Plane(x, y)) => Some(pair(&cq_encode(x), &cq_encode(y))),
            (
                ExactKind::Discrete | ExactKind::ParityOracle(_) | ExactKind::ParityLine(_),
                ExactPoint::Discrete(n),
            ) => Some(n.clone()),
            _ => None,
        }
    }

    pub fn contains(&self, p: &ExactPoint) -> bool {
        let unit = |x: &Rational| !x.is_negative() && *x <= Rational::one();
        match (self, p) {
            (ExactKind::Rationals, ExactPoint::Line(_)) => true,
            (ExactKind::UnitInterval, ExactPoint::Line(x)) => unit(x),
            (ExactKind::UnitSquare, ExactPoint::Plane(x, y)) => unit(x) && unit(y),
            (ExactKind::Discrete, ExactPoint::Discrete(_)) => true,
            (ExactKind::ParityOracle(x), ExactPoint::Discrete(n)) => (x.test)(&(n / 2u32)),
            (ExactKind::ParityLine(x), ExactPoint::Discrete(n)) => {
                n % 2u32 == Nat::zero() || (x.test)(&(n / 2u32))
            }
            _ => false,
        }
    }

    pub fn distance(&self, a: &ExactPoint, b: &ExactPoint) -> Option<Surd> {
        match (self, a, b) {
            (ExactKind::ParityLine(_), ExactPoint::Discrete(x), ExactPoint::Discrete(y)) => {
                let d = BigInt::from(x.clone()) - BigInt::from(y.clone());
                Some(Surd::from(Rational::from(d.abs())))
            }
            (_, ExactPoint::Line(x), ExactPoint::Line(y)) => Some(Surd::from((x - y).abs())),
            (_, ExactPoint::Plane(x1, y1), ExactPoint::Plane(x2, y2)) => {
                let dx = x1 - x2;
                let dy = y1 - y2;
                Some(Surd::sqrt(&(&dx * &dx + &dy * &dy)))
            }
            (_, ExactPoint::Discrete(x), ExactPoint::Discrete(y)) => {
                Some(Surd::from(Rational::from_integer(BigInt::from((x != y) as u32))))
            }
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Geometry {
    Exact(ExactKind),
    /// Cauchy completion: names are programs `k ↦ base name` converging at
    /// rate `2^{-k}`.
    Completion(Arc<MetricSpace>),
}

#[derive(Clone, Debug)]
pub struct MetricSpace {
    pub handle: SpaceHandle,
    pub distance: Realizer,
    pub geometry: Geometry,
    /// Limit algorithm on names of fast-converging sequences, when the space has one.
    pub limit: Option<Realizer>,
}

/// `⟨a,b⟩ ↦ ExactReal(d(a,b))`, one step.
#[derive(Clone, Debug)]
pub struct ExactDistance(pub ExactKind);

impl StepProgram for ExactDistance {
    fn step(&self, reg: &Registry, input: &Nat, _: State) -> Result<StepResult> {
        let (a, b) = unpair(input);
        let d = self
            .0
            .distance(&self.0.decode(&a), &self.0.decode(&b))
            .ok_or_else(|| Error::Invalid("incompatible points".into()))?;
        Ok(StepResult::Halted(exact_real(reg, d).0.name()))
    }
    fn key(&self) -> Option<String> {
        Some(self.0.label())
    }
}

impl MetricSpace {
    pub fn exact(reg: &Registry, kind: ExactKind) -> Arc<MetricSpace> {
        Arc::new(MetricSpace {
            handle: SpaceHandle(kind.label()),
            distance: Realizer(reg.register(ExactDistance(kind))),
            geometry: Geometry::Exact(kind),
            limit: None,
        })
    }

    pub fn rationals(reg: &Registry) -> Arc<MetricSpace> {
        Self::exact(reg, ExactKind::Rationals)
    }

    pub fn unit_interval(reg: &Registry) -> Arc<MetricSpace> {
        Self::exact(reg, ExactKind::UnitInterval)
    }

    pub fn unit_square(reg: &Registry) -> Arc<MetricSpace> {
        Self::exact(reg, ExactKind::UnitSquare)
    }

    pub fn discrete(reg: &Registry) -> Arc<MetricSpace> {
        Self::exact(reg, ExactKind::Discrete)
    }

    /// Looks up a space by its command-line handle.
    pub fn by_handle(reg: &Registry, handle: &str) -> Result<Arc<MetricSpace>> {
        let oracle = |prefix: &str| -> Result<Option<Predicate>> {
            match handle.strip_prefix(prefix) {
                Some(id) => predicate(id)
                    .map(Some)
                    .ok_or_else(|| Error::Invalid(format!("unknown predicate id {id:?}"))),
                None => Ok(None),
            }
        };
        if let Some(p) = oracle("parity-oracle:")? {
            return Ok(Self::exact(reg, ExactKind::ParityOracle(p)));
        }
        if let Some(p) = oracle("parity-line:")? {
            return Ok(Self::exact(reg, ExactKind::ParityLine(p)));
        }
        Ok(match handle {
            "rationals" => Self::rationals(reg),
            "unit-interval" => Self::unit_interval(reg),
            "unit-square" => Self::unit_square(reg),
            "discrete" => Self::discrete(reg),
            "reals" => cauchy_completion(reg, &Self::rationals(reg)),
            _ => return Err(Error::Invalid(format!("unknown space {handle:?}"))),
        })
    }

    pub fn exact_kind(&self) -> Option<ExactKind> {
        match &self.geometry {
            Geometry::Exact(k) => Some(*k),
            Geometry::Completion(base) => base.exact_kind(),
        }
    }

    /// Exact value of a point name, when the exact tier can read it.
    pub fn exact_point(&self, reg: &Registry, name: &Nat) -> Option<ExactPoint> {
        match &self.geometry {
            Geometry::Exact(k) => Some(k.decode(name)),
            Geometry::Completion(base) => completion::decode(reg, base, name, 4),
        }
    }

    /// A name for an exact point.
    pub fn point_name(&self, reg: &Registry, p: &ExactPoint) -> Option<Nat> {
        match &self.geometry {
            Geometry::Exact(k) => k.encode(p),
            Geometry::Completion(base) => {
                let inner = base.point_name(reg, p)?;
                Some(reg.register(Const(inner)).name())
            }
        }
    }

    pub fn exact_distance(&self, reg: &Registry, a: &Nat, b: &Nat) -> Option<Surd> {
        let kind = self.exact_kind()?;
        kind.distance(&self.exact_point(reg, a)?, &self.exact_point(reg, b)?)
    }

    /// Cauchy name of `d(a,b)` from the distance realizer.
    pub fn distance(&self, reg: &Registry, a: &Nat, b: &Nat) -> Result<CauchyReal> {
        let name = reg.evaluate(self.distance.0, &pair(a, b), SETUP_FUEL)?;
        Ok(CauchyReal(reg.resolve_or_err(&name)?))
    }

    pub fn contains(&self, reg: &Registry, name: &Nat) -> Option<bool> {
        Some(self.exact_kind()?.contains(&self.exact_point(reg, name)?))
    }
}

/// Completion of a space along fast-converging sequences of its names.
pub fn cauchy_completion(reg: &Registry, base: &Arc<MetricSpace>) -> Arc<MetricSpace> {
    let distance = reg.register(CompletionDistance { base: base.clone() });
    let limit = reg.register(CompletionLimit);
    Arc::new(MetricSpace {
        handle: SpaceHandle(format!("completion({})", base.handle.0)),
        distance: Realizer(distance),
        geometry: Geometry::Completion(base.clone()),
        limit: Some(Realizer(limit)),
    })
}

/// Exact value of a Cauchy name registered with a known value.
pub fn exact_radius(reg: &Registry, r: CauchyReal) -> Option<Surd> {
    reg.downcast::<ExactReal>(r.0).map(|e| e.0)
}
