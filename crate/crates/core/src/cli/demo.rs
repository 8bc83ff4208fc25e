//! Scripted constructions that print only facts they have checked.

use crate::error::{Error, Result};
use crate::kernel::{Fuel, Nat, Registry};
use crate::metric::{ball, ball_formal_incl, exact_radius, theta, ExactKind, ExactPoint, InclusionMode, MetricSpace};
use crate::numberings::{decidable_predicate, decidable_to_sd, decide, Decision, Verdict};
use crate::reals::{format_rational, rational, Rational};
use crate::topology::{ershov_member, ershov_open};

use super::{Records, Status};

pub(super) const NAMES: [&str; 4] = ["square-formal-vs-actual", "parity-oracle", "theta-epsilon", "cont-metric-not-lacombe"];

pub(super) fn validate(name: &str) -> Result<()> {
    if NAMES.contains(&name) {
        Ok(())
    } else {
        Err(Error::Invalid(format!("unknown demo {name:?}; available: {}", NAMES.join(", "))))
    }
}

pub(super) fn run(name: &str, rec: &mut Records<'_>, fuel: Fuel) -> Result<Status> {
    match name {
        "square-formal-vs-actual" => square(rec),
        "parity-oracle" => parity(rec, fuel),
        "theta-epsilon" => theta_epsilon(rec),
        "cont-metric-not-lacombe" => parity_map(rec),
        _ => validate(name).map(|_| Status::Usage),
    }
}

/// `B((0,0), 1/2) ⊆ B((1/10,1/10), 1/2)` inside the unit square, while the
/// formal inclusion `d(c₁,c₂) + r₁ ≤ r₂` fails.
fn square(rec: &mut Records<'_>) -> Result<Status> {
    let reg = Registry::new();
    let s = MetricSpace::unit_square(&reg);
    let r = rational(1, 2);
    let c1 = ExactPoint::Plane(rational(0, 1), rational(0, 1));
    let c2 = ExactPoint::Plane(rational(1, 10), rational(1, 10));
    let b1 = ball(&reg, &s, &c1, r.clone())?;
    let b2 = ball(&reg, &s, &c2, r.clone())?;
    rec.emit(0, "balls", format!("B1=({c1};1/2) B2=({c2};1/2) in unit-square"))?;
    // Grid oracle: exact squared distances, no square roots.
    let n = 80i64;
    let d2 = |p: &(Rational, Rational), c: &ExactPoint| {
        let ExactPoint::Plane(cx, cy) = c else { unreachable!() };
        (&p.0 - cx) * (&p.0 - cx) + (&p.1 - cy) * (&p.1 - cy)
    };
    let r2 = &r * &r;
    let (mut inside, mut escaped) = (0usize, 0usize);
    for i in 0..=n {
        for j in 0..=n {
            let p = (rational(i, n), rational(j, n));
            if d2(&p, &c1) < r2 {
                inside += 1;
                if d2(&p, &c2) >= r2 {
                    escaped += 1;
                }
            }
        }
    }
    rec.emit(1, "actual", format!("grid={}x{} points_in_B1={inside} outside_B2={escaped}", n + 1, n + 1))?;
    let formal = ball_formal_incl(&reg, &s, &b1, &b2, InclusionMode::Exact, Fuel(0))?;
    rec.emit(2, "formal", format!("B1 formally inside B2: {formal} (d(c1,c2)+r1 = sqrt(1/50)+1/2 > 1/2)"))?;
    Ok(if escaped == 0 && formal == Decision::No { Status::Yes } else { Status::No })
}

/// `Y = 2X ∪ (2X+1)`: `2X` is decided by parity, hence Ershov open.
fn parity(rec: &mut Records<'_>, fuel: Fuel) -> Result<Status> {
    let reg = Registry::new();
    let pred = crate::metric::predicate("primes").expect("shipped predicate");
    let kind = ExactKind::ParityOracle(pred);
    rec.emit(0, "space", "Y = 2X u (2X+1) with X = primes as a stand-in oracle, identity numbering")?;
    let evens = decidable_predicate(&reg, "even", |n| !n.bit(0));
    let open = ershov_open(decidable_to_sd(&reg, evens));
    let mut ok = true;
    let mut shown = 0;
    for y in 0u32..40 {
        let p = ExactPoint::Discrete(Nat::from(y));
        if !kind.contains(&p) {
            continue;
        }
        let y_name = Nat::from(y);
        let d = decide(&reg, evens, &y_name, fuel)?;
        let v = ershov_member(&reg, open, &y_name, fuel)?;
        ok &= (d == Decision::Yes) == (y % 2 == 0) && (v == Verdict::Yes) == (d == Decision::Yes);
        rec.emit(shown, "member", format!("y={y} in 2X: decided {d}, Ershov open {v}"))?;
        shown += 1;
    }
    rec.emit(shown, "lacombe", "not attempted: a Lacombe name of 2X would enumerate X")?;
    Ok(if ok { Status::Yes } else { Status::No })
}

/// `Θ(1, B(1/2, 1/2+ε), B(1,1)) = ε` on `[0,1]`, although the two balls
/// meet in the same set for every `ε`.
fn theta_epsilon(rec: &mut Records<'_>) -> Result<Status> {
    let reg = Registry::new();
    let s = MetricSpace::unit_interval(&reg);
    let z = s.point_name(&reg, &ExactPoint::Line(rational(1, 1))).expect("1 is in [0,1]");
    let mut ok = true;
    for (i, eps) in [rational(1, 2), rational(1, 10), rational(1, 1000)].into_iter().enumerate() {
        let b1 = ball(&reg, &s, &ExactPoint::Line(rational(1, 2)), rational(1, 2) + &eps)?;
        let b2 = ball(&reg, &s, &ExactPoint::Line(rational(1, 1)), rational(1, 1))?;
        let t = exact_radius(&reg, theta(&reg, &s, &z, &b1, &b2)?)
            .ok_or_else(|| Error::NotExact("theta".into()))?;
        ok &= t.as_rational() == Some(&eps);
        rec.emit(i, "theta", format!("eps={} theta={t}", format_rational(&eps)))?;
    }
    Ok(if ok { Status::Yes } else { Status::No })
}

/// `n ↦ n mod 2` from `Y` (discrete metric) to `{0,1}` has modulus `1/2`.
fn parity_map(rec: &mut Records<'_>) -> Result<Status> {
    let reg = Registry::new();
    let pred = crate::metric::predicate("primes").expect("shipped predicate");
    let y = MetricSpace::exact(&reg, ExactKind::ParityOracle(pred));
    let kind = ExactKind::ParityOracle(pred);
    let pts: Vec<Nat> = (0u32..60).map(Nat::from).filter(|n| kind.contains(&ExactPoint::Discrete(n.clone()))).collect();
    let half = rational(1, 2);
    let mut pairs = 0;
    let mut ok = true;
    for a in &pts {
        for b in &pts {
            let d = y.exact_distance(&reg, a, b).and_then(|d| d.as_rational().cloned());
            if d.is_some_and(|d| d < half) {
                pairs += 1;
                ok &= a % 2u32 == b % 2u32;
            }
        }
    }
    rec.emit(0, "metric", format!("pairs with d<1/2: {pairs}; f agrees on all: {ok}"))?;
    rec.emit(1, "lacombe", "not checked: failure of Lacombe continuity rests on X not being c.e.")?;
    Ok(if ok { Status::Yes } else { Status::No })
}
