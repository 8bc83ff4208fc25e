//! Seeded sampling of exact points for harnesses and the command line.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::reals::Rational;

use super::{ExactKind, ExactPoint};

/// Uniform over fractions `a/q` in `[lo, hi]` with `q ≤ max_den`.
pub fn sample_rational<R: Rng + ?Sized>(rng: &mut R, lo: &Rational, hi: &Rational, max_den: u64) -> Rational {
    let q = rng.gen_range(1..=max_den.max(1));
    let qr = Rational::from_integer(BigInt::from(q));
    let a_lo = (lo * &qr).ceil().to_integer();
    let a_hi = (hi * &qr).floor().to_integer();
    if a_hi < a_lo {
        return lo.clone();
    }
    let span = num_traits::ToPrimitive::to_i64(&(&a_hi - &a_lo)).unwrap_or(i64::MAX - 1);
    let a = a_lo + BigInt::from(rng.gen_range(0..=span));
    Rational::new(a, BigInt::from(q))
}

/// A point of the space; line points range over `[lo, hi]` (clipped to the domain).
pub fn sample_point<R: Rng + ?Sized>(
    kind: ExactKind,
    rng: &mut R,
    lo: &Rational,
    hi: &Rational,
    max_den: u64,
) -> ExactPoint {
    let zero = Rational::zero();
    let one = Rational::one();
    match kind {
        ExactKind::Rationals => ExactPoint::Line(sample_rational(rng, lo, hi, max_den)),
        ExactKind::UnitInterval => ExactPoint::Line(sample_rational(rng, &zero, &one, max_den)),
        ExactKind::UnitSquare => ExactPoint::Plane(
            sample_rational(rng, &zero, &one, max_den),
            sample_rational(rng, &zero, &one, max_den),
        ),
        ExactKind::Discrete => ExactPoint::Discrete(rng.gen_range(0u64..64).into()),
        ExactKind::ParityOracle(_) | ExactKind::ParityLine(_) => {
            // rejection sampling; the "none" oracle leaves only evens on the line
            for _ in 0..10_000 {
                let p = ExactPoint::Discrete(rng.gen_range(0u64..256).into());
                if kind.contains(&p) {
                    return p;
                }
            }
            ExactPoint::Discrete(0u32.into())
        }
    }
}

fn clamp_unit(x: Rational) -> Rational {
    if x.is_negative() {
        Rational::zero()
    } else if x > Rational::one() {
        Rational::one()
    } else {
        x
    }
}

/// A point at distance strictly below `delta > 0` from `p`.
pub fn perturb<R: Rng + ?Sized>(kind: ExactKind, p: &ExactPoint, delta: &Rational, rng: &mut R) -> ExactPoint {
    let mut unit = || Rational::new(BigInt::from(rng.gen_range(-999i64..=999)), BigInt::from(1000));
    match (kind, p) {
        (ExactKind::Rationals, ExactPoint::Line(x)) => ExactPoint::Line(x + unit() * delta),
        (ExactKind::UnitInterval, ExactPoint::Line(x)) => ExactPoint::Line(clamp_unit(x + unit() * delta)),
        (_, ExactPoint::Plane(x, y)) => {
            let h = delta / Rational::from_integer(BigInt::from(2));
            let dx = unit() * &h;
            let dy = unit() * &h;
            ExactPoint::Plane(clamp_unit(x + dx), clamp_unit(y + dy))
        }
        (_, ExactPoint::Discrete(n)) => {
            if *delta > Rational::one() && kind.contains(&ExactPoint::Discrete(n + 2u32)) {
                ExactPoint::Discrete(n + 2u32)
            } else {
                ExactPoint::Discrete(n.clone())
            }
        }
        (_, q) => q.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reals::rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_stay_in_range_and_perturbations_stay_close() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (lo, hi) = (rational(-10, 1), rational(10, 1));
        for _ in 0..500 {
            let ExactPoint::Line(x) = sample_point(ExactKind::Rationals, &mut rng, &lo, &hi, 50) else {
                panic!()
            };
            assert!(lo <= x && x <= hi);
            let d = rational(1, 7);
            let ExactPoint::Line(y) = perturb(ExactKind::Rationals, &ExactPoint::Line(x.clone()), &d, &mut rng) else {
                panic!()
            };
            assert!((y - x).abs() < d);
        }
    }
}
