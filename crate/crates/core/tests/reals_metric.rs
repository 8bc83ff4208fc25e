use computable_topology::kernel::builtins::{emit, Const, Diverge, Primitive};
use computable_topology::kernel::pairing::{pair, pair3};
use computable_topology::kernel::{nat, Fuel, Nat, Registry, State, StepProgram, StepResult};
use computable_topology::metric::*;
use computable_topology::numberings::{Decision, Verdict};
use computable_topology::reals::*;
use computable_topology::Result;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

const FUEL: Fuel = Fuel(100_000);

fn q(n: i64, d: i64) -> Rational {
    rational(n, d)
}

fn pow2(n: u64) -> Rational {
    dyadic(n)
}

/// `[lo, hi]` with `lo² ≤ x ≤ hi²` and `hi - lo ≤ 2^{-bits}`, by rational bisection.
fn sqrt_bracket(x: &Rational, bits: u64) -> (Rational, Rational) {
    let (mut lo, mut hi) = (Rational::zero(), x.clone().max(q(1, 1)));
    while &hi - &lo > pow2(bits) {
        let mid = (&lo + &hi) / q(2, 1);
        if &mid * &mid <= *x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// `|a - x| < eps` for every `x` in `[lo, hi]`.
fn within(a: &Rational, lo: &Rational, hi: &Rational, eps: &Rational) -> bool {
    (a - lo).abs() < *eps && (a - hi).abs() < *eps
}

fn approx(reg: &Registry, x: CauchyReal, n: u64) -> Rational {
    cauchy_approx(reg, x, n, FUEL).unwrap().expect("approximation within fuel")
}

fn term(reg: &Registry, l: LeftReal, n: u64) -> Rational {
    left_term(reg, l, n, FUEL).unwrap().expect("term within fuel")
}

/// `k ↦` a left-real code, built from the index.
#[derive(Clone, Debug)]
struct LeftFamily(fn(u64) -> Rational);

impl StepProgram for LeftFamily {
    fn step(&self, reg: &Registry, input: &Nat, _: State) -> Result<StepResult> {
        let k = computable_topology::kernel::small(input).min(4_096);
        Ok(StepResult::Halted(emit(Some(left_exact(reg, (self.0)(k)).0.name()))))
    }
}

/// `k ↦` a Cauchy name of an exact rational.
#[derive(Clone, Debug)]
struct RealSequence(fn(u64) -> Rational);

impl StepProgram for RealSequence {
    fn step(&self, reg: &Registry, input: &Nat, _: State) -> Result<StepResult> {
        let k = computable_topology::kernel::small(input).min(4_096);
        Ok(StepResult::Halted(rational_real(reg, (self.0)(k)).0.name()))
    }
}

#[test]
fn cq_decoding() {
    let n = |a, b, c| pair3(&nat(a), &nat(b), &nat(c));
    assert_eq!(cq_decode(&n(0, 0, 0)), q(0, 1));
    assert_eq!(cq_decode(&n(0, 1, 1)), q(1, 2));
    assert_eq!(cq_decode(&n(1, 3, 0)), q(-3, 1));
    for x in [q(-7, 3), q(0, 1), q(5, 8)] {
        assert_eq!(cq_decode(&cq_encode(&x)), x);
    }
}

#[test]
fn approximation_fixtures() {
    let reg = Registry::new();
    assert_eq!(approx(&reg, rational_real(&reg, q(0, 1)), 10), q(0, 1));
    let r2 = approx(&reg, sqrt_bisect(&reg, q(2, 1)), 10);
    assert!((&r2 * &r2 - q(2, 1)).abs() < q(3, 512));
    let stuck = CauchyReal(reg.register(Diverge));
    assert_eq!(cauchy_approx(&reg, stuck, 3, FUEL).unwrap(), None);
}

#[test]
fn arithmetic_fixtures() {
    let reg = Registry::new();
    let one = rational_real(&reg, q(1, 1));
    let zero = cauchy_sub(&reg, one, one);
    let m = cauchy_min(&reg, rational_real(&reg, q(1, 2)), rational_real(&reg, q(1, 3)));
    for n in 0..20 {
        assert!(approx(&reg, zero, n).abs() < pow2(n));
        assert!((approx(&reg, m, n) - q(1, 3)).abs() < pow2(n));
    }
    let r = sqrt_bisect(&reg, q(2, 1));
    let s = approx(&reg, cauchy_add(&reg, r, r), 8);
    let (lo, hi) = sqrt_bracket(&q(8, 1), 40);
    assert!(within(&s, &lo, &hi, &pow2(8)));
}

#[test]
fn strict_comparison_fixtures() {
    let reg = Registry::new();
    let (zero, one) = (rational_real(&reg, q(0, 1)), rational_real(&reg, q(1, 1)));
    assert_eq!(semidecide_lt(&reg, zero, one, Fuel(100)).unwrap(), Verdict::Yes);
    for fuel in [10, 1_000, 100_000] {
        assert_eq!(semidecide_lt(&reg, one, one, Fuel(fuel)).unwrap(), Verdict::NotYet);
    }
    // gap 1/6 > 2·2^{-n} from n = 4 on
    let (third, half) = (rational_real(&reg, q(1, 3)), rational_real(&reg, q(1, 2)));
    assert_eq!(semidecide_lt(&reg, third, half, Fuel(1_000)).unwrap(), Verdict::Yes);
    assert_eq!(race_lt(&reg, half, third, Fuel(1_000)).unwrap(), Some(std::cmp::Ordering::Greater));
}

#[test]
fn left_of_cauchy_fixtures() {
    let reg = Registry::new();
    let one = cauchy_to_left(&reg, rational_real(&reg, q(1, 1)));
    let zero = cauchy_to_left(&reg, rational_real(&reg, q(0, 1)));
    for n in 0..12 {
        // max_{k≤n}(x - 2^{-k}) on an exact constant is x - 2^{-n}
        assert_eq!(term(&reg, one, n), q(1, 1) - pow2(n));
        assert_eq!(term(&reg, zero, n), -pow2(n));
    }
    let r = cauchy_to_left(&reg, sqrt_bisect(&reg, q(2, 1)));
    for n in 0..20 {
        let t = term(&reg, r, n);
        assert!(t.is_negative() || &t * &t < q(2, 1));
    }
}

#[test]
fn suprema() {
    let reg = Registry::new();
    let single = left_sup(&reg, computable_topology::numberings::ce_finite(&reg, &[left_exact(&reg, q(1, 1)).0.name()]));
    let ts: Vec<Rational> = (0..300).map(|n| term(&reg, single, n)).collect();
    assert!(ts.iter().all(|t| *t < q(1, 1)));
    assert!(ts.iter().any(|t| *t > q(1, 1) - pow2(10)));

    let rising = left_sup(&reg, computable_topology::numberings::CeName(reg.register(LeftFamily(|k| q(1, 1) - pow2(k)))));
    let target = q(1, 1) - pow2(10);
    assert!((0..400).any(|n| term(&reg, rising, n) > target));

    let naturals = left_sup(&reg, computable_topology::numberings::CeName(reg.register(LeftFamily(|k| q(k as i64, 1)))));
    assert!((0..1_000).any(|n| term(&reg, naturals, n) > q(10, 1)));
}

#[test]
fn minima() {
    let reg = Registry::new();
    let (one, two) = (left_exact(&reg, q(1, 1)), left_exact(&reg, q(2, 1)));
    let same = left_min(&reg, one, one);
    let m = left_min(&reg, one, two);
    let inf = left_min(&reg, two, left_unbounded(&reg));
    for n in 0..30 {
        assert_eq!(term(&reg, same, n), term(&reg, one, n));
        assert!(term(&reg, m, n) < q(1, 1));
        assert!(term(&reg, inf, n) < q(2, 1));
    }
    assert!(term(&reg, m, 30) > q(1, 1) - pow2(10));
    assert!(term(&reg, inf, 30) > q(2, 1) - pow2(10));
}

#[test]
fn limits() {
    let reg = Registry::new();
    let r = sqrt_bisect(&reg, q(2, 1));
    let constant = limit(&reg, reg.register(Const(r.0.name())));
    let (lo, hi) = sqrt_bracket(&q(2, 1), 40);
    let ones = limit(&reg, reg.register(RealSequence(|k| q(1, 1) - pow2(k))));
    let zeros = limit(&reg, reg.register(RealSequence(pow2)));
    for n in 0..16 {
        assert!(within(&approx(&reg, constant, n), &lo, &hi, &pow2(n)));
        assert!((approx(&reg, ones, n) - q(1, 1)).abs() < pow2(n));
        assert!(approx(&reg, zeros, n).abs() < pow2(n));
    }
}

fn shipped_reals(reg: &Registry) -> Vec<CauchyReal> {
    let a = rational_real(reg, q(-5, 7));
    let b = sqrt_bisect(reg, q(3, 1));
    let c = exact_real(reg, Surd::sqrt(&q(5, 1)));
    vec![
        a,
        b,
        c,
        cauchy_add(reg, a, b),
        cauchy_sub(reg, b, c),
        cauchy_min(reg, b, c),
        limit(reg, reg.register(RealSequence(|k| q(1, 3) + pow2(k + 1)))),
    ]
}

#[test]
fn cauchy_modulus_on_shipped_constructors() {
    let reg = Registry::new();
    for x in shipped_reals(&reg) {
        let a: Vec<Rational> = (0..=20).map(|n| approx(&reg, x, n)).collect();
        for n in 0..=20 {
            for m in 0..=20 {
                assert!((&a[n] - &a[m]).abs() < pow2(n as u64) + pow2(m as u64));
            }
        }
    }
}

#[test]
fn limit_of_constant_embedding_codenotes() {
    let reg = Registry::new();
    for x in shipped_reals(&reg) {
        let l = limit(&reg, reg.register(Const(x.0.name())));
        for n in 0..16 {
            assert!((approx(&reg, l, n) - approx(&reg, x, n)).abs() < pow2(n) * q(2, 1));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lt_sound_and_complete(a in -1000i64..1000, gap in 1i64..1000) {
        let reg = Registry::new();
        let x = rational_real(&reg, q(a, 1 << 10));
        let y = rational_real(&reg, q(a, 1 << 10) + q(gap, 1 << 15));
        prop_assert_eq!(semidecide_lt(&reg, x, y, FUEL).unwrap(), Verdict::Yes);
        prop_assert_eq!(semidecide_lt(&reg, y, x, Fuel(2_000)).unwrap(), Verdict::NotYet);
        prop_assert_eq!(semidecide_lt(&reg, x, x, Fuel(2_000)).unwrap(), Verdict::NotYet);
    }

    #[test]
    fn left_terms_rise_below_the_value(n in 1i64..200, d in 1i64..50) {
        let reg = Registry::new();
        let x = q(n, d);
        let l = cauchy_to_left(&reg, sqrt_bisect(&reg, x.clone()));
        let (lo, _) = sqrt_bracket(&x, 40);
        let mut prev: Option<Rational> = None;
        for k in 0..15 {
            let t = term(&reg, l, k);
            prop_assert!(t.is_negative() || &t * &t < x);
            if let Some(p) = &prev { prop_assert!(*p <= t); }
            prev = Some(t);
        }
        prop_assert!(&lo - prev.unwrap() < q(1, 1000));
    }
}

fn line(x: Rational) -> ExactPoint {
    ExactPoint::Line(x)
}

fn name(reg: &Registry, s: &MetricSpace, p: ExactPoint) -> Nat {
    s.point_name(reg, &p).unwrap()
}

#[test]
fn distances() {
    let reg = Registry::new();
    let s = MetricSpace::rationals(&reg);
    let (a, b) = (name(&reg, &s, line(q(1, 2))), name(&reg, &s, line(q(1, 3))));
    let d = s.distance(&reg, &a, &b).unwrap();
    let dd = s.distance(&reg, &a, &a).unwrap();
    for n in 0..20 {
        assert!((approx(&reg, d, n) - q(1, 6)).abs() < pow2(n));
        assert!(approx(&reg, dd, n).abs() < pow2(n));
    }
    let disc = MetricSpace::discrete(&reg);
    let d = disc.distance(&reg, &nat(3), &nat(8)).unwrap();
    assert_eq!(approx(&reg, d, 5), q(1, 1));
}

#[test]
fn ball_membership_fixtures() {
    let reg = Registry::new();
    let s = MetricSpace::rationals(&reg);
    let b = ball(&reg, &s, &line(q(0, 1)), q(1, 1)).unwrap();
    let at = |x| name(&reg, &s, line(x));
    assert_eq!(ball_member(&reg, &s, &b, &at(q(0, 1)), FUEL).unwrap(), Verdict::Yes);
    assert_eq!(ball_member(&reg, &s, &b, &at(q(1, 1)), FUEL).unwrap(), Verdict::NotYet);
    let c = ball(&reg, &s, &line(q(1, 2)), q(1, 4)).unwrap();
    assert_eq!(ball_member(&reg, &s, &c, &at(q(2, 3)), FUEL).unwrap(), Verdict::Yes);
    let empty = ball(&reg, &s, &line(q(0, 1)), q(-1, 1)).unwrap();
    assert_eq!(ball_member(&reg, &s, &empty, &at(q(0, 1)), FUEL).unwrap(), Verdict::NotYet);
}

#[test]
fn formal_inclusion_fixtures() {
    let reg = Registry::new();
    let s = MetricSpace::rationals(&reg);
    let u = MetricSpace::unit_interval(&reg);
    let b = |s: &MetricSpace, c, r| ball(&reg, s, &line(c), r).unwrap();
    let exact = |s: &MetricSpace, x: &BallName, y: &BallName| {
        ball_formal_incl(&reg, s, x, y, InclusionMode::Exact, Fuel(0)).unwrap()
    };
    assert_eq!(exact(&s, &b(&s, q(0, 1), q(1, 1)), &b(&s, q(0, 1), q(2, 1))), Decision::Yes);
    assert_eq!(exact(&u, &b(&u, q(1, 2), q(2, 1)), &b(&u, q(1, 2), q(1, 1))), Decision::No);
    assert_eq!(exact(&s, &b(&s, q(1, 1), q(1, 1)), &b(&s, q(0, 1), q(3, 1))), Decision::Yes);
    // a radius only known through its approximations has no exact tier
    let c = name(&reg, &s, line(q(0, 1)));
    let irr = BallName::new(&c, sqrt_bisect(&reg, q(2, 1)));
    let big = b(&s, q(0, 1), q(2, 1));
    assert!(ball_formal_incl(&reg, &s, &irr, &big, InclusionMode::Exact, Fuel(0)).is_err());
    assert_eq!(
        ball_formal_incl(&reg, &s, &irr, &big, InclusionMode::Semidecide, FUEL).unwrap(),
        Decision::Yes
    );
}

#[test]
fn theta_fixtures() {
    let reg = Registry::new();
    let s = MetricSpace::rationals(&reg);
    let b = |c, r| ball(&reg, &s, &line(c), r).unwrap();
    let x = name(&reg, &s, line(q(1, 2)));
    let t = theta(&reg, &s, &x, &b(q(0, 1), q(1, 1)), &b(q(1, 1), q(1, 1))).unwrap();
    assert_eq!(approx(&reg, t, 30), q(1, 2));
    let r = q(3, 7);
    let c = b(q(1, 2), r.clone());
    let t = theta(&reg, &s, &x, &c, &c).unwrap();
    assert_eq!(exact_radius(&reg, t).unwrap().as_rational(), Some(&r));

    let u = MetricSpace::unit_interval(&reg);
    let z = name(&reg, &u, line(q(1, 1)));
    for eps in [q(1, 2), q(1, 10), q(1, 1000)] {
        let b1 = ball(&reg, &u, &line(q(1, 2)), q(1, 2) + &eps).unwrap();
        let b2 = ball(&reg, &u, &line(q(1, 1)), q(1, 1)).unwrap();
        let t = theta(&reg, &u, &z, &b1, &b2).unwrap();
        assert_eq!(exact_radius(&reg, t).unwrap().as_rational(), Some(&eps));
    }
}

fn first_emission(reg: &Registry, prog: computable_topology::ProgramIndex, arg: &Nat, k: u64) -> Nat {
    let v = reg.evaluate(prog, &pair(arg, &nat(k)), FUEL).unwrap();
    computable_topology::kernel::builtins::emitted(&v).expect("stream slot is filled")
}

#[test]
fn basis_streams() {
    let reg = Registry::new();
    let s = MetricSpace::rationals(&reg);
    let basis = balls_spreen_basis(&reg, &s);
    let seven = name(&reg, &s, line(q(7, 1)));
    for k in 0..4 {
        let b = BallName(first_emission(&reg, basis.g1, &seven, k));
        assert_eq!(b.center(), seven);
        assert_eq!(approx(&reg, b.radius(&reg).unwrap(), 20), q(1, 1));
    }

    let u = MetricSpace::unit_interval(&reg);
    let ub = balls_spreen_basis(&reg, &u);
    let z = name(&reg, &u, line(q(1, 1)));
    let eps = q(1, 10);
    let b1 = ball(&reg, &u, &line(q(1, 2)), q(1, 2) + &eps).unwrap();
    let b2 = ball(&reg, &u, &line(q(1, 1)), q(1, 1)).unwrap();
    let arg = pair(&z, &pair(&b1.0, &b2.0));
    for k in 0..4 {
        let b = BallName(first_emission(&reg, ub.g2, &arg, k));
        assert_eq!(b.center(), z);
        assert_eq!(exact_radius(&reg, b.radius(&reg).unwrap()).unwrap().as_rational(), Some(&eps));
    }
}

#[test]
fn third_lemma_fixtures() {
    let reg = Registry::new();
    let s = MetricSpace::rationals(&reg);
    let b = ball(&reg, &s, &line(q(0, 1)), q(1, 1)).unwrap();
    let x = name(&reg, &s, line(q(2, 5)));
    let z = name(&reg, &s, line(q(1, 2)));
    assert!(check_third_lemma(&reg, &s, &b, &x, &z).unwrap());
    assert!(check_third_lemma(&reg, &s, &b, &x, &x).unwrap());
}

/// `k ↦ c_Q(1 - 2^{-k})`.
fn one_from_below(k: &Nat) -> Nat {
    let k = computable_topology::kernel::small(k).min(4_096);
    cq_encode(&(rational(1, 1) - dyadic(k)))
}

#[test]
fn completion_fixtures() {
    let reg = Registry::new();
    let base = MetricSpace::rationals(&reg);
    let c = cauchy_completion(&reg, &base);
    let one = name(&reg, &c, line(q(1, 1)));
    let three = name(&reg, &c, line(q(3, 1)));
    let d = c.distance(&reg, &one, &three).unwrap();
    for k in 0..12 {
        assert!((approx(&reg, d, k) - q(2, 1)).abs() < pow2(k) * q(2, 1));
    }

    // a Cauchy name over ℚ is already a fast sequence of rational names
    let root2 = sqrt_bisect(&reg, q(2, 1)).0.name();
    let d = c.distance(&reg, &root2, &one).unwrap();
    let (lo, hi) = sqrt_bracket(&q(2, 1), 40);
    let (lo, hi) = (lo - q(1, 1), hi - q(1, 1));
    for k in 0..12 {
        assert!(within(&approx(&reg, d, k), &lo, &hi, &pow2(k)));
    }

    let rising = reg.register(Primitive { name: "one-from-below", f: one_from_below }).name();
    let d = c.distance(&reg, &rising, &one).unwrap();
    for k in 0..12 {
        assert!(approx(&reg, d, k).abs() < pow2(k));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn metric_axioms_at_precision(
        pts in proptest::collection::vec((-50i64..50, 1i64..20, -50i64..50, 1i64..20), 3),
        k in 0u64..16,
    ) {
        let reg = Registry::new();
        for s in [MetricSpace::rationals(&reg), MetricSpace::unit_square(&reg)] {
            let plane = matches!(s.exact_kind(), Some(ExactKind::UnitSquare));
            let names: Vec<Nat> = pts
                .iter()
                .map(|&(a, b, c, d)| {
                    let p = if plane {
                        let unit = |n: i64, m: i64| q(n.rem_euclid(m + 1), m);
                        ExactPoint::Plane(unit(a, b), unit(c, d))
                    } else {
                        line(q(a, b))
                    };
                    name(&reg, &s, p)
                })
                .collect();
            let d = |i: usize, j: usize| approx(&reg, s.distance(&reg, &names[i], &names[j]).unwrap(), k);
            let tol = pow2(k) * q(2, 1);
            prop_assert!(d(0, 0).abs() < tol);
            prop_assert!((d(0, 1) - d(1, 0)).abs() < tol);
            prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2) + pow2(k) * q(3, 1));
        }
    }

    #[test]
    fn formal_inclusion_implies_membership(
        c1 in -20i64..20, r1 in 1i64..20, c2 in -20i64..20, r2 in 1i64..40, p in -40i64..40,
    ) {
        let reg = Registry::new();
        let s = MetricSpace::rationals(&reg);
        let b1 = ball(&reg, &s, &line(q(c1, 4)), q(r1, 4)).unwrap();
        let b2 = ball(&reg, &s, &line(q(c2, 4)), q(r2, 4)).unwrap();
        let x = name(&reg, &s, line(q(p, 8)));
        if ball_formal_incl(&reg, &s, &b1, &b2, InclusionMode::Exact, Fuel(0)).unwrap() == Decision::Yes
            && ball_member(&reg, &s, &b1, &x, Fuel(10_000)).unwrap() == Verdict::Yes
        {
            prop_assert_eq!(ball_member(&reg, &s, &b2, &x, Fuel(10_000)).unwrap(), Verdict::Yes);
        }
    }
}
