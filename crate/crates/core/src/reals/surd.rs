//! Exact sums `q₀ + Σ cᵢ·√gᵢ` with rational `q₀, cᵢ` and integer radicands.
//!
//! Radicands are kept pairwise independent (no `gᵢ·gⱼ` is a perfect square),
//! so equal values have equal representations. Signs are decided
//! algebraically for up to two radicals; beyond that by rigorous interval
//! refinement, which settles every nonzero value it is given enough bits for.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Surd {
    rational: Rational,
    roots: BTreeMap<BigUint, Rational>,
}

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

fn perfect_sqrt(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// `m = f²·g` with small square factors pulled out.
fn split_square(mut m: BigUint) -> (BigUint, BigUint) {
    let mut f = BigUint::one();
    for p in SMALL_PRIMES {
        let p2 = BigUint::from(p * p);
        while (&m % &p2).is_zero() {
            m /= &p2;
            f *= p;
        }
    }
    if let Some(r) = perfect_sqrt(&m) {
        return (f * r, BigUint::one());
    }
    (f, m)
}

fn rat(n: BigInt, d: BigInt) -> Rational {
    Rational::new(n, d)
}

impl Surd {
    pub fn zero() -> Surd {
        Surd::from(Rational::zero())
    }

    /// `√q` for `q ≥ 0`.
    pub fn sqrt(q: &Rational) -> Surd {
        assert!(!q.is_negative(), "square root of a negative rational");
        if q.is_zero() {
            return Surd::zero();
        }
        let p = q.numer().magnitude().clone();
        let d = q.denom().magnitude().clone();
        // √(p/d) = √(p·d) / d
        let (f, g) = split_square(&p * &d);
        let coeff = rat(BigInt::from(f), BigInt::from(d));
        let mut s = Surd::zero();
        s.add_root(g, coeff);
        s
    }

    fn add_root(&mut self, g: BigUint, c: Rational) {
        if c.is_zero() {
            return;
        }
        if g.is_one() {
            self.rational += c;
            return;
        }
        // merge with an existing radicand h when g·h is a square: √g = (s/h)·√h
        let mut target = None;
        for h in self.roots.keys() {
            if *h == g {
                target = Some((h.clone(), Rational::one()));
                break;
            }
            if let Some(s) = perfect_sqrt(&(&g * h)) {
                target = Some((h.clone(), rat(BigInt::from(s), BigInt::from(h.clone()))));
                break;
            }
        }
        let (h, scale) = target.unwrap_or((g, Rational::one()));
        let entry = self.roots.entry(h.clone()).or_insert_with(Rational::zero);
        *entry += c * scale;
        if entry.is_zero() {
            self.roots.remove(&h);
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.roots.is_empty().then_some(&self.rational)
    }

    pub fn radicals(&self) -> usize {
        self.roots.len()
    }

    pub fn scale(&self, c: &Rational) -> Surd {
        let mut out = Surd::from(&self.rational * c);
        for (g, k) in &self.roots {
            out.add_root(g.clone(), k * c);
        }
        out
    }

    /// Sign, or `None` when more than two radicals resist refinement.
    pub fn signum(&self) -> Option<Ordering> {
        let terms: Vec<(&BigUint, &Rational)> = self.roots.iter().collect();
        match terms.as_slice() {
            [] => Some(self.rational.cmp(&Rational::zero())),
            [(g, c)] => Some(sign1(&self.rational, c, g)),
            [(g, c), (h, e)] => Some(sign2(&self.rational, c, g, e, h)),
            _ => self.sign_by_refinement(),
        }
    }

    fn sign_by_refinement(&self) -> Option<Ordering> {
        for bits in [64u32, 256, 1024, 4096] {
            let (lo, hi) = self.enclosure(bits);
            if lo.is_positive() {
                return Some(Ordering::Greater);
            }
            if hi.is_negative() {
                return Some(Ordering::Less);
            }
        }
        None
    }

    /// Rational bounds `lo ≤ value ≤ hi` from `bits`-bit root approximations.
    fn enclosure(&self, bits: u32) -> (Rational, Rational) {
        let mut lo = self.rational.clone();
        let mut hi = self.rational.clone();
        let scale = BigUint::one() << bits;
        for (g, c) in &self.roots {
            let r = (g * &scale * &scale).sqrt();
            let below = rat(BigInt::from(r.clone()), BigInt::from(scale.clone()));
            let above = rat(BigInt::from(r + 1u32), BigInt::from(scale.clone()));
            if c.is_positive() {
                lo += c * &below;
                hi += c * &above;
            } else {
                lo += c * &above;
                hi += c * &below;
            }
        }
        (lo, hi)
    }

    pub fn try_cmp(&self, other: &Surd) -> Option<Ordering> {
        (self - other).signum()
    }

    pub fn try_min(&self, other: &Surd) -> Option<Surd> {
        Some(match self.try_cmp(other)? {
            Ordering::Greater => other.clone(),
            _ => self.clone(),
        })
    }

    /// A rational within strict `2^{-n}` of the value; dyadic unless the
    /// value is rational, so high-precision arithmetic avoids large gcds.
    pub fn approx(&self, n: u64) -> Rational {
        if self.roots.is_empty() {
            return self.rational.clone();
        }
        let k = self.roots.len() as u64 + 1;
        let log_k = 64 - k.leading_zeros() as u64;
        // every term is floored onto the grid 2^{-p}: k floors lose < 2^{-(n+2)}
        let p = n + 2 + log_k;
        let floor_at = |num: BigInt, den: &BigInt| num.div_floor(den);
        let mut sum = floor_at(self.rational.numer() << p, self.rational.denom());
        for (g, c) in &self.roots {
            let mag = c.abs().ceil().to_integer();
            // truncated roots lose < 2^{-(n+1)} in total
            let m = n + mag.bits() + log_k + 1;
            let r = BigInt::from((g << (2 * m)).sqrt());
            sum += floor_at((c.numer() * r) << p, &(c.denom() << m));
        }
        rat(sum, BigInt::one() << p)
    }

    pub fn to_f64(&self) -> f64 {
        let q = self.approx(60);
        q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
    }
}

/// Sign of `a + b√s` (`s > 1`).
fn sign1(a: &Rational, b: &Rational, s: &BigUint) -> Ordering {
    let zero = Rational::zero();
    let sa = a.cmp(&zero);
    let sb = b.cmp(&zero);
    if sb == Ordering::Equal || sa == sb {
        return if sa == Ordering::Equal { sb } else { sa };
    }
    if sa == Ordering::Equal {
        return sb;
    }
    let s = Rational::from(BigInt::from(s.clone()));
    match (a * a).cmp(&(b * b * s)) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

/// Sign of `a + b√s + c√t`.
fn sign2(a: &Rational, b: &Rational, s: &BigUint, c: &Rational, t: &BigUint) -> Ordering {
    let su = sign1(a, b, s);
    let sv = c.cmp(&Rational::zero());
    if sv == Ordering::Equal || su == sv {
        return if su == Ordering::Equal { sv } else { su };
    }
    if su == Ordering::Equal {
        return sv;
    }
    // opposite signs: compare u² = a² + b²s + 2ab√s with c²t
    let sr = Rational::from(BigInt::from(s.clone()));
    let tr = Rational::from(BigInt::from(t.clone()));
    let base = a * a + b * b * sr - c * c * tr;
    let cross = Rational::from(BigInt::from(2)) * a * b;
    match sign1(&base, &cross, s) {
        Ordering::Greater => su,
        Ordering::Less => sv,
        Ordering::Equal => Ordering::Equal,
    }
}

impl From<Rational> for Surd {
    fn from(q: Rational) -> Surd {
        Surd { rational: q, roots: BTreeMap::new() }
    }
}

impl std::ops::Add for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        let mut out = self.clone();
        out.rational += &rhs.rational;
        for (g, c) in &rhs.roots {
            out.add_root(g.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        self.scale(&-Rational::one())
    }
}

impl std::ops::Sub for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        self + &(-rhs)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rational)?;
        for (g, c) in &self.roots {
            let sign = if c.is_negative() { '-' } else { '+' };
            write!(f, " {sign} {}*sqrt({g})", c.abs())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn perfect_squares_collapse() {
        assert_eq!(Surd::sqrt(&q(9, 4)).as_rational(), Some(&q(3, 2)));
        assert_eq!(Surd::sqrt(&q(8, 1)), Surd::sqrt(&q(2, 1)).scale(&q(2, 1)));
        let s = &Surd::sqrt(&q(8, 1)) - &Surd::sqrt(&q(2, 1)).scale(&q(2, 1));
        assert_eq!(s.signum(), Some(Ordering::Equal));
    }

    #[test]
    fn merges_hidden_common_radicand() {
        // 1009² · 3 is not reduced by the small-prime sieve
        let big = Surd::sqrt(&q(1009 * 1009 * 3, 1));
        let small = Surd::sqrt(&q(3, 1)).scale(&q(1009, 1));
        assert_eq!((&big - &small).signum(), Some(Ordering::Equal));
    }

    #[test]
    fn two_root_signs() {
        // √2 + √3 vs √10: 5 + 2√6 ≈ 9.899 < 10
        let lhs = &Surd::sqrt(&q(2, 1)) + &Surd::sqrt(&q(3, 1));
        assert_eq!(lhs.try_cmp(&Surd::sqrt(&q(10, 1))), Some(Ordering::Less));
        assert_eq!(lhs.try_cmp(&Surd::sqrt(&q(9, 1))), Some(Ordering::Greater));
    }

    #[test]
    fn three_roots_by_refinement() {
        let s = &(&Surd::sqrt(&q(2, 1)) + &Surd::sqrt(&q(3, 1))) - &Surd::sqrt(&q(5, 1));
        assert_eq!(s.signum(), Some(Ordering::Greater));
    }

    proptest! {
        #[test]
        fn approx_is_within_bound(p in 1i64..10_000, d in 1i64..500, c in -50i64..50, n in 0u64..80) {
            let s = Surd::sqrt(&q(p, d)).scale(&q(c, 7));
            let a = s.approx(n);
            let err = &s - &Surd::from(a);
            let bound = Surd::from(Rational::new(BigInt::one(), BigInt::one() << n));
            prop_assert_eq!(err.try_cmp(&bound), Some(Ordering::Less));
            prop_assert_eq!((-&err).try_cmp(&bound), Some(Ordering::Less));
        }

        #[test]
        fn single_root_sign_agrees_with_floats(a in -1000i64..1000, b in -1000i64..1000, s in 2u64..500) {
            let v = &Surd::from(q(a, 13)) + &Surd::sqrt(&q(s as i64, 1)).scale(&q(b, 17));
            let f = a as f64 / 13.0 + b as f64 / 17.0 * (s as f64).sqrt();
            if f.abs() > 1e-9 {
                let expect = if f > 0.0 { Ordering::Greater } else { Ordering::Less };
                prop_assert_eq!(v.signum(), Some(expect));
            }
        }
    }
}
