//! Cantor pairing and the interleaving split used to index stream positions.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use super::Nat;

/// `⟨a,b⟩ = (a+b)(a+b+1)/2 + b`.
pub fn pair(a: &Nat, b: &Nat) -> Nat {
    let s: Nat = a + b;
    (&s * (&s + 1u32)) / 2u32 + b
}

pub fn unpair(n: &Nat) -> (Nat, Nat) {
    if let Some(small) = n.to_u64() {
        if small < 1 << 62 {
            let (a, b) = unpair_u64(small);
            return (BigUint::from(a), BigUint::from(b));
        }
    }
    // w = floor((sqrt(8n+1) - 1) / 2)
    let w: Nat = ((n * 8u32 + 1u32).sqrt() - 1u32) / 2u32;
    let t: Nat = (&w * (&w + 1u32)) / 2u32;
    let b = n - t;
    let a = w - &b;
    (a, b)
}

pub fn pair_u64(a: u64, b: u64) -> Option<u64> {
    let s = a.checked_add(b)?;
    let tri = (s as u128 * (s as u128 + 1)) / 2;
    u64::try_from(tri + b as u128).ok()
}

pub fn unpair_u64(n: u64) -> (u64, u64) {
    let disc = 8 * n as u128 + 1;
    let mut r = (disc as f64).sqrt() as u128;
    while r * r > disc {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= disc {
        r += 1;
    }
    let w = ((r - 1) / 2) as u64;
    let t = w * (w + 1) / 2;
    let b = n - t;
    (w - b, b)
}

/// `⟨a,b,c⟩ = ⟨a,⟨b,c⟩⟩`.
pub fn pair3(a: &Nat, b: &Nat, c: &Nat) -> Nat {
    pair(a, &pair(b, c))
}

pub fn unpair3(n: &Nat) -> (Nat, Nat, Nat) {
    let (a, bc) = unpair(n);
    let (b, c) = unpair(&bc);
    (a, b, c)
}

/// Splits `k` as `k + 1 = 2^p (2i + 1)` and returns `(i, p)`.
///
/// Position `p = 0` of every family member sits at `k = 2i`, so the first
/// element of member `i` is reached after linearly many tasks.
pub fn interleave_split(k: &Nat) -> (Nat, Nat) {
    let m = k + 1u32;
    let p = m.trailing_zeros().unwrap_or(0);
    let odd = m >> p;
    ((odd - 1u32) / 2u32, BigUint::from(p))
}

pub fn interleave_join(i: &Nat, p: &Nat) -> Nat {
    let p = p.to_usize().expect("interleave exponent fits in usize");
    ((i * 2u32 + 1u32) << p) - BigUint::one()
}


#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn n(v: u64) -> Nat {
        BigUint::from(v)
    }

    #[test]
    fn fixed_values() {
        assert_eq!(pair(&n(1), &n(2)), n(8));
        assert_eq!(pair(&n(2), &n(1)), n(7));
        assert_eq!(pair(&n(0), &n(0)), n(0));
        assert_eq!(unpair(&n(8)), (n(1), n(2)));
        assert_eq!(pair3(&n(0), &n(1), &n(1)), pair(&n(0), &n(4)));
    }

    #[test]
    fn big_values_use_the_exact_root() {
        let a = BigUint::from(u64::MAX) * 977u32;
        let b = BigUint::from(u64::MAX) * 31u32 + 5u32;
        assert_eq!(unpair(&pair(&a, &b)), (a, b));
    }

    #[test]
    fn interleave_layout() {
        assert_eq!(interleave_split(&n(0)), (n(0), n(0)));
        assert_eq!(interleave_split(&n(1)), (n(0), n(1)));
        assert_eq!(interleave_split(&n(2)), (n(1), n(0)));
        assert_eq!(interleave_split(&n(6)), (n(3), n(0)));
    }

    proptest! {
        #[test]
        fn pair_roundtrip(a in 0u64..1_000_000_000, b in 0u64..1_000_000_000) {
            let p = pair(&n(a), &n(b));
            prop_assert_eq!(unpair(&p), (n(a), n(b)));
            prop_assert_eq!(pair_u64(a, b).map(n), Some(p));
        }

        #[test]
        fn unpair_roundtrip(k in 0u64..u64::MAX / 4) {
            let (a, b) = unpair(&n(k));
            prop_assert_eq!(pair(&a, &b), n(k));
        }

        #[test]
        fn interleave_roundtrip(k in 0u64..1_000_000_000) {
            let (i, p) = interleave_split(&n(k));
            prop_assert_eq!(interleave_join(&i, &p), n(k));
        }
    }
}
