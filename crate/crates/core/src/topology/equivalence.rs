//! Harnesses for basis equivalence and effective fineness. Neither searches
//! for translators; both check claimed translators on samples.

use crate::error::Result;
use crate::kernel::{Fuel, Nat, Registry};
use crate::numberings::{apply_realizer, sd_member, Decision, Realizer, SemiDecidableName, Verdict};

use super::FormalInclusion;

/// Name translations `f₁₂`, `f₂₁` between two numberings of one basis.
#[derive(Clone, Copy, Debug)]
pub struct Translation {
    pub forward: Realizer,
    pub backward: Realizer,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RoundTrip {
    pub confirmed: usize,
    pub refuted: usize,
    pub unknown: usize,
}

/// Checks `b ∼̊ f₂₁(f₁₂(b))` in both directions of the formal inclusion.
pub fn roundtrip(
    reg: &Registry,
    t: Translation,
    inc: &dyn FormalInclusion,
    samples: &[Nat],
    fuel: Fuel,
) -> Result<RoundTrip> {
    let mut out = RoundTrip::default();
    for b in samples {
        let back = apply_realizer(reg, t.forward, b, fuel)?
            .map(|m| apply_realizer(reg, t.backward, &m, fuel))
            .transpose()?
            .flatten();
        let Some(back) = back else {
            out.unknown += 1;
            continue;
        };
        match (inc.check(reg, b, &back, fuel)?, inc.check(reg, &back, b, fuel)?) {
            (Decision::Yes, Decision::Yes) => out.confirmed += 1,
            (Decision::No, _) | (_, Decision::No) => out.refuted += 1,
            _ => out.unknown += 1,
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Preservation {
    /// YES before and YES after translation.
    pub kept: usize,
    /// YES before, not confirmed after within the inflated budget.
    pub lost: usize,
    /// Not confirmed before but YES after.
    pub gained: usize,
}

/// Compares membership verdicts of paired opens, granting the translated
/// side `inflation` times the fuel.
pub fn verdicts_preserved(
    reg: &Registry,
    pairs: &[(SemiDecidableName, SemiDecidableName)],
    points: &[Nat],
    fuel: Fuel,
    inflation: u64,
) -> Result<Preservation> {
    let mut out = Preservation::default();
    let wide = Fuel(fuel.0.saturating_mul(inflation));
    for &(a, b) in pairs {
        for p in points {
            let before = sd_member(reg, a, p, fuel)? == Verdict::Yes;
            let after = sd_member(reg, b, p, if before { wide } else { fuel })? == Verdict::Yes;
            match (before, after) {
                (true, true) => out.kept += 1,
                (true, false) => out.lost += 1,
                (false, true) => out.gained += 1,
                (false, false) => {}
            }
        }
    }
    Ok(out)
}
