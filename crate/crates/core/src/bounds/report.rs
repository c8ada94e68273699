//! Collect every applicable bound for a context and pick the best of each side.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_integer::Roots;
use serde::{Deserialize, Serialize};

use super::formulas::*;
use super::{exact_root, Assumption, Bound, BoundsError, Source, SurfaceContext};
use crate::exact::ComparisonBudget;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejected {
    pub source: Source,
    pub missing: Vec<Assumption>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub context: SurfaceContext,
    pub r: u64,
    pub assumptions: BTreeSet<Assumption>,
    pub lower: Vec<Bound>,
    pub upper: Vec<Bound>,
    pub best_lower: Option<Bound>,
    pub best_upper: Option<Bound>,
    pub pinned: bool,
    pub rejected: Vec<Rejected>,
}

fn cmp(a: &Bound, b: &Bound) -> Result<Ordering, BoundsError> {
    Ok(a.value.cmp_with(&b.value, ComparisonBudget::default())?)
}

/// First maximal (or minimal) element; earlier entries win ties.
fn extreme(bounds: &[Bound], want: Ordering) -> Result<Option<Bound>, BoundsError> {
    let mut best: Option<&Bound> = None;
    for b in bounds {
        if best.map_or(Ok(true), |cur| cmp(b, cur).map(|o| o == want))? {
            best = Some(b);
        }
    }
    Ok(best.cloned())
}

fn harbourne_window(r: u64) -> u64 {
    let root = r.sqrt();
    let ceil = if root * root == r { root } else { root + 1 };
    ceil + 1
}

/// Best piecewise bound over `1 <= d <= ceil(sqrt r) + 1`, `1 <= s <= r`.
pub fn best_harbourne_piecewise(r: u64, eps_point: &Bound) -> Result<Bound, BoundsError> {
    let mut all = Vec::new();
    for d in 1..=harbourne_window(r) {
        for s in 1..=r {
            all.push(harbourne_piecewise(r, s, d, eps_point)?);
        }
    }
    Ok(extreme(&all, Ordering::Greater)?.expect("window is nonempty"))
}

/// Best surface bound over `1 <= d <= ceil(sqrt r) + 1`, `1 <= s <= r d`.
pub fn best_harbourne_surface(r: u64, volume: u64) -> Result<Bound, BoundsError> {
    let mut all = Vec::new();
    for d in 1..=harbourne_window(r) {
        for s in 1..=r * d {
            all.push(harbourne_surface(r, s, d, volume)?);
        }
    }
    Ok(extreme(&all, Ordering::Greater)?.expect("window is nonempty"))
}

fn missing(b: &Bound, ctx: &SurfaceContext, r: u64, allowed: &BTreeSet<Assumption>) -> Vec<Assumption> {
    b.assumptions
        .iter()
        .copied()
        .filter(|a| match a.check(ctx.n, ctx.volume, r) {
            Some(holds) => !holds,
            None => !allowed.contains(a) && !ctx.facts.contains(a),
        })
        .collect()
}

/// All lower and upper bounds for `r` very general points that hold under
/// `allowed`, in a fixed evaluator order. `extra_upper` adds engine bounds.
pub fn best_bounds_with(
    ctx: &SurfaceContext,
    r: u64,
    allowed: &BTreeSet<Assumption>,
    extra_upper: &[Bound],
) -> Result<BoundsReport, BoundsError> {
    if r < 1 {
        return Err(BoundsError::Range("r must be at least 1".into()));
    }
    let n = ctx.n;
    let eps = &ctx.eps_point;
    let mut candidates_lower = Vec::new();
    let mut candidates_upper = vec![trivial_upper(n, ctx.volume, r)?];
    if let Some(s) = exact_root(r, n as u32) {
        candidates_lower.push(square_case_lower(n, s, eps)?);
    }
    if n == 2 {
        if r >= 9 {
            candidates_lower.push(nagata_implies_surface_lower(r, eps)?);
        }
        if r > 9 {
            candidates_lower.push(tutaj_lower(r, eps)?);
        }
        candidates_lower.push(best_harbourne_piecewise(r, eps)?);
        candidates_lower.push(best_harbourne_surface(r, ctx.volume)?);
        if let Some(b) = harbourne_square_maximal(r, ctx.volume)? {
            candidates_lower.push(b.clone());
            candidates_upper.push(b);
        }
    }
    candidates_upper.extend(extra_upper.iter().cloned());

    let mut rejected = Vec::new();
    let mut keep = |list: Vec<Bound>| {
        let mut kept = Vec::new();
        for b in list {
            let miss = missing(&b, ctx, r, allowed);
            if miss.is_empty() {
                kept.push(b);
            } else {
                rejected.push(Rejected { source: b.source, missing: miss });
            }
        }
        kept
    };
    let lower = keep(candidates_lower);
    let upper = keep(candidates_upper);
    let best_lower = extreme(&lower, Ordering::Greater)?;
    let best_upper = extreme(&upper, Ordering::Less)?;
    let pinned = match (&best_lower, &best_upper) {
        (Some(l), Some(u)) => cmp(l, u)? == Ordering::Equal,
        _ => false,
    };
    Ok(BoundsReport {
        context: ctx.clone(),
        r,
        assumptions: allowed.clone(),
        lower,
        upper,
        best_lower,
        best_upper,
        pinned,
        rejected,
    })
}

pub fn best_bounds(ctx: &SurfaceContext, r: u64, allowed: &BTreeSet<Assumption>) -> Result<BoundsReport, BoundsError> {
    best_bounds_with(ctx, r, allowed, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RadicalValue;

    fn set(items: &[Assumption]) -> BTreeSet<Assumption> {
        items.iter().copied().collect()
    }

    #[test]
    fn steffens_context_pins_at_nine_points() {
        let ctx = SurfaceContext::new(2, 4, steffens_lower(4).unwrap()).unwrap();
        let with = set(&[Assumption::NagataConjecture, Assumption::NsGenerator, Assumption::Char0Surface]);
        let rep = best_bounds(&ctx, 9, &with).unwrap();
        assert!(rep.pinned);
        assert_eq!(rep.best_lower.unwrap().value, RadicalValue::ratio(2, 3));
        assert_eq!(rep.best_upper.unwrap().value, RadicalValue::ratio(2, 3));
        let without = set(&[Assumption::NsGenerator, Assumption::Char0Surface]);
        assert!(best_bounds(&ctx, 9, &without).unwrap().pinned);
        let rep = best_bounds(&ctx, 9, &BTreeSet::new()).unwrap();
        assert!(!rep.pinned);
    }

    #[test]
    fn plane_sixteen_points_pins_without_assumptions() {
        let rep = best_bounds(&SurfaceContext::projective(2), 16, &BTreeSet::new()).unwrap();
        assert!(rep.pinned);
        assert_eq!(rep.best_lower.unwrap().value, RadicalValue::ratio(1, 4));
    }

    #[test]
    fn plane_ten_points_is_not_pinned() {
        let ctx = SurfaceContext::projective(2);
        let rep = best_bounds(&ctx, 10, &BTreeSet::new()).unwrap();
        assert!(!rep.pinned);
        let best = rep.best_lower.unwrap();
        assert_eq!((best.value, best.source), (RadicalValue::ratio(3, 10), Source::HarbournePiecewise));
        assert_eq!(rep.best_upper.unwrap().value, "10^(1/2)/10".parse().unwrap());
        assert!(rep.lower.iter().all(|b| !b.is_conjectural()));

        let rep = best_bounds(&ctx, 10, &set(&[Assumption::Char0Surface, Assumption::VeryAmple])).unwrap();
        let best = rep.best_lower.unwrap();
        assert_eq!(best.source, Source::Tutaj);
        assert_eq!(best.value, RadicalValue::root_of(12, 121, 1, 2).unwrap());
        let surface = rep.lower.iter().find(|b| b.source == Source::HarbourneSurface).unwrap();
        assert_eq!(surface.value, RadicalValue::ratio(5, 16));

        let rep = best_bounds(&ctx, 10, &set(&[Assumption::NagataConjecture])).unwrap();
        assert_eq!(rep.best_lower.unwrap().source, Source::Nagata);
        assert!(rep.pinned);
    }

    #[test]
    fn lower_never_exceeds_upper() {
        let facts = set(&[Assumption::NsGenerator, Assumption::Char0Surface, Assumption::VeryAmple]);
        for volume in 1..=16u64 {
            let ctx = SurfaceContext::new(2, volume, steffens_lower(volume).unwrap()).unwrap();
            for r in 1..=36u64 {
                let rep = best_bounds(&ctx, r, &facts).unwrap();
                for l in rep.lower.iter().filter(|b| !b.is_conjectural()) {
                    for u in &rep.upper {
                        assert!(cmp(l, u).unwrap().is_le(), "L^2={volume} r={r} {:?} > {:?}", l.source, u.source);
                    }
                }
            }
        }
    }
}
