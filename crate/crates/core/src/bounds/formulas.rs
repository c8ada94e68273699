//! Closed-form bounds.

use num_bigint::BigInt;
use num_integer::Roots;

use super::{exact_root, Assumption, Bound, BoundKind, BoundsError, Source};
use crate::exact::{ComparisonBudget, RadicalValue, Rational};

fn rat(n: u64, d: u64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn require(cond: bool, what: impl FnOnce() -> String) -> Result<(), BoundsError> {
    if cond {
        Ok(())
    } else {
        Err(BoundsError::Range(what()))
    }
}

fn require_lower(b: &Bound) -> Result<(), BoundsError> {
    if b.kind.is_lower() {
        Ok(())
    } else {
        Err(BoundsError::NotALowerBound(b.kind))
    }
}

/// Lower kind inherited from a one-point input.
fn lower_kind(inputs: &[&Bound]) -> BoundKind {
    if inputs.iter().any(|b| b.is_conjectural()) {
        BoundKind::ConjecturalLower
    } else {
        BoundKind::Lower
    }
}

fn scaled(eps_point: &Bound, factor: &RadicalValue, source: Source) -> Bound {
    Bound::new(eps_point.value.mul(factor), lower_kind(&[eps_point]), eps_point.n, source)
        .assume(eps_point.assumptions.iter().copied())
}

/// `(L^n / r)^(1/n)`, valid for every set of `r` points.
pub fn trivial_upper(n: usize, volume: u64, r: u64) -> Result<Bound, BoundsError> {
    require(n >= 2 && volume >= 1 && r >= 1, || format!("trivial upper bound needs n >= 2, L^n >= 1, r >= 1 (n={n}, L^n={volume}, r={r})"))?;
    let value = RadicalValue::power(&rat(volume, r), &rat(1, n as u64))?;
    Ok(Bound::new(value, BoundKind::Upper, n, Source::Trivial))
}

/// `1/sqrt(r)` for the plane; proven when `r` is a square.
pub fn nagata_conjectured(r: u64) -> Result<Bound, BoundsError> {
    require(r >= 9, || format!("needs r >= 9, got {r}"))?;
    let value = RadicalValue::power(&rat(1, r), &rat(1, 2))?;
    Ok(if exact_root(r, 2).is_some() {
        Bound::new(value, BoundKind::Exact, 2, Source::Nagata).assume([Assumption::RAtLeastNine, Assumption::RIsPower])
    } else {
        Bound::new(value, BoundKind::ConjecturalExact, 2, Source::Nagata)
            .assume([Assumption::RAtLeastNine, Assumption::NagataConjecture])
    })
}

/// `1/s` at `s^n` very general points of `P^n`.
pub fn choodnovsky_exact(n: usize, s: u64) -> Result<Bound, BoundsError> {
    require(n >= 2 && s >= 1, || format!("needs n >= 2 and s >= 1 (n={n}, s={s})"))?;
    Ok(Bound::new(RadicalValue::from_rational(&rat(1, s)), BoundKind::Exact, n, Source::Choodnovsky)
        .assume([Assumption::RIsPower]))
}

/// Product of a one-point bound on `X` and an `r`-point bound on `P^n`.
pub fn combine_main_theorem(eps_point: &Bound, eps_projective: &Bound) -> Result<Bound, BoundsError> {
    if eps_point.n != eps_projective.n {
        return Err(BoundsError::DimensionMismatch(eps_point.n, eps_projective.n));
    }
    require_lower(eps_point)?;
    require_lower(eps_projective)?;
    let a = eps_point.to_epsilon()?;
    let b = eps_projective.to_epsilon()?;
    Ok(Bound::new(a.value.mul(&b.value), lower_kind(&[&a, &b]), a.n, Source::MainTheorem)
        .assume(a.assumptions.iter().chain(&b.assumptions).copied()))
}

/// `eps_point / s` at `r = s^n`.
pub fn square_case_lower(n: usize, s: u64, eps_point: &Bound) -> Result<Bound, BoundsError> {
    require(s >= 1, || "needs s >= 1".into())?;
    if eps_point.n != n {
        return Err(BoundsError::DimensionMismatch(eps_point.n, n));
    }
    require_lower(eps_point)?;
    let eps = eps_point.to_epsilon()?;
    Ok(scaled(&eps, &RadicalValue::from_rational(&rat(1, s)), Source::Choodnovsky).assume([Assumption::RIsPower]))
}

/// `eps_point / sqrt(r)` on a surface, conditional on the plane conjecture
/// unless `r` is a square.
pub fn nagata_implies_surface_lower(r: u64, eps_point: &Bound) -> Result<Bound, BoundsError> {
    require(r >= 9, || format!("needs r >= 9, got {r}"))?;
    surface_input(eps_point)?;
    let factor = RadicalValue::power(&rat(1, r), &rat(1, 2))?;
    let b = scaled(eps_point, &factor, Source::Nagata).assume([Assumption::RAtLeastNine]);
    Ok(if exact_root(r, 2).is_some() {
        b.assume([Assumption::RIsPower])
    } else {
        Bound { kind: BoundKind::ConjecturalLower, ..b }.assume([Assumption::NagataConjecture])
    })
}

fn surface_input(eps_point: &Bound) -> Result<(), BoundsError> {
    if eps_point.n != 2 {
        return Err(BoundsError::DimensionMismatch(eps_point.n, 2));
    }
    require_lower(eps_point)
}

/// `floor(sqrt(L^2))` at a very general point, for an ample generator of the
/// Neron-Severi group of a complex surface.
pub fn steffens_lower(volume: u64) -> Result<Bound, BoundsError> {
    require(volume >= 1, || "L^2 must be at least 1".into())?;
    Ok(Bound::new(RadicalValue::from_integer(volume.sqrt() as i64), BoundKind::Lower, 2, Source::Steffens)
        .assume([Assumption::Char0Surface, Assumption::NsGenerator]))
}

/// `eps_point * (12 / (12 r + 1))^(1/2)` for `r > 9` over the complex numbers.
pub fn tutaj_lower(r: u64, eps_point: &Bound) -> Result<Bound, BoundsError> {
    require(r > 9, || format!("needs r > 9, got {r}"))?;
    surface_input(eps_point)?;
    let factor = RadicalValue::power(&rat(12, 12 * r + 1), &rat(1, 2))?;
    Ok(scaled(eps_point, &factor, Source::Tutaj).assume([Assumption::Char0Surface, Assumption::RAboveNine]))
}

/// `(s/(rd)) eps_point` when `s^2 <= r d^2`, else `(d/s) eps_point`.
pub fn harbourne_piecewise(r: u64, s: u64, d: u64, eps_point: &Bound) -> Result<Bound, BoundsError> {
    require(1 <= s && s <= r && d >= 1, || format!("needs 1 <= s <= r and d >= 1 (r={r}, s={s}, d={d})"))?;
    surface_input(eps_point)?;
    let factor = if s * s <= r * d * d { rat(s, r * d) } else { rat(d, s) };
    Ok(scaled(eps_point, &RadicalValue::from_rational(&factor), Source::HarbournePiecewise)
        .with_detail(format!("s={s},d={d}")))
}

/// `s/(rd)` when `s^2 <= r d^2 L^2`, else `d L^2 / s`; for very ample `L` and `r >= L^2`.
pub fn harbourne_surface(r: u64, s: u64, d: u64, volume: u64) -> Result<Bound, BoundsError> {
    require(r >= 1 && s >= 1 && d >= 1 && volume >= 1, || format!("needs r, s, d, L^2 >= 1 (r={r}, s={s}, d={d}, L^2={volume})"))?;
    let value = if s * s <= r * d * d * volume { rat(s, r * d) } else { rat(d * volume, s) };
    Ok(Bound::new(RadicalValue::from_rational(&value), BoundKind::Lower, 2, Source::HarbourneSurface)
        .assume([Assumption::VeryAmple, Assumption::RAtLeastVolume])
        .with_detail(format!("s={s},d={d}")))
}

/// `sqrt(L^2 / r)` exactly when `r L^2` is a square and `r >= L^2` (very ample `L`).
pub fn harbourne_square_maximal(r: u64, volume: u64) -> Result<Option<Bound>, BoundsError> {
    require(r >= 1 && volume >= 1, || "needs r, L^2 >= 1".into())?;
    let square = r.checked_mul(volume).and_then(|v| exact_root(v, 2));
    if square.is_none() || r < volume {
        return Ok(None);
    }
    let value = RadicalValue::power(&rat(volume, r), &rat(1, 2))?;
    Ok(Some(Bound::new(value, BoundKind::Exact, 2, Source::HarbourneSquare).assume([
        Assumption::VeryAmple,
        Assumption::RVolumeSquare,
        Assumption::RAtLeastVolume,
    ])))
}

/// `ceil(eps_power * sum m_i)`: the least degree a form with these
/// multiplicities can have, given a lower bound on `epsilon^(n-1)`.
pub fn remark_alpha_floor(eps_power: &RadicalValue, mults: &[u32]) -> Result<BigInt, BoundsError> {
    let total: u64 = mults.iter().map(|&m| m as u64).sum();
    let scaled = eps_power.mul_rational(&Rational::from_integer(BigInt::from(total)));
    Ok(scaled.ceil(ComparisonBudget::default())?)
}
