//! Exact evaluators for Seshadri-constant bounds, witness-driven upper bounds
//! and the symmetrization derivation record.

pub mod chain;
pub mod formulas;
pub mod report;
pub mod sweep;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{ExactError, RadicalValue};
use crate::fatpoints::FatPointError;

pub use chain::{asymptotic_factor, symmetrization_chain, DerivationRecord};
pub use formulas::*;
pub use report::{best_bounds, best_bounds_with, BoundsReport};
pub use sweep::{eps_upper_from_witness, eps_upper_sweep, SweepReport, SweepRow};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("expected a lower or exact bound on the Seshadri constant, got {0:?}")]
    NotALowerBound(BoundKind),
    #[error("total multiplicity is zero")]
    ZeroMultiplicity,
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Engine(#[from] FatPointError),
}

/// Whether a value bounds the constant itself or its `(n-1)`-th power.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    Epsilon,
    EpsilonPower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    Lower,
    Upper,
    Exact,
    ConjecturalLower,
    ConjecturalExact,
}

impl BoundKind {
    pub fn is_lower(self) -> bool {
        !matches!(self, BoundKind::Upper)
    }

    pub fn is_upper(self) -> bool {
        matches!(self, BoundKind::Upper | BoundKind::Exact | BoundKind::ConjecturalExact)
    }

    pub fn is_conjectural(self) -> bool {
        matches!(self, BoundKind::ConjecturalLower | BoundKind::ConjecturalExact)
    }
}

/// Hypotheses a bound depends on. The first four are facts only the caller
/// can vouch for; the rest are arithmetic conditions checked from `r` and `L^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Assumption {
    #[serde(rename = "nagata")]
    NagataConjecture,
    #[serde(rename = "ns-generator")]
    NsGenerator,
    #[serde(rename = "char0")]
    Char0Surface,
    #[serde(rename = "very-ample")]
    VeryAmple,
    #[serde(rename = "r>=9")]
    RAtLeastNine,
    #[serde(rename = "r>9")]
    RAboveNine,
    #[serde(rename = "r>=L^n")]
    RAtLeastVolume,
    #[serde(rename = "r=s^n")]
    RIsPower,
    #[serde(rename = "rL^2-square")]
    RVolumeSquare,
}

impl Assumption {
    pub const USER_LEVEL: [Assumption; 4] =
        [Assumption::NagataConjecture, Assumption::NsGenerator, Assumption::Char0Surface, Assumption::VeryAmple];

    pub fn name(self) -> &'static str {
        match self {
            Assumption::NagataConjecture => "nagata",
            Assumption::NsGenerator => "ns-generator",
            Assumption::Char0Surface => "char0",
            Assumption::VeryAmple => "very-ample",
            Assumption::RAtLeastNine => "r>=9",
            Assumption::RAboveNine => "r>9",
            Assumption::RAtLeastVolume => "r>=L^n",
            Assumption::RIsPower => "r=s^n",
            Assumption::RVolumeSquare => "rL^2-square",
        }
    }

    /// Truth of an arithmetic condition; `None` for caller-level facts.
    pub fn check(self, n: usize, volume: u64, r: u64) -> Option<bool> {
        Some(match self {
            Assumption::RAtLeastNine => r >= 9,
            Assumption::RAboveNine => r > 9,
            Assumption::RAtLeastVolume => r >= volume,
            Assumption::RIsPower => exact_root(r, n as u32).is_some(),
            Assumption::RVolumeSquare => {
                r.checked_mul(volume).and_then(|v| exact_root(v, 2)).is_some()
            }
            _ => return None,
        })
    }
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Assumption {
    type Err = String;

    /// Only caller-level facts can be asserted by name.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Assumption::USER_LEVEL
            .into_iter()
            .find(|a| a.name() == s.trim())
            .ok_or_else(|| format!("unknown assumption {s:?} (expected one of nagata, ns-generator, char0, very-ample)"))
    }
}

/// `Some(s)` when `v = s^k`.
pub fn exact_root(v: u64, k: u32) -> Option<u64> {
    use num_integer::Roots;
    if k == 0 {
        return None;
    }
    let s = v.nth_root(k);
    (s.checked_pow(k) == Some(v)).then_some(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Source {
    #[serde(rename = "trivial")]
    Trivial,
    #[serde(rename = "nagata")]
    Nagata,
    #[serde(rename = "choodnovsky")]
    Choodnovsky,
    #[serde(rename = "main-theorem")]
    MainTheorem,
    #[serde(rename = "steffens")]
    Steffens,
    #[serde(rename = "tutaj")]
    Tutaj,
    #[serde(rename = "harbourne-piecewise")]
    HarbournePiecewise,
    #[serde(rename = "harbourne-surface")]
    HarbourneSurface,
    #[serde(rename = "harbourne-square")]
    HarbourneSquare,
    #[serde(rename = "sweep")]
    Sweep,
    /// A value given on the command line.
    #[serde(rename = "supplied")]
    Supplied,
}

/// A bound on a Seshadri constant in dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "BoundJson", try_from = "BoundJson")]
pub struct Bound {
    pub value: RadicalValue,
    pub quantity: Quantity,
    pub kind: BoundKind,
    pub n: usize,
    pub assumptions: BTreeSet<Assumption>,
    pub source: Source,
    /// Free-form parameters, e.g. `s=3,d=1`.
    pub detail: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct BoundJson {
    display: String,
    value: RadicalValue,
    quantity: Quantity,
    kind: BoundKind,
    n: usize,
    assumptions: BTreeSet<Assumption>,
    source: Source,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    detail: Option<String>,
}

impl From<Bound> for BoundJson {
    fn from(b: Bound) -> Self {
        BoundJson {
            display: b.value.to_string(),
            value: b.value,
            quantity: b.quantity,
            kind: b.kind,
            n: b.n,
            assumptions: b.assumptions,
            source: b.source,
            detail: b.detail,
        }
    }
}

impl TryFrom<BoundJson> for Bound {
    type Error = String;

    fn try_from(j: BoundJson) -> Result<Self, Self::Error> {
        if !j.value.is_positive() {
            return Err(format!("bound value must be positive, got {}", j.value));
        }
        Ok(Bound {
            value: j.value,
            quantity: j.quantity,
            kind: j.kind,
            n: j.n,
            assumptions: j.assumptions,
            source: j.source,
            detail: j.detail,
        })
    }
}

impl Bound {
    pub fn new(value: RadicalValue, kind: BoundKind, n: usize, source: Source) -> Self {
        debug_assert!(value.is_positive());
        Bound {
            value,
            quantity: Quantity::Epsilon,
            kind,
            n,
            assumptions: BTreeSet::new(),
            source,
            detail: None,
        }
    }

    pub fn assume(mut self, a: impl IntoIterator<Item = Assumption>) -> Self {
        self.assumptions.extend(a);
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn is_conjectural(&self) -> bool {
        self.kind.is_conjectural() || self.assumptions.contains(&Assumption::NagataConjecture)
    }

    /// The same bound on `epsilon^(n-1)`.
    pub fn to_power(&self) -> Bound {
        match self.quantity {
            Quantity::EpsilonPower => self.clone(),
            Quantity::Epsilon => Bound {
                value: self.value.nth_power(self.n as u32 - 1),
                quantity: Quantity::EpsilonPower,
                ..self.clone()
            },
        }
    }

    /// The same bound on `epsilon` itself.
    pub fn to_epsilon(&self) -> Result<Bound, ExactError> {
        match self.quantity {
            Quantity::Epsilon => Ok(self.clone()),
            Quantity::EpsilonPower => Ok(Bound {
                value: self.value.nth_root(self.n as u32 - 1)?,
                quantity: Quantity::Epsilon,
                ..self.clone()
            }),
        }
    }
}

/// What is known about the polarized variety: dimension, volume `L^n`, the
/// one-point constant and any facts the caller vouches for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceContext {
    pub n: usize,
    pub volume: u64,
    pub eps_point: Bound,
    #[serde(default)]
    pub facts: BTreeSet<Assumption>,
}

impl SurfaceContext {
    pub fn new(n: usize, volume: u64, eps_point: Bound) -> Result<Self, BoundsError> {
        if n < 2 {
            return Err(BoundsError::Range(format!("dimension must be at least 2, got {n}")));
        }
        if volume < 1 {
            return Err(BoundsError::Range("L^n must be at least 1".into()));
        }
        if eps_point.n != n {
            return Err(BoundsError::DimensionMismatch(eps_point.n, n));
        }
        Ok(SurfaceContext { n, volume, eps_point, facts: BTreeSet::new() })
    }

    /// The hyperplane class on `P^n`: volume 1, one-point constant exactly 1.
    pub fn projective(n: usize) -> Self {
        let eps = Bound::new(RadicalValue::one(), BoundKind::Exact, n, Source::Supplied);
        SurfaceContext { n, volume: 1, eps_point: eps, facts: BTreeSet::new() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assumption_names_round_trip() {
        for a in Assumption::USER_LEVEL {
            assert_eq!(a.name().parse::<Assumption>().unwrap(), a);
            assert_eq!(serde_json::to_string(&a).unwrap(), format!("\"{}\"", a.name()));
        }
        assert!("r>=9".parse::<Assumption>().is_err());
        assert!("nagta".parse::<Assumption>().is_err());
    }

    #[test]
    fn numeric_assumptions() {
        assert_eq!(Assumption::RIsPower.check(2, 1, 16), Some(true));
        assert_eq!(Assumption::RIsPower.check(3, 1, 16), Some(false));
        assert_eq!(Assumption::RVolumeSquare.check(2, 2, 8), Some(true));
        assert_eq!(Assumption::RAtLeastVolume.check(2, 4, 3), Some(false));
        assert_eq!(Assumption::VeryAmple.check(2, 4, 3), None);
        assert_eq!(exact_root(27, 3), Some(3));
        assert_eq!(exact_root(26, 3), None);
    }

    #[test]
    fn bound_json_carries_display() {
        let b = Bound::new(RadicalValue::ratio(1, 3), BoundKind::Exact, 2, Source::Nagata)
            .assume([Assumption::RIsPower]);
        let json = serde_json::to_value(&b).unwrap();
        assert_eq!(json["display"], "1/3");
        assert_eq!(json["source"], "nagata");
        assert_eq!(json["assumptions"][0], "r=s^n");
        let back: Bound = serde_json::from_value(json).unwrap();
        assert_eq!(back, b);
    }
}
