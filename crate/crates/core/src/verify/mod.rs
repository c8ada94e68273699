//! Property suites tying the engine to the bound formulas, and witness certification.

pub mod certify;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::bounds::{choodnovsky_exact, exact_root, remark_alpha_floor, BoundsError};
use crate::exact::ExactError;
use crate::fatpoints::{
    alpha, alpha_generic, expected_alpha, FatPointError, FatPointScheme, GenericProtocol, MultiplicityVector,
    PointConfiguration,
};

pub use certify::{certify, order_by_substitution, Certificate, Violation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("{0} is not an n-th power for n = {1}")]
    NotPower(u64, usize),
    #[error("result carries no witness")]
    NoWitness,
    #[error(transparent)]
    Engine(#[from] FatPointError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// One checked inequality `lhs relation rhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseOutcome {
    pub label: String,
    pub inputs: Value,
    pub lhs: Value,
    pub relation: String,
    pub rhs: Value,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub attempted: usize,
    pub passed: usize,
    pub cases: Vec<CaseOutcome>,
    pub counterexamples: Vec<CaseOutcome>,
    /// Kept out of the serialized report so identical runs print identical bytes.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SuiteReport {
    fn from_cases(suite: &str, cases: Vec<CaseOutcome>, start: Instant) -> Self {
        let counterexamples: Vec<CaseOutcome> = cases.iter().filter(|c| !c.holds).cloned().collect();
        SuiteReport {
            suite: suite.to_string(),
            attempted: cases.len(),
            passed: cases.len() - counterexamples.len(),
            cases,
            counterexamples,
            wall_time: start.elapsed(),
        }
    }

    pub fn ok(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

fn at_most(label: String, inputs: Value, lhs: u64, rhs: u64) -> CaseOutcome {
    CaseOutcome { label, inputs, lhs: lhs.into(), relation: "<=".into(), rhs: rhs.into(), holds: lhs <= rhs }
}

/// For `r = s^n` and uniform `m <= m_max`: the generic degree is at least
/// `ceil(r m / s^(n-1))`, the floor implied by the exact constant `1/s`.
pub fn suite_remark_alpha(
    n: usize,
    r_list: &[u64],
    m_max: u32,
    protocol: &GenericProtocol,
) -> Result<SuiteReport, VerifyError> {
    let start = Instant::now();
    let mut jobs = Vec::new();
    for &r in r_list {
        let s = exact_root(r, n as u32).ok_or(VerifyError::NotPower(r, n))?;
        for m in 1..=m_max {
            jobs.push((r, s, m));
        }
    }
    let cases = jobs
        .into_par_iter()
        .map(|(r, s, m)| {
            let mults = MultiplicityVector::uniform(r as usize, m);
            let eps_power = choodnovsky_exact(n, s)?.to_power().value;
            let floor = remark_alpha_floor(&eps_power, mults.as_slice())?;
            let floor: u64 = floor.try_into().expect("floor fits in u64");
            let a = alpha_generic(n, &mults, protocol)?.alpha as u64;
            Ok(CaseOutcome {
                label: format!("n={n} r={r} m={m}"),
                inputs: json!({"n": n, "r": r, "s": s, "m": m}),
                lhs: floor.into(),
                relation: "<=".into(),
                rhs: a.into(),
                holds: floor <= a,
            })
        })
        .collect::<Result<Vec<_>, VerifyError>>()?;
    Ok(SuiteReport::from_cases("remark-alpha", cases, start))
}

/// A special configuration to compare against generic points.
#[derive(Clone, Debug)]
pub struct SemicontinuityCase {
    pub label: String,
    pub scheme: FatPointScheme,
}

fn special(label: &str, n: usize, points: &[Vec<i64>], m: u32) -> SemicontinuityCase {
    let config = PointConfiguration::from_integers(n, points, true).expect("fixture points are valid");
    let mults = MultiplicityVector::uniform(points.len(), m);
    SemicontinuityCase { label: label.into(), scheme: FatPointScheme::new(config, mults).expect("lengths agree") }
}

pub fn default_semicontinuity_cases() -> Vec<SemicontinuityCase> {
    vec![
        special("collinear-3", 2, &[vec![1, 0, 0], vec![1, 1, 0], vec![1, 2, 0]], 1),
        special("collinear-5", 2, &(0..5).map(|t| vec![1, t, 0]).collect::<Vec<_>>(), 1),
        special("three-of-four-collinear-double", 2, &[vec![1, 0, 0], vec![1, 1, 0], vec![1, 2, 0], vec![0, 0, 1]], 2),
        special("six-on-conic", 2, &(0..6).map(|t| vec![1, t, t * t]).collect::<Vec<_>>(), 1),
        special(
            "coplanar-4-in-p3",
            3,
            &[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![1, 1, 1, 0]],
            1,
        ),
    ]
}

/// Specializing points never raises the degree: `alpha(special) <= alpha(generic)`.
pub fn suite_semicontinuity(cases: &[SemicontinuityCase], protocol: &GenericProtocol) -> Result<SuiteReport, VerifyError> {
    let start = Instant::now();
    let outcomes = cases
        .par_iter()
        .map(|case| {
            let s = &case.scheme;
            let special = alpha(s, &protocol.primes, protocol.mode)?.alpha as u64;
            let generic = alpha_generic(s.n(), &s.mults, protocol)?.alpha as u64;
            Ok(at_most(
                case.label.clone(),
                json!({"n": s.n(), "r": s.r(), "mults": s.mults}),
                special,
                generic,
            ))
        })
        .collect::<Result<Vec<_>, VerifyError>>()?;
    Ok(SuiteReport::from_cases("semicontinuity", outcomes, start))
}

/// Uniform vectors `1..=m_max`, a ramp `1 + (i mod m_max)` and a vector
/// concentrated on the first point; duplicates removed, order kept.
pub fn default_axiom_samples(r: usize, m_max: u32) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = (1..=m_max).map(|m| vec![m; r]).collect();
    out.push((0..r).map(|i| 1 + (i as u32 % m_max)).collect());
    let mut single = vec![0; r];
    if r > 0 {
        single[0] = m_max;
    }
    out.push(single);
    let mut seen = BTreeSet::new();
    out.retain(|v| seen.insert(v.clone()));
    out
}

fn leq(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Monotonicity, subadditivity and the counting bound on sampled vectors.
pub fn suite_alpha_axioms(
    n: usize,
    samples: &[Vec<u32>],
    protocol: &GenericProtocol,
) -> Result<SuiteReport, VerifyError> {
    let start = Instant::now();
    let mut needed: BTreeSet<Vec<u32>> = samples.iter().cloned().collect();
    for (i, a) in samples.iter().enumerate() {
        for b in &samples[i..] {
            needed.insert(a.iter().zip(b).map(|(x, y)| x + y).collect());
        }
    }
    let alphas: BTreeMap<Vec<u32>, u64> = needed
        .into_par_iter()
        .map(|v| {
            let res = alpha_generic(n, &MultiplicityVector(v.clone()), protocol)?;
            Ok((v, res.alpha as u64))
        })
        .collect::<Result<_, VerifyError>>()?;
    let r = samples.first().map_or(0, Vec::len);
    let mut cases = Vec::new();
    for a in samples {
        let bound = expected_alpha(n, a)? as u64;
        cases.push(at_most(format!("counting {a:?}"), json!({"n": n, "r": r, "a": a}), alphas[a], bound));
    }
    for (i, a) in samples.iter().enumerate() {
        for (j, b) in samples.iter().enumerate().skip(i) {
            let inputs = json!({"n": n, "r": r, "a": a, "b": b});
            if i == j {
                cases.push(at_most(format!("reflexive {a:?}"), inputs.clone(), alphas[a], alphas[a]));
            } else if leq(a, b) {
                cases.push(at_most(format!("monotone {a:?} <= {b:?}"), inputs.clone(), alphas[a], alphas[b]));
            } else if leq(b, a) {
                cases.push(at_most(format!("monotone {b:?} <= {a:?}"), inputs.clone(), alphas[b], alphas[a]));
            }
            let sum: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            cases.push(at_most(format!("subadditive {a:?} + {b:?}"), inputs, alphas[&sum], alphas[a] + alphas[b]));
        }
    }
    Ok(SuiteReport::from_cases("axioms", cases, start))
}

/// The default harness: `n = 2` with `r <= 10`, `m <= 5` and `n = 3` with
/// `r <= 10`, `m <= 2`.
pub fn default_suites(protocol: &GenericProtocol) -> Result<Vec<SuiteReport>, VerifyError> {
    let mut floors = suite_remark_alpha(2, &[1, 4, 9], 5, protocol)?;
    let three = suite_remark_alpha(3, &[1, 8], 2, protocol)?;
    floors.cases.extend(three.cases);
    floors.counterexamples.extend(three.counterexamples);
    floors.attempted += three.attempted;
    floors.passed += three.passed;
    floors.wall_time += three.wall_time;

    let semi = suite_semicontinuity(&default_semicontinuity_cases(), protocol)?;

    let mut axioms: Option<SuiteReport> = None;
    let scales = (2..=10).map(|r| (2usize, r, 5u32)).chain((2..=10).map(|r| (3usize, r, 2u32)));
    for (n, r, m_max) in scales {
        let rep = suite_alpha_axioms(n, &default_axiom_samples(r, m_max), protocol)?;
        axioms = Some(match axioms {
            None => rep,
            Some(mut acc) => {
                acc.cases.extend(rep.cases);
                acc.counterexamples.extend(rep.counterexamples);
                acc.attempted += rep.attempted;
                acc.passed += rep.passed;
                acc.wall_time += rep.wall_time;
                acc
            }
        });
    }
    Ok(vec![floors, semi, axioms.expect("at least one axiom scale")])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::PrimeField;

    fn protocol() -> GenericProtocol {
        GenericProtocol { primes: PrimeField::defaults()[..2].to_vec(), trials: 1, ..Default::default() }
    }

    #[test]
    fn degree_floor_is_tight_on_four_points() {
        let rep = suite_remark_alpha(2, &[4], 3, &protocol()).unwrap();
        assert!(rep.ok());
        assert_eq!(rep.attempted, 3);
        assert!(rep.cases.iter().all(|c| c.lhs == c.rhs));
        assert_eq!(suite_remark_alpha(2, &[5], 1, &protocol()).unwrap_err(), VerifyError::NotPower(5, 2));
    }

    #[test]
    fn semicontinuity_defaults_hold() {
        let rep = suite_semicontinuity(&default_semicontinuity_cases(), &protocol()).unwrap();
        assert!(rep.ok(), "{:?}", rep.counterexamples);
        let c3 = &rep.cases[0];
        assert_eq!((c3.lhs.as_u64(), c3.rhs.as_u64()), (Some(1), Some(2)));
        let conic = rep.cases.iter().find(|c| c.label == "six-on-conic").unwrap();
        assert_eq!((conic.lhs.as_u64(), conic.rhs.as_u64()), (Some(2), Some(3)));
    }

    #[test]
    fn axioms_include_reflexive_edge() {
        let rep = suite_alpha_axioms(2, &default_axiom_samples(4, 1), &protocol()).unwrap();
        assert!(rep.ok());
        assert!(rep.cases.iter().any(|c| c.label.starts_with("reflexive")));
        let rep = suite_alpha_axioms(2, &[vec![1, 1, 1, 1], vec![2, 2, 2, 2]], &protocol()).unwrap();
        let mono = rep.cases.iter().find(|c| c.label.starts_with("monotone")).unwrap();
        assert_eq!((mono.lhs.as_u64(), mono.rhs.as_u64()), (Some(2), Some(4)));
    }

    #[test]
    fn report_json_omits_wall_time() {
        let rep = suite_alpha_axioms(2, &[vec![1, 1]], &protocol()).unwrap();
        let json = serde_json::to_value(&rep).unwrap();
        assert!(json.get("wall_time").is_none());
        assert_eq!(json["attempted"], json["passed"]);
    }
}
