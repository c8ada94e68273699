//! Fat point interpolation: condition matrices, modular elimination and the
//! minimal degree of a form with prescribed vanishing orders.

pub mod ah;
pub mod alpha;
pub mod conditions;
pub mod linalg;
pub mod monomial;
pub mod scheme;

use thiserror::Error;

pub use ah::{ah_double_point_status, expdim_table, AhStatus, ExpdimRow};
pub use alpha::{
    alpha, alpha_generic, alpha_over_rationals, condition_count, expected_alpha, AlphaResult, GenericProtocol,
    RunRecord, SearchMode, Witness,
};
pub use conditions::{actual_multiplicity, build_condition_matrix, ConditionMatrix};
pub use linalg::{Elimination, ModMatrix};
pub use monomial::MonomialBasis;
pub use scheme::{FatPointScheme, MultiplicityVector, PointConfiguration, Provenance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FatPointError {
    #[error("ambient dimension must be at least 1, got {0}")]
    Dimension(usize),
    #[error("point {point} has {found} coordinates, expected {expected}")]
    CoordinateCount { point: usize, expected: usize, found: usize },
    #[error("point {0} has all coordinates zero")]
    ZeroPoint(usize),
    #[error("points {0} and {1} coincide")]
    CoincidentPoints(usize, usize),
    #[error("configuration lives over F_{expected}, asked for F_{found}")]
    FieldMismatch { expected: u64, found: u64 },
    #[error("points do not reduce to distinct points modulo {0}")]
    BadReduction(u64),
    #[error("{points} points but {mults} multiplicities")]
    LengthMismatch { points: usize, mults: usize },
    #[error("degree must be at least 1, got {0}")]
    DegreeTooSmall(u32),
    #[error("configuration has no exact coordinates")]
    NotRational,
    #[error("zero form")]
    ZeroForm,
    #[error("form has {found} coefficients, expected {expected}")]
    FormLength { expected: usize, found: usize },
    #[error("degenerate scheme: all multiplicities are zero")]
    DegenerateScheme,
    #[error("no prime in the list gives a good reduction")]
    NoUsablePrime,
    #[error("protocol needs at least one prime and one trial")]
    NoTrials,
    #[error("double point table needs d >= 2, got {0}")]
    AhDegree(u32),
    #[error("double point table needs n >= 2, got {0}")]
    AhDimension(usize),
    #[error("{0}")]
    TooLarge(String),
}
