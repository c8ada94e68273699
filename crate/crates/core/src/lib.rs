//! Fat-point interpolation degrees over prime fields and an exact calculus of
//! Seshadri-constant bounds.
//!
//! * [`exact`]: rationals, prime fields, radical values with exact ordering.
//! * [`fatpoints`]: condition matrices, modular elimination, `alpha`.
//! * [`bounds`]: bound formulas, witness-driven upper bounds, derivation records.
//! * [`verify`]: property suites and witness certification.

pub mod exact;
pub mod bounds;
pub mod fatpoints;
pub mod verify;
