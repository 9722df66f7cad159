//! Colorful alternating hamiltonian cycles in triple systems and the
//! universal cycles they induce.

pub mod catalog;
pub mod construct;
pub mod cycle;
pub mod design;
pub mod error;
pub mod radius;
pub mod report;
pub mod search;
pub mod ucycle;

pub use cycle::{
    assemble, build_big, infer_joins, merge_cycles, verify_cah, BiGraph, ColoredCycle,
};
pub use design::{Block, GroupType, GroupedDesign, Point, SetSystem};
pub use error::{Error, Result};
pub use radius::{defect, from_ucycle, verify_radius, RadiusSequence};
pub use report::{VerificationReport, Violation, ViolationKind};
pub use ucycle::{blocks_of, from_cah, to_cah, verify_shift_ucycle, ShiftUcycle};

/// Exact rational numbers used by the bound formulas.
pub type Rational = num_rational::Ratio<i64>;
