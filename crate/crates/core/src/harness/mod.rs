//! Verification harness: theorem checkers, orbit reduction and the census.

pub mod census;
pub mod orbit;
pub mod theorems;

use thiserror::Error;

use crate::arrangement::ArrangementError;
use crate::charpoly::Overflow;
use crate::counting::CountError;
use crate::derivations::LogError;
use crate::field::FieldError;
use crate::lattice::LatticeError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("|A| = {size} is below the threshold 2q-2 = {threshold}")]
    BelowThreshold { size: usize, threshold: usize },
    #[error("chi(A, {at}) = {value} is not zero")]
    ChiNonzero { at: i64, value: i64 },
    #[error("precondition not met: {0}")]
    PreconditionMismatch(String),
    #[error("freeness of {0} could not be decided")]
    Undetermined(String),
    #[error("work of {needed} exceeds the ceiling {ceiling}")]
    CeilingExceeded { needed: u64, ceiling: u64 },
    #[error("could not build thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Log(#[from] LogError),
    #[error(transparent)]
    Overflow(#[from] Overflow),
}
