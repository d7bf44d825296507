//! The `mckay` command line: job specifications, document output (JSON, DOT,
//! text) and exit codes.

mod document;
mod dot;
mod job;
mod run;

pub use document::{
    ArrowEntry, Metadata, NamedCut, QuiverDocument, Verdict, VertexEntry, SCHEMA_VERSION,
};
pub use dot::serialize_dot;
pub use job::{parse_diagonal, parse_lattice, Cli, Command, Format, JobSpec};
pub use run::{classify, oracle_rows, render, run, Classification, OracleRow, RunOutput};

use thiserror::Error;

use crate::cuts::CutError;
use crate::lattice::LatticeError;
use crate::mckay_quiver::QuiverError;
use crate::monomial_group::GroupError;
use crate::skew::SkewError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_SPEC: i32 = 2;
pub const EXIT_NOT_ADMISSIBLE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;
pub const EXIT_DISCREPANCY: i32 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("invalid job: {0}")]
    Spec(String),
    #[error("not admissible: {0}")]
    Admissibility(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) => EXIT_INVALID_SPEC,
            CliError::Admissibility(_) => EXIT_NOT_ADMISSIBLE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::SingularMatrix(_) | LatticeError::NotHermite { .. } => {
                CliError::Spec(e.to_string())
            }
            LatticeError::NotAdmissible { .. } => CliError::Admissibility(e.to_string()),
            LatticeError::CheckDisagreement { .. } => CliError::Internal(e.to_string()),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::Lattice(l) => l.into(),
            GroupError::ExplosionGuard { .. } | GroupError::DecompositionFailure(_) => {
                CliError::Internal(e.to_string())
            }
            _ => CliError::Spec(e.to_string()),
        }
    }
}

impl From<QuiverError> for CliError {
    fn from(e: QuiverError) -> Self {
        match e {
            QuiverError::Group(g) => g.into(),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<CutError> for CliError {
    fn from(e: CutError) -> Self {
        match e {
            CutError::CriterionFailed { .. } | CutError::NotDivisible(_) => {
                CliError::Admissibility(e.to_string())
            }
            CutError::TooLarge { .. }
            | CutError::UnknownArrow(_)
            | CutError::NotInvariant { .. } => CliError::Spec(e.to_string()),
            CutError::InternalCriterionFailure(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<SkewError> for CliError {
    fn from(e: SkewError) -> Self {
        match e {
            SkewError::Quiver(q) => q.into(),
            SkewError::Cut(c) => c.into(),
            SkewError::NotInvariant { .. }
            | SkewError::InvalidCut
            | SkewError::NoComplement(_)
            | SkewError::Unsupported(_) => CliError::Spec(e.to_string()),
            SkewError::Divisible(_) => CliError::Admissibility(e.to_string()),
            SkewError::NonIntegralMultiplicity { .. }
            | SkewError::Invariant(_)
            | SkewError::IsoSearchExhausted(_) => CliError::Internal(e.to_string()),
        }
    }
}
