//! Building blocks shared by the solvers.
//!
//! - [`first_fit_on_top`]: fills bins with sorted profiles slot by slot and
//!   audits how full every passed-over bin is
//! - [`nfdh`]: next fit decreasing height shelves
//! - [`two_pile_strip`] and [`cut_strip`]: the two-pile strip layout and its
//!   conversion into a 2-structured solution

mod arrange;
mod first_fit;
mod nfdh;
mod strip;

pub use arrange::{shelves, side_by_side, stack_sorted};
pub use first_fit::{first_fit_on_top, BinFill, FillAudit, FitOutcome, FitParams, OpeningEvent};
pub use nfdh::nfdh;
pub use strip::{cut_strip, two_pile_strip, CutOutcome, StripItem, StripLayout};

use crate::model::{ModelError, TaskId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PrimitiveError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("structured input is invalid: {0}")]
    Structure(#[from] ModelError),
    #[error("task {id} ({width}x{height}) is too large for this routine: {reason}")]
    TaskTooLarge {
        id: TaskId,
        width: u64,
        height: u64,
        reason: String,
    },
    #[error("tasks need {needed} along an axis with room for {available}")]
    DoesNotFit { needed: u128, available: u128 },
    #[error("budget {budget} is too small: {reason}")]
    InfeasibleBudget { budget: u64, reason: String },
    #[error("strip layout cannot be cut: {0}")]
    MalformedLayout(String),
}
