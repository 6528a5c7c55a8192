//! Instance generators: 3-Partition reductions, the integrality-gap fixture
//! and seeded random families.

mod gap;
mod random;
mod reduction;

pub use gap::gen_gap;
pub use random::{gen_random, Family, SplitMix64};
pub use reduction::{gen_3part_short, gen_3part_squares, LeungParams, ThreePartitionInfo};

use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("invalid numbers: {0}")]
    InvalidNumbers(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}
